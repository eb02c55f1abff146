//! Canonical labeling of vertex-colored graphs.
//!
//! The search refines the color partition to an equitable one, then
//! individualizes vertices of the first non-singleton cell depth first. Every
//! discrete partition reached is a candidate labeling; the canonical one is the
//! candidate whose relabeled adjacency rows compare least. Two leaves with equal
//! relabeled graphs yield an automorphism, and automorphisms fixing the current
//! prefix pointwise prune children lying in an already explored orbit.
//!
//! Refinement, target-cell choice and child order are functions of the ordered
//! partition alone, never of the vertex labels, which is what makes the minimum
//! label-invariant.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{BitIter, LabeledGraph, VertexColoring};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CanonError {
    ColoringMismatch { vertices: usize, colored: usize },
}

impl fmt::Display for CanonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonError::ColoringMismatch { vertices, colored } => write!(
                f,
                "coloring covers {colored} vertices but the graph has {vertices}"
            ),
        }
    }
}

impl core::error::Error for CanonError {}

/// Unique representative of a colored graph's isomorphism class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    graph: LabeledGraph,
    coloring: VertexColoring,
}

impl CanonicalForm {
    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn coloring(&self) -> &VertexColoring {
        &self.coloring
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Rebuilds a form from previously serialized parts. The pair is only a
    /// genuine canonical form if it was produced by [`canonical_form`];
    /// callers re-canonicalize when that is in doubt.
    pub fn from_parts(graph: LabeledGraph, coloring: VertexColoring) -> Self {
        CanonicalForm { graph, coloring }
    }

    /// Byte serialization fed to [`hash_of`].
    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.graph.n();
        let mut out = Vec::with_capacity(1 + 8 * n + 4 * n);
        out.push(n as u8);
        for &row in self.graph.rows() {
            out.extend_from_slice(&row.to_le_bytes());
        }
        for &c in self.coloring.as_slice() {
            out.extend_from_slice(&c.to_le_bytes());
        }
        out
    }
}

/// 96-bit digest of a canonical form. Different digests imply non-isomorphic
/// sources; equal digests say nothing without comparing the forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HashValue(pub [u32; 3]);

const LANE_SEEDS: [u64; 3] = [0x243f_6a88_85a3_08d3, 0x1319_8a2e_0370_7344, 0xa409_3822_299f_31d0];

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn hash_of(c: &CanonicalForm) -> HashValue {
    let bytes = c.to_bytes();
    let mut out = [0u32; 3];
    for (lane, seed) in LANE_SEEDS.iter().enumerate() {
        let mut h = *seed;
        for chunk in bytes.chunks(8) {
            let mut word = [0u8; 8];
            word[..chunk.len()].copy_from_slice(chunk);
            h = mix64(h ^ u64::from_le_bytes(word)).wrapping_add(chunk.len() as u64);
        }
        h = mix64(h ^ bytes.len() as u64);
        out[lane] = (h >> 32) as u32 ^ h as u32;
    }
    HashValue(out)
}

/// Canonical form of `(g, coloring)` together with the labeling `perm`
/// (0-based, `perm[v]` is the canonical label of `v`) such that
/// `g.permuted(&perm)` equals the form's graph.
pub fn canonical_form(
    g: &LabeledGraph,
    coloring: &VertexColoring,
) -> Result<(CanonicalForm, Vec<usize>), CanonError> {
    let n = g.n();
    if coloring.len() != n {
        return Err(CanonError::ColoringMismatch { vertices: n, colored: coloring.len() });
    }

    // initial ordered partition: one cell per color, ascending
    let mut colors: Vec<u32> = coloring.as_slice().to_vec();
    colors.sort_unstable();
    colors.dedup();
    let cells: Vec<u64> = colors
        .iter()
        .map(|&c| (0..n).filter(|&v| coloring.color(v) == c).fold(0u64, |m, v| m | 1 << v))
        .collect();

    let mut search = Search { g, best: None, first: None, autos: Vec::new() };
    let mut cells = cells;
    let queue = cells.clone();
    refine(g, &mut cells, queue);
    let mut fixed = Vec::new();
    search.descend(cells, &mut fixed);

    let best = search.best.expect("search reaches at least one leaf");
    let mut canon_colors = coloring.as_slice().to_vec();
    canon_colors.sort_unstable();
    let form = CanonicalForm {
        graph: LabeledGraph::from_rows(best.rows),
        coloring: VertexColoring::new(canon_colors),
    };
    Ok((form, best.perm))
}

/// Canonical form under the uniform coloring.
pub fn canonical_graph(g: &LabeledGraph) -> (CanonicalForm, Vec<usize>) {
    canonical_form(g, &VertexColoring::uniform(g.n())).expect("uniform coloring matches")
}

pub fn is_isomorphic(g1: &LabeledGraph, g2: &LabeledGraph) -> bool {
    if g1.n() != g2.n() || g1.edge_count() != g2.edge_count() || g1.degree_key() != g2.degree_key() {
        return false;
    }
    canonical_graph(g1).0 == canonical_graph(g2).0
}

/// One `(form, hash)` record per input, in input order.
pub fn gen_can<'a, I>(graphs: I) -> Result<Vec<(CanonicalForm, HashValue)>, CanonError>
where
    I: IntoIterator<Item = (&'a LabeledGraph, &'a VertexColoring)>,
{
    graphs
        .into_iter()
        .map(|(g, c)| {
            let (form, _) = canonical_form(g, c)?;
            let h = hash_of(&form);
            Ok((form, h))
        })
        .collect()
}

struct Leaf {
    rows: Vec<u64>,
    perm: Vec<usize>,
}

struct Search<'a> {
    g: &'a LabeledGraph,
    best: Option<Leaf>,
    first: Option<Leaf>,
    autos: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn descend(&mut self, cells: Vec<u64>, fixed: &mut Vec<usize>) {
        let Some(target) = cells.iter().position(|c| c.count_ones() > 1) else {
            self.leaf(&cells);
            return;
        };
        let cell = cells[target];
        let mut explored: Vec<usize> = Vec::new();
        for v in BitIter(cell) {
            if !explored.is_empty() && self.same_orbit(v, &explored, fixed) {
                continue;
            }
            explored.push(v);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(1u64 << v);
            child.push(cell & !(1u64 << v));
            child.extend_from_slice(&cells[target + 1..]);
            refine(self.g, &mut child, vec![1u64 << v]);
            fixed.push(v);
            self.descend(child, fixed);
            fixed.pop();
        }
    }

    fn leaf(&mut self, cells: &[u64]) {
        let n = self.g.n();
        let mut perm = vec![0usize; n];
        for (pos, &c) in cells.iter().enumerate() {
            perm[c.trailing_zeros() as usize] = pos;
        }
        let rows = self.g.permuted(&perm).rows().to_vec();
        let leaf = Leaf { rows, perm };

        let Some(first) = &self.first else {
            self.first = Some(Leaf { rows: leaf.rows.clone(), perm: leaf.perm.clone() });
            self.best = Some(leaf);
            return;
        };
        if leaf.rows == first.rows {
            let auto = automorphism(&first.perm, &leaf.perm);
            self.autos.push(auto);
            return;
        }
        let best = self.best.as_ref().expect("set with first");
        match leaf.rows.cmp(&best.rows) {
            core::cmp::Ordering::Equal => {
                let auto = automorphism(&best.perm, &leaf.perm);
                self.autos.push(auto);
            }
            core::cmp::Ordering::Less => self.best = Some(leaf),
            core::cmp::Ordering::Greater => {}
        }
    }

    /// True if `v` shares an orbit with some explored vertex under the
    /// automorphisms found so far that fix `fixed` pointwise.
    fn same_orbit(&self, v: usize, explored: &[usize], fixed: &[usize]) -> bool {
        let n = self.g.n();
        let mut parent: Vec<usize> = (0..n).collect();
        let mut any = false;
        for a in &self.autos {
            if fixed.iter().any(|&x| a[x] != x) {
                continue;
            }
            any = true;
            for x in 0..n {
                union(&mut parent, x, a[x]);
            }
        }
        if !any {
            return false;
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&e| find(&mut parent, e) == rv)
    }
}

/// Automorphism sending each vertex of leaf `b` to the vertex of leaf `a`
/// carrying the same canonical label, i.e. `a⁻¹ ∘ b`.
fn automorphism(a: &[usize], b: &[usize]) -> Vec<usize> {
    let n = a.len();
    let mut a_inv = vec![0usize; n];
    for (v, &p) in a.iter().enumerate() {
        a_inv[p] = v;
    }
    (0..n).map(|v| a_inv[b[v]]).collect()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let ra = find(parent, a);
    let rb = find(parent, b);
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Refines `cells` to the coarsest equitable partition finer than it, using
/// `queue` as the initial splitters. Split cells are replaced in place by their
/// fragments ordered by ascending neighbor count into the splitter.
fn refine(g: &LabeledGraph, cells: &mut Vec<u64>, mut queue: Vec<u64>) {
    let mut head = 0;
    let mut counts: Vec<(u32, usize)> = Vec::with_capacity(g.n());
    let mut fragments: Vec<u64> = Vec::new();
    while head < queue.len() {
        let splitter = queue[head];
        head += 1;
        let mut i = 0;
        while i < cells.len() {
            let cell = cells[i];
            if cell & (cell - 1) == 0 {
                i += 1;
                continue;
            }
            counts.clear();
            for v in BitIter(cell) {
                counts.push(((g.row(v) & splitter).count_ones(), v));
            }
            let c0 = counts[0].0;
            if counts.iter().all(|&(c, _)| c == c0) {
                i += 1;
                continue;
            }
            counts.sort_unstable();
            fragments.clear();
            let mut current = counts[0].0;
            let mut mask = 0u64;
            for &(c, v) in counts.iter() {
                if c != current {
                    fragments.push(mask);
                    mask = 0;
                    current = c;
                }
                mask |= 1 << v;
            }
            fragments.push(mask);
            cells.splice(i..=i, fragments.iter().copied());
            queue.extend_from_slice(&fragments);
            i += fragments.len();
        }
        if head > 64 && head * 2 > queue.len() {
            queue.drain(..head);
            head = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, e: &[(usize, usize)]) -> LabeledGraph {
        LabeledGraph::from_edge_list(n, e).unwrap()
    }

    #[test]
    fn relabeled_paths_agree() {
        let a = g(3, &[(1, 2), (2, 3)]);
        let b = g(3, &[(2, 1), (1, 3)]);
        assert_eq!(canonical_graph(&a).0, canonical_graph(&b).0);
        assert!(is_isomorphic(&a, &b));
    }

    #[test]
    fn path_and_triangle_differ() {
        let p3 = g(3, &[(1, 2), (2, 3)]);
        let k3 = g(3, &[(1, 2), (2, 3), (1, 3)]);
        assert_ne!(canonical_graph(&p3).0, canonical_graph(&k3).0);
        assert!(!is_isomorphic(&p3, &k3));
    }

    #[test]
    fn permutation_reproduces_form() {
        let h = g(6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 4)]);
        let (form, perm) = canonical_graph(&h);
        assert_eq!(&h.permuted(&perm), form.graph());
    }

    #[test]
    fn coloring_mismatch() {
        let h = g(3, &[(1, 2)]);
        let err = canonical_form(&h, &VertexColoring::uniform(2)).unwrap_err();
        assert_eq!(err, CanonError::ColoringMismatch { vertices: 3, colored: 2 });
    }

    #[test]
    fn colors_separate_vertices() {
        // P3 with a colored end vs colored middle
        let p3 = g(3, &[(1, 2), (2, 3)]);
        let end = VertexColoring::new(vec![1, 0, 0]);
        let mid = VertexColoring::new(vec![0, 1, 0]);
        let (fe, pe) = canonical_form(&p3, &end).unwrap();
        let (fm, _) = canonical_form(&p3, &mid).unwrap();
        assert_ne!(fe, fm);
        // the color-1 vertex lands in the last position
        assert_eq!(pe[0], 2);
        assert_eq!(fe.coloring().as_slice(), &[0, 0, 1]);
    }

    #[test]
    fn hash_is_deterministic() {
        let h = g(5, &[(1, 2), (2, 3), (4, 5)]);
        let (f, _) = canonical_graph(&h);
        assert_eq!(hash_of(&f), hash_of(&f));
        assert_eq!(hash_of(&f), hash_of(&canonical_graph(&h.permuted(&[4, 3, 2, 1, 0])).0));
    }

    #[test]
    fn gen_can_records() {
        let p3 = g(3, &[(1, 2), (2, 3)]);
        let k3 = g(3, &[(1, 2), (2, 3), (1, 3)]);
        let u = VertexColoring::uniform(3);
        let out = gen_can([(&p3, &u), (&k3, &u)]).unwrap();
        assert_eq!(out.len(), 2);
        assert_ne!(out[0].0, out[1].0);
        let none: Vec<(&LabeledGraph, &VertexColoring)> = Vec::new();
        assert!(gen_can(none).unwrap().is_empty());
    }

    #[test]
    fn complete_and_empty_graphs_are_fast() {
        let pairs: Vec<_> = (1..=20).flat_map(|u| (u + 1..=20).map(move |v| (u, v))).collect();
        let k20 = g(20, &pairs);
        let (f, perm) = canonical_graph(&k20);
        assert_eq!(&k20.permuted(&perm), f.graph());
        let e20 = g(20, &[]);
        let (f, _) = canonical_graph(&e20);
        assert_eq!(f.edge_count(), 0);
    }
}
