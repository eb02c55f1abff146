//! Certificate checking that shares no code with the generator's distance
//! machinery: distances come from a plain depth-first walk over the witness
//! tree.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::canon::canonical_graph;
use crate::certificate::Certificate;
use crate::graph::LabeledGraph;
use crate::weights::WeightedTree;

/// The condition a violation breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Clause {
    /// Intervals: half-integral, pairwise disjoint, at most `k`.
    Intervals,
    /// Tree: binary, with one leaf per target vertex.
    Tree,
    /// Weights: inside the declared ranges and matching the tree.
    Weights,
    /// The reconstructed graph is isomorphic to the target.
    Reconstruction,
    /// Well-formedness of the record itself.
    Structure,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::Intervals => "A",
            Clause::Tree => "B",
            Clause::Weights => "C",
            Clause::Reconstruction => "D",
            Clause::Structure => "S",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub clause: Clause,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.clause, self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn fails(&self, clause: Clause) -> bool {
        self.violations.iter().any(|v| v.clause == clause)
    }

    fn push(&mut self, clause: Clause, detail: String) {
        self.violations.push(Violation { clause, detail });
    }
}

/// Distances from every labeled leaf to every other, `d[i][j]` for labels
/// `i + 1, j + 1`.
pub fn walk_distances(t: &WeightedTree) -> Vec<Vec<u64>> {
    let nv = t.vertex_count();
    let mut nbrs: Vec<Vec<(usize, u64)>> = vec![Vec::new(); nv];
    for &(a, b, w) in t.edges() {
        nbrs[a].push((b, w));
        nbrs[b].push((a, w));
    }
    let mut leaf_of = vec![usize::MAX; t.leaf_count()];
    for (v, l) in t.labels().iter().enumerate() {
        if let Some(l) = *l {
            leaf_of[l - 1] = v;
        }
    }
    let mut out = Vec::with_capacity(leaf_of.len());
    for &src in &leaf_of {
        let mut dist = vec![u64::MAX; nv];
        dist[src] = 0;
        let mut stack = vec![src];
        while let Some(v) = stack.pop() {
            for &(u, w) in &nbrs[v] {
                if dist[u] == u64::MAX {
                    dist[u] = dist[v] + w;
                    stack.push(u);
                }
            }
        }
        out.push(leaf_of.iter().map(|&x| dist[x]).collect());
    }
    out
}

/// The graph on target vertices joining `sigma[i], sigma[j]` whenever the
/// distance between leaves `i + 1, j + 1` lies in an interval. `None` when
/// `sigma` is not a permutation of the target vertices.
pub fn reconstruct(cert: &Certificate) -> Option<LabeledGraph> {
    let n = cert.target.n();
    if cert.sigma.len() != n || cert.tree.leaf_count() != n {
        return None;
    }
    let mut hit = vec![false; n];
    for &s in &cert.sigma {
        if s >= n || hit[s] {
            return None;
        }
        hit[s] = true;
    }
    let d = walk_distances(&cert.tree);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if cert.intervals.iter().any(|iv| iv.contains(d[i][j])) {
                pairs.push((cert.sigma[i] + 1, cert.sigma[j] + 1));
            }
        }
    }
    LabeledGraph::from_edge_list(n, &pairs).ok()
}

pub fn verify_certificate(cert: &Certificate) -> Verdict {
    let mut v = Verdict::default();
    let n = cert.target.n();

    // intervals
    if cert.intervals.is_empty() {
        v.push(Clause::Intervals, "no intervals".into());
    }
    if cert.intervals.len() > cert.k {
        v.push(Clause::Intervals, format!("{} intervals exceed k = {}", cert.intervals.len(), cert.k));
    }
    for iv in &cert.intervals {
        if !iv.is_half_integral() {
            v.push(Clause::Intervals, format!("interval {}/2..{}/2 is not half-integral", iv.lo2, iv.hi2));
        }
        if iv.lo2 > iv.hi2 {
            v.push(Clause::Intervals, format!("interval {}/2..{}/2 is empty", iv.lo2, iv.hi2));
        }
    }
    let mut sorted = cert.intervals.clone();
    sorted.sort();
    for w in sorted.windows(2) {
        if w[1].lo2 <= w[0].hi2 {
            v.push(Clause::Intervals, "intervals overlap".into());
        }
    }

    // tree shape
    let t = &cert.tree;
    if t.leaf_count() != n {
        v.push(Clause::Tree, format!("tree has {} leaves, target has {n} vertices", t.leaf_count()));
    }
    let mut degree = vec![0usize; t.vertex_count()];
    for &(a, b, _) in t.edges() {
        degree[a] += 1;
        degree[b] += 1;
    }
    for (x, &deg) in degree.iter().enumerate() {
        let leaf = t.labels()[x].is_some();
        if (leaf && deg != 1) || (!leaf && deg != 3) {
            v.push(Clause::Tree, format!("vertex {x} has degree {deg}"));
        }
    }

    // weights
    if cert.weights.len() != t.edges().len() {
        v.push(
            Clause::Weights,
            format!("{} weights for {} edges", cert.weights.len(), t.edges().len()),
        );
    } else if t.edges().iter().zip(&cert.weights).any(|(e, &w)| e.2 != w) {
        v.push(Clause::Weights, "weight vector disagrees with tree edge lengths".into());
    }
    for (e, &(a, b, w)) in t.edges().iter().enumerate() {
        let pendant = degree[a] == 1 || degree[b] == 1;
        if pendant && !cert.leaf_range.contains(w) {
            v.push(
                Clause::Weights,
                format!("leaf edge {} weight {w} outside {}..={}", e + 1, cert.leaf_range.lo, cert.leaf_range.hi),
            );
        }
        if !pendant && w != 0 && !cert.internal_range.contains(w) {
            v.push(
                Clause::Weights,
                format!(
                    "internal edge {} weight {w} outside {}..={}",
                    e + 1,
                    cert.internal_range.lo,
                    cert.internal_range.hi
                ),
            );
        }
    }

    // reconstruction
    match reconstruct(cert) {
        None => v.push(Clause::Structure, "leaf bijection is not a permutation of the target vertices".into()),
        Some(g) => {
            if canonical_graph(&g).0 != cert.target {
                v.push(Clause::Reconstruction, "reconstructed graph is not isomorphic to the target".into());
            } else if g != *cert.target.graph() {
                v.push(Clause::Structure, "leaf bijection does not map onto the target labeling".into());
            }
        }
    }
    if cert.constructed.n() != n {
        v.push(Clause::Structure, "constructed graph has the wrong vertex count".into());
    }
    v
}
