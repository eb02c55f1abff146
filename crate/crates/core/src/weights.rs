//! Edge-weighted trees, leaf-to-leaf paths and distances, and conversion of
//! arbitrary weighted trees into binary ones with identical leaf distances.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::trees::{index_tree, TreeError, UnrootedBinaryTree};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightError {
    VertexOutOfRange { vertex: usize, vertices: usize },
    LengthMismatch { expected: usize, found: usize },
    TooFewLeaves(usize),
    NotATree,
    UnlabeledLeaf(usize),
    BadLabels,
    Tree(TreeError),
}

impl fmt::Display for WeightError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightError::VertexOutOfRange { vertex, vertices } => {
                write!(f, "vertex {vertex} not in a tree of {vertices} vertices")
            }
            WeightError::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} edge weights, found {found}")
            }
            WeightError::TooFewLeaves(n) => write!(f, "tree has {n} leaves, need at least 2"),
            WeightError::NotATree => write!(f, "edge list is not a tree"),
            WeightError::UnlabeledLeaf(v) => write!(f, "leaf vertex {v} has no label"),
            WeightError::BadLabels => write!(f, "leaf labels are not exactly 1..=n"),
            WeightError::Tree(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for WeightError {}

impl From<TreeError> for WeightError {
    fn from(e: TreeError) -> Self {
        WeightError::Tree(e)
    }
}

/// Index of the unordered leaf pair `{u, v}` (0-based, `u < v`) in row-major
/// order over `n` leaves.
#[inline]
pub fn pair_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

/// Leaf pairs `(u, v)`, 0-based, in [`pair_index`] order.
pub fn leaf_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
}

/// Edges on the unique `s`–`t` path, as edge ids of `adj`.
///
/// `adj[v]` lists `(neighbor, edge id)` pairs. Breadth-first search from `s`
/// records predecessors, then the path is read back from `t`.
pub fn get_path_edges(
    adj: &[Vec<(usize, usize)>],
    s: usize,
    t: usize,
) -> Result<Vec<usize>, WeightError> {
    let n = adj.len();
    for x in [s, t] {
        if x >= n {
            return Err(WeightError::VertexOutOfRange { vertex: x, vertices: n });
        }
    }
    let mut visited = vec![false; n];
    let mut pred: Vec<(usize, usize)> = (0..n).map(|v| (v, usize::MAX)).collect();
    let mut queue = VecDeque::new();
    visited[s] = true;
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        if v == t {
            break;
        }
        for &(u, e) in &adj[v] {
            if !visited[u] {
                visited[u] = true;
                pred[u] = (v, e);
                queue.push_back(u);
            }
        }
    }
    if !visited[t] {
        return Err(WeightError::NotATree);
    }
    let mut path = Vec::new();
    let mut w = t;
    while pred[w].0 != w {
        path.push(pred[w].1);
        w = pred[w].0;
    }
    path.sort_unstable();
    Ok(path)
}

/// Integer edge weights of a binary tree, indexed like its edges (the
/// pendant edge of leaf `i` first, internal edges after).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightAssignment {
    weights: Vec<u64>,
}

impl WeightAssignment {
    pub fn new(weights: Vec<u64>) -> Self {
        WeightAssignment { weights }
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn scaled(&self, factor: u64) -> Self {
        WeightAssignment { weights: self.weights.iter().map(|w| w * factor).collect() }
    }
}

/// Distances between all leaf pairs of a weighted tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceTable {
    n: usize,
    d: Vec<u64>,
}

impl DistanceTable {
    pub fn from_pairs(n: usize, d: Vec<u64>) -> Self {
        debug_assert_eq!(d.len(), n * n.saturating_sub(1) / 2);
        DistanceTable { n, d }
    }

    pub fn leaves(&self) -> usize {
        self.n
    }

    /// Distance between 0-based leaves `u` and `v`; zero when equal.
    pub fn get(&self, u: usize, v: usize) -> u64 {
        match u.cmp(&v) {
            core::cmp::Ordering::Equal => 0,
            core::cmp::Ordering::Less => self.d[pair_index(self.n, u, v)],
            core::cmp::Ordering::Greater => self.d[pair_index(self.n, v, u)],
        }
    }

    /// Distances in [`pair_index`] order.
    pub fn as_slice(&self) -> &[u64] {
        &self.d
    }
}

/// Per-tree list of the edge indices on every leaf-to-leaf path, computed once
/// and reused for every weight assignment.
#[derive(Clone, Debug)]
pub struct PathCache {
    leaves: usize,
    edge_count: usize,
    offsets: Vec<u32>,
    edges: Vec<u16>,
}

impl PathCache {
    pub fn new(t: &UnrootedBinaryTree) -> Self {
        let n = t.leaf_count();
        let adj = t.adjacency();
        let mut offsets = Vec::with_capacity(n * (n - 1) / 2 + 1);
        let mut edges = Vec::new();
        offsets.push(0);
        for (u, v) in leaf_pairs(n) {
            let path = get_path_edges(&adj, u, v).expect("binary trees are connected");
            edges.extend(path.into_iter().map(|e| e as u16));
            offsets.push(edges.len() as u32);
        }
        PathCache { leaves: n, edge_count: t.edge_count(), offsets, edges }
    }

    pub fn leaves(&self) -> usize {
        self.leaves
    }

    pub fn pair_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Edge indices on the path of pair `p`.
    pub fn path(&self, p: usize) -> &[u16] {
        &self.edges[self.offsets[p] as usize..self.offsets[p + 1] as usize]
    }

    /// Fills `out` with the distance of every pair under `w`.
    pub fn distances_into(&self, w: &[u64], out: &mut Vec<u64>) {
        out.clear();
        out.extend((0..self.pair_count()).map(|p| self.path(p).iter().map(|&e| w[e as usize]).sum::<u64>()));
    }

    pub fn distances(&self, w: &WeightAssignment) -> Result<DistanceTable, WeightError> {
        if w.len() != self.edge_count {
            return Err(WeightError::LengthMismatch { expected: self.edge_count, found: w.len() });
        }
        let mut d = Vec::new();
        self.distances_into(w.as_slice(), &mut d);
        Ok(DistanceTable { n: self.leaves, d })
    }
}

pub fn leaf_distances(
    t: &UnrootedBinaryTree,
    w: &WeightAssignment,
) -> Result<DistanceTable, WeightError> {
    PathCache::new(t).distances(w)
}

/// Arbitrary edge-weighted tree with labeled leaves.
///
/// `labels[v]` is `Some(i)` when vertex `v` is leaf `i` (1-based). Every
/// degree-one vertex must carry a label and labels must be exactly `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedTree {
    vertex_count: usize,
    edges: Vec<(usize, usize, u64)>,
    labels: Vec<Option<usize>>,
}

impl WeightedTree {
    pub fn new(
        vertex_count: usize,
        edges: Vec<(usize, usize, u64)>,
        labels: Vec<Option<usize>>,
    ) -> Result<Self, WeightError> {
        if labels.len() != vertex_count {
            return Err(WeightError::LengthMismatch { expected: vertex_count, found: labels.len() });
        }
        if vertex_count == 0 || edges.len() + 1 != vertex_count {
            return Err(WeightError::NotATree);
        }
        let mut degree = vec![0usize; vertex_count];
        for &(a, b, _) in &edges {
            for x in [a, b] {
                if x >= vertex_count {
                    return Err(WeightError::VertexOutOfRange { vertex: x, vertices: vertex_count });
                }
                degree[x] += 1;
            }
            if a == b {
                return Err(WeightError::NotATree);
            }
        }
        let t = WeightedTree { vertex_count, edges, labels };
        // connectivity: with |E| = |V| - 1 this also rules out cycles
        let adj = t.adjacency();
        let mut seen = vec![false; vertex_count];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(u, _) in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        if count != vertex_count {
            return Err(WeightError::NotATree);
        }
        let leaves: Vec<usize> = (0..vertex_count).filter(|&v| degree[v] <= 1).collect();
        if leaves.len() < 2 {
            return Err(WeightError::TooFewLeaves(leaves.len()));
        }
        let mut seen_label = vec![false; leaves.len()];
        for &v in &leaves {
            match t.labels[v] {
                None => return Err(WeightError::UnlabeledLeaf(v)),
                Some(l) if l == 0 || l > leaves.len() || seen_label[l - 1] => {
                    return Err(WeightError::BadLabels)
                }
                Some(l) => seen_label[l - 1] = true,
            }
        }
        if t.labels.iter().flatten().count() != leaves.len() {
            return Err(WeightError::BadLabels);
        }
        Ok(t)
    }

    /// The binary tree `t` with weights `w`; leaf `i` becomes label `i + 1`.
    pub fn from_binary(t: &UnrootedBinaryTree, w: &WeightAssignment) -> Result<Self, WeightError> {
        if w.len() != t.edge_count() {
            return Err(WeightError::LengthMismatch { expected: t.edge_count(), found: w.len() });
        }
        let n = t.leaf_count();
        let edges = t.edges().iter().zip(w.as_slice()).map(|(&(a, b), &x)| (a, b, x)).collect();
        let labels = (0..t.vertex_count()).map(|v| (v < n).then_some(v + 1)).collect();
        WeightedTree::new(t.vertex_count(), edges, labels)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    pub fn labels(&self) -> &[Option<usize>] {
        &self.labels
    }

    pub fn leaf_count(&self) -> usize {
        self.labels.iter().flatten().count()
    }

    /// Vertex carrying leaf label `label` (1-based).
    pub fn leaf_vertex(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == Some(label))
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (e, &(a, b, _)) in self.edges.iter().enumerate() {
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b, _)| a == v || b == v).count()
    }

    /// Leaf distance table via path extraction, pairs in label order.
    pub fn leaf_distances(&self) -> DistanceTable {
        let n = self.leaf_count();
        let adj = self.adjacency();
        let vertex: Vec<usize> = (1..=n).map(|l| self.leaf_vertex(l).expect("labels validated")).collect();
        let d = leaf_pairs(n)
            .map(|(u, v)| {
                get_path_edges(&adj, vertex[u], vertex[v])
                    .expect("validated tree")
                    .into_iter()
                    .map(|e| self.edges[e].2)
                    .sum()
            })
            .collect();
        DistanceTable { n, d }
    }
}

/// Converts a weighted tree into a binary tree over the same leaf labels with
/// identical leaf distances.
///
/// Internal vertices of degree two are suppressed, the two incident edges
/// merging into one carrying the summed weight. A vertex with more than three
/// neighbors keeps two of them and hands the rest to a fresh vertex joined by
/// a zero-weight edge, repeating until every internal degree is three.
pub fn binarize(t: &WeightedTree) -> Result<(UnrootedBinaryTree, WeightAssignment), WeightError> {
    let n = t.leaf_count();
    if n < 2 {
        return Err(WeightError::TooFewLeaves(n));
    }
    let mut alive_edges: Vec<Option<(usize, usize, u64)>> = t.edges.iter().copied().map(Some).collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); t.vertex_count];
    for (e, &(a, b, _)) in t.edges.iter().enumerate() {
        incident[a].push(e);
        incident[b].push(e);
    }
    let mut alive_vertex = vec![true; t.vertex_count];
    let is_leaf = |v: usize| t.labels.get(v).copied().flatten().is_some();

    // suppress degree-two internal vertices
    for v in 0..t.vertex_count {
        if is_leaf(v) || incident[v].len() != 2 {
            continue;
        }
        let (e1, e2) = (incident[v][0], incident[v][1]);
        let (a1, b1, w1) = alive_edges[e1].take().expect("live edge");
        let (a2, b2, w2) = alive_edges[e2].take().expect("live edge");
        let x = if a1 == v { b1 } else { a1 };
        let y = if a2 == v { b2 } else { a2 };
        let e = alive_edges.len();
        alive_edges.push(Some((x, y, w1 + w2)));
        for (end, old) in [(x, e1), (y, e2)] {
            let slot = incident[end].iter().position(|&f| f == old).expect("incident");
            incident[end][slot] = e;
        }
        incident[v].clear();
        alive_vertex[v] = false;
    }

    // split high-degree vertices
    let mut v = 0;
    while v < incident.len() {
        if incident[v].len() > 3 {
            let fresh = incident.len();
            incident.push(Vec::new());
            alive_vertex.push(true);
            let moved: Vec<usize> = incident[v].drain(2..).collect();
            for &e in &moved {
                let (a, b, w) = alive_edges[e].expect("live edge");
                alive_edges[e] = Some(if a == v { (fresh, b, w) } else { (a, fresh, w) });
            }
            incident[fresh] = moved;
            let link = alive_edges.len();
            alive_edges.push(Some((v, fresh, 0)));
            incident[v].push(link);
            incident[fresh].push(link);
        }
        v += 1;
    }

    let mut remap = vec![usize::MAX; alive_vertex.len()];
    let mut next = 0;
    for (v, &alive) in alive_vertex.iter().enumerate() {
        if alive {
            remap[v] = next;
            next += 1;
        }
    }
    let live: Vec<(usize, usize, u64)> = alive_edges.into_iter().flatten().collect();
    let edges: Vec<(usize, usize)> = live.iter().map(|&(a, b, _)| (remap[a], remap[b])).collect();
    let mut leaf_numbers = vec![usize::MAX; next];
    for (v, &r) in remap.iter().enumerate() {
        if r != usize::MAX {
            if let Some(Some(l)) = t.labels.get(v) {
                leaf_numbers[r] = l - 1;
            }
        }
    }
    let (tree, source) = index_tree(next, &edges, Some(&leaf_numbers))?;
    let weights = source.iter().map(|&s| live[s].2).collect();
    Ok((tree, WeightAssignment::new(weights)))
}
