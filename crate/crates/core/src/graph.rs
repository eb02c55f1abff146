//! Simple undirected graphs on a fixed vertex set, stored as one adjacency
//! bitset per vertex.
//!
//! Vertices are `0..n` internally. The constructors and [`LabeledGraph::edges`]
//! speak the 1-based labels `1..=n` used by every external format.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Largest vertex count a [`LabeledGraph`] can hold.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    NoVertices,
    TooManyVertices(usize),
    EndpointOutOfRange { vertex: usize, n: usize },
    SelfLoop(usize),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::NoVertices => write!(f, "a graph needs at least one vertex"),
            GraphError::TooManyVertices(n) => {
                write!(f, "{n} vertices exceeds the supported maximum of {MAX_VERTICES}")
            }
            GraphError::EndpointOutOfRange { vertex, n } => {
                write!(f, "endpoint {vertex} is outside 1..={n}")
            }
            GraphError::SelfLoop(v) => write!(f, "self-loop at vertex {v}"),
        }
    }
}

impl core::error::Error for GraphError {}

/// Simple undirected graph on `n` vertices.
///
/// Ordering compares the vertex count first, then the adjacency rows; it is
/// only used to key collections and carries no graph-theoretic meaning.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledGraph {
    n: usize,
    adj: Vec<u64>,
}

impl LabeledGraph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(LabeledGraph { n, adj: vec![0; n] })
    }

    /// Builds a graph from 1-based vertex pairs. Duplicate and reversed pairs
    /// collapse into one edge.
    pub fn from_edge_list(n: usize, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        for &(u, v) in pairs {
            for x in [u, v] {
                if x == 0 || x > n {
                    return Err(GraphError::EndpointOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.add_edge(u - 1, v - 1);
        }
        Ok(g)
    }

    /// Builds a graph directly from adjacency rows. Rows must be symmetric,
    /// loop-free and confined to the low `rows.len()` bits.
    pub(crate) fn from_rows(rows: Vec<u64>) -> Self {
        debug_assert!(!rows.is_empty() && rows.len() <= MAX_VERTICES);
        LabeledGraph { n: rows.len(), adj: rows }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Adjacency row of 0-based vertex `v`.
    #[inline]
    pub fn row(&self, v: usize) -> u64 {
        self.adj[v]
    }

    #[inline]
    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    /// 0-based edge insertion.
    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    /// Adjacency test on 0-based vertices.
    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges as 1-based pairs `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            let above = self.adj[u] & !((2u64 << u).wrapping_sub(1));
            BitIter(above).map(move |v| (u + 1, v + 1))
        })
    }

    /// Relabels vertex `v` to `perm[v]` (0-based).
    pub fn permuted(&self, perm: &[usize]) -> LabeledGraph {
        debug_assert_eq!(perm.len(), self.n);
        let mut rows = vec![0u64; self.n];
        for (u, &pu) in perm.iter().enumerate() {
            let mut row = 0u64;
            for v in BitIter(self.adj[u]) {
                row |= 1 << perm[v];
            }
            rows[pu] = row;
        }
        LabeledGraph { n: self.n, adj: rows }
    }

    /// Sorted degree sequence, a cheap isomorphism invariant.
    pub fn degree_key(&self) -> DegreeKey {
        let mut key = DegreeKey([0; MAX_VERTICES]);
        for v in 0..self.n {
            key.0[v] = self.degree(v) as u8;
        }
        key.0[..self.n].sort_unstable();
        key
    }
}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabeledGraph(n={}, [", self.n)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

/// Sorted degree sequence padded with zeros.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DegreeKey(pub [u8; MAX_VERTICES]);

/// Iterator over the set bits of a word, lowest first.
#[derive(Clone, Copy)]
pub(crate) struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;
    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// Vertex coloring with colors `0..h`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexColoring {
    colors: Vec<u32>,
}

impl VertexColoring {
    pub fn uniform(n: usize) -> Self {
        VertexColoring { colors: vec![0; n] }
    }

    /// `colors[v]` is the color of 0-based vertex `v`.
    pub fn new(colors: Vec<u32>) -> Self {
        VertexColoring { colors }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.colors.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    #[inline]
    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.colors
    }

    /// True when the colors used are exactly `0..h` for some `h`.
    pub fn is_full(&self) -> bool {
        let mut used: Vec<u32> = self.colors.clone();
        used.sort_unstable();
        used.dedup();
        used.iter().enumerate().all(|(i, &c)| c as usize == i)
    }
}

/// Records keyed by edge count. Empty classes are absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePartition<T> {
    classes: BTreeMap<usize, Vec<T>>,
}

impl<T> Default for EdgePartition<T> {
    fn default() -> Self {
        EdgePartition { classes: BTreeMap::new() }
    }
}

impl<T> EdgePartition<T> {
    pub fn insert(&mut self, edges: usize, item: T) {
        self.classes.entry(edges).or_default().push(item);
    }

    pub fn class(&self, edges: usize) -> &[T] {
        self.classes.get(&edges).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn classes(&self) -> impl Iterator<Item = (usize, &[T])> {
        self.classes.iter().map(|(&p, v)| (p, v.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.classes.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn into_classes(self) -> BTreeMap<usize, Vec<T>> {
        self.classes
    }
}

/// Groups records by their edge count.
pub fn partition_by_edges<T, I>(records: I) -> EdgePartition<T>
where
    I: IntoIterator<Item = (T, usize)>,
{
    let mut part = EdgePartition::default();
    for (item, edges) in records {
        part.insert(edges, item);
    }
    part
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> LabeledGraph {
        LabeledGraph::from_edge_list(3, &[(1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn builds_path() {
        let g = path3();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 2), (2, 3)]);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn single_vertex() {
        let g = LabeledGraph::from_edge_list(1, &[]).unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            LabeledGraph::from_edge_list(2, &[(1, 1)]),
            Err(GraphError::SelfLoop(1))
        );
        assert_eq!(
            LabeledGraph::from_edge_list(2, &[(1, 3)]),
            Err(GraphError::EndpointOutOfRange { vertex: 3, n: 2 })
        );
        assert_eq!(
            LabeledGraph::from_edge_list(0, &[]),
            Err(GraphError::NoVertices)
        );
        assert!(LabeledGraph::from_edge_list(65, &[]).is_err());
    }

    #[test]
    fn normalizes_duplicates() {
        let g = LabeledGraph::from_edge_list(3, &[(2, 1), (1, 2), (3, 2)]).unwrap();
        assert_eq!(g, path3());
        assert!(g.edges().all(|(u, v)| u < v));
    }

    #[test]
    fn edges_on_full_width() {
        let g = LabeledGraph::from_edge_list(64, &[(63, 64), (1, 64)]).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 64), (63, 64)]);
    }

    #[test]
    fn partition_small() {
        let p3 = path3();
        let k3 = LabeledGraph::from_edge_list(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        let k2 = LabeledGraph::from_edge_list(3, &[(1, 2)]).unwrap();
        let part = partition_by_edges(
            [p3.clone(), k3.clone(), k2.clone()]
                .into_iter()
                .map(|g| {
                    let m = g.edge_count();
                    (g, m)
                }),
        );
        assert_eq!(part.class(1), &[k2][..]);
        assert_eq!(part.class(2), &[p3][..]);
        assert_eq!(part.class(3), &[k3][..]);
        assert_eq!(part.class_count(), 3);
        assert!(part.class(0).is_empty());
    }

    #[test]
    fn partition_empty() {
        let part: EdgePartition<LabeledGraph> = partition_by_edges(core::iter::empty());
        assert!(part.is_empty());
        assert_eq!(part.len(), 0);
    }

    #[test]
    fn partition_all_five_vertex_labeled_graphs() {
        let pairs: Vec<(usize, usize)> = (1..=5)
            .flat_map(|u| (u + 1..=5).map(move |v| (u, v)))
            .collect();
        let graphs = (0u32..1024).map(|mask| {
            let chosen: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            let g = LabeledGraph::from_edge_list(5, &chosen).unwrap();
            let m = g.edge_count();
            (g, m)
        });
        let part = partition_by_edges(graphs);
        assert_eq!(part.len(), 1024);
        // binomial(10, p), computed by Pascal's rule
        let mut row = [1u64; 11];
        for i in 1..=10 {
            for j in (1..i).rev() {
                row[j] += row[j - 1];
            }
        }
        for (p, class) in part.classes() {
            assert_eq!(class.len() as u64, row[p], "p = {p}");
            assert!(class.iter().all(|g| g.edge_count() == p));
        }
        assert_eq!(part.class_count(), 11);
    }

    #[test]
    fn permuted_relabels() {
        let g = path3();
        // 1-2-3 becomes 2-1-3
        let h = g.permuted(&[1, 0, 2]);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(1, 2), (1, 3)]);
        assert_eq!(g.degree_key(), h.degree_key());
    }
}
