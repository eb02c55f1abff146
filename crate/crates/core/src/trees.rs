//! Enumeration of full binary trees and of unrooted binary trees.
//!
//! Full binary trees with `n` leaves are built as `(r, T, T')` from smaller
//! ones. Unrooted binary trees (every internal vertex of degree three) are
//! built around a centroid: a new vertex joined to three full binary trees of
//! at most `n / 2` leaves each, plus, for even `n`, an edge joining two full
//! binary trees of `n / 2` leaves. Isomorphic duplicates that survive the index
//! tie-breaks are removed by canonical labeling of the leaf/internal 2-colored
//! tree.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::canon::{canonical_form, CanonicalForm};
use crate::graph::{LabeledGraph, VertexColoring, MAX_VERTICES};

/// Largest leaf count whose binary trees fit in a [`LabeledGraph`].
pub const MAX_LEAVES: usize = MAX_VERTICES / 2 + 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeError {
    TooFewLeaves { n: usize, min: usize },
    TooManyLeaves(usize),
    NotATree,
    BadDegree { vertex: usize, degree: usize },
    LeafCount { expected: usize, found: usize },
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::TooFewLeaves { n, min } => write!(f, "{n} leaves requested, need at least {min}"),
            TreeError::TooManyLeaves(n) => write!(f, "{n} leaves exceeds the supported {MAX_LEAVES}"),
            TreeError::NotATree => write!(f, "edge list is not a tree"),
            TreeError::BadDegree { vertex, degree } => {
                write!(f, "vertex {vertex} has degree {degree}, expected 1 or 3")
            }
            TreeError::LeafCount { expected, found } => {
                write!(f, "expected {expected} leaves, found {found}")
            }
        }
    }
}

impl core::error::Error for TreeError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Node {
    Leaf,
    Internal(usize, usize),
}

/// Rooted tree in which every internal vertex, the root included, has exactly
/// two children. A single leaf is its own root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    nodes: Vec<Node>,
    root: usize,
    leaves: usize,
}

impl RootedTree {
    pub fn leaf() -> Self {
        RootedTree { nodes: vec![Node::Leaf], root: 0, leaves: 1 }
    }

    /// `(r, left, right)`: a new root with the two trees as children.
    pub fn join(left: &RootedTree, right: &RootedTree) -> Self {
        let mut nodes = Vec::with_capacity(left.nodes.len() + right.nodes.len() + 1);
        nodes.extend_from_slice(&left.nodes);
        let off = left.nodes.len();
        nodes.extend(right.nodes.iter().map(|node| match *node {
            Node::Leaf => Node::Leaf,
            Node::Internal(a, b) => Node::Internal(a + off, b + off),
        }));
        let root = nodes.len();
        nodes.push(Node::Internal(left.root, right.root + off));
        RootedTree { nodes, root, leaves: left.leaves + right.leaves }
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Parent-child edges in arena ids.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nodes.iter().enumerate().flat_map(|(p, node)| match *node {
            Node::Leaf => [None, None],
            Node::Internal(a, b) => [Some((p, a)), Some((p, b))],
        }.into_iter().flatten())
    }

    /// Appends this tree's vertices and edges to `acc` and returns the global
    /// id of its root.
    fn splice_into(&self, acc: &mut RawTree) -> usize {
        let off = acc.vertices;
        acc.vertices += self.nodes.len();
        acc.edges.extend(self.edges().map(|(a, b)| (a + off, b + off)));
        self.root + off
    }
}

/// Builds `F_1, ..., F_max` bottom up. `families[m - 1]` is `F_m` in
/// construction order.
pub fn full_binary_families(max: usize) -> Vec<Vec<RootedTree>> {
    let mut families: Vec<Vec<RootedTree>> = Vec::with_capacity(max);
    for m in 1..=max {
        if m == 1 {
            families.push(vec![RootedTree::leaf()]);
            continue;
        }
        let mut out = Vec::new();
        for small in 1..=m / 2 {
            let big = m - small;
            let fb = &families[big - 1];
            let fs = &families[small - 1];
            for (i, ti) in fb.iter().enumerate() {
                for (j, tj) in fs.iter().enumerate() {
                    if big == small && i < j {
                        continue;
                    }
                    out.push(RootedTree::join(ti, tj));
                }
            }
        }
        families.push(out);
    }
    families
}

/// All mutually non-isomorphic full binary trees with `n` leaves, in a stable
/// construction order.
pub fn gen_full_binary_trees(n: usize) -> Result<Vec<RootedTree>, TreeError> {
    if n == 0 {
        return Err(TreeError::TooFewLeaves { n, min: 1 });
    }
    Ok(full_binary_families(n).pop().expect("n >= 1"))
}

#[derive(Default)]
struct RawTree {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

/// Unrooted tree whose internal vertices all have degree three.
///
/// Vertices are 0-based: leaves `0..n` (leaf label `i + 1`), internal vertices
/// `n..2n - 2`. Edge `e` of [`edges`](Self::edges) carries edge index `e + 1`;
/// the pendant edge of leaf `i` is edge `i`, internal edges follow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnrootedBinaryTree {
    leaves: usize,
    edges: Vec<(usize, usize)>,
}

impl UnrootedBinaryTree {
    pub fn leaf_count(&self) -> usize {
        self.leaves
    }

    pub fn vertex_count(&self) -> usize {
        if self.leaves == 1 { 1 } else { 2 * self.leaves - 2 }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Whether 0-based edge `e` is a pendant (leaf) edge.
    pub fn is_leaf_edge(&self, e: usize) -> bool {
        e < self.leaves
    }

    /// Adjacency lists of `(neighbor, edge)` pairs.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::with_capacity(3); self.vertex_count()];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
        adj
    }

    pub fn to_graph(&self) -> LabeledGraph {
        let mut g = LabeledGraph::empty(self.vertex_count()).expect("vertex count within range");
        for &(a, b) in &self.edges {
            g.add_edge(a, b);
        }
        g
    }

    /// Leaves colored 0, internal vertices colored 1.
    pub fn leaf_coloring(&self) -> VertexColoring {
        VertexColoring::new(
            (0..self.vertex_count()).map(|v| u32::from(v >= self.leaves)).collect(),
        )
    }

    pub fn canonical(&self) -> CanonicalForm {
        canonical_form(&self.to_graph(), &self.leaf_coloring())
            .expect("coloring sized to the tree")
            .0
    }

    /// Validates an unindexed binary tree given by an edge list over vertex ids
    /// `0..vertex_count` and assigns the standard indexing.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, TreeError> {
        assign_edge_indices(vertex_count, edges)
    }
}

/// Relabels a binary tree into the standard indexing.
///
/// A depth-first walk starts at the smallest-id internal vertex (vertex 0 for
/// the two-leaf tree) and visits neighbors in increasing id order. Leaves are
/// numbered in discovery order, internal vertices likewise after them; leaf
/// `i`'s pendant edge gets index `i` and internal edges get `n + 1 ..` in
/// discovery order.
pub fn assign_edge_indices(
    vertex_count: usize,
    edges: &[(usize, usize)],
) -> Result<UnrootedBinaryTree, TreeError> {
    index_tree(vertex_count, edges, None).map(|(t, _)| t)
}

/// [`assign_edge_indices`] with an optional fixed leaf numbering
/// (`leaf_labels[v]` is the 0-based leaf number of leaf vertex `v`). Also
/// returns, for every output edge, the position of its source in `edges`.
pub(crate) fn index_tree(
    vertex_count: usize,
    edges: &[(usize, usize)],
    leaf_labels: Option<&[usize]>,
) -> Result<(UnrootedBinaryTree, Vec<usize>), TreeError> {
    if vertex_count < 2 {
        return Err(TreeError::TooFewLeaves { n: vertex_count, min: 2 });
    }
    if edges.len() + 1 != vertex_count {
        return Err(TreeError::NotATree);
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertex_count];
    for (e, &(a, b)) in edges.iter().enumerate() {
        if a >= vertex_count || b >= vertex_count || a == b {
            return Err(TreeError::NotATree);
        }
        adj[a].push((b, e));
        adj[b].push((a, e));
    }
    for (v, nb) in adj.iter_mut().enumerate() {
        nb.sort_unstable();
        if nb.len() != 1 && nb.len() != 3 {
            return Err(TreeError::BadDegree { vertex: v, degree: nb.len() });
        }
    }
    let leaves = adj.iter().filter(|nb| nb.len() == 1).count();
    if 2 * leaves - 2 != vertex_count {
        return Err(TreeError::LeafCount { expected: vertex_count / 2 + 1, found: leaves });
    }
    if leaves > MAX_LEAVES {
        return Err(TreeError::TooManyLeaves(leaves));
    }
    if let Some(labels) = leaf_labels {
        let mut seen = vec![false; leaves];
        for (v, nb) in adj.iter().enumerate() {
            if nb.len() == 1 {
                let l = labels[v];
                if l >= leaves || seen[l] {
                    return Err(TreeError::LeafCount { expected: leaves, found: l + 1 });
                }
                seen[l] = true;
            }
        }
    }

    let start = adj.iter().position(|nb| nb.len() == 3).unwrap_or(0);
    let mut label = vec![usize::MAX; vertex_count];
    let mut next_leaf = 0;
    let mut next_internal = leaves;
    let mut inner: Vec<((usize, usize), usize)> = Vec::with_capacity(edges.len());
    let mut pendant: Vec<Option<((usize, usize), usize)>> = vec![None; leaves];
    let mut stack: Vec<(usize, usize, usize)> = vec![(start, usize::MAX, usize::MAX)];
    let mut visited = 0;
    while let Some((v, parent, via)) = stack.pop() {
        if label[v] != usize::MAX {
            return Err(TreeError::NotATree);
        }
        visited += 1;
        if adj[v].len() == 1 {
            label[v] = match leaf_labels {
                Some(l) => l[v],
                None => next_leaf,
            };
            next_leaf += 1;
        } else {
            label[v] = next_internal;
            next_internal += 1;
        }
        if parent != usize::MAX {
            let (a, b) = (label[parent], label[v]);
            if b < leaves {
                pendant[b] = Some(((a, b), via));
            } else if a < leaves {
                pendant[a] = Some(((a, b), via));
            } else {
                inner.push(((a, b), via));
            }
        }
        for &(w, e) in adj[v].iter().rev() {
            if w != parent {
                stack.push((w, v, e));
            }
        }
    }
    if visited != vertex_count {
        return Err(TreeError::NotATree);
    }
    let mut indexed = Vec::with_capacity(edges.len());
    let mut source = Vec::with_capacity(edges.len());
    if leaves == 2 {
        indexed.push((0, 1));
        source.push(0);
    } else {
        for p in pendant {
            let (e, via) = p.ok_or(TreeError::NotATree)?;
            indexed.push(e);
            source.push(via);
        }
        for (e, via) in inner {
            indexed.push(e);
            source.push(via);
        }
    }
    Ok((UnrootedBinaryTree { leaves, edges: indexed }, source))
}

/// Candidate trees before the final isomorphism filter, in generation order.
pub fn binary_tree_candidates(n: usize) -> Result<Vec<UnrootedBinaryTree>, TreeError> {
    if n < 2 {
        return Err(TreeError::TooFewLeaves { n, min: 2 });
    }
    if n > MAX_LEAVES {
        return Err(TreeError::TooManyLeaves(n));
    }
    let half = n / 2;
    let families = full_binary_families(half.max(1));
    let fam = |m: usize| &families[m - 1];
    let mut out = Vec::new();

    // unicentroid: (r, T_i, T_j, T_k) with n1 >= n2 >= n3 and n1 <= n / 2
    for n1 in (1..=half).rev() {
        for n2 in (1..=n1).rev() {
            if n1 + n2 >= n {
                continue;
            }
            let n3 = n - n1 - n2;
            if n3 > n2 {
                continue;
            }
            for (i, ti) in fam(n1).iter().enumerate() {
                for (j, tj) in fam(n2).iter().enumerate() {
                    for (k, tk) in fam(n3).iter().enumerate() {
                        let tied = n1 == n2 || n2 == n3;
                        if tied {
                            let keep = (n1 == n2 && i >= j)
                                || (n2 == n3 && j >= k)
                                || (n1 == n2 && n2 == n3 && i >= j && j >= k);
                            if !keep {
                                continue;
                            }
                        }
                        let mut raw = RawTree::default();
                        let r = raw.vertices;
                        raw.vertices += 1;
                        for t in [ti, tj, tk] {
                            let root = t.splice_into(&mut raw);
                            raw.edges.push((r, root));
                        }
                        out.push(assign_edge_indices(raw.vertices, &raw.edges)?);
                    }
                }
            }
        }
    }

    // bicentroid: (e, T_i, T_j) with both halves of n / 2 leaves
    if n % 2 == 0 {
        for (i, ti) in fam(half).iter().enumerate() {
            for tj in fam(half).iter().take(i + 1) {
                let mut raw = RawTree::default();
                let a = ti.splice_into(&mut raw);
                let b = tj.splice_into(&mut raw);
                raw.edges.push((a, b));
                out.push(assign_edge_indices(raw.vertices, &raw.edges)?);
            }
        }
    }
    Ok(out)
}

/// All mutually non-isomorphic unrooted binary trees with `n` leaves. The
/// order is the order of first generation and identifies `T_1, T_2, ...`.
pub fn gen_binary_trees(n: usize) -> Result<Vec<UnrootedBinaryTree>, TreeError> {
    let candidates = binary_tree_candidates(n)?;
    let mut seen: BTreeSet<CanonicalForm> = BTreeSet::new();
    Ok(candidates.into_iter().filter(|t| seen.insert(t.canonical())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_binary_base_cases() {
        assert_eq!(gen_full_binary_trees(1).unwrap().len(), 1);
        assert_eq!(gen_full_binary_trees(2).unwrap().len(), 1);
        assert_eq!(gen_full_binary_trees(4).unwrap().len(), 2);
        assert_eq!(gen_full_binary_trees(5).unwrap().len(), 3);
        assert!(gen_full_binary_trees(0).is_err());
    }

    #[test]
    fn full_binary_invariants() {
        for t in gen_full_binary_trees(7).unwrap() {
            assert_eq!(t.leaf_count(), 7);
            let leaves = t.nodes().iter().filter(|n| matches!(n, Node::Leaf)).count();
            assert_eq!(leaves, 7);
            assert_eq!(t.edges().count(), t.nodes().len() - 1);
        }
    }

    #[test]
    fn rejects_small_n() {
        assert!(gen_binary_trees(1).is_err());
        assert!(gen_binary_trees(0).is_err());
    }

    #[test]
    fn two_and_three_leaves() {
        let t2 = gen_binary_trees(2).unwrap();
        assert_eq!(t2.len(), 1);
        assert_eq!(t2[0].edges(), &[(0, 1)]);
        let t3 = gen_binary_trees(3).unwrap();
        assert_eq!(t3.len(), 1);
        // star: three pendant edges onto the center, no internal edge
        assert_eq!(t3[0].edge_count(), 3);
        for (i, &(a, b)) in t3[0].edges().iter().enumerate() {
            assert!(a == i || b == i);
            assert!(a == 3 || b == 3);
        }
    }

    #[test]
    fn four_leaves_indexing() {
        let t = gen_binary_trees(4).unwrap();
        assert_eq!(t.len(), 1);
        let t = &t[0];
        assert_eq!(t.edge_count(), 5);
        for i in 0..4 {
            let (a, b) = t.edges()[i];
            assert!(a == i || b == i);
        }
        let (a, b) = t.edges()[4];
        assert!(a >= 4 && b >= 4);
    }

    #[test]
    fn ten_leaf_index_split() {
        for t in gen_binary_trees(10).unwrap() {
            assert_eq!(t.edge_count(), 17);
            assert_eq!(t.vertex_count(), 18);
            let pendant = (0..17).filter(|&e| {
                let (a, b) = t.edges()[e];
                a < 10 || b < 10
            });
            assert_eq!(pendant.collect::<Vec<_>>(), (0..10).collect::<Vec<_>>());
        }
    }

    #[test]
    fn assign_rejects_non_binary() {
        // path on 3 vertices: middle degree 2
        assert!(matches!(
            assign_edge_indices(3, &[(0, 1), (1, 2)]),
            Err(TreeError::BadDegree { vertex: 1, degree: 2 })
        ));
        // cycle
        assert!(assign_edge_indices(4, &[(0, 1), (1, 2), (2, 0), (0, 3)]).is_err());
    }

    #[test]
    fn assign_is_deterministic() {
        let edges = [(5, 0), (5, 1), (5, 4), (4, 2), (4, 3)];
        let a = assign_edge_indices(6, &edges).unwrap();
        let b = assign_edge_indices(6, &edges).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.leaf_count(), 4);
    }
}

