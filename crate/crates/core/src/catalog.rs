//! Complete lists of graphs up to isomorphism, used to build target sets.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::canon::{canonical_graph, CanonicalForm};
use crate::graph::LabeledGraph;

/// One canonical representative of every isomorphism class of graphs on `n`
/// vertices, ordered by edge count and then by canonical form.
///
/// Each class on `n` vertices is reached by attaching a new vertex, with every
/// possible neighborhood, to a representative on `n - 1` vertices.
pub fn nonisomorphic_graphs(n: usize) -> Vec<LabeledGraph> {
    assert!((1..=16).contains(&n), "catalog supports 1..=16 vertices");
    let mut level: Vec<LabeledGraph> = alloc::vec![LabeledGraph::empty(1).expect("n = 1")];
    for m in 2..=n {
        let mut seen: BTreeSet<CanonicalForm> = BTreeSet::new();
        for base in &level {
            for nbrs in 0u64..(1u64 << (m - 1)) {
                let mut rows: Vec<u64> = base.rows().to_vec();
                for (v, row) in rows.iter_mut().enumerate() {
                    if nbrs >> v & 1 == 1 {
                        *row |= 1 << (m - 1);
                    }
                }
                rows.push(nbrs);
                let g = LabeledGraph::from_rows(rows);
                seen.insert(canonical_graph(&g).0);
            }
        }
        level = seen.into_iter().map(|c| c.graph().clone()).collect();
    }
    level.sort_by_key(|g| g.edge_count());
    level
}

/// Every labeled graph on `n` vertices (`2^(n(n-1)/2)` of them).
pub fn labeled_graphs(n: usize) -> impl Iterator<Item = LabeledGraph> {
    assert!((1..=8).contains(&n), "labeled enumeration supports 1..=8 vertices");
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let total = 1u64 << pairs.len();
    (0..total).map(move |mask| {
        let mut g = LabeledGraph::empty(n).expect("n >= 1");
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g.add_edge(u, v);
            }
        }
        g
    })
}
