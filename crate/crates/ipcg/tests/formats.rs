use std::collections::BTreeSet;

use ipcg::graph6::{parse_graph6, write_graph6};
use ipcg::newick::{parse_newick, write_newick};
use ipcg_core::graph::LabeledGraph;
use ipcg_core::trees::gen_binary_trees;
use ipcg_core::verify::walk_distances;
use ipcg_core::weights::{WeightAssignment, WeightedTree};
use proptest::prelude::*;

fn graph_strategy() -> impl Strategy<Value = LabeledGraph> {
    (1usize..=70).prop_flat_map(|n| {
        let n = n.min(64);
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut pairs = Vec::new();
            let mut b = bits.iter();
            for v in 1..n {
                for u in 0..v {
                    if *b.next().unwrap() {
                        pairs.push((u + 1, v + 1));
                    }
                }
            }
            LabeledGraph::from_edge_list(n, &pairs).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn graph6_round_trips(g in graph_strategy()) {
        let text = write_graph6(&g);
        prop_assert!(text.bytes().all(|c| (63..=126).contains(&c)));
        prop_assert_eq!(parse_graph6(&text).unwrap(), g);
    }

    #[test]
    fn newick_keeps_leaf_distances(n in 2usize..=9, pick in any::<prop::sample::Index>(), seed in any::<u64>()) {
        let trees = gen_binary_trees(n).unwrap();
        let t = &trees[pick.index(trees.len())];
        let w: Vec<u64> = (0..t.edge_count() as u64).map(|i| 1 + (seed.rotate_left(i as u32 * 7) % 1000)).collect();
        let tree = WeightedTree::from_binary(t, &WeightAssignment::new(w)).unwrap();
        let back = parse_newick(&write_newick(&tree)).unwrap();
        prop_assert_eq!(back.leaf_count(), n);
        prop_assert_eq!(walk_distances(&back), walk_distances(&tree));
    }
}

#[test]
fn graph6_is_injective_on_small_graphs() {
    let mut seen = BTreeSet::new();
    for n in 1..=5usize {
        let pairs: Vec<(usize, usize)> = (2..=n).flat_map(|v| (1..v).map(move |u| (u, v))).collect();
        for mask in 0u32..1 << pairs.len() {
            let chosen: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| *p).collect();
            let g = LabeledGraph::from_edge_list(n, &chosen).unwrap();
            assert!(seen.insert(write_graph6(&g)));
        }
    }
    assert_eq!(seen.len(), 1 + 2 + 8 + 64 + 1024);
}
