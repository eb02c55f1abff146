//! Target-set construction.

use std::collections::BTreeSet;

use ipcg_core::canon::canonical_graph;
use ipcg_core::catalog::nonisomorphic_graphs;
use ipcg_core::graph::LabeledGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest vertex count for which [`all_graphs`] is offered.
pub const MAX_CATALOG: usize = 9;

pub fn all_graphs(n: usize) -> Option<Vec<LabeledGraph>> {
    (1..=MAX_CATALOG).contains(&n).then(|| nonisomorphic_graphs(n))
}

/// Up to `count` pairwise non-isomorphic graphs drawn from G(n, 1/2), in
/// canonical form. Stops early after `50 * count` draws.
pub fn random_graphs(n: usize, count: usize, seed: u64) -> Vec<LabeledGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut draws = 0;
    while out.len() < count && draws < 50 * count.max(1) {
        draws += 1;
        let mut pairs = Vec::new();
        for u in 1..=n {
            for v in u + 1..=n {
                if rng.gen::<bool>() {
                    pairs.push((u, v));
                }
            }
        }
        let g = LabeledGraph::from_edge_list(n, &pairs).expect("valid pairs");
        let form = canonical_graph(&g).0;
        if seen.insert(form.clone()) {
            out.push(form.graph().clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_is_distinct_and_seeded() {
        let a = random_graphs(10, 200, 4);
        assert_eq!(a.len(), 200);
        assert_eq!(a, random_graphs(10, 200, 4));
        let forms: BTreeSet<_> = a.iter().map(|g| canonical_graph(g).0).collect();
        assert_eq!(forms.len(), 200);
    }

    #[test]
    fn small_sample_saturates() {
        assert_eq!(random_graphs(3, 10, 1).len(), 4);
    }
}
