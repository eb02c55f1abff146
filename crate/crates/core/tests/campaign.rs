use std::collections::BTreeSet;
use std::time::Duration;

use ipcg_core::catalog::nonisomorphic_graphs;
use ipcg_core::certificate::Range;
use ipcg_core::sweep::{generate, CampaignConfig};
use ipcg_core::trees::gen_binary_trees;
use ipcg_core::verify::verify_certificate;

fn config(k: usize, seed: u64) -> CampaignConfig {
    CampaignConfig {
        k,
        leaf_range: Range::new(1, 20),
        internal_range: Range::new(1, 20),
        time_budget: Duration::from_secs(60),
        seed,
        trees: Vec::new(),
    }
}

#[test]
fn six_vertex_pcgs_are_all_identified() {
    let targets = nonisomorphic_graphs(6);
    let trees = gen_binary_trees(6).unwrap();
    let out = generate(&targets, &trees, &config(1, 3), |s| s.rounds_completed() < 5000).unwrap();
    let state = &out.state;
    assert_eq!(state.remaining_count(), 0);
    assert_eq!(state.identified(), 156);

    let mut seen = BTreeSet::new();
    for cert in state.found().iter().chain(state.trivial_certificates()) {
        let verdict = verify_certificate(cert);
        assert!(verdict.is_valid(), "{:?}", verdict.violations);
        assert!(seen.insert(cert.target.clone()), "duplicate discovery");
    }
    for f in state.trivially_known() {
        assert!(f.edge_count() < 3);
    }

    let mut last = usize::MAX;
    for r in &out.reports {
        assert!(r.remaining <= last);
        last = r.remaining;
    }
    let tallied: u64 = state.tallies().iter().sum();
    assert_eq!(tallied as usize, state.found().len());
}

#[test]
fn seeds_reproduce_certificates() {
    let targets = nonisomorphic_graphs(6);
    let trees = gen_binary_trees(6).unwrap();
    let run = |seed| generate(&targets, &trees, &config(2, seed), |_| true).unwrap().state.found().to_vec();
    let found = run(9);
    assert_eq!(found, run(9));
    for cert in &found {
        assert!(verify_certificate(cert).is_valid());
    }
}
