//! Randomized k-IPCG generation.
//!
//! One round draws a single weight assignment shared by every selected tree.
//! For each tree the leaf distances are reduced to the strictly increasing
//! list of distinct values `d_1 < ... < d_l`, with `S_i` pairs at distance
//! `d_i` and prefix sums `sum[i]`. An interval tuple picks up to `k` disjoint
//! index ranges `[h_1, h_2], [h_3, h_4], ...` with `h_2 < h_3`; the graph it
//! induces joins every pair whose distance lies in `[d_{h_1} - 1/2,
//! d_{h_2} + 1/2]` or a later interval. Its edge count is known from the
//! prefix sums before the graph is built, so tuples whose edge count has no
//! unidentified target left are skipped outright.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::canon::{canonical_graph, hash_of, CanonicalForm, HashValue};
use crate::certificate::{Certificate, Interval, Origin, Range};
use crate::graph::{DegreeKey, LabeledGraph};
use crate::trees::UnrootedBinaryTree;
use crate::weights::{binarize, leaf_pairs, DistanceTable, PathCache, WeightAssignment, WeightedTree};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenError {
    InvalidConfig(&'static str),
    NoTargets,
    MixedVertexCounts { expected: usize, found: usize },
    TreeLeafMismatch { tree: usize, leaves: usize, n: usize },
    TreeIndexOutOfRange { index: usize, trees: usize },
    NothingRemaining,
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::InvalidConfig(why) => write!(f, "invalid campaign configuration: {why}"),
            GenError::NoTargets => write!(f, "target set is empty"),
            GenError::MixedVertexCounts { expected, found } => {
                write!(f, "targets mix vertex counts {expected} and {found}")
            }
            GenError::TreeLeafMismatch { tree, leaves, n } => {
                write!(f, "tree {} has {leaves} leaves but targets have {n} vertices", tree + 1)
            }
            GenError::TreeIndexOutOfRange { index, trees } => {
                write!(f, "tree index {} out of range 1..={trees}", index + 1)
            }
            GenError::NothingRemaining => write!(f, "no unidentified targets remain"),
        }
    }
}

impl core::error::Error for GenError {}

/// Parameters of one campaign phase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignConfig {
    pub k: usize,
    pub leaf_range: Range,
    pub internal_range: Range,
    pub time_budget: Duration,
    pub seed: u64,
    /// 0-based indices into the full tree list; empty means all trees.
    pub trees: Vec<usize>,
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<(), GenError> {
        if self.k == 0 {
            return Err(GenError::InvalidConfig("k must be at least 1"));
        }
        if self.leaf_range.lo == 0 || self.leaf_range.lo > self.leaf_range.hi {
            return Err(GenError::InvalidConfig("leaf range must satisfy 1 <= a1 <= a2"));
        }
        if self.internal_range.lo == 0 || self.internal_range.lo > self.internal_range.hi {
            return Err(GenError::InvalidConfig("internal range must satisfy 1 <= a3 <= a4"));
        }
        if self.time_budget.is_zero() {
            return Err(GenError::InvalidConfig("time budget must be positive"));
        }
        Ok(())
    }

    /// Selected tree indices, resolved against `tree_count` trees.
    pub fn tree_indices(&self, tree_count: usize) -> Result<Vec<usize>, GenError> {
        if self.trees.is_empty() {
            return Ok((0..tree_count).collect());
        }
        for &t in &self.trees {
            if t >= tree_count {
                return Err(GenError::TreeIndexOutOfRange { index: t, trees: tree_count });
            }
        }
        Ok(self.trees.clone())
    }
}

/// Deterministic generator for round `round` of phase `phase`.
pub fn round_rng(seed: u64, phase: usize, round: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((phase as u64) << 40) ^ round);
    rng
}

/// `n` leaf weights drawn uniformly from the leaf range followed by `n - 3`
/// internal weights from the internal range.
pub fn sample_weights<R: Rng>(rng: &mut R, n: usize, cfg: &CampaignConfig) -> WeightAssignment {
    assert!(n >= 3, "sampling needs at least three leaves");
    let mut w = Vec::with_capacity(2 * n - 3);
    for _ in 0..n {
        w.push(rng.gen_range(cfg.leaf_range.lo..=cfg.leaf_range.hi));
    }
    for _ in 0..n - 3 {
        w.push(rng.gen_range(cfg.internal_range.lo..=cfg.internal_range.hi));
    }
    WeightAssignment::new(w)
}

/// Distinct leaf distances with multiplicities and prefix sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinctDistances {
    /// `d_1 < ... < d_l`.
    pub values: Vec<u64>,
    /// `S_i`, the number of pairs at distance `d_i`.
    pub multiplicity: Vec<usize>,
    /// `sum[0] = 0`, `sum[i] = sum[i - 1] + S_i`.
    pub prefix: Vec<usize>,
}

impl DistinctDistances {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn distinct_distances(d: &DistanceTable) -> DistinctDistances {
    distinct_from_slice(d.as_slice())
}

fn distinct_from_slice(d: &[u64]) -> DistinctDistances {
    let mut sorted = d.to_vec();
    sorted.sort_unstable();
    let mut values = Vec::new();
    let mut multiplicity = Vec::new();
    for x in sorted {
        if values.last() == Some(&x) {
            *multiplicity.last_mut().expect("paired with values") += 1;
        } else {
            values.push(x);
            multiplicity.push(1);
        }
    }
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(0);
    for &s in &multiplicity {
        prefix.push(prefix.last().copied().unwrap_or(0) + s);
    }
    DistinctDistances { values, multiplicity, prefix }
}

/// Up to `k` disjoint ranges of 1-based distance indices,
/// `h_1 <= h_2 < h_3 <= h_4 < ...`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntervalTuple {
    pub ranges: Vec<(usize, usize)>,
}

impl IntervalTuple {
    pub fn new(ranges: Vec<(usize, usize)>) -> Self {
        IntervalTuple { ranges }
    }

    /// Number of intervals actually used.
    pub fn effective_k(&self) -> usize {
        self.ranges.len()
    }

    pub fn is_valid(&self, l: usize) -> bool {
        let mut prev_hi = 0;
        !self.ranges.is_empty()
            && self.ranges.iter().all(|&(lo, hi)| {
                let ok = lo > prev_hi && lo <= hi && hi <= l;
                prev_hi = hi;
                ok
            })
    }

    /// The half-integral intervals over the distance values of `dd`, with
    /// touching neighbors joined so the result is pairwise disjoint.
    pub fn intervals(&self, dd: &DistinctDistances) -> Vec<Interval> {
        Interval::merge_touching(
            self.ranges
                .iter()
                .map(|&(lo, hi)| Interval::around(dd.values[lo - 1], dd.values[hi - 1]))
                .collect(),
        )
    }
}

/// Calls `f` once for every tuple of `1..=k` ranges over `1..=l`, each range
/// before its extensions.
pub fn visit_interval_tuples<F: FnMut(&[(usize, usize)])>(l: usize, k: usize, mut f: F) {
    fn rec<F: FnMut(&[(usize, usize)])>(
        l: usize,
        k: usize,
        start: usize,
        acc: &mut Vec<(usize, usize)>,
        f: &mut F,
    ) {
        for lo in start..=l {
            for hi in lo..=l {
                acc.push((lo, hi));
                f(acc);
                if acc.len() < k {
                    rec(l, k, hi + 1, acc, f);
                }
                acc.pop();
            }
        }
    }
    let mut acc = Vec::with_capacity(k);
    rec(l, k, 1, &mut acc, &mut f);
}

pub fn enumerate_interval_tuples(l: usize, k: usize) -> Vec<IntervalTuple> {
    let mut out = Vec::new();
    visit_interval_tuples(l, k, |r| out.push(IntervalTuple::new(r.to_vec())));
    out
}

/// Number of pairs covered: `sum_j (sum[h_2j] - sum[h_2j-1 - 1])`.
pub fn edge_count_of(t: &IntervalTuple, dd: &DistinctDistances) -> usize {
    t.ranges.iter().map(|&(lo, hi)| dd.prefix[hi] - dd.prefix[lo - 1]).sum()
}

/// Graph on the leaves joining `u, v` when `d[u, v]` lies in an interval of
/// the tuple (identity leaf bijection).
pub fn build_graph(d: &DistanceTable, t: &IntervalTuple, dd: &DistinctDistances) -> LabeledGraph {
    let n = d.leaves();
    let mut g = LabeledGraph::empty(n).expect("at least one leaf");
    let bounds: Vec<(u64, u64)> =
        t.ranges.iter().map(|&(lo, hi)| (dd.values[lo - 1], dd.values[hi - 1])).collect();
    for (u, v) in leaf_pairs(n) {
        let x = d.get(u, v);
        if bounds.iter().any(|&(a, b)| a <= x && x <= b) {
            g.add_edge(u, v);
        }
    }
    g
}

/// One binary tree prepared for repeated sweeps.
#[derive(Clone, Debug)]
pub struct TreeSweeper {
    index: usize,
    tree: UnrootedBinaryTree,
    paths: PathCache,
    pair_ends: Vec<(u8, u8)>,
}

impl TreeSweeper {
    /// `index` is the tree's 0-based position in the full tree list.
    pub fn new(index: usize, tree: UnrootedBinaryTree) -> Self {
        let paths = PathCache::new(&tree);
        let pair_ends = leaf_pairs(tree.leaf_count()).map(|(u, v)| (u as u8, v as u8)).collect();
        TreeSweeper { index, tree, paths, pair_ends }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn tree(&self) -> &UnrootedBinaryTree {
        &self.tree
    }

    pub fn paths(&self) -> &PathCache {
        &self.paths
    }
}

/// Cheap necessary conditions for a candidate to match a remaining target.
#[derive(Clone, Debug, Default)]
pub struct TargetFilter {
    by_edges: Vec<usize>,
    keys: Option<BTreeSet<DegreeKey>>,
    max_edges: usize,
}

impl TargetFilter {
    /// Accepts every graph on `n` vertices.
    pub fn permissive(n: usize) -> Self {
        let max_edges = n * n.saturating_sub(1) / 2;
        TargetFilter { by_edges: vec![1; max_edges + 1], keys: None, max_edges }
    }

    #[inline]
    pub fn wants_edges(&self, p: usize) -> bool {
        self.by_edges.get(p).is_some_and(|&c| c > 0)
    }

    pub fn wants_degrees(&self, key: &DegreeKey) -> bool {
        self.keys.as_ref().is_none_or(|k| k.contains(key))
    }
}

/// A graph produced by the sweep together with what is needed to certify it.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub tree: usize,
    /// `(d_lo, d_hi)` distance bounds of each interval.
    pub bounds: Vec<(u64, u64)>,
    pub graph: LabeledGraph,
    pub canon: Option<(CanonicalForm, HashValue, Vec<usize>)>,
}

impl Candidate {
    pub fn canonicalize(&mut self) {
        if self.canon.is_none() {
            let (form, perm) = canonical_graph(&self.graph);
            let h = hash_of(&form);
            self.canon = Some((form, h, perm));
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct TreeSweep {
    pub tree: usize,
    pub tuples: u64,
    pub built: u64,
    pub candidates: Vec<Candidate>,
}

/// Sweeps every interval tuple of one tree under weights `w`, keeping graphs
/// that pass `filter`.
pub fn sweep_tree(s: &TreeSweeper, w: &WeightAssignment, k: usize, filter: &TargetFilter) -> TreeSweep {
    let n = s.tree.leaf_count();
    let mut dist = Vec::with_capacity(s.paths.pair_count());
    s.paths.distances_into(w.as_slice(), &mut dist);
    let dd = distinct_from_slice(&dist);
    let l = dd.len();
    let pairs = dist.len();
    let words = pairs.div_ceil(64).max(1);

    // cum[i * words ..] holds the pairs at distance index <= i
    let mut cum = vec![0u64; (l + 1) * words];
    for (p, &x) in dist.iter().enumerate() {
        let i = dd.values.binary_search(&x).expect("value present") + 1;
        cum[i * words + p / 64] |= 1 << (p % 64);
    }
    for i in 1..=l {
        for wd in 0..words {
            cum[i * words + wd] |= cum[(i - 1) * words + wd];
        }
    }

    let mut out = TreeSweep { tree: s.index, ..TreeSweep::default() };
    let mut ranges: Vec<(usize, usize)> = Vec::with_capacity(k);
    let mut mask = vec![0u64; words];
    let ctx = SweepCtx { n, k, l, words, dd: &dd, cum: &cum, filter, s };
    ctx.rec(1, 0, &mut ranges, &mut mask, &mut out);
    out
}

struct SweepCtx<'a> {
    n: usize,
    k: usize,
    l: usize,
    words: usize,
    dd: &'a DistinctDistances,
    cum: &'a [u64],
    filter: &'a TargetFilter,
    s: &'a TreeSweeper,
}

impl SweepCtx<'_> {
    fn rec(
        &self,
        start: usize,
        p_acc: usize,
        ranges: &mut Vec<(usize, usize)>,
        mask: &mut Vec<u64>,
        out: &mut TreeSweep,
    ) {
        let w = self.words;
        for lo in start..=self.l {
            for hi in lo..=self.l {
                let p = p_acc + self.dd.prefix[hi] - self.dd.prefix[lo - 1];
                if p > self.filter.max_edges {
                    break;
                }
                out.tuples += 1;
                for wd in 0..w {
                    mask[wd] ^= self.cum[hi * w + wd] ^ self.cum[(lo - 1) * w + wd];
                }
                ranges.push((lo, hi));
                if self.filter.wants_edges(p) {
                    out.built += 1;
                    let g = self.graph_from_mask(mask);
                    if self.filter.wants_degrees(&g.degree_key()) {
                        out.candidates.push(Candidate {
                            tree: self.s.index,
                            bounds: ranges
                                .iter()
                                .map(|&(a, b)| (self.dd.values[a - 1], self.dd.values[b - 1]))
                                .collect(),
                            graph: g,
                            canon: None,
                        });
                    }
                }
                if ranges.len() < self.k {
                    self.rec(hi + 1, p, ranges, mask, out);
                }
                ranges.pop();
                for wd in 0..w {
                    mask[wd] ^= self.cum[hi * w + wd] ^ self.cum[(lo - 1) * w + wd];
                }
            }
        }
    }

    fn graph_from_mask(&self, mask: &[u64]) -> LabeledGraph {
        let mut rows = vec![0u64; self.n];
        for (wd, &word) in mask.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let (u, v) = self.s.pair_ends[wd * 64 + b];
                rows[u as usize] |= 1 << v;
                rows[v as usize] |= 1 << u;
            }
        }
        LabeledGraph::from_rows(rows)
    }
}

/// Outcome of one round.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoundReport {
    pub phase: usize,
    pub round: u64,
    pub tuples: u64,
    pub candidates: usize,
    /// `(tree index, candidates, newly identified)` in sweep order.
    pub per_tree: Vec<(usize, usize, usize)>,
    pub new: usize,
    pub remaining: usize,
    pub weights: Vec<u64>,
}

/// Unidentified targets, identified certificates and bookkeeping.
#[derive(Clone, Debug)]
pub struct GeneratorState {
    n: usize,
    k: usize,
    total: usize,
    duplicates: usize,
    remaining: BTreeMap<usize, BTreeMap<HashValue, Vec<CanonicalForm>>>,
    remaining_count: usize,
    found: Vec<Certificate>,
    trivial: Vec<CanonicalForm>,
    trivial_certificates: Vec<Certificate>,
    rounds: u64,
    tallies: Vec<u64>,
}

impl GeneratorState {
    /// Canonicalizes and deduplicates `targets`. Targets with fewer than three
    /// edges are marked trivially known and get a directly built witness.
    pub fn new(targets: &[LabeledGraph], k: usize, tree_count: usize, seed: u64) -> Result<Self, GenError> {
        let first = targets.first().ok_or(GenError::NoTargets)?;
        let n = first.n();
        let mut forms: BTreeSet<CanonicalForm> = BTreeSet::new();
        for g in targets {
            if g.n() != n {
                return Err(GenError::MixedVertexCounts { expected: n, found: g.n() });
            }
            forms.insert(canonical_graph(g).0);
        }
        let duplicates = targets.len() - forms.len();
        let mut state = GeneratorState {
            n,
            k,
            total: forms.len(),
            duplicates,
            remaining: BTreeMap::new(),
            remaining_count: 0,
            found: Vec::new(),
            trivial: Vec::new(),
            trivial_certificates: Vec::new(),
            rounds: 0,
            tallies: vec![0; tree_count],
        };
        for form in forms {
            if form.edge_count() < 3 {
                if let Some(cert) = trivial_witness(&form, k, seed) {
                    state.trivial_certificates.push(cert);
                }
                state.trivial.push(form);
            } else {
                state.insert_remaining(form);
            }
        }
        Ok(state)
    }

    /// Rebuilds a state from its persisted parts.
    pub fn restore(
        n: usize,
        k: usize,
        remaining: Vec<CanonicalForm>,
        found: Vec<Certificate>,
        trivial: Vec<CanonicalForm>,
        rounds: u64,
        tallies: Vec<u64>,
    ) -> Self {
        let mut state = GeneratorState {
            n,
            k,
            total: remaining.len() + found.len() + trivial.len(),
            duplicates: 0,
            remaining: BTreeMap::new(),
            remaining_count: 0,
            found,
            trivial,
            trivial_certificates: Vec::new(),
            rounds,
            tallies,
        };
        for form in remaining {
            state.insert_remaining(form);
        }
        state
    }

    fn insert_remaining(&mut self, form: CanonicalForm) {
        let h = hash_of(&form);
        self.remaining.entry(form.edge_count()).or_default().entry(h).or_default().push(form);
        self.remaining_count += 1;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Distinct targets (isomorphism classes).
    pub fn total(&self) -> usize {
        self.total
    }

    /// Inputs dropped as isomorphic to an earlier target.
    pub fn duplicates(&self) -> usize {
        self.duplicates
    }

    pub fn remaining_count(&self) -> usize {
        self.remaining_count
    }

    pub fn remaining(&self) -> impl Iterator<Item = &CanonicalForm> {
        self.remaining.values().flat_map(|m| m.values().flatten())
    }

    pub fn found(&self) -> &[Certificate] {
        &self.found
    }

    pub fn trivially_known(&self) -> &[CanonicalForm] {
        &self.trivial
    }

    pub fn trivial_certificates(&self) -> &[Certificate] {
        &self.trivial_certificates
    }

    pub fn rounds_completed(&self) -> u64 {
        self.rounds
    }

    pub fn tallies(&self) -> &[u64] {
        &self.tallies
    }

    pub fn identified(&self) -> usize {
        self.found.len() + self.trivial.len()
    }

    pub fn filter(&self) -> TargetFilter {
        let max_edges = self.n * (self.n - 1) / 2;
        let mut by_edges = vec![0usize; max_edges + 1];
        let mut keys = BTreeSet::new();
        let mut top = 0;
        for (&p, bucket) in &self.remaining {
            let c: usize = bucket.values().map(Vec::len).sum();
            if c > 0 {
                by_edges[p] = c;
                top = top.max(p);
                for form in bucket.values().flatten() {
                    keys.insert(form.graph().degree_key());
                }
            }
        }
        TargetFilter { by_edges, keys: Some(keys), max_edges: top }
    }

    /// Matches canonicalized candidates against the remaining targets, in
    /// sweep order, moving each first match into the found list.
    pub fn absorb(
        &mut self,
        trees: &[TreeSweeper],
        weights: &WeightAssignment,
        cfg: &CampaignConfig,
        phase: usize,
        round: u64,
        sweeps: Vec<TreeSweep>,
    ) -> RoundReport {
        let mut report = RoundReport {
            phase,
            round,
            weights: weights.as_slice().to_vec(),
            ..RoundReport::default()
        };
        for sweep in sweeps {
            let sweeper = trees.iter().find(|s| s.index == sweep.tree).expect("swept tree is known");
            let mut new_here = 0;
            let count = sweep.candidates.len();
            report.tuples += sweep.tuples;
            for mut cand in sweep.candidates {
                cand.canonicalize();
                let (form, h, perm) = cand.canon.take().expect("canonicalized");
                let Some(bucket) = self.remaining.get_mut(&form.edge_count()) else { continue };
                let Some(list) = bucket.get_mut(&h) else { continue };
                let Some(pos) = list.iter().position(|f| *f == form) else { continue };
                list.swap_remove(pos);
                if list.is_empty() {
                    bucket.remove(&h);
                }
                self.remaining_count -= 1;
                let tree = WeightedTree::from_binary(sweeper.tree(), weights).expect("weights sized to tree");
                self.found.push(Certificate {
                    target: form,
                    origin: Origin::Sweep { tree: sweep.tree, phase, round },
                    tree,
                    weights: weights.as_slice().to_vec(),
                    leaf_range: cfg.leaf_range,
                    internal_range: cfg.internal_range,
                    k: cfg.k,
                    intervals: Interval::merge_touching(
                        cand.bounds.iter().map(|&(a, b)| Interval::around(a, b)).collect(),
                    ),
                    sigma: perm,
                    constructed: cand.graph,
                    seed: cfg.seed,
                });
                new_here += 1;
            }
            if let Some(t) = self.tallies.get_mut(sweep.tree) {
                *t += new_here as u64;
            }
            report.candidates += count;
            report.new += new_here;
            report.per_tree.push((sweep.tree, count, new_here));
        }
        self.remaining.retain(|_, b| !b.is_empty());
        self.rounds += 1;
        report.remaining = self.remaining_count;
        report
    }
}

/// Checks that every tree has `n` leaves and builds the sweepers.
pub fn prepare_trees(trees: &[UnrootedBinaryTree], n: usize) -> Result<Vec<TreeSweeper>, GenError> {
    trees
        .iter()
        .enumerate()
        .map(|(i, t)| {
            if t.leaf_count() != n {
                Err(GenError::TreeLeafMismatch { tree: i, leaves: t.leaf_count(), n })
            } else {
                Ok(TreeSweeper::new(i, t.clone()))
            }
        })
        .collect()
}

/// One serial round over the trees selected by `cfg`.
pub fn run_round(
    trees: &[TreeSweeper],
    state: &mut GeneratorState,
    cfg: &CampaignConfig,
    phase: usize,
    round: u64,
) -> Result<RoundReport, GenError> {
    if state.remaining_count() == 0 {
        return Err(GenError::NothingRemaining);
    }
    let selected = cfg.tree_indices(trees.len())?;
    let mut rng = round_rng(cfg.seed, phase, round);
    let weights = sample_weights(&mut rng, state.n(), cfg);
    let filter = state.filter();
    let sweeps: Vec<TreeSweep> = selected
        .iter()
        .map(|&t| sweep_tree(&trees[t], &weights, cfg.k, &filter))
        .collect();
    Ok(state.absorb(trees, &weights, cfg, phase, round, sweeps))
}

/// Result of [`generate`].
#[derive(Clone, Debug)]
pub struct Generated {
    pub state: GeneratorState,
    pub reports: Vec<RoundReport>,
}

/// Runs rounds of phase 0 until no target remains or `keep_going` returns
/// false. Time budgets are enforced by the caller through `keep_going`.
pub fn generate<F>(
    targets: &[LabeledGraph],
    trees: &[UnrootedBinaryTree],
    cfg: &CampaignConfig,
    mut keep_going: F,
) -> Result<Generated, GenError>
where
    F: FnMut(&GeneratorState) -> bool,
{
    cfg.validate()?;
    let mut state = GeneratorState::new(targets, cfg.k, trees.len(), cfg.seed)?;
    let n = state.n();
    let mut reports = Vec::new();
    if n < 3 {
        return Ok(Generated { state, reports });
    }
    let sweepers = prepare_trees(trees, n)?;
    cfg.tree_indices(sweepers.len())?;
    let mut round = 0;
    while state.remaining_count() > 0 && keep_going(&state) {
        reports.push(run_round(&sweepers, &mut state, cfg, 0, round)?);
        round += 1;
    }
    Ok(Generated { state, reports })
}

/// Leaf weights and interval realizing a graph with at most two edges on a
/// star (binarized with zero-weight internal edges), using one interval.
pub fn trivial_witness(form: &CanonicalForm, k: usize, seed: u64) -> Option<Certificate> {
    let g = form.graph();
    let n = g.n();
    if n < 2 || form.edge_count() > 2 {
        return None;
    }
    let edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (u - 1, v - 1)).collect();
    let mut w = vec![1u64; n];
    let target: (u64, u64);
    match edges.as_slice() {
        [] => target = (1, 1),
        [(a, b)] => {
            w[*a] = 100;
            w[*b] = 100;
            target = (200, 200);
        }
        [(a, b), (c, d)] => {
            let shared = [a, b].into_iter().find(|x| *x == c || *x == d).copied();
            if let Some(s) = shared {
                let others: Vec<usize> =
                    [*a, *b, *c, *d].into_iter().filter(|&x| x != s).collect();
                w[s] = 150;
                w[others[0]] = 100;
                w[others[1]] = 100;
                target = (250, 250);
            } else {
                w.iter_mut().for_each(|x| *x = 200);
                w[*a] = 1;
                w[*b] = 100;
                w[*c] = 2;
                w[*d] = 99;
                target = (101, 101);
            }
        }
        _ => return None,
    }

    let star = if n == 2 {
        WeightedTree::new(2, vec![(0, 1, w[0] + w[1])], vec![Some(1), Some(2)])
    } else {
        let star_edges = (0..n).map(|i| (n, i, w[i])).collect();
        let labels = (0..=n).map(|v| (v < n).then_some(v + 1)).collect();
        WeightedTree::new(n + 1, star_edges, labels)
    }
    .ok()?;
    let (bt, bw) = binarize(&star).ok()?;
    let tree = WeightedTree::from_binary(&bt, &bw).ok()?;
    let max_leaf = bw.as_slice()[..n.min(bw.len())].iter().copied().max().unwrap_or(1);
    Some(Certificate {
        target: form.clone(),
        origin: Origin::Trivial,
        tree,
        weights: bw.as_slice().to_vec(),
        leaf_range: Range::new(1, max_leaf.max(1)),
        internal_range: Range::new(1, 1),
        k,
        intervals: vec![Interval::around(target.0, target.1)],
        sigma: (0..n).collect(),
        constructed: g.clone(),
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::gen_binary_trees;
    use crate::weights::leaf_distances;

    fn cfg(k: usize, leaf: (u64, u64), internal: (u64, u64)) -> CampaignConfig {
        CampaignConfig {
            k,
            leaf_range: Range::new(leaf.0, leaf.1),
            internal_range: Range::new(internal.0, internal.1),
            time_budget: Duration::from_secs(1),
            seed: 7,
            trees: Vec::new(),
        }
    }

    fn star_table() -> DistanceTable {
        let t = gen_binary_trees(3).unwrap().remove(0);
        leaf_distances(&t, &WeightAssignment::new(vec![1, 2, 3])).unwrap()
    }

    #[test]
    fn degenerate_ranges_give_all_ones() {
        let mut rng = round_rng(1, 0, 0);
        let w = sample_weights(&mut rng, 6, &cfg(1, (1, 1), (1, 1)));
        assert_eq!(w.as_slice(), &[1; 9]);
    }

    #[test]
    fn ten_leaves_give_seventeen_weights() {
        let mut rng = round_rng(1, 0, 0);
        let c = cfg(2, (1, 20), (1, 50));
        let w = sample_weights(&mut rng, 10, &c);
        assert_eq!(w.len(), 17);
        assert!(w.as_slice()[..10].iter().all(|&x| (1..=20).contains(&x)));
        assert!(w.as_slice()[10..].iter().all(|&x| (1..=50).contains(&x)));
    }

    #[test]
    fn leaf_weight_mean_is_uniform() {
        let c = cfg(1, (1, 20), (1, 50));
        let mut rng = round_rng(99, 0, 0);
        let samples = 100_000;
        let mut sum = 0u64;
        for _ in 0..samples / 3 + 1 {
            let w = sample_weights(&mut rng, 3, &c);
            sum += w.as_slice().iter().sum::<u64>();
        }
        let count = (samples / 3 + 1) * 3;
        let mean = sum as f64 / count as f64;
        // uniform on 1..=20: mean 10.5, variance (20^2 - 1) / 12
        let sigma = libm_sqrt((400.0 - 1.0) / 12.0 / count as f64);
        assert!((mean - 10.5).abs() < 3.0 * sigma, "mean {mean}");
    }

    fn libm_sqrt(x: f64) -> f64 {
        // Newton iteration; core has no sqrt without std
        let mut r = x.max(1e-300);
        for _ in 0..60 {
            r = 0.5 * (r + x / r);
        }
        r
    }

    #[test]
    fn star_distinct_distances() {
        let dd = distinct_distances(&star_table());
        assert_eq!(dd.values, vec![3, 4, 5]);
        assert_eq!(dd.multiplicity, vec![1, 1, 1]);
        assert_eq!(dd.prefix, vec![0, 1, 2, 3]);
    }

    #[test]
    fn equal_weights_group_by_path_length() {
        let t = gen_binary_trees(6).unwrap().remove(0);
        let d = leaf_distances(&t, &WeightAssignment::new(vec![1; 9])).unwrap();
        let dd = distinct_distances(&d);
        assert_eq!(dd.multiplicity.iter().sum::<usize>(), 15);
        // every distinct value is a path length in edges
        assert!(dd.values.iter().all(|&x| (2..=9).contains(&x)));
    }

    #[test]
    fn tuple_enumeration_counts() {
        assert_eq!(enumerate_interval_tuples(1, 1), vec![IntervalTuple::new(vec![(1, 1)])]);
        let three: Vec<_> = enumerate_interval_tuples(3, 1).into_iter().map(|t| t.ranges[0]).collect();
        assert_eq!(three, vec![(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]);
        let four = enumerate_interval_tuples(4, 2);
        assert_eq!(four.iter().filter(|t| t.effective_k() == 2).count(), 15);
        assert_eq!(four.iter().filter(|t| t.effective_k() == 1).count(), 10);
        assert!(four.iter().all(|t| t.is_valid(4)));
    }

    #[test]
    fn edge_counts_on_star() {
        let dd = distinct_distances(&star_table());
        assert_eq!(edge_count_of(&IntervalTuple::new(vec![(1, 3)]), &dd), 3);
        assert_eq!(edge_count_of(&IntervalTuple::new(vec![(2, 2)]), &dd), 1);
        assert_eq!(edge_count_of(&IntervalTuple::new(vec![(1, 1), (3, 3)]), &dd), 2);
    }

    #[test]
    fn build_graph_on_star() {
        let d = star_table();
        let dd = distinct_distances(&d);
        let p3 = build_graph(&d, &IntervalTuple::new(vec![(1, 2)]), &dd);
        assert_eq!(p3.edges().collect::<Vec<_>>(), vec![(1, 2), (1, 3)]);
        let k3 = build_graph(&d, &IntervalTuple::new(vec![(1, 3)]), &dd);
        assert_eq!(k3.edge_count(), 3);
        let two = build_graph(&d, &IntervalTuple::new(vec![(1, 1), (3, 3)]), &dd);
        assert_eq!(two.edges().collect::<Vec<_>>(), vec![(1, 2), (2, 3)]);
        let i = IntervalTuple::new(vec![(1, 2)]).intervals(&dd);
        assert_eq!(i, vec![Interval { lo2: 5, hi2: 9 }]);
    }

    #[test]
    fn three_vertex_targets_in_one_round() {
        let p3 = LabeledGraph::from_edge_list(3, &[(1, 2), (2, 3)]).unwrap();
        let k3 = LabeledGraph::from_edge_list(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        let trees = gen_binary_trees(3).unwrap();
        let sweepers = prepare_trees(&trees, 3).unwrap();
        let c = cfg(1, (1, 3), (1, 1));
        let mut state = GeneratorState::new(&[p3, k3], 1, 1, c.seed).unwrap();
        // P3 has two edges: handled without a sweep
        assert_eq!(state.trivially_known().len(), 1);
        let w = WeightAssignment::new(vec![1, 2, 3]);
        let sweep = sweep_tree(&sweepers[0], &w, 1, &state.filter());
        let report = state.absorb(&sweepers, &w, &c, 0, 0, vec![sweep]);
        assert_eq!(report.new, 1);
        assert_eq!(state.remaining_count(), 0);
    }

    #[test]
    fn sweep_finds_p3_when_not_trivial() {
        // with a hand-built state holding P3 as a sweep target
        let p3 = canonical_graph(&LabeledGraph::from_edge_list(3, &[(1, 2), (2, 3)]).unwrap()).0;
        let k3 = canonical_graph(&LabeledGraph::from_edge_list(3, &[(1, 2), (2, 3), (1, 3)]).unwrap()).0;
        let mut state = GeneratorState::restore(3, 1, vec![p3, k3], Vec::new(), Vec::new(), 0, vec![0]);
        let trees = gen_binary_trees(3).unwrap();
        let sweepers = prepare_trees(&trees, 3).unwrap();
        let c = cfg(1, (1, 3), (1, 1));
        let w = WeightAssignment::new(vec![1, 2, 3]);
        let sweep = sweep_tree(&sweepers[0], &w, 1, &state.filter());
        let report = state.absorb(&sweepers, &w, &c, 0, 0, vec![sweep]);
        assert_eq!(report.new, 2);
        assert_eq!(state.remaining_count(), 0);
        assert_eq!(state.tallies(), &[2]);
    }

    #[test]
    fn empty_remaining_is_rejected() {
        let k3 = LabeledGraph::from_edge_list(3, &[(1, 2)]).unwrap();
        let mut state = GeneratorState::new(&[k3], 1, 1, 0).unwrap();
        let trees = prepare_trees(&gen_binary_trees(3).unwrap(), 3).unwrap();
        assert_eq!(
            run_round(&trees, &mut state, &cfg(1, (1, 5), (1, 5)), 0, 0),
            Err(GenError::NothingRemaining)
        );
    }

    #[test]
    fn mixed_vertex_counts() {
        let a = LabeledGraph::empty(3).unwrap();
        let b = LabeledGraph::empty(4).unwrap();
        assert_eq!(
            GeneratorState::new(&[a, b], 1, 1, 0).unwrap_err(),
            GenError::MixedVertexCounts { expected: 3, found: 4 }
        );
    }

    #[test]
    fn tree_leaf_mismatch() {
        let trees = gen_binary_trees(4).unwrap();
        assert!(matches!(prepare_trees(&trees, 5), Err(GenError::TreeLeafMismatch { .. })));
    }

    #[test]
    fn config_validation() {
        assert!(cfg(1, (1, 2), (1, 2)).validate().is_ok());
        assert!(cfg(0, (1, 2), (1, 2)).validate().is_err());
        assert!(cfg(1, (0, 2), (1, 2)).validate().is_err());
        assert!(cfg(1, (3, 2), (1, 2)).validate().is_err());
        assert!(cfg(1, (1, 2), (0, 2)).validate().is_err());
        let mut c = cfg(1, (1, 2), (1, 2));
        c.time_budget = Duration::ZERO;
        assert!(c.validate().is_err());
    }

    #[test]
    fn touching_intervals_merge() {
        let dd = distinct_distances(&star_table());
        let t = IntervalTuple::new(vec![(1, 1), (2, 3)]);
        assert_eq!(t.intervals(&dd), vec![Interval::around(3, 5)]);
        let apart = Interval::merge_touching(vec![Interval::around(7, 9), Interval::around(3, 4)]);
        assert_eq!(apart, vec![Interval::around(3, 4), Interval::around(7, 9)]);
    }

    #[test]
    fn interval_endpoints() {
        let i = Interval::around(3, 4);
        assert_eq!((i.lo2, i.hi2), (5, 9));
        assert!(i.contains(3) && i.contains(4) && !i.contains(2) && !i.contains(5));
        assert!(i.is_half_integral());
    }

    #[test]
    fn round_is_deterministic() {
        let targets = crate::catalog::nonisomorphic_graphs(5);
        let trees = gen_binary_trees(5).unwrap();
        let c = cfg(1, (1, 20), (1, 50));
        let run = || {
            let mut rounds = 0;
            generate(&targets, &trees, &c, |_| {
                rounds += 1;
                rounds <= 3
            })
            .unwrap()
            .reports
        };
        assert_eq!(run(), run());
    }
}
