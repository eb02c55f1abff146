//! Witness records proving a graph is a k-IPCG.

use alloc::vec::Vec;

use crate::canon::CanonicalForm;
use crate::graph::LabeledGraph;
use crate::weights::WeightedTree;

/// Closed interval whose endpoints are stored doubled, so `[2.5, 4.5]` is
/// `lo2 = 5, hi2 = 9`. Intervals built from integer distances `[a, b]` have
/// endpoints `a - 1/2` and `b + 1/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub lo2: i64,
    pub hi2: i64,
}

impl Interval {
    /// `[lo - 1/2, hi + 1/2]`.
    pub fn around(lo: u64, hi: u64) -> Self {
        Interval { lo2: 2 * lo as i64 - 1, hi2: 2 * hi as i64 + 1 }
    }

    pub fn contains(&self, d: u64) -> bool {
        let d2 = 2 * d as i64;
        self.lo2 <= d2 && d2 <= self.hi2
    }

    /// Sorts `iv` and joins intervals that share an endpoint. Intervals built
    /// from consecutive integer distances `b` and `b + 1` touch at `b + 1/2`;
    /// joining them leaves the covered integers unchanged.
    pub fn merge_touching(mut iv: Vec<Interval>) -> Vec<Interval> {
        iv.sort();
        let mut out: Vec<Interval> = Vec::with_capacity(iv.len());
        for i in iv {
            match out.last_mut() {
                Some(last) if i.lo2 <= last.hi2 => last.hi2 = last.hi2.max(i.hi2),
                _ => out.push(i),
            }
        }
        out
    }

    /// Both endpoints are an integer plus or minus one half.
    pub fn is_half_integral(&self) -> bool {
        self.lo2.rem_euclid(2) == 1 && self.hi2.rem_euclid(2) == 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Range {
    pub lo: u64,
    pub hi: u64,
}

impl Range {
    pub fn new(lo: u64, hi: u64) -> Self {
        Range { lo, hi }
    }

    pub fn contains(&self, w: u64) -> bool {
        self.lo <= w && w <= self.hi
    }
}

/// Where a certificate came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    /// Sweep over tree `tree` (0-based index into the campaign's tree list).
    Sweep { tree: usize, phase: usize, round: u64 },
    /// Directly constructed witness for a graph with fewer than three edges.
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// Canonical form of the identified target.
    pub target: CanonicalForm,
    pub origin: Origin,
    /// Witness tree with its weights as edge lengths.
    pub tree: WeightedTree,
    /// Weights in edge-index order: pendant edges of leaves `1..=n`, then
    /// internal edges.
    pub weights: Vec<u64>,
    pub leaf_range: Range,
    pub internal_range: Range,
    /// Interval budget of the campaign; `intervals.len() <= k`.
    pub k: usize,
    pub intervals: Vec<Interval>,
    /// `sigma[i]` is the 0-based target vertex placed on leaf `i + 1`.
    pub sigma: Vec<usize>,
    /// Graph the generator built under the identity leaf bijection.
    pub constructed: LabeledGraph,
    pub seed: u64,
}
