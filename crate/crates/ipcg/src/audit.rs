//! Batch checking of certificate files.

use std::collections::BTreeSet;
use std::io::BufRead;

use ipcg_core::canon::{canonical_graph, CanonicalForm};
use ipcg_core::graph::LabeledGraph;
use ipcg_core::verify::{verify_certificate, Clause};
use rayon::prelude::*;

use crate::records::parse_certificate;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecordVerdict {
    Pass,
    /// First violated clause and its description.
    Fail(Clause, String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditSummary {
    /// One line per record: `PASS <target>` or `FAIL <clause> <target> <why>`.
    pub lines: Vec<String>,
    pub records: usize,
    pub passed: usize,
    /// Distinct targets certified, when a target list was given.
    pub covered: Option<(usize, usize)>,
}

impl AuditSummary {
    pub fn failed(&self) -> usize {
        self.records - self.passed
    }
}

fn check_line(line: &str, targets: Option<&BTreeSet<CanonicalForm>>) -> (String, RecordVerdict) {
    let target_text = line
        .split('\t')
        .find_map(|f| f.strip_prefix("target="))
        .unwrap_or("?")
        .to_string();
    let cert = match parse_certificate(line) {
        Ok(c) => c,
        Err(e) => return (target_text, RecordVerdict::Fail(Clause::Structure, e.to_string())),
    };
    let verdict = verify_certificate(&cert);
    if let Some(v) = verdict.violations.first() {
        return (target_text, RecordVerdict::Fail(v.clause, v.detail.clone()));
    }
    if let Some(t) = targets {
        if !t.contains(&cert.target) {
            return (target_text, RecordVerdict::Fail(Clause::Structure, "target is not in the target set".into()));
        }
    }
    (target_text, RecordVerdict::Pass)
}

/// Verifies every non-blank line of `reader` as a certificate record.
pub fn audit<R: BufRead>(reader: R, targets: Option<&[LabeledGraph]>) -> anyhow::Result<AuditSummary> {
    let lines: Vec<String> =
        reader.lines().collect::<Result<Vec<_>, _>>()?.into_iter().filter(|l| !l.trim().is_empty()).collect();
    let target_set: Option<BTreeSet<CanonicalForm>> =
        targets.map(|ts| ts.iter().map(|g| canonical_graph(g).0).collect());
    let results: Vec<(String, RecordVerdict)> =
        lines.par_iter().map(|l| check_line(l, target_set.as_ref())).collect();

    let mut summary = AuditSummary { records: results.len(), ..AuditSummary::default() };
    let mut certified = BTreeSet::new();
    for (target, verdict) in results {
        match verdict {
            RecordVerdict::Pass => {
                summary.passed += 1;
                summary.lines.push(format!("PASS\t{target}"));
                certified.insert(target);
            }
            RecordVerdict::Fail(clause, why) => {
                summary.lines.push(format!("FAIL\t{clause}\t{target}\t{why}"));
            }
        }
    }
    summary.covered = target_set.map(|t| (certified.len(), t.len()));
    Ok(summary)
}
