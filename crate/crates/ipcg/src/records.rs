//! Certificate records: one line per identified graph, tab-separated
//! `key=value` fields.
//!
//! ```text
//! target=DQc  source=tree:2  phase=1  round=4  seed=7  k=2  leaf=1:50
//! internal=1:100  intervals=2.5:9.5;12.5:14.5  sigma=3,1,2,5,4  graph=DJc
//! newick=((2:13,3:40):7,1:22,...);
//! ```
//!
//! `source` is `tree:i` for sweep discoveries (1-based tree index) or
//! `trivial` for directly built witnesses. Phase, round and sigma are 1-based.
//! The weight vector is the Newick branch lengths in edge order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use ipcg_core::canon::CanonicalForm;
use ipcg_core::certificate::{Certificate, Interval, Origin, Range};
use ipcg_core::graph::VertexColoring;
use thiserror::Error;

use crate::graph6::{parse_graph6, write_graph6, Graph6Error};
use crate::newick::{parse_newick, write_newick, NewickError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RecordError {
    #[error("field {0:?} is missing")]
    Missing(&'static str),
    #[error("field {0:?} has no '='")]
    NoEquals(String),
    #[error("field {0:?} appears twice")]
    Duplicate(String),
    #[error("field {key}: cannot parse {value:?}")]
    Bad { key: &'static str, value: String },
    #[error("field {key}: {source}")]
    Graph6 { key: &'static str, source: Graph6Error },
    #[error("newick: {0}")]
    Newick(#[from] NewickError),
}

fn half(x2: i64) -> String {
    let sign = if x2 < 0 { "-" } else { "" };
    let a = x2.unsigned_abs();
    if a % 2 == 0 {
        format!("{sign}{}", a / 2)
    } else {
        format!("{sign}{}.5", a / 2)
    }
}

/// Parses `x`, `x.0` or `x.5` into twice its value.
fn parse_half(s: &str) -> Option<i64> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, "0"));
    if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let whole: i64 = int.parse().ok()?;
    let extra = match frac {
        "0" | "" => 0,
        "5" => 1,
        _ => return None,
    };
    let v = 2 * whole + extra;
    Some(if neg { -v } else { v })
}

fn range_text(r: Range) -> String {
    format!("{}:{}", r.lo, r.hi)
}

pub fn format_intervals(iv: &[Interval]) -> String {
    iv.iter().map(|i| format!("{}:{}", half(i.lo2), half(i.hi2))).collect::<Vec<_>>().join(";")
}

pub fn parse_intervals(s: &str) -> Option<Vec<Interval>> {
    if s.is_empty() {
        return Some(Vec::new());
    }
    s.split(';')
        .map(|part| {
            let (a, b) = part.split_once(':')?;
            Some(Interval { lo2: parse_half(a)?, hi2: parse_half(b)? })
        })
        .collect()
}

pub fn format_certificate(c: &Certificate) -> String {
    let mut s = String::new();
    let source = match c.origin {
        Origin::Sweep { tree, phase, round } => {
            format!("tree:{}\tphase={}\tround={}", tree + 1, phase + 1, round + 1)
        }
        Origin::Trivial => "trivial".to_string(),
    };
    let sigma: Vec<String> = c.sigma.iter().map(|&x| (x + 1).to_string()).collect();
    write!(
        s,
        "target={}\tsource={source}\tseed={}\tk={}\tleaf={}\tinternal={}\tintervals={}\tsigma={}\tgraph={}\tnewick={}",
        write_graph6(c.target.graph()),
        c.seed,
        c.k,
        range_text(c.leaf_range),
        range_text(c.internal_range),
        format_intervals(&c.intervals),
        sigma.join(","),
        write_graph6(&c.constructed),
        write_newick(&c.tree),
    )
    .expect("writing to a string");
    s
}

pub fn parse_certificate(line: &str) -> Result<Certificate, RecordError> {
    let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
    for part in line.trim_end_matches(['\n', '\r']).split('\t') {
        let (k, v) = part.split_once('=').ok_or_else(|| RecordError::NoEquals(part.to_string()))?;
        if fields.insert(k, v).is_some() {
            return Err(RecordError::Duplicate(k.to_string()));
        }
    }
    let get = |key: &'static str| fields.get(key).copied().ok_or(RecordError::Missing(key));
    let bad = |key: &'static str, value: &str| RecordError::Bad { key, value: value.to_string() };
    let num = |key: &'static str| -> Result<u64, RecordError> {
        let v = get(key)?;
        v.parse().map_err(|_| bad(key, v))
    };
    let range = |key: &'static str| -> Result<Range, RecordError> {
        let v = get(key)?;
        let (a, b) = v.split_once(':').ok_or_else(|| bad(key, v))?;
        Ok(Range::new(a.parse().map_err(|_| bad(key, v))?, b.parse().map_err(|_| bad(key, v))?))
    };
    let graph = |key: &'static str| {
        parse_graph6(get(key)?).map_err(|source| RecordError::Graph6 { key, source })
    };

    let target = graph("target")?;
    let n = target.n();
    let source = get("source")?;
    let origin = if source == "trivial" {
        Origin::Trivial
    } else {
        let tree: usize = source
            .strip_prefix("tree:")
            .and_then(|t| t.parse().ok())
            .filter(|&t| t > 0)
            .ok_or_else(|| bad("source", source))?;
        let phase = num("phase")?;
        let round = num("round")?;
        if phase == 0 || round == 0 {
            return Err(bad("round", get("round")?));
        }
        Origin::Sweep { tree: tree - 1, phase: phase as usize - 1, round: round - 1 }
    };
    let intervals = parse_intervals(get("intervals")?).ok_or_else(|| bad("intervals", fields["intervals"]))?;
    let sigma_text = get("sigma")?;
    let sigma = sigma_text
        .split(',')
        .map(|x| x.parse::<usize>().ok().filter(|&x| x > 0).map(|x| x - 1))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| bad("sigma", sigma_text))?;
    let tree = parse_newick(get("newick")?)?;
    let weights = tree.edges().iter().map(|e| e.2).collect();
    Ok(Certificate {
        target: CanonicalForm::from_parts(target, VertexColoring::uniform(n)),
        origin,
        tree,
        weights,
        leaf_range: range("leaf")?,
        internal_range: range("internal")?,
        k: num("k")? as usize,
        intervals,
        sigma,
        constructed: graph("graph")?,
        seed: num("seed")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ipcg_core::canonical_graph;
    use ipcg_core::graph::LabeledGraph;
    use ipcg_core::sweep::trivial_witness;
    use ipcg_core::verify::verify_certificate;

    #[test]
    fn halves() {
        for x in [-3, -1, 0, 1, 5, 9, 10] {
            assert_eq!(parse_half(&half(x)), Some(x), "{x}");
        }
        assert_eq!(half(5), "2.5");
        assert_eq!(half(-1), "-0.5");
        assert_eq!(parse_half("2.25"), None);
        assert_eq!(parse_half("a"), None);
        assert_eq!(parse_half("3"), Some(6));
    }

    #[test]
    fn intervals_text() {
        let iv = vec![Interval::around(3, 4), Interval::around(7, 9)];
        assert_eq!(format_intervals(&iv), "2.5:4.5;6.5:9.5");
        assert_eq!(parse_intervals("2.5:4.5;6.5:9.5"), Some(iv));
        assert_eq!(parse_intervals("2.5"), None);
    }

    #[test]
    fn trivial_record_round_trip() {
        let g = LabeledGraph::from_edge_list(5, &[(1, 2), (3, 4)]).unwrap();
        let form = canonical_graph(&g).0;
        let cert = trivial_witness(&form, 2, 11).unwrap();
        let line = format_certificate(&cert);
        assert!(line.contains("source=trivial"));
        let back = parse_certificate(&line).unwrap();
        assert!(verify_certificate(&back).is_valid());
        assert_eq!(format_certificate(&back), line);
        assert_eq!(back.target, cert.target);
        assert_eq!(back.sigma, cert.sigma);
    }

    #[test]
    fn broken_records() {
        assert_eq!(parse_certificate("target"), Err(RecordError::NoEquals("target".into())));
        assert_eq!(parse_certificate("k=1"), Err(RecordError::Missing("target")));
        assert_eq!(parse_certificate("k=1\tk=2"), Err(RecordError::Duplicate("k".into())));
        assert!(matches!(parse_certificate("target=A!"), Err(RecordError::Graph6 { .. })));
    }
}
