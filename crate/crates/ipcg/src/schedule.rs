//! Campaign schedules: one phase per line,
//! `leaf=a1:a2 internal=a3:a4 time=secs trees=i,j,k`.
//!
//! `trees` is optional (all trees) and takes 1-based indices. An optional
//! `rounds=r` caps the phase at `r` rounds in addition to its time budget.
//! Blank lines and `#` comments are ignored.

use std::fmt;
use std::time::Duration;

use ipcg_core::certificate::Range;
use ipcg_core::sweep::CampaignConfig;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScheduleError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("schedule has no phases")]
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phase {
    pub leaf: Range,
    pub internal: Range,
    pub time: Duration,
    /// 0-based; empty selects every tree.
    pub trees: Vec<usize>,
    pub max_rounds: Option<u64>,
}

impl Phase {
    pub fn config(&self, k: usize, seed: u64) -> CampaignConfig {
        CampaignConfig {
            k,
            leaf_range: self.leaf,
            internal_range: self.internal,
            time_budget: self.time,
            seed,
            trees: self.trees.clone(),
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "leaf={}:{} internal={}:{} time={}",
            self.leaf.lo,
            self.leaf.hi,
            self.internal.lo,
            self.internal.hi,
            self.time.as_secs_f64()
        )?;
        if !self.trees.is_empty() {
            let t: Vec<String> = self.trees.iter().map(|t| (t + 1).to_string()).collect();
            write!(f, " trees={}", t.join(","))?;
        }
        if let Some(r) = self.max_rounds {
            write!(f, " rounds={r}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    pub phases: Vec<Phase>,
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.phases {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

pub fn parse_range(s: &str) -> Result<Range, String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("range {s:?} is not a:b"))?;
    let lo: u64 = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
    let hi: u64 = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
    if lo == 0 || lo > hi {
        return Err(format!("range {s:?} must satisfy 1 <= a <= b"));
    }
    Ok(Range::new(lo, hi))
}

pub fn parse_tree_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(i) if i > 0 => Ok(i - 1),
            _ => Err(format!("bad tree index {t:?}")),
        })
        .collect()
}

pub fn parse_seconds(s: &str) -> Result<Duration, String> {
    let secs: f64 = s.parse().map_err(|_| format!("bad time {s:?}"))?;
    if !(secs > 0.0 && secs.is_finite()) {
        return Err(format!("time {s:?} must be positive"));
    }
    Ok(Duration::from_secs_f64(secs))
}

fn parse_phase(line: &str) -> Result<Phase, String> {
    let (mut leaf, mut internal, mut time, mut trees, mut rounds) = (None, None, None, Vec::new(), None);
    for tok in line.split_whitespace() {
        let (k, v) = tok.split_once('=').ok_or_else(|| format!("token {tok:?} is not key=value"))?;
        match k {
            "leaf" => leaf = Some(parse_range(v)?),
            "internal" => internal = Some(parse_range(v)?),
            "time" => time = Some(parse_seconds(v)?),
            "trees" => trees = parse_tree_list(v)?,
            "rounds" => {
                rounds = Some(v.parse::<u64>().ok().filter(|&r| r > 0).ok_or_else(|| format!("bad rounds {v:?}"))?)
            }
            _ => return Err(format!("unknown key {k:?}")),
        }
    }
    Ok(Phase {
        leaf: leaf.ok_or("missing leaf=")?,
        internal: internal.ok_or("missing internal=")?,
        time: time.ok_or("missing time=")?,
        trees,
        max_rounds: rounds,
    })
}

pub fn parse_schedule(text: &str) -> Result<Schedule, ScheduleError> {
    let mut phases = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        phases.push(parse_phase(line).map_err(|msg| ScheduleError::Line { line: i + 1, msg })?);
    }
    if phases.is_empty() {
        return Err(ScheduleError::Empty);
    }
    Ok(Schedule { phases })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_phases() {
        let s = parse_schedule(
            "# escalation\nleaf=1:20 internal=1:50 time=3600 trees=1,2,3,4\n\nleaf=1:20 internal=1:50 time=1.5 trees=5,6,7,8 rounds=3\n",
        )
        .unwrap();
        assert_eq!(s.phases.len(), 2);
        assert_eq!(s.phases[0].leaf, Range::new(1, 20));
        assert_eq!(s.phases[0].trees, vec![0, 1, 2, 3]);
        assert_eq!(s.phases[1].time, Duration::from_millis(1500));
        assert_eq!(s.phases[1].max_rounds, Some(3));
        assert_eq!(parse_schedule(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn trees_default_to_all() {
        let s = parse_schedule("leaf=1:5 internal=2:3 time=10").unwrap();
        assert!(s.phases[0].trees.is_empty());
        let c = s.phases[0].config(2, 9);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn rejects() {
        assert_eq!(parse_schedule("\n# nothing\n"), Err(ScheduleError::Empty));
        for bad in [
            "leaf=1:5 internal=1:5",
            "leaf=0:5 internal=1:5 time=1",
            "leaf=5:1 internal=1:5 time=1",
            "leaf=1:5 internal=1:5 time=0",
            "leaf=1:5 internal=1:5 time=1 trees=0",
            "leaf=1:5 internal=1:5 time=1 color=red",
            "leaf=1:5 internal=1:5 time=1 stray",
        ] {
            assert!(matches!(parse_schedule(bad), Err(ScheduleError::Line { line: 1, .. })), "{bad}");
        }
    }
}
