//! Multi-phase campaign driver with on-disk state.
//!
//! An output directory holds four files:
//!
//! - `certificates.tsv`: one record per identified graph, append-only
//! - `report.tsv`: checkpoint rows
//! - `state.json`: snapshot written after every round, used by `--resume`
//! - `remaining.g6`: unidentified targets, written when the campaign stops

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use ipcg_core::canon::CanonicalForm;
use ipcg_core::certificate::Origin;
use ipcg_core::graph::{LabeledGraph, VertexColoring};
use ipcg_core::sweep::{
    prepare_trees, round_rng, sample_weights, sweep_tree, CampaignConfig, GeneratorState, RoundReport, TreeSweep,
    TreeSweeper,
};
use ipcg_core::trees::gen_binary_trees;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph6::{parse_graph6, write_graph6};
use crate::records::{format_certificate, parse_certificate};
use crate::schedule::Schedule;

pub const CERTIFICATES: &str = "certificates.tsv";
pub const REPORT: &str = "report.tsv";
pub const STATE: &str = "state.json";
pub const REMAINING: &str = "remaining.g6";

pub const REPORT_HEADER: &str = "elapsed_s\tphase\trounds\tgenerated\ttrivial\tremaining";

/// Problems with the user's inputs, as opposed to IO failures.
#[derive(Debug, Error)]
#[error("{0}")]
pub struct InputError(pub String);

fn input<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(InputError(msg.into()).into())
}

#[derive(Clone, Debug)]
pub struct CampaignOptions {
    pub k: usize,
    pub seed: u64,
    pub schedule: Schedule,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
    /// Minimum spacing of checkpoint rows within a phase.
    pub checkpoint: Duration,
    pub out: PathBuf,
    pub resume: bool,
}

/// Everything needed to continue an interrupted campaign.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub schedule: String,
    pub targets: usize,
    pub duplicates: usize,
    /// Next phase to run, 0-based; equal to the phase count when finished.
    pub phase: usize,
    /// Next round within `phase`.
    pub round: u64,
    pub phase_elapsed_s: f64,
    pub elapsed_s: f64,
    pub rounds: u64,
    pub certificates_bytes: u64,
    pub report_bytes: u64,
    pub tallies: Vec<u64>,
    pub generated: usize,
    pub trivial: Vec<String>,
    pub remaining: Vec<String>,
}

impl Snapshot {
    pub fn load(dir: &Path) -> anyhow::Result<Snapshot> {
        let path = dir.join(STATE);
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    fn store(&self, dir: &Path) -> anyhow::Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        serde_json::to_writer(BufWriter::new(&mut tmp), self)?;
        tmp.persist(dir.join(STATE))?;
        Ok(())
    }
}

/// One checkpoint row of `report.tsv`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub elapsed_s: f64,
    /// 1-based; 0 for the row written before any phase runs.
    pub phase: usize,
    pub rounds: u64,
    pub generated: usize,
    pub trivial: usize,
    pub remaining: usize,
}

impl ReportRow {
    pub fn to_line(&self) -> String {
        format!(
            "{:.3}\t{}\t{}\t{}\t{}\t{}",
            self.elapsed_s, self.phase, self.rounds, self.generated, self.trivial, self.remaining
        )
    }

    pub fn parse(line: &str) -> anyhow::Result<ReportRow> {
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 6 {
            bail!("report row {line:?} has {} fields", f.len());
        }
        Ok(ReportRow {
            elapsed_s: f[0].parse()?,
            phase: f[1].parse()?,
            rounds: f[2].parse()?,
            generated: f[3].parse()?,
            trivial: f[4].parse()?,
            remaining: f[5].parse()?,
        })
    }
}

pub fn read_report(dir: &Path) -> anyhow::Result<Vec<ReportRow>> {
    let path = dir.join(REPORT);
    let file = File::open(&path).with_context(|| format!("opening {}", path.display()))?;
    let mut rows = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        if line.is_empty() || line == REPORT_HEADER {
            continue;
        }
        rows.push(ReportRow::parse(&line)?);
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub total: usize,
    pub generated: usize,
    pub trivial: usize,
    pub remaining: usize,
    pub rounds: u64,
    pub tallies: Vec<u64>,
}

impl Outcome {
    pub fn complete(&self) -> bool {
        self.remaining == 0
    }
}

/// One round with the tree sweeps and candidate canonicalization spread
/// over `pool`. Matching runs in tree order, so the result does not depend
/// on the number of threads.
pub fn parallel_round(
    pool: &rayon::ThreadPool,
    trees: &[TreeSweeper],
    state: &mut GeneratorState,
    cfg: &CampaignConfig,
    phase: usize,
    round: u64,
) -> anyhow::Result<RoundReport> {
    let selected = cfg.tree_indices(trees.len()).map_err(|e| InputError(e.to_string()))?;
    let mut rng = round_rng(cfg.seed, phase, round);
    let weights = sample_weights(&mut rng, state.n(), cfg);
    let filter = state.filter();
    let sweeps: Vec<TreeSweep> = pool.install(|| {
        selected
            .par_iter()
            .map(|&t| {
                let mut s = sweep_tree(&trees[t], &weights, cfg.k, &filter);
                s.candidates.par_iter_mut().for_each(|c| c.canonicalize());
                s
            })
            .collect()
    });
    Ok(state.absorb(trees, &weights, cfg, phase, round, sweeps))
}

fn form_of(text: &str) -> anyhow::Result<CanonicalForm> {
    let g = parse_graph6(text)?;
    let n = g.n();
    Ok(CanonicalForm::from_parts(g, VertexColoring::uniform(n)))
}

struct Files {
    certs: File,
    report: File,
}

impl Files {
    fn append_row(&mut self, row: &ReportRow) -> anyhow::Result<()> {
        writeln!(self.report, "{}", row.to_line())?;
        self.report.flush()?;
        Ok(())
    }
}

fn write_remaining(dir: &Path, state: &GeneratorState) -> anyhow::Result<()> {
    let mut w = BufWriter::new(File::create(dir.join(REMAINING))?);
    for f in state.remaining() {
        writeln!(w, "{}", write_graph6(f.graph()))?;
    }
    w.flush()?;
    Ok(())
}

/// Runs (or resumes) a campaign over `targets`, writing artifacts to
/// `opts.out`. `log` receives one line per checkpoint.
pub fn run_campaign(
    targets: &[LabeledGraph],
    opts: &CampaignOptions,
    mut log: impl FnMut(&str),
) -> anyhow::Result<Outcome> {
    let Some(first) = targets.first() else {
        return input("target file holds no graphs");
    };
    let n = first.n();
    let trees = if n >= 3 {
        gen_binary_trees(n).map_err(|e| InputError(e.to_string()))?
    } else {
        Vec::new()
    };
    for (i, p) in opts.schedule.phases.iter().enumerate() {
        let cfg = p.config(opts.k, opts.seed);
        cfg.validate().map_err(|e| InputError(format!("phase {}: {e}", i + 1)))?;
        if n >= 3 {
            cfg.tree_indices(trees.len()).map_err(|e| InputError(format!("phase {}: {e}", i + 1)))?;
        }
    }
    let sweepers = prepare_trees(&trees, n).map_err(|e| InputError(e.to_string()))?;
    let schedule_text = opts.schedule.to_string();
    let dir = opts.out.as_path();
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;

    let resume = opts.resume && dir.join(STATE).exists();
    let (mut state, mut snap, mut files) = if resume {
        let snap = Snapshot::load(dir)?;
        let distinct = GeneratorState::new(targets, opts.k, trees.len(), opts.seed)
            .map_err(|e| InputError(e.to_string()))?;
        if snap.n != n
            || snap.k != opts.k
            || snap.seed != opts.seed
            || snap.schedule != schedule_text
            || snap.targets != distinct.total()
        {
            return input("saved state belongs to a different campaign (targets, k, seed or schedule differ)");
        }
        let certs = OpenOptions::new().read(true).write(true).open(dir.join(CERTIFICATES))?;
        certs.set_len(snap.certificates_bytes)?;
        let mut found = Vec::new();
        for (i, line) in BufReader::new(&certs).lines().enumerate() {
            let cert = parse_certificate(&line?).with_context(|| format!("certificate record {}", i + 1))?;
            if matches!(cert.origin, Origin::Sweep { .. }) {
                found.push(cert);
            }
        }
        let report = OpenOptions::new().write(true).open(dir.join(REPORT))?;
        report.set_len(snap.report_bytes)?;
        let remaining = snap.remaining.iter().map(|s| form_of(s)).collect::<anyhow::Result<Vec<_>>>()?;
        let trivial = snap.trivial.iter().map(|s| form_of(s)).collect::<anyhow::Result<Vec<_>>>()?;
        let state = GeneratorState::restore(n, opts.k, remaining, found, trivial, snap.rounds, snap.tallies.clone());
        let certs = OpenOptions::new().append(true).open(dir.join(CERTIFICATES))?;
        let report = OpenOptions::new().append(true).open(dir.join(REPORT))?;
        log(&format!("resuming at phase {} round {}", snap.phase + 1, snap.round + 1));
        (state, snap, Files { certs, report })
    } else {
        let state = GeneratorState::new(targets, opts.k, trees.len(), opts.seed)
            .map_err(|e| InputError(e.to_string()))?;
        let mut certs = File::create(dir.join(CERTIFICATES))?;
        for c in state.trivial_certificates() {
            writeln!(certs, "{}", format_certificate(c))?;
        }
        certs.flush()?;
        let mut report = File::create(dir.join(REPORT))?;
        writeln!(report, "{REPORT_HEADER}")?;
        let mut files = Files { certs, report };
        let row = ReportRow {
            elapsed_s: 0.0,
            phase: 0,
            rounds: 0,
            generated: 0,
            trivial: state.trivially_known().len(),
            remaining: state.remaining_count(),
        };
        files.append_row(&row)?;
        let snap = Snapshot {
            n,
            k: opts.k,
            seed: opts.seed,
            schedule: schedule_text.clone(),
            targets: state.total(),
            duplicates: state.duplicates(),
            phase: 0,
            round: 0,
            phase_elapsed_s: 0.0,
            elapsed_s: 0.0,
            rounds: 0,
            certificates_bytes: 0,
            report_bytes: 0,
            tallies: state.tallies().to_vec(),
            generated: 0,
            trivial: state.trivially_known().iter().map(|f| write_graph6(f.graph())).collect(),
            remaining: Vec::new(),
        };
        (state, snap, files)
    };

    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.threads).build()?;
    let started = Instant::now();
    let elapsed_base = snap.elapsed_s;
    let elapsed = || elapsed_base + started.elapsed().as_secs_f64();

    let save = |snap: &mut Snapshot, state: &GeneratorState, files: &mut Files| -> anyhow::Result<()> {
        snap.elapsed_s = elapsed();
        snap.rounds = state.rounds_completed();
        snap.tallies = state.tallies().to_vec();
        snap.generated = state.found().len();
        snap.certificates_bytes = files.certs.metadata()?.len();
        snap.report_bytes = files.report.metadata()?.len();
        snap.remaining = state.remaining().map(|f| write_graph6(f.graph())).collect();
        snap.store(dir)
    };
    let row_of = |state: &GeneratorState, phase: usize| ReportRow {
        elapsed_s: elapsed(),
        phase,
        rounds: state.rounds_completed(),
        generated: state.found().len(),
        trivial: state.trivially_known().len(),
        remaining: state.remaining_count(),
    };
    if !resume {
        save(&mut snap, &state, &mut files)?;
    }

    while snap.phase < opts.schedule.phases.len() && state.remaining_count() > 0 {
        let phase = &opts.schedule.phases[snap.phase];
        let cfg = phase.config(opts.k, opts.seed);
        let mut last_row = Instant::now();
        while state.remaining_count() > 0
            && snap.phase_elapsed_s < phase.time.as_secs_f64()
            && phase.max_rounds.is_none_or(|m| snap.round < m)
        {
            let t0 = Instant::now();
            let before = state.found().len();
            parallel_round(&pool, &sweepers, &mut state, &cfg, snap.phase, snap.round)?;
            {
                let mut w = BufWriter::new(&mut files.certs);
                for c in &state.found()[before..] {
                    writeln!(w, "{}", format_certificate(c))?;
                }
                w.flush()?;
            }
            snap.round += 1;
            snap.phase_elapsed_s += t0.elapsed().as_secs_f64();
            if last_row.elapsed() >= opts.checkpoint {
                let row = row_of(&state, snap.phase + 1);
                log(&row.to_line());
                files.append_row(&row)?;
                last_row = Instant::now();
            }
            save(&mut snap, &state, &mut files)?;
        }
        let row = row_of(&state, snap.phase + 1);
        log(&row.to_line());
        files.append_row(&row)?;
        snap.phase += 1;
        snap.round = 0;
        snap.phase_elapsed_s = 0.0;
        save(&mut snap, &state, &mut files)?;
    }
    write_remaining(dir, &state)?;

    Ok(Outcome {
        total: state.total(),
        generated: state.found().len(),
        trivial: state.trivially_known().len(),
        remaining: state.remaining_count(),
        rounds: state.rounds_completed(),
        tallies: state.tallies().to_vec(),
    })
}
