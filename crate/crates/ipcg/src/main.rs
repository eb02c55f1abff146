use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use ipcg::audit::audit;
use ipcg::campaign::{read_report, run_campaign, CampaignOptions, InputError, Snapshot};
use ipcg::graph6::{read_graph6, write_graph6};
use ipcg::newick::write_newick;
use ipcg::schedule::{parse_range, parse_schedule, parse_seconds, parse_tree_list, Phase, Schedule};
use ipcg::targets::{all_graphs, random_graphs, MAX_CATALOG};
use ipcg_core::graph::LabeledGraph;
use ipcg_core::trees::gen_binary_trees;
use ipcg_core::weights::{WeightAssignment, WeightedTree};

const EXIT_INPUT: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "ipcg", version, about = "Generate and verify k-interval pairwise compatibility graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the unrooted binary trees with n leaves as Newick, unit lengths.
    Trees {
        #[arg(long)]
        n: usize,
    },
    /// Write non-isomorphic graphs on n vertices as graph6.
    Graphs {
        #[arg(long)]
        n: usize,
        /// Draw this many distinct random graphs instead of listing all.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a generation campaign.
    Generate(GenerateArgs),
    /// Check a certificate file.
    Verify {
        #[arg(long)]
        certificates: PathBuf,
        /// Also require every certificate to target a graph in this file.
        #[arg(long)]
        targets: Option<PathBuf>,
        /// Print only the summary line.
        #[arg(long)]
        quiet: bool,
    },
    /// Print the checkpoint table and per-tree tallies of a campaign.
    Report {
        #[arg(long, env = "IPCG_OUT", default_value = "ipcg-out")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct GenerateArgs {
    /// graph6 file of targets; defaults to every graph on --n vertices.
    #[arg(long)]
    targets: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, conflicts_with_all = ["leaf_range", "internal_range", "time", "rounds"])]
    schedule: Option<PathBuf>,
    #[arg(long, value_parser = parse_range_arg)]
    leaf_range: Option<ipcg_core::certificate::Range>,
    #[arg(long, value_parser = parse_range_arg)]
    internal_range: Option<ipcg_core::certificate::Range>,
    /// Time budget in seconds.
    #[arg(long, value_parser = parse_seconds_arg)]
    time: Option<Duration>,
    /// Stop after this many rounds even if time remains.
    #[arg(long)]
    rounds: Option<u64>,
    /// 1-based tree indices, comma separated; applies to every phase that
    /// does not list its own.
    #[arg(long)]
    trees: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long, env = "IPCG_OUT", default_value = "ipcg-out")]
    out: PathBuf,
    #[arg(long)]
    resume: bool,
    /// Seconds between checkpoint rows.
    #[arg(long, default_value_t = 60.0)]
    checkpoint: f64,
}

fn parse_range_arg(s: &str) -> Result<ipcg_core::certificate::Range, String> {
    parse_range(s)
}

fn parse_seconds_arg(s: &str) -> Result<Duration, String> {
    parse_seconds(s)
}

fn input_err(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

fn read_targets(path: &Path) -> anyhow::Result<Vec<LabeledGraph>> {
    let file = File::open(path).map_err(|e| input_err(format!("opening {}: {e}", path.display())))?;
    read_graph6(BufReader::new(file)).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn cmd_trees(n: usize) -> anyhow::Result<u8> {
    if !(2..=16).contains(&n) {
        return Err(input_err(format!("--n must be in 2..=16, got {n}")));
    }
    let trees = gen_binary_trees(n).map_err(|e| input_err(e.to_string()))?;
    let mut out = io::stdout().lock();
    for t in &trees {
        let w = WeightedTree::from_binary(t, &WeightAssignment::new(vec![1; t.edge_count()]))?;
        writeln!(out, "{}", write_newick(&w))?;
    }
    writeln!(out, "# {} trees with {n} leaves", trees.len())?;
    Ok(0)
}

fn cmd_graphs(n: usize, sample: Option<usize>, seed: u64) -> anyhow::Result<u8> {
    let graphs = match sample {
        Some(m) => {
            if !(1..=64).contains(&n) {
                return Err(input_err(format!("--n must be in 1..=64, got {n}")));
            }
            random_graphs(n, m, seed)
        }
        None => all_graphs(n).ok_or_else(|| input_err(format!("--n must be in 1..={MAX_CATALOG}, got {n}")))?,
    };
    let mut out = io::BufWriter::new(io::stdout().lock());
    for g in &graphs {
        writeln!(out, "{}", write_graph6(g))?;
    }
    out.flush()?;
    Ok(0)
}

fn schedule_of(a: &GenerateArgs) -> anyhow::Result<Schedule> {
    let mut schedule = if let Some(path) = &a.schedule {
        let text = std::fs::read_to_string(path)
            .map_err(|e| input_err(format!("reading {}: {e}", path.display())))?;
        parse_schedule(&text).map_err(|e| input_err(format!("{}: {e}", path.display())))?
    } else {
        let (Some(leaf), Some(internal), Some(time)) = (a.leaf_range, a.internal_range, a.time) else {
            return Err(input_err("give --schedule or all of --leaf-range, --internal-range and --time"));
        };
        Schedule { phases: vec![Phase { leaf, internal, time, trees: Vec::new(), max_rounds: a.rounds }] }
    };
    if let Some(list) = &a.trees {
        let trees = parse_tree_list(list).map_err(|e| input_err(format!("--trees: {e}")))?;
        for p in schedule.phases.iter_mut().filter(|p| p.trees.is_empty()) {
            p.trees = trees.clone();
        }
    }
    Ok(schedule)
}

fn cmd_generate(a: &GenerateArgs) -> anyhow::Result<u8> {
    let schedule = schedule_of(a)?;
    let targets = match (&a.targets, a.n) {
        (Some(path), n) => {
            let t = read_targets(path)?;
            if let (Some(n), Some(g)) = (n, t.first()) {
                if g.n() != n {
                    return Err(input_err(format!("--n {n} disagrees with targets on {} vertices", g.n())));
                }
            }
            t
        }
        (None, Some(n)) => {
            all_graphs(n).ok_or_else(|| input_err(format!("--n must be in 1..={MAX_CATALOG} without --targets")))?
        }
        (None, None) => return Err(input_err("give --targets or --n")),
    };
    if a.checkpoint.is_nan() || a.checkpoint < 0.0 {
        return Err(input_err("--checkpoint must be non-negative"));
    }
    let opts = CampaignOptions {
        k: a.k,
        seed: a.seed,
        schedule,
        threads: a.threads,
        checkpoint: Duration::from_secs_f64(a.checkpoint),
        out: a.out.clone(),
        resume: a.resume,
    };
    let outcome = run_campaign(&targets, &opts, |line| eprintln!("{line}"))?;
    println!(
        "targets {}  generated {}  trivial {}  remaining {}  rounds {}",
        outcome.total, outcome.generated, outcome.trivial, outcome.remaining, outcome.rounds
    );
    Ok(if outcome.complete() { 0 } else { EXIT_BUDGET })
}

fn cmd_verify(certificates: &Path, targets: Option<&Path>, quiet: bool) -> anyhow::Result<u8> {
    let targets = targets.map(read_targets).transpose()?;
    let file = File::open(certificates)
        .map_err(|e| input_err(format!("opening {}: {e}", certificates.display())))?;
    let summary = audit(BufReader::new(file), targets.as_deref())?;
    let mut out = io::BufWriter::new(io::stdout().lock());
    if !quiet {
        for line in &summary.lines {
            writeln!(out, "{line}")?;
        }
    }
    write!(out, "passed {}/{}", summary.passed, summary.records)?;
    if let Some((covered, total)) = summary.covered {
        write!(out, "  targets certified {covered}/{total}")?;
    }
    writeln!(out)?;
    out.flush()?;
    let uncovered = summary.covered.is_some_and(|(c, t)| c < t);
    Ok(if summary.failed() == 0 && !uncovered { 0 } else { EXIT_VERIFY })
}

fn cmd_report(dir: &Path) -> anyhow::Result<u8> {
    let rows = read_report(dir)?;
    let snap = Snapshot::load(dir)?;
    let mut out = io::stdout().lock();
    writeln!(out, "n={} k={} seed={} targets={}", snap.n, snap.k, snap.seed, snap.targets)?;
    writeln!(out, "{:>12} {:>6} {:>8} {:>10} {:>8} {:>10}", "time (s)", "phase", "rounds", "generated", "trivial", "left")?;
    for r in &rows {
        writeln!(
            out,
            "{:>12.1} {:>6} {:>8} {:>10} {:>8} {:>10}",
            r.elapsed_s, r.phase, r.rounds, r.generated, r.trivial, r.remaining
        )?;
    }
    writeln!(out)?;
    writeln!(out, "{:>6} {:>10}", "tree", "generated")?;
    for (i, t) in snap.tallies.iter().enumerate() {
        writeln!(out, "{:>6} {:>10}", format!("T{}", i + 1), t)?;
    }
    writeln!(out, "{:>6} {:>10}", "total", snap.tallies.iter().sum::<u64>())?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Trees { n } => cmd_trees(*n),
        Command::Graphs { n, sample, seed } => cmd_graphs(*n, *sample, *seed),
        Command::Generate(a) => cmd_generate(a),
        Command::Verify { certificates, targets, quiet } => cmd_verify(certificates, targets.as_deref(), *quiet),
        Command::Report { out } => cmd_report(out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
