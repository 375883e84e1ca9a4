//! Command-line interface.
//!
//! Machine-readable output (JSON, CSV) goes to `--out` when given and to
//! standard output otherwise. Human-readable summaries go to standard
//! output when `--out` is given and to standard error otherwise, so that
//! standard output always holds exactly one document.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ugmine_core::eval::{evaluate_with, featurize, EvalConfig};
use ugmine_core::miner::default_cap_epsilon;
use ugmine_core::oracle::{oracle_check, DEFAULT_MAX_WORLDS};
use ugmine_core::synth::{dataset_stats, generate, preset_config, toy, PRESETS};
use ugmine_core::{
    Dataset, ExtendedScore, MeasureKind, MeasureSpec, MiningConfig, Pruning, ScoreFunctionSpec, ScoreKind,
};

use crate::{io, parallel, Error};

#[derive(Debug, Parser)]
#[command(name = "ugmine", version, about = "Discriminative subgraph mining over uncertain graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mine the top-t discriminative subgraph features of a dataset.
    Mine(MineArgs),
    /// Compare the dynamic program against possible-world enumeration.
    OracleCheck(OracleArgs),
    /// Generate a synthetic dataset from a preset.
    Gen(GenArgs),
    /// Write the containment-probability feature matrix as CSV.
    Featurize(FeaturizeArgs),
    /// Repeated train/test evaluation with per-split mining.
    Evaluate(EvaluateArgs),
    /// Print dataset summary statistics.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Exp,
    Median,
    Mode,
    #[value(name = "phi-pr")]
    PhiPr,
}

impl From<MeasureArg> for MeasureKind {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Exp => MeasureKind::Exp,
            MeasureArg::Median => MeasureKind::Median,
            MeasureArg::Mode => MeasureKind::Mode,
            MeasureArg::PhiPr => MeasureKind::PhiPr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScoreArg {
    Conf,
    Ratio,
    Gtest,
    Hsic,
}

impl From<ScoreArg> for ScoreKind {
    fn from(s: ScoreArg) -> Self {
        match s {
            ScoreArg::Conf => ScoreKind::Confidence,
            ScoreArg::Ratio => ScoreKind::FrequencyRatio,
            ScoreArg::Gtest => ScoreKind::GTest,
            ScoreArg::Hsic => ScoreKind::HsicLinear,
        }
    }
}

#[derive(Debug, Args)]
pub struct MiningArgs {
    #[arg(long, value_enum, default_value = "phi-pr")]
    pub measure: MeasureArg,
    #[arg(long, value_enum, default_value = "ratio")]
    pub score: ScoreArg,
    /// Number of features to return.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    /// Features need expected frequency strictly above this.
    #[arg(long, default_value_t = 0.2)]
    pub min_sup: f64,
    /// Score threshold for phi-pr; defaults per score (conf 0.5, ratio 1, gtest 200, hsic 0.03).
    #[arg(long)]
    pub phi: Option<f64>,
    /// Cap scores at 1/epsilon (0 disables); defaults to 0.01 for exp with ratio or gtest, else 0.
    #[arg(long)]
    pub cap_epsilon: Option<f64>,
    #[arg(long)]
    pub max_edges: Option<usize>,
    /// Disable frequency and bound pruning.
    #[arg(long)]
    pub no_prune: bool,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: u32,
}

impl MiningArgs {
    pub fn config(&self) -> Result<MiningConfig, Error> {
        let mk: MeasureKind = self.measure.into();
        let sk: ScoreKind = self.score.into();
        let phi = match (mk, self.phi) {
            (MeasureKind::PhiPr, Some(p)) => Some(ExtendedScore::try_new(p).ok_or_else(|| usage("--phi is NaN"))?),
            (MeasureKind::PhiPr, None) => Some(ExtendedScore::new(sk.default_phi())),
            (_, Some(_)) => return Err(usage("--phi only applies to --measure phi-pr")),
            (_, None) => None,
        };
        let cap = self.cap_epsilon.unwrap_or_else(|| default_cap_epsilon(mk, sk));
        let to_usage = |e: ugmine_core::Error| usage(e.to_string());
        let score = ScoreFunctionSpec::new(sk, cap).map_err(to_usage)?;
        let measure = MeasureSpec::new(mk, phi).map_err(to_usage)?;
        let mut cfg = MiningConfig::new(self.top, self.min_sup, measure, score).map_err(to_usage)?;
        cfg.max_edges = self.max_edges;
        if self.no_prune {
            cfg.pruning = Pruning::NONE;
        }
        cfg.validate().map_err(to_usage)?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct MineArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub mining: MiningArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_WORLDS)]
    pub max_worlds: u128,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(PRESETS))]
    pub preset: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Override the planted edges' probability in positive graphs.
    #[arg(long)]
    pub planted_prob_pos: Option<f64>,
    /// Override the planted edges' probability in negative graphs.
    #[arg(long)]
    pub planted_prob_neg: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FeaturizeArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Feature file as written by `mine`.
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub mining: MiningArgs,
    #[arg(long, default_value_t = 20)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0.8)]
    pub train_fraction: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub input: PathBuf,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

fn read_input(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::MissingInput { path: path.to_path_buf(), source })
}

fn load_dataset(path: &Path) -> Result<Dataset, Error> {
    io::parse_dataset(&read_input(path)?)
}

/// Writes `doc` to `out` or to `stdout`, and `summary` to whichever of
/// stdout/stderr is left.
fn emit(
    out: Option<&Path>,
    doc: &str,
    summary: &str,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), Error> {
    let console = |e: std::io::Error| Error::Output { path: PathBuf::from("<stdout>"), source: e };
    match out {
        Some(p) => {
            std::fs::write(p, doc).map_err(|source| Error::Output { path: p.to_path_buf(), source })?;
            stdout.write_all(summary.as_bytes()).map_err(console)?;
        }
        None => {
            stdout.write_all(doc.as_bytes()).map_err(console)?;
            stderr.write_all(summary.as_bytes()).map_err(console)?;
        }
    }
    Ok(())
}

fn run_command(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Error> {
    match cmd {
        Command::Mine(a) => {
            let cfg = a.mining.config()?;
            let d = load_dataset(&a.input)?;
            let outcome = parallel::mine(&d, &cfg, a.mining.threads as usize)?;
            let s = outcome.stats;
            let _ = writeln!(
                stderr,
                "visited {} evaluated {} pruned(freq) {} pruned(bound) {}",
                s.visited, s.evaluated, s.pruned_frequency, s.pruned_bound
            );
            let table = io::features_table(&outcome.features);
            emit(a.out.as_deref(), &io::features_to_json(&outcome.features), &table, stdout, stderr)?;
            Ok(0)
        }
        Command::OracleCheck(a) => {
            let d = load_dataset(&a.input)?;
            let trials = oracle_check(&d, a.trials, a.seed, 1e-9, a.max_worlds)?;
            let matched = trials.iter().filter(|t| t.matched).count();
            for t in trials.iter().filter(|t| !t.matched) {
                let _ = writeln!(
                    stderr,
                    "mismatch: {} {} {} cell diff {:e}, dp {} oracle {}",
                    t.subgraph,
                    t.measure,
                    t.score.kind.name(),
                    t.max_cell_diff,
                    t.dp_value,
                    t.oracle_value
                );
            }
            let _ = writeln!(stdout, "{matched}/{} matched", trials.len());
            Ok(if matched == trials.len() { 0 } else { 1 })
        }
        Command::Gen(a) => {
            let d = if a.preset == "toy" {
                if a.planted_prob_pos.is_some() || a.planted_prob_neg.is_some() {
                    return Err(usage("the toy preset has no planted pattern to override"));
                }
                toy()
            } else {
                let mut cfg = preset_config(&a.preset, a.seed).expect("validated by clap");
                if let Some(p) = a.planted_prob_pos {
                    cfg.planted_prob_pos = p;
                }
                if let Some(p) = a.planted_prob_neg {
                    cfg.planted_prob_neg = p;
                }
                cfg.validate().map_err(|e| usage(e.to_string()))?;
                generate(&cfg)?
            };
            let st = dataset_stats(&d);
            let summary =
                format!("{} graphs ({} pos, {} neg), {} nodes\n", st.graphs, st.n_pos, st.n_neg, st.num_nodes);
            emit(a.out.as_deref(), &io::dataset_to_json(&d), &summary, stdout, stderr)?;
            Ok(0)
        }
        Command::Featurize(a) => {
            let d = load_dataset(&a.input)?;
            let features = io::parse_features(&read_input(&a.features)?)?;
            let m = featurize(&d, &features)?;
            let summary = format!("{} rows x {} features\n", m.num_rows(), m.num_features());
            emit(a.out.as_deref(), &io::export_csv(&m), &summary, stdout, stderr)?;
            Ok(0)
        }
        Command::Evaluate(a) => {
            let cfg = a.mining.config()?;
            let ecfg = EvalConfig::new(a.repeats, a.train_fraction, a.seed);
            ecfg.validate().map_err(|e| usage(e.to_string()))?;
            let d = load_dataset(&a.input)?;
            let threads = a.mining.threads as usize;
            let report = evaluate_with(&d, &ecfg, |train| {
                Ok(parallel::mine(train, &cfg, threads)?.features.into_iter().map(|f| f.subgraph).collect())
            })?;
            let summary = format!(
                "error {:.4} ± {:.4}  f1 {:.4} ± {:.4}  ({} repeats)\n",
                report.mean_error,
                report.std_error,
                report.mean_f1,
                report.std_f1,
                report.repeats.len()
            );
            emit(a.out.as_deref(), &io::eval_report_to_json(&report), &summary, stdout, stderr)?;
            Ok(0)
        }
        Command::Stats(a) => {
            let s = dataset_stats(&load_dataset(&a.input)?);
            let console = |e: std::io::Error| Error::Output { path: PathBuf::from("<stdout>"), source: e };
            write!(
                stdout,
                "graphs {}\npositive {}\nnegative {}\nnodes {}\nmean_edges {:.4}\nmean_edge_prob {:.4}\nempty {}\n",
                s.graphs, s.n_pos, s.n_neg, s.num_nodes, s.mean_edges, s.mean_edge_prob, s.empty
            )
            .map_err(console)?;
            Ok(0)
        }
    }
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match run_command(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
