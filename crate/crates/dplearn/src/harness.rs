//! Command-line interface, configuration, and experiment orchestration.
//!
//! The binary exposes six subcommands:
//!
//! * `params` — solve the private online learner's parameter equations and
//!   print every derived constant, with a re-substitution self-check;
//! * `online` — run `winnow`, `confident-winnow`, or `dp-winnow` over a
//!   generated or file stream; emit a transcript CSV plus a mistake summary;
//! * `pac-dl` — run the private greedy cover learner against the greedy
//!   baseline on generated or file samples; emit an error table;
//! * `reduce` — convert a decision list into a margin halfspace, or double a
//!   halfspace into its nonnegative form;
//! * `audit` — statistical privacy/accuracy suites (exits nonzero on a
//!   certified failure);
//! * `oracle` — exhaustive empirical risk minimization on tiny instances.
//!
//! Global flags: `--config PATH`, `--seed U64`, `--out DIR`, `--workers N`,
//! `--zero-noise`, `--trials N`. The config file is a single JSON document
//! with the same global field names plus one optional section per subcommand
//! (`params`, `online`, `pac_dl`, `reduce`, `audit`, `oracle`) mirroring that
//! subcommand's flags. Precedence: command-line flag, then config field,
//! then built-in default (`--zero-noise`, being a switch, can enable but not
//! disable a config setting).
//!
//! With `--out DIR` every run writes `manifest.json` (seed, config hash,
//! version), `config.json` (the fully resolved configuration), the
//! subcommand's artifacts, and a `run.log` sidecar. Timestamps live only in
//! `run.log`; every other artifact is byte-identical across reruns with the
//! same resolved configuration, regardless of worker count. Artifacts embed
//! the (seed, config hash, version) triple — as a `meta` object in JSON
//! files and as a leading `#` comment in CSV files. Input files are read
//! before any artifact is written, so a failing run leaves no partial
//! output.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::audit::{
    bound_check, brute_force_erm, erm_search_space, neighbor_ratio_test, BoundReport,
    RatioReport, Verdict,
};
use crate::decision_lists::{
    cover_error_bound, dp_greedy_cover, empirical_error, rivest_greedy, DecisionList,
    FeatureFamily, PacSample,
};
use crate::dp_winnow::{run_dp_winnow_with_state, DpWinnowParams};
use crate::error::{Error, Result};
use crate::io::{
    decision_list_from_json, decision_list_to_json, halfspace_from_json, halfspace_to_json,
    pac_sample_from_csv, pac_sample_to_csv, stream_from_csv,
};
use crate::mechanisms::{em_select, AboveThreshold, NoiseMode};
use crate::randomness::{fnv1a64, RandomSource};
use crate::reductions::{dl_to_halfspace, double_nonneg_halfspace};
use crate::streams::{
    online_stream, pac_sample, random_decision_list, sparse_target, PacDistribution,
    StreamDistribution,
};
use crate::winnow::{run_confident_winnow, ConfidentWinnowParams, OnlineExample};

/// Library version stamped into every artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

// ---------------------------------------------------------------------------
// Command-line surface
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "dplearn",
    version,
    about = "Differentially private learners for decision lists and large-margin halfspaces"
)]
struct Cli {
    /// JSON configuration file; flags override its fields.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Root seed for all randomness (default 42).
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    /// Output directory for artifacts (stdout-only when absent).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Worker threads for parallel trials (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,

    /// Replace privacy noise with zero (diagnostics only; not private).
    #[arg(long, global = true)]
    zero_noise: bool,

    /// Number of trials for multi-trial subcommands.
    #[arg(long, global = true, value_name = "N")]
    trials: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the online learner's parameter equations and print the constants.
    Params(ParamsSection),
    /// Run an online learner over a stream; emit transcript and summary.
    Online(OnlineSection),
    /// Run the private PAC learner against the greedy baseline.
    PacDl(PacDlSection),
    /// Convert decision lists and halfspaces between representations.
    Reduce(ReduceSection),
    /// Statistical privacy and accuracy audits.
    Audit(AuditSection),
    /// Exhaustive-search baselines for tiny instances.
    Oracle(OracleSection),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum AlgoArg {
    Winnow,
    ConfidentWinnow,
    DpWinnow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum DistArg {
    Uniform,
    BoundaryHeavy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum FamilyArg {
    Literals,
    LiteralsWithNegations,
    Conjunctions,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum ReduceOp {
    DlToHalfspace,
    DoubleNonneg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum SuiteArg {
    EmSelect,
    DpWinnow,
    AboveThreshold,
}

#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsSection {
    #[arg(long)]
    horizon: Option<u64>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    confidence: Option<f64>,
}

#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OnlineSection {
    /// winnow | confident-winnow | dp-winnow
    #[arg(long, value_enum)]
    algo: Option<AlgoArg>,
    #[arg(long)]
    horizon: Option<u64>,
    #[arg(long)]
    dim: Option<usize>,
    /// Target margin (default: the generated target's exact margin).
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    confidence: Option<f64>,
    /// Learning rate for the non-private learners (default: (1-c) * rho).
    #[arg(long)]
    eta: Option<f64>,
    /// Sparsity (odd) of the generated target.
    #[arg(long)]
    sparsity: Option<usize>,
    /// uniform | boundary-heavy
    #[arg(long, value_enum)]
    distribution: Option<DistArg>,
    /// Stream CSV to learn from instead of generating one.
    #[arg(long, value_name = "PATH")]
    stream: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PacDlSection {
    #[arg(long)]
    dim: Option<usize>,
    /// literals | literals-with-negations | conjunctions
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// Maximum conjunction width (conjunctions family only).
    #[arg(long)]
    width: Option<usize>,
    /// Rules in each generated target list.
    #[arg(long)]
    rule_count: Option<usize>,
    /// Alternations in each generated target list.
    #[arg(long)]
    alternations: Option<usize>,
    #[arg(long)]
    sample_size: Option<usize>,
    #[arg(long)]
    epsilon_per_round: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Sample CSV to learn from instead of generating per-trial samples.
    #[arg(long, value_name = "PATH")]
    sample: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReduceSection {
    /// dl-to-halfspace | double-nonneg
    #[arg(long, value_enum)]
    op: Option<ReduceOp>,
    /// Input JSON (a decision list or a halfspace, matching the op).
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Ambient dimension for dl-to-halfspace (default: the list's minimum).
    #[arg(long)]
    dim: Option<usize>,
}

#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct AuditSection {
    /// em-select | dp-winnow | above-threshold
    #[arg(long, value_enum)]
    suite: Option<SuiteArg>,
    /// Privacy budget for the em-select suite.
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OracleSection {
    #[arg(long)]
    dim: Option<usize>,
    /// literals | literals-with-negations | conjunctions
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    width: Option<usize>,
    #[arg(long)]
    rule_count: Option<usize>,
    #[arg(long)]
    alternations: Option<usize>,
    #[arg(long)]
    sample_size: Option<usize>,
    /// Maximum list length for the exhaustive search.
    #[arg(long)]
    max_length: Option<usize>,
    /// Sample CSV to minimize over instead of generating one.
    #[arg(long, value_name = "PATH")]
    sample: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// Configuration file
// ---------------------------------------------------------------------------

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    seed: Option<u64>,
    out: Option<PathBuf>,
    workers: Option<usize>,
    zero_noise: Option<bool>,
    trials: Option<u64>,
    params: Option<ParamsSection>,
    online: Option<OnlineSection>,
    pac_dl: Option<PacDlSection>,
    reduce: Option<ReduceSection>,
    audit: Option<AuditSection>,
    oracle: Option<OracleSection>,
}

macro_rules! merge_fields {
    ($cli:expr, $file:expr, $($field:ident),+ $(,)?) => {{
        let file = $file.unwrap_or_default();
        Self { $($field: $cli.$field.or(file.$field)),+ }
    }};
}

impl ParamsSection {
    fn merged(cli: Self, file: Option<Self>) -> Self {
        merge_fields!(cli, file, horizon, dim, rho, epsilon, delta, beta, confidence)
    }
}

impl OnlineSection {
    fn merged(cli: Self, file: Option<Self>) -> Self {
        merge_fields!(
            cli, file, algo, horizon, dim, rho, epsilon, delta, beta, confidence, eta,
            sparsity, distribution, stream
        )
    }
}

impl PacDlSection {
    fn merged(cli: Self, file: Option<Self>) -> Self {
        merge_fields!(
            cli, file, dim, family, width, rule_count, alternations, sample_size,
            epsilon_per_round, beta, sample
        )
    }
}

impl ReduceSection {
    fn merged(cli: Self, file: Option<Self>) -> Self {
        merge_fields!(cli, file, op, input, dim)
    }
}

impl AuditSection {
    fn merged(cli: Self, file: Option<Self>) -> Self {
        merge_fields!(cli, file, suite, epsilon)
    }
}

impl OracleSection {
    fn merged(cli: Self, file: Option<Self>) -> Self {
        merge_fields!(
            cli, file, dim, family, width, rule_count, alternations, sample_size,
            max_length, sample
        )
    }
}

// ---------------------------------------------------------------------------
// Artifacts
// ---------------------------------------------------------------------------

/// Reproducibility triple embedded in every artifact.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunMeta {
    pub seed: u64,
    pub config_hash: String,
    pub version: String,
}

impl RunMeta {
    fn new<C: Serialize>(seed: u64, resolved: &C) -> Result<Self> {
        let canonical = serde_json::to_string(resolved)?;
        Ok(Self {
            seed,
            config_hash: format!("{:016x}", fnv1a64(canonical.as_bytes())),
            version: VERSION.to_string(),
        })
    }

    fn csv_comment(&self) -> String {
        format!(
            "# seed={} config_hash={} version={}\n",
            self.seed, self.config_hash, self.version
        )
    }
}

/// Inserts a `meta` member into a serialized JSON object.
fn json_with_meta(json_text: &str, meta: &RunMeta) -> Result<String> {
    let mut value: serde_json::Value = serde_json::from_str(json_text)?;
    value
        .as_object_mut()
        .ok_or_else(|| Error::Format("artifact is not a JSON object".into()))?
        .insert("meta".into(), serde_json::to_value(meta)?);
    Ok(serde_json::to_string_pretty(&value)?)
}

/// In-memory artifact set; nothing touches the filesystem until a run has
/// fully succeeded.
struct Artifacts {
    meta: RunMeta,
    files: Vec<(String, String)>,
}

impl Artifacts {
    fn new<C: Serialize>(seed: u64, resolved: &C) -> Result<Self> {
        let meta = RunMeta::new(seed, resolved)?;
        let config = json_with_meta(&serde_json::to_string_pretty(resolved)?, &meta)?;
        let manifest = serde_json::to_string_pretty(&meta)?;
        Ok(Self {
            meta,
            files: vec![
                ("manifest.json".into(), manifest + "\n"),
                ("config.json".into(), config + "\n"),
            ],
        })
    }

    fn push_json<T: Serialize>(&mut self, name: &str, payload: &T) -> Result<()> {
        let text = json_with_meta(&serde_json::to_string_pretty(payload)?, &self.meta)?;
        self.files.push((name.to_string(), text + "\n"));
        Ok(())
    }

    /// Pushes an already-serialized JSON object, adding the meta member.
    fn push_json_text(&mut self, name: &str, json_text: &str) -> Result<()> {
        let text = json_with_meta(json_text, &self.meta)?;
        self.files.push((name.to_string(), text + "\n"));
        Ok(())
    }

    fn push_csv(&mut self, name: &str, body: &str) {
        self.files.push((name.to_string(), format!("{}{body}", self.meta.csv_comment())));
    }

    fn write(&self, out: &Path) -> Result<()> {
        fs::create_dir_all(out)?;
        for (name, content) in &self.files {
            fs::write(out.join(name), content)?;
        }
        let seconds = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let names: Vec<&str> = self.files.iter().map(|(n, _)| n.as_str()).collect();
        let log = format!("completed_unix_seconds={seconds}\nfiles={}\n", names.join(","));
        fs::write(out.join("run.log"), log)?;
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

/// Parses `args` and runs the selected subcommand. Returns the process exit
/// code: 0 on success, 1 on runtime errors or a failed audit, 2 on usage
/// errors.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// [`run`] over the process arguments; the binary's whole `main`.
pub fn cli_main() -> ExitCode {
    run(std::env::args_os())
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    let config: ConfigFile = match &cli.config {
        Some(path) => serde_json::from_str(&fs::read_to_string(path)?)?,
        None => ConfigFile::default(),
    };
    let seed = cli.seed.or(config.seed).unwrap_or(42);
    let zero_noise = cli.zero_noise || config.zero_noise.unwrap_or(false);
    let workers = cli.workers.or(config.workers);
    let out = cli.out.or(config.out);
    let trials = cli.trials.or(config.trials);
    if let Some(n) = workers {
        if n == 0 {
            return Err(Error::Parameter("workers must be positive".into()));
        }
        // Trial seeding is per-index, so results do not depend on this.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let mode = if zero_noise { NoiseMode::ZeroNoise } else { NoiseMode::Standard };
    let common = Common { seed, zero_noise, trials, mode };

    let (artifacts, code) = match cli.command {
        Command::Params(sec) => cmd_params(&common, ParamsSection::merged(sec, config.params))?,
        Command::Online(sec) => cmd_online(&common, OnlineSection::merged(sec, config.online))?,
        Command::PacDl(sec) => cmd_pac_dl(&common, PacDlSection::merged(sec, config.pac_dl))?,
        Command::Reduce(sec) => cmd_reduce(&common, ReduceSection::merged(sec, config.reduce))?,
        Command::Audit(sec) => cmd_audit(&common, AuditSection::merged(sec, config.audit))?,
        Command::Oracle(sec) => cmd_oracle(&common, OracleSection::merged(sec, config.oracle))?,
    };
    if let Some(dir) = out {
        artifacts.write(&dir)?;
        println!("artifacts written to {}", dir.display());
    }
    Ok(code)
}

#[derive(Clone, Copy)]
struct Common {
    seed: u64,
    zero_noise: bool,
    trials: Option<u64>,
    mode: NoiseMode,
}

fn echo_config<C: Serialize>(common: &Common, resolved: &C) -> Result<()> {
    println!("seed: {}", common.seed);
    println!("config: {}", serde_json::to_string(resolved)?);
    Ok(())
}

// ---------------------------------------------------------------------------
// params
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ResolvedParams {
    command: &'static str,
    seed: u64,
    zero_noise: bool,
    horizon: u64,
    dim: usize,
    rho: f64,
    epsilon: f64,
    delta: f64,
    beta: f64,
    confidence: f64,
}

#[derive(Serialize)]
struct ParamsArtifact {
    params: DpWinnowParams,
    potential_drop: f64,
    mistake_bound: f64,
    max_residual: f64,
}

fn cmd_params(common: &Common, sec: ParamsSection) -> Result<(Artifacts, ExitCode)> {
    let resolved = ResolvedParams {
        command: "params",
        seed: common.seed,
        zero_noise: common.zero_noise,
        horizon: sec.horizon.unwrap_or(10_000),
        dim: sec.dim.unwrap_or(1024),
        rho: sec.rho.unwrap_or(0.1),
        epsilon: sec.epsilon.unwrap_or(1.0),
        delta: sec.delta.unwrap_or(1e-6),
        beta: sec.beta.unwrap_or(0.05),
        confidence: sec.confidence.unwrap_or(0.25),
    };
    echo_config(common, &resolved)?;

    let params = DpWinnowParams::solve(
        resolved.horizon,
        resolved.dim,
        resolved.rho,
        resolved.epsilon,
        resolved.delta,
        resolved.beta,
        resolved.confidence,
    )?;
    let max_residual = params.max_residual();
    if max_residual > 1e-9 {
        return Err(Error::SolverDiverged(format!(
            "self-check failed: max residual {max_residual:e} exceeds 1e-9"
        )));
    }
    println!("derived constants:");
    println!("  switching bound K = {}", params.switching_bound);
    println!("  learning rate eta = {}", params.eta);
    println!("  epsilon_hat       = {}", params.epsilon_hat);
    println!("  threshold L       = {}", params.threshold);
    println!("  sample count m    = {}", params.sample_count);
    println!("  potential drop    = {}", params.potential_drop());
    println!("  mistake bound     = {}", params.mistake_bound());
    println!("self-check: max residual = {max_residual:e} (tolerance 1e-9)");

    let mut artifacts = Artifacts::new(common.seed, &resolved)?;
    artifacts.push_json(
        "params.json",
        &ParamsArtifact {
            params,
            potential_drop: params.potential_drop(),
            mistake_bound: params.mistake_bound(),
            max_residual,
        },
    )?;
    Ok((artifacts, ExitCode::SUCCESS))
}

// ---------------------------------------------------------------------------
// online
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ResolvedOnline {
    command: &'static str,
    seed: u64,
    zero_noise: bool,
    algo: AlgoArg,
    horizon: u64,
    dim: usize,
    rho: f64,
    epsilon: f64,
    delta: f64,
    beta: f64,
    confidence: f64,
    eta: Option<f64>,
    sparsity: usize,
    distribution: DistArg,
    stream: Option<PathBuf>,
}

#[derive(Serialize)]
struct OnlineSummary {
    algo: AlgoArg,
    rounds: u64,
    dim: usize,
    mistakes: u64,
    updates: u64,
    mistake_bound: f64,
    frozen: Option<bool>,
}

#[derive(Serialize)]
struct WinnowParamsArtifact {
    algo: AlgoArg,
    dim: usize,
    eta: f64,
    confidence: f64,
    rho: f64,
    update_bound: f64,
}

fn cmd_online(common: &Common, sec: OnlineSection) -> Result<(Artifacts, ExitCode)> {
    let algo = sec.algo.unwrap_or(AlgoArg::DpWinnow);
    let sparsity = sec.sparsity.unwrap_or(1);
    let confidence = sec.confidence.unwrap_or(match algo {
        AlgoArg::Winnow => 0.0,
        AlgoArg::ConfidentWinnow => 0.25,
        AlgoArg::DpWinnow => 0.49,
    });

    // Inputs are loaded before anything else so a missing file aborts the
    // run without artifacts.
    let file_stream = match &sec.stream {
        Some(path) => {
            let stream = stream_from_csv(&fs::read_to_string(path)?)?;
            if stream.is_empty() {
                return Err(Error::Format(format!(
                    "stream file {} has no examples",
                    path.display()
                )));
            }
            Some(stream)
        }
        None => None,
    };

    let dim = match &file_stream {
        Some(stream) => stream[0].dim(),
        None => sec.dim.unwrap_or(64),
    };
    let horizon = match &file_stream {
        Some(stream) => stream.len() as u64,
        None => sec.horizon.unwrap_or(2000),
    };
    let rho = sec.rho.unwrap_or(if file_stream.is_some() {
        0.1
    } else {
        1.0 / sparsity as f64
    });
    let resolved = ResolvedOnline {
        command: "online",
        seed: common.seed,
        zero_noise: common.zero_noise,
        algo,
        horizon,
        dim,
        rho,
        epsilon: sec.epsilon.unwrap_or(1.0),
        delta: sec.delta.unwrap_or(1e-6),
        beta: sec.beta.unwrap_or(0.1),
        confidence,
        eta: sec.eta,
        sparsity,
        distribution: sec.distribution.unwrap_or(DistArg::Uniform),
        stream: sec.stream.clone(),
    };
    echo_config(common, &resolved)?;

    let base = RandomSource::new(common.seed);
    let stream = match file_stream {
        Some(s) => s,
        None => {
            let target = sparse_target(dim, sparsity)?;
            let dist = match resolved.distribution {
                DistArg::Uniform => StreamDistribution::UniformSigns,
                DistArg::BoundaryHeavy => StreamDistribution::BoundaryHeavy,
            };
            online_stream(&target, horizon as usize, dist, &mut base.split("online-stream"))?
        }
    };

    let mut artifacts = Artifacts::new(common.seed, &resolved)?;
    let summary = match algo {
        AlgoArg::DpWinnow => {
            let params = DpWinnowParams::solve(
                horizon,
                dim,
                rho,
                resolved.epsilon,
                resolved.delta,
                resolved.beta,
                confidence,
            )?;
            let (transcript, state) = run_dp_winnow_with_state(
                &stream,
                params,
                common.mode,
                &mut base.split("online-run"),
            )?;
            artifacts.push_json("params.json", &params)?;
            artifacts.push_csv("transcript.csv", &transcript.to_dp_csv());
            OnlineSummary {
                algo,
                rounds: stream.len() as u64,
                dim,
                mistakes: transcript.mistakes(),
                updates: state.switches(),
                mistake_bound: params.mistake_bound(),
                frozen: Some(state.is_frozen()),
            }
        }
        AlgoArg::Winnow | AlgoArg::ConfidentWinnow => {
            let eta = resolved.eta.unwrap_or((1.0 - confidence) * rho);
            let params = ConfidentWinnowParams::new(eta, confidence, rho)?;
            let confident = algo == AlgoArg::ConfidentWinnow;
            let pairs: Vec<(OnlineExample, bool)> =
                stream.iter().map(|ex| (ex.clone(), confident)).collect();
            let transcript = run_confident_winnow(&pairs, dim, params)?;
            let bound = params.update_bound(dim)?;
            artifacts.push_json(
                "params.json",
                &WinnowParamsArtifact {
                    algo,
                    dim,
                    eta,
                    confidence,
                    rho,
                    update_bound: bound,
                },
            )?;
            artifacts.push_csv("transcript.csv", &transcript.to_online_csv());
            OnlineSummary {
                algo,
                rounds: stream.len() as u64,
                dim,
                mistakes: transcript.mistakes(),
                updates: transcript.updates(),
                // Every mistake triggers an update, so the update bound
                // also caps the mistake count on realizable streams.
                mistake_bound: bound,
                frozen: None,
            }
        }
    };
    println!("rounds    = {}", summary.rounds);
    println!("mistakes  = {}", summary.mistakes);
    println!("updates   = {}", summary.updates);
    println!("mistake bound = {}", summary.mistake_bound);
    if let Some(frozen) = summary.frozen {
        println!("frozen    = {frozen}");
    }
    artifacts.push_json("summary.json", &summary)?;
    Ok((artifacts, ExitCode::SUCCESS))
}

// ---------------------------------------------------------------------------
// pac-dl
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ResolvedPacDl {
    command: &'static str,
    seed: u64,
    zero_noise: bool,
    trials: u64,
    dim: usize,
    family: FamilyArg,
    width: usize,
    rule_count: usize,
    alternations: usize,
    sample_size: usize,
    epsilon_per_round: f64,
    beta: f64,
    sample: Option<PathBuf>,
}

#[derive(Serialize)]
struct PacDlSummary {
    trials: u64,
    family_size: usize,
    candidates: u64,
    error_bound: f64,
    mean_dp_error: f64,
    max_dp_error: u64,
    mean_greedy_error: Option<f64>,
    greedy_unrealizable_trials: u64,
}

fn build_family(kind: FamilyArg, dim: usize, width: usize) -> Result<FeatureFamily> {
    match kind {
        FamilyArg::Literals => FeatureFamily::literals(dim),
        FamilyArg::LiteralsWithNegations => FeatureFamily::literals_with_negations(dim),
        FamilyArg::Conjunctions => FeatureFamily::conjunctions(dim, width),
    }
}

fn cmd_pac_dl(common: &Common, sec: PacDlSection) -> Result<(Artifacts, ExitCode)> {
    let resolved = ResolvedPacDl {
        command: "pac-dl",
        seed: common.seed,
        zero_noise: common.zero_noise,
        trials: common.trials.unwrap_or(5).max(1),
        dim: sec.dim.unwrap_or(8),
        family: sec.family.unwrap_or(FamilyArg::LiteralsWithNegations),
        width: sec.width.unwrap_or(2),
        rule_count: sec.rule_count.unwrap_or(3),
        // The default alternation count adapts to the rule count (a list of
        // r rules has at most r - 1 alternations); an explicit value is
        // taken as given and validated by the generator.
        alternations: sec
            .alternations
            .unwrap_or_else(|| 2.min(sec.rule_count.unwrap_or(3).saturating_sub(1))),
        sample_size: sec.sample_size.unwrap_or(2000),
        epsilon_per_round: sec.epsilon_per_round.unwrap_or(0.5),
        beta: sec.beta.unwrap_or(0.1),
        sample: sec.sample.clone(),
    };
    echo_config(common, &resolved)?;

    let file_sample = match &sec.sample {
        Some(path) => Some(pac_sample_from_csv(&fs::read_to_string(path)?)?),
        None => None,
    };
    let dim = file_sample.as_ref().map_or(resolved.dim, PacSample::dim);
    let family = build_family(resolved.family, dim, resolved.width)?;
    let candidates = family.len() as u64 + 1;
    let bound = cover_error_bound(candidates, resolved.epsilon_per_round, resolved.beta)?;

    let base = RandomSource::new(common.seed);
    struct TrialRow {
        trial: u64,
        dp_error: u64,
        greedy_error: Option<u64>,
        lists: Option<(String, String)>,
    }
    use rayon::prelude::*;
    let mut rows: Vec<TrialRow> = (0..resolved.trials)
        .into_par_iter()
        .map(|trial| -> Result<TrialRow> {
            let mut source = base.split_index("pac-dl-trial", trial);
            let sample = match &file_sample {
                Some(s) => s.clone(),
                None => {
                    let target = random_decision_list(
                        &family,
                        resolved.rule_count,
                        resolved.alternations,
                        &mut source,
                    )?;
                    pac_sample(
                        &target,
                        dim,
                        &PacDistribution::Uniform,
                        resolved.sample_size,
                        &mut source,
                    )?
                }
            };
            let dp_list = dp_greedy_cover(
                &sample,
                &family,
                resolved.epsilon_per_round,
                &mut source,
                common.mode,
            )?;
            let dp_error = empirical_error(&dp_list, &sample)? as u64;
            let (greedy_error, greedy_json) = match rivest_greedy(&sample, &family) {
                Ok(list) => (
                    Some(empirical_error(&list, &sample)? as u64),
                    Some(decision_list_to_json(&list)?),
                ),
                Err(Error::NonRealizable(_)) => (None, None),
                Err(e) => return Err(e),
            };
            let lists = if trial == 0 {
                Some((decision_list_to_json(&dp_list)?, greedy_json.unwrap_or_default()))
            } else {
                None
            };
            Ok(TrialRow { trial, dp_error, greedy_error, lists })
        })
        .collect::<Result<Vec<TrialRow>>>()?;
    rows.sort_by_key(|r| r.trial);

    let mut table = String::from("trial,sample_size,dp_error,greedy_error\n");
    for row in &rows {
        let greedy = row.greedy_error.map(|e| e.to_string()).unwrap_or_default();
        table.push_str(&format!(
            "{},{},{},{greedy}\n",
            row.trial,
            file_sample.as_ref().map_or(resolved.sample_size, PacSample::len),
            row.dp_error
        ));
    }
    let realizable: Vec<u64> = rows.iter().filter_map(|r| r.greedy_error).collect();
    let summary = PacDlSummary {
        trials: resolved.trials,
        family_size: family.len(),
        candidates,
        error_bound: bound,
        mean_dp_error: rows.iter().map(|r| r.dp_error as f64).sum::<f64>()
            / rows.len() as f64,
        max_dp_error: rows.iter().map(|r| r.dp_error).max().unwrap_or(0),
        mean_greedy_error: if realizable.is_empty() {
            None
        } else {
            Some(realizable.iter().map(|&e| e as f64).sum::<f64>() / realizable.len() as f64)
        },
        greedy_unrealizable_trials: rows.len() as u64 - realizable.len() as u64,
    };
    println!("trials = {}", summary.trials);
    println!("candidates (family + constant) = {}", summary.candidates);
    println!("cover error bound = {}", summary.error_bound);
    println!("mean dp error = {}", summary.mean_dp_error);
    println!("max dp error = {}", summary.max_dp_error);
    match summary.mean_greedy_error {
        Some(m) => println!("mean greedy error = {m}"),
        None => println!("mean greedy error = n/a (sample not realizable)"),
    }

    let mut artifacts = Artifacts::new(common.seed, &resolved)?;
    artifacts.push_csv("errors.csv", &table);
    artifacts.push_json("summary.json", &summary)?;
    if let Some((dp_json, greedy_json)) = rows.first().and_then(|r| r.lists.clone()) {
        artifacts.push_json_text("dp_list.json", &dp_json)?;
        if !greedy_json.is_empty() {
            artifacts.push_json_text("greedy_list.json", &greedy_json)?;
        }
    }
    Ok((artifacts, ExitCode::SUCCESS))
}

// ---------------------------------------------------------------------------
// reduce
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ResolvedReduce {
    command: &'static str,
    seed: u64,
    op: ReduceOp,
    input: PathBuf,
    dim: Option<usize>,
}

fn cmd_reduce(common: &Common, sec: ReduceSection) -> Result<(Artifacts, ExitCode)> {
    let op = sec.op.unwrap_or(ReduceOp::DlToHalfspace);
    let input = sec
        .input
        .ok_or_else(|| Error::Parameter("reduce: --input is required".into()))?;
    let resolved = ResolvedReduce {
        command: "reduce",
        seed: common.seed,
        op,
        input: input.clone(),
        dim: sec.dim,
    };
    echo_config(common, &resolved)?;

    let text = fs::read_to_string(&input)?;
    let halfspace = match op {
        ReduceOp::DlToHalfspace => {
            let list = decision_list_from_json(&text)?;
            let dim = sec.dim.unwrap_or_else(|| list.required_dim());
            dl_to_halfspace(&list, dim)?
        }
        ReduceOp::DoubleNonneg => double_nonneg_halfspace(&halfspace_from_json(&text)?)?,
    };
    let json = halfspace_to_json(&halfspace)?;
    println!("{json}");

    let mut artifacts = Artifacts::new(common.seed, &resolved)?;
    artifacts.push_json_text("halfspace.json", &json)?;
    Ok((artifacts, ExitCode::SUCCESS))
}

// ---------------------------------------------------------------------------
// audit
// ---------------------------------------------------------------------------

/// Neighbor ratio test for the exponential mechanism: score vectors that
/// differ by 1 in a single candidate (the shift a one-example change can
/// cause under a sensitivity-1 quality).
pub fn em_select_ratio_suite(epsilon: f64, trials: u64, seed: u64) -> Result<RatioReport> {
    let a = [0.0, -1.0, -2.0, -3.0];
    let b = [0.0, -2.0, -2.0, -3.0];
    neighbor_ratio_test(
        |use_b, source| {
            let scores: &[f64] = if use_b { &b } else { &a };
            Ok(em_select(scores, epsilon, source, NoiseMode::Standard)? as u64)
        },
        epsilon,
        0.0,
        trials,
        2.576,
        seed,
    )
}

/// A deliberately tiny private-Winnow instance for ratio testing: 2
/// dimensions, horizon 20, one allowed switch, 4 draws per release. The
/// privacy-relevant constants (`epsilon_hat`, `eta`) follow the defining
/// equations at `epsilon = 1`, `delta = 1e-3` with `K = 1`, `m = 4`; the
/// threshold is utility-only and set to 1 so that switches actually happen
/// within the horizon.
pub fn dp_winnow_audit_params() -> Result<DpWinnowParams> {
    let (epsilon, delta): (f64, f64) = (1.0, 1e-3);
    let k = 1.0f64;
    let m = 4.0f64;
    let epsilon_hat = epsilon / (4.0 * (2.0 * k * (2.0 / delta).ln()).sqrt());
    let eta = epsilon / (8.0 * (2.0 * m * k * (4.0 * k / delta).ln()).sqrt());
    DpWinnowParams::from_parts(20, 2, 1.0, epsilon, delta, 0.1, 0.25, 1, epsilon_hat, eta, 1.0, 4)
}

/// Neighbor ratio test for the private online learner on streams differing
/// in one labeled example, with outputs coarsened to (first public switch
/// round, final public count of the first coordinate).
pub fn dp_winnow_ratio_suite(trials: u64, seed: u64) -> Result<RatioReport> {
    let params = dp_winnow_audit_params()?;
    let build = |flip_first: bool| -> Result<Vec<OnlineExample>> {
        (1..=params.horizon)
            .map(|t| {
                let y = if t == 1 && flip_first {
                    1
                } else if t <= 2 {
                    -1
                } else {
                    1
                };
                OnlineExample::new(vec![1, 1], y)
            })
            .collect()
    };
    let stream_a = build(false)?;
    let stream_b = build(true)?;
    neighbor_ratio_test(
        move |use_b, source| {
            let stream = if use_b { &stream_b } else { &stream_a };
            let (_, state) =
                run_dp_winnow_with_state(stream, params, NoiseMode::Standard, source)?;
            let first_switch =
                state.history().events.first().map(|e| e.round).unwrap_or(0);
            let first_coordinate_count = state.public_weights().counts()[0];
            Ok(first_switch * (params.sample_count + 1) + first_coordinate_count)
        },
        params.epsilon,
        params.delta,
        trials,
        2.576,
        seed,
    )
}

/// Accuracy check for the above-threshold mechanism: queries ramp across
/// `[L - 2a, L + 2a]` where `a` is the accuracy width; a trial is violated
/// if the mechanism fires at a query below `L - a` or stays silent past a
/// query above `L + a`.
pub fn above_threshold_bound_suite(trials: u64, seed: u64) -> Result<BoundReport> {
    let (epsilon_hat, horizon, beta, threshold) = (1.0f64, 100u64, 0.05f64, 50.0f64);
    let alpha = AboveThreshold::accuracy_width(epsilon_hat, horizon, beta);
    bound_check(
        "above-threshold accuracy width",
        beta,
        trials,
        2.576,
        seed,
        move |_, source| {
            let mut svt = AboveThreshold::initialize(
                epsilon_hat,
                threshold,
                beta,
                source,
                NoiseMode::Standard,
            )?;
            for t in 0..horizon {
                let query = threshold - 2.0 * alpha
                    + 4.0 * alpha * t as f64 / (horizon - 1) as f64;
                if svt.test(query, source)? {
                    return Ok(query < threshold - alpha);
                }
                if query > threshold + alpha {
                    return Ok(true);
                }
            }
            Ok(false)
        },
    )
}

#[derive(Serialize)]
struct ResolvedAudit {
    command: &'static str,
    seed: u64,
    suite: SuiteArg,
    epsilon: f64,
    trials: u64,
}

fn cmd_audit(common: &Common, sec: AuditSection) -> Result<(Artifacts, ExitCode)> {
    let suite = sec.suite.unwrap_or(SuiteArg::EmSelect);
    let epsilon = sec.epsilon.unwrap_or(1.0);
    let trials = common.trials.unwrap_or(match suite {
        SuiteArg::EmSelect => 200_000,
        SuiteArg::DpWinnow => 100_000,
        SuiteArg::AboveThreshold => 2_000,
    });
    let resolved =
        ResolvedAudit { command: "audit", seed: common.seed, suite, epsilon, trials };
    echo_config(common, &resolved)?;

    let mut artifacts = Artifacts::new(common.seed, &resolved)?;
    let verdict = match suite {
        SuiteArg::EmSelect => {
            let report = em_select_ratio_suite(epsilon, trials, common.seed)?;
            println!(
                "verdict = {} (statistic {} vs bound {})",
                report.verdict, report.statistic, report.bound
            );
            let v = report.verdict;
            artifacts.push_json("report.json", &report)?;
            v
        }
        SuiteArg::DpWinnow => {
            let report = dp_winnow_ratio_suite(trials, common.seed)?;
            println!(
                "verdict = {} (statistic {} vs bound {})",
                report.verdict, report.statistic, report.bound
            );
            let v = report.verdict;
            artifacts.push_json("report.json", &report)?;
            v
        }
        SuiteArg::AboveThreshold => {
            let report = above_threshold_bound_suite(trials, common.seed)?;
            println!(
                "verdict = {} ({} violations in {} trials, allowed rate {})",
                report.verdict, report.violations, report.trials, report.allowed_rate
            );
            let v = report.verdict;
            artifacts.push_json("report.json", &report)?;
            v
        }
    };
    let code = match verdict {
        Verdict::Fail => ExitCode::FAILURE,
        Verdict::Pass | Verdict::Inconclusive => ExitCode::SUCCESS,
    };
    Ok((artifacts, code))
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ResolvedOracle {
    command: &'static str,
    seed: u64,
    dim: usize,
    family: FamilyArg,
    width: usize,
    rule_count: usize,
    alternations: usize,
    sample_size: usize,
    max_length: usize,
    sample: Option<PathBuf>,
}

#[derive(Serialize)]
struct OracleReport {
    min_error: u64,
    greedy_error: Option<u64>,
    sample_size: usize,
    family_size: usize,
    max_length: usize,
    search_space: u64,
}

fn cmd_oracle(common: &Common, sec: OracleSection) -> Result<(Artifacts, ExitCode)> {
    let resolved = ResolvedOracle {
        command: "oracle",
        seed: common.seed,
        dim: sec.dim.unwrap_or(4),
        family: sec.family.unwrap_or(FamilyArg::LiteralsWithNegations),
        width: sec.width.unwrap_or(2),
        rule_count: sec.rule_count.unwrap_or(2),
        // As in pac-dl, the default adapts to the rule count.
        alternations: sec
            .alternations
            .unwrap_or_else(|| 1.min(sec.rule_count.unwrap_or(2).saturating_sub(1))),
        sample_size: sec.sample_size.unwrap_or(60),
        max_length: sec.max_length.unwrap_or(3),
        sample: sec.sample.clone(),
    };
    echo_config(common, &resolved)?;

    let file_sample = match &sec.sample {
        Some(path) => Some(pac_sample_from_csv(&fs::read_to_string(path)?)?),
        None => None,
    };
    let dim = file_sample.as_ref().map_or(resolved.dim, PacSample::dim);
    let family = build_family(resolved.family, dim, resolved.width)?;
    let base = RandomSource::new(common.seed);
    let (sample, target): (PacSample, Option<DecisionList>) = match file_sample {
        Some(s) => (s, None),
        None => {
            let mut source = base.split("oracle-sample");
            let target = random_decision_list(
                &family,
                resolved.rule_count,
                resolved.alternations,
                &mut source,
            )?;
            let sample = pac_sample(
                &target,
                dim,
                &PacDistribution::Uniform,
                resolved.sample_size,
                &mut source,
            )?;
            (sample, Some(target))
        }
    };

    let (best, min_error) = brute_force_erm(&sample, &family, resolved.max_length)?;
    let greedy_error = match rivest_greedy(&sample, &family) {
        Ok(list) => Some(empirical_error(&list, &sample)? as u64),
        Err(Error::NonRealizable(_)) => None,
        Err(e) => return Err(e),
    };
    let report = OracleReport {
        min_error: min_error as u64,
        greedy_error,
        sample_size: sample.len(),
        family_size: family.len(),
        max_length: resolved.max_length,
        search_space: erm_search_space(family.len(), resolved.max_length) as u64,
    };
    println!("search space = {} lists", report.search_space);
    println!("minimum empirical error = {}", report.min_error);
    match report.greedy_error {
        Some(e) => println!("greedy error = {e}"),
        None => println!("greedy error = n/a (sample not realizable)"),
    }

    let mut artifacts = Artifacts::new(common.seed, &resolved)?;
    artifacts.push_json_text("best_list.json", &decision_list_to_json(&best)?)?;
    if let Some(t) = target {
        artifacts.push_json_text("target_list.json", &decision_list_to_json(&t)?)?;
    }
    artifacts.push_json("report.json", &report)?;
    // Echo the sample the oracle ran on so the run is self-contained.
    artifacts.push_csv("sample.csv", &pac_sample_to_csv(&sample));
    Ok((artifacts, ExitCode::SUCCESS))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn audit_instance_satisfies_its_defining_equations() {
        let p = dp_winnow_audit_params().unwrap();
        assert_eq!(p.switching_bound, 1);
        assert_eq!(p.sample_count, 4);
        let eh = 1.0 / (4.0 * (2.0 * (2.0f64 / 1e-3).ln()).sqrt());
        let eta = 1.0 / (8.0 * (8.0 * (4.0f64 / 1e-3).ln()).sqrt());
        assert!((p.epsilon_hat - eh).abs() < 1e-15);
        assert!((p.eta - eta).abs() < 1e-15);
    }

    #[test]
    fn small_suites_run_and_report() {
        let report = em_select_ratio_suite(1.0, 4_000, 9).unwrap();
        assert_ne!(report.verdict, Verdict::Fail);
        assert_eq!(report.trials, 4_000);

        let report = above_threshold_bound_suite(200, 9).unwrap();
        assert_ne!(report.verdict, Verdict::Fail);
    }

    #[test]
    fn config_merging_prefers_cli_values() {
        let cli = ParamsSection { horizon: Some(5), ..Default::default() };
        let file = ParamsSection { horizon: Some(7), dim: Some(16), ..Default::default() };
        let merged = ParamsSection::merged(cli, Some(file));
        assert_eq!(merged.horizon, Some(5));
        assert_eq!(merged.dim, Some(16));
        assert_eq!(merged.rho, None);
    }

    #[test]
    fn config_file_rejects_unknown_fields() {
        let bad = r#"{"seed": 1, "unknown_field": true}"#;
        assert!(serde_json::from_str::<ConfigFile>(bad).is_err());
        let bad_section = r#"{"params": {"horizons": 10}}"#;
        assert!(serde_json::from_str::<ConfigFile>(bad_section).is_err());
        let good = r#"{"seed": 1, "params": {"horizon": 10}, "zero_noise": true}"#;
        let parsed: ConfigFile = serde_json::from_str(good).unwrap();
        assert_eq!(parsed.seed, Some(1));
        assert_eq!(parsed.zero_noise, Some(true));
        assert_eq!(parsed.params.unwrap().horizon, Some(10));
    }

    #[test]
    fn meta_comment_and_json_injection() {
        let meta = RunMeta { seed: 3, config_hash: "abc".into(), version: "1.0.0".into() };
        assert_eq!(meta.csv_comment(), "# seed=3 config_hash=abc version=1.0.0\n");
        let with = json_with_meta(r#"{"a": 1}"#, &meta).unwrap();
        let v: serde_json::Value = serde_json::from_str(&with).unwrap();
        assert_eq!(v["meta"]["seed"], 3);
        assert_eq!(v["a"], 1);
        assert!(json_with_meta("[1, 2]", &meta).is_err());
    }
}
