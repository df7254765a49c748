//! Experiment runner behind the `srwalk` binary.
//!
//! Each subcommand writes CSV data files and a JSON report with the fields
//! `command`, `params`, `seed`, `statistics`, `criteria`, `files` and
//! `wall_time_s` into `--out-dir`. Keys are sorted, so two runs with the
//! same configuration produce identical reports apart from `wall_time_s`.
//!
//! A JSON file passed with `--config` supplies flags by name (`"n": 1000`,
//! `"n_grid": [100, 1000]`, `"command": "erw-moments"`); flags given on the
//! command line take precedence.
//!
//! Exit codes: 0 all criteria passed, 1 some criterion failed, 2 usage
//! error, 3 numeric or domain error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::acceptance::{run_criterion, walk_endpoints, CRITERIA};
use crate::constants::{
    businger_integral, constant_closed_c2, constant_series, constant_series_mc, write_constants_csv, ConstantMethod,
    ConstantResult,
};
use crate::error::Error;
use crate::moments::{erw_fourth_moment, erw_second_moment_closed};
use crate::params::{classify_regime, derive_params, WalkParams};
use crate::percolation::grow_and_percolate;
use crate::seed::{stream_rng, Stream};
use crate::stable::NormalizingSequence;
use crate::stats::mc_mean_se;
use crate::steps::StepSource;
use crate::tape::RandomnessTape;
use crate::walk::simulate_walk;
use crate::weights::{
    check_conditions, clt_experiment, gen_weights, log_window_length, weighted_sum, write_column_csv, CltExperiment,
    ConditionRow, LimitSpec, WeightScheme, YLaw,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CRITERION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "srwalk", version, about = "Step-reinforced random walk experiments")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// JSON file with flag values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "SRWALK_THREADS")]
    threads: Option<usize>,
    /// Directory for CSV and JSON outputs.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Master seed.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
#[command(args_override_self = true)]
enum Command {
    /// Simulate walk paths.
    SimulateWalk(WalkArgs),
    /// Exact second and fourth moments of the elephant random walk.
    ErwMoments(MomentArgs),
    /// The limit constant c(alpha, p, r).
    ComputeConstant(ConstantArgs),
    /// Check T_n = sum W_nk xi_k and component counts.
    PercolationCheck(PercolationArgs),
    /// Normalized weighted sums against their limit law.
    VerifyClt(CltArgs),
    /// Empirical weight-condition diagnostics.
    Conditions(ConditionArgs),
    /// The spike, log-window and slowly varying counterexamples.
    Counterexample(CounterexampleArgs),
    /// Run the acceptance criteria.
    Acceptance(AcceptanceArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::SimulateWalk(_) => "simulate-walk",
            Command::ErwMoments(_) => "erw-moments",
            Command::ComputeConstant(_) => "compute-constant",
            Command::PercolationCheck(_) => "percolation-check",
            Command::VerifyClt(_) => "verify-clt",
            Command::Conditions(_) => "conditions",
            Command::Counterexample(_) => "counterexample",
            Command::Acceptance(_) => "acceptance",
        }
    }
}

const COMMANDS: [&str; 8] = [
    "simulate-walk",
    "erw-moments",
    "compute-constant",
    "percolation-check",
    "verify-clt",
    "conditions",
    "counterexample",
    "acceptance",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum StepFamily {
    Rademacher,
    Gaussian,
    Stable,
    Pareto,
    PointMass,
}

#[derive(Debug, Clone, Args, Serialize)]
struct StepArgs {
    /// Law of the fresh steps.
    #[arg(long, value_enum, default_value = "rademacher")]
    steps: StepFamily,
    /// Stability or tail index for `stable` and `pareto` steps.
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    /// Value of `point-mass` steps.
    #[arg(long, default_value_t = 1.0)]
    value: f64,
}

impl StepArgs {
    fn source(&self) -> StepSource {
        match self.steps {
            StepFamily::Rademacher => StepSource::Rademacher,
            StepFamily::Gaussian => StepSource::Gaussian,
            StepFamily::Stable => StepSource::Stable { alpha: self.alpha },
            StepFamily::Pareto => StepSource::SymmetricPareto { alpha: self.alpha },
            StepFamily::PointMass => StepSource::PointMass { value: self.value },
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
struct WalkArgs {
    #[arg(long)]
    p: f64,
    #[arg(long)]
    r: f64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    replicates: usize,
    #[command(flatten)]
    steps: StepArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
struct MomentArgs {
    #[arg(long)]
    r: f64,
    #[arg(long, default_value_t = 1000)]
    n_max: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum MethodArg {
    Series,
    Mc,
    Closed,
    Integral,
}

#[derive(Debug, Clone, Args, Serialize)]
struct ConstantArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    r: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, default_value = "series")]
    method: MethodArg,
    /// Simulated paths for `--method mc`.
    #[arg(long, default_value_t = 20_000)]
    paths: usize,
    /// Path length for `--method mc`.
    #[arg(long, default_value_t = 512)]
    k_max: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
struct PercolationArgs {
    #[arg(long)]
    p: f64,
    #[arg(long)]
    r: f64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    replicates: usize,
    /// Largest component size tabulated in the frequency file.
    #[arg(long, default_value_t = 10)]
    k_max: usize,
    #[command(flatten)]
    steps: StepArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SchemeArg {
    AllOnes,
    Efron,
    Bayesian,
    SelfNormalized,
    Percolation,
    Spike,
    LogWindow,
    SlowVarying,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum YLawArg {
    Exponential,
    Uniform,
    Pareto,
}

#[derive(Debug, Clone, Args, Serialize)]
struct SchemeArgs {
    #[arg(long, value_enum, default_value = "all-ones")]
    scheme: SchemeArg,
    /// Copy probability of the percolation scheme.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Sign-keeping probability of the percolation scheme.
    #[arg(long, default_value_t = 0.5)]
    r: f64,
    /// Law of `Y` for the self-normalized scheme.
    #[arg(long, value_enum, default_value = "exponential")]
    y_law: YLawArg,
    /// Tail index of a Pareto `Y`.
    #[arg(long, default_value_t = 1.5)]
    y_tail: f64,
}

impl SchemeArgs {
    fn scheme(&self) -> WeightScheme {
        match self.scheme {
            SchemeArg::AllOnes => WeightScheme::AllOnes,
            SchemeArg::Efron => WeightScheme::Efron,
            SchemeArg::Bayesian => WeightScheme::Bayesian,
            SchemeArg::SelfNormalized => WeightScheme::SelfNormalized {
                y: match self.y_law {
                    YLawArg::Exponential => YLaw::Exponential,
                    YLawArg::Uniform => YLaw::Uniform,
                    YLawArg::Pareto => YLaw::Pareto { tail: self.y_tail },
                },
            },
            SchemeArg::Percolation => WeightScheme::Percolation { p: self.p, r: self.r },
            SchemeArg::Spike => WeightScheme::Spike,
            SchemeArg::LogWindow => WeightScheme::LogWindow,
            SchemeArg::SlowVarying => WeightScheme::SlowVarying,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum LimitArg {
    Auto,
    Normal,
    Stable,
    Mixture,
    StepLaw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum NormalizerArg {
    Auto,
    Power,
    SqrtNLogN,
}

#[derive(Debug, Clone, Args, Serialize)]
struct CltArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[command(flatten)]
    steps: StepArgs,
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(long, default_value_t = 5000)]
    replicates: usize,
    #[arg(long, value_enum, default_value = "auto")]
    limit: LimitArg,
    /// Variance of a normal limit or scale of a stable one; `auto` derives it.
    #[arg(long)]
    limit_scale: Option<f64>,
    #[arg(long, value_enum, default_value = "auto")]
    normalizer: NormalizerArg,
    /// Multiplies every normalized sum.
    #[arg(long, default_value_t = 1.0)]
    post_scale: f64,
    #[arg(long, default_value_t = 0.03)]
    ks_threshold: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
struct ConditionArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Comma-separated sizes.
    #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
    n_grid: Vec<usize>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 2.5)]
    beta: f64,
    #[arg(long, default_value_t = 100)]
    replicates: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CounterexampleKind {
    Spike,
    LogWindow,
    SlowVarying,
}

#[derive(Debug, Clone, Args, Serialize)]
struct CounterexampleArgs {
    #[arg(long, value_enum)]
    which: CounterexampleKind,
    /// Defaults to 4096 for the spike and 10000 otherwise.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 5000)]
    replicates: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
struct AcceptanceArgs {
    /// Comma-separated criterion ids (default: all).
    #[arg(long, value_delimiter = ',')]
    only: Vec<u32>,
}

/// Why a run stopped early.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numeric(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numeric(Error::Io(e))
    }
}

#[derive(Debug, Clone, Serialize)]
struct CriterionReport {
    passed: bool,
    value: f64,
    threshold: f64,
}

/// Collects what a subcommand measured.
#[derive(Debug, Default)]
struct Report {
    statistics: BTreeMap<String, Value>,
    criteria: BTreeMap<String, CriterionReport>,
    files: Vec<String>,
}

impl Report {
    fn stat(&mut self, key: &str, value: impl Serialize) {
        self.statistics
            .insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    fn criterion(&mut self, key: &str, passed: bool, value: f64, threshold: f64) {
        self.criteria.insert(key.to_string(), CriterionReport { passed, value, threshold });
    }

    fn all_passed(&self) -> bool {
        self.criteria.values().all(|c| c.passed)
    }
}

struct Output<'a> {
    dir: &'a Path,
    command: &'static str,
}

impl Output<'_> {
    fn csv(&self, report: &mut Report, suffix: &str, write: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> std::io::Result<()> {
        let name = format!("{}_{suffix}.csv", self.command);
        let mut out = BufWriter::new(File::create(self.dir.join(&name))?);
        write(&mut out)?;
        out.flush()?;
        report.files.push(name);
        Ok(())
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match parse(args) {
        Ok(cli) => cli,
        Err(code) => return code,
    };
    match execute(cli) {
        Ok(passed) => {
            if passed {
                EXIT_PASS
            } else {
                EXIT_CRITERION_FAILED
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("error: {e}");
            EXIT_NUMERIC
        }
    }
}

fn clap_exit(e: clap::Error) -> i32 {
    let _ = e.print();
    if e.use_stderr() {
        EXIT_USAGE
    } else {
        // --help and --version
        EXIT_PASS
    }
}

fn parse(args: Vec<OsString>) -> std::result::Result<Cli, i32> {
    let Some(path) = config_path(&args) else {
        let cli = Cli::try_parse_from(&args).map_err(clap_exit)?;
        return if cli.command.is_some() {
            Ok(cli)
        } else {
            eprintln!("usage error: no subcommand given (try --help)");
            Err(EXIT_USAGE)
        };
    };
    let config = std::fs::read_to_string(&path)
        .map_err(|e| e.to_string())
        .and_then(|s| serde_json::from_str::<Value>(&s).map_err(|e| e.to_string()));
    let config = match config {
        Ok(Value::Object(map)) => map,
        Ok(_) => {
            eprintln!("usage error: config {} must hold a JSON object", path.display());
            return Err(EXIT_USAGE);
        }
        Err(e) => {
            eprintln!("usage error: cannot read config {}: {e}", path.display());
            return Err(EXIT_USAGE);
        }
    };
    let position = args
        .iter()
        .position(|a| a.to_str().is_some_and(|s| COMMANDS.contains(&s)));
    let command = match (position, config.get("command")) {
        (Some(i), _) => args[i].clone(),
        (None, Some(Value::String(c))) => OsString::from(c),
        _ => {
            eprintln!("usage error: no subcommand on the command line or in the config");
            return Err(EXIT_USAGE);
        }
    };
    let mut merged = vec![args[0].clone(), command];
    for (key, value) in &config {
        if key == "command" || key == "config" {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            Value::Bool(true) => merged.push(flag.into()),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                let joined: Vec<String> = items.iter().map(scalar_text).collect();
                merged.push(flag.into());
                merged.push(joined.join(",").into());
            }
            other => {
                merged.push(flag.into());
                merged.push(scalar_text(other).into());
            }
        }
    }
    merged.extend(
        args.iter()
            .enumerate()
            .skip(1)
            .filter(|(i, _)| Some(*i) != position)
            .map(|(_, a)| a.clone()),
    );
    Cli::try_parse_from(merged).map_err(clap_exit)
}

/// The `--config` value, found before clap runs so that flags of a
/// subcommand named only in the config still parse.
fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut iter = args.iter().skip(1);
    while let Some(arg) = iter.next() {
        let text = arg.to_str()?;
        if text == "--config" {
            return iter.next().map(PathBuf::from);
        }
        if let Some(value) = text.strip_prefix("--config=") {
            return Some(PathBuf::from(value));
        }
    }
    None
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn execute(cli: Cli) -> std::result::Result<bool, Failure> {
    if let Some(t) = cli.threads.filter(|&t| t > 0) {
        // fails harmlessly if a pool already exists in this process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let command = cli.command.expect("subcommand checked by the parser");
    std::fs::create_dir_all(&cli.out_dir)?;
    let out = Output {
        dir: &cli.out_dir,
        command: command.name(),
    };
    let start = Instant::now();
    let mut report = Report::default();
    let seed = cli.seed;
    let params = match &command {
        Command::SimulateWalk(a) => {
            simulate_walk_cmd(a, seed, &out, &mut report)?;
            serde_json::to_value(a)
        }
        Command::ErwMoments(a) => {
            erw_moments_cmd(a, &out, &mut report)?;
            serde_json::to_value(a)
        }
        Command::ComputeConstant(a) => {
            compute_constant_cmd(a, seed, &out, &mut report)?;
            serde_json::to_value(a)
        }
        Command::PercolationCheck(a) => {
            percolation_check_cmd(a, seed, &out, &mut report)?;
            serde_json::to_value(a)
        }
        Command::VerifyClt(a) => {
            verify_clt_cmd(a, seed, &out, &mut report)?;
            serde_json::to_value(a)
        }
        Command::Conditions(a) => {
            conditions_cmd(a, seed, &out, &mut report)?;
            serde_json::to_value(a)
        }
        Command::Counterexample(a) => {
            counterexample_cmd(a, seed, &out, &mut report)?;
            serde_json::to_value(a)
        }
        Command::Acceptance(a) => {
            acceptance_cmd(a, seed, &out, &mut report)?;
            serde_json::to_value(a)
        }
    }
    .map_err(Error::from)?;

    let passed = report.all_passed();
    let json_name = format!("{}.json", command.name());
    let mut files = report.files.clone();
    files.push(json_name.clone());
    let doc = json!({
        "command": command.name(),
        "params": params,
        "seed": seed,
        "statistics": report.statistics,
        "criteria": report.criteria,
        "files": files,
        "wall_time_s": start.elapsed().as_secs_f64(),
    });
    let text = serde_json::to_string_pretty(&doc).map_err(Error::from)?;
    std::fs::write(cli.out_dir.join(&json_name), text + "\n")?;
    for (name, c) in &report.criteria {
        println!("[{}] {name}: {} (threshold {})", if c.passed { "PASS" } else { "FAIL" }, c.value, c.threshold);
    }
    println!("report: {}", cli.out_dir.join(json_name).display());
    Ok(passed)
}

fn simulate_walk_cmd(a: &WalkArgs, seed: u64, out: &Output, report: &mut Report) -> std::result::Result<(), Failure> {
    let source = a.steps.source();
    source.validate()?;
    if a.n == 0 || a.replicates == 0 {
        return Err(Failure::Usage("n and replicates must be positive".into()));
    }
    let params = WalkParams::new(a.p, a.r, 2.0)?;
    let (regime, scaling) = classify_regime(&params)?;
    let mu = match (source.mean(), source.second_moment()) {
        (Some(m), Some(s)) => match derive_params(&params, m, s) {
            Ok(d) => {
                report.stat("derived", d);
                Some(d.mu)
            }
            Err(Error::UndefinedMean) => None,
            Err(e) => return Err(e.into()),
        },
        _ => None,
    };
    let paths: Vec<_> = (0..a.replicates as u64)
        .into_par_iter()
        .map(|i| {
            let tape = RandomnessTape::sample(a.n, a.p, a.r, &mut stream_rng(seed, i, Stream::Tape))?;
            simulate_walk(&source, a.n, &tape, &mut stream_rng(seed, i, Stream::Steps))
        })
        .collect::<crate::Result<_>>()?;
    out.csv(report, "path", |w| paths[0].write_csv(w))?;
    let scale = scaling.at(a.n as f64);
    let centred: Vec<f64> = paths
        .iter()
        .map(|p| (p.last() - mu.unwrap_or(0.0) * a.n as f64) / scale)
        .collect();
    out.csv(report, "endpoints", |w| {
        writeln!(w, "replicate,T_n,scaled")?;
        for (i, (p, c)) in paths.iter().zip(&centred).enumerate() {
            writeln!(w, "{i},{:?},{c:?}", p.last())?;
        }
        Ok(())
    })?;
    let (mean, se) = mc_mean_se(&centred)?;
    report.stat("regime", regime);
    report.stat("scaling", scaling.label());
    report.stat("a", params.a());
    report.stat("first_T_n", paths[0].last());
    report.stat("scaled_mean", mean);
    report.stat("scaled_se", se);
    Ok(())
}

fn erw_moments_cmd(a: &MomentArgs, out: &Output, report: &mut Report) -> std::result::Result<(), Failure> {
    let table = erw_fourth_moment(a.r, a.n_max)?;
    let closed: Option<Vec<f64>> = (4.0 * a.r - 2.0 > -1.0)
        .then(|| (1..=a.n_max).map(|n| erw_second_moment_closed(a.r, n)).collect::<crate::Result<_>>())
        .transpose()?;
    out.csv(report, "moments", |w| {
        writeln!(w, "n,second,fourth,second_closed")?;
        for n in 1..=a.n_max {
            let c = closed.as_ref().map(|c| format!("{:?}", c[n - 1])).unwrap_or_default();
            writeln!(w, "{n},{:?},{:?},{c}", table.second_at(n), table.fourth_at(n))?;
        }
        Ok(())
    })?;
    let cs_gap = (1..=a.n_max)
        .map(|n| table.fourth_at(n) - table.second_at(n).powi(2))
        .fold(f64::INFINITY, f64::min);
    report.criterion("cauchy_schwarz_min_gap", cs_gap >= -1e-9 * table.fourth_at(a.n_max), cs_gap, 0.0);
    if let Some(c) = &closed {
        let worst = (1..=a.n_max)
            .map(|n| (c[n - 1] / table.second_at(n) - 1.0).abs())
            .fold(0.0, f64::max);
        report.criterion("closed_form_relative_error", worst <= 1e-9, worst, 1e-9);
    } else {
        report.stat("closed_form", "unavailable for r <= 1/4; recursion only");
    }
    report.stat("second_at_n_max", table.second_at(a.n_max));
    report.stat("fourth_at_n_max", table.fourth_at(a.n_max));
    report.stat("gamma", table.gamma);
    Ok(())
}

fn compute_constant_cmd(a: &ConstantArgs, seed: u64, out: &Output, report: &mut Report) -> std::result::Result<(), Failure> {
    let result = match a.method {
        MethodArg::Series => constant_series(a.alpha, a.p, a.r, a.tol)?,
        MethodArg::Mc => constant_series_mc(a.alpha, a.p, a.r, a.k_max, a.paths, seed)?,
        MethodArg::Integral => {
            if a.r != 1.0 {
                return Err(Failure::Usage("the integral form only covers r = 1".into()));
            }
            businger_integral(a.alpha, a.p, a.tol)?
        }
        MethodArg::Closed => {
            if a.alpha != 2.0 {
                return Err(Error::ClosedFormUnavailable("closed form needs alpha = 2".into()).into());
            }
            ConstantResult {
                value: constant_closed_c2(a.p, a.r)?,
                truncation_k: 0,
                tail_bound: 0.0,
                method: ConstantMethod::ClosedForm,
            }
        }
    };
    out.csv(report, "constants", |w| write_constants_csv(w, &[(a.alpha, a.p, a.r, result)]))?;
    report.stat("value", result.value);
    report.stat("tail_bound", result.tail_bound);
    report.stat("truncation_k", result.truncation_k);
    report.stat("method", result.method);
    if a.alpha == 2.0 {
        if let Ok(closed) = constant_closed_c2(a.p, a.r) {
            let err = (result.value - closed).abs();
            let threshold = 1e-6f64.max(result.tail_bound);
            report.criterion("closed_form_agreement", err <= threshold, err, threshold);
        }
    }
    Ok(())
}

fn percolation_check_cmd(a: &PercolationArgs, seed: u64, out: &Output, report: &mut Report) -> std::result::Result<(), Failure> {
    let source = a.steps.source();
    source.validate()?;
    if a.n == 0 || a.replicates == 0 {
        return Err(Failure::Usage("n and replicates must be positive".into()));
    }
    let reps: Vec<(f64, bool, Vec<f64>)> = (0..a.replicates as u64)
        .into_par_iter()
        .map(|i| {
            let tape = RandomnessTape::sample(a.n, a.p, a.r, &mut stream_rng(seed, i, Stream::Tape))?;
            let (_, forest) = grow_and_percolate(a.n, &tape)?;
            let walk = simulate_walk(&source, a.n, &tape, &mut stream_rng(seed, i, Stream::Steps))?;
            let t = walk.last();
            let s = forest.weighted_sum(&walk.step_values)?;
            let freq = (1..=a.k_max)
                .map(|k| forest.nu().get(&k).copied().unwrap_or(0) as f64 / a.n as f64)
                .collect();
            Ok(((t - s).abs() / (1.0 + t.abs()), t == s, freq))
        })
        .collect::<crate::Result<_>>()?;
    let worst = reps.iter().map(|r| r.0).fold(0.0, f64::max);
    let exact = reps.iter().all(|r| r.1);
    let tape = RandomnessTape::sample(a.n, a.p, a.r, &mut stream_rng(seed, 0, Stream::Tape))?;
    let (_, forest) = grow_and_percolate(a.n, &tape)?;
    out.csv(report, "components", |w| forest.write_components_csv(w))?;
    let limit = |k: usize| crate::constants::component_frequency(a.p, k).ok();
    out.csv(report, "frequencies", |w| {
        writeln!(w, "k,mean_nu_over_n,se,limit")?;
        for k in 1..=a.k_max {
            let col: Vec<f64> = reps.iter().map(|r| r.2[k - 1]).collect();
            let (m, se) = mc_mean_se(&col).map_err(std::io::Error::other)?;
            let lim = limit(k).map(|v| format!("{v:?}")).unwrap_or_default();
            writeln!(w, "{k},{m:?},{se:?},{lim}")?;
        }
        Ok(())
    })?;
    report.criterion("identity_max_relative_error", worst <= 1e-9, worst, 1e-9);
    if source.is_integer_valued() {
        report.criterion("identity_exact", exact, exact as u8 as f64, 1.0);
    }
    report.stat("components_first_replicate", forest.roots().count());
    Ok(())
}

fn auto_normalizer(steps: &StepSource) -> NormalizingSequence {
    match *steps {
        StepSource::Stable { alpha } => NormalizingSequence::ExactStable { alpha },
        StepSource::SymmetricPareto { alpha: 2.0 } => NormalizingSequence::SqrtNLogN,
        StepSource::SymmetricPareto { alpha } => NormalizingSequence::ExactStable { alpha },
        _ => NormalizingSequence::ExactStable { alpha: 2.0 },
    }
}

/// Index of the limit law: 2 for finite variance and the log boundary.
fn step_index(steps: &StepSource) -> f64 {
    match *steps {
        StepSource::Stable { alpha } | StepSource::SymmetricPareto { alpha } => alpha,
        _ => 2.0,
    }
}

fn auto_limit(scheme: &WeightScheme, steps: &StepSource, report: &mut Report) -> crate::Result<LimitSpec> {
    let alpha = step_index(steps);
    // variance of the limit of sum xi_k / a_n for index 2
    let base_variance = match *steps {
        StepSource::Stable { .. } => 2.0,
        _ => 1.0,
    };
    let gaussian = alpha == 2.0 && !matches!(steps, StepSource::Stable { .. });
    let scaled = |c: f64| {
        if gaussian {
            LimitSpec::Normal { variance: c * base_variance }
        } else {
            LimitSpec::Stable { alpha, scale: c.powf(1.0 / alpha) }
        }
    };
    Ok(match *scheme {
        WeightScheme::Spike | WeightScheme::SlowVarying => LimitSpec::StepLaw,
        WeightScheme::Efron | WeightScheme::Bayesian | WeightScheme::SelfNormalized { .. } => LimitSpec::Mixture { alpha },
        WeightScheme::AllOnes | WeightScheme::LogWindow => scaled(1.0),
        WeightScheme::Percolation { p, r } => {
            if p == 0.0 {
                scaled(1.0)
            } else {
                let c = if alpha == 2.0 && p < 1.0 {
                    constant_closed_c2(p, r)?
                } else {
                    let c = constant_series(alpha, p, r, 1e-9)?;
                    report.stat("constant_tail_bound", c.tail_bound);
                    c.value
                };
                report.stat("constant", c);
                scaled(c)
            }
        }
    })
}

fn verify_clt_cmd(a: &CltArgs, seed: u64, out: &Output, report: &mut Report) -> std::result::Result<(), Failure> {
    let scheme = a.scheme.scheme();
    let steps = a.steps.source();
    steps.validate()?;
    let alpha = step_index(&steps);
    let normalizer = match a.normalizer {
        NormalizerArg::Auto => auto_normalizer(&steps),
        NormalizerArg::Power => NormalizingSequence::ExactStable { alpha },
        NormalizerArg::SqrtNLogN => NormalizingSequence::SqrtNLogN,
    };
    let limit = match (a.limit, a.limit_scale) {
        (LimitArg::Auto, None) => auto_limit(&scheme, &steps, report)?,
        (LimitArg::Auto, Some(_)) => return Err(Failure::Usage("--limit-scale needs an explicit --limit".into())),
        (LimitArg::Normal, s) => LimitSpec::Normal { variance: s.unwrap_or(1.0) },
        (LimitArg::Stable, s) => LimitSpec::Stable { alpha, scale: s.unwrap_or(1.0) },
        (LimitArg::Mixture, _) => LimitSpec::Mixture { alpha },
        (LimitArg::StepLaw, _) => LimitSpec::StepLaw,
    };
    let exp = CltExperiment {
        scheme,
        steps,
        normalizer,
        limit,
        n: a.n,
        replicates: a.replicates,
        seed,
        post_scale: a.post_scale,
    };
    let outcome = clt_experiment(&exp)?;
    out.csv(report, "sample", |w| write_column_csv(w, "normalized_sum", &outcome.sample))?;
    report.stat("limit", &outcome.limit);
    report.stat("normalizer", normalizer.label());
    report.stat("ks_limit", outcome.ks_limit);
    report.stat("two_sample", outcome.two_sample);
    report.stat("ks_standard_normal", outcome.ks_standard_normal);
    report.criterion("ks_to_limit", outcome.ks_limit <= a.ks_threshold, outcome.ks_limit, a.ks_threshold);
    Ok(())
}

fn conditions_cmd(a: &ConditionArgs, seed: u64, out: &Output, report: &mut Report) -> std::result::Result<(), Failure> {
    let scheme = a.scheme.scheme();
    let diag = check_conditions(&scheme, &a.n_grid, a.alpha, a.beta, a.replicates, seed)?;
    out.csv(report, "rows", |w| {
        write!(w, "n,a1_mean,a1_sd,a2_mean,a2_sd,alpha_sum_mean,alpha_sum_sd")?;
        for c in &diag.tail_levels {
            write!(w, ",a4_c{c}")?;
        }
        for c in &diag.tail_levels {
            write!(w, ",a6_c{c}")?;
        }
        writeln!(w)?;
        for row in &diag.rows {
            let (a1, a1s) = ConditionRow::mean_sd(&row.a1_stat);
            let (a2, a2s) = ConditionRow::mean_sd(&row.a2_stat);
            let (al, als) = ConditionRow::mean_sd(&row.alpha_sum);
            write!(w, "{},{a1:?},{a1s:?},{a2:?},{a2s:?},{al:?},{als:?}", row.n)?;
            for v in row.a4_profile.iter().chain(&row.a6_profile) {
                write!(w, ",{v:?}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    })?;
    report.stat("a1_concentrates", diag.a1_concentrates);
    report.stat("a2_vanishes", diag.a2_vanishes);
    report.stat("a4_uniform_tail", diag.a4_uniform_tail);
    report.stat("a6_uniform_tail", diag.a6_uniform_tail);
    let last = diag.rows.last().expect("non-empty grid");
    report.stat("alpha_sum_mean_at_largest_n", ConditionRow::mean_sd(&last.alpha_sum).0);
    if let WeightScheme::Percolation { p, r } = scheme {
        if p > 0.0 && p < 1.0 {
            if let Ok(c) = constant_series(a.alpha, p, r, 1e-9) {
                report.stat("alpha_sum_limit", c.value);
            }
        }
    }
    Ok(())
}

fn counterexample_cmd(a: &CounterexampleArgs, seed: u64, out: &Output, report: &mut Report) -> std::result::Result<(), Failure> {
    let reps = a.replicates;
    if reps == 0 {
        return Err(Failure::Usage("replicates must be positive".into()));
    }
    match a.which {
        CounterexampleKind::Spike => {
            let n = a.n.unwrap_or(4096);
            let steps = StepSource::Rademacher;
            let rows: Vec<(f64, f64)> = (0..reps as u64)
                .into_par_iter()
                .map(|i| {
                    let w = gen_weights(&WeightScheme::Spike, n, &mut stream_rng(seed, i, Stream::Weights))?;
                    let xi = steps.draw(n, &mut stream_rng(seed, i, Stream::Steps));
                    Ok((weighted_sum(&w, &xi)? / (n as f64).sqrt(), xi[0]))
                })
                .collect::<crate::Result<_>>()?;
            let exact = rows.iter().all(|(s, x)| s == x);
            let sums: Vec<f64> = rows.iter().map(|r| r.0).collect();
            out.csv(report, "sample", |w| write_column_csv(w, "normalized_sum", &sums))?;
            let ks = crate::stats::ks_to_cdf(&sums, crate::special::normal_cdf)?;
            report.stat("limit", "ξ₁");
            report.stat("ks_standard_normal", ks);
            report.criterion("normalized_sum_equals_first_step", exact, exact as u8 as f64, 1.0);
        }
        CounterexampleKind::LogWindow => {
            let n = a.n.unwrap_or(10_000);
            let m = log_window_length(n);
            let correction = ((n as f64).ln() / (m as f64).ln()).sqrt();
            let exp = CltExperiment {
                scheme: WeightScheme::LogWindow,
                steps: StepSource::SymmetricPareto { alpha: 2.0 },
                normalizer: NormalizingSequence::SqrtNLogN,
                limit: LimitSpec::Normal { variance: 1.0 },
                n,
                replicates: reps,
                seed,
                post_scale: 1.0,
            };
            let raw = clt_experiment(&exp)?;
            let corrected = clt_experiment(&CltExperiment {
                post_scale: correction,
                ..exp
            })?;
            out.csv(report, "sample", |w| {
                writeln!(w, "raw,corrected")?;
                for (r, c) in raw.sample.iter().zip(&corrected.sample) {
                    writeln!(w, "{r:?},{c:?}")?;
                }
                Ok(())
            })?;
            report.stat("window", m);
            report.stat("correction", correction);
            report.criterion("raw_normalization_not_normal", raw.ks_limit > 0.05, raw.ks_limit, 0.05);
            report.criterion("corrected_normalization_normal", corrected.ks_limit <= 0.05, corrected.ks_limit, 0.05);
        }
        CounterexampleKind::SlowVarying => {
            let n = a.n.unwrap_or(10_000);
            let exp = CltExperiment {
                scheme: WeightScheme::SlowVarying,
                steps: StepSource::Rademacher,
                normalizer: NormalizingSequence::ExactStable { alpha: 2.0 },
                limit: LimitSpec::StepLaw,
                n,
                replicates: reps,
                seed,
                post_scale: 1.0,
            };
            let outcome = clt_experiment(&exp)?;
            out.csv(report, "sample", |w| write_column_csv(w, "normalized_sum", &outcome.sample))?;
            let diag = check_conditions(&exp.scheme, &[n], 1.0, 2.5, reps.min(200), seed)?;
            let row = &diag.rows[0];
            report.stat("limit", &outcome.limit);
            report.stat("ks_to_first_step", outcome.ks_limit);
            report.stat("ks_standard_normal", outcome.ks_standard_normal);
            report.stat("a1_mean", ConditionRow::mean_sd(&row.a1_stat).0);
            report.stat("a2_mean", ConditionRow::mean_sd(&row.a2_stat).0);
        }
    }
    Ok(())
}

fn acceptance_cmd(a: &AcceptanceArgs, seed: u64, out: &Output, report: &mut Report) -> std::result::Result<(), Failure> {
    let ids: Vec<u32> = if a.only.is_empty() { (1..=CRITERIA).collect() } else { a.only.clone() };
    if let Some(bad) = ids.iter().find(|&&id| id == 0 || id > CRITERIA) {
        return Err(Failure::Usage(format!("no criterion {bad}")));
    }
    let mut outcomes = Vec::new();
    for id in ids {
        let o = run_criterion(id, seed)?;
        println!("{}", o.line());
        outcomes.push(o);
    }
    out.csv(report, "criteria", |w| {
        writeln!(w, "id,name,passed,runtime_s,runtime_budget_s,detail")?;
        for o in &outcomes {
            writeln!(
                w,
                "{},{},{},{:?},{:?},\"{}\"",
                o.id,
                o.name,
                o.passed,
                o.runtime_s,
                o.runtime_budget_s,
                o.detail.replace('"', "'")
            )?;
        }
        Ok(())
    })?;
    for o in &outcomes {
        let key = format!("criterion_{:02}", o.id);
        report.stat(&key, &o.metrics);
        report.criterion(&key, o.passed, o.passed as u8 as f64, 1.0);
    }
    Ok(())
}

/// `T_n / a_n` samples for external use, e.g. plotting.
pub fn endpoint_sample(p: f64, r: f64, steps: StepSource, n: usize, replicates: usize, a_n: f64, seed: u64) -> crate::Result<Vec<f64>> {
    walk_endpoints(p, r, steps, n, replicates, a_n, seed)
}
