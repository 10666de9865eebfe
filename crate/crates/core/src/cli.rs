//! The `ifsp` command-line tool.
//!
//! Exit codes: 0 when the run completes and every check passes, 1 when a
//! statistical check fails, 2 for usage, configuration, parse or
//! construction errors, 3 for numeric or integrity failures.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::chain::{
    backward_sample_batch, default_depth, draw_index, simulate_forward, RngStream, SampleBatch,
};
use crate::distributions::ContinuousDistribution;
use crate::error::{Error, Result};
use crate::export::{
    write_batch_csv, write_cdf_csv, write_histogram_csv, write_trajectory_csv, ConfigEcho,
};
use crate::ifs::{
    build_theorem_ifsp, cantor_ifsp, compose_ifsp, invariance_residual, symmetry_affine_ifsp,
    triangular_ifsp, Ifsp,
};
use crate::stats::{histogram, ks_distance, one_step_stationarity, two_sample_ks, Histogram, KsReport};

#[derive(Debug, Parser)]
#[command(name = "ifsp", version, about = "Build, run and check IFSs with a prescribed stationary law")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the quantile-conjugated system for a distribution and print it as JSON.
    Build(BuildArgs),
    /// Run the forward chain; write the trajectory and its histogram.
    Simulate(SimulateArgs),
    /// Draw independent reversed iterates and test them against the target law.
    Backward(BackwardArgs),
    /// Check the invariance equation and one-step stationarity.
    Verify(VerifyArgs),
    /// Tabulate a CDF on an equally spaced grid.
    Staircase(StaircaseArgs),
    /// Two exponential systems and their composed mixtures.
    MixtureDemo(MixtureArgs),
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Target law: uniform, exp:<rate>, triangular, cantor, tabulated:<csv> or empirical:<csv>.
    #[arg(long)]
    pub dist: String,
    /// Number of maps.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// JSON output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Where the system comes from: `--ifs` (a JSON file or `builtin:cantor`,
/// `builtin:triangular`, `builtin:symmetric:<a>:<b>`), or the theorem
/// system of `--dist` with `--n` maps.
#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Target law: uniform, exp:<rate>, triangular, cantor, tabulated:<csv> or empirical:<csv>.
    #[arg(long)]
    pub dist: Option<String>,
    /// System JSON file, or builtin:cantor, builtin:triangular, builtin:symmetric:<a>:<b>.
    #[arg(long)]
    pub ifs: Option<String>,
    /// Number of maps of the system built from --dist.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Starting point; defaults to the median of the target law, else 0.
    #[arg(long)]
    pub x0: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub steps: usize,
    /// Decimal or 0x-prefixed hexadecimal.
    #[arg(long, default_value = "0", value_parser = parse_seed)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub bins: usize,
    #[arg(long)]
    pub lo: Option<f64>,
    #[arg(long)]
    pub hi: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    /// KS threshold for the chain states. Chain states are dependent, so
    /// without it the KS result is reported but never fails the run.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Trajectory CSV; the histogram goes to `<out>.hist.csv`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BackwardArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 0.0)]
    pub x0: f64,
    /// Defaults to the smallest depth with `n^-depth <= 2^-53` (64 for n = 2).
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub count: usize,
    /// Decimal or 0x-prefixed hexadecimal.
    #[arg(long, default_value = "0", value_parser = parse_seed)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    /// Samples CSV; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    /// Largest acceptable invariance residual.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StaircaseArgs {
    /// Target law: uniform, exp:<rate>, triangular, cantor, tabulated:<csv> or empirical:<csv>.
    #[arg(long)]
    pub dist: String,
    #[arg(long, default_value_t = 1001)]
    pub points: usize,
    #[arg(long)]
    pub lo: Option<f64>,
    #[arg(long)]
    pub hi: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MixtureArgs {
    /// Decimal or 0x-prefixed hexadecimal.
    #[arg(long, default_value = "0", value_parser = parse_seed)]
    pub seed: u64,
    #[arg(long, default_value_t = 200_000)]
    pub steps: usize,
    /// Backward samples per batch for the composed-system tests.
    #[arg(long, default_value_t = 50_000)]
    pub count: usize,
    #[arg(long, default_value_t = 64)]
    pub depth: usize,
    #[arg(long, default_value_t = 100)]
    pub bins: usize,
    /// Right end of the histogram range `[0, hi]`.
    #[arg(long, default_value_t = 14.0)]
    pub hi: f64,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

/// Accepts decimal or `0x`-prefixed hexadecimal.
pub fn parse_seed(text: &str) -> std::result::Result<u64, String> {
    let t = text.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {text:?}: {e}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

pub fn exit_code(result: &Result<Outcome>) -> u8 {
    match result {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail) => 1,
        Err(Error::Numeric(_) | Error::Integrity(_)) => 3,
        Err(_) => 2,
    }
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let result = run(cli.command);
    if let Err(e) = &result {
        eprintln!("ifsp: {e}");
    }
    ExitCode::from(exit_code(&result))
}

pub fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Build(a) => cmd_build(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Backward(a) => cmd_backward(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Staircase(a) => cmd_staircase(&a),
        Command::MixtureDemo(a) => cmd_mixture_demo(&a),
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn out_or_stdout(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Prints a report to stdout, or to stderr when stdout carries the data.
fn print_report(value: &serde_json::Value, data_on_stdout: bool) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    if data_on_stdout {
        eprintln!("{text}");
    } else {
        println!("{text}");
    }
    Ok(())
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Loads `--ifs`: a builtin name or a JSON file.
pub fn load_ifs(text: &str) -> Result<Ifsp> {
    match text.strip_prefix("builtin:") {
        Some("cantor") => Ok(cantor_ifsp()),
        Some("triangular") => Ok(triangular_ifsp()),
        Some(rest) => {
            let parts: Vec<&str> = rest.split(':').collect();
            match parts.as_slice() {
                ["symmetric", a, b] => {
                    let parse = |s: &str| {
                        s.parse::<f64>().map_err(|e| usage(format!("bad parameter {s:?}: {e}")))
                    };
                    symmetry_affine_ifsp(parse(a)?, parse(b)?)
                }
                _ => Err(usage(format!(
                    "unknown builtin {rest:?}; expected cantor, triangular or symmetric:<a>:<b>"
                ))),
            }
        }
        None => Ifsp::from_json(&fs::read_to_string(text)?),
    }
}

struct Source {
    system: Ifsp,
    reference: Option<ContinuousDistribution>,
}

fn resolve_source(args: &SourceArgs) -> Result<Source> {
    let dist = args.dist.as_deref().map(ContinuousDistribution::from_spec).transpose()?;
    match (&args.ifs, dist) {
        (Some(ifs), dist) => {
            let system = load_ifs(ifs)?;
            let reference = dist.or_else(|| match ifs.as_str() {
                "builtin:cantor" => Some(ContinuousDistribution::cantor()),
                "builtin:triangular" => Some(ContinuousDistribution::triangular()),
                _ => None,
            });
            Ok(Source { system, reference })
        }
        (None, Some(dist)) => Ok(Source {
            system: build_theorem_ifsp(&dist, args.n)?,
            reference: Some(dist),
        }),
        (None, None) => Err(usage("one of --dist or --ifs is required")),
    }
}

fn source_echo(command: &str, args: &SourceArgs, source: &Source) -> ConfigEcho {
    let mut echo = ConfigEcho::new()
        .with("ifsp", env!("CARGO_PKG_VERSION"))
        .with("command", command);
    if let Some(d) = &args.dist {
        echo.push("dist", d);
    }
    if let Some(i) = &args.ifs {
        echo.push("ifs", i);
    } else {
        echo.push("n", args.n);
    }
    echo.push("system", source.system.label());
    echo
}

fn finite_range(range: (f64, f64)) -> Option<(f64, f64)> {
    (range.0.is_finite() && range.1.is_finite() && range.0 < range.1).then_some(range)
}

pub fn cmd_build(args: &BuildArgs) -> Result<Outcome> {
    let dist = ContinuousDistribution::from_spec(&args.dist)?;
    let system = build_theorem_ifsp(&dist, args.n)?;
    let mut w = out_or_stdout(args.out.as_deref())?;
    writeln!(w, "{}", system.to_json()?)?;
    w.flush()?;
    Ok(Outcome::Pass)
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<Outcome> {
    if args.bins == 0 {
        return Err(usage("--bins must be at least 1"));
    }
    let source = resolve_source(&args.source)?;
    let x0 = args
        .x0
        .unwrap_or_else(|| source.reference.as_ref().map_or(0.0, |d| d.quantile(0.5)));
    let mut rng = RngStream::new(args.seed, 0);
    let traj = simulate_forward(&source.system, x0, args.steps, &mut rng)?;
    let samples = if args.steps == 0 { &traj.states[..] } else { &traj.states[1..] };

    let (lo, hi) = match (args.lo, args.hi) {
        (Some(lo), Some(hi)) => (lo, hi),
        (lo, hi) => {
            let auto = source
                .reference
                .as_ref()
                .and_then(|d| finite_range(d.support()))
                .or_else(|| finite_range(source.system.domain()))
                .unwrap_or_else(|| {
                    let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
                    let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    if min < max { (min, max) } else { (min - 0.5, min + 0.5) }
                });
            (lo.unwrap_or(auto.0), hi.unwrap_or(auto.1))
        }
    };
    let hist = histogram(samples, lo, hi, args.bins)?;

    let mut echo = source_echo("simulate", &args.source, &source);
    echo.push("x0", x0);
    echo.push("steps", args.steps);
    echo.push("seed", args.seed);
    write_trajectory_csv(create(&args.out)?, &echo, &traj)?;
    echo.push("bins", args.bins);
    echo.push("lo", lo);
    echo.push("hi", hi);
    write_histogram_csv(create(&with_suffix(&args.out, ".hist.csv"))?, &echo, &hist)?;

    let mut pass = true;
    if let Some(dist) = &source.reference {
        let report = KsReport::one_sample(ks_distance(samples, dist)?, samples.len(), args.alpha)?;
        if let Some(tol) = args.tol {
            pass = report.statistic <= tol;
        }
        print_report(
            &json!({
                "ks": report,
                "tolerance": args.tol,
                "clamp_events": traj.clamp_events,
                "pass": pass,
            }),
            false,
        )?;
    }
    Ok(Outcome::from_pass(pass))
}

pub fn cmd_backward(args: &BackwardArgs) -> Result<Outcome> {
    let source = resolve_source(&args.source)?;
    let depth = args.depth.unwrap_or_else(|| default_depth(source.system.len()));
    if depth == 0 {
        return Err(usage("--depth must be at least 1"));
    }
    if args.count == 0 {
        return Err(usage("--count must be at least 1"));
    }
    let batch = backward_sample_batch(&source.system, args.x0, depth, args.count, args.seed)?;

    let mut echo = source_echo("backward", &args.source, &source);
    echo.push("x0", args.x0);
    echo.push("depth", depth);
    echo.push("count", args.count);
    echo.push("seed", args.seed);
    echo.push("alpha", args.alpha);
    let mut w = out_or_stdout(args.out.as_deref())?;
    write_batch_csv(&mut w, &echo, &batch)?;
    w.flush()?;
    drop(w);

    match &source.reference {
        Some(dist) if args.count >= 2 => {
            let report = KsReport::one_sample(ks_distance(&batch.values, dist)?, args.count, args.alpha)?;
            print_report(&serde_json::to_value(&report)?, args.out.is_none())?;
            Ok(Outcome::from_pass(report.pass))
        }
        _ => Ok(Outcome::Pass),
    }
}

/// Midpoints of `grid` equal cells for bounded support, quantile midpoints
/// otherwise.
pub fn verification_grid(dist: &ContinuousDistribution, grid: usize) -> Vec<f64> {
    let g = grid as f64;
    match finite_range(dist.support()) {
        Some((lo, hi)) => (0..grid).map(|j| lo + (j as f64 + 0.5) * (hi - lo) / g).collect(),
        None => (0..grid).map(|j| dist.quantile((j as f64 + 0.5) / g)).collect(),
    }
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Outcome> {
    let source = resolve_source(&args.source)?;
    let dist = source
        .reference
        .as_ref()
        .ok_or_else(|| usage("--dist is required to verify this system"))?;
    if args.grid < 2 {
        return Err(usage("--grid must be at least 2"));
    }
    let grid = verification_grid(dist, args.grid);
    let inv = invariance_residual(&source.system, dist, &grid)?;
    let worst = inv
        .residuals
        .iter()
        .enumerate()
        .fold((0, 0.0), |best, (k, &r)| if r > best.1 { (k, r) } else { best });
    let one_step = one_step_stationarity(&source.system, dist, args.grid, args.alpha)?;
    let pass = inv.max_residual <= args.tol && one_step.pass;

    let report = json!({
        "system": source.system.label(),
        "dist": dist.spec(),
        "invariance": {
            "grid_size": args.grid,
            "max_residual": inv.max_residual,
            "worst_point": grid[worst.0],
            "tolerance": args.tol,
            "pass": inv.max_residual <= args.tol,
        },
        "one_step": one_step,
        "pass": pass,
    });
    let mut w = out_or_stdout(args.out.as_deref())?;
    writeln!(w, "{}", serde_json::to_string_pretty(&report)?)?;
    w.flush()?;
    Ok(Outcome::from_pass(pass))
}

pub fn cmd_staircase(args: &StaircaseArgs) -> Result<Outcome> {
    let dist = ContinuousDistribution::from_spec(&args.dist)?;
    if args.points < 2 {
        return Err(usage("--points must be at least 2"));
    }
    let (s_lo, s_hi) = dist.support();
    let lo = args.lo.unwrap_or(if s_lo.is_finite() { s_lo } else { dist.quantile(1e-4) });
    let hi = args.hi.unwrap_or(if s_hi.is_finite() { s_hi } else { dist.quantile(1.0 - 1e-4) });
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(usage(format!("empty range [{lo}, {hi}]")));
    }
    let last = args.points - 1;
    let points: Vec<(f64, f64)> = (0..args.points)
        .map(|k| {
            let x = if k == last { hi } else { lo + (hi - lo) * (k as f64 / last as f64) };
            (x, dist.cdf(x))
        })
        .collect();

    let echo = ConfigEcho::new()
        .with("ifsp", env!("CARGO_PKG_VERSION"))
        .with("command", "staircase")
        .with("dist", dist.spec())
        .with("points", args.points)
        .with("lo", lo)
        .with("hi", hi);
    let mut w = out_or_stdout(args.out.as_deref())?;
    write_cdf_csv(&mut w, &echo, &points)?;
    w.flush()?;
    Ok(Outcome::Pass)
}

/// Settings of [`mixture_demo`].
#[derive(Debug, Clone, Serialize)]
pub struct MixtureConfig {
    pub seed: u64,
    pub steps: usize,
    pub count: usize,
    pub depth: usize,
    pub bins: usize,
    pub hi: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ToleranceCheck {
    pub ks: KsReport,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MixtureReport {
    pub config: MixtureConfig,
    /// Forward chains of the two exponential systems against their laws.
    pub f1: ToleranceCheck,
    pub f2: ToleranceCheck,
    /// Independent backward batches, one of them pushed one step further.
    pub g_self_test: KsReport,
    pub h_self_test: KsReport,
    /// Backward batches of `g` against `h`; these should differ.
    pub g_vs_h: KsReport,
    pub pass: bool,
}

pub struct MixtureOutput {
    pub report: MixtureReport,
    /// `(name, histogram)` for `f1`, `f2`, `g`, `h`.
    pub histograms: Vec<(&'static str, Histogram)>,
}

/// Tolerance for the plain exponential chains' KS distance.
pub const MIXTURE_CHAIN_TOL: f64 = 0.02;

fn sub_seed(seed: u64, tag: u64) -> u64 {
    // streams 0..4 drive the four forward chains
    RngStream::new(seed, 4 + tag).next_u64()
}

fn push_one_step(system: &Ifsp, batch: &SampleBatch, seed: u64) -> Result<Vec<f64>> {
    batch
        .values
        .iter()
        .enumerate()
        .map(|(j, &x)| {
            let mut rng = RngStream::new(seed, j as u64);
            let i = draw_index(&mut rng, system.probs());
            Ok(system.apply(i, x)?.value)
        })
        .collect()
}

/// The exponential systems with means 1 and 2, their compositions
/// `g = f² ∘ f¹` and `h = f¹ ∘ f²`, four forward chains and the backward
/// tests on `g` and `h`.
pub fn mixture_demo(cfg: &MixtureConfig) -> Result<MixtureOutput> {
    let e1 = ContinuousDistribution::exponential(1.0)?;
    let e2 = ContinuousDistribution::exponential(0.5)?;
    let f1 = build_theorem_ifsp(&e1, 2)?;
    let f2 = build_theorem_ifsp(&e2, 2)?;
    let g = compose_ifsp(&f2, &f1)?;
    let h = compose_ifsp(&f1, &f2)?;

    let mut histograms = Vec::with_capacity(4);
    let mut chain_checks = Vec::with_capacity(2);
    for (k, (name, system)) in [("f1", &f1), ("f2", &f2), ("g", &g), ("h", &h)].into_iter().enumerate() {
        let traj = simulate_forward(system, 0.0, cfg.steps, &mut RngStream::new(cfg.seed, k as u64))?;
        let states = if cfg.steps == 0 { &traj.states[..] } else { &traj.states[1..] };
        histograms.push((name, histogram(states, 0.0, cfg.hi, cfg.bins)?));
        let target = match name {
            "f1" => &e1,
            "f2" => &e2,
            _ => continue,
        };
        let ks = KsReport::one_sample(ks_distance(states, target)?, states.len(), cfg.alpha)?;
        let pass = ks.statistic <= MIXTURE_CHAIN_TOL;
        chain_checks.push(ToleranceCheck { ks, tolerance: MIXTURE_CHAIN_TOL, pass });
    }

    let batch = |system: &Ifsp, tag| backward_sample_batch(system, 0.0, cfg.depth, cfg.count, sub_seed(cfg.seed, tag));
    let self_test = |system: &Ifsp, tag: u64| -> Result<(SampleBatch, KsReport)> {
        let a = batch(system, tag)?;
        let b = batch(system, tag + 1)?;
        let pushed = push_one_step(system, &b, sub_seed(cfg.seed, tag + 2))?;
        let report = KsReport::two_sample(two_sample_ks(&a.values, &pushed)?, cfg.count, cfg.count, cfg.alpha)?;
        Ok((a, report))
    };
    let (g_batch, g_self_test) = self_test(&g, 0)?;
    let (h_batch, h_self_test) = self_test(&h, 3)?;
    let g_vs_h = KsReport::two_sample(
        two_sample_ks(&g_batch.values, &h_batch.values)?,
        cfg.count,
        cfg.count,
        cfg.alpha,
    )?;

    let f2_check = chain_checks.pop().expect("two chain checks");
    let f1_check = chain_checks.pop().expect("two chain checks");
    let pass = f1_check.pass && f2_check.pass && g_self_test.pass && h_self_test.pass && !g_vs_h.pass;
    Ok(MixtureOutput {
        report: MixtureReport {
            config: cfg.clone(),
            f1: f1_check,
            f2: f2_check,
            g_self_test,
            h_self_test,
            g_vs_h,
            pass,
        },
        histograms,
    })
}

pub fn cmd_mixture_demo(args: &MixtureArgs) -> Result<Outcome> {
    if args.bins == 0 || !(args.hi > 0.0 && args.hi.is_finite()) {
        return Err(usage("--bins must be positive and --hi a positive number"));
    }
    if args.count < 2 || args.depth == 0 {
        return Err(usage("--count must be at least 2 and --depth at least 1"));
    }
    let cfg = MixtureConfig {
        seed: args.seed,
        steps: args.steps,
        count: args.count,
        depth: args.depth,
        bins: args.bins,
        hi: args.hi,
        alpha: args.alpha,
    };
    let out = mixture_demo(&cfg)?;
    fs::create_dir_all(&args.out)?;
    for (name, hist) in &out.histograms {
        let echo = ConfigEcho::new()
            .with("ifsp", env!("CARGO_PKG_VERSION"))
            .with("command", "mixture-demo")
            .with("chain", name)
            .with("seed", cfg.seed)
            .with("steps", cfg.steps)
            .with("bins", cfg.bins)
            .with("lo", 0.0)
            .with("hi", cfg.hi);
        write_histogram_csv(create(&args.out.join(format!("{name}.hist.csv")))?, &echo, hist)?;
    }
    let text = serde_json::to_string_pretty(&out.report)?;
    fs::write(args.out.join("report.json"), format!("{text}\n"))?;
    println!("{text}");
    Ok(Outcome::from_pass(out.report.pass))
}
