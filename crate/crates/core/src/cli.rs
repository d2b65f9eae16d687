//! Command-line front end. Output is line-oriented `key=value`.
//!
//! Exit codes: 0 success, 1 usage, 2 runtime or numerical failure, 3 a `run`
//! that did not recover the signs within its budget.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::flipper::run_algorithm2;
use crate::harness::{monte_carlo_algorithm1, reproduce_figure, write_ensemble_csv, write_trace_csv, Figure};
use crate::kaczmarz::{default_max_iters, run_algorithm1, RunConfig, DEFAULT_SUCCESS_TOL};
use crate::oracle::nullspace_unique;
use crate::problems::{
    gaussian_spiked, hadamard_perturbed, load_problem, planted_problem, save_problem, strip_zero_magnitudes,
    HadamardTarget, MagnitudeLaw,
};
use crate::random::RandomSource;
use crate::signsys::build_sign_system;
use crate::theory::{mismatch_min, spectral_stats};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;
pub const EXIT_NOT_RECOVERED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "eigsign",
    version,
    about = "Recover eigenvector signs from entrywise magnitudes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a problem JSON file.
    Generate(GenerateArgs),
    /// Run one algorithm on a problem file.
    Run(RunArgs),
    /// Print spectral diagnostics of a problem's sign system.
    Spectrum(SpectrumArgs),
    /// Reproduce a figure or run a bound-checking ensemble.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Planted,
    HadamardTop,
    HadamardBottom,
    Gaussian,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Law {
    Unit,
    Folded,
    Decaying,
}

impl From<Law> for MagnitudeLaw {
    fn from(l: Law) -> Self {
        match l {
            Law::Unit => MagnitudeLaw::Unit,
            Law::Folded => MagnitudeLaw::FoldedGaussian,
            Law::Decaying => MagnitudeLaw::Decaying,
        }
    }
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    n: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Magnitude law for planted problems.
    #[arg(long, value_enum, default_value = "folded")]
    law: Law,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Alg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    alg: Alg,
    #[arg(long)]
    problem: PathBuf,
    /// Step (or flip) budget; defaults to the spectral rule.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    iters: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_SUCCESS_TOL)]
    tol: f64,
    /// Residual check cadence for algorithm 1 (default n).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    check_every: Option<u64>,
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[arg(long)]
    problem: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FigureArg {
    Fig1,
    Fig2,
    Fig3,
}

impl From<FigureArg> for Figure {
    fn from(f: FigureArg) -> Self {
        match f {
            FigureArg::Fig1 => Figure::Fig1,
            FigureArg::Fig2 => Figure::Fig2,
            FigureArg::Fig3 => Figure::Fig3,
        }
    }
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["figure", "theorem"])))]
struct BenchArgs {
    #[arg(long, value_enum)]
    figure: Option<FigureArg>,
    #[arg(long)]
    theorem: bool,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..), default_value_t = 32)]
    n: u64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 3.0)]
    lambda: f64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), default_value_t = 200)]
    trials: u64,
    /// Steps per trial; defaults to the spectral rule.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    iters: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render().ansi());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match cli.command {
        Command::Generate(a) => generate(a, out),
        Command::Run(a) => run(a, out),
        Command::Spectrum(a) => spectrum(a, out),
        Command::Bench(a) => bench(a, out),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_RUNTIME
        }
    }
}

fn generate(a: GenerateArgs, out: &mut dyn Write) -> Outcome {
    let problem = match a.kind {
        Kind::Planted => {
            let (Some(n), Some(lambda)) = (a.n, a.lambda) else {
                return Err(Failure::Usage("--kind planted requires --n and --lambda".into()));
            };
            planted_problem(n as usize, lambda, a.law.into(), &mut RandomSource::new(a.seed))?
        }
        fixed => {
            if a.n.is_some() || a.lambda.is_some() {
                return Err(Failure::Usage("--n and --lambda apply only to --kind planted".into()));
            }
            match fixed {
                Kind::HadamardTop => hadamard_perturbed(HadamardTarget::Top)?,
                Kind::HadamardBottom => hadamard_perturbed(HadamardTarget::Bottom)?,
                _ => gaussian_spiked(&mut RandomSource::new(a.seed))?,
            }
        }
    };
    save_problem(&problem, &a.out)?;
    writeln!(out, "n={}", problem.n())?;
    writeln!(out, "lambda={}", problem.lambda())?;
    writeln!(out, "out={}", a.out.display())?;
    Ok(EXIT_OK)
}

fn run(a: RunArgs, out: &mut dyn Write) -> Outcome {
    if a.tol.is_nan() || a.tol < 0.0 {
        return Err(Failure::Usage("--tol must be non-negative".into()));
    }
    let full = load_problem(&a.problem)?;
    let problem = strip_zero_magnitudes(full.a(), full.lambda(), full.magnitudes(), full.truth_signs())?;
    let sys = build_sign_system(&problem)?;
    let stats = spectral_stats(&sys).ok();
    let n = sys.n();
    let cfg = RunConfig {
        success_tol: a.tol,
        check_every: a.check_every.unwrap_or(n as u64),
        ..RunConfig::new(a.iters.unwrap_or_else(|| default_max_iters(n, stats.as_ref())), n)
    };
    let mut rng = RandomSource::new(a.seed);
    let truth = problem.truth_signs();
    let report = match a.alg {
        Alg::One => run_algorithm1(&sys, &cfg, &mut rng, truth)?,
        Alg::Two => run_algorithm2(&sys, &cfg, &mut rng, truth)?,
    };
    writeln!(out, "algorithm={}", report.algorithm.label())?;
    writeln!(out, "n={n}")?;
    if n != full.n() {
        writeln!(out, "dropped_zero_magnitudes={}", full.n() - n)?;
    }
    writeln!(out, "status={}", report.status)?;
    writeln!(out, "iters_used={}", report.iters_used)?;
    writeln!(out, "max_iters={}", cfg.max_iters)?;
    if let Some(t) = truth {
        writeln!(out, "mismatch={}", mismatch_min(&report.final_signs, t)?)?;
    }
    let signs: String = report
        .final_signs
        .canonical()
        .as_slice()
        .iter()
        .map(|&s| if s > 0 { '+' } else { '-' })
        .collect();
    writeln!(out, "signs={signs}")?;
    if let Some(path) = &a.trace {
        let bound_stats = stats.as_ref().filter(|_| matches!(a.alg, Alg::One));
        write_trace_csv(&report, path, bound_stats)?;
        writeln!(out, "trace={}", path.display())?;
    }
    Ok(if report.recovered() {
        EXIT_OK
    } else {
        EXIT_NOT_RECOVERED
    })
}

fn spectrum(a: SpectrumArgs, out: &mut dyn Write) -> Outcome {
    let problem = load_problem(&a.problem)?;
    let sys = build_sign_system(&problem)?;
    let check = nullspace_unique(sys.matrix())?;
    writeln!(out, "n={}", sys.n())?;
    writeln!(out, "sigma_n={:e}", check.sigma_n)?;
    writeln!(out, "sigma_n_minus_1={:e}", check.sigma_n_minus_1)?;
    writeln!(out, "frob_sq={:e}", sys.frob_sq())?;
    writeln!(out, "unique={}", check.unique)?;
    let stats = spectral_stats(&sys)?;
    writeln!(out, "contraction={}", stats.contraction)?;
    writeln!(out, "predicted_iters={}", stats.predicted_iters)?;
    writeln!(out, "nlogn_floor={}", stats.nlogn_floor())?;
    Ok(EXIT_OK)
}

fn bench(a: BenchArgs, out: &mut dyn Write) -> Outcome {
    if let Some(fig) = a.figure {
        for path in reproduce_figure(fig.into(), &a.out, a.seed)? {
            writeln!(out, "csv={}", path.display())?;
        }
        return Ok(EXIT_OK);
    }
    let n = a.n as usize;
    let problem = planted_problem(
        n,
        a.lambda,
        MagnitudeLaw::FoldedGaussian,
        &mut RandomSource::new(a.seed),
    )?;
    let stats = spectral_stats(&build_sign_system(&problem)?)?;
    let cfg = RunConfig::new(a.iters.unwrap_or_else(|| default_max_iters(n, Some(&stats))), n);
    let report = monte_carlo_algorithm1(&problem, a.trials as usize, &cfg, a.seed)?;
    let path = write_ensemble_csv(&report, a.out.join("theorem").join(format!("ensemble_{}.csv", a.seed)))?;
    writeln!(out, "n={n}")?;
    writeln!(out, "trials={}", report.trials)?;
    writeln!(out, "grid_points={}", report.k_grid.len())?;
    writeln!(out, "bound_violations={}", report.bound_violations(3.0).len())?;
    writeln!(
        out,
        "lower_bound_violations={}",
        report.lower_bound_violations(3.0).len()
    )?;
    writeln!(out, "min_pathwise_ratio={}", report.min_pathwise_ratio)?;
    writeln!(out, "recovery_rate={}", report.recovery_rate)?;
    writeln!(out, "csv={}", path.display())?;
    Ok(EXIT_OK)
}
