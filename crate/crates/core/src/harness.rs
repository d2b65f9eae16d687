//! Run reports, seeded Monte-Carlo ensembles for the projection iteration,
//! figure reproduction and trace CSV output.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::flipper::run_algorithm2;
use crate::kaczmarz::{default_max_iters, init_state, run_algorithm1, run_algorithm1_from, InitMode, RunConfig};
use crate::numkit;
use crate::par::Execution;
use crate::problems::{gaussian_spiked, hadamard_perturbed, EigenPhaseProblem, HadamardTarget};
use crate::random::RandomSource;
use crate::signsys::{build_sign_system, SignSystem, SignVector};
use crate::theory::{spectral_stats, theorem_bound, SpectralStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Randomized row projections.
    Kaczmarz,
    /// Residual-weighted sign flips.
    Flip,
}

impl Algorithm {
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Kaczmarz => "alg1",
            Algorithm::Flip => "alg2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Recovered,
    BudgetExhausted,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStatus::Recovered => "recovered",
            RunStatus::BudgetExhausted => "budget_exhausted",
        })
    }
}

/// One recorded point of a run. `norm_sq` is `‖y_k‖²` for the projection
/// iteration and `‖C·s_k‖²` for the flip iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub k: u64,
    pub norm_sq: f64,
    pub mismatch: Option<usize>,
    pub weighted_obj: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub algorithm: Algorithm,
    pub status: RunStatus,
    /// Steps (or flips) taken when success was detected, else the budget.
    pub iters_used: u64,
    pub final_signs: SignVector,
    pub trace: Vec<TracePoint>,
    pub initial_norm_sq: f64,
}

impl RunReport {
    pub fn recovered(&self) -> bool {
        self.status == RunStatus::Recovered
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleReport {
    pub trials: usize,
    pub n: usize,
    pub master_seed: u64,
    pub seeds: Vec<u64>,
    pub stats: SpectralStats,
    pub k_grid: Vec<u64>,
    pub mean_weighted_obj: Vec<f64>,
    pub sem_weighted_obj: Vec<f64>,
    /// `theorem_bound` at each grid point for the mean `‖y₀‖²`.
    pub bound: Vec<f64>,
    pub mean_norm_sq: Vec<f64>,
    pub sem_norm_sq: Vec<f64>,
    pub mean_initial_norm_sq: f64,
    /// `mean ‖y₀‖² / n`
    pub norm_lower_bound: f64,
    pub recovery_rate: f64,
    /// Largest `|⟨y_k, ε⟩ − ⟨y₀, ε⟩| / |⟨y₀, ε⟩|` over all steps of all trials.
    pub max_conservation_drift: f64,
    /// Smallest `‖y_k‖² / (⟨y₀, ε⟩²/n)` over all steps of all trials.
    pub min_pathwise_ratio: f64,
}

impl EnsembleReport {
    /// Grid indices where the mean weighted objective exceeds the bound by
    /// more than `slack` standard errors.
    pub fn bound_violations(&self, slack: f64) -> Vec<usize> {
        (0..self.k_grid.len())
            .filter(|&i| self.mean_weighted_obj[i] > self.bound[i] + slack * self.sem_weighted_obj[i])
            .collect()
    }

    /// Grid indices where the mean `‖y_k‖²` drops below the lower bound by
    /// more than `slack` standard errors.
    pub fn lower_bound_violations(&self, slack: f64) -> Vec<usize> {
        (0..self.k_grid.len())
            .filter(|&i| self.mean_norm_sq[i] < self.norm_lower_bound - slack * self.sem_norm_sq[i])
            .collect()
    }
}

struct TrialOutcome {
    report: RunReport,
    drift: f64,
    min_ratio: f64,
}

fn mean_and_sem(columns: &[Vec<f64>], i: usize) -> (f64, f64) {
    let t = columns.len() as f64;
    let mean = columns.iter().map(|c| c[i]).sum::<f64>() / t;
    if columns.len() < 2 {
        return (mean, 0.0);
    }
    let var = columns.iter().map(|c| (c[i] - mean).powi(2)).sum::<f64>() / (t - 1.0);
    (mean, (var / t).sqrt())
}

/// Runs `trials` independent projection runs from uniform unit-sphere
/// starts and aggregates them on a shared grid.
pub fn monte_carlo_algorithm1(
    problem: &EigenPhaseProblem,
    trials: usize,
    cfg: &RunConfig,
    master_seed: u64,
) -> Result<EnsembleReport> {
    monte_carlo_algorithm1_with(problem, trials, cfg, master_seed, Execution::default())
}

pub fn monte_carlo_algorithm1_with(
    problem: &EigenPhaseProblem,
    trials: usize,
    cfg: &RunConfig,
    master_seed: u64,
    exec: Execution,
) -> Result<EnsembleReport> {
    let truth = problem.truth_signs().ok_or(Error::MissingTruth)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let sys = build_sign_system(problem)?;
    let stats = spectral_stats(&sys)?;
    let n = sys.n();
    let cfg = RunConfig {
        record_trace: true,
        stop_on_success: false,
        ..*cfg
    };
    cfg.validate()?;
    let eps = truth.to_f64();
    let seeds: Vec<u64> = (0..trials as u64)
        .map(|t| RandomSource::trial_seed(master_seed, t))
        .collect();

    let outcomes = exec.map_range(trials, |t| -> Result<TrialOutcome> {
        let mut rng = RandomSource::new(seeds[t]);
        let state = init_state(n, InitMode::RandomSphere { radius: 1.0 }, &mut rng)?;
        let dot0 = numkit::dot(&state.y, &eps);
        let floor = dot0 * dot0 / n as f64;
        let mut drift = 0.0f64;
        let mut min_ratio = f64::INFINITY;
        let report = run_algorithm1_from(state, &sys, &cfg, &mut rng, Some(truth), |st| {
            let d = numkit::dot(&st.y, &eps);
            drift = drift.max((d - dot0).abs() / dot0.abs().max(f64::MIN_POSITIVE));
            if floor > 0.0 {
                min_ratio = min_ratio.min(numkit::norm_sq(&st.y) / floor);
            }
        })?;
        Ok(TrialOutcome {
            report,
            drift,
            min_ratio,
        })
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;

    let k_grid: Vec<u64> = outcomes[0].report.trace.iter().map(|p| p.k).collect();
    if outcomes
        .iter()
        .any(|o| o.report.trace.iter().map(|p| p.k).ne(k_grid.iter().copied()))
    {
        return Err(Error::InvalidArgument("trial traces are not on a shared grid".into()));
    }
    let weighted: Vec<Vec<f64>> = outcomes
        .iter()
        .map(|o| {
            o.report
                .trace
                .iter()
                .map(|p| p.weighted_obj.unwrap_or(f64::NAN))
                .collect()
        })
        .collect();
    let norms: Vec<Vec<f64>> = outcomes
        .iter()
        .map(|o| o.report.trace.iter().map(|p| p.norm_sq).collect())
        .collect();
    let (mean_weighted_obj, sem_weighted_obj): (Vec<f64>, Vec<f64>) =
        (0..k_grid.len()).map(|i| mean_and_sem(&weighted, i)).unzip();
    let (mean_norm_sq, sem_norm_sq): (Vec<f64>, Vec<f64>) = (0..k_grid.len()).map(|i| mean_and_sem(&norms, i)).unzip();
    let mean_initial_norm_sq = outcomes.iter().map(|o| o.report.initial_norm_sq).sum::<f64>() / trials as f64;
    let bound = k_grid
        .iter()
        .map(|&k| theorem_bound(&stats, k, mean_initial_norm_sq, n))
        .collect();

    Ok(EnsembleReport {
        trials,
        n,
        master_seed,
        seeds,
        stats,
        mean_weighted_obj,
        sem_weighted_obj,
        bound,
        mean_norm_sq,
        sem_norm_sq,
        mean_initial_norm_sq,
        norm_lower_bound: mean_initial_norm_sq / n as f64,
        recovery_rate: outcomes.iter().filter(|o| o.report.recovered()).count() as f64 / trials as f64,
        max_conservation_drift: outcomes.iter().map(|o| o.drift).fold(0.0, f64::max),
        min_pathwise_ratio: outcomes.iter().map(|o| o.min_ratio).fold(f64::INFINITY, f64::min),
        k_grid,
    })
}

/// Writes `k,mean_weighted_obj,sem_weighted_obj,bound,mean_norm_sq,sem_norm_sq,norm_lower_bound`.
pub fn write_ensemble_csv(report: &EnsembleReport, path: impl AsRef<Path>) -> Result<PathBuf> {
    let path = path.as_ref();
    ensure_parent(path)?;
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "k",
        "mean_weighted_obj",
        "sem_weighted_obj",
        "bound",
        "mean_norm_sq",
        "sem_norm_sq",
        "norm_lower_bound",
    ])?;
    for (i, k) in report.k_grid.iter().enumerate() {
        w.write_record([
            k.to_string(),
            real(report.mean_weighted_obj[i]),
            real(report.sem_weighted_obj[i]),
            real(report.bound[i]),
            real(report.mean_norm_sq[i]),
            real(report.sem_norm_sq[i]),
            real(report.norm_lower_bound),
        ])?;
    }
    w.flush()?;
    Ok(path.to_path_buf())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
}

impl Figure {
    pub const ALL: [Figure; 3] = [Figure::Fig1, Figure::Fig2, Figure::Fig3];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
        }
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown figure {s:?} (expected fig1, fig2 or fig3)")))
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Seed of the single Gaussian spiked matrix used for the third figure.
pub const FIG3_INSTANCE_SEED: u64 = 0;

pub struct FigureSetup {
    pub figure: Figure,
    pub problem: EigenPhaseProblem,
    pub sys: SignSystem,
    pub stats: SpectralStats,
    pub alg1_budget: u64,
    pub alg2_budget: u64,
}

pub fn figure_setup(which: Figure) -> Result<FigureSetup> {
    let problem = match which {
        Figure::Fig1 => hadamard_perturbed(HadamardTarget::Top)?,
        Figure::Fig2 => hadamard_perturbed(HadamardTarget::Bottom)?,
        Figure::Fig3 => gaussian_spiked(&mut RandomSource::new(FIG3_INSTANCE_SEED))?,
    };
    let sys = build_sign_system(&problem)?;
    let stats = spectral_stats(&sys)?;
    let (alg1_budget, alg2_budget) = match which {
        Figure::Fig1 => (50_000, 5_000),
        Figure::Fig2 => (50_000, 100_000),
        Figure::Fig3 => (default_max_iters(sys.n(), Some(&stats)), 10_000),
    };
    Ok(FigureSetup {
        figure: which,
        problem,
        sys,
        stats,
        alg1_budget,
        alg2_budget,
    })
}

pub struct FigureRuns {
    pub seed: u64,
    pub alg1: RunReport,
    pub alg2: RunReport,
}

/// Runs both algorithms once on the figure's instance. The two runs use
/// independent streams derived from `seed`.
pub fn run_figure_seed(setup: &FigureSetup, seed: u64) -> Result<FigureRuns> {
    let n = setup.sys.n();
    let truth = setup.problem.truth_signs();
    let alg1 = run_algorithm1(
        &setup.sys,
        &RunConfig::new(setup.alg1_budget, n),
        &mut RandomSource::for_trial(seed, 1),
        truth,
    )?;
    let alg2 = run_algorithm2(
        &setup.sys,
        &RunConfig::new(setup.alg2_budget, n),
        &mut RandomSource::for_trial(seed, 2),
        truth,
    )?;
    Ok(FigureRuns { seed, alg1, alg2 })
}

/// Runs both algorithms on the figure's instance and writes
/// `<out_dir>/<figure>/<alg>_<seed>.csv` for each.
pub fn reproduce_figure(which: Figure, out_dir: impl AsRef<Path>, master_seed: u64) -> Result<Vec<PathBuf>> {
    let setup = figure_setup(which)?;
    let runs = run_figure_seed(&setup, master_seed)?;
    let dir = out_dir.as_ref().join(which.name());
    let mut paths = Vec::new();
    for report in [&runs.alg1, &runs.alg2] {
        let path = dir.join(format!("{}_{}.csv", report.algorithm.label(), master_seed));
        let stats = (report.algorithm == Algorithm::Kaczmarz).then_some(&setup.stats);
        paths.push(write_trace_csv(report, &path, stats)?);
    }
    Ok(paths)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartialRecovery {
    /// `(k, max(#agree, n − #agree)/n)` per trace point.
    pub points: Vec<(u64, f64)>,
    /// First recorded `k` whose fraction exceeds 0.51.
    pub first_above: Option<u64>,
}

pub const PARTIAL_THRESHOLD: f64 = 0.51;

pub fn partial_recovery_curve(report: &RunReport, truth: &SignVector) -> Result<PartialRecovery> {
    let n = truth.len() as f64;
    let points = report
        .trace
        .iter()
        .map(|p| p.mismatch.map(|m| (p.k, (n - m as f64) / n)).ok_or(Error::MissingTruth))
        .collect::<Result<Vec<_>>>()?;
    let first_above = points.iter().find(|(_, f)| *f > PARTIAL_THRESHOLD).map(|(k, _)| *k);
    Ok(PartialRecovery { points, first_above })
}

/// A parsed row of a trace CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub k: u64,
    pub norm_sq: f64,
    pub mismatch: Option<usize>,
    pub weighted_obj: Option<f64>,
    pub bound: Option<f64>,
}

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    Ok(())
}

/// Writes `k,norm_sq,mismatch,weighted_obj,bound`. The bound column is
/// filled only when `stats` is given, using the run's initial `‖y₀‖²`.
pub fn write_trace_csv(report: &RunReport, path: impl AsRef<Path>, stats: Option<&SpectralStats>) -> Result<PathBuf> {
    let path = path.as_ref();
    ensure_parent(path)?;
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["k", "norm_sq", "mismatch", "weighted_obj", "bound"])?;
    for p in &report.trace {
        w.write_record([
            p.k.to_string(),
            real(p.norm_sq),
            p.mismatch.map(|m| m.to_string()).unwrap_or_default(),
            p.weighted_obj.map(real).unwrap_or_default(),
            stats
                .map(|st| real(theorem_bound(st, p.k, report.initial_norm_sq, st.n)))
                .unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(path.to_path_buf())
}

pub fn read_trace_csv(path: impl AsRef<Path>) -> Result<Vec<TraceRow>> {
    fn cell<T: FromStr>(s: &str, what: &str) -> Result<Option<T>> {
        if s.is_empty() {
            return Ok(None);
        }
        s.parse()
            .map(Some)
            .map_err(|_| Error::InvalidArgument(format!("bad {what} cell {s:?}")))
    }
    let mut r = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        if rec.len() != 5 {
            return Err(Error::InvalidArgument(format!("trace row has {} fields", rec.len())));
        }
        rows.push(TraceRow {
            k: cell(&rec[0], "k")?.ok_or_else(|| Error::InvalidArgument("empty k".into()))?,
            norm_sq: cell(&rec[1], "norm_sq")?.ok_or_else(|| Error::InvalidArgument("empty norm_sq".into()))?,
            mismatch: cell(&rec[2], "mismatch")?,
            weighted_obj: cell(&rec[3], "weighted_obj")?,
            bound: cell(&rec[4], "bound")?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{planted_problem, MagnitudeLaw};

    fn planted(n: usize, seed: u64) -> EigenPhaseProblem {
        planted_problem(n, 3.0, MagnitudeLaw::FoldedGaussian, &mut RandomSource::new(seed)).unwrap()
    }

    #[test]
    fn single_trial_matches_a_plain_run() {
        let p = planted(8, 1);
        let cfg = RunConfig::new(2_000, 8);
        let ens = monte_carlo_algorithm1(&p, 1, &cfg, 42).unwrap();
        let sys = build_sign_system(&p).unwrap();
        let plain = RunConfig {
            stop_on_success: false,
            ..cfg
        };
        let run = run_algorithm1(&sys, &plain, &mut RandomSource::for_trial(42, 0), p.truth_signs()).unwrap();
        let w: Vec<f64> = run.trace.iter().map(|t| t.weighted_obj.unwrap()).collect();
        assert_eq!(ens.mean_weighted_obj, w);
        assert!(ens.sem_weighted_obj.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn ensemble_is_schedule_independent() {
        let p = planted(10, 2);
        let cfg = RunConfig::new(1_000, 10);
        let a = monte_carlo_algorithm1_with(&p, 12, &cfg, 7, Execution::Sequential).unwrap();
        let b = monte_carlo_algorithm1_with(&p, 12, &cfg, 7, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.k_grid.len(), a.bound.len());
        assert_eq!(a.seeds.len(), 12);
    }

    #[test]
    fn ensemble_needs_truth() {
        let p = planted(6, 3).blind();
        assert!(matches!(
            monte_carlo_algorithm1(&p, 3, &RunConfig::new(10, 6), 0),
            Err(Error::MissingTruth)
        ));
    }

    #[test]
    fn figure_names_parse() {
        assert_eq!("fig2".parse::<Figure>().unwrap(), Figure::Fig2);
        assert!("fig9".parse::<Figure>().is_err());
    }

    #[test]
    fn trace_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = planted(8, 4);
        let sys = build_sign_system(&p).unwrap();
        let stats = spectral_stats(&sys).unwrap();
        let run = run_algorithm1(
            &sys,
            &RunConfig::new(3_000, 8),
            &mut RandomSource::new(9),
            p.truth_signs(),
        )
        .unwrap();
        let path = write_trace_csv(&run, dir.path().join("t.csv"), Some(&stats)).unwrap();
        let rows = read_trace_csv(&path).unwrap();
        assert_eq!(rows.len(), run.trace.len());
        for (row, pt) in rows.iter().zip(&run.trace) {
            assert_eq!(row.k, pt.k);
            assert_eq!(row.norm_sq, pt.norm_sq);
            assert_eq!(row.mismatch, pt.mismatch);
            assert_eq!(row.weighted_obj, pt.weighted_obj);
            assert_eq!(row.bound, Some(theorem_bound(&stats, pt.k, run.initial_norm_sq, 8)));
        }

        let empty = RunReport {
            trace: Vec::new(),
            ..run
        };
        let path = write_trace_csv(&empty, dir.path().join("e.csv"), None).unwrap();
        assert_eq!(
            fs::read_to_string(path).unwrap(),
            "k,norm_sq,mismatch,weighted_obj,bound\n"
        );
    }

    #[test]
    fn partial_recovery_examples() {
        let p = planted(12, 5);
        let sys = build_sign_system(&p).unwrap();
        let truth = p.truth_signs().unwrap();
        let run = run_algorithm1(
            &sys,
            &RunConfig::new(20_000, 12),
            &mut RandomSource::new(1),
            Some(truth),
        )
        .unwrap();
        assert!(run.recovered());
        let curve = partial_recovery_curve(&run, truth).unwrap();
        assert_eq!(curve.points.last().unwrap().1, 1.0);
        assert!(curve.first_above.is_some());

        let blind = run_algorithm1(&sys, &RunConfig::new(100, 12), &mut RandomSource::new(1), None).unwrap();
        assert!(matches!(
            partial_recovery_curve(&blind, truth),
            Err(Error::MissingTruth)
        ));
    }
}
