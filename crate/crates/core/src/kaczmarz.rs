//! Randomized projection iteration for the sign system.
//!
//! Each step samples a row `c_i` of `C` with probability proportional to
//! `‖c_i‖²` and projects the iterate onto the hyperplane `⟨c_i, ·⟩ = 0`.
//! Since `Cε = 0` the component along `ε` never changes, while the rest
//! shrinks in expectation, so the signs of the iterate eventually match
//! `±ε`.

use crate::error::{Error, Result};
use crate::harness::{Algorithm, RunReport, RunStatus, TracePoint};
use crate::numkit;
use crate::random::RandomSource;
use crate::signsys::{SignSystem, SignVector};
use crate::theory::{mismatch_min, SpectralStats};

pub const DEFAULT_SUCCESS_TOL: f64 = 1e-8;
pub const DEFAULT_TRACE_POINTS: u64 = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct KaczmarzState {
    pub y: Vec<f64>,
    pub k: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitMode {
    /// Uniform on the sphere of the given radius.
    RandomSphere {
        radius: f64,
    },
    Given(Vec<f64>),
}

/// Iteration controls shared by both algorithms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub max_iters: u64,
    /// Residual success test cadence (projection iteration only; the flip
    /// iteration tests every step since its residual is cached).
    pub check_every: u64,
    /// Success when `‖C·ŝ‖ ≤ success_tol·‖C‖_F`.
    pub success_tol: f64,
    pub record_trace: bool,
    /// Upper bound on the number of grid points recorded per trace.
    pub trace_points: u64,
    /// Stop at the first successful check. Ensembles turn this off so that
    /// every trial covers the full grid.
    pub stop_on_success: bool,
}

impl RunConfig {
    pub fn new(max_iters: u64, n: usize) -> Self {
        Self {
            max_iters,
            check_every: n.max(1) as u64,
            success_tol: DEFAULT_SUCCESS_TOL,
            record_trace: true,
            trace_points: DEFAULT_TRACE_POINTS,
            stop_on_success: true,
        }
    }

    /// Defaults for a given system: `check_every = n` and the iteration
    /// budget from [`default_max_iters`].
    pub fn default_for(sys: &SignSystem, stats: Option<&SpectralStats>) -> Self {
        Self::new(default_max_iters(sys.n(), stats), sys.n())
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 || self.check_every == 0 || self.trace_points < 2 {
            return Err(Error::InvalidArgument(format!(
                "run config needs max_iters >= 1, check_every >= 1, trace_points >= 2: {self:?}"
            )));
        }
        if self.success_tol.is_nan() || self.success_tol < 0.0 {
            return Err(Error::InvalidArgument("success_tol must be non-negative".into()));
        }
        Ok(())
    }

    /// Spacing of the recorded grid `0, s, 2s, …`.
    pub fn trace_stride(&self) -> u64 {
        self.max_iters.div_ceil(self.trace_points - 1).max(1)
    }
}

/// `⌈10·(‖C‖_F²/σ_{n−1}²)·ln n⌉` when spectral statistics are known,
/// otherwise `⌈100·n·ln n⌉`.
pub fn default_max_iters(n: usize, stats: Option<&SpectralStats>) -> u64 {
    let ln_n = (n.max(2) as f64).ln();
    let iters = match stats {
        Some(st) => 10.0 * st.frob_sq / (st.sigma_n_minus_1 * st.sigma_n_minus_1) * ln_n,
        None => 100.0 * n as f64 * ln_n,
    };
    (iters.ceil() as u64).max(1)
}

pub fn init_state(n: usize, mode: InitMode, rng: &mut RandomSource) -> Result<KaczmarzState> {
    let y = match mode {
        InitMode::RandomSphere { radius } => {
            if radius.is_nan() || radius <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "sphere radius must be positive, got {radius}"
                )));
            }
            rng.unit_vector(n).into_iter().map(|v| v * radius).collect()
        }
        InitMode::Given(y0) => {
            if y0.len() != n {
                return Err(Error::DimensionMismatch {
                    context: "initial iterate",
                    expected: n,
                    found: y0.len(),
                });
            }
            let norm_sq = numkit::norm_sq(&y0);
            if norm_sq.is_nan() || norm_sq <= 0.0 {
                return Err(Error::InvalidArgument("initial iterate must be nonzero".into()));
            }
            y0
        }
    };
    Ok(KaczmarzState { y, k: 0 })
}

/// Projects `y` onto the hyperplane orthogonal to row `i`.
pub fn project_onto_row(y: &mut [f64], sys: &SignSystem, i: usize) {
    let w = sys.row_norms_sq()[i];
    if w == 0.0 {
        return;
    }
    let row = sys.row(i);
    let coef = numkit::dot(y, row) / w;
    numkit::axpy(-coef, row, y);
}

/// One projection step with a sampled row; returns the row used.
pub fn kaczmarz_step(state: &mut KaczmarzState, sys: &SignSystem, rng: &mut RandomSource) -> usize {
    let i = sys.sample_row(rng);
    project_onto_row(&mut state.y, sys, i);
    state.k += 1;
    i
}

/// Componentwise sign with `sign(0) = +1` (also for `−0.0`).
pub fn extract_signs(y: &[f64]) -> SignVector {
    SignVector::new(y.iter().map(|&v| if v < 0.0 { -1 } else { 1 }).collect()).expect("entries are ±1")
}

/// Runs the projection iteration from a uniformly random unit vector.
pub fn run_algorithm1(
    sys: &SignSystem,
    cfg: &RunConfig,
    rng: &mut RandomSource,
    truth: Option<&SignVector>,
) -> Result<RunReport> {
    let state = init_state(sys.n(), InitMode::RandomSphere { radius: 1.0 }, rng)?;
    run_algorithm1_from(state, sys, cfg, rng, truth, |_| {})
}

/// Runs the projection iteration from `state`, calling `observe` after
/// every step (and once on the initial state).
pub fn run_algorithm1_from(
    mut state: KaczmarzState,
    sys: &SignSystem,
    cfg: &RunConfig,
    rng: &mut RandomSource,
    truth: Option<&SignVector>,
    mut observe: impl FnMut(&KaczmarzState),
) -> Result<RunReport> {
    cfg.validate()?;
    if let Some(t) = truth {
        if t.len() != sys.n() {
            return Err(Error::DimensionMismatch {
                context: "truth signs",
                expected: sys.n(),
                found: t.len(),
            });
        }
    }
    let stride = cfg.trace_stride();
    let initial_norm_sq = numkit::norm_sq(&state.y);
    let mut trace = Vec::new();
    let mut recovered: Option<(u64, SignVector)> = None;

    let point = |state: &KaczmarzState| -> TracePoint {
        let norm_sq = numkit::norm_sq(&state.y);
        let mismatch = truth.map(|t| mismatch_min(&extract_signs(&state.y), t).expect("lengths checked"));
        TracePoint {
            k: state.k,
            norm_sq,
            mismatch,
            weighted_obj: mismatch.map(|m| m as f64 * norm_sq),
        }
    };

    observe(&state);
    loop {
        let k = state.k;
        if cfg.record_trace && k.is_multiple_of(stride) {
            trace.push(point(&state));
        }
        if recovered.is_none() && (k.is_multiple_of(cfg.check_every) || k == cfg.max_iters) {
            let candidate = extract_signs(&state.y);
            if sys.is_solution(&candidate, cfg.success_tol) {
                recovered = Some((k, candidate));
                if cfg.stop_on_success {
                    break;
                }
            }
        }
        if k >= cfg.max_iters {
            break;
        }
        kaczmarz_step(&mut state, sys, rng);
        observe(&state);
    }
    if cfg.record_trace && trace.last().map(|p| p.k) != Some(state.k) {
        trace.push(point(&state));
    }

    let (status, iters_used, final_signs) = match recovered {
        Some((k, signs)) if cfg.stop_on_success => (RunStatus::Recovered, k, signs),
        Some((k, _)) => (RunStatus::Recovered, k, extract_signs(&state.y)),
        None => (RunStatus::BudgetExhausted, state.k, extract_signs(&state.y)),
    };
    Ok(RunReport {
        algorithm: Algorithm::Kaczmarz,
        status,
        iters_used,
        final_signs,
        trace,
        initial_norm_sq,
    })
}
