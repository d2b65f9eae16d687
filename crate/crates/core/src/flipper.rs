//! Residual-weighted random sign flips.
//!
//! The state is a sign vector `s` together with its cached residual
//! `v = C·s`. Each step flips one coordinate `i`, drawn with probability
//! `v_i²/‖v‖²`, and updates the cache with a single column of `C`.

use crate::error::{Error, Result};
use crate::harness::{Algorithm, RunReport, RunStatus, TracePoint};
use crate::kaczmarz::RunConfig;
use crate::numkit;
use crate::random::RandomSource;
use crate::signsys::{SignSystem, SignVector};
use crate::theory::mismatch_min;

#[derive(Debug, Clone, PartialEq)]
pub struct FlipState {
    pub s: SignVector,
    /// Cached `C·s`.
    pub v: Vec<f64>,
    pub k: u64,
}

impl FlipState {
    pub fn residual_norm_sq(&self) -> f64 {
        numkit::norm_sq(&self.v)
    }

    /// Recomputes the cached residual from scratch.
    pub fn refresh(&mut self, sys: &SignSystem) {
        self.v = sys.residual(&self.s);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FlipInit {
    Random,
    Given(SignVector),
}

pub fn init_flip(sys: &SignSystem, mode: FlipInit, rng: &mut RandomSource) -> Result<FlipState> {
    let s = match mode {
        FlipInit::Random => SignVector::random(sys.n(), rng),
        FlipInit::Given(s) if s.len() != sys.n() => {
            return Err(Error::DimensionMismatch {
                context: "initial signs",
                expected: sys.n(),
                found: s.len(),
            })
        }
        FlipInit::Given(s) => s,
    };
    let v = sys.residual(&s);
    Ok(FlipState { s, v, k: 0 })
}

/// Flips coordinate `i` and updates the cached residual:
/// `v ← v − 2·s_i·C[:, i]`.
pub fn flip_at(state: &mut FlipState, sys: &SignSystem, i: usize) {
    let si = state.s.get(i);
    let c = sys.matrix();
    for (j, vj) in state.v.iter_mut().enumerate() {
        *vj -= 2.0 * si * c[(j, i)];
    }
    state.s.flip(i);
    state.k += 1;
}

/// Samples `i` with probability `v_i²/‖v‖²`, flips it and returns `i`.
pub fn flip_step(state: &mut FlipState, sys: &SignSystem, rng: &mut RandomSource) -> Result<usize> {
    let total = state.residual_norm_sq();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::AlreadyConverged { norm: total.sqrt() });
    }
    let u = rng.uniform() * total;
    let mut acc = 0.0;
    let mut chosen = None;
    let mut last_nonzero = 0;
    for (i, vi) in state.v.iter().enumerate() {
        let w = vi * vi;
        if w > 0.0 {
            last_nonzero = i;
        }
        acc += w;
        if acc > u {
            chosen = Some(i);
            break;
        }
    }
    let i = chosen.unwrap_or(last_nonzero);
    flip_at(state, sys, i);
    Ok(i)
}

/// Runs the flip iteration from uniformly random signs.
pub fn run_algorithm2(
    sys: &SignSystem,
    cfg: &RunConfig,
    rng: &mut RandomSource,
    truth: Option<&SignVector>,
) -> Result<RunReport> {
    let state = init_flip(sys, FlipInit::Random, rng)?;
    run_algorithm2_from(state, sys, cfg, rng, truth)
}

pub fn run_algorithm2_from(
    mut state: FlipState,
    sys: &SignSystem,
    cfg: &RunConfig,
    rng: &mut RandomSource,
    truth: Option<&SignVector>,
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
    let threshold_sq = (cfg.success_tol * sys.frob()).powi(2);
    let initial_norm_sq = state.residual_norm_sq();
    let mut trace = Vec::new();
    let point = |state: &FlipState| TracePoint {
        k: state.k,
        norm_sq: state.residual_norm_sq(),
        mismatch: truth.map(|t| mismatch_min(&state.s, t).expect("lengths checked")),
        weighted_obj: None,
    };

    let mut recovered = false;
    loop {
        if cfg.record_trace && state.k.is_multiple_of(stride) {
            trace.push(point(&state));
        }
        if state.residual_norm_sq() <= threshold_sq {
            // confirm against a fresh residual before declaring success
            state.refresh(sys);
            if state.residual_norm_sq() <= threshold_sq {
                recovered = true;
                break;
            }
        }
        if state.k >= cfg.max_iters {
            break;
        }
        flip_step(&mut state, sys, rng)?;
    }
    if cfg.record_trace && trace.last().map(|p| p.k) != Some(state.k) {
        trace.push(point(&state));
    }
    Ok(RunReport {
        algorithm: Algorithm::Flip,
        status: if recovered {
            RunStatus::Recovered
        } else {
            RunStatus::BudgetExhausted
        },
        iters_used: state.k,
        final_signs: state.s,
        trace,
        initial_norm_sq,
    })
}
