//! Quantities from the convergence analysis of the projection iteration:
//! spectral statistics of `C`, the expected-decay bound, the mismatch
//! functional, the orthogonal decomposition along `ε`, the mismatch
//! inequality, and the residual diagnostic for the flip algorithm.

use crate::error::{Error, Result};
use crate::numkit;
use crate::signsys::{SignSystem, SignVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralStats {
    pub n: usize,
    pub sigma_n: f64,
    pub sigma_n_minus_1: f64,
    pub frob_sq: f64,
    /// `1 − σ_{n−1}²/‖C‖_F²`
    pub contraction: f64,
    /// `⌈(‖C‖_F²/σ_{n−1}²)·ln n⌉`
    pub predicted_iters: u64,
}

impl SpectralStats {
    /// `n·ln n`, the iteration count no instance can beat since
    /// `σ_{n−1}² ≤ ‖C‖_F²/(n−1)`.
    pub fn nlogn_floor(&self) -> f64 {
        let n = self.n as f64;
        n * n.ln()
    }
}

pub fn spectral_stats(sys: &SignSystem) -> Result<SpectralStats> {
    let n = sys.n();
    let sv = numkit::singular_values(sys.matrix())?;
    let frob_sq = sys.frob_sq();
    let sigma_n = sv[n - 1];
    let sigma_n_minus_1 = if n >= 2 { sv[n - 2] } else { 0.0 };
    if sigma_n_minus_1 <= 1e-8 * frob_sq.sqrt() {
        return Err(Error::DegenerateGap {
            sigma: sigma_n_minus_1,
            frob: frob_sq.sqrt(),
        });
    }
    let ratio = frob_sq / (sigma_n_minus_1 * sigma_n_minus_1);
    Ok(SpectralStats {
        n,
        sigma_n,
        sigma_n_minus_1,
        frob_sq,
        contraction: (1.0 - 1.0 / ratio).max(0.0),
        predicted_iters: (ratio * (n as f64).ln()).ceil() as u64,
    })
}

/// `min{#S, n − #S}` where `S` is the set of coordinates on which the two
/// sign vectors disagree.
pub fn mismatch_min(candidate: &SignVector, truth: &SignVector) -> Result<usize> {
    if candidate.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            context: "mismatch",
            expected: truth.len(),
            found: candidate.len(),
        });
    }
    let s = candidate.disagreements(truth);
    Ok(s.min(truth.len() - s))
}

/// `n·contraction^k·‖y₀‖²`
pub fn theorem_bound(stats: &SpectralStats, k: u64, y0_norm_sq: f64, n: usize) -> f64 {
    n as f64 * stats.contraction.powf(k as f64) * y0_norm_sq
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// Projection onto `span(ε)`.
    pub pi: Vec<f64>,
    /// The orthogonal remainder.
    pub r: Vec<f64>,
}

/// Splits `y = π + r` with `π = (⟨y, ε⟩/n)·ε`.
pub fn decompose(y: &[f64], truth: &SignVector) -> Result<Decomposition> {
    if y.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            context: "decompose",
            expected: truth.len(),
            found: y.len(),
        });
    }
    let eps = truth.to_f64();
    let coef = numkit::dot(y, &eps) / truth.len() as f64;
    let pi: Vec<f64> = eps.iter().map(|e| coef * e).collect();
    let r = y.iter().zip(&pi).map(|(a, b)| a - b).collect();
    Ok(Decomposition { pi, r })
}

/// Exact conditional expectation of `‖r_{k+1}‖²` given `r_k = r`:
/// `‖r‖² − ‖C·r‖²/‖C‖_F²`.
pub fn expected_step_decay(sys: &SignSystem, r: &[f64]) -> Result<f64> {
    let cr = numkit::matvec(sys.matrix(), r)?;
    Ok(numkit::norm_sq(r) - numkit::norm_sq(&cr) / sys.frob_sq())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma2Gap {
    /// `‖y − π‖²`
    pub lhs: f64,
    /// `(min{#S, n − #S}/n)·‖y‖²`
    pub rhs: f64,
}

impl Lemma2Gap {
    pub fn holds(&self, y_norm_sq: f64) -> bool {
        self.lhs >= self.rhs - 1e-12 * y_norm_sq
    }
}

/// Both sides of the mismatch inequality `‖y − π‖² ≥ (min{#S, n−#S}/n)·‖y‖²`,
/// with signs of `y` read under `sign(0) = +1`.
pub fn lemma2_gap(y: &[f64], truth: &SignVector) -> Result<Lemma2Gap> {
    let d = decompose(y, truth)?;
    let signs = crate::kaczmarz::extract_signs(y);
    let mismatch = mismatch_min(&signs, truth)?;
    Ok(Lemma2Gap {
        lhs: numkit::norm_sq(&d.r),
        rhs: mismatch as f64 / y.len() as f64 * numkit::norm_sq(y),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSplit {
    /// Mean `|(C·s)_i|` over coordinates where `s` is right; `None` when
    /// there are none.
    pub mean_abs_correct: Option<f64>,
    /// Mean `|(C·s)_i|` over coordinates where `s` is wrong.
    pub mean_abs_incorrect: Option<f64>,
    /// `mean_abs_incorrect / (2|λ|)`; about 1 when the eigenvalue dominates.
    pub incorrect_over_two_lambda: Option<f64>,
}

impl ResidualSplit {
    /// `mean_abs_incorrect / mean_abs_correct` when both sides exist.
    pub fn separation(&self) -> Option<f64> {
        match (self.mean_abs_incorrect, self.mean_abs_correct) {
            (Some(bad), Some(good)) => Some(bad / good),
            _ => None,
        }
    }
}

/// Average residual size on correct versus incorrect coordinates of a
/// candidate sign vector. The truth is first re-oriented to the global sign
/// nearer the candidate.
pub fn residual_split(
    sys: &SignSystem,
    candidate: &SignVector,
    truth: &SignVector,
    lambda: f64,
) -> Result<ResidualSplit> {
    let n = sys.n();
    if candidate.len() != n || truth.len() != n {
        return Err(Error::DimensionMismatch {
            context: "residual split",
            expected: n,
            found: candidate.len().min(truth.len()),
        });
    }
    let oriented = if candidate.disagreements(truth) * 2 > n {
        truth.negated()
    } else {
        truth.clone()
    };
    let v = sys.residual(candidate);
    let (mut good, mut good_n, mut bad, mut bad_n) = (0.0, 0usize, 0.0, 0usize);
    for ((c, t), vi) in candidate.as_slice().iter().zip(oriented.as_slice()).zip(&v) {
        if c == t {
            good += vi.abs();
            good_n += 1;
        } else {
            bad += vi.abs();
            bad_n += 1;
        }
    }
    let mean = |sum: f64, count: usize| (count > 0).then(|| sum / count as f64);
    let mean_abs_incorrect = mean(bad, bad_n);
    Ok(ResidualSplit {
        mean_abs_correct: mean(good, good_n),
        mean_abs_incorrect,
        incorrect_over_two_lambda: mean_abs_incorrect
            .filter(|_| lambda != 0.0)
            .map(|m| m / (2.0 * lambda.abs())),
    })
}
