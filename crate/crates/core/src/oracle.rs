//! Exhaustive sign search for small systems, and a singular-value check of
//! whether the sign solution is unique.

use crate::error::{Error, Result};
use crate::numkit::{self, Matrix};
use crate::par::Execution;
use crate::signsys::{SignSystem, SignVector};

pub const BRUTE_FORCE_LIMIT: usize = 24;
const MAX_CHUNKS: u64 = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// Minimizer of `‖C·s‖` with `s₁ = +1`.
    pub signs: SignVector,
    pub min_residual: f64,
    /// Second smallest `‖C·s‖`; infinite when `n = 1`.
    pub runner_up: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Best {
    value: f64,
    index: u64,
}

fn better(a: Best, b: Best) -> bool {
    (a.value, a.index) < (b.value, b.index)
}

#[derive(Debug, Clone, Copy)]
struct Top2 {
    first: Option<Best>,
    second: Option<Best>,
}

impl Top2 {
    fn new() -> Self {
        Self {
            first: None,
            second: None,
        }
    }

    fn push(&mut self, cand: Best) {
        match self.first {
            None => self.first = Some(cand),
            Some(f) if better(cand, f) => {
                self.second = self.first;
                self.first = Some(cand);
            }
            _ => match self.second {
                Some(s) if !better(cand, s) => {}
                _ => self.second = Some(cand),
            },
        }
    }
}

fn gray(t: u64) -> u64 {
    t ^ (t >> 1)
}

/// Sign vector for Gray code word `g`: coordinate `j ≥ 1` is `−1` when bit
/// `j − 1` of `g` is set; coordinate 0 is always `+1`.
fn signs_for(g: u64, n: usize) -> Vec<i8> {
    (0..n)
        .map(|j| if j > 0 && (g >> (j - 1)) & 1 == 1 { -1 } else { 1 })
        .collect()
}

fn scan_chunk(sys: &SignSystem, lo: u64, hi: u64) -> Top2 {
    let n = sys.n();
    let c = sys.matrix();
    let mut s = signs_for(gray(lo), n);
    let mut v = sys.residual(&SignVector::new(s.clone()).expect("±1"));
    let mut top = Top2::new();
    top.push(Best {
        value: numkit::norm_sq(&v),
        index: gray(lo),
    });
    for t in lo + 1..hi {
        let j = t.trailing_zeros() as usize + 1;
        let sj = s[j] as f64;
        for (i, vi) in v.iter_mut().enumerate() {
            *vi -= 2.0 * sj * c[(i, j)];
        }
        s[j] = -s[j];
        top.push(Best {
            value: numkit::norm_sq(&v),
            index: gray(t),
        });
    }
    top
}

/// Enumerates all `2^{n−1}` sign vectors with first entry `+1` and returns
/// the minimizer of `‖C·s‖` with the runner-up value.
pub fn brute_force_signs(sys: &SignSystem) -> Result<OracleResult> {
    brute_force_signs_with(sys, Execution::default())
}

pub fn brute_force_signs_with(sys: &SignSystem, exec: Execution) -> Result<OracleResult> {
    let n = sys.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let total = 1u64 << (n - 1);
    let chunks = total.min(MAX_CHUNKS);
    let per = total / chunks;
    let parts = exec.map_range(chunks as usize, |c| {
        let lo = c as u64 * per;
        scan_chunk(sys, lo, lo + per)
    });
    let mut top = Top2::new();
    for p in parts {
        for b in [p.first, p.second].into_iter().flatten() {
            top.push(b);
        }
    }
    let first = top.first.expect("at least one candidate");
    let signs = SignVector::new(signs_for(first.index, n)).expect("±1");
    let min_residual = numkit::norm(&sys.residual(&signs));
    let runner_up = top.second.map_or(f64::INFINITY, |b| b.value.sqrt());
    if runner_up - min_residual <= 1e-6 * sys.frob() {
        return Err(Error::Ambiguous {
            best: min_residual,
            runner_up,
        });
    }
    Ok(OracleResult {
        signs,
        min_residual,
        runner_up,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullspaceCheck {
    pub sigma_n: f64,
    pub sigma_n_minus_1: f64,
    pub unique: bool,
}

/// `unique` when `σ_n ≤ 1e−8·‖C‖_F` and `σ_{n−1} > 1e−6·‖C‖_F`.
pub fn nullspace_unique(c: &Matrix) -> Result<NullspaceCheck> {
    let sv = numkit::singular_values(c)?;
    let n = sv.len();
    let frob = numkit::frobenius_sq(c).sqrt();
    let sigma_n = sv[n - 1];
    let sigma_n_minus_1 = if n >= 2 { sv[n - 2] } else { 0.0 };
    Ok(NullspaceCheck {
        sigma_n,
        sigma_n_minus_1,
        unique: sigma_n <= 1e-8 * frob && sigma_n_minus_1 > 1e-6 * frob,
    })
}
