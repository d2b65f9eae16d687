#![allow(dead_code)]

use eigsign::problems::planted_problem;
use eigsign::{EigenPhaseProblem, MagnitudeLaw, Matrix, RandomSource};

/// Average of `‖r − proj_j r‖²` over all rows `j`, weighted by
/// `‖c_j‖²/‖C‖_F²`, with every quantity recomputed by plain loops.
pub fn enumerated_step_decay(c: &Matrix, r: &[f64]) -> f64 {
    let n = c.rows();
    let row_sq: Vec<f64> = (0..n).map(|j| (0..n).map(|l| c[(j, l)] * c[(j, l)]).sum()).collect();
    let frob_sq: f64 = row_sq.iter().sum();
    let mut total = 0.0;
    for j in 0..n {
        if row_sq[j] == 0.0 {
            continue;
        }
        let ip: f64 = (0..n).map(|l| r[l] * c[(j, l)]).sum();
        let coef = ip / row_sq[j];
        let after: f64 = (0..n).map(|l| (r[l] - coef * c[(j, l)]).powi(2)).sum();
        total += row_sq[j] / frob_sq * after;
    }
    total
}

pub fn planted(n: usize, lambda: f64, seed: u64) -> EigenPhaseProblem {
    planted_problem(n, lambda, MagnitudeLaw::FoldedGaussian, &mut RandomSource::new(seed)).unwrap()
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}
