//! Problem instances: the matrix, the known eigenvalue, the entrywise
//! magnitudes of the eigenvector and (optionally) its hidden signs.
//!
//! Besides validation and JSON I/O this module hosts the instance
//! generators: planted instances with exact ground truth, the perturbed
//! Sylvester-Hadamard matrix, and the spiked symmetric Gaussian matrix.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{self, EigenPair, Matrix};
use crate::random::RandomSource;
use crate::signsys::{build_sign_system, SignVector};

const EIGEN_TOL: f64 = 1e-13;
const EIGEN_MAX_ITERS: usize = 20_000;
const PLANTED_RETRIES: usize = 10;
/// Seed for the start vectors of the eigensolvers used by the fixed
/// (non-random) generators.
const SOLVER_SEED: u64 = 0x5EED;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPhaseProblem {
    a: Matrix,
    lambda: f64,
    magnitudes: Vec<f64>,
    truth_signs: Option<SignVector>,
}

impl EigenPhaseProblem {
    /// Validates every instance invariant. Ground-truth signs are stored in
    /// canonical form (first entry `+1`).
    pub fn new(a: Matrix, lambda: f64, magnitudes: Vec<f64>, truth_signs: Option<SignVector>) -> Result<Self> {
        let n = a.rows();
        if !a.is_square() {
            return Err(Error::InvalidProblem(format!(
                "matrix must be square, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        if !lambda.is_finite() {
            return Err(Error::InvalidProblem("lambda is not finite".into()));
        }
        if magnitudes.len() != n {
            return Err(Error::InvalidProblem(format!(
                "expected {n} magnitudes, got {}",
                magnitudes.len()
            )));
        }
        if let Some(i) = magnitudes.iter().position(|&m| !(m > 0.0 && m.is_finite())) {
            return Err(Error::InvalidProblem(format!(
                "magnitude {i} is {} (must be strictly positive)",
                magnitudes[i]
            )));
        }
        let truth_signs = match truth_signs {
            Some(s) if s.len() != n => {
                return Err(Error::InvalidProblem(format!(
                    "expected {n} truth signs, got {}",
                    s.len()
                )))
            }
            Some(s) => {
                let s = s.canonical();
                let x: Vec<f64> = magnitudes
                    .iter()
                    .zip(s.as_slice())
                    .map(|(m, &e)| m * e as f64)
                    .collect();
                let ax = numkit::matvec(&a, &x)?;
                let res = numkit::norm(&ax.iter().zip(&x).map(|(p, q)| p - lambda * q).collect::<Vec<_>>());
                let allowed = 1e-8 * numkit::frobenius_sq(&a).sqrt() * numkit::norm(&magnitudes);
                if res > allowed {
                    return Err(Error::InvalidProblem(format!(
                        "truth signs do not give an eigenvector: residual {res:e} > {allowed:e}"
                    )));
                }
                Some(s)
            }
            None => None,
        };
        Ok(Self {
            a,
            lambda,
            magnitudes,
            truth_signs,
        })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn truth_signs(&self) -> Option<&SignVector> {
        self.truth_signs.as_ref()
    }

    /// The same instance with the ground truth hidden.
    pub fn blind(&self) -> Self {
        Self {
            truth_signs: None,
            ..self.clone()
        }
    }

    fn from_eigenpair(a: Matrix, pair: EigenPair) -> Result<Self> {
        let magnitudes: Vec<f64> = pair.vector.iter().map(|x| x.abs()).collect();
        let signs: Vec<i8> = pair.vector.iter().map(|&x| if x < 0.0 { -1 } else { 1 }).collect();
        Self::new(a, pair.value, magnitudes, Some(SignVector::new(signs)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MagnitudeLaw {
    /// All ones.
    Unit,
    /// `|N(0,1)| + 0.1`.
    FoldedGaussian,
    /// `2^(−i/4) + 0.05` for `i = 1..n`.
    Decaying,
}

impl MagnitudeLaw {
    fn draw(self, n: usize, rng: &mut RandomSource) -> Vec<f64> {
        match self {
            MagnitudeLaw::Unit => vec![1.0; n],
            MagnitudeLaw::FoldedGaussian => (0..n).map(|_| rng.normal().abs() + 0.1).collect(),
            MagnitudeLaw::Decaying => (1..=n).map(|i| 2f64.powf(-(i as f64) / 4.0) + 0.05).collect(),
        }
    }
}

/// Symmetric instance with a planted eigenpair `(λ, ε⊙m)`:
/// `A = λ·uuᵀ + P·M·P` with `u = x/‖x‖`, `P = I − uuᵀ` and `M` a
/// symmetrized Gaussian matrix. Draws of `M` that leave the sign system
/// with a tiny spectral gap are rejected.
pub fn planted_problem(n: usize, lambda: f64, law: MagnitudeLaw, rng: &mut RandomSource) -> Result<EigenPhaseProblem> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("planted problems need n >= 2, got {n}")));
    }
    if !lambda.is_finite() {
        return Err(Error::InvalidArgument("lambda must be finite".into()));
    }
    let signs = SignVector::random(n, rng).canonical();
    let magnitudes = law.draw(n, rng);
    let x: Vec<f64> = magnitudes
        .iter()
        .zip(signs.as_slice())
        .map(|(m, &s)| m * s as f64)
        .collect();
    let xn = numkit::norm(&x);
    let u: Vec<f64> = x.iter().map(|v| v / xn).collect();

    for _ in 0..=PLANTED_RETRIES {
        let g = Matrix::from_fn(n, n, |_, _| rng.normal());
        let m = Matrix::from_fn(n, n, |i, j| 0.5 * (g[(i, j)] + g[(j, i)]));
        let w = numkit::matvec(&m, &u)?;
        let uwu = numkit::dot(&u, &w);
        // P M P = M − u wᵀ − w uᵀ + (uᵀMu) u uᵀ
        let a = Matrix::from_fn(n, n, |i, j| {
            m[(i, j)] - u[i] * w[j] - w[i] * u[j] + (uwu + lambda) * u[i] * u[j]
        });
        let problem = EigenPhaseProblem::new(a, lambda, magnitudes.clone(), Some(signs.clone()))?;
        let sys = build_sign_system(&problem)?;
        let sv = numkit::singular_values(sys.matrix())?;
        if sv[n - 2] > 1e-6 * sys.frob() {
            return Ok(problem);
        }
    }
    Err(Error::DegenerateInstance {
        retries: PLANTED_RETRIES,
    })
}

/// Sylvester Hadamard matrix of the given order (a power of two), entries `±1`.
pub fn sylvester_hadamard(order: usize) -> Result<Matrix> {
    if order == 0 || !order.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "Sylvester Hadamard order must be a power of two, got {order}"
        )));
    }
    // H[i][j] = (−1)^popcount(i & j)
    Ok(Matrix::from_fn(order, order, |i, j| {
        if (i & j).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HadamardTarget {
    /// Largest eigenvalue.
    Top,
    /// Eigenvalue of smallest magnitude.
    Bottom,
}

pub const HADAMARD_ORDER: usize = 256;

/// `H/16 + (2 − 1/16)·e₁e₁ᵀ` for the Sylvester Hadamard `H` of order 256,
/// i.e. the orthogonal `±1`-spectrum matrix `H/16` with its (1,1) entry
/// set to 2.
pub fn hadamard_perturbed_matrix() -> Matrix {
    let h = sylvester_hadamard(HADAMARD_ORDER).expect("power of two");
    let scale = (HADAMARD_ORDER as f64).sqrt();
    let mut a = Matrix::from_fn(HADAMARD_ORDER, HADAMARD_ORDER, |i, j| h[(i, j)] / scale);
    a[(0, 0)] = 2.0;
    a
}

pub fn hadamard_perturbed(which: HadamardTarget) -> Result<EigenPhaseProblem> {
    let a = hadamard_perturbed_matrix();
    let mut rng = RandomSource::new(SOLVER_SEED);
    let pair = match which {
        HadamardTarget::Top => numkit::power_iteration(&a, EIGEN_TOL, EIGEN_MAX_ITERS, &mut rng)?,
        HadamardTarget::Bottom => numkit::inverse_iteration(&a, 0.0, EIGEN_TOL, EIGEN_MAX_ITERS, &mut rng)?,
    };
    EigenPhaseProblem::from_eigenpair(a, pair)
}

pub const GAUSSIAN_N: usize = 100;
pub const GAUSSIAN_SPIKE: f64 = 50.0;

/// `A₀ + A₀ᵀ` for a 100×100 standard Gaussian `A₀`, with the (1,1) entry
/// replaced by 50; the instance targets the top eigenpair.
pub fn gaussian_spiked(rng: &mut RandomSource) -> Result<EigenPhaseProblem> {
    let a0 = Matrix::from_fn(GAUSSIAN_N, GAUSSIAN_N, |_, _| rng.normal());
    let mut a = Matrix::from_fn(GAUSSIAN_N, GAUSSIAN_N, |i, j| a0[(i, j)] + a0[(j, i)]);
    a[(0, 0)] = GAUSSIAN_SPIKE;
    let pair = numkit::power_iteration(&a, EIGEN_TOL, EIGEN_MAX_ITERS, rng)?;
    EigenPhaseProblem::from_eigenpair(a, pair)
}

/// Indices whose magnitude exceeds `1e−12·max magnitude`.
pub fn kept_indices(magnitudes: &[f64]) -> Result<Vec<usize>> {
    let max = magnitudes.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max.is_nan() || max <= 0.0 {
        return Err(Error::AllZeroMagnitudes);
    }
    Ok((0..magnitudes.len())
        .filter(|&i| magnitudes[i].abs() > 1e-12 * max)
        .collect())
}

/// Drops coordinates with (numerically) zero magnitude together with the
/// matching rows and columns of `A`.
pub fn strip_zero_magnitudes(
    a: &Matrix,
    lambda: f64,
    magnitudes: &[f64],
    truth_signs: Option<&SignVector>,
) -> Result<EigenPhaseProblem> {
    if magnitudes.len() != a.rows() {
        return Err(Error::InvalidProblem(format!(
            "expected {} magnitudes, got {}",
            a.rows(),
            magnitudes.len()
        )));
    }
    let keep = kept_indices(magnitudes)?;
    let k = keep.len();
    let reduced = Matrix::from_fn(k, k, |i, j| a[(keep[i], keep[j])]);
    let mags = keep.iter().map(|&i| magnitudes[i].abs()).collect();
    let truth = match truth_signs {
        Some(s) if s.len() != magnitudes.len() => {
            return Err(Error::InvalidProblem("truth sign length mismatch".into()))
        }
        Some(s) => Some(SignVector::new(keep.iter().map(|&i| s.as_slice()[i]).collect())?),
        None => None,
    };
    EigenPhaseProblem::new(reduced, lambda, mags, truth)
}

/// On-disk JSON layout.
#[derive(Debug, Serialize, Deserialize)]
struct ProblemFile {
    n: usize,
    a: Vec<f64>,
    lambda: f64,
    magnitudes: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    truth_signs: Option<Vec<i8>>,
}

pub fn problem_to_json(problem: &EigenPhaseProblem) -> Result<String> {
    let file = ProblemFile {
        n: problem.n(),
        a: problem.a.as_slice().to_vec(),
        lambda: problem.lambda,
        magnitudes: problem.magnitudes.clone(),
        truth_signs: problem.truth_signs.clone().map(Vec::from),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

pub fn problem_from_json(text: &str) -> Result<EigenPhaseProblem> {
    let file: ProblemFile = serde_json::from_str(text)?;
    if file.n == 0 {
        return Err(Error::InvalidProblem("n must be positive".into()));
    }
    if file.a.len() != file.n * file.n {
        return Err(Error::InvalidProblem(format!(
            "\"a\" must hold n*n = {} entries, found {}",
            file.n * file.n,
            file.a.len()
        )));
    }
    let a = Matrix::new(file.n, file.n, file.a)?;
    let truth = file.truth_signs.map(SignVector::new).transpose()?;
    EigenPhaseProblem::new(a, file.lambda, file.magnitudes, truth)
}

pub fn save_problem(problem: &EigenPhaseProblem, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, problem_to_json(problem)?)?;
    Ok(())
}

pub fn load_problem(path: impl AsRef<Path>) -> Result<EigenPhaseProblem> {
    problem_from_json(&std::fs::read_to_string(path)?)
}
