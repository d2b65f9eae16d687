//! The sign system `C = D⁻¹AD − λI`, whose null space holds the hidden sign
//! vector, plus row sampling and residual evaluation used by both
//! algorithms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{self, Matrix};
use crate::problems::EigenPhaseProblem;
use crate::random::RandomSource;

/// A vector in `{−1, +1}ⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if let Some(index) = entries.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidSign {
                index,
                value: entries[index] as f64,
            });
        }
        Ok(Self(entries))
    }

    /// Accepts reals that are exactly `±1`.
    pub fn from_f64(values: &[f64]) -> Result<Self> {
        values
            .iter()
            .enumerate()
            .map(|(index, &v)| match v {
                1.0 => Ok(1),
                -1.0 => Ok(-1),
                value => Err(Error::InvalidSign { index, value }),
            })
            .collect::<Result<Vec<i8>>>()
            .map(Self)
    }

    pub fn all_plus(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn random(n: usize, rng: &mut RandomSource) -> Self {
        Self((0..n).map(|_| rng.sign()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i] as f64
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&s| s as f64).collect()
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|&s| -s).collect())
    }

    /// The representative of `{s, −s}` whose first entry is `+1`.
    pub fn canonical(&self) -> Self {
        match self.0.first() {
            Some(-1) => self.negated(),
            _ => self.clone(),
        }
    }

    /// Number of coordinates where `self` and `other` differ.
    pub fn disagreements(&self, other: &SignVector) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

impl TryFrom<Vec<i8>> for SignVector {
    type Error = Error;

    fn try_from(v: Vec<i8>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SignVector> for Vec<i8> {
    fn from(s: SignVector) -> Self {
        s.0
    }
}

/// `C = B − λI` with `B = D⁻¹AD`, `D = diag(|x_i|)`, and the cached
/// quantities both algorithms need.
#[derive(Debug, Clone)]
pub struct SignSystem {
    c: Matrix,
    row_norms_sq: Vec<f64>,
    frob_sq: f64,
    cum_weights: Vec<f64>,
    last_nonzero_row: usize,
}

impl SignSystem {
    pub fn from_matrix(c: Matrix) -> Result<Self> {
        if !c.is_square() {
            return Err(Error::DimensionMismatch {
                context: "sign system must be square",
                expected: c.rows(),
                found: c.cols(),
            });
        }
        let row_norms_sq: Vec<f64> = (0..c.rows()).map(|i| numkit::norm_sq(c.row(i))).collect();
        let cum_weights: Vec<f64> = row_norms_sq
            .iter()
            .scan(0.0, |acc, &w| {
                *acc += w;
                Some(*acc)
            })
            .collect();
        let frob_sq = *cum_weights.last().expect("non-empty");
        if frob_sq <= 0.0 {
            return Err(Error::DegenerateSystem);
        }
        let last_nonzero_row = row_norms_sq.iter().rposition(|&w| w > 0.0).expect("frob_sq > 0");
        Ok(Self {
            c,
            row_norms_sq,
            frob_sq,
            cum_weights,
            last_nonzero_row,
        })
    }

    pub fn n(&self) -> usize {
        self.c.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.c
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.c.row(i)
    }

    pub fn row_norms_sq(&self) -> &[f64] {
        &self.row_norms_sq
    }

    pub fn frob_sq(&self) -> f64 {
        self.frob_sq
    }

    pub fn frob(&self) -> f64 {
        self.frob_sq.sqrt()
    }

    pub fn cum_weights(&self) -> &[f64] {
        &self.cum_weights
    }

    /// Draws row `j` with probability `‖c_j‖² / ‖C‖_F²`. Zero rows are
    /// never returned.
    pub fn sample_row(&self, rng: &mut RandomSource) -> usize {
        let u = rng.uniform() * self.frob_sq;
        let j = self.cum_weights.partition_point(|&w| w <= u);
        j.min(self.last_nonzero_row)
    }

    /// `C·s`.
    pub fn residual(&self, s: &SignVector) -> Vec<f64> {
        assert_eq!(s.len(), self.n(), "sign vector length");
        (0..self.n())
            .map(|i| {
                self.c
                    .row(i)
                    .iter()
                    .zip(s.as_slice())
                    .map(|(c, &e)| if e > 0 { *c } else { -*c })
                    .sum()
            })
            .collect()
    }

    /// `‖C·s‖ ≤ tol·‖C‖_F`
    pub fn is_solution(&self, s: &SignVector, tol: f64) -> bool {
        numkit::norm(&self.residual(s)) <= tol * self.frob()
    }
}

/// Builds `C[i][j] = a_ij·m_j/m_i − λ·[i = j]`.
pub fn build_sign_system(problem: &EigenPhaseProblem) -> Result<SignSystem> {
    let m = problem.magnitudes();
    if let Some(i) = m.iter().position(|&x| x.is_nan() || x <= 0.0) {
        return Err(Error::InvalidProblem(format!("magnitude {i} is not strictly positive")));
    }
    let a = problem.a();
    let lambda = problem.lambda();
    let c = Matrix::from_fn(problem.n(), problem.n(), |i, j| {
        let b = a[(i, j)] * m[j] / m[i];
        if i == j {
            b - lambda
        } else {
            b
        }
    });
    SignSystem::from_matrix(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hand_c() -> SignSystem {
        SignSystem::from_matrix(Matrix::from_rows(&[[-1.0, 1.0], [1.0, -1.0]]).unwrap()).unwrap()
    }

    fn hand_problem() -> EigenPhaseProblem {
        EigenPhaseProblem::new(
            Matrix::from_rows(&[[0.0, 2.0], [0.5, 0.0]]).unwrap(),
            1.0,
            vec![2.0, 1.0],
            Some(SignVector::all_plus(2)),
        )
        .unwrap()
    }

    #[test]
    fn sign_vector_validation() {
        assert!(SignVector::new(vec![1, -1, 1]).is_ok());
        assert!(SignVector::new(vec![1, 0]).is_err());
        assert!(SignVector::from_f64(&[1.0, -1.0]).is_ok());
        assert!(SignVector::from_f64(&[0.5]).is_err());
        let s = SignVector::new(vec![-1, 1, 1]).unwrap();
        assert_eq!(s.canonical().as_slice(), &[1, -1, -1]);
        assert_eq!(s.disagreements(&s.negated()), 3);
    }

    #[test]
    fn builds_hand_example() {
        let sys = build_sign_system(&hand_problem()).unwrap();
        assert_eq!(sys.matrix(), hand_c().matrix());
        assert_eq!(sys.frob_sq(), 4.0);
        assert_eq!(sys.row_norms_sq(), &[2.0, 2.0]);
        assert_eq!(sys.cum_weights(), &[2.0, 4.0]);
    }

    #[test]
    fn unit_magnitudes_give_a_minus_lambda() {
        let a = Matrix::from_rows(&[[1.0, 2.0, 0.0], [2.0, -1.0, 3.0], [0.0, 3.0, 4.0]]).unwrap();
        let p = EigenPhaseProblem::new(a.clone(), 0.5, vec![1.0; 3], None).unwrap();
        let sys = build_sign_system(&p).unwrap();
        assert_eq!(sys.matrix(), &a.shifted(0.5));
    }

    #[test]
    fn zero_system_is_degenerate() {
        assert!(matches!(
            SignSystem::from_matrix(Matrix::zeros(3, 3)),
            Err(Error::DegenerateSystem)
        ));
    }

    #[test]
    fn residual_examples() {
        let sys = hand_c();
        let truth = SignVector::all_plus(2);
        assert_eq!(sys.residual(&truth), vec![0.0, 0.0]);
        assert_eq!(sys.residual(&truth.negated()), vec![0.0, 0.0]);
        let s = SignVector::new(vec![1, -1]).unwrap();
        assert_eq!(sys.residual(&s), vec![-2.0, 2.0]);
        assert!(sys.is_solution(&truth, 1e-8));
        assert!(!sys.is_solution(&s, 1e-8));
    }

    fn frequencies(sys: &SignSystem, draws: usize, seed: u64) -> Vec<f64> {
        let mut rng = RandomSource::new(seed);
        let mut counts = vec![0usize; sys.n()];
        for _ in 0..draws {
            counts[sys.sample_row(&mut rng)] += 1;
        }
        counts.iter().map(|&c| c as f64 / draws as f64).collect()
    }

    #[test]
    fn sampling_equal_rows() {
        let sys = SignSystem::from_matrix(Matrix::from_rows(&[[2.0, 0.0], [0.0, 2.0]]).unwrap()).unwrap();
        let f = frequencies(&sys, 100_000, 1);
        assert!((f[0] - 0.5).abs() < 0.02 && (f[1] - 0.5).abs() < 0.02, "{f:?}");
    }

    #[test]
    fn sampling_weighted_rows() {
        let s3 = 3f64.sqrt();
        let sys = SignSystem::from_matrix(Matrix::from_rows(&[[1.0, 0.0], [0.0, s3]]).unwrap()).unwrap();
        let f = frequencies(&sys, 100_000, 2);
        assert!((f[0] - 0.25).abs() < 0.02 && (f[1] - 0.75).abs() < 0.02, "{f:?}");
    }

    #[test]
    fn sampling_skips_zero_rows() {
        let sys =
            SignSystem::from_matrix(Matrix::from_rows(&[[0.0, 0.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 0.0]]).unwrap())
                .unwrap();
        let mut rng = RandomSource::new(3);
        for _ in 0..10_000 {
            assert_eq!(sys.sample_row(&mut rng), 1);
        }
    }

    #[test]
    fn sampling_chi_square() {
        let mut rng = RandomSource::new(17);
        let c = Matrix::from_fn(6, 6, |_, _| rng.normal());
        let sys = SignSystem::from_matrix(c).unwrap();
        let draws = 100_000;
        let f = frequencies(&sys, draws, 4);
        let chi2: f64 = f
            .iter()
            .zip(sys.row_norms_sq())
            .map(|(&obs, &w)| {
                let p = w / sys.frob_sq();
                draws as f64 * (obs - p).powi(2) / p
            })
            .sum();
        // 5 degrees of freedom; 99.9% quantile is 20.5
        assert!(chi2 < 20.5, "chi2 = {chi2}");
    }
}
