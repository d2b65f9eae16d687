//! Small dense real linear-algebra kernel.
//!
//! Everything here is sized for desk-scale problems (n up to about a
//! thousand): row-major storage, partial-pivoted LU, power and inverse
//! iteration, cyclic Jacobi for symmetric spectra and one-sided Jacobi for
//! singular values.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::random::RandomSource;

/// Dense row-major real matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix data length",
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&vec![1.0; n])
    }

    pub fn diag(d: &[f64]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from equally sized rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "ragged rows",
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matmul",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let src = other.row(k);
                for (o, &b) in out.row_mut(i).iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `MᵀM`, exactly symmetric.
    pub fn gram(&self) -> Matrix {
        let n = self.cols;
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let s: f64 = (0..self.rows).map(|k| self[(k, i)] * self[(k, j)]).sum();
                g[(i, j)] = s;
                g[(j, i)] = s;
            }
        }
        g
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `M - shift·I`.
    pub fn shifted(&self, shift: f64) -> Matrix {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] -= shift;
        }
        m
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn matvec(m: &Matrix, v: &[f64]) -> Result<Vec<f64>> {
    if m.cols != v.len() {
        return Err(Error::DimensionMismatch {
            context: "matvec",
            expected: m.cols,
            found: v.len(),
        });
    }
    Ok((0..m.rows).map(|i| dot(m.row(i), v)).collect())
}

/// Sum of squared entries, i.e. `tr(M Mᵀ)`.
pub fn frobenius_sq(m: &Matrix) -> f64 {
    norm_sq(&m.data)
}

/// Partial-pivoted LU factorization `P M = L U`, stored compactly.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(m: &Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                context: "LU of non-square matrix",
                expected: m.rows,
                found: m.cols,
            });
        }
        let n = m.rows;
        let threshold = 1e-14 * m.max_abs();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let (piv_row, piv_abs) = (col..n)
                .map(|r| (r, lu[(r, col)].abs()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if piv_abs <= threshold || piv_abs == 0.0 {
                return Err(Error::Singular { col, pivot: piv_abs });
            }
            if piv_row != col {
                for j in 0..n {
                    lu.data.swap(piv_row * n + j, col * n + j);
                }
                perm.swap(piv_row, col);
            }
            let pivot = lu[(col, col)];
            for r in col + 1..n {
                let factor = lu[(r, col)] / pivot;
                lu[(r, col)] = factor;
                if factor != 0.0 {
                    for j in col + 1..n {
                        let u = lu[(col, j)];
                        lu[(r, j)] -= factor * u;
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.lu.rows;
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                context: "LU solve",
                expected: n,
                found: b.len(),
            });
        }
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[(i, j)] * y[j]).sum();
            y[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[(i, j)] * y[j]).sum();
            y[i] = (y[i] - s) / self.lu[(i, i)];
        }
        Ok(y)
    }
}

pub fn lu_solve(m: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    Lu::factor(m)?.solve(b)
}

/// An approximate eigenpair with unit-norm, sign-canonical eigenvector.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Flips `v` so its first non-negligible entry is positive.
pub fn canonicalize_sign(v: &mut [f64]) {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12 * scale) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

fn rayleigh_quotient(m: &Matrix, v: &[f64]) -> Result<(f64, f64)> {
    let mv = matvec(m, v)?;
    let lam = dot(v, &mv) / norm_sq(v);
    let res = mv.iter().zip(v).map(|(a, b)| (a - lam * b).powi(2)).sum::<f64>().sqrt();
    Ok((lam, res))
}

fn normalized(mut v: Vec<f64>) -> Option<Vec<f64>> {
    let n = norm(&v);
    if n > 0.0 && n.is_finite() {
        v.iter_mut().for_each(|x| *x /= n);
        Some(v)
    } else {
        None
    }
}

fn require_square(m: &Matrix, context: &'static str) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected: m.rows,
            found: m.cols,
        })
    }
}

/// Dominant eigenpair by power iteration.
///
/// Iterates on `M²` so that a real pair `±μ` of equal modulus does not make
/// the iteration oscillate; the converged vector `v` is then split into
/// `Mv + μv` (eigenvector for `+μ`) and `Mv − μv` (for `−μ`), preferring the
/// positive eigenvalue when both are present. The returned value is the
/// Rayleigh quotient of the returned vector and satisfies
/// `‖Mv − λv‖ ≤ tol·‖M‖_F`.
pub fn power_iteration(m: &Matrix, tol: f64, max_iters: usize, rng: &mut RandomSource) -> Result<EigenPair> {
    require_square(m, "power iteration")?;
    let n = m.rows;
    let scale = frobenius_sq(m).sqrt();
    let mut v = rng.unit_vector(n);
    if scale == 0.0 {
        canonicalize_sign(&mut v);
        return Ok(EigenPair {
            value: 0.0,
            vector: v,
            residual: 0.0,
            iterations: 0,
        });
    }
    let target = tol * scale;
    let mut last_residual = f64::INFINITY;
    for it in 1..=max_iters {
        let u = matvec(m, &v)?;
        let z = matvec(m, &u)?;
        let mu = dot(&v, &z).max(0.0).sqrt();
        for sign in [1.0, -1.0] {
            let w: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + sign * mu * b).collect();
            let Some(w) = normalized(w) else { continue };
            let mw = matvec(m, &w)?;
            let res = mw
                .iter()
                .zip(&w)
                .map(|(a, b)| (a - sign * mu * b).powi(2))
                .sum::<f64>()
                .sqrt();
            if res <= target {
                let (value, residual) = rayleigh_quotient(m, &w)?;
                if residual <= target {
                    let mut vector = w;
                    canonicalize_sign(&mut vector);
                    return Ok(EigenPair {
                        value,
                        vector,
                        residual,
                        iterations: it,
                    });
                }
            }
            last_residual = last_residual.min(res);
        }
        match normalized(z) {
            Some(next) => v = next,
            None => {
                // M²v = 0: v is (numerically) in the null space of M².
                let (value, residual) = rayleigh_quotient(m, &v)?;
                if residual <= target {
                    canonicalize_sign(&mut v);
                    return Ok(EigenPair {
                        value,
                        vector: v,
                        residual,
                        iterations: it,
                    });
                }
                v = rng.unit_vector(n);
            }
        }
    }
    Err(Error::NoConvergence {
        method: "power iteration",
        iters: max_iters,
        residual: last_residual,
    })
}

/// Eigenpair whose eigenvalue is nearest `shift`, by inverse iteration with a
/// fixed shift and a Rayleigh-quotient eigenvalue estimate.
pub fn inverse_iteration(
    m: &Matrix,
    shift: f64,
    tol: f64,
    max_iters: usize,
    rng: &mut RandomSource,
) -> Result<EigenPair> {
    require_square(m, "inverse iteration")?;
    let lu = Lu::factor(&m.shifted(shift))?;
    let target = tol * frobenius_sq(m).sqrt();
    let mut v = rng.unit_vector(m.rows);
    let mut last_residual = f64::INFINITY;
    for it in 1..=max_iters {
        v = normalized(lu.solve(&v)?).ok_or(Error::Singular { col: 0, pivot: 0.0 })?;
        let (value, residual) = rayleigh_quotient(m, &v)?;
        if residual <= target {
            canonicalize_sign(&mut v);
            return Ok(EigenPair {
                value,
                vector: v,
                residual,
                iterations: it,
            });
        }
        last_residual = residual;
    }
    Err(Error::NoConvergence {
        method: "inverse iteration",
        iters: max_iters,
        residual: last_residual,
    })
}

const MAX_JACOBI_SWEEPS: usize = 100;

fn off_diagonal_sq(a: &Matrix) -> f64 {
    let n = a.rows;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s
}

/// All eigenvalues of a symmetric matrix, descending, by cyclic Jacobi
/// rotations.
pub fn symmetric_eigenvalues(s: &Matrix) -> Result<Vec<f64>> {
    require_square(s, "symmetric eigenvalues")?;
    let n = s.rows;
    let frob = frobenius_sq(s).sqrt();
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            defect = defect.max((s[(i, j)] - s[(j, i)]).abs());
        }
    }
    if defect > 1e-12 * frob {
        return Err(Error::Asymmetric { defect });
    }
    let mut a = s.clone();
    let target = (1e-12 * frob).powi(2);
    let mut sweeps = 0;
    let mut off = off_diagonal_sq(&a);
    while off > target {
        if sweeps == MAX_JACOBI_SWEEPS {
            return Err(Error::NoConvergence {
                method: "Jacobi eigenvalues",
                iters: sweeps,
                residual: off.sqrt(),
            });
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    let new_rp = c * arp - sn * arq;
                    let new_rq = sn * arp + c * arq;
                    a[(r, p)] = new_rp;
                    a[(p, r)] = new_rp;
                    a[(r, q)] = new_rq;
                    a[(q, r)] = new_rq;
                }
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
            }
        }
        sweeps += 1;
        off = off_diagonal_sq(&a);
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    Ok(eig)
}

/// Singular values, descending, by one-sided (Hestenes) Jacobi
/// orthogonalization of the columns. Small singular values come out with
/// absolute accuracy near machine precision times `‖M‖`, which the
/// `MᵀM` route cannot deliver.
pub fn singular_values(m: &Matrix) -> Result<Vec<f64>> {
    let (rows, cols) = (m.rows, m.cols);
    let mut columns: Vec<Vec<f64>> = (0..cols).map(|j| m.column(j)).collect();
    let tol = (rows.max(cols) as f64) * f64::EPSILON;
    let mut sweeps = 0;
    loop {
        let mut max_cos = 0.0f64;
        for p in 0..cols.saturating_sub(1) {
            for q in p + 1..cols {
                let (left, right) = columns.split_at_mut(q);
                let (up, uq) = (&mut left[p], &mut right[0]);
                let alpha = norm_sq(up);
                let beta = norm_sq(uq);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(up, uq);
                let cos = gamma.abs() / (alpha * beta).sqrt();
                max_cos = max_cos.max(cos);
                if cos <= tol {
                    continue;
                }
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for (a, b) in up.iter_mut().zip(uq.iter_mut()) {
                    let (x, y) = (*a, *b);
                    *a = c * x - s * y;
                    *b = s * x + c * y;
                }
            }
        }
        sweeps += 1;
        if max_cos <= tol {
            break;
        }
        if sweeps == MAX_JACOBI_SWEEPS {
            return Err(Error::NoConvergence {
                method: "one-sided Jacobi SVD",
                iters: sweeps,
                residual: max_cos,
            });
        }
    }
    let mut sv: Vec<f64> = columns.iter().map(|c| norm(c)).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv.truncate(rows.min(cols));
    Ok(sv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    fn planted_2x2() -> Matrix {
        m(&[&[0.0, 2.0], &[0.5, 0.0]])
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn construction_validates() {
        assert!(matches!(
            Matrix::new(2, 2, vec![1.0; 3]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            Matrix::new(1, 2, vec![1.0, f64::NAN]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        assert!(Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn matvec_examples() {
        assert_eq!(
            matvec(&Matrix::identity(3), &[1.0, 2.0, 3.0]).unwrap(),
            vec![1.0, 2.0, 3.0]
        );
        assert_eq!(matvec(&planted_2x2(), &[2.0, 1.0]).unwrap(), vec![2.0, 1.0]);
        assert_eq!(matvec(&Matrix::zeros(2, 2), &[5.0, 7.0]).unwrap(), vec![0.0, 0.0]);
        assert!(matvec(&Matrix::zeros(2, 2), &[1.0]).is_err());
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(frobenius_sq(&Matrix::identity(4)), 4.0);
        assert_eq!(frobenius_sq(&m(&[&[-1.0, 1.0], &[1.0, -1.0]])), 4.0);
        assert_eq!(frobenius_sq(&Matrix::zeros(3, 2)), 0.0);
    }

    #[test]
    fn lu_examples() {
        assert_eq!(lu_solve(&Matrix::identity(2), &[3.0, 4.0]).unwrap(), vec![3.0, 4.0]);
        assert_close(
            &lu_solve(&Matrix::diag(&[2.0, 4.0]), &[2.0, 4.0]).unwrap(),
            &[1.0, 1.0],
            1e-15,
        );
        let y = lu_solve(&planted_2x2(), &[2.0, 1.0]).unwrap();
        assert_close(&y, &[2.0, 1.0], 1e-14);
        assert_close(&matvec(&planted_2x2(), &y).unwrap(), &[2.0, 1.0], 1e-14);
    }

    #[test]
    fn lu_detects_singular() {
        let s = m(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(lu_solve(&s, &[1.0, 1.0]), Err(Error::Singular { .. })));
    }

    #[test]
    fn power_iteration_diagonal() {
        let mut rng = RandomSource::new(0);
        let ep = power_iteration(&Matrix::diag(&[2.0, 1.0]), 1e-12, 1000, &mut rng).unwrap();
        assert!((ep.value - 2.0).abs() < 1e-10);
        assert_close(&ep.vector, &[1.0, 0.0], 1e-10);
    }

    #[test]
    fn power_iteration_prefers_positive_of_a_plus_minus_pair() {
        // eigenvalues +1 and -1
        let mut rng = RandomSource::new(5);
        let ep = power_iteration(&planted_2x2(), 1e-12, 1000, &mut rng).unwrap();
        assert!((ep.value - 1.0).abs() < 1e-10);
        let s5 = 5f64.sqrt();
        assert_close(&ep.vector, &[2.0 / s5, 1.0 / s5], 1e-10);
    }

    #[test]
    fn power_iteration_negative_dominant() {
        let mut rng = RandomSource::new(9);
        let ep = power_iteration(&Matrix::diag(&[1.0, -5.0, 0.5]), 1e-12, 1000, &mut rng).unwrap();
        assert!((ep.value + 5.0).abs() < 1e-10);
        assert_close(&ep.vector, &[0.0, 1.0, 0.0], 1e-10);
    }

    #[test]
    fn power_iteration_reports_non_convergence() {
        // rotation by 90 degrees: complex eigenvalues, no real dominant pair
        let rot = m(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let mut rng = RandomSource::new(1);
        assert!(matches!(
            power_iteration(&rot, 1e-12, 50, &mut rng),
            Err(Error::NoConvergence { .. })
        ));
    }

    #[test]
    fn inverse_iteration_examples() {
        let mut rng = RandomSource::new(2);
        let ep = inverse_iteration(&Matrix::diag(&[2.0, -0.5, 1.0]), 0.0, 1e-12, 500, &mut rng).unwrap();
        assert!((ep.value + 0.5).abs() < 1e-10);
        assert_close(&ep.vector, &[0.0, 1.0, 0.0], 1e-10);

        let ep = inverse_iteration(&planted_2x2(), 0.9, 1e-12, 500, &mut rng).unwrap();
        assert!((ep.value - 1.0).abs() < 1e-10);
        let s5 = 5f64.sqrt();
        assert_close(&ep.vector, &[2.0 / s5, 1.0 / s5], 1e-10);
    }

    #[test]
    fn inverse_iteration_shift_on_eigenvalue_is_singular() {
        let mut rng = RandomSource::new(2);
        assert!(matches!(
            inverse_iteration(&Matrix::diag(&[2.0, 1.0]), 1.0, 1e-12, 10, &mut rng),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn symmetric_eigenvalue_examples() {
        assert_close(
            &symmetric_eigenvalues(&Matrix::diag(&[3.0, 1.0, 2.0])).unwrap(),
            &[3.0, 2.0, 1.0],
            0.0,
        );
        assert_close(
            &symmetric_eigenvalues(&m(&[&[2.0, 1.0], &[1.0, 2.0]])).unwrap(),
            &[3.0, 1.0],
            1e-14,
        );
        assert_eq!(
            symmetric_eigenvalues(&Matrix::zeros(3, 3)).unwrap(),
            vec![0.0, 0.0, 0.0]
        );
        assert!(matches!(
            symmetric_eigenvalues(&m(&[&[1.0, 2.0], &[0.0, 1.0]])),
            Err(Error::Asymmetric { .. })
        ));
    }

    #[test]
    fn singular_value_examples() {
        assert_close(&singular_values(&Matrix::identity(3)).unwrap(), &[1.0, 1.0, 1.0], 0.0);
        let sv = singular_values(&m(&[&[-1.0, 1.0], &[1.0, -1.0]])).unwrap();
        assert_close(&sv, &[2.0, 0.0], 1e-15);
    }

    #[test]
    fn singular_values_match_gram_route() {
        let mut rng = RandomSource::new(11);
        let a = Matrix::from_fn(7, 7, |_, _| rng.normal());
        let sv = singular_values(&a).unwrap();
        let gram: Vec<f64> = symmetric_eigenvalues(&a.gram())
            .unwrap()
            .into_iter()
            .map(|x| x.max(0.0).sqrt())
            .collect();
        assert_close(&sv, &gram, 1e-8 * sv[0]);
    }
}
