//! Dense complex matrices with shape-checked arithmetic.
//!
//! Storage is row-major. The checked methods (`try_add`, `matmul`, `solve`, ...)
//! return [`AlgebraError::ShapeMismatch`] on incompatible operands; the operator
//! impls on references panic instead, and are meant for internal code whose
//! shapes are fixed by construction.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::AlgebraError;

/// Shorthand for the zero scalar.
pub const C0: Complex64 = Complex64::new(0.0, 0.0);
/// Shorthand for the unit scalar.
pub const C1: Complex64 = Complex64::new(1.0, 0.0);
/// Imaginary unit.
pub const CI: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![C0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { C1 } else { C0 })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    /// Builds a matrix from row-major entries; fails if the length is not `rows * cols`.
    pub fn from_row_major(
        rows: usize,
        cols: usize,
        entries: Vec<Complex64>,
    ) -> Result<Self, AlgebraError> {
        if entries.len() != rows * cols {
            return Err(AlgebraError::ShapeMismatch {
                op: "from_row_major",
                left: (rows, cols),
                right: (entries.len(), 1),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from nested rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), c, "ragged rows in CMatrix::from_rows");
            entries.extend_from_slice(row);
        }
        Self {
            rows: r,
            cols: c,
            entries,
        }
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { C0 })
    }

    pub fn real_diag(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                C0
            }
        })
    }

    /// Anti-diagonal matrix of ones, `J_n`.
    pub fn anti_identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i + j + 1 == n { C1 } else { C0 })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn real_part(&self) -> Vec<f64> {
        self.entries.iter().map(|z| z.re).collect()
    }

    pub fn imag_part(&self) -> Self {
        self.map(|z| Complex64::new(z.im, 0.0))
    }

    pub fn norm_fro(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).fold(0.0, |acc, x| acc + x).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| *z == C0)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_shape("add", other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_shape("sub", other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::ShapeMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                if a == C0 {
                    continue;
                }
                let row = &other.entries[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.entries[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Frobenius distance; shapes must agree.
    pub fn dist(&self, other: &Self) -> Result<f64, AlgebraError> {
        self.check_same_shape("dist", other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Copy of the sub-block starting at `(r0, c0)` with the given shape.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Writes `src` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, src: &Self) {
        assert!(
            r0 + src.rows <= self.rows && c0 + src.cols <= self.cols,
            "set_block out of range"
        );
        for i in 0..src.rows {
            for j in 0..src.cols {
                self[(r0 + i, c0 + j)] = src[(i, j)];
            }
        }
    }

    pub fn row(&self, i: usize) -> Vec<Complex64> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>, AlgebraError> {
        if v.len() != self.cols {
            return Err(AlgebraError::ShapeMismatch {
                op: "mul_vec",
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.entries[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// LU factorisation with partial pivoting. Returns `None` when a pivot is exactly zero.
    fn lu(&self) -> Option<(Vec<Complex64>, Vec<usize>, bool)> {
        let n = self.rows;
        let mut a = self.entries.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd = false;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, a[i * n + k].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax == 0.0 {
                return None;
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                odd = !odd;
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                let l = a[i * n + k] / pivot;
                a[i * n + k] = l;
                if l != C0 {
                    for j in k + 1..n {
                        let akj = a[k * n + j];
                        a[i * n + j] -= l * akj;
                    }
                }
            }
        }
        Some((a, perm, odd))
    }

    pub fn det(&self) -> Result<Complex64, AlgebraError> {
        self.require_square("det")?;
        Ok(match self.lu() {
            None => C0,
            Some((lu, _, odd)) => {
                let n = self.rows;
                let d: Complex64 = (0..n).map(|i| lu[i * n + i]).product();
                if odd {
                    -d
                } else {
                    d
                }
            }
        })
    }

    /// Solves `self · X = rhs`.
    pub fn solve(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        self.require_square("solve")?;
        if rhs.rows != self.rows {
            return Err(AlgebraError::ShapeMismatch {
                op: "solve",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let n = self.rows;
        let (lu, perm, _) = self.lu().ok_or(AlgebraError::Singular)?;
        let mut x = Self::from_fn(n, rhs.cols, |i, j| rhs[(perm[i], j)]);
        for c in 0..rhs.cols {
            for i in 0..n {
                let mut s = x[(i, c)];
                for k in 0..i {
                    s -= lu[i * n + k] * x[(k, c)];
                }
                x[(i, c)] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[(i, c)];
                for k in i + 1..n {
                    s -= lu[i * n + k] * x[(k, c)];
                }
                x[(i, c)] = s / lu[i * n + i];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        self.require_square("inverse")?;
        self.solve(&Self::identity(self.rows))
    }

    /// Upper-triangular `R` with positive real diagonal such that `self = R^H · R`.
    ///
    /// The input must be Hermitian within `herm_tol` (relative to its norm).
    pub fn cholesky_upper(&self, herm_tol: f64) -> Result<Self, AlgebraError> {
        self.require_square("cholesky")?;
        let scale = self.norm_fro().max(f64::MIN_POSITIVE);
        let herm = self.dist(&self.adjoint())? / scale;
        if herm > herm_tol {
            return Err(AlgebraError::NotHermitian(herm));
        }
        let n = self.rows;
        let mut r = Self::zeros(n, n);
        for j in 0..n {
            let mut diag = self[(j, j)].re;
            for k in 0..j {
                diag -= r[(k, j)].norm_sqr();
            }
            if !(diag > 0.0) {
                return Err(AlgebraError::NotPositiveDefinite { pivot: j, value: diag });
            }
            let rjj = diag.sqrt();
            r[(j, j)] = Complex64::new(rjj, 0.0);
            for i in j + 1..n {
                let mut s = self[(j, i)];
                for k in 0..j {
                    s -= r[(k, j)].conj() * r[(k, i)];
                }
                r[(j, i)] = s / rjj;
            }
        }
        Ok(r)
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        if self.rows == 0 || self.cols == 0 {
            return Vec::new();
        }
        let m = DMatrix::from_row_slice(self.rows, self.cols, &self.entries);
        let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// 2-norm condition number; infinite for singular input.
    pub fn condition_number(&self) -> f64 {
        let sv = self.singular_values();
        match (sv.first(), sv.last()) {
            (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
            _ => f64::INFINITY,
        }
    }

    /// Number of singular values above `rel_tol · σ_max`.
    pub fn numeric_rank(&self, rel_tol: f64) -> usize {
        let sv = self.singular_values();
        let top = sv.first().copied().unwrap_or(0.0);
        if top <= f64::MIN_POSITIVE {
            return 0;
        }
        sv.iter().filter(|&&s| s > rel_tol * top).count()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    fn check_same_shape(&self, op: &'static str, other: &Self) -> Result<(), AlgebraError> {
        if self.shape() != other.shape() {
            return Err(AlgebraError::ShapeMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    fn require_square(&self, op: &'static str) -> Result<(), AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NotSquare {
                op,
                shape: self.shape(),
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<'a> Add<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &'a CMatrix) -> CMatrix {
        self.try_add(rhs).expect("CMatrix add")
    }
}

impl<'a> Sub<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &'a CMatrix) -> CMatrix {
        self.try_sub(rhs).expect("CMatrix sub")
    }
}

impl<'a> Mul<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &'a CMatrix) -> CMatrix {
        self.matmul(rhs).expect("CMatrix mul")
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;

    fn neg(self) -> CMatrix {
        self.map(|z| -z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = CMatrix::zeros(2, 3);
        let b = CMatrix::zeros(2, 3);
        assert!(matches!(a.matmul(&b), Err(AlgebraError::ShapeMismatch { .. })));
        assert!(a.try_add(&CMatrix::zeros(3, 2)).is_err());
        assert!(CMatrix::from_row_major(2, 2, vec![C0; 3]).is_err());
        assert!(matches!(a.inverse(), Err(AlgebraError::NotSquare { .. })));
    }

    #[test]
    fn inverse_and_det() {
        let a = CMatrix::from_rows(&[[c(2.0, 1.0), c(0.0, -1.0)], [c(1.0, 0.0), c(3.0, 0.5)]]);
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).dist(&CMatrix::identity(2)).unwrap() < 1e-15);
        let det = a.det().unwrap();
        let expected = c(2.0, 1.0) * c(3.0, 0.5) - c(0.0, -1.0) * c(1.0, 0.0);
        assert!((det - expected).norm() < 1e-15);
        let sing = CMatrix::from_real_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        assert_eq!(sing.inverse().unwrap_err(), AlgebraError::Singular);
    }

    #[test]
    fn cholesky_of_positive_diagonal() {
        let q = CMatrix::real_diag(&[2.0, 0.5]);
        let r = q.cholesky_upper(1e-12).unwrap();
        assert!((r[(0, 0)].re - 2f64.sqrt()).abs() < 1e-15);
        assert!((r[(1, 1)].re - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn cholesky_reconstructs_hermitian() {
        let b = CMatrix::from_rows(&[
            [c(1.0, 0.2), c(0.3, -0.1), c(0.0, 0.4)],
            [c(-0.2, 0.0), c(1.1, 0.5), c(0.2, 0.2)],
            [c(0.1, 0.1), c(0.0, -0.3), c(0.9, 0.0)],
        ]);
        let q = &b.adjoint() * &b;
        let r = q.cholesky_upper(1e-12).unwrap();
        assert!((&r.adjoint() * &r).dist(&q).unwrap() < 1e-14);
        for i in 0..3 {
            for j in 0..i {
                assert_eq!(r[(i, j)], C0);
            }
        }
    }

    #[test]
    fn cholesky_rejects_indefinite_and_non_hermitian() {
        let q = CMatrix::real_diag(&[1.0, -1.0]);
        assert!(matches!(
            q.cholesky_upper(1e-12),
            Err(AlgebraError::NotPositiveDefinite { pivot: 1, .. })
        ));
        let nh = CMatrix::from_rows(&[[C1, CI], [CI, C1]]);
        assert!(matches!(nh.cholesky_upper(1e-12), Err(AlgebraError::NotHermitian(_))));
    }

    #[test]
    fn numeric_rank_is_relative() {
        let a = CMatrix::from_real_rows(&[[1.0, 0.0], [0.0, 1e-12]]);
        assert_eq!(a.numeric_rank(1e-10), 1);
        assert_eq!(a.scale(c(1e-20, 0.0)).numeric_rank(1e-10), 1);
        assert_eq!(CMatrix::zeros(4, 2).numeric_rank(1e-10), 0);
    }
}
