//! Finite matrix Laurent polynomials in the loop parameter λ.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::matrix::CMatrix;
use super::AlgebraError;

/// Coefficients whose largest entry is at or below this magnitude are dropped.
pub const DEFAULT_DROP_TOL: f64 = 1e-300;

/// `Σ_k λ^k · coeffs[k]` with square coefficients of a fixed size.
///
/// The zero loop has no stored coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentLoop {
    size: usize,
    coeffs: BTreeMap<i32, CMatrix>,
}

impl LaurentLoop {
    pub fn zero(size: usize) -> Self {
        Self {
            size,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn identity(size: usize) -> Self {
        Self::constant(CMatrix::identity(size)).expect("identity is square")
    }

    pub fn constant(m: CMatrix) -> Result<Self, AlgebraError> {
        Self::from_coeffs(m.rows(), [(0, m)])
    }

    /// Builds a loop from `(degree, coefficient)` pairs. Repeated degrees are summed.
    pub fn from_coeffs(
        size: usize,
        coeffs: impl IntoIterator<Item = (i32, CMatrix)>,
    ) -> Result<Self, AlgebraError> {
        let mut out = Self::zero(size);
        for (k, m) in coeffs {
            if m.shape() != (size, size) {
                return Err(AlgebraError::ShapeMismatch {
                    op: "LaurentLoop::from_coeffs",
                    left: (size, size),
                    right: m.shape(),
                });
            }
            out.accumulate(k, &m);
        }
        out.prune_in_place(DEFAULT_DROP_TOL);
        Ok(out)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn min_deg(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_deg(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `λ^k`; zero matrix when absent.
    pub fn coeff(&self, k: i32) -> CMatrix {
        self.coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(|| CMatrix::zeros(self.size, self.size))
    }

    pub fn coeff_ref(&self, k: i32) -> Option<&CMatrix> {
        self.coeffs.get(&k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, &CMatrix)> {
        self.coeffs.iter().map(|(&k, m)| (k, m))
    }

    pub fn eval(&self, lambda: Complex64) -> CMatrix {
        let mut out = CMatrix::zeros(self.size, self.size);
        for (&k, m) in &self.coeffs {
            let w = lambda.powi(k);
            for i in 0..self.size {
                for j in 0..self.size {
                    out[(i, j)] += w * m[(i, j)];
                }
            }
        }
        out
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_size("LaurentLoop::mul", other)?;
        let mut out = Self::zero(self.size);
        for (&ka, a) in &self.coeffs {
            for (&kb, b) in &other.coeffs {
                out.accumulate(ka + kb, &(a * b));
            }
        }
        out.prune_in_place(DEFAULT_DROP_TOL);
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_size("LaurentLoop::add", other)?;
        let mut out = self.clone();
        for (&k, m) in &other.coeffs {
            out.accumulate(k, m);
        }
        out.prune_in_place(DEFAULT_DROP_TOL);
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map_coeffs(|_, m| m.scale(s))
    }

    /// Right multiplication by a constant matrix.
    pub fn mul_const_right(&self, m: &CMatrix) -> Result<Self, AlgebraError> {
        self.try_mul(&Self::constant(m.clone())?)
    }

    /// Left multiplication by a constant matrix.
    pub fn mul_const_left(&self, m: &CMatrix) -> Result<Self, AlgebraError> {
        Self::constant(m.clone())?.try_mul(self)
    }

    /// Applies `f(k, coeff)` to every stored coefficient, keeping degrees.
    pub fn map_coeffs(&self, f: impl Fn(i32, &CMatrix) -> CMatrix) -> Self {
        let mut out = Self {
            size: self.size,
            coeffs: self.coeffs.iter().map(|(&k, m)| (k, f(k, m))).collect(),
        };
        out.prune_in_place(DEFAULT_DROP_TOL);
        out
    }

    /// Replaces the degree of every coefficient by `-k` and the coefficient by `f(coeff)`.
    pub fn flip_degrees(&self, f: impl Fn(&CMatrix) -> CMatrix) -> Self {
        let mut out = Self {
            size: self.size,
            coeffs: self.coeffs.iter().map(|(&k, m)| (-k, f(m))).collect(),
        };
        out.prune_in_place(DEFAULT_DROP_TOL);
        out
    }

    /// Drops coefficients whose largest entry is at most `tol`.
    pub fn prune(&self, tol: f64) -> Self {
        let mut out = self.clone();
        out.prune_in_place(tol);
        out
    }

    /// Largest coefficient-wise Frobenius distance.
    pub fn max_coeff_dist(&self, other: &Self) -> Result<f64, AlgebraError> {
        self.check_size("LaurentLoop::max_coeff_dist", other)?;
        let degrees: std::collections::BTreeSet<i32> =
            self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        Ok(degrees
            .into_iter()
            .map(|k| self.coeff(k).dist(&other.coeff(k)).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max))
    }

    /// Frobenius norm of the coefficients with degree outside `[lo, hi]`.
    pub fn norm_outside(&self, lo: i32, hi: i32) -> f64 {
        self.coeffs
            .iter()
            .filter(|(&k, _)| k < lo || k > hi)
            .map(|(_, m)| m.norm_fro().powi(2))
            .fold(0.0, |acc, x| acc + x)
            .sqrt()
    }

    fn accumulate(&mut self, k: i32, m: &CMatrix) {
        match self.coeffs.get_mut(&k) {
            Some(existing) => *existing = &*existing + m,
            None => {
                self.coeffs.insert(k, m.clone());
            }
        }
    }

    fn prune_in_place(&mut self, tol: f64) {
        self.coeffs.retain(|_, m| m.max_abs() > tol);
    }

    fn check_size(&self, op: &'static str, other: &Self) -> Result<(), AlgebraError> {
        if self.size != other.size {
            return Err(AlgebraError::ShapeMismatch {
                op,
                left: (self.size, self.size),
                right: (other.size, other.size),
            });
        }
        Ok(())
    }
}
