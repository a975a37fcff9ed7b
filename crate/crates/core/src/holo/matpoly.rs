use num_complex::Complex64;

use super::poly::PolyZ;
use super::HoloError;
use crate::algebra::CMatrix;

/// Matrix whose entries are polynomials in `z`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct MatPolyZ {
    rows: usize,
    cols: usize,
    entries: Vec<PolyZ>,
}

impl MatPolyZ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![PolyZ::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> PolyZ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<PolyZ>>) -> Result<Self, HoloError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(HoloError::ShapeViolation("empty polynomial matrix".into()));
        }
        if let Some(bad) = rows.iter().position(|row| row.len() != c) {
            return Err(HoloError::ShapeViolation(format!(
                "row {bad} has {} entries, expected {c}",
                rows[bad].len()
            )));
        }
        Ok(Self {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Constant polynomial matrix.
    pub fn constant(m: &CMatrix) -> Self {
        Self::from_fn(m.rows(), m.cols(), |i, j| PolyZ::constant(m[(i, j)]))
    }

    /// `Σ_k z^k · coeffs[k]`; all coefficient matrices must share one shape.
    pub fn from_coeff_matrices(rows: usize, cols: usize, coeffs: &[CMatrix]) -> Result<Self, HoloError> {
        if let Some(bad) = coeffs.iter().find(|c| c.shape() != (rows, cols)) {
            return Err(HoloError::ShapeViolation(format!(
                "coefficient matrix {:?} in a {rows}x{cols} polynomial matrix",
                bad.shape()
            )));
        }
        Ok(Self::from_fn(rows, cols, |i, j| {
            PolyZ::new(coeffs.iter().map(|c| c[(i, j)]).collect())
        }))
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

    pub fn entry(&self, i: usize, j: usize) -> &PolyZ {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.entries[i * self.cols + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, p: PolyZ) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        self.entries[i * self.cols + j] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(PolyZ::is_zero)
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        (0..self.cols).all(|j| self.entry(i, j).is_zero())
    }

    /// Largest degree among the entries; `None` when every entry is zero.
    pub fn max_degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(PolyZ::degree).max()
    }

    /// Matrix of the `z^k` coefficients.
    pub fn coeff_matrix(&self, k: usize) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).coeff(k))
    }

    pub fn coeff_matrices(&self) -> Vec<CMatrix> {
        match self.max_degree() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|k| self.coeff_matrix(k)).collect(),
        }
    }

    pub fn eval(&self, z: Complex64) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).eval(z))
    }

    pub fn map(&self, f: impl Fn(&PolyZ) -> PolyZ) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        self.map(PolyZ::derivative)
    }

    /// Entrywise antiderivative vanishing at `z = 0`.
    pub fn antiderivative(&self) -> Self {
        self.map(PolyZ::antiderivative)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|p| p.scale(s))
    }

    pub fn snap(&self, tol: f64) -> Self {
        self.map(|p| p.snap(tol))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.entry(j, i).clone())
    }

    /// Transpose about the anti-diagonal.
    pub fn anti_transpose(&self) -> Self {
        let (r, c) = self.shape();
        Self::from_fn(c, r, |i, j| self.entry(r - 1 - j, c - 1 - i).clone())
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of bounds");
        Self::from_fn(rows, cols, |i, j| self.entry(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, src: &Self) {
        assert!(
            r0 + src.rows <= self.rows && c0 + src.cols <= self.cols,
            "block out of bounds"
        );
        for i in 0..src.rows {
            for j in 0..src.cols {
                self.set_entry(r0 + i, c0 + j, src.entry(i, j).clone());
            }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, HoloError> {
        self.check_same("add", other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, HoloError> {
        self.check_same("sub", other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, HoloError> {
        if self.cols != other.rows {
            return Err(HoloError::ShapeViolation(format!(
                "cannot multiply {:?} by {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(PolyZ::zero(), |acc, k| {
                &acc + &(self.entry(i, k) * other.entry(k, j))
            })
        }))
    }

    /// `left · self · right` with constant matrices, applied degree by degree.
    pub fn sandwich(&self, left: &CMatrix, right: &CMatrix) -> Result<Self, HoloError> {
        let coeffs = self
            .coeff_matrices()
            .iter()
            .map(|c| left.matmul(c)?.matmul(right))
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.is_empty() {
            if left.cols() != self.rows || self.cols != right.rows() {
                return Err(HoloError::ShapeViolation("sandwich shape mismatch".into()));
            }
            return Ok(Self::zeros(left.rows(), right.cols()));
        }
        Self::from_coeff_matrices(left.rows(), right.cols(), &coeffs)
    }

    /// Largest coefficient modulus over all entries.
    pub fn max_abs_coeff(&self) -> f64 {
        self.entries.iter().map(PolyZ::max_abs_coeff).fold(0.0, f64::max)
    }

    fn check_same(&self, op: &str, other: &Self) -> Result<(), HoloError> {
        if self.shape() != other.shape() {
            return Err(HoloError::ShapeViolation(format!(
                "{op}: {:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(())
    }
}

/// The ♯ operation `M ↦ J_n Mᵗ J_2` on `2 × n` data and its inverse on `n × 2` data.
pub trait Sharp: Sized {
    fn sharp(&self) -> Result<Self, HoloError>;
    fn sharp_inv(&self) -> Result<Self, HoloError>;
}

impl Sharp for CMatrix {
    fn sharp(&self) -> Result<Self, HoloError> {
        if self.rows() != 2 {
            return Err(HoloError::ShapeViolation(format!(
                "sharp expects 2 rows, got {:?}",
                self.shape()
            )));
        }
        Ok(self.anti_transpose())
    }

    fn sharp_inv(&self) -> Result<Self, HoloError> {
        if self.cols() != 2 {
            return Err(HoloError::ShapeViolation(format!(
                "sharp_inv expects 2 columns, got {:?}",
                self.shape()
            )));
        }
        Ok(self.anti_transpose())
    }
}

impl Sharp for MatPolyZ {
    fn sharp(&self) -> Result<Self, HoloError> {
        if self.rows != 2 {
            return Err(HoloError::ShapeViolation(format!(
                "sharp expects 2 rows, got {:?}",
                self.shape()
            )));
        }
        Ok(self.anti_transpose())
    }

    fn sharp_inv(&self) -> Result<Self, HoloError> {
        if self.cols != 2 {
            return Err(HoloError::ShapeViolation(format!(
                "sharp_inv expects 2 columns, got {:?}",
                self.shape()
            )));
        }
        Ok(self.anti_transpose())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{C0, C1, CI};
    use proptest::prelude::*;

    fn p(cs: &[(f64, f64)]) -> PolyZ {
        PolyZ::new(cs.iter().map(|&(a, b)| Complex64::new(a, b)).collect())
    }

    #[test]
    fn sharp_of_two_by_two() {
        let f: Vec<PolyZ> = (1..=4).map(|k| p(&[(k as f64, 0.0)])).collect();
        let m = MatPolyZ::from_rows(vec![
            vec![f[0].clone(), f[1].clone()],
            vec![f[2].clone(), f[3].clone()],
        ])
        .unwrap();
        let s = m.sharp().unwrap();
        assert_eq!(s.entry(0, 0), &f[3]);
        assert_eq!(s.entry(0, 1), &f[1]);
        assert_eq!(s.entry(1, 0), &f[2]);
        assert_eq!(s.entry(1, 1), &f[0]);
        assert!(MatPolyZ::zeros(2, 2).sharp().unwrap().is_zero());
    }

    #[test]
    fn sharp_rejects_wrong_shape() {
        assert!(CMatrix::zeros(3, 2).sharp().is_err());
        assert!(CMatrix::zeros(2, 3).sharp_inv().is_err());
        assert!(MatPolyZ::zeros(4, 4).sharp().is_err());
    }

    #[test]
    fn sharp_matches_jn_mt_j2() {
        let m = CMatrix::from_fn(2, 4, |i, j| Complex64::new(i as f64, 1.0 + j as f64));
        let via_j = &(&CMatrix::anti_identity(4) * &m.transpose()) * &CMatrix::anti_identity(2);
        assert_eq!(m.sharp().unwrap(), via_j);
    }

    #[test]
    fn eval_commutes_with_product() {
        let a = MatPolyZ::from_rows(vec![
            vec![p(&[(1.0, 0.0), (0.0, 1.0)]), p(&[(0.0, 0.0), (0.0, 0.0), (2.0, 0.0)])],
            vec![PolyZ::zero(), p(&[(0.5, -1.0)])],
        ])
        .unwrap();
        let b = a.transpose();
        let z = Complex64::new(-0.3, 0.8);
        let lhs = a.try_mul(&b).unwrap().eval(z);
        let rhs = &a.eval(z) * &b.eval(z);
        assert!(lhs.dist(&rhs).unwrap() < 1e-14);
        assert!(a.try_mul(&MatPolyZ::zeros(3, 3)).is_err());
    }

    #[test]
    fn sandwich_by_constants() {
        let a = MatPolyZ::from_rows(vec![vec![PolyZ::z(), PolyZ::one()], vec![PolyZ::zero(), PolyZ::z()]])
            .unwrap();
        let l = CMatrix::from_rows(&[[C1, CI], [C0, C1]]);
        let r = CMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        let s = a.sandwich(&l, &r).unwrap();
        let z = Complex64::new(0.7, 0.1);
        let expected = &(&l * &a.eval(z)) * &r;
        assert!(s.eval(z).dist(&expected).unwrap() < 1e-15);
        assert_eq!(MatPolyZ::zeros(2, 2).sandwich(&l, &r).unwrap(), MatPolyZ::zeros(2, 2));
    }

    #[test]
    fn coeff_matrices_round_trip() {
        let a = MatPolyZ::from_rows(vec![vec![p(&[(1.0, 2.0), (0.0, 0.0), (3.0, 0.0)]), PolyZ::z()]])
            .unwrap();
        let cs = a.coeff_matrices();
        assert_eq!(cs.len(), 3);
        assert_eq!(MatPolyZ::from_coeff_matrices(1, 2, &cs).unwrap(), a);
    }

    fn small_matpoly(rows: usize, cols: usize) -> impl Strategy<Value = MatPolyZ> {
        prop::collection::vec(prop::collection::vec((-3i32..=3, -3i32..=3), 0..4), rows * cols).prop_map(
            move |entries| {
                let mut it = entries.into_iter();
                MatPolyZ::from_fn(rows, cols, |_, _| {
                    PolyZ::new(
                        it.next()
                            .unwrap()
                            .into_iter()
                            .map(|(a, b)| Complex64::new(a as f64, b as f64))
                            .collect(),
                    )
                })
            },
        )
    }

    proptest! {
        #[test]
        fn sharp_round_trip(m in small_matpoly(2, 4)) {
            prop_assert_eq!(m.sharp().unwrap().sharp_inv().unwrap(), m.clone());
        }

        #[test]
        fn derivative_of_antiderivative(m in small_matpoly(2, 2)) {
            let back = m.antiderivative().derivative();
            let z = Complex64::new(0.4, -0.2);
            prop_assert!(back.eval(z).dist(&m.eval(z)).unwrap() < 1e-13);
            prop_assert!(m.antiderivative().eval(C0).is_zero());
        }
    }
}
