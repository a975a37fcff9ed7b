//! The fixed matrices of the `G(2m, ℂ)` picture and the isometry from `SO(1, 2m-1)`.

use num_complex::Complex64;

use super::matrix::{CMatrix, C0, C1, CI};
use super::AlgebraError;

/// Tolerance for the construction-time identity `P̃ᵗ · I_{1,2m-1} · P̃ = J`.
pub const PTILDE_CHECK_TOL: f64 = 1e-14;

/// Constant matrices for a given `m` (matrix size `2m`).
#[derive(Clone, Debug)]
pub struct ConstantSet {
    pub m: usize,
    /// Anti-diagonal ones; the bilinear form defining `G(2m, ℂ)`.
    pub j: CMatrix,
    /// `diag(1, J_{2m-2}, 1)`; the reality involution is `F ↦ S F̄ S`.
    pub s: CMatrix,
    /// `S · J`, used in `τ̂(F)⁻¹ = Ĵ F̄ᵗ Ĵ`.
    pub jhat: CMatrix,
    /// `diag(-1, 1, …, 1)` of size `2m`.
    pub i1q: CMatrix,
    /// `diag(-I_4, I_{2m-4})`.
    pub d: CMatrix,
    /// `P̃⁻¹ D P̃ = diag(-1, -1, I_{2m-4}, -1, -1)`.
    pub d0: CMatrix,
    pub ptilde: CMatrix,
    pub ptilde_inv: CMatrix,
    pub e1: CMatrix,
    pub e2: CMatrix,
    pub e3: CMatrix,
    pub e4: CMatrix,
}

/// `diag(-1, 1, 1, 1)`.
pub fn i13() -> CMatrix {
    CMatrix::real_diag(&[-1.0, 1.0, 1.0, 1.0])
}

/// `diag(-1, 1, …, 1)` of size `n`.
pub fn lorentz_form(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| match (i, j) {
        (0, 0) => -C1,
        (i, j) if i == j => C1,
        _ => C0,
    })
}

pub fn build_constants(m: usize) -> Result<ConstantSet, AlgebraError> {
    if m < 3 {
        return Err(AlgebraError::DimensionTooSmall(m));
    }
    let n = 2 * m;
    let j = CMatrix::anti_identity(n);
    let mut s = CMatrix::zeros(n, n);
    s[(0, 0)] = C1;
    s[(n - 1, n - 1)] = C1;
    s.set_block(1, 1, &CMatrix::anti_identity(n - 2));
    let jhat = &s * &j;
    let i1q = lorentz_form(n);
    let d = CMatrix::real_diag(
        &(0..n)
            .map(|i| if i < 4 { -1.0 } else { 1.0 })
            .collect::<Vec<_>>(),
    );
    let d0 = CMatrix::real_diag(
        &(0..n)
            .map(|i| if i < 2 || i >= n - 2 { -1.0 } else { 1.0 })
            .collect::<Vec<_>>(),
    );

    let ptilde = build_ptilde(m);
    // P̃ is unitary.
    let ptilde_inv = ptilde.adjoint();

    let check = (&(&ptilde.transpose() * &i1q) * &ptilde).dist(&j)?;
    if check >= PTILDE_CHECK_TOL {
        return Err(AlgebraError::ConstructionCheck {
            what: "Ptilde^t I_{1,2m-1} Ptilde = J",
            residual: check,
        });
    }
    let unitary = (&ptilde * &ptilde_inv).dist(&CMatrix::identity(n))?;
    if unitary >= PTILDE_CHECK_TOL {
        return Err(AlgebraError::ConstructionCheck {
            what: "Ptilde unitary",
            residual: unitary,
        });
    }

    let e1 = CMatrix::from_real_rows(&[[0.0, 0.0], [0.0, 1.0]]);
    let e2 = CMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
    let e3 = e2.transpose();
    let e4 = CMatrix::from_real_rows(&[[1.0, 0.0], [0.0, 0.0]]);

    Ok(ConstantSet {
        m,
        j,
        s,
        jhat,
        i1q,
        d,
        d0,
        ptilde,
        ptilde_inv,
        e1,
        e2,
        e3,
        e4,
    })
}

/// Columns 1 and 2m carry `(1, 1)/√2` and `(-1, 1)/√2` in rows 1–2; for `k = 2..=m`,
/// columns `k` and `2m+1-k` carry `(-i, 1)/√2` and `(i, 1)/√2` in rows `2k-1, 2k`
/// (all 1-based).
fn build_ptilde(m: usize) -> CMatrix {
    let n = 2 * m;
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut p = CMatrix::zeros(n, n);
    p[(0, 0)] = h;
    p[(1, 0)] = h;
    p[(0, n - 1)] = -h;
    p[(1, n - 1)] = h;
    for k in 2..=m {
        let r = 2 * k - 2;
        let (c1, c2) = (k - 1, n - k);
        p[(r, c1)] = -CI * h;
        p[(r + 1, c1)] = h;
        p[(r, c2)] = CI * h;
        p[(r + 1, c2)] = h;
    }
    p
}

impl ConstantSet {
    /// Matrix size `2m`.
    pub fn size(&self) -> usize {
        2 * self.m
    }

    /// Width of the middle block, `2m - 4`.
    pub fn n_mid(&self) -> usize {
        2 * self.m - 4
    }

    /// `[[0, x, 0], [0, 0, -x♯], [0, 0, 0]]` in the `(2, 2m-4, 2)` partition.
    pub fn nilpotent_block(&self, x: &CMatrix) -> CMatrix {
        assert_eq!(x.shape(), (2, self.n_mid()), "nilpotent_block expects 2 x (2m-4)");
        let n = self.size();
        let mut out = CMatrix::zeros(n, n);
        out.set_block(0, 2, x);
        out.set_block(2, n - 2, &(-&x.anti_transpose()));
        out
    }

    /// `[[0, 0, x], [0, 0, 0], [0, 0, 0]]` in the `(2, 2m-4, 2)` partition.
    pub fn corner_block(&self, x: &CMatrix) -> CMatrix {
        assert_eq!(x.shape(), (2, 2), "corner_block expects 2 x 2");
        let n = self.size();
        let mut out = CMatrix::zeros(n, n);
        out.set_block(0, n - 2, x);
        out
    }

    /// Index ranges of the `(2, 2m-4, 2)` partition.
    pub fn partition(&self) -> [std::ops::Range<usize>; 3] {
        let n = self.size();
        [0..2, 2..n - 2, n - 2..n]
    }
}

impl CMatrix {
    /// `J_cols · Mᵗ · J_rows`: transpose about the anti-diagonal.
    pub fn anti_transpose(&self) -> CMatrix {
        let (r, c) = self.shape();
        CMatrix::from_fn(c, r, |i, j| self[(r - 1 - j, c - 1 - i)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn too_small() {
        assert_eq!(build_constants(2).unwrap_err(), AlgebraError::DimensionTooSmall(2));
    }

    #[test]
    fn j6_is_anti_diagonal() {
        let c = build_constants(3).unwrap();
        for k in 0..6 {
            for l in 0..6 {
                let expected = if k + l == 5 { C1 } else { C0 };
                assert_eq!(c.j[(k, l)], expected);
            }
        }
    }

    #[test]
    fn jhat_blocks() {
        let c = build_constants(3).unwrap();
        assert_eq!(c.jhat.block(0, 0, 2, 2), c.e1);
        assert_eq!(c.jhat.block(0, 4, 2, 2), c.e2);
        assert_eq!(c.jhat.block(4, 0, 2, 2), c.e3);
        assert_eq!(c.jhat.block(4, 4, 2, 2), c.e4);
        assert_eq!(c.jhat.block(2, 2, 2, 2), CMatrix::identity(2));
        assert!(c.jhat.block(0, 2, 2, 2).is_zero());
        assert!(c.jhat.block(2, 0, 2, 2).is_zero());
    }

    #[test]
    fn ptilde_identity_all_m() {
        for m in 3..=7 {
            let c = build_constants(m).unwrap();
            let r = (&(&c.ptilde.transpose() * &c.i1q) * &c.ptilde).dist(&c.j).unwrap();
            assert!(r < PTILDE_CHECK_TOL, "m={m}: {r}");
        }
    }

    #[test]
    fn d0_is_conjugated_d() {
        for m in 3..=5 {
            let c = build_constants(m).unwrap();
            let d0 = &(&c.ptilde_inv * &c.d) * &c.ptilde;
            assert!(d0.dist(&c.d0).unwrap() < 1e-15);
        }
    }

    #[test]
    fn conj_ptilde_is_ptilde_s() {
        let c = build_constants(4).unwrap();
        assert!(c.ptilde.conj().dist(&(&c.ptilde * &c.s)).unwrap() < 1e-16);
    }

    #[test]
    fn anti_transpose_m3() {
        let f = CMatrix::from_real_rows(&[[1.0, 2.0], [3.0, 4.0]]);
        assert_eq!(f.anti_transpose(), CMatrix::from_real_rows(&[[4.0, 2.0], [3.0, 1.0]]));
        let g = CMatrix::from_real_rows(&[[1.0, 2.0, 3.0, 4.0], [5.0, 6.0, 7.0, 8.0]]);
        assert_eq!(g.anti_transpose().anti_transpose(), g);
        let jn = CMatrix::anti_identity(4);
        let j2 = CMatrix::anti_identity(2);
        assert_eq!(g.anti_transpose(), &(&jn * &g.transpose()) * &j2);
    }
}
