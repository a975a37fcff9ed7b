use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{IwasawaError, IwasawaPointFactors};
use crate::algebra::{AlgebraError, CMatrix, ConstantSet, C0, C1};

/// Tolerance on `|a₁₁|² = 1` and `a₂₂ d₁₁ = 1`.
pub const CORNER_TOL: f64 = 1e-8;
/// Relative Hermitian tolerance for `q`.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Bound on `‖τ̂(L₀)⁻¹ L₀ - W₀‖_F`, relative to `max(1, ‖W₀‖_F)`.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchMode {
    /// Principal square root for `l₁₁`.
    #[default]
    Principal,
    /// Sign of `l₁₁` chosen closest to a neighbouring point.
    Continued,
}

/// Branch rule for `l₁₁ = √a₁₁` at a single point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum L11Branch {
    Principal,
    /// Pick the square root nearest to this value.
    NearestTo(Complex64),
}

/// `L₀ = [[l₁, 0, l₂], [0, l₀, 0], [0, 0, l₄]]` with `τ̂(L₀)⁻¹ L₀ = W₀`.
///
/// The free entry `l₁₃` is set to zero, which also zeroes `l₁₄` and `l₂₄`. The middle block
/// is the upper Cholesky factor of `q`, so `q = conj(l₀)ᵗ l₀`.
pub fn factor_l0(f: &IwasawaPointFactors, c: &ConstantSet, branch: L11Branch) -> Result<CMatrix, IwasawaError> {
    let (a, d) = (&f.a, &f.d);
    let a11 = a[(0, 0)];
    if (a11.norm_sqr() - 1.0).abs() > CORNER_TOL {
        return Err(IwasawaError::StructureViolation(format!("|a11|^2 = {} != 1", a11.norm_sqr())));
    }
    let a22d11 = a[(1, 1)] * d[(0, 0)];
    if (a22d11 - C1).norm() > CORNER_TOL {
        return Err(IwasawaError::StructureViolation(format!("a22 d11 = {a22d11} != 1")));
    }

    let root = a11.sqrt();
    let l11 = match branch {
        L11Branch::Principal => root,
        L11Branch::NearestTo(prev) => {
            if (root - prev).norm() <= (-root - prev).norm() {
                root
            } else {
                -root
            }
        }
    };
    let l12 = a[(0, 1)] / l11.conj();
    let l22 = a[(1, 1)].sqrt();
    let l13 = C0;
    let l14 = -l12 * l13 / l11;
    let l24 = -l13 * l22 / l11;
    let l33 = l22.inv();
    let l34 = -l12 / (l11 * l22);
    let l44 = l11.inv();

    let l0 = f.q.cholesky_upper(HERMITIAN_TOL).map_err(|e| match e {
        AlgebraError::NotHermitian(r) => IwasawaError::HermitianityViolation(r),
        AlgebraError::NotPositiveDefinite { pivot, value } => IwasawaError::NotPositiveDefinite { pivot, value },
        other => IwasawaError::Algebra(other),
    })?;

    let size = c.size();
    let mut l = CMatrix::zeros(size, size);
    l[(0, 0)] = l11;
    l[(0, 1)] = l12;
    l[(0, size - 2)] = l13;
    l[(0, size - 1)] = l14;
    l[(1, 1)] = l22;
    l[(1, size - 1)] = l24;
    l[(size - 2, size - 2)] = l33;
    l[(size - 2, size - 1)] = l34;
    l[(size - 1, size - 1)] = l44;
    l.set_block(2, 2, &l0);

    let rebuilt = &(&(&c.jhat * &l.adjoint()) * &c.jhat) * &l;
    let err = rebuilt.dist(&f.w0)?;
    if err > RECONSTRUCTION_TOL * f.w0.norm_fro().max(1.0) {
        return Err(IwasawaError::StructureViolation(format!(
            "tau_hat(L0)^-1 L0 misses W0 by {err:e}"
        )));
    }
    Ok(l)
}
