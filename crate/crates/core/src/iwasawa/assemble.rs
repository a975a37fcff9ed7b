use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{factor_l0, solve_point, IwasawaError, IwasawaPointFactors, L11Branch};
use crate::algebra::{
    membership_residual, nilpotent_inverse, sigma_twist_residual, tau_hat, CMatrix, ConstantSet, GroupLaw,
    LaurentLoop,
};
use crate::frame::MeromorphicFrame;

/// `W = I + λ⁻¹ W₁(u) + λ⁻² W₂(ĝ)`.
pub fn w_loop(f: &IwasawaPointFactors, c: &ConstantSet) -> LaurentLoop {
    LaurentLoop::from_coeffs(
        c.size(),
        [
            (0, CMatrix::identity(c.size())),
            (-1, c.nilpotent_block(&f.u)),
            (-2, c.corner_block(&f.g_hat)),
        ],
    )
    .expect("blocks are sized from the constant set")
}

/// `F̃ = H τ̂(W) L₀⁻¹` and `F̃₊ = L₀ τ̂(W)⁻¹`, so that `F̃ F̃₊ = H`.
pub fn assemble_frame(
    h: &LaurentLoop,
    f: &IwasawaPointFactors,
    l0: &CMatrix,
    c: &ConstantSet,
) -> Result<(LaurentLoop, LaurentLoop), IwasawaError> {
    let w = w_loop(f, c);
    let tau_w = tau_hat(&w, c);
    let tau_w_inv = tau_hat(&nilpotent_inverse(&w, c)?, c);
    let l0_inv = l0.inverse()?;
    let ft = h.try_mul(&tau_w)?.mul_const_right(&l0_inv)?;
    let fplus = tau_w_inv.mul_const_left(l0)?;
    Ok((ft, fplus))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FrameResiduals {
    /// `max_λ ‖F̃ F̃₊ - H‖_F`.
    pub iwasawa: f64,
    /// Largest coefficient of `τ̂(F̃) - F̃`.
    pub reality: f64,
    /// `max_λ ‖F̃ᵗ J F̃ - J‖_F`.
    pub membership: f64,
    /// Norm of the negative-degree part of `F̃₊`.
    pub plus_positivity: f64,
    /// Norm of the coefficients of `F̃` outside degrees `[-2, 2]`.
    pub degree_bound: f64,
    /// `max_λ ‖F̃(-λ) - D₀ F̃(λ) D₀⁻¹‖_F`.
    pub twist: f64,
}

impl FrameResiduals {
    /// Componentwise maximum.
    pub fn max(self, o: Self) -> Self {
        Self {
            iwasawa: self.iwasawa.max(o.iwasawa),
            reality: self.reality.max(o.reality),
            membership: self.membership.max(o.membership),
            plus_positivity: self.plus_positivity.max(o.plus_positivity),
            degree_bound: self.degree_bound.max(o.degree_bound),
            twist: self.twist.max(o.twist),
        }
    }
}

pub fn frame_residuals(
    ft: &LaurentLoop,
    fplus: &LaurentLoop,
    h: &LaurentLoop,
    c: &ConstantSet,
    lambdas: &[Complex64],
) -> Result<FrameResiduals, IwasawaError> {
    let product = ft.try_mul(fplus)?;
    let mut iwasawa: f64 = 0.0;
    let mut membership: f64 = 0.0;
    for &lambda in lambdas {
        iwasawa = iwasawa.max(product.eval(lambda).dist(&h.eval(lambda))?);
        membership = membership.max(membership_residual(&ft.eval(lambda), GroupLaw::G2m));
    }
    Ok(FrameResiduals {
        iwasawa,
        reality: tau_hat(ft, c).max_coeff_dist(ft)?,
        membership,
        plus_positivity: fplus.norm_outside(0, i32::MAX),
        degree_bound: ft.norm_outside(-2, 2),
        twist: sigma_twist_residual(ft, c, lambdas),
    })
}

/// Everything computed at one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSolution {
    pub z: Complex64,
    pub factors: IwasawaPointFactors,
    pub l0: CMatrix,
    pub h: LaurentLoop,
    pub ftilde: LaurentLoop,
    pub fplus: LaurentLoop,
}

/// Solves, factors and assembles the extended frame at `z`.
pub fn solve_frame_at(
    frame: &MeromorphicFrame,
    z: Complex64,
    c: &ConstantSet,
    invert_tol: f64,
    branch: L11Branch,
) -> Result<PointSolution, IwasawaError> {
    let factors = solve_point(&frame.f.eval(z), &frame.g.eval(z), c, invert_tol)?;
    let l0 = factor_l0(&factors, c, branch)?;
    let h = frame.h_loop(z, c);
    let (ftilde, fplus) = assemble_frame(&h, &factors, &l0, c)?;
    Ok(PointSolution {
        z,
        factors,
        l0,
        h,
        ftilde,
        fplus,
    })
}
