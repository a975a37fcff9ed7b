//! Normalized potential of a frame with a constant lightlike vector, assembled from the
//! holomorphic parts of its Maurer–Cartan blocks.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::f01::{f01_closed_form, QuadratureConfig};
use super::FrameError;
use crate::algebra::{CMatrix, CI};
use crate::holo::{MatPolyZ, PolyZ};

/// Which square root of `-1` links the last two rows of `B₁`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KBranch {
    /// Fourth row equals `i` times the third.
    #[default]
    PlusI,
    MinusI,
}

impl KBranch {
    pub fn unit(self) -> Complex64 {
        match self {
            KBranch::PlusI => CI,
            KBranch::MinusI => -CI,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WuConfig {
    /// Largest RK4 step along `[0, z]` for `F₀₂`.
    pub rk4_step: f64,
    pub pattern_tol: f64,
    pub branch: KBranch,
    pub quadrature: QuadratureConfig,
}

impl Default for WuConfig {
    fn default() -> Self {
        Self {
            rk4_step: 1e-3,
            pattern_tol: 1e-8,
            branch: KBranch::PlusI,
            quadrature: QuadratureConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WuReport {
    pub z_samples: Vec<Complex64>,
    /// `B̂₁(z) = F₀₁(z) B̃₁(z) F₀₂(z)⁻¹` at each sample.
    pub bhat: Vec<CMatrix>,
    /// Largest relative deviation from the `(r₁, -r₁, r₃, ±i r₃)` row pattern.
    pub pattern_residual: f64,
}

/// Relative deviation of a `4 × n` block from rows `(r₁, -r₁, r₃, u·r₃)`.
pub fn lightlike_row_pattern_residual(b: &CMatrix, unit: Complex64) -> f64 {
    let defect: f64 = (0..b.cols())
        .map(|j| (b[(1, j)] + b[(0, j)]).norm_sqr() + (b[(3, j)] - unit * b[(2, j)]).norm_sqr())
        .sum();
    defect.sqrt() / b.norm_fro().max(1.0)
}

/// Solves `F₀₂⁻¹ dF₀₂ = δ₂ dz`, `F₀₂(0) = I`, by classical RK4 on the segment `[0, z]`.
pub fn integrate_f02(delta2: &dyn Fn(Complex64) -> CMatrix, n: usize, z: Complex64, max_step: f64) -> CMatrix {
    let steps = ((z.norm() / max_step).ceil() as usize).max(1);
    let dt = 1.0 / steps as f64;
    let rhs = |f: &CMatrix, t: f64| (f * &delta2(z * t)).scale(z);
    let mut f = CMatrix::identity(n);
    for k in 0..steps {
        let t = k as f64 * dt;
        let half = Complex64::new(dt / 2.0, 0.0);
        let k1 = rhs(&f, t);
        let k2 = rhs(&(&f + &k1.scale(half)), t + dt / 2.0);
        let k3 = rhs(&(&f + &k2.scale(half)), t + dt / 2.0);
        let k4 = rhs(&(&f + &k3.scale(dt.into())), t + dt);
        let incr = &(&(&k1 + &k2.scale(2.0.into())) + &k3.scale(2.0.into())) + &k4;
        f = &f + &incr.scale((dt / 6.0).into());
    }
    f
}

/// Samples of `B̂₁` built from the holomorphic parts `a₁₃, a₁₄, a₃₄`, `δ₂` and `B̃₁`.
pub fn wu_potential(
    a13: &PolyZ,
    a14: &PolyZ,
    a34: &PolyZ,
    delta2: &dyn Fn(Complex64) -> CMatrix,
    b1_hol: &MatPolyZ,
    z_samples: &[Complex64],
    cfg: &WuConfig,
) -> Result<WuReport, FrameError> {
    if b1_hol.rows() != 4 {
        return Err(FrameError::ShapeViolation(format!(
            "B̃₁ must have 4 rows, got {:?}",
            b1_hol.shape()
        )));
    }
    let n = b1_hol.cols();
    let unit = cfg.branch.unit();
    for (k, coeff) in b1_hol.coeff_matrices().iter().enumerate() {
        let r = lightlike_row_pattern_residual(coeff, unit);
        if r > 1e-12 {
            return Err(FrameError::ShapeViolation(format!(
                "B̃₁ coefficient of z^{k} is off the lightlike column pattern ({r:e})"
            )));
        }
    }
    let mut bhat = Vec::with_capacity(z_samples.len());
    let mut worst: f64 = 0.0;
    for &z in z_samples {
        let d = delta2(z);
        if d.shape() != (n, n) {
            return Err(FrameError::ShapeViolation(format!(
                "δ₂ must be {n} x {n}, got {:?}",
                d.shape()
            )));
        }
        let skew = (&d + &d.transpose()).norm_fro();
        if skew > 1e-12 * (1.0 + d.norm_fro()) {
            return Err(FrameError::ShapeViolation(format!(
                "δ₂ is not skew-symmetric at z = {z} ({skew:e})"
            )));
        }
        let f01 = f01_closed_form(a13, a14, a34, z, &cfg.quadrature)?;
        let f02 = integrate_f02(delta2, n, z, cfg.rk4_step);
        let f02_inv = f02.inverse()?;
        let b = &(&f01 * &b1_hol.eval(z)) * &f02_inv;
        worst = worst.max(lightlike_row_pattern_residual(&b, unit));
        bhat.push(b);
    }
    if worst > cfg.pattern_tol {
        return Err(FrameError::ShapeViolation(format!(
            "B̂₁ leaves the lightlike row pattern (residual {worst:e} > {:e})",
            cfg.pattern_tol
        )));
    }
    Ok(WuReport {
        z_samples: z_samples.to_vec(),
        bhat,
        pattern_residual: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{C0, C1};

    fn zero_delta(n: usize) -> impl Fn(Complex64) -> CMatrix {
        move |_| CMatrix::zeros(n, n)
    }

    fn samples() -> Vec<Complex64> {
        [0.2, 0.5, 1.0].iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    fn unit_column() -> MatPolyZ {
        let s = std::f64::consts::SQRT_2;
        MatPolyZ::constant(&CMatrix::from_rows(&[
            [Complex64::new(s, 0.0)],
            [Complex64::new(-s, 0.0)],
            [-C1],
            [-CI],
        ]))
    }

    #[test]
    fn zero_inputs() {
        let z = PolyZ::zero();
        let r = wu_potential(&z, &z, &z, &zero_delta(2), &MatPolyZ::zeros(4, 2), &samples(), &WuConfig::default())
            .unwrap();
        assert!(r.bhat.iter().all(CMatrix::is_zero));
    }

    #[test]
    fn identity_frames_keep_b1() {
        let z = PolyZ::zero();
        let b = unit_column();
        let r = wu_potential(&z, &z, &z, &zero_delta(1), &b, &samples(), &WuConfig::default()).unwrap();
        for m in &r.bhat {
            assert!(m.dist(&b.eval(C0)).unwrap() < 1e-15);
        }
    }

    #[test]
    fn a13_keeps_pattern() {
        let z = PolyZ::zero();
        let r = wu_potential(&PolyZ::one(), &z, &z, &zero_delta(1), &unit_column(), &samples(), &WuConfig::default())
            .unwrap();
        assert!(r.pattern_residual < 1e-14);
        // Row 1 at z: √2 + (b₁₃ + i b₁₄)·(-1) with b₁₃ = z, b₁₄ = 0.
        for (b, z) in r.bhat.iter().zip(samples()) {
            assert!((b[(0, 0)] - (Complex64::new(std::f64::consts::SQRT_2, 0.0) - z)).norm() < 1e-14);
        }
    }

    #[test]
    fn rotating_delta2_with_rk4_step_halving() {
        // δ₂ = z·[[0, 1], [-1, 0]]; F₀₂ is the rotation by z²/2.
        let delta = |z: Complex64| CMatrix::from_rows(&[[C0, z], [-z, C0]]);
        let b = MatPolyZ::from_fn(4, 2, |i, j| {
            let col = unit_column();
            col.entry(i, 0).scale(Complex64::new(1.0 + j as f64, 0.0))
        });
        let a13 = PolyZ::from_real(&[0.3, 1.0]);
        let a34 = PolyZ::from_real(&[0.5]);
        let z = PolyZ::zero();
        let zs = vec![Complex64::new(0.7, 0.3)];
        let coarse = wu_potential(&a13, &z, &a34, &delta, &b, &zs, &WuConfig { rk4_step: 1e-3, ..Default::default() })
            .unwrap();
        let fine = wu_potential(&a13, &z, &a34, &delta, &b, &zs, &WuConfig { rk4_step: 5e-4, ..Default::default() })
            .unwrap();
        assert!(coarse.bhat[0].dist(&fine.bhat[0]).unwrap() < 1e-8);
        let w = zs[0] * zs[0] * 0.5;
        let rot = CMatrix::from_rows(&[[w.cos(), w.sin()], [-w.sin(), w.cos()]]);
        let f02 = integrate_f02(&delta, 2, zs[0], 1e-3);
        assert!(f02.dist(&rot).unwrap() < 1e-12);
    }

    #[test]
    fn branch_mismatch_is_rejected() {
        let z = PolyZ::zero();
        let cfg = WuConfig {
            branch: KBranch::MinusI,
            ..Default::default()
        };
        let err = wu_potential(&z, &z, &z, &zero_delta(1), &unit_column(), &samples(), &cfg).unwrap_err();
        assert!(matches!(err, FrameError::ShapeViolation(_)));
    }

    #[test]
    fn non_skew_delta_is_rejected() {
        let z = PolyZ::zero();
        let delta = |_: Complex64| CMatrix::identity(1);
        let err = wu_potential(&z, &z, &z, &delta, &unit_column(), &samples(), &WuConfig::default()).unwrap_err();
        assert!(matches!(err, FrameError::ShapeViolation(_)));
    }
}
