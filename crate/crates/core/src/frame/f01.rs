//! Closed-form solution of `F⁻¹dF = A₁dz` for the 4×4 block with a lightlike null direction.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::FrameError;
use crate::algebra::{i13, CMatrix, C0, C1};
use crate::holo::PolyZ;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    /// Requested absolute error per real integral.
    pub target: f64,
    /// Error estimates above this fail the evaluation.
    pub max_error: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            target: 1e-14,
            max_error: 1e-10,
        }
    }
}

/// `A₁(z)` with rows `(0, 0, a₁₃, a₁₄)`, `(0, 0, -a₁₃, -a₁₄)`, `(a₁₃, a₁₃, 0, a₃₄)`,
/// `(a₁₄, a₁₄, -a₃₄, 0)`.
pub fn a1_matrix(a13: Complex64, a14: Complex64, a34: Complex64) -> CMatrix {
    CMatrix::from_rows(&[
        [C0, C0, a13, a14],
        [C0, C0, -a13, -a14],
        [a13, a13, C0, a34],
        [a14, a14, -a34, C0],
    ])
}

/// `F₀₁(z) = F̂(b₁₃, b₁₄) · diag(1, 1, R(φ))`.
///
/// `φ = ∫₀ᶻ a₃₄` is exact. `b₁₃ = ∫(a₁₃ cos φ + a₁₄ sin φ)` and `b₁₄ = ∫(-a₁₃ sin φ + a₁₄ cos φ)`
/// are exact antiderivatives when `a₃₄ = 0`, and are integrated along `[0, z]` otherwise.
pub fn f01_closed_form(
    a13: &PolyZ,
    a14: &PolyZ,
    a34: &PolyZ,
    z: Complex64,
    quad: &QuadratureConfig,
) -> Result<CMatrix, FrameError> {
    let phi_poly = a34.antiderivative();
    let phi = phi_poly.eval(z);
    let (b13, b14) = if a34.is_zero() {
        (a13.antiderivative().eval(z), a14.antiderivative().eval(z))
    } else {
        let integrand = |w: Complex64| {
            let p = phi_poly.eval(w);
            let (s, c) = (p.sin(), p.cos());
            let (x, y) = (a13.eval(w), a14.eval(w));
            (x * c + y * s, -x * s + y * c)
        };
        (
            segment_integral(|w| integrand(w).0, z, quad)?,
            segment_integral(|w| integrand(w).1, z, quad)?,
        )
    };
    Ok(&f01_hat(b13, b14) * &rotation_block(phi))
}

fn f01_hat(b13: Complex64, b14: Complex64) -> CMatrix {
    let s = (b13 * b13 + b14 * b14) * 0.5;
    CMatrix::from_rows(&[
        [C1 + s, s, b13, b14],
        [-s, C1 - s, -b13, -b14],
        [b13, b13, C1, C0],
        [b14, b14, C0, C1],
    ])
}

fn rotation_block(phi: Complex64) -> CMatrix {
    let (s, c) = (phi.sin(), phi.cos());
    CMatrix::from_rows(&[
        [C1, C0, C0, C0],
        [C0, C1, C0, C0],
        [C0, C0, c, s],
        [C0, C0, -s, c],
    ])
}

/// `∫₀ᶻ h(w) dw` along the straight segment, integrating real and imaginary parts separately.
fn segment_integral(
    h: impl Fn(Complex64) -> Complex64,
    z: Complex64,
    quad: &QuadratureConfig,
) -> Result<Complex64, FrameError> {
    let re = quadrature::double_exponential::integrate(|t| (h(z * t) * z).re, 0.0, 1.0, quad.target);
    let im = quadrature::double_exponential::integrate(|t| (h(z * t) * z).im, 0.0, 1.0, quad.target);
    let estimate = re.error_estimate.hypot(im.error_estimate);
    if !(estimate <= quad.max_error) {
        return Err(FrameError::QuadratureFailure {
            estimate,
            tol: quad.max_error,
        });
    }
    Ok(Complex64::new(re.integral, im.integral))
}

/// `‖F⁻¹ ∂_z F - A₁(z)‖_F` with a Richardson-extrapolated central difference of step `h`.
///
/// `F` is holomorphic, so the derivative is taken along the real direction.
pub fn f01_ode_residual(
    a13: &PolyZ,
    a14: &PolyZ,
    a34: &PolyZ,
    z: Complex64,
    h: f64,
    quad: &QuadratureConfig,
) -> Result<f64, FrameError> {
    let f = |w: Complex64| f01_closed_form(a13, a14, a34, w, quad);
    let central = |step: f64| -> Result<CMatrix, FrameError> {
        let d = Complex64::new(step, 0.0);
        Ok((&f(z + d)? - &f(z - d)?).scale(Complex64::new(0.5 / step, 0.0)))
    };
    let coarse = central(h)?;
    let fine = central(h / 2.0)?;
    let deriv = (&fine.scale(Complex64::new(4.0, 0.0)) - &coarse).scale(Complex64::new(1.0 / 3.0, 0.0));
    let fz = f(z)?;
    let form = i13();
    let f_inv = &(&form * &fz.transpose()) * &form;
    let a1 = a1_matrix(a13.eval(z), a14.eval(z), a34.eval(z));
    Ok((&f_inv * &deriv).dist(&a1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{membership_residual, GroupLaw};
    use std::f64::consts::FRAC_PI_2;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn zero_data_is_identity() {
        let z = PolyZ::zero();
        let f = f01_closed_form(&z, &z, &z, Complex64::new(0.4, 0.9), &cfg()).unwrap();
        assert_eq!(f, CMatrix::identity(4));
    }

    #[test]
    fn constant_a13_at_one() {
        let f = f01_closed_form(&PolyZ::one(), &PolyZ::zero(), &PolyZ::zero(), C1, &cfg()).unwrap();
        let expected = CMatrix::from_real_rows(&[
            [1.5, 0.5, 1.0, 0.0],
            [-0.5, 0.5, -1.0, 0.0],
            [1.0, 1.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]);
        assert!(f.dist(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn pure_rotation() {
        let z = Complex64::new(FRAC_PI_2, 0.0);
        let f = f01_closed_form(&PolyZ::zero(), &PolyZ::zero(), &PolyZ::one(), z, &cfg()).unwrap();
        let expected = CMatrix::from_real_rows(&[
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0, 0.0],
        ]);
        assert!(f.dist(&expected).unwrap() < 1e-15);
    }

    /// Independent reference: classical RK4 on `F' = F A₁` along the segment.
    fn rk4_reference(a13: &PolyZ, a14: &PolyZ, a34: &PolyZ, z: Complex64, steps: usize) -> CMatrix {
        let a = |w: Complex64| a1_matrix(a13.eval(w), a14.eval(w), a34.eval(w)).scale(z);
        let dt = 1.0 / steps as f64;
        let mut f = CMatrix::identity(4);
        for k in 0..steps {
            let t = k as f64 * dt;
            let w = |s: f64| z * s;
            let k1 = &f * &a(w(t));
            let k2 = &(&f + &k1.scale((dt / 2.0).into())) * &a(w(t + dt / 2.0));
            let k3 = &(&f + &k2.scale((dt / 2.0).into())) * &a(w(t + dt / 2.0));
            let k4 = &(&f + &k3.scale(dt.into())) * &a(w(t + dt));
            let incr = &(&(&k1 + &k2.scale(2.0.into())) + &k3.scale(2.0.into())) + &k4;
            f = &f + &incr.scale((dt / 6.0).into());
        }
        f
    }

    #[test]
    fn matches_rk4_with_rotation() {
        let a13 = PolyZ::new(vec![Complex64::new(0.5, -0.2), Complex64::new(1.0, 0.3)]);
        let a14 = PolyZ::from_real(&[0.0, 0.0, -0.7]);
        let a34 = PolyZ::new(vec![Complex64::new(0.8, 0.1), Complex64::new(0.0, 0.4)]);
        let z = Complex64::new(0.6, -0.4);
        let f = f01_closed_form(&a13, &a14, &a34, z, &cfg()).unwrap();
        let r = rk4_reference(&a13, &a14, &a34, z, 400);
        assert!(f.dist(&r).unwrap() < 1e-10);
        assert!(membership_residual(&f, GroupLaw::So1q) < 1e-12);
        assert!(f01_ode_residual(&a13, &a14, &a34, z, 1e-3, &cfg()).unwrap() < 1e-8);
    }

    #[test]
    fn impossible_quadrature_target_fails() {
        let strict = QuadratureConfig {
            target: 1e-14,
            max_error: 0.0,
        };
        let p = PolyZ::from_real(&[0.0, 3.0, 1.0]);
        let err = f01_closed_form(&p, &p, &p, Complex64::new(1.5, 0.5), &strict).unwrap_err();
        assert!(matches!(err, FrameError::QuadratureFailure { .. }));
    }
}
