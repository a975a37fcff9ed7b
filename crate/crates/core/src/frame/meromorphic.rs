use num_complex::Complex64;

use super::FrameError;
use crate::algebra::{conjugate_p, nilpotent_inverse, CMatrix, ConstantSet, Direction, LaurentLoop};
use crate::holo::{MatPolyZ, Sharp};

/// Polynomial data `f`, `g` of the meromorphic frame `H = I + λ⁻¹H₁ + λ⁻²H₂`.
///
/// `H₁ = [[0, f, 0], [0, 0, -f♯], [0, 0, 0]]` and `H₂` carries `g` in its top-right corner.
#[derive(Clone, Debug, PartialEq)]
pub struct MeromorphicFrame {
    pub m: usize,
    pub ftilde: MatPolyZ,
    pub f: MatPolyZ,
    pub g: MatPolyZ,
}

/// `f = ∫₀ᶻ f̃`, `g = -∫₀ᶻ f f̃♯`, both as exact polynomials.
pub fn integrate_meromorphic_frame(ftilde: &MatPolyZ, c: &ConstantSet) -> Result<MeromorphicFrame, FrameError> {
    if ftilde.shape() != (2, c.n_mid()) {
        return Err(FrameError::ShapeViolation(format!(
            "f̃ must be 2 x {} for m = {}, got {:?}",
            c.n_mid(),
            c.m,
            ftilde.shape()
        )));
    }
    let f = ftilde.antiderivative();
    let g = f
        .try_mul(&ftilde.sharp()?)?
        .antiderivative()
        .scale(Complex64::new(-1.0, 0.0));
    Ok(MeromorphicFrame {
        m: c.m,
        ftilde: ftilde.clone(),
        f,
        g,
    })
}

impl MeromorphicFrame {
    pub fn h1(&self, z: Complex64, c: &ConstantSet) -> CMatrix {
        c.nilpotent_block(&self.f.eval(z))
    }

    pub fn h2(&self, z: Complex64, c: &ConstantSet) -> CMatrix {
        c.corner_block(&self.g.eval(z))
    }

    /// `H(z, ·)` as a Laurent loop in λ.
    pub fn h_loop(&self, z: Complex64, c: &ConstantSet) -> LaurentLoop {
        LaurentLoop::from_coeffs(
            c.size(),
            [
                (0, CMatrix::identity(c.size())),
                (-1, self.h1(z, c)),
                (-2, self.h2(z, c)),
            ],
        )
        .expect("blocks are sized from the constant set")
    }

    /// `∂_z H(z, ·)` from the exact polynomial derivatives of `f` and `g`.
    pub fn dh_loop(&self, z: Complex64, c: &ConstantSet) -> LaurentLoop {
        LaurentLoop::from_coeffs(
            c.size(),
            [
                (-1, c.nilpotent_block(&self.f.derivative().eval(z))),
                (-2, c.corner_block(&self.g.derivative().eval(z))),
            ],
        )
        .expect("blocks are sized from the constant set")
    }
}

/// `max ‖H⁻¹ ∂_z H - λ⁻¹ 𝒫(η₋₁)(z)‖_F` over the sample grid.
pub fn ode_residual_h(
    frame: &MeromorphicFrame,
    eta: &MatPolyZ,
    c: &ConstantSet,
    z_samples: &[Complex64],
    lambdas: &[Complex64],
) -> Result<f64, FrameError> {
    let mut worst: f64 = 0.0;
    for &z in z_samples {
        let h_inv = nilpotent_inverse(&frame.h_loop(z, c), c)?;
        let lhs = h_inv.try_mul(&frame.dh_loop(z, c))?;
        let p_eta = conjugate_p(&eta.eval(z), c, Direction::Forward);
        for &lambda in lambdas {
            let r = lhs.eval(lambda).dist(&p_eta.scale(lambda.inv()))?;
            worst = worst.max(r);
        }
    }
    Ok(worst)
}
