//! Reality involution, twisting, the isometry `𝒫`, and group-membership residuals.

use num_complex::Complex64;

use super::constants::{lorentz_form, ConstantSet};
use super::laurent::LaurentLoop;
use super::matrix::CMatrix;
use super::AlgebraError;

/// `L ↦ S · conj(L with λ-degrees negated) · S`.
///
/// On the unit circle this is `λ ↦ S · conj(L(λ)) · S`; its fixed loops are the
/// `𝒫`-images of real loops.
pub fn tau_hat(l: &LaurentLoop, c: &ConstantSet) -> LaurentLoop {
    l.flip_degrees(|m| &(&c.s * &m.conj()) * &c.s)
}

/// `τ̂(M)` for a constant matrix.
pub fn tau_hat_const(m: &CMatrix, c: &ConstantSet) -> CMatrix {
    &(&c.s * &m.conj()) * &c.s
}

/// Loop inverse of `τ̂(L)` for `L` with values in `G(2m, ℂ)`, via `Ĵ · conj(L_k)ᵗ · Ĵ`
/// placed at degree `-k`.
pub fn tau_hat_inverse(
    l: &LaurentLoop,
    c: &ConstantSet,
    tol: f64,
) -> Result<LaurentLoop, AlgebraError> {
    let residual = unit_circle_samples(8)
        .into_iter()
        .map(|lambda| membership_residual(&l.eval(lambda), GroupLaw::G2m))
        .fold(0.0, f64::max);
    if residual > tol {
        return Err(AlgebraError::MembershipViolation { residual, tol });
    }
    Ok(l.flip_degrees(|m| &(&c.jhat * &m.adjoint()) * &c.jhat))
}

/// `max_λ ‖L(-λ) - D₀ L(λ) D₀⁻¹‖_F` over the given samples.
pub fn sigma_twist_residual(l: &LaurentLoop, c: &ConstantSet, lambdas: &[Complex64]) -> f64 {
    // D₀ is its own inverse.
    lambdas
        .iter()
        .map(|&lambda| {
            let lhs = l.eval(-lambda);
            let rhs = &(&c.d0 * &l.eval(lambda)) * &c.d0;
            lhs.dist(&rhs).unwrap_or(f64::INFINITY)
        })
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `X ↦ P̃⁻¹ X P̃` (real picture to `G(2m, ℂ)`).
    Forward,
    /// `X ↦ P̃ X P̃⁻¹`.
    Backward,
}

/// Objects that can be conjugated coefficient-wise by a constant matrix.
pub trait Conjugate: Sized {
    fn conjugate(&self, left: &CMatrix, right: &CMatrix) -> Self;
}

impl Conjugate for CMatrix {
    fn conjugate(&self, left: &CMatrix, right: &CMatrix) -> Self {
        &(left * self) * right
    }
}

impl Conjugate for LaurentLoop {
    fn conjugate(&self, left: &CMatrix, right: &CMatrix) -> Self {
        self.map_coeffs(|_, m| &(left * m) * right)
    }
}

/// The isometry `𝒫` and its inverse.
pub fn conjugate_p<T: Conjugate>(x: &T, c: &ConstantSet, direction: Direction) -> T {
    match direction {
        Direction::Forward => x.conjugate(&c.ptilde_inv, &c.ptilde),
        Direction::Backward => x.conjugate(&c.ptilde, &c.ptilde_inv),
    }
}

/// Inverse of `W = I + λ⁻¹W₁ + λ⁻²W₂` where `W₁` is strictly block upper triangular
/// in the `(2, 2m-4, 2)` partition and `W₂` lives in the top-right 2×2 block.
///
/// For that shape `W₁³ = W₁W₂ = W₂W₁ = W₂² = 0`, so
/// `W⁻¹ = I - λ⁻¹W₁ + λ⁻²(W₁² - W₂)`.
pub fn nilpotent_inverse(w: &LaurentLoop, c: &ConstantSet) -> Result<LaurentLoop, AlgebraError> {
    let n = c.size();
    if w.size() != n {
        return Err(AlgebraError::ShapeViolation(format!(
            "loop size {} does not match 2m = {}",
            w.size(),
            n
        )));
    }
    if let Some((k, _)) = w.iter().find(|(k, _)| !(-2..=0).contains(k)) {
        return Err(AlgebraError::ShapeViolation(format!(
            "unexpected λ-degree {k} (expected -2..=0)"
        )));
    }
    let w0 = w.coeff(0);
    let w1 = w.coeff(-1);
    let w2 = w.coeff(-2);
    if w0 != CMatrix::identity(n) {
        return Err(AlgebraError::ShapeViolation(
            "constant coefficient is not the identity".into(),
        ));
    }
    let [top, mid, bot] = c.partition();
    let allowed1 = |i: usize, j: usize| {
        (top.contains(&i) && mid.contains(&j))
            || (top.contains(&i) && bot.contains(&j))
            || (mid.contains(&i) && bot.contains(&j))
    };
    let allowed2 = |i: usize, j: usize| top.contains(&i) && bot.contains(&j);
    for i in 0..n {
        for j in 0..n {
            if !allowed1(i, j) && w1[(i, j)].norm() != 0.0 {
                return Err(AlgebraError::ShapeViolation(format!(
                    "λ⁻¹ coefficient has entry ({i}, {j}) outside the strictly upper block pattern"
                )));
            }
            if !allowed2(i, j) && w2[(i, j)].norm() != 0.0 {
                return Err(AlgebraError::ShapeViolation(format!(
                    "λ⁻² coefficient has entry ({i}, {j}) outside the top-right block"
                )));
            }
        }
    }
    let w1sq = &w1 * &w1;
    LaurentLoop::from_coeffs(n, [(0, w0), (-1, -&w1), (-2, &w1sq - &w2)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupLaw {
    /// `XᵗJX = J` with `J` the anti-diagonal form.
    G2m,
    /// `Xᵗ I_{1,q} X = I_{1,q}`.
    So1q,
    /// `XᵗX = I`.
    SoN,
}

/// `‖XᵗMX - M‖_F` for the bilinear form `M` of the given law, sized to `X`.
pub fn membership_residual(x: &CMatrix, law: GroupLaw) -> f64 {
    let n = x.rows();
    let form = match law {
        GroupLaw::G2m => CMatrix::anti_identity(n),
        GroupLaw::So1q => lorentz_form(n),
        GroupLaw::SoN => CMatrix::identity(n),
    };
    match x.transpose().matmul(&form).and_then(|t| t.matmul(x)) {
        Ok(v) => v.dist(&form).unwrap_or(f64::INFINITY),
        Err(_) => f64::INFINITY,
    }
}

/// `K` equally spaced points `exp(2πi j / K)` on the unit circle.
pub fn unit_circle_samples(k: usize) -> Vec<Complex64> {
    (0..k)
        .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / k as f64))
        .collect()
}
