use super::IwasawaError;
use crate::algebra::{CMatrix, ConstantSet};
use crate::holo::Sharp;

/// Solution of the block Iwasawa system at one point `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct IwasawaPointFactors {
    pub u: CMatrix,
    pub u_sharp: CMatrix,
    pub d: CMatrix,
    pub a: CMatrix,
    pub b: CMatrix,
    pub g_hat: CMatrix,
    pub q: CMatrix,
    /// `[[a, 0, b], [0, q, 0], [0, 0, d]]`.
    pub w0: CMatrix,
    /// `‖u q - g E₄ conj(u♯)ᵗ - f‖_F`, an identity implied by the other equations.
    pub residual_f: f64,
    pub cond_d: f64,
}

/// Solves for `d`, `u♯`, `q`, `a`, `b` and `ĝ` in that order from `f(z)` and `g(z)`.
///
/// `d` has `(d)₁₁ ≥ 1` and `(d)₂ = (0, 1)` by construction; the point is rejected only when
/// `|det d| < tol` or `cond(d) > 1/tol`.
pub fn solve_point(f: &CMatrix, g: &CMatrix, c: &ConstantSet, tol: f64) -> Result<IwasawaPointFactors, IwasawaError> {
    let n = c.n_mid();
    if f.shape() != (2, n) || g.shape() != (2, 2) {
        return Err(IwasawaError::StructureViolation(format!(
            "expected f: 2 x {n} and g: 2 x 2, got {:?} and {:?}",
            f.shape(),
            g.shape()
        )));
    }
    let (e1, e2, e4) = (&c.e1, &c.e2, &c.e4);
    let i2 = CMatrix::identity(2);
    let fs = f.sharp()?;
    let fs_h = fs.adjoint();
    let g_h = g.adjoint();
    let f_h = f.adjoint();

    let g_e1_g = &(&g_h * e1) * g;
    let d = &(&i2 + &(&(e4 * &fs_h) * &fs)) + &(e4 * &g_e1_g);
    let det = d.det()?;
    let cond_d = d.condition_number();
    if det.norm() < tol || !(cond_d <= 1.0 / tol) {
        return Err(IwasawaError::SingularD {
            det: det.norm(),
            cond: cond_d,
        });
    }
    let d_inv = d.inverse()?;

    let u_sharp = &(&fs - &(&(&f_h * e1) * g)) * &d_inv;
    let u = u_sharp.sharp_inv()?;
    let us_h = u_sharp.adjoint();
    let q = &(&CMatrix::identity(n) + &(&(&f_h * e1) * f)) - &(&(&(&u_sharp * &d) * e4) * &us_h);

    let uq = &u * &q;
    let uquh = &uq * &u.adjoint();
    // ĝ E₄ conj(d̂)ᵗ ĝᵗ with d̂ = d⁻¹, shared by the a and b equations.
    let g_dhat_g = &(&(g * e4) * &d_inv.adjoint()) * &g_h;
    let a = &(&i2 - &(&uquh * e1)) - &(&g_dhat_g * e1);
    let b = &(&(&(&(e2 * &fs_h) * &fs) + &(e2 * &g_e1_g)) - &(&uquh * e2)) - &(&g_dhat_g * e2);
    let g_hat = g * &d_inv;
    let residual_f = (&(&uq - &(&(g * e4) * &us_h)) - f).norm_fro();

    let size = c.size();
    let mut w0 = CMatrix::zeros(size, size);
    w0.set_block(0, 0, &a);
    w0.set_block(0, size - 2, &b);
    w0.set_block(2, 2, &q);
    w0.set_block(size - 2, size - 2, &d);

    Ok(IwasawaPointFactors {
        u,
        u_sharp,
        d,
        a,
        b,
        g_hat,
        q,
        w0,
        residual_f,
        cond_d,
    })
}
