//! Closed forms for `2m = 6`, used to cross-check the generic solver.

use num_complex::Complex64;

use crate::algebra::{CMatrix, C0, C1};

/// Closed-form `(d, u♯, q)` for `m = 3` from `f = [[f₁, f₂], [f₃, f₄]]` and
/// `g = [[g₁, g₂], [g₃, g₄]]`.
///
/// The `u₁`, `u₂` and `q` forms assume the relations that hold for the integrated frame:
/// `g₂ = -f₁f₂`, `g₃ = -f₃f₄` and `g₁ + g₄ = -f₁f₄ - f₂f₃`. The `d` form holds for any `g`.
pub fn oracle_2m6(f: [Complex64; 4], g: [Complex64; 4]) -> (CMatrix, CMatrix, CMatrix) {
    let [f1, f2, f3, f4] = f;
    let [_, _, g3, g4] = g;
    let n3 = 1.0 + f3.norm_sqr();
    let n4 = 1.0 + f4.norm_sqr();
    let d = CMatrix::from_rows(&[
        [
            Complex64::new(1.0 + f3.norm_sqr() + f4.norm_sqr() + g3.norm_sqr(), 0.0),
            f3.conj() * f1 + f4.conj() * f2 + g3.conj() * g4,
        ],
        [C0, C1],
    ]);
    let u3 = f3 / n3;
    let u4 = f4 / n4;
    let u1 = (f1 - f2 * f3 * f4.conj() - f4.conj() * g4) / n3;
    let u2 = (f2 - f1 * f3.conj() * f4 - f3.conj() * g4) / n4;
    let u_sharp = CMatrix::from_rows(&[[u4, u2], [u3, u1]]);
    let q = CMatrix::real_diag(&[n3 / n4, n4 / n3]);
    (d, u_sharp, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_inputs() {
        let (d, us, q) = oracle_2m6([C0; 4], [C0; 4]);
        assert_eq!(d, CMatrix::identity(2));
        assert!(us.is_zero());
        assert_eq!(q, CMatrix::identity(2));
    }

    #[test]
    fn f3_one() {
        let (_, _, q) = oracle_2m6([C0, C0, C1, C0], [C0; 4]);
        assert_eq!(q, CMatrix::real_diag(&[2.0, 0.5]));
    }
}
