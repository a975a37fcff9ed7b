//! Complex matrices, matrix Laurent loops, the constant matrices of the `G(2m, ℂ)`
//! picture, and the involutions acting on loops.

pub mod constants;
pub mod involution;
pub mod laurent;
pub mod matrix;

pub use constants::{build_constants, i13, lorentz_form, ConstantSet};
pub use involution::{
    conjugate_p, membership_residual, nilpotent_inverse, sigma_twist_residual, tau_hat,
    tau_hat_const, tau_hat_inverse, unit_circle_samples, Conjugate, Direction, GroupLaw,
};
pub use laurent::LaurentLoop;
pub use matrix::{CMatrix, C0, C1, CI};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op} requires a square matrix, got {shape:?}")]
    NotSquare {
        op: &'static str,
        shape: (usize, usize),
    },
    #[error("matrix is singular")]
    Singular,
    #[error("m = {0} is too small (need m >= 3)")]
    DimensionTooSmall(usize),
    #[error("construction check failed: {what} (residual {residual:e})")]
    ConstructionCheck { what: &'static str, residual: f64 },
    #[error("loop is not in G(2m, C): residual {residual:e} exceeds {tol:e}")]
    MembershipViolation { residual: f64, tol: f64 },
    #[error("shape violation: {0}")]
    ShapeViolation(String),
    #[error("matrix is not Hermitian (relative residual {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not positive definite (pivot {pivot}: {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },
}
