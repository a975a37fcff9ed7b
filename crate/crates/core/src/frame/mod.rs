//! The meromorphic frame of a nilpotent potential, the closed-form `F₀₁`, and assembly of
//! normalized potentials from holomorphic frame data.

pub mod f01;
pub mod meromorphic;
pub mod wu;

pub use f01::{a1_matrix, f01_closed_form, f01_ode_residual, QuadratureConfig};
pub use meromorphic::{integrate_meromorphic_frame, ode_residual_h, MeromorphicFrame};
pub use wu::{integrate_f02, lightlike_row_pattern_residual, wu_potential, KBranch, WuConfig, WuReport};

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::holo::HoloError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("quadrature error estimate {estimate:e} exceeds {tol:e}")]
    QuadratureFailure { estimate: f64, tol: f64 },
    #[error("shape violation: {0}")]
    ShapeViolation(String),
    #[error(transparent)]
    Holo(#[from] HoloError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
