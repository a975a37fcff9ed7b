//! Pointwise Iwasawa splitting of the meromorphic frame and assembly of the extended frame.

pub mod assemble;
pub mod l0;
pub mod oracle;
pub mod solve;

pub use assemble::{assemble_frame, frame_residuals, solve_frame_at, w_loop, FrameResiduals, PointSolution};
pub use l0::{factor_l0, BranchMode, L11Branch};
pub use oracle::oracle_2m6;
pub use solve::{solve_point, IwasawaPointFactors};

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::holo::HoloError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IwasawaError {
    #[error("d is singular or ill-conditioned (|det| = {det:e}, cond = {cond:e})")]
    SingularD { det: f64, cond: f64 },
    #[error("q is not positive definite (pivot {pivot}: {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },
    #[error("q is not Hermitian (relative residual {0:e})")]
    HermitianityViolation(f64),
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error(transparent)]
    Holo(#[from] HoloError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl IwasawaError {
    /// True for failures that mark leaving the big Iwasawa cell.
    pub fn is_cell_boundary(&self) -> bool {
        matches!(
            self,
            IwasawaError::SingularD { .. }
                | IwasawaError::NotPositiveDefinite { .. }
                | IwasawaError::HermitianityViolation(_)
        )
    }
}
