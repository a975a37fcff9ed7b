//! Pull-back of the extended frame to `SO⁺(1, 2m-1)` and geometric certificates: the
//! constant lightlike vector and the Maurer–Cartan block pattern.

pub mod field;
pub mod lightlike;
pub mod maurer_cartan;

pub use field::{FrameField, MEMBERSHIP_TOL, REALITY_TOL};
pub use lightlike::{constant_lightlike, constant_vector_check, CausalType, ConstantVectorReport, LightlikeReport};
pub use maurer_cartan::{maurer_cartan, LoopSampler, McConfig, McReport};

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::iwasawa::IwasawaError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("frame {index} is not real (imaginary norm {residual:e})")]
    RealityViolation { index: usize, residual: f64 },
    #[error("frame {index} leaves SO(1, 2m-1) (residual {residual:e})")]
    MembershipViolation { index: usize, residual: f64 },
    #[error("finite-difference error estimate {estimate:e} exceeds {tol:e}")]
    GridTooCoarse { estimate: f64, tol: f64 },
    #[error("first coordinate of phi1 + phi2 vanishes at grid point {index}")]
    NormalizationFailure { index: usize },
    #[error("shape violation: {0}")]
    ShapeViolation(String),
    #[error(transparent)]
    Iwasawa(#[from] IwasawaError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
