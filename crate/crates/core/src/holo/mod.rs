//! Polynomials in `z`, polynomial matrices, and the canonical potential families.

pub mod matpoly;
pub mod poly;
pub mod potential;

pub use matpoly::{MatPolyZ, Sharp};
pub use poly::PolyZ;
pub use potential::{
    build_bhat, extract_ftilde, isotropy_residual, native_bhat, rank_profile, to_loop_potential,
    to_native_gauge, FtildeExtraction, Gauge, LightlikeColumn, MinimalPair, PotentialData,
    PotentialSpec, RankClass, RankProfile, PATTERN_TOL, RANK_REL_TOL,
};

use thiserror::Error;

use crate::algebra::AlgebraError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HoloError {
    #[error("potential does not match m: {0}")]
    SpecMismatch(String),
    #[error("shape violation: {0}")]
    ShapeViolation(String),
    #[error("conjugated potential is off the nilpotent pattern (residual {residual:e} > {tol:e})")]
    PatternViolation { residual: f64, tol: f64 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
