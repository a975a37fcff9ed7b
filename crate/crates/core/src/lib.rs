//! Explicit loop-group construction of harmonic maps into `SO⁺(1, 2m-1) / SO⁺(1,3) × SO(2m-4)`
//! from nilpotent normalized potentials, with numerical certificates for the geometry
//! of the result.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x <= tol)` deliberately rejects NaN.

pub mod algebra;
pub mod frame;
pub mod geometry;
pub mod holo;
pub mod io;
pub mod iwasawa;
pub mod selfcheck;
