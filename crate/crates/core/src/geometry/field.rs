use num_complex::Complex64;

use super::GeometryError;
use crate::algebra::{conjugate_p, membership_residual, CMatrix, ConstantSet, Direction, GroupLaw, LaurentLoop};

/// Reality bound on pulled-back frames (imaginary-part Frobenius norm).
pub const REALITY_TOL: f64 = 1e-9;
/// `SO(1, 2m-1)` membership bound on pulled-back frames.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

/// Real frames `F(z) = P̃ F̃(z, λ) P̃⁻¹` at a fixed `λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameField {
    pub points: Vec<Complex64>,
    pub spacing: f64,
    pub lambda: Complex64,
    pub frames: Vec<CMatrix>,
}

impl FrameField {
    /// Pulls back `F̃(z, λ)` at each point and checks reality and membership.
    pub fn from_loops(
        points: Vec<Complex64>,
        spacing: f64,
        lambda: Complex64,
        loops: &[LaurentLoop],
        c: &ConstantSet,
    ) -> Result<Self, GeometryError> {
        if points.len() != loops.len() {
            return Err(GeometryError::ShapeViolation(format!(
                "{} points but {} frames",
                points.len(),
                loops.len()
            )));
        }
        let frames = loops
            .iter()
            .map(|l| conjugate_p(&l.eval(lambda), c, Direction::Backward))
            .collect();
        Self::from_frames(points, spacing, lambda, frames)
    }

    pub fn from_frames(
        points: Vec<Complex64>,
        spacing: f64,
        lambda: Complex64,
        frames: Vec<CMatrix>,
    ) -> Result<Self, GeometryError> {
        for (index, f) in frames.iter().enumerate() {
            let imag = f.imag_part().norm_fro();
            if imag > REALITY_TOL {
                return Err(GeometryError::RealityViolation { index, residual: imag });
            }
            let mem = membership_residual(f, GroupLaw::So1q);
            if mem > MEMBERSHIP_TOL {
                return Err(GeometryError::MembershipViolation { index, residual: mem });
            }
        }
        Ok(Self {
            points,
            spacing,
            lambda,
            frames,
        })
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Real part of the frame at `index`, row-major.
    pub fn real_frame(&self, index: usize) -> CMatrix {
        self.frames[index].map(|x| Complex64::new(x.re, 0.0))
    }
}
