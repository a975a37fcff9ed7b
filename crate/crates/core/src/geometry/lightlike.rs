use serde::{Deserialize, Serialize};

use super::{FrameField, GeometryError};

/// Relative size below which the first coordinate of `φ₁ + φ₂` counts as vanishing.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LightlikeReport {
    /// Mean of `(φ₁ + φ₂) / (φ₁ + φ₂)₀` over the field.
    pub v: Vec<f64>,
    /// `max_z ‖v(z) - v‖ / ‖v‖`.
    pub const_residual: f64,
    /// `|vᵗ I v| / ‖v‖²` for the mean vector.
    pub isotropy_residual: f64,
}

fn lorentz(v: &[f64], w: &[f64]) -> f64 {
    -v[0] * w[0] + v[1..].iter().zip(&w[1..]).map(|(a, b)| a * b).sum::<f64>()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Extracts the vector carried by the sum of the first two frame columns.
pub fn constant_lightlike(field: &FrameField) -> Result<LightlikeReport, GeometryError> {
    if field.is_empty() {
        return Err(GeometryError::ShapeViolation("empty frame field".into()));
    }
    let size = field.frames[0].rows();
    let mut vs = Vec::with_capacity(field.len());
    for (index, f) in field.frames.iter().enumerate() {
        let w: Vec<f64> = (0..size).map(|i| f[(i, 0)].re + f[(i, 1)].re).collect();
        if w[0].abs() <= NORMALIZATION_TOL * norm(&w) || w[0] == 0.0 {
            return Err(GeometryError::NormalizationFailure { index });
        }
        vs.push(w.iter().map(|x| x / w[0]).collect::<Vec<_>>());
    }
    let mut mean = vec![0.0; size];
    for v in &vs {
        for (m, x) in mean.iter_mut().zip(v) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= vs.len() as f64);
    let mn = norm(&mean);
    let const_residual = vs
        .iter()
        .map(|v| norm(&v.iter().zip(&mean).map(|(a, b)| a - b).collect::<Vec<_>>()) / mn)
        .fold(0.0, f64::max);
    Ok(LightlikeReport {
        isotropy_residual: lorentz(&mean, &mean).abs() / (mn * mn),
        v: mean,
        const_residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CausalType {
    Lightlike,
    Timelike,
    Spacelike,
}

impl CausalType {
    /// Sign class of `vᵗ I v / ‖v‖²` with a dead band of width `tol`.
    pub fn classify(v: &[f64], tol: f64) -> Self {
        let s = lorentz(v, v) / norm(v).powi(2);
        if s.abs() < tol {
            CausalType::Lightlike
        } else if s < 0.0 {
            CausalType::Timelike
        } else {
            CausalType::Spacelike
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantVectorReport {
    /// `max_z ‖(F⁻¹ v)_{4..}‖ / ‖v‖`: the part of `v` off `span(φ₁, …, φ₄)`.
    pub residual: f64,
    pub causal: CausalType,
}

/// Checks that `v` lies in the Lorentzian 4-space spanned by the first four frame columns.
pub fn constant_vector_check(
    field: &FrameField,
    v: &[f64],
    causal_tol: f64,
) -> Result<ConstantVectorReport, GeometryError> {
    let vn = norm(v);
    if !(vn > 0.0) {
        return Err(GeometryError::ShapeViolation("constant vector must be nonzero".into()));
    }
    let mut residual: f64 = 0.0;
    for f in &field.frames {
        if f.rows() != v.len() {
            return Err(GeometryError::ShapeViolation(format!(
                "vector of length {} against {} x {} frames",
                v.len(),
                f.rows(),
                f.cols()
            )));
        }
        // F⁻¹ = I Fᵗ I, and only the ψ-coordinates are needed; their sign flip from I is harmless.
        let iv: Vec<f64> = v.iter().enumerate().map(|(i, x)| if i == 0 { -x } else { *x }).collect();
        let off: f64 = (4..f.cols())
            .map(|j| (0..f.rows()).map(|i| f[(i, j)].re * iv[i]).sum::<f64>().powi(2))
            .sum();
        residual = residual.max(off.sqrt() / vn);
    }
    Ok(ConstantVectorReport {
        residual,
        causal: CausalType::classify(v, causal_tol),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{CMatrix, C1};
    use num_complex::Complex64;

    fn field(frames: Vec<CMatrix>) -> FrameField {
        let points = (0..frames.len()).map(|k| Complex64::new(k as f64, 0.0)).collect();
        FrameField::from_frames(points, 0.1, C1, frames).unwrap()
    }

    /// Lorentz boost in the `(e₀, e₁)` plane.
    fn boost(t: f64) -> CMatrix {
        let mut b = CMatrix::identity(6);
        b[(0, 0)] = t.cosh().into();
        b[(1, 1)] = t.cosh().into();
        b[(0, 1)] = t.sinh().into();
        b[(1, 0)] = t.sinh().into();
        b
    }

    #[test]
    fn identity_gives_e0_plus_e1() {
        let r = constant_lightlike(&field(vec![CMatrix::identity(6); 3])).unwrap();
        assert_eq!(r.v, vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(r.const_residual, 0.0);
        assert_eq!(r.isotropy_residual, 0.0);
    }

    #[test]
    fn boosts_keep_the_null_direction() {
        // φ₁ + φ₂ = e^t (e₀ + e₁), so the normalized vector is unchanged.
        let r = constant_lightlike(&field((0..5).map(|k| boost(0.3 * k as f64)).collect())).unwrap();
        assert!(r.const_residual < 1e-15);
        assert!(r.isotropy_residual < 1e-15);
    }

    #[test]
    fn rotation_into_psi_columns_is_detected() {
        let rot = |t: f64| {
            let mut r = CMatrix::identity(6);
            r[(1, 1)] = t.cos().into();
            r[(4, 4)] = t.cos().into();
            r[(1, 4)] = t.sin().into();
            r[(4, 1)] = (-t.sin()).into();
            r
        };
        let r = constant_lightlike(&field(vec![rot(0.0), rot(0.5), rot(1.0)])).unwrap();
        assert!(r.const_residual > 1e-2);
    }

    #[test]
    fn vanishing_first_coordinate_fails() {
        // Unreachable for genuine SO(1, q) frames, where φ₁ + φ₂ stays lightlike and nonzero.
        let mut bad = CMatrix::identity(6);
        bad[(0, 1)] = (-1.0).into();
        let f = FrameField {
            points: vec![Complex64::new(0.0, 0.0); 2],
            spacing: 0.1,
            lambda: C1,
            frames: vec![CMatrix::identity(6), bad],
        };
        assert_eq!(
            constant_lightlike(&f).unwrap_err(),
            GeometryError::NormalizationFailure { index: 1 }
        );
    }

    #[test]
    fn causal_classes() {
        let e = |k: usize| {
            let mut v = vec![0.0; 6];
            v[k] = 1.0;
            v
        };
        let f = field(vec![CMatrix::identity(6)]);
        let r = constant_vector_check(&f, &e(0), 1e-9).unwrap();
        assert_eq!(r.causal, CausalType::Timelike);
        assert_eq!(r.residual, 0.0);
        let r = constant_vector_check(&f, &e(4), 1e-9).unwrap();
        assert_eq!(r.causal, CausalType::Spacelike);
        assert_eq!(r.residual, 1.0);
        let r = constant_vector_check(&f, &[1.0, 1.0, 0.0, 0.0, 0.0, 0.0], 1e-9).unwrap();
        assert_eq!(r.causal, CausalType::Lightlike);
    }
}
