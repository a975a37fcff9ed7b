use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::GeometryError;
use crate::algebra::{conjugate_p, unit_circle_samples, CMatrix, ConstantSet, Direction, LaurentLoop, CI};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McConfig {
    /// Base finite-difference step; the Richardson pair uses `h` and `h/2`.
    pub h: f64,
    /// Number of `λ` samples on the unit circle used for the Fourier split.
    pub lambda_count: usize,
    pub tol: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            h: 1e-3,
            lambda_count: 8,
            tol: 1e-5,
        }
    }
}

/// Maurer–Cartan diagnostics at one point. All norms are relative to `max(1, ‖α‖)`.
#[derive(Clone, Debug, PartialEq)]
pub struct McReport {
    /// `λ⁻¹` and `λ⁰` Fourier coefficients of `F̃⁻¹ ∂_z F̃`.
    pub alpha_m1: CMatrix,
    pub alpha_0: CMatrix,
    /// Norm of everything the block pattern forbids, with steps `(h, h/2)`.
    pub prohibited: f64,
    /// Same with steps `(h/2, h/4)`.
    pub prohibited_half: f64,
    /// Richardson estimate of the error of the `h/2` central difference.
    pub fd_error: f64,
    /// Off-block parts of the pulled-back form (`λ⁰` off-diagonal, `λ⁻¹` diagonal).
    pub real_blocks: f64,
    /// Deviation of `A₁` from `[[0, a₁₂, a₁₃, a₁₄], [a₁₂, 0, a₁₃, a₁₄], [a₁₃, -a₁₃, 0, a₃₄], [a₁₄, -a₁₄, -a₃₄, 0]]`.
    pub a1_pattern: f64,
    /// Deviation of `B₁` from equal first two rows and fourth row `±i` times the third.
    pub b1_pattern: f64,
    /// `max_λ ‖∂_z(φ₁+φ₂) - a₁₂(φ₁+φ₂)‖ / ‖φ₁+φ₂‖`.
    pub a12_proportionality: f64,
}

impl McReport {
    /// Largest pattern residual of either side.
    pub fn worst_pattern(&self) -> f64 {
        self.prohibited
            .max(self.prohibited_half)
            .max(self.real_blocks)
            .max(self.a1_pattern)
            .max(self.b1_pattern)
    }
}

/// Loop-valued frame sampler `z ↦ F̃(z, ·)`.
pub type LoopSampler<'a> = dyn Fn(Complex64) -> Result<LaurentLoop, GeometryError> + 'a;

fn central_dz(sampler: &LoopSampler<'_>, z: Complex64, h: f64) -> Result<LaurentLoop, GeometryError> {
    let dh = Complex64::new(h, 0.0);
    let ih = Complex64::new(0.0, h);
    let dx = sampler(z + dh)?.try_sub(&sampler(z - dh)?)?;
    let dy = sampler(z + ih)?.try_sub(&sampler(z - ih)?)?;
    // ∂_z = ½(∂_x - i ∂_y), and each difference still carries a factor 2h.
    Ok(dx.try_sub(&dy.scale(CI))?.scale(Complex64::new(0.25 / h, 0.0)))
}

fn richardson(fine: &LaurentLoop, coarse: &LaurentLoop) -> Result<LaurentLoop, GeometryError> {
    Ok(fine
        .scale(Complex64::new(4.0 / 3.0, 0.0))
        .try_sub(&coarse.scale(Complex64::new(1.0 / 3.0, 0.0)))?)
}

struct Split {
    coeffs: Vec<(i32, CMatrix)>,
    samples: Vec<(Complex64, CMatrix, CMatrix)>,
}

/// Samples `α(λ) = F̃(λ)⁻¹ ∂_z F̃(λ)` and splits it into Fourier coefficients.
fn fourier_split(ft: &LaurentLoop, dft: &LaurentLoop, k: usize) -> Result<Split, GeometryError> {
    let lambdas = unit_circle_samples(k);
    let mut samples = Vec::with_capacity(k);
    let mut alphas = Vec::with_capacity(k);
    for &l in &lambdas {
        let f = ft.eval(l);
        let df = dft.eval(l);
        alphas.push(f.solve(&df)?);
        samples.push((l, f, df));
    }
    let lo = -((k as i32 - 1) / 2);
    let hi = k as i32 / 2;
    let size = ft.size();
    let coeffs = (lo..=hi)
        .map(|deg| {
            let mut acc = CMatrix::zeros(size, size);
            for (l, a) in lambdas.iter().zip(&alphas) {
                acc = &acc + &a.scale(l.powi(-deg));
            }
            (deg, acc.scale(Complex64::new(1.0 / k as f64, 0.0)))
        })
        .collect();
    Ok(Split { coeffs, samples })
}

fn sq(x: f64) -> f64 {
    x * x
}

/// Squared norm of everything in `α₋₁`, `α₀` and other degrees that the pattern forbids.
fn prohibited_sq(split: &Split, c: &ConstantSet) -> f64 {
    let [p0, p1, p2] = c.partition();
    let blk = |m: &CMatrix, r: &std::ops::Range<usize>, s: &std::ops::Range<usize>| {
        sq(m.block(r.start, s.start, r.len(), s.len()).norm_fro())
    };
    let parts = [&p0, &p1, &p2];
    let mut total = 0.0;
    for (deg, a) in &split.coeffs {
        match deg {
            -1 => {
                for (i, r) in parts.iter().enumerate() {
                    for (j, s) in parts.iter().enumerate() {
                        if !((i, j) == (0, 1) || (i, j) == (1, 2)) {
                            total += blk(a, r, s);
                        }
                    }
                }
                let x = a.block(0, 2, 2, c.n_mid());
                let y = a.block(2, c.size() - 2, c.n_mid(), 2);
                total += sq((&y + &x.anti_transpose()).norm_fro());
            }
            0 => {
                for (i, j) in [(0, 1), (1, 0), (1, 2), (2, 0), (2, 1)] {
                    total += blk(a, parts[i], parts[j]);
                }
            }
            _ => total += sq(a.norm_fro()),
        }
    }
    total
}

fn a1_pattern(a: &CMatrix) -> f64 {
    let e = |i: usize, j: usize| a[(i, j)];
    [
        e(0, 0),
        e(1, 1),
        e(2, 2),
        e(3, 3),
        e(0, 1) - e(1, 0),
        e(0, 2) - e(1, 2),
        e(0, 3) - e(1, 3),
        e(2, 0) + e(2, 1),
        e(3, 0) + e(3, 1),
        e(2, 0) - e(0, 2),
        e(3, 0) - e(0, 3),
        e(2, 3) + e(3, 2),
    ]
    .iter()
    .map(|x| x.norm_sqr())
    .sum::<f64>()
    .sqrt()
}

fn b1_pattern(b: &CMatrix) -> f64 {
    let dup: f64 = (0..b.cols()).map(|j| (b[(0, j)] - b[(1, j)]).norm_sqr()).sum();
    let rot = |u: Complex64| -> f64 { (0..b.cols()).map(|j| (b[(3, j)] - u * b[(2, j)]).norm_sqr()).sum() };
    (dup + rot(CI).min(rot(-CI))).sqrt()
}

/// Checks the block pattern of `F̃⁻¹ ∂_z F̃` and of its pull-back at `z`.
///
/// `∂_z` is a Richardson-extrapolated central difference; the step-halved repeat must agree.
pub fn maurer_cartan(
    sampler: &LoopSampler<'_>,
    z: Complex64,
    c: &ConstantSet,
    cfg: &McConfig,
) -> Result<McReport, GeometryError> {
    if !(cfg.h > 0.0) || cfg.lambda_count < 4 {
        return Err(GeometryError::ShapeViolation(format!(
            "need h > 0 and at least 4 λ samples, got h = {}, K = {}",
            cfg.h, cfg.lambda_count
        )));
    }
    let ft = sampler(z)?;
    let d1 = central_dz(sampler, z, cfg.h)?;
    let d2 = central_dz(sampler, z, cfg.h / 2.0)?;
    let d4 = central_dz(sampler, z, cfg.h / 4.0)?;
    let r = richardson(&d2, &d1)?;
    let r_half = richardson(&d4, &d2)?;

    let scale_of = |s: &Split| {
        s.coeffs
            .iter()
            .map(|(_, a)| a.norm_fro())
            .fold(1.0f64, f64::max)
    };
    let fd_error = d2.max_coeff_dist(&d1)? / 3.0 / r.iter().map(|(_, a)| a.norm_fro()).fold(1.0, f64::max);
    if fd_error > cfg.tol {
        return Err(GeometryError::GridTooCoarse {
            estimate: fd_error,
            tol: cfg.tol,
        });
    }

    let split = fourier_split(&ft, &r, cfg.lambda_count)?;
    let split_half = fourier_split(&ft, &r_half, cfg.lambda_count)?;
    let scale = scale_of(&split);
    let prohibited = prohibited_sq(&split, c).sqrt() / scale;
    let prohibited_half = prohibited_sq(&split_half, c).sqrt() / scale_of(&split_half);

    let coeff = |deg: i32| {
        split
            .coeffs
            .iter()
            .find(|(d, _)| *d == deg)
            .map(|(_, a)| a.clone())
            .expect("degrees -1 and 0 are always sampled")
    };
    let alpha_m1 = coeff(-1);
    let alpha_0 = coeff(0);

    let size = c.size();
    let n = c.n_mid();
    let real_0 = conjugate_p(&alpha_0, c, Direction::Backward);
    let real_m1 = conjugate_p(&alpha_m1, c, Direction::Backward);
    let real_blocks = (sq(real_0.block(0, 4, 4, n).norm_fro())
        + sq(real_0.block(4, 0, n, 4).norm_fro())
        + sq(real_m1.block(0, 0, 4, 4).norm_fro())
        + sq(real_m1.block(4, 4, n, n).norm_fro()))
    .sqrt()
        / scale;
    let a1 = a1_pattern(&real_0.block(0, 0, 4, 4)) / scale;
    let b1 = b1_pattern(&real_m1.block(0, 4, 4, n)) / scale;

    let mut a12_proportionality: f64 = 0.0;
    for (_, f, df) in &split.samples {
        let f = conjugate_p(f, c, Direction::Backward);
        let df = conjugate_p(df, c, Direction::Backward);
        let a12 = f.solve(&df)?[(0, 1)];
        let (v, dv): (Vec<Complex64>, Vec<Complex64>) =
            (0..size).map(|i| (f[(i, 0)] + f[(i, 1)], df[(i, 0)] + df[(i, 1)])).unzip();
        let vn = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let defect = v
            .iter()
            .zip(&dv)
            .map(|(v, dv)| (dv - a12 * v).norm_sqr())
            .sum::<f64>()
            .sqrt();
        a12_proportionality = a12_proportionality.max(defect / vn.max(f64::MIN_POSITIVE));
    }

    Ok(McReport {
        alpha_m1,
        alpha_0,
        prohibited,
        prohibited_half,
        fd_error,
        real_blocks,
        a1_pattern: a1,
        b1_pattern: b1,
        a12_proportionality,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_constants;
    use crate::frame::integrate_meromorphic_frame;
    use crate::holo::{MatPolyZ, PolyZ};
    use crate::iwasawa::{solve_frame_at, L11Branch};

    fn pipeline_sampler(c: &ConstantSet, ft: &MatPolyZ) -> impl Fn(Complex64) -> Result<LaurentLoop, GeometryError> {
        let frame = integrate_meromorphic_frame(ft, c).unwrap();
        let c = c.clone();
        move |z| Ok(solve_frame_at(&frame, z, &c, 1e-12, L11Branch::Principal)?.ftilde)
    }

    #[test]
    fn constant_field_has_zero_form() {
        let c = build_constants(3).unwrap();
        let sampler = |_| Ok(LaurentLoop::identity(6));
        let r = maurer_cartan(&sampler, Complex64::new(0.1, 0.2), &c, &McConfig::default()).unwrap();
        assert!(r.alpha_0.is_zero() && r.alpha_m1.is_zero());
        assert_eq!(r.worst_pattern(), 0.0);
        assert_eq!(r.a12_proportionality, 0.0);
    }

    #[test]
    fn pipeline_frames_follow_the_pattern() {
        let c = build_constants(3).unwrap();
        let ft = MatPolyZ::from_fn(2, 2, |i, j| {
            PolyZ::new(vec![Complex64::new(0.3 + i as f64, -0.2 * j as f64), Complex64::new(0.0, 0.5)])
        });
        let sampler = pipeline_sampler(&c, &ft);
        for z in [Complex64::new(0.2, -0.1), Complex64::new(-0.3, 0.25)] {
            let r = maurer_cartan(&sampler, z, &c, &McConfig::default()).unwrap();
            assert!(r.worst_pattern() < 1e-7, "{r:?}");
            assert!(!r.alpha_m1.is_zero());
        }
    }

    #[test]
    fn rank_one_frame_has_a12_proportionality() {
        let c = build_constants(3).unwrap();
        let mut ft = MatPolyZ::zeros(2, 2);
        ft.set_entry(0, 0, PolyZ::from_real(&[1.0, 0.5]));
        let sampler = pipeline_sampler(&c, &ft);
        let r = maurer_cartan(&sampler, Complex64::new(0.25, 0.1), &c, &McConfig::default()).unwrap();
        assert!(r.a12_proportionality < 1e-7, "{r:?}");
    }

    #[test]
    fn lower_triangular_gauge_is_detected() {
        let c = build_constants(3).unwrap();
        let sampler = |z: Complex64| {
            let mut g = CMatrix::identity(6);
            g[(5, 0)] = z;
            g[(4, 1)] = -z;
            Ok(LaurentLoop::constant(g)?)
        };
        let r = maurer_cartan(&sampler, Complex64::new(0.1, 0.0), &c, &McConfig::default()).unwrap();
        assert!(r.prohibited > 0.1, "{r:?}");
    }

    #[test]
    fn non_smooth_sampler_trips_grid_check() {
        let c = build_constants(3).unwrap();
        let sampler = |z: Complex64| {
            let mut g = CMatrix::identity(6);
            g[(0, 5)] = Complex64::new((z.re * 1e4).sin(), 0.0);
            Ok(LaurentLoop::constant(g)?)
        };
        let err = maurer_cartan(&sampler, Complex64::new(0.1, 0.0), &c, &McConfig::default()).unwrap_err();
        assert!(matches!(err, GeometryError::GridTooCoarse { .. }));
    }
}
