use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{IoError, RunSpec};
use crate::algebra::{build_constants, conjugate_p, unit_circle_samples, CMatrix, ConstantSet, Direction, C1};
use crate::frame::{integrate_meromorphic_frame, ode_residual_h, FrameError, MeromorphicFrame};
use crate::geometry::{
    constant_lightlike, constant_vector_check, maurer_cartan, CausalType, FrameField, GeometryError, McConfig,
    McReport,
};
use crate::holo::{
    extract_ftilde, isotropy_residual, native_bhat, rank_profile, to_loop_potential, HoloError, RankClass,
    PATTERN_TOL,
};
use crate::iwasawa::{frame_residuals, solve_frame_at, BranchMode, FrameResiduals, IwasawaError, L11Branch, PointSolution};

/// Bound on `residual_F / (1 + ‖f‖)²`.
pub const CONSEQUENCE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Zero potential: the frame is the identity.
    Trivial,
    /// Rank at most one and a certified constant lightlike vector.
    MinimalSurfaceCandidate,
    /// Rank two somewhere: the harmonic map is not a conformal Gauss map.
    NoWillmoreSurface,
    /// Some grid point left the Iwasawa big cell.
    CellBoundaryEncountered,
    /// The potential does not conjugate into the nilpotent pattern this pipeline solves.
    OutsideLightlikeFamily,
    /// Checks failed for reasons other than the above.
    Inconclusive,
}

impl Verdict {
    pub fn basis(self) -> &'static str {
        match self {
            Verdict::Trivial => "zero potential",
            Verdict::MinimalSurfaceCandidate => {
                "rank <= 1 with a constant lightlike vector: minimal surface in R^n candidate"
            }
            Verdict::NoWillmoreSurface => "rank 2: cannot be the conformal Gauss map of a Willmore surface",
            Verdict::CellBoundaryEncountered => "Iwasawa splitting failed at some grid points",
            Verdict::OutsideLightlikeFamily => "potential is not of the nilpotent lightlike form",
            Verdict::Inconclusive => "residual or geometry checks failed",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ResidualMaxima {
    pub iwasawa: f64,
    pub reality: f64,
    pub membership: f64,
    pub twist: f64,
    pub degree_bound: f64,
    pub plus_positivity: f64,
    /// `residual_F / (1 + ‖f‖)²`.
    pub consequence: f64,
    pub meromorphic_ode: f64,
    pub potential_isotropy: f64,
    pub ftilde_pattern: f64,
    pub mc_pattern: f64,
    pub mc_step_halving: f64,
    pub mc_fd_error: f64,
    pub a12_proportionality: f64,
    pub lightlike_const: f64,
    pub lightlike_isotropy: f64,
    pub constant_vector: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankSummary {
    pub max_rank: usize,
    pub class: RankClass,
    /// `histogram[r]` counts grid points where `B̂₁` has rank `r`.
    pub histogram: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointFailure {
    /// Grid index, absent for failures of the whole field.
    pub index: Option<usize>,
    pub z: Option<[f64; 2]>,
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub m: usize,
    pub grid_n: usize,
    pub grid_radius: f64,
    pub lambda_count: usize,
    pub points_total: usize,
    pub points_solved: usize,
    pub residuals: ResidualMaxima,
    /// Names of residual categories above their tolerance.
    pub exceeded: Vec<String>,
    pub rank: RankSummary,
    pub lightlike_vector: Option<Vec<f64>>,
    pub causal_type: Option<CausalType>,
    pub verdict: Verdict,
    pub verdict_basis: String,
    pub failures: Vec<PointFailure>,
}

impl RunReport {
    /// True if some point hit a singular `d` or a non-positive `q`.
    pub fn has_numerical_failure(&self) -> bool {
        self.failures.iter().any(|f| f.kind == "cell_boundary")
    }

    /// `0` clean, `2` numerical failure, `3` residual above tolerance.
    pub fn exit_code(&self) -> i32 {
        if self.has_numerical_failure() {
            2
        } else if !self.exceeded.is_empty() {
            3
        } else {
            0
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PointStatus {
    Solved,
    Failed { kind: String, message: String },
}

/// Everything kept per grid point for export.
#[derive(Clone, Debug, PartialEq)]
pub struct PointRecord {
    pub z: Complex64,
    pub status: PointStatus,
    pub solution: Option<PointSolution>,
    pub residuals: FrameResiduals,
    pub consequence: f64,
    pub mc: Option<McReport>,
    /// Pulled-back frames `P̃ F̃(z, λ) P̃⁻¹`, one per `λ` sample.
    pub frames: Vec<CMatrix>,
    pub rank: usize,
    /// `‖v(z) - v‖ / ‖v‖` for the normalized lightlike vector.
    pub lightlike_deviation: f64,
}

impl PointRecord {
    fn failed(z: Complex64, rank: usize, kind: &str, message: String) -> Self {
        Self {
            z,
            status: PointStatus::Failed {
                kind: kind.into(),
                message,
            },
            solution: None,
            residuals: FrameResiduals::default(),
            consequence: 0.0,
            mc: None,
            frames: Vec::new(),
            rank,
            lightlike_deviation: f64::NAN,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub report: RunReport,
    pub records: Vec<PointRecord>,
    pub lambdas: Vec<Complex64>,
}

fn failure_kind(e: &IwasawaError) -> &'static str {
    if e.is_cell_boundary() {
        "cell_boundary"
    } else {
        "structure"
    }
}

struct Ctx<'a> {
    c: &'a ConstantSet,
    frame: &'a MeromorphicFrame,
    lambdas: &'a [Complex64],
    spec: &'a RunSpec,
}

impl Ctx<'_> {
    fn solve(&self, z: Complex64, rank: usize, branch: L11Branch) -> PointRecord {
        let tol = self.spec.tolerances.invert;
        let s = match solve_frame_at(self.frame, z, self.c, tol, branch) {
            Ok(s) => s,
            Err(e) => return PointRecord::failed(z, rank, failure_kind(&e), e.to_string()),
        };
        let residuals = match frame_residuals(&s.ftilde, &s.fplus, &s.h, self.c, self.lambdas) {
            Ok(r) => r,
            Err(e) => return PointRecord::failed(z, rank, "structure", e.to_string()),
        };
        let fnorm = self.frame.f.eval(z).norm_fro();
        let consequence = s.factors.residual_f / (1.0 + fnorm).powi(2);
        let frames = self
            .lambdas
            .iter()
            .map(|&l| conjugate_p(&s.ftilde.eval(l), self.c, Direction::Backward))
            .collect();

        let l11 = s.l0[(0, 0)];
        let sampler = |w: Complex64| -> Result<_, GeometryError> {
            Ok(solve_frame_at(self.frame, w, self.c, tol, L11Branch::NearestTo(l11))?.ftilde)
        };
        let cfg = McConfig {
            h: self.spec.fd_step,
            lambda_count: self.spec.lambda_count,
            tol: self.spec.tolerances.pattern,
        };
        let (mc, status) = match maurer_cartan(&sampler, z, self.c, &cfg) {
            Ok(r) => (Some(r), PointStatus::Solved),
            Err(e) => {
                let kind = match &e {
                    GeometryError::Iwasawa(ie) if ie.is_cell_boundary() => "mc_cell_boundary",
                    GeometryError::GridTooCoarse { .. } => "grid_too_coarse",
                    _ => "mc_failure",
                };
                (
                    None,
                    PointStatus::Failed {
                        kind: kind.into(),
                        message: e.to_string(),
                    },
                )
            }
        };
        PointRecord {
            z,
            status,
            solution: Some(s),
            residuals,
            consequence,
            mc,
            frames,
            rank,
            lightlike_deviation: f64::NAN,
        }
    }
}

/// Grid indices in boustrophedon order, so consecutive points are neighbours.
fn serpentine(n: usize) -> Vec<usize> {
    (0..n)
        .flat_map(|row| {
            let cols: Vec<usize> = if row % 2 == 0 {
                (0..n).collect()
            } else {
                (0..n).rev().collect()
            };
            cols.into_iter().map(move |col| row * n + col)
        })
        .collect()
}

/// Runs the whole pipeline on the grid of `spec`.
///
/// Per-point failures are recorded and do not stop the run; only config and shape errors
/// are returned as `Err`. The result does not depend on `spec.parallelism`.
pub fn run_pipeline(spec: &RunSpec) -> Result<RunOutput, IoError> {
    spec.validate()?;
    let c = build_constants(spec.m)?;
    let pspec = spec.potential_spec();
    let bhat = native_bhat(&pspec)?;
    let points = spec.grid.points();
    let lambdas = unit_circle_samples(spec.lambda_count);
    let tol = &spec.tolerances;

    let profile = rank_profile(&bhat, &points, tol.rank);
    let mut histogram = vec![0; 5];
    for &r in &profile.ranks {
        histogram[r.min(4)] += 1;
    }
    let rank = RankSummary {
        max_rank: profile.max_rank,
        class: profile.class,
        histogram,
    };
    let mut residuals = ResidualMaxima {
        potential_isotropy: isotropy_residual(&bhat, &points)?,
        ..Default::default()
    };
    let mut report = RunReport {
        m: spec.m,
        grid_n: spec.grid.n,
        grid_radius: spec.grid.radius,
        lambda_count: spec.lambda_count,
        points_total: points.len(),
        points_solved: 0,
        residuals,
        exceeded: Vec::new(),
        rank,
        lightlike_vector: None,
        causal_type: None,
        verdict: Verdict::Inconclusive,
        verdict_basis: String::new(),
        failures: Vec::new(),
    };

    let eta = to_loop_potential(&bhat, &c)?;
    let extraction = match extract_ftilde(&eta, &c, PATTERN_TOL) {
        Ok(x) => x,
        Err(HoloError::PatternViolation { residual, .. }) => {
            report.residuals.ftilde_pattern = residual;
            report.verdict = Verdict::OutsideLightlikeFamily;
            report.verdict_basis = Verdict::OutsideLightlikeFamily.basis().into();
            let msg = format!("off-pattern residual {residual:e}");
            let records = points
                .iter()
                .zip(&profile.ranks)
                .map(|(&z, &r)| PointRecord::failed(z, r, "outside_family", msg.clone()))
                .collect();
            return Ok(RunOutput {
                report,
                records,
                lambdas,
            });
        }
        Err(e) => return Err(e.into()),
    };
    residuals.ftilde_pattern = extraction.pattern_residual;
    let frame = integrate_meromorphic_frame(&extraction.ftilde, &c).map_err(|e| match e {
        FrameError::Holo(h) => IoError::Spec(h),
        other => IoError::Validation(other.to_string()),
    })?;
    residuals.meromorphic_ode = ode_residual_h(&frame, &eta, &c, &points, &lambdas[..1])
        .map_err(|e| IoError::Validation(e.to_string()))?;

    let ctx = Ctx {
        c: &c,
        frame: &frame,
        lambdas: &lambdas,
        spec,
    };
    let mut records: Vec<PointRecord> = match spec.branch_mode {
        BranchMode::Principal => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(spec.parallelism)
                .build()
                .map_err(|e| IoError::Validation(format!("thread pool: {e}")))?;
            pool.install(|| {
                points
                    .par_iter()
                    .zip(profile.ranks.par_iter())
                    .map(|(&z, &r)| ctx.solve(z, r, L11Branch::Principal))
                    .collect()
            })
        }
        BranchMode::Continued => {
            let mut out: Vec<Option<PointRecord>> = vec![None; points.len()];
            let mut prev = C1;
            for i in serpentine(spec.grid.n) {
                let rec = ctx.solve(points[i], profile.ranks[i], L11Branch::NearestTo(prev));
                if let Some(s) = &rec.solution {
                    prev = s.l0[(0, 0)];
                }
                out[i] = Some(rec);
            }
            out.into_iter().map(|r| r.expect("serpentine covers the grid")).collect()
        }
    };

    // Reductions in grid order.
    let mut solved_idx = Vec::new();
    for (i, rec) in records.iter().enumerate() {
        if rec.solution.is_some() {
            solved_idx.push(i);
            let r = &rec.residuals;
            residuals.iwasawa = residuals.iwasawa.max(r.iwasawa);
            residuals.reality = residuals.reality.max(r.reality);
            residuals.membership = residuals.membership.max(r.membership);
            residuals.twist = residuals.twist.max(r.twist);
            residuals.degree_bound = residuals.degree_bound.max(r.degree_bound);
            residuals.plus_positivity = residuals.plus_positivity.max(r.plus_positivity);
            residuals.consequence = residuals.consequence.max(rec.consequence);
        }
        if let Some(mc) = &rec.mc {
            residuals.mc_pattern = residuals.mc_pattern.max(mc.prohibited.max(mc.real_blocks).max(mc.a1_pattern).max(mc.b1_pattern));
            residuals.mc_step_halving = residuals.mc_step_halving.max(mc.prohibited_half);
            residuals.mc_fd_error = residuals.mc_fd_error.max(mc.fd_error);
            residuals.a12_proportionality = residuals.a12_proportionality.max(mc.a12_proportionality);
        }
        if let PointStatus::Failed { kind, message } = &rec.status {
            report.failures.push(PointFailure {
                index: Some(i),
                z: Some([rec.z.re, rec.z.im]),
                kind: kind.clone(),
                message: message.clone(),
            });
        }
    }
    report.points_solved = solved_idx.len();

    let mut geometry_ok = true;
    if !solved_idx.is_empty() {
        let field = FrameField::from_frames(
            solved_idx.iter().map(|&i| records[i].z).collect(),
            spec.grid.spacing(),
            lambdas[0],
            solved_idx.iter().map(|&i| records[i].frames[0].clone()).collect(),
        );
        let geom = field.and_then(|field| {
            let ll = constant_lightlike(&field)?;
            let cv = constant_vector_check(&field, &ll.v, tol.residual)?;
            Ok((field, ll, cv))
        });
        match geom {
            Ok((field, ll, cv)) => {
                let vn = ll.v.iter().map(|x| x * x).sum::<f64>().sqrt();
                for (k, &i) in solved_idx.iter().enumerate() {
                    let f = &field.frames[k];
                    let w0 = f[(0, 0)].re + f[(0, 1)].re;
                    let dev: f64 = (0..f.rows())
                        .map(|r| ((f[(r, 0)].re + f[(r, 1)].re) / w0 - ll.v[r]).powi(2))
                        .sum::<f64>()
                        .sqrt();
                    records[i].lightlike_deviation = dev / vn;
                }
                residuals.lightlike_const = ll.const_residual;
                residuals.lightlike_isotropy = ll.isotropy_residual;
                residuals.constant_vector = cv.residual;
                report.lightlike_vector = Some(ll.v);
                report.causal_type = Some(cv.causal);
            }
            Err(e) => {
                geometry_ok = false;
                report.failures.push(PointFailure {
                    index: None,
                    z: None,
                    kind: "geometry".into(),
                    message: e.to_string(),
                });
            }
        }
    }

    let checks = [
        ("iwasawa", residuals.iwasawa, tol.residual),
        ("reality", residuals.reality, tol.residual),
        ("membership", residuals.membership, tol.residual),
        ("twist", residuals.twist, tol.residual),
        ("degree_bound", residuals.degree_bound, tol.residual),
        ("plus_positivity", residuals.plus_positivity, tol.residual),
        ("consequence", residuals.consequence, CONSEQUENCE_TOL),
        ("meromorphic_ode", residuals.meromorphic_ode, tol.residual),
        ("mc_pattern", residuals.mc_pattern, tol.pattern),
        ("mc_step_halving", residuals.mc_step_halving, tol.pattern),
        ("a12_proportionality", residuals.a12_proportionality, tol.pattern),
        ("lightlike_const", residuals.lightlike_const, tol.lightlike),
        ("lightlike_isotropy", residuals.lightlike_isotropy, tol.residual),
        ("constant_vector", residuals.constant_vector, tol.residual),
    ];
    report.exceeded = checks
        .iter()
        .filter(|(_, v, t)| !(v <= t))
        .map(|(name, _, _)| name.to_string())
        .collect();
    if records.iter().any(|r| r.solution.is_some() && r.mc.is_none()) {
        report.exceeded.push("mc_unchecked".into());
    }
    if report.failures.iter().any(|f| f.kind != "cell_boundary") {
        geometry_ok = false;
    }
    report.residuals = residuals;

    let cell_boundary = report.has_numerical_failure();
    report.verdict = if extraction.ftilde.is_zero() {
        Verdict::Trivial
    } else if cell_boundary {
        Verdict::CellBoundaryEncountered
    } else if !geometry_ok || !report.exceeded.is_empty() {
        Verdict::Inconclusive
    } else if report.rank.max_rank >= 2 {
        Verdict::NoWillmoreSurface
    } else {
        Verdict::MinimalSurfaceCandidate
    };
    report.verdict_basis = report.verdict.basis().into();
    Ok(RunOutput {
        report,
        records,
        lambdas,
    })
}
