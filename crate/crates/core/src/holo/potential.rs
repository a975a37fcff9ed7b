//! Canonical potential families and the passage from `B̂₁` to the nilpotent datum `f̃`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matpoly::{MatPolyZ, Sharp};
use super::poly::PolyZ;
use super::HoloError;
use crate::algebra::{i13, CMatrix, ConstantSet, C1, CI};

/// Default pattern tolerance for [`extract_ftilde`].
pub const PATTERN_TOL: f64 = 1e-12;

/// Default relative singular-value threshold for [`rank_profile`]. Loose enough that a
/// rank-one potential perturbed at the `1e-8` level keeps rank one.
pub const RANK_REL_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LightlikeColumn {
    #[serde(default)]
    pub f0: PolyZ,
    #[serde(default)]
    pub f1: PolyZ,
    #[serde(default)]
    pub f3: PolyZ,
}

/// One column pair `(f_{j1}, f_{j2}, f_{j3}, f_{j4})` of the native nilpotent form.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MinimalPair {
    #[serde(default)]
    pub f1: PolyZ,
    #[serde(default)]
    pub f2: PolyZ,
    #[serde(default)]
    pub f3: PolyZ,
    #[serde(default)]
    pub f4: PolyZ,
}

/// How the first two rows of `B̂₁` are related.
///
/// `Native` has equal first and second rows; `SecondRowFlipped` has the second row negated,
/// which is the convention of the lightlike canonical family. The two are conjugate under
/// `diag(1, -1, 1, …, 1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gauge {
    #[default]
    Native,
    SecondRowFlipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialData {
    Lightlike {
        columns: Vec<LightlikeColumn>,
    },
    Timelike {
        g0: PolyZ,
        columns: Vec<PolyZ>,
    },
    Spacelike {
        h0: PolyZ,
        columns: Vec<PolyZ>,
    },
    /// `m - 2` column pairs; missing pairs are zero.
    MinimalNp {
        #[serde(default)]
        pairs: Vec<MinimalPair>,
    },
    /// Explicit `4 × (2m-4)` matrix, given row by row.
    Raw {
        b: Vec<Vec<PolyZ>>,
        #[serde(default)]
        gauge: Gauge,
    },
}

impl Default for PotentialData {
    fn default() -> Self {
        PotentialData::MinimalNp { pairs: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PotentialSpec {
    pub m: usize,
    pub data: PotentialData,
}

impl PotentialSpec {
    pub fn new(m: usize, data: PotentialData) -> Self {
        Self { m, data }
    }

    pub fn n_cols(&self) -> usize {
        2 * self.m - 4
    }

    /// Row convention of the matrix returned by [`build_bhat`].
    pub fn gauge(&self) -> Gauge {
        match &self.data {
            PotentialData::Lightlike { .. } => Gauge::SecondRowFlipped,
            PotentialData::Raw { gauge, .. } => *gauge,
            _ => Gauge::Native,
        }
    }

    /// True for the families whose constant vector is timelike or spacelike.
    pub fn is_space_form_family(&self) -> bool {
        matches!(
            self.data,
            PotentialData::Timelike { .. } | PotentialData::Spacelike { .. }
        )
    }

    /// Applies `f` to every stored polynomial coefficient, in a fixed traversal order.
    pub fn map_coefficients(&self, mut f: impl FnMut(Complex64) -> Complex64) -> Self {
        let mut g = |p: &PolyZ| p.map_coeffs(&mut f);
        let data = match &self.data {
            PotentialData::Lightlike { columns } => PotentialData::Lightlike {
                columns: columns
                    .iter()
                    .map(|c| LightlikeColumn {
                        f0: g(&c.f0),
                        f1: g(&c.f1),
                        f3: g(&c.f3),
                    })
                    .collect(),
            },
            PotentialData::Timelike { g0, columns } => PotentialData::Timelike {
                g0: g(g0),
                columns: columns.iter().map(&mut g).collect(),
            },
            PotentialData::Spacelike { h0, columns } => PotentialData::Spacelike {
                h0: g(h0),
                columns: columns.iter().map(&mut g).collect(),
            },
            PotentialData::MinimalNp { pairs } => PotentialData::MinimalNp {
                pairs: pairs
                    .iter()
                    .map(|p| MinimalPair {
                        f1: g(&p.f1),
                        f2: g(&p.f2),
                        f3: g(&p.f3),
                        f4: g(&p.f4),
                    })
                    .collect(),
            },
            PotentialData::Raw { b, gauge } => PotentialData::Raw {
                b: b.iter().map(|row| row.iter().map(&mut g).collect()).collect(),
                gauge: *gauge,
            },
        };
        Self { m: self.m, data }
    }
}

/// The `4 × (2m-4)` block `B̂₁` of the potential, in the family's own row convention.
pub fn build_bhat(spec: &PotentialSpec) -> Result<MatPolyZ, HoloError> {
    let n = spec.n_cols();
    let check = |what: &str, got: usize, want: usize| {
        if got == want {
            Ok(())
        } else {
            Err(HoloError::SpecMismatch(format!(
                "{what}: expected {want} for m = {}, got {got}",
                spec.m
            )))
        }
    };
    let mut b = MatPolyZ::zeros(4, n);
    match &spec.data {
        PotentialData::Lightlike { columns } => {
            check("lightlike columns", columns.len(), n)?;
            for (j, c) in columns.iter().enumerate() {
                let a = &c.f0 * &c.f1;
                let r3 = &c.f0 * &c.f3;
                b.set_entry(0, j, a.clone());
                b.set_entry(1, j, -&a);
                b.set_entry(3, j, r3.scale(CI));
                b.set_entry(2, j, r3);
            }
        }
        PotentialData::Timelike { g0, columns } => {
            check("timelike columns", columns.len(), n)?;
            let g0sq = g0 * g0;
            let col = [
                PolyZ::zero(),
                g0.scale(Complex64::new(2.0, 0.0)),
                &PolyZ::one() - &g0sq,
                (&PolyZ::one() + &g0sq).scale(CI),
            ];
            for (j, gj) in columns.iter().enumerate() {
                for (i, v) in col.iter().enumerate() {
                    b.set_entry(i, j, gj * v);
                }
            }
        }
        PotentialData::Spacelike { h0, columns } => {
            check("spacelike columns", columns.len(), n)?;
            let h0sq = h0 * h0;
            let col = [
                h0.scale(Complex64::new(0.0, 2.0)),
                PolyZ::zero(),
                &PolyZ::one() - &h0sq,
                (&PolyZ::one() + &h0sq).scale(CI),
            ];
            for (j, hj) in columns.iter().enumerate() {
                for (i, v) in col.iter().enumerate() {
                    b.set_entry(i, j, hj * v);
                }
            }
        }
        PotentialData::MinimalNp { pairs } => {
            if pairs.len() > spec.m - 2 {
                return Err(HoloError::SpecMismatch(format!(
                    "minimal_np pairs: at most {} for m = {}, got {}",
                    spec.m - 2,
                    spec.m,
                    pairs.len()
                )));
            }
            for (j, p) in pairs.iter().enumerate() {
                for (col, top, low) in [(2 * j, &p.f1, &p.f3), (2 * j + 1, &p.f2, &p.f4)] {
                    b.set_entry(0, col, top.clone());
                    b.set_entry(1, col, top.clone());
                    b.set_entry(2, col, low.clone());
                    b.set_entry(3, col, low.scale(CI));
                }
            }
        }
        PotentialData::Raw { b: rows, .. } => {
            check("raw rows", rows.len(), 4)?;
            for (i, row) in rows.iter().enumerate() {
                check(&format!("raw row {i} length"), row.len(), n)?;
                for (j, p) in row.iter().enumerate() {
                    b.set_entry(i, j, p.clone());
                }
            }
        }
    }
    Ok(b)
}

/// Converts `B̂₁` given in `gauge` to the native convention (equal first two rows).
pub fn to_native_gauge(b: &MatPolyZ, gauge: Gauge) -> MatPolyZ {
    match gauge {
        Gauge::Native => b.clone(),
        Gauge::SecondRowFlipped => {
            let mut out = b.clone();
            for j in 0..b.cols() {
                out.set_entry(1, j, -b.entry(1, j));
            }
            out
        }
    }
}

/// `B̂₁` of `spec`, converted to the native convention.
pub fn native_bhat(spec: &PotentialSpec) -> Result<MatPolyZ, HoloError> {
    Ok(to_native_gauge(&build_bhat(spec)?, spec.gauge()))
}

/// `max_z ‖B(z)ᵗ I_{1,3} B(z)‖_F`.
pub fn isotropy_residual(b: &MatPolyZ, z_samples: &[Complex64]) -> Result<f64, HoloError> {
    if b.rows() != 4 {
        return Err(HoloError::ShapeViolation(format!(
            "isotropy check expects 4 rows, got {:?}",
            b.shape()
        )));
    }
    let form = i13();
    Ok(z_samples
        .iter()
        .map(|&z| {
            let bz = b.eval(z);
            (&(&bz.transpose() * &form) * &bz).norm_fro()
        })
        .fold(0.0, f64::max))
}

/// `η₋₁ = [[0, B], [-Bᵗ I_{1,3}, 0]]`, a `2m × 2m` polynomial matrix.
pub fn to_loop_potential(b: &MatPolyZ, c: &ConstantSet) -> Result<MatPolyZ, HoloError> {
    let n = c.n_mid();
    if b.shape() != (4, n) {
        return Err(HoloError::ShapeViolation(format!(
            "B must be 4 x {n} for m = {}, got {:?}",
            c.m,
            b.shape()
        )));
    }
    let size = c.size();
    let mut eta = MatPolyZ::zeros(size, size);
    eta.set_block(0, 4, b);
    let lower = b.transpose().sandwich(&CMatrix::identity(n), &i13())?.scale(-C1);
    eta.set_block(4, 0, &lower);
    Ok(eta)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FtildeExtraction {
    /// The `2 × (2m-4)` block `f̃`.
    pub ftilde: MatPolyZ,
    /// Largest relative off-pattern norm over the `z`-coefficients.
    pub pattern_residual: f64,
}

/// Conjugates `η₋₁` by `P̃` one `z`-coefficient at a time and reads off `f̃` from the
/// `[[0, f̃, 0], [0, 0, -f̃♯], [0, 0, 0]]` pattern.
///
/// Checking every coefficient is equivalent to checking at all `z`. Each coefficient's
/// residual is measured relative to `max(1, ‖η_k‖)`.
pub fn extract_ftilde(eta: &MatPolyZ, c: &ConstantSet, tol: f64) -> Result<FtildeExtraction, HoloError> {
    let size = c.size();
    if eta.shape() != (size, size) {
        return Err(HoloError::ShapeViolation(format!(
            "potential must be {size} x {size}, got {:?}",
            eta.shape()
        )));
    }
    let n = c.n_mid();
    let mut residual: f64 = 0.0;
    let mut blocks = Vec::new();
    for ek in eta.coeff_matrices() {
        let x = &(&c.ptilde_inv * &ek) * &c.ptilde;
        let top = x.block(0, 2, 2, n);
        let mid = x.block(2, size - 2, n, 2);
        let mut off = 0.0;
        for (i, j) in (0..size).flat_map(|i| (0..size).map(move |j| (i, j))) {
            let in_top = i < 2 && (2..size - 2).contains(&j);
            let in_mid = (2..size - 2).contains(&i) && j >= size - 2;
            if !in_top && !in_mid {
                off += x[(i, j)].norm_sqr();
            }
        }
        let sharp_defect = (&mid + &top.sharp()?).norm_fro();
        let r = (off.sqrt() + sharp_defect) / ek.norm_fro().max(1.0);
        residual = residual.max(r);
        blocks.push(top);
    }
    if residual > tol {
        return Err(HoloError::PatternViolation { residual, tol });
    }
    let scale = eta.max_abs_coeff().max(1.0);
    let ftilde = if blocks.is_empty() {
        MatPolyZ::zeros(2, n)
    } else {
        MatPolyZ::from_coeff_matrices(2, n, &blocks)?.snap(1e-14 * scale)
    };
    Ok(FtildeExtraction {
        ftilde,
        pattern_residual: residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankClass {
    /// Rank at most one everywhere: the harmonic map can come from a minimal surface.
    MinimalSurfaceCandidate,
    /// Rank two somewhere: not the conformal Gauss map of any Willmore surface.
    NoWillmoreSurface,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankProfile {
    pub ranks: Vec<usize>,
    pub max_rank: usize,
    pub class: RankClass,
}

pub fn rank_profile(b: &MatPolyZ, z_samples: &[Complex64], rel_tol: f64) -> RankProfile {
    let ranks: Vec<usize> = z_samples
        .iter()
        .map(|&z| b.eval(z).numeric_rank(rel_tol))
        .collect();
    let max_rank = ranks.iter().copied().max().unwrap_or(0);
    let class = if max_rank <= 1 {
        RankClass::MinimalSurfaceCandidate
    } else {
        RankClass::NoWillmoreSurface
    };
    RankProfile {
        ranks,
        max_rank,
        class,
    }
}
