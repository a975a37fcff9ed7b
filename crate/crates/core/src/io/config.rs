use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::IoError;
use crate::holo::{PotentialData, PotentialSpec, RANK_REL_TOL};
use crate::iwasawa::BranchMode;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    /// `[re, im]`.
    pub center: [f64; 2],
    /// Half-width of the square grid.
    pub radius: f64,
    /// Points per side; odd so that the center is a grid point.
    pub n: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            center: [0.0, 0.0],
            radius: 0.5,
            n: 21,
        }
    }
}

impl GridSpec {
    pub fn center(&self) -> Complex64 {
        Complex64::new(self.center[0], self.center[1])
    }

    /// Distance between neighbouring points (the radius itself when `n = 1`).
    pub fn spacing(&self) -> f64 {
        if self.n > 1 {
            2.0 * self.radius / (self.n - 1) as f64
        } else {
            self.radius
        }
    }

    /// Row-major points: `y` outer (bottom to top), `x` inner (left to right).
    pub fn points(&self) -> Vec<Complex64> {
        let h = self.spacing();
        let c = self.center();
        let half = (self.n / 2) as f64;
        (0..self.n)
            .flat_map(|iy| {
                (0..self.n).map(move |ix| c + Complex64::new((ix as f64 - half) * h, (iy as f64 - half) * h))
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Rejects a point when `|det d|` falls below it or `cond(d)` exceeds its reciprocal.
    pub invert: f64,
    /// Bound on the Iwasawa, reality, membership, twist and uniton residuals.
    pub residual: f64,
    /// Bound on the finite-difference Maurer–Cartan checks.
    pub pattern: f64,
    /// Bound on the spread of the normalized lightlike vector.
    pub lightlike: f64,
    /// Relative singular-value threshold for the rank of `B̂₁`.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            invert: 1e-12,
            residual: 1e-8,
            pattern: 1e-5,
            lightlike: 1e-7,
            rank: RANK_REL_TOL,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    pub report_path: Option<PathBuf>,
    pub frames_path: Option<PathBuf>,
    pub fields_path: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSpec {
    pub m: usize,
    pub potential: PotentialData,
    pub grid: GridSpec,
    pub lambda_count: usize,
    pub tolerances: Tolerances,
    pub fd_step: f64,
    pub branch_mode: BranchMode,
    pub outputs: Outputs,
    pub parallelism: usize,
}

impl Default for RunSpec {
    fn default() -> Self {
        Self {
            m: 3,
            potential: PotentialData::default(),
            grid: GridSpec::default(),
            lambda_count: 8,
            tolerances: Tolerances::default(),
            fd_step: 1e-3,
            branch_mode: BranchMode::Principal,
            outputs: Outputs::default(),
            parallelism: 1,
        }
    }
}

impl RunSpec {
    pub fn potential_spec(&self) -> PotentialSpec {
        PotentialSpec::new(self.m, self.potential.clone())
    }

    /// Checks every invariant and names the first one that fails.
    pub fn validate(&self) -> Result<(), IoError> {
        let fail = |msg: String| Err(IoError::Validation(msg));
        if self.m < 3 {
            return fail(format!("m must be at least 3, got {}", self.m));
        }
        if self.grid.n.is_multiple_of(2) {
            return fail("grid.n must be odd".into());
        }
        if !(self.grid.radius > 0.0 && self.grid.radius.is_finite()) {
            return fail(format!("grid.radius must be positive, got {}", self.grid.radius));
        }
        if !self.grid.center.iter().all(|x| x.is_finite()) {
            return fail("grid.center must be finite".into());
        }
        if self.lambda_count < 4 {
            return fail(format!("lambda_count must be at least 4, got {}", self.lambda_count));
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("invert", t.invert),
            ("residual", t.residual),
            ("pattern", t.pattern),
            ("lightlike", t.lightlike),
            ("rank", t.rank),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return fail(format!("tolerances.{name} must lie in (0, 1), got {v}"));
            }
        }
        if !(self.fd_step > 0.0 && self.fd_step.is_finite()) {
            return fail(format!("fd_step must be positive, got {}", self.fd_step));
        }
        if self.parallelism < 1 {
            return fail("parallelism must be at least 1".into());
        }
        Ok(())
    }
}

/// Parses and validates a config document.
pub fn parse_config(text: &str) -> Result<RunSpec, IoError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let spec: RunSpec = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        IoError::Parse {
            line: inner.line(),
            column: inner.column(),
            field: path,
            message: inner.to_string(),
        }
    })?;
    spec.validate()?;
    Ok(spec)
}

pub fn load_config(path: &Path) -> Result<RunSpec, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    parse_config(&text)
}
