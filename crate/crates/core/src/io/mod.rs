//! Run configuration, grid orchestration of the full pipeline, and file export.

pub mod config;
pub mod export;
pub mod pipeline;

pub use config::{load_config, parse_config, GridSpec, Outputs, RunSpec, Tolerances};
pub use export::{export_outputs, report_json, write_fields_csv, write_frames_csv, write_report};
pub use pipeline::{
    run_pipeline, PointFailure, PointRecord, PointStatus, RankSummary, ResidualMaxima, RunOutput, RunReport,
    Verdict,
};

use std::path::PathBuf;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::holo::HoloError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    #[error("parse error at line {line}, column {column} (field `{field}`): {message}")]
    Parse {
        line: usize,
        column: usize,
        field: String,
        message: String,
    },
    #[error("invalid config: {0}")]
    Validation(String),
    #[error("potential does not fit the run: {0}")]
    Spec(#[from] HoloError),
    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
