//! Configuration, grid export, figure presets and the verification driver
//! behind the `tccss` command-line tool.

mod config;
mod export;
mod figures;
mod scatter;
mod verify;

use std::path::PathBuf;

use thiserror::Error;

use crate::lax::LaxError;
use crate::scattering::ScatteringError;
use crate::soliton::SolitonError;

pub use config::{
    parse_config, Check, ConfigError, JsonComplex, OutputFormat, OutputSpec, RunConfig, ScatteringSpec,
};
pub use export::{export_grid, sample_grid, to_csv, to_json, FieldGrid, CSV_HEADER};
pub use figures::{
    figure_spectrum, preset, ratio_error, run_figure, separation_error, FigureId, FigureOutput, FigurePreset,
    Sidecar,
};
pub use scatter::{run_scatter, sweep_csv, LambdaRange, SWEEP_HEADER};
pub use verify::{
    rh_samples, run_verify, search_seed, CheckOutcome, VerifyError, VerifyReport, CNLS_THRESHOLD, DET_THRESHOLD,
    PDE_THRESHOLD, REFLECTION_LAMBDAS, REFLECTION_THRESHOLD, RH_SYMMETRY_THRESHOLD, SCATTERING_ZERO_THRESHOLD,
    ZERO_CURVATURE_THRESHOLD, ZC_LAMBDAS,
};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("field evaluation failed: {0}")]
    Field(#[from] SolitonError),
    #[error(transparent)]
    Lax(#[from] LaxError),
    #[error(transparent)]
    Scattering(#[from] ScatteringError),
    #[error("figure id must be in 1..=4, got {0}")]
    FigureId(u8),
    #[error("invalid lambda range `{0}`: expected a:b:n with a <= b and n >= 1")]
    LambdaRange(String),
}

/// Reads and parses a configuration file.
pub fn load_config(path: &std::path::Path) -> Result<RunConfig, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read { path: path.to_path_buf(), source })?;
    Ok(parse_config(&text)?)
}
