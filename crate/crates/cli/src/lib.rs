//! Sweep configuration, execution and export behind the `nanofiber-emission` binary.
//!
//! Boundary units: lengths in nanometers, angles in units of π, rates in units
//! of the free-space rate `γ0`.

pub mod config;
pub mod figures;
pub mod plot;
pub mod sweep;
pub mod table;

pub use config::{Output, SweepSpec, SweepVariable};
pub use sweep::run_sweep;
pub use table::Table;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("invalid sweep: {0}")]
    InvalidSpec(String),
    #[error("unknown figure `{0}` (expected fig2 .. fig21)")]
    UnknownFigure(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed table: {0}")]
    Table(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Physics(#[from] nanofiber_core::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;
