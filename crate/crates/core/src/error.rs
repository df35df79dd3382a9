use thiserror::Error;

/// Errors raised across the emission-rate library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {value} outside the domain of {function}")]
    Domain { function: &'static str, value: f64 },

    #[error("invalid angular momentum arguments: {0}")]
    AngularMomentum(String),

    #[error("invalid fiber geometry: {0}")]
    Geometry(String),

    #[error("invalid mode label: {0}")]
    InvalidMode(String),

    #[error("mode {mode} is below cutoff (V = {v:.6}, V_c = {cutoff:.6})")]
    BelowCutoff { mode: String, v: f64, cutoff: f64 },

    #[error("no eigenvalue root found for {mode} at V = {v:.6}")]
    NoRoot { mode: String, v: f64 },

    #[error("quadrature did not converge: achieved relative change {achieved:.3e}, wanted {wanted:.3e}")]
    Quadrature { achieved: f64, wanted: f64 },

    #[error("radiation-mode parameter out of range: {0}")]
    RadiationMode(String),

    #[error("invalid density matrix: {0}")]
    DensityMatrix(String),

    #[error("ODE step size underflow at t = {t:.6e}")]
    StepUnderflow { t: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
