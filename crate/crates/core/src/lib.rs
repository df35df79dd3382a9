//! Spontaneous emission of a multilevel alkali atom near an optical nanofiber.
//!
//! Normalized guided and radiation modes of a step-index fiber are coupled to
//! the hyperfine dipole structure of the rubidium-87 D2 line. The [`rates`]
//! module turns the field at the atom into per-sublevel decay rates and
//! directional asymmetries, and integrates the resulting decay master equation.

pub mod atom;
pub mod error;
pub mod fiber;
pub mod guided_modes;
pub mod quadrature;
pub mod rates;
pub mod radiation_modes;
pub mod specfun;
pub mod units;

pub use error::{Error, Result};
pub use fiber::{
    Direction, FiberGeometry, GuidedModeSolution, ModeFamily, ModeId, ModeKind, Polarization, SolutionCache,
};
pub use guided_modes::{AtomPosition, CylindricalField};
pub use specfun::HalfInteger;
pub use atom::{DipoleTable, LevelStructure, Manifold, PhysicalConstants, QuantizationFrame, Sublevel};
pub use rates::{AtomConfiguration, RateEngine, RateReport, RadiationOptions};
