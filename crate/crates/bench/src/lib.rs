//! Shared fixtures for the benchmarks.

use nanofiber_core::{AtomConfiguration, FiberGeometry, QuantizationFrame};

/// Vacuum-clad silica fiber of radius `radius_nm`.
pub fn fiber(radius_nm: f64) -> FiberGeometry {
    FiberGeometry::vacuum_clad_silica(radius_nm * 1e-9).expect("positive radius")
}

/// Atom on the surface of a 400 nm fiber with a tilted quantization axis.
pub fn surface_atom() -> AtomConfiguration {
    let frame = QuantizationFrame::new(std::f64::consts::FRAC_PI_2, 0.3).expect("valid angles");
    AtomConfiguration::on_surface(fiber(400.0), 0.0, frame).expect("valid placement")
}
