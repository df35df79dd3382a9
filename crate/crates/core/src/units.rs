//! SI constants shared by the solver and the rate engine.

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const VACUUM_PERMEABILITY: f64 = 1.256_637_062_12e-6;
pub const VACUUM_PERMITTIVITY: f64 = 1.0 / (VACUUM_PERMEABILITY * SPEED_OF_LIGHT * SPEED_OF_LIGHT);
pub const HBAR: f64 = 1.054_571_817e-34;

/// Angular frequency of light with vacuum wavelength `lambda` (meters).
pub fn angular_frequency(lambda: f64) -> f64 {
    2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / lambda
}
