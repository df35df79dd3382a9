//! Decay rates of the hyperfine sublevels into guided and radiation modes.
//!
//! Every rate is a quadratic form of the atomic dipole in the field
//! correlation matrix `S_ab = Σ_modes w e_a e_b*` at the atom. Building `S`
//! once per channel lets all 16 x 8 transitions and the cross coefficients
//! share a single field evaluation.

mod correlation;
mod decomposition;
mod density;
mod guided;
mod radiation;
mod report;
mod tensor;

use serde::{Deserialize, Serialize};

use crate::atom::{free_space_rate, DipoleTable, PhysicalConstants, QuantizationFrame};
use crate::error::{Error, Result};
use crate::fiber::{FiberGeometry, SolutionCache};
use crate::guided_modes::AtomPosition;

pub use correlation::FieldCorrelation;
pub use decomposition::{rank2_product, rate_decomposition, tensor_contraction, RateDecomposition};
pub use density::{evolve_density_matrix, DensityMatrix, EvolveOptions};
pub use guided::{coupling_guided, gamma_guided, GuidedChannel};
pub use radiation::{gamma_radiation, RadiationOptions, RadiationRates};
pub use report::{asymmetry, directional_report, ModeChannelRates, RateReport, SublevelRates};
pub use tensor::DecayCoefficientTensor;

/// Fiber, atom placement, quantization axis and transition constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomConfiguration {
    pub geom: FiberGeometry,
    pub pos: AtomPosition,
    pub frame: QuantizationFrame,
    pub constants: PhysicalConstants,
}

impl AtomConfiguration {
    pub fn new(geom: FiberGeometry, pos: AtomPosition, frame: QuantizationFrame) -> Self {
        Self { geom, pos, frame, constants: PhysicalConstants::default() }
    }

    /// Atom on the fiber surface at azimuth `phi`, `z = 0`.
    pub fn on_surface(geom: FiberGeometry, phi: f64, frame: QuantizationFrame) -> Result<Self> {
        Ok(Self::new(geom, AtomPosition::new(geom.radius(), phi, 0.0)?, frame))
    }

    pub fn omega(&self) -> f64 {
        self.constants.omega0
    }

    /// Whether the atom sits outside the glass.
    pub fn is_physical(&self) -> bool {
        self.pos.r() >= self.geom.radius()
    }

    fn check(&self) -> Result<()> {
        if !(self.pos.r().is_finite() && self.pos.r() >= 0.0) {
            return Err(Error::Geometry(format!("radial position {} is invalid", self.pos.r())));
        }
        Ok(())
    }

    /// Free-space rate of the excited level, the unit of every reported rate.
    pub fn gamma0(&self) -> f64 {
        free_space_rate(&self.constants)
    }
}

/// Shared state for repeated rate evaluations: solved guided modes, dipole
/// table and radiation quadrature settings.
#[derive(Debug)]
pub struct RateEngine {
    cache: SolutionCache,
    dipoles: DipoleTable,
    radiation: RadiationOptions,
}

impl Default for RateEngine {
    fn default() -> Self {
        Self::new(RadiationOptions::default())
    }
}

impl RateEngine {
    pub fn new(radiation: RadiationOptions) -> Self {
        Self { cache: SolutionCache::new(), dipoles: DipoleTable::rb87_d2(), radiation }
    }

    pub fn coarse() -> Self {
        Self::new(RadiationOptions::coarse())
    }

    pub fn dipoles(&self) -> &DipoleTable {
        &self.dipoles
    }

    pub fn cache(&self) -> &SolutionCache {
        &self.cache
    }

    pub fn radiation_options(&self) -> &RadiationOptions {
        &self.radiation
    }

    /// Guided channels, one per `(N, f)`.
    pub fn guided(&self, config: &AtomConfiguration) -> Result<Vec<GuidedChannel>> {
        config.check()?;
        gamma_guided(config, &self.cache)
    }

    pub fn radiation(&self, config: &AtomConfiguration) -> Result<RadiationRates> {
        config.check()?;
        gamma_radiation(config, &self.radiation)
    }

    /// Full report including the radiation continuum.
    pub fn report(&self, config: &AtomConfiguration) -> Result<RateReport> {
        let guided = self.guided(config)?;
        let radiation = self.radiation(config)?;
        Ok(RateReport::from_channels(config, &self.dipoles, &guided, Some(&radiation.correlation)))
    }

    /// Report restricted to guided modes; radiation fields are left empty.
    pub fn guided_report(&self, config: &AtomConfiguration) -> Result<RateReport> {
        let guided = self.guided(config)?;
        Ok(RateReport::from_channels(config, &self.dipoles, &guided, None))
    }

    pub fn decay_tensor(&self, config: &AtomConfiguration) -> Result<DecayCoefficientTensor> {
        let guided = self.guided(config)?;
        let radiation = self.radiation(config)?;
        let total_guided = guided.iter().fold(FieldCorrelation::zero(), |acc, ch| acc + ch.correlation);
        Ok(DecayCoefficientTensor::build(config, &self.dipoles, &total_guided, &radiation.correlation))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::LevelStructure;
    use crate::fiber::{Direction, ModeId, ModeKind, Polarization};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn surface(frame: QuantizationFrame) -> AtomConfiguration {
        AtomConfiguration::on_surface(FiberGeometry::vacuum_clad_silica(400e-9).unwrap(), 0.0, frame).unwrap()
    }

    #[test]
    fn asymmetry_handles_empty_channels() {
        assert_eq!(asymmetry(0.0, 0.0), 0.0);
        assert_eq!(asymmetry(1.0, 0.0), 1.0);
        assert!((asymmetry(3.0, 1.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rank_decomposition_identity_for_arbitrary_vectors() {
        let d = [c(0.3, -0.2), c(-1.1, 0.4), c(0.25, 0.9)];
        let e = [c(0.0, 0.7), c(0.5, -0.3), c(-0.8, 0.1)];
        let dc = d.map(|x| x.conj());
        let ec = e.map(|x| x.conj());
        let dot: Complex64 = d.iter().zip(&e).map(|(a, b)| a * b).sum();
        let d2: f64 = d.iter().map(|x| x.norm_sqr()).sum();
        let e2: f64 = e.iter().map(|x| x.norm_sqr()).sum();
        let cross = |a: &[Complex64; 3], b: &[Complex64; 3]| {
            [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
        };
        let v: Complex64 = cross(&dc, &d).iter().zip(&cross(&ec, &e)).map(|(a, b)| a * b).sum();
        let t = tensor_contraction(&rank2_product(&dc, &d), &rank2_product(&ec, &e));
        let sum = d2 * e2 / 3.0 + v.re / 2.0 + t.re;
        assert!((sum - dot.norm_sqr()).abs() < 1e-13, "{sum} vs {}", dot.norm_sqr());
    }

    #[test]
    fn correlation_is_hermitian_and_rates_nonnegative() {
        let engine = RateEngine::default();
        let cfg = surface(QuantizationFrame::new(1.0, 0.4).unwrap());
        for ch in engine.guided(&cfg).unwrap() {
            assert!(ch.correlation.hermiticity_defect() < 1e-12 * ch.correlation.trace());
        }
        let report = engine.guided_report(&cfg).unwrap();
        assert!(report.sublevels.iter().all(|s| s.guided >= 0.0 && s.radiation.is_none()));
        assert_eq!(report.sublevels.len(), 16);
    }

    #[test]
    fn coupling_selection_rule_and_phase_relation() {
        let engine = RateEngine::default();
        let cfg = surface(QuantizationFrame::fiber_axis());
        let s = LevelStructure::rb87_d2();
        let sol = engine.cache().get_or_solve(&cfg.geom, cfg.omega(), ModeKind::HE11).unwrap();
        let e = s.excited_level(3, 3).unwrap();
        let far = s.ground().iter().find(|g| g.m.twice() == 2 && g.f.twice() == 2).unwrap();
        let id = ModeId::new(ModeKind::HE11, Direction::Forward, Polarization::Plus).unwrap();
        assert_eq!(coupling_guided(&cfg, &sol, id, engine.dipoles(), &e, far).unwrap(), c(0.0, 0.0));

        let z = 137e-9;
        let shifted = AtomConfiguration { pos: AtomPosition::new(cfg.pos.r(), 0.3, z).unwrap(), ..cfg };
        for g in s.ground() {
            for kind in [ModeKind::HE11, ModeKind::TM01, ModeKind::HE21] {
                let sol = engine.cache().get_or_solve(&cfg.geom, cfg.omega(), kind).unwrap();
                for id in kind.mode_ids().into_iter().filter(|id| id.direction == Direction::Forward) {
                    let back = ModeId { direction: Direction::Backward, ..id };
                    let gf = coupling_guided(&shifted, &sol, id, engine.dipoles(), &e, g).unwrap();
                    let gb = coupling_guided(&shifted, &sol, back, engine.dipoles(), &e, g).unwrap();
                    let dm = (e.m.twice() - g.m.twice()) / 2;
                    let sign = if (1 + dm).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    let expect = gb * Complex64::from_polar(1.0, 2.0 * sol.beta * z) * sign;
                    assert!((gf - expect).norm() <= 1e-12 * (gf.norm() + 1.0), "{kind} {g}");
                    let at_origin = coupling_guided(&cfg, &sol, id, engine.dipoles(), &e, g).unwrap();
                    let moved = AtomConfiguration { pos: AtomPosition::new(cfg.pos.r(), 0.0, z).unwrap(), ..cfg };
                    let gz = coupling_guided(&moved, &sol, id, engine.dipoles(), &e, g).unwrap();
                    assert!((gz.norm() - at_origin.norm()).abs() <= 1e-12 * (at_origin.norm() + 1.0));
                }
            }
        }
    }

    #[test]
    fn guided_rate_vanishes_far_from_fiber() {
        let engine = RateEngine::default();
        let geom = FiberGeometry::vacuum_clad_silica(400e-9).unwrap();
        let cfg =
            AtomConfiguration::new(geom, AtomPosition::new(20.0 * 400e-9, 0.0, 0.0).unwrap(), QuantizationFrame::fiber_axis());
        let report = engine.guided_report(&cfg).unwrap();
        assert!(report.sublevels.iter().all(|s| s.guided < 1e-6));
    }

    #[test]
    fn positivity_check_rejects_indefinite_matrices() {
        let mut rho = DensityMatrix::zeros(1, 1);
        rho[(0, 0)] = c(0.5, 0.0);
        rho[(1, 1)] = c(0.5, 0.0);
        rho[(0, 1)] = c(0.5, 0.0);
        rho[(1, 0)] = c(0.5, 0.0);
        assert!(rho.validate(1e-12).is_ok());
        rho[(0, 1)] = c(0.6, 0.0);
        rho[(1, 0)] = c(0.6, 0.0);
        assert!(!rho.is_positive_semidefinite(1e-12));
    }

    #[test]
    fn two_level_decay_matches_closed_form() {
        let rate = 0.8;
        let tensor =
            DecayCoefficientTensor::from_parts(1, 1, vec![c(rate, 0.0)], vec![c(0.0, 0.0)]);
        let psi = [c(0.6, 0.0), c(0.0, 0.8)];
        let rho0 = DensityMatrix::pure(1, 1, &psi).unwrap();
        let times = [0.0, 0.5, 1.0, 3.0];
        let out = evolve_density_matrix(&tensor, &rho0, &times, &EvolveOptions::default()).unwrap();
        for (t, rho) in times.iter().zip(&out) {
            assert!((rho.population(0) - 0.36 * (-rate * t).exp()).abs() < 1e-9);
            let coh = rho0[(0, 1)] * (-rate * t / 2.0).exp();
            assert!((rho[(0, 1)] - coh).norm() < 1e-9);
            assert!((rho.trace() - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn evolution_rejects_bad_inputs() {
        let tensor = DecayCoefficientTensor::from_parts(1, 1, vec![c(1.0, 0.0)], vec![c(0.0, 0.0)]);
        let rho = DensityMatrix::excited_state(1, 1, 0);
        assert!(evolve_density_matrix(&tensor, &rho, &[1.0, 0.5], &EvolveOptions::default()).is_err());
        let wrong = DensityMatrix::excited_state(2, 1, 0);
        assert!(evolve_density_matrix(&tensor, &wrong, &[1.0], &EvolveOptions::default()).is_err());
        assert!(DensityMatrix::zeros(1, 1).validate(1e-9).is_err());
    }
}
