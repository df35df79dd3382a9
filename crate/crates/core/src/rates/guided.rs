use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{AtomConfiguration, FieldCorrelation};
use crate::atom::{DipoleTable, Sublevel};
use crate::error::{Error, Result};
use crate::fiber::{supported_modes, Direction, GuidedModeSolution, ModeId, ModeKind, SolutionCache};
use crate::guided_modes::{base_profile, full_mode_function, oriented_profile};

/// Field correlation of all polarizations of one guided family in one direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GuidedChannel {
    pub kind: ModeKind,
    pub direction: Direction,
    pub beta: f64,
    pub beta_prime: f64,
    pub correlation: FieldCorrelation,
}

/// `ω β' / (2 ε0 ħ)` times the squared reduced dipole, in units of `γ0`.
pub(crate) fn guided_weight(config: &AtomConfiguration, sol: &GuidedModeSolution) -> f64 {
    let k = &config.constants;
    k.omega0 * sol.beta_prime * k.reduced_dipole.powi(2) / (2.0 * k.epsilon0 * k.hbar) / config.gamma0()
}

/// Coupling coefficient `G` (in `s^-1/2`) of transition `e -> g` to guided mode `id`.
pub fn coupling_guided(
    config: &AtomConfiguration,
    sol: &GuidedModeSolution,
    id: ModeId,
    dipoles: &DipoleTable,
    e: &Sublevel,
    g: &Sublevel,
) -> Result<Complex64> {
    let s = dipoles.structure();
    let (ei, gi) = match (s.index_of(e), s.index_of(g)) {
        (Some(ei), Some(gi)) if e.is_excited() && !g.is_excited() => (ei, gi),
        _ => return Err(Error::AngularMomentum(format!("{e} -> {g} is not a transition of this level scheme"))),
    };
    let k = &config.constants;
    let mf = full_mode_function(sol, id, &config.pos);
    let field = mf.field.to_cartesian(config.pos.phi());
    let d = dipoles.fiber_cartesian(ei, gi, &config.frame);
    let dot: Complex64 = d.iter().zip(&field).map(|(a, b)| a * b).sum();
    let pre = (k.omega0 * sol.beta_prime / (4.0 * PI * k.epsilon0 * k.hbar)).sqrt() * k.reduced_dipole;
    Ok(dot * mf.phase * pre)
}

/// Correlation matrices of every supported guided family and direction at the atom.
pub fn gamma_guided(config: &AtomConfiguration, cache: &SolutionCache) -> Result<Vec<GuidedChannel>> {
    let omega = config.omega();
    let mut out = Vec::new();
    for kind in supported_modes(&config.geom, omega) {
        let Some(sol) = cache.get_if_resolved(&config.geom, omega, kind)? else {
            continue;
        };
        let weight = guided_weight(config, &sol);
        let base = base_profile(&sol, config.pos.r());
        for direction in [Direction::Forward, Direction::Backward] {
            let mut correlation = FieldCorrelation::zero();
            for id in kind.mode_ids().into_iter().filter(|id| id.direction == direction) {
                let field = oriented_profile(&base, id).to_cartesian(config.pos.phi());
                correlation.add_field(&field, weight);
            }
            out.push(GuidedChannel { kind, direction, beta: sol.beta, beta_prime: sol.beta_prime, correlation });
        }
    }
    Ok(out)
}
