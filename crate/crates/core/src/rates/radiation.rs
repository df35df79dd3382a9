use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{AtomConfiguration, FieldCorrelation};
use crate::error::{Error, Result};
use crate::fiber::Polarization;
use crate::quadrature::kronrod15;
use crate::radiation_modes::{effective_radius, radiation_profile_with_table, RadiationNode};
use crate::specfun::JyTable;

/// Quadrature and truncation settings for the radiation continuum.
///
/// The `β` integral is taken in `θ` with `β = k n2 sin θ` by adaptive
/// 15-point Kronrod panels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiationOptions {
    /// Uniform panels on `(-π/2, π/2)` before refinement.
    pub initial_panels: usize,
    /// Target for the summed Kronrod error estimate relative to the trace.
    pub rel_tol: f64,
    pub max_panels: usize,
    pub l_start: usize,
    pub l_step: usize,
    /// Truncation stops once the top `l_step / 2` orders add less than this fraction.
    pub l_tol: f64,
    pub l_cap: usize,
}

impl Default for RadiationOptions {
    fn default() -> Self {
        Self {
            initial_panels: 16,
            rel_tol: 1e-6,
            max_panels: 4096,
            l_start: 10,
            l_step: 10,
            l_tol: 1e-6,
            l_cap: 400,
        }
    }
}

impl RadiationOptions {
    /// Looser error targets (`1e-4` for the `β` integral, `1e-5` for the
    /// `l` truncation) for long sweeps.
    pub fn coarse() -> Self {
        Self { initial_panels: 8, rel_tol: 1e-4, l_tol: 1e-5, ..Self::default() }
    }
}

/// Radiation-mode correlation at the atom with quadrature diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiationRates {
    pub correlation: FieldCorrelation,
    /// Integrand evaluations in the accepted panel set.
    pub nodes: usize,
    /// Summed Kronrod error estimate relative to the trace.
    pub achieved: f64,
    /// Largest `|l|` used at any node.
    pub l_max: usize,
}

/// `Σ_{l,p} e e†` at one `β`, with `|l|` grown in shells until negligible.
fn node_correlation(
    config: &AtomConfiguration,
    beta: f64,
    opts: &RadiationOptions,
) -> Result<(FieldCorrelation, usize)> {
    let (r, phi) = (effective_radius(&config.geom, config.pos.r()), config.pos.phi());
    let a = config.geom.radius();
    let mut total = FieldCorrelation::zero();
    let mut done: i64 = -1;
    let mut l_max = opts.l_start;
    loop {
        let node = RadiationNode::new(&config.geom, config.omega(), beta, l_max)?;
        let x = if r < a { node.h() * r } else { node.q() * r };
        let table = JyTable::new(l_max + 1, x);
        let tail_from = l_max.saturating_sub((opts.l_step / 2).max(1)) + 1;
        let mut tail = 0.0;
        for order in (done + 1) as usize..=l_max {
            let mut shell = FieldCorrelation::zero();
            let ls: &[i32] = if order == 0 { &[0] } else { &[order as i32, -(order as i32)] };
            for &l in ls {
                for p in [Polarization::Plus, Polarization::Minus] {
                    if let Some(mode) = node.mode(l, p) {
                        let e = radiation_profile_with_table(&mode, r, &table).to_cartesian(phi);
                        shell.add_field(&e, 1.0);
                    }
                }
            }
            if order >= tail_from {
                tail += shell.trace();
            }
            total += shell;
        }
        done = l_max as i64;
        let settled = tail <= opts.l_tol * total.trace();
        if settled || l_max >= opts.l_cap {
            return Ok((total, l_max));
        }
        l_max += opts.l_step;
    }
}

struct Panel {
    lo: f64,
    hi: f64,
    value: FieldCorrelation,
    err: f64,
    l_max: usize,
}

fn panel(config: &AtomConfiguration, opts: &RadiationOptions, lo: f64, hi: f64) -> Result<Panel> {
    let kn2 = config.omega() / config.constants.c * config.geom.n2();
    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    let mut kronrod = FieldCorrelation::zero();
    let mut gauss = FieldCorrelation::zero();
    let mut l_max = 0;
    for (x, wk, wg) in kronrod15() {
        let theta = mid + half * x;
        let (s, l) = node_correlation(config, kn2 * theta.sin(), opts)?;
        let jac = half * kn2 * theta.cos();
        kronrod += s * (wk * jac);
        if wg != 0.0 {
            gauss += s * (wg * jac);
        }
        l_max = l_max.max(l);
    }
    Ok(Panel { lo, hi, err: kronrod.max_abs_diff(&gauss), value: kronrod, l_max })
}

fn panels(config: &AtomConfiguration, opts: &RadiationOptions, bounds: &[(f64, f64)]) -> Result<Vec<Panel>> {
    bounds.par_iter().map(|&(lo, hi)| panel(config, opts, lo, hi)).collect()
}

/// Radiation-mode contribution `Σ_{lp} ∫ dβ (ω/2ε0ħ) e e†` in units of `γ0`.
pub fn gamma_radiation(config: &AtomConfiguration, opts: &RadiationOptions) -> Result<RadiationRates> {
    let k = &config.constants;
    let weight = k.omega0 * k.reduced_dipole.powi(2) / (2.0 * k.epsilon0 * k.hbar) / config.gamma0();
    let half_pi = std::f64::consts::FRAC_PI_2;
    let n0 = opts.initial_panels.max(1);
    let width = 2.0 * half_pi / n0 as f64;
    let bounds: Vec<(f64, f64)> =
        (0..n0).map(|i| (-half_pi + i as f64 * width, -half_pi + (i + 1) as f64 * width)).collect();
    let mut current = panels(config, opts, &bounds)?;
    loop {
        let total: FieldCorrelation = current.iter().map(|p| p.value).sum();
        let err: f64 = current.iter().map(|p| p.err).sum();
        let scale = total.trace().abs().max(f64::MIN_POSITIVE);
        let achieved = err / scale;
        if achieved <= opts.rel_tol {
            let l_max = current.iter().map(|p| p.l_max).max().unwrap_or(0);
            return Ok(RadiationRates { correlation: total * weight, nodes: 15 * current.len(), achieved, l_max });
        }
        let share = opts.rel_tol * scale / current.len() as f64;
        let (split, keep): (Vec<Panel>, Vec<Panel>) = current.into_iter().partition(|p| p.err > share);
        if keep.len() + 2 * split.len() > opts.max_panels {
            return Err(Error::Quadrature { achieved, wanted: opts.rel_tol });
        }
        let halves: Vec<(f64, f64)> = split
            .iter()
            .flat_map(|p| {
                let mid = 0.5 * (p.lo + p.hi);
                [(p.lo, mid), (mid, p.hi)]
            })
            .collect();
        current = keep;
        current.extend(panels(config, opts, &halves)?);
    }
}
