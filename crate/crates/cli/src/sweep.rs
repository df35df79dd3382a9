use std::f64::consts::PI;

use rayon::prelude::*;

use nanofiber_core::fiber::supported_modes;
use nanofiber_core::rates::{GuidedChannel, SublevelRates};
use nanofiber_core::{
    AtomConfiguration, AtomPosition, Direction, FiberGeometry, ModeKind, PhysicalConstants, QuantizationFrame,
    RateEngine, RateReport,
};

use crate::config::{Output, SweepSpec, SweepVariable};
use crate::table::Table;
use crate::CliResult;

fn configuration(spec: &SweepSpec, x: f64) -> CliResult<AtomConfiguration> {
    let mut s = spec.clone();
    match spec.variable {
        SweepVariable::RadialDistance => s.r_over_a = x,
        SweepVariable::FiberRadius => s.radius_nm = x,
        SweepVariable::PhiQ => s.phi_q = x,
        SweepVariable::ThetaQ => s.theta_q = x,
    }
    let geom = FiberGeometry::new(s.radius_nm * 1e-9, s.n1, s.n2)?;
    let pos = AtomPosition::new(s.r_over_a * geom.radius(), s.atom_phi * PI, 0.0)?;
    let frame = QuantizationFrame::new(s.theta_q * PI, (s.phi_q * PI).rem_euclid(2.0 * PI))?;
    let mut config = AtomConfiguration::new(geom, pos, frame);
    config.constants = PhysicalConstants::with_wavelength(s.wavelength_nm * 1e-9);
    Ok(config)
}

/// Guided families that get columns: every family supported anywhere on the grid.
fn column_modes(spec: &SweepSpec) -> CliResult<Vec<ModeKind>> {
    let widest = match spec.variable {
        SweepVariable::FiberRadius => spec.stop.max(spec.start),
        _ => spec.radius_nm,
    };
    let geom = FiberGeometry::new(widest * 1e-9, spec.n1, spec.n2)?;
    let omega = PhysicalConstants::with_wavelength(spec.wavelength_nm * 1e-9).omega0;
    Ok(supported_modes(&geom, omega))
}

fn sublevel_label(s: &SublevelRates) -> String {
    format!("M={:+}", s.level.m.value() as i32)
}

fn columns(spec: &SweepSpec, modes: &[ModeKind], template: &RateReport) -> Vec<String> {
    let mut cols = vec![spec.variable.column_name().to_string()];
    for out in &spec.outputs {
        for s in template.hyperfine(spec.hyperfine) {
            if out.per_mode() {
                for kind in modes {
                    cols.push(format!("{}[{kind}:{}]", out.name(), sublevel_label(s)));
                }
            } else {
                cols.push(format!("{}[{}]", out.name(), sublevel_label(s)));
            }
        }
    }
    cols
}

fn row(spec: &SweepSpec, modes: &[ModeKind], x: f64, report: &RateReport) -> Vec<f64> {
    let mut values = vec![x];
    for out in &spec.outputs {
        for s in report.hyperfine(spec.hyperfine) {
            let total = s.total().unwrap_or(f64::NAN);
            let mode = |kind: ModeKind| s.mode(kind).copied();
            match out {
                Output::Guided => values.push(s.guided),
                Output::Radiation => values.push(s.radiation.unwrap_or(f64::NAN)),
                Output::Total => values.push(total),
                Output::Eta => values.push(s.guided / total),
                Output::EtaForward => values.push(s.eta_direction(Direction::Forward).unwrap_or(f64::NAN)),
                Output::EtaBackward => values.push(s.eta_direction(Direction::Backward).unwrap_or(f64::NAN)),
                Output::Zeta => values.push(s.zeta()),
                Output::ModeRate => values.extend(modes.iter().map(|&k| mode(k).map_or(0.0, |m| m.total()))),
                Output::ModeEta => values.extend(modes.iter().map(|&k| mode(k).map_or(0.0, |m| m.total()) / total)),
                Output::ModeZeta => values.extend(modes.iter().map(|&k| mode(k).map_or(0.0, |m| m.asymmetry()))),
            }
        }
    }
    values
}

/// Evaluate a sweep. Grid points run on the rayon pool; rows come back in grid order.
pub fn run_sweep(spec: &SweepSpec) -> CliResult<Table> {
    spec.validate()?;
    let engine = if spec.coarse { RateEngine::coarse() } else { RateEngine::default() };
    let with_radiation = spec.outputs.iter().any(|o| o.needs_radiation());
    let modes = column_modes(spec)?;
    let grid = spec.grid();

    let reports: Vec<RateReport> = if spec.variable.is_frame_only() {
        // The field correlations do not depend on the quantization frame.
        let base = configuration(spec, grid[0])?;
        let guided: Vec<GuidedChannel> = engine.guided(&base)?;
        let radiation = if with_radiation { Some(engine.radiation(&base)?.correlation) } else { None };
        grid.par_iter()
            .map(|&x| {
                let config = configuration(spec, x)?;
                Ok(RateReport::from_channels(&config, engine.dipoles(), &guided, radiation.as_ref()))
            })
            .collect::<CliResult<_>>()?
    } else {
        grid.par_iter()
            .map(|&x| {
                let config = configuration(spec, x)?;
                Ok(if with_radiation { engine.report(&config)? } else { engine.guided_report(&config)? })
            })
            .collect::<CliResult<_>>()?
    };

    let columns = columns(spec, &modes, &reports[0]);
    let rows = grid.iter().zip(&reports).map(|(&x, r)| row(spec, &modes, x, r)).collect();
    Ok(Table { metadata: spec.metadata(), columns, rows })
}
