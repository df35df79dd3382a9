//! Named datasets `fig2` .. `fig21`.
//!
//! Shared defaults: a = 400 nm, 780 nm transition, silica core (1.4537) in
//! vacuum, excited level F' = 3, quantization axis along the fiber.
//! Radial sweeps cover r/a in [1, 3]; radius sweeps cover a in [200, 600] nm
//! with the atom on the surface. Angle sweeps put the atom at (r = a, phi = 0).

use crate::config::{Output, SweepSpec, SweepVariable};
use crate::CliError;

/// One panel of a figure: file stem, plot labels and the sweep behind it.
#[derive(Debug, Clone)]
pub struct Panel {
    pub stem: String,
    pub title: String,
    pub y_label: String,
    pub spec: SweepSpec,
}

pub const NAMES: [&str; 20] = [
    "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11", "fig12", "fig13", "fig14",
    "fig15", "fig16", "fig17", "fig18", "fig19", "fig20", "fig21",
];

fn radial(outputs: &[Output]) -> SweepSpec {
    SweepSpec {
        variable: SweepVariable::RadialDistance,
        start: 1.0,
        stop: 3.0,
        points: 81,
        outputs: outputs.to_vec(),
        ..SweepSpec::default()
    }
}

fn radius(outputs: &[Output]) -> SweepSpec {
    SweepSpec {
        variable: SweepVariable::FiberRadius,
        start: 200.0,
        stop: 600.0,
        points: 101,
        outputs: outputs.to_vec(),
        ..SweepSpec::default()
    }
}

fn angle(variable: SweepVariable, outputs: &[Output], points: usize) -> SweepSpec {
    let stop = if variable == SweepVariable::PhiQ { 2.0 } else { 1.0 };
    SweepSpec { variable, start: 0.0, stop, points, theta_q: 0.5, outputs: outputs.to_vec(), ..SweepSpec::default() }
}

/// Quantization axis along x (`z_Q = x`) or y (`z_Q = y`).
fn axis_x(spec: SweepSpec) -> SweepSpec {
    SweepSpec { theta_q: 0.5, phi_q: 0.0, ..spec }
}

fn axis_y(spec: SweepSpec) -> SweepSpec {
    SweepSpec { theta_q: 0.5, phi_q: 0.5, ..spec }
}

fn panel(stem: &str, title: &str, y_label: &str, spec: SweepSpec) -> Panel {
    Panel { stem: stem.to_string(), title: title.to_string(), y_label: y_label.to_string(), spec }
}

pub fn figure(name: &str) -> Result<Vec<Panel>, CliError> {
    use Output::*;
    let rates = [Guided, Radiation, Total];
    let panels = match name {
        "fig2" => vec![panel(name, "Guided rates by mode vs r/a", "rate / gamma0", radial(&[ModeRate]))],
        "fig3" => vec![panel(name, "Guided, radiation and total rates vs r/a", "rate / gamma0", radial(&rates))],
        "fig4" => vec![panel(name, "Fractional guided rates by mode vs r/a", "eta", radial(&[ModeEta]))],
        "fig5" => vec![panel(name, "Fractional guided rate vs r/a", "eta", radial(&[Eta]))],
        "fig6" => vec![panel(
            name,
            "F'=0 rates vs r/a",
            "rate / gamma0",
            SweepSpec { hyperfine: 0, ..radial(&[Guided, ModeRate, Radiation, Total]) },
        )],
        "fig7" => vec![panel(name, "Guided rates by mode vs fiber radius", "rate / gamma0", radius(&[ModeRate]))],
        "fig8" => vec![panel(name, "Guided, radiation and total rates vs fiber radius", "rate / gamma0", radius(&rates))],
        "fig9" => vec![panel(name, "Fractional guided rates by mode vs fiber radius", "eta", radius(&[ModeEta]))],
        "fig10" => vec![panel(name, "Fractional guided rate vs fiber radius", "eta", radius(&[Eta]))],
        "fig11" => vec![panel(
            name,
            "F'=0 rates vs fiber radius",
            "rate / gamma0",
            SweepSpec { hyperfine: 0, ..radius(&[Guided, ModeRate, Radiation, Total]) },
        )],
        "fig12" => vec![
            panel("fig12a", "Fractional guided rate vs r/a, z_Q = x", "eta", axis_x(radial(&[Eta]))),
            panel("fig12b", "Fractional guided rate vs r/a, z_Q = y", "eta", axis_y(radial(&[Eta]))),
        ],
        "fig13" => vec![
            panel("fig13a", "Fractional guided rate vs fiber radius, z_Q = x", "eta", axis_x(radius(&[Eta]))),
            panel("fig13b", "Fractional guided rate vs fiber radius, z_Q = y", "eta", axis_y(radius(&[Eta]))),
        ],
        "fig14" => vec![panel(
            name,
            "Fractional guided rate vs phi_Q (theta_Q = pi/2)",
            "eta",
            angle(SweepVariable::PhiQ, &[Eta], 101),
        )],
        "fig15" => vec![
            panel("fig15a", "Fractional guided rate vs theta_Q, phi_Q = 0", "eta", angle(SweepVariable::ThetaQ, &[Eta], 101)),
            panel(
                "fig15b",
                "Fractional guided rate vs theta_Q, phi_Q = pi/2",
                "eta",
                SweepSpec { phi_q: 0.5, ..angle(SweepVariable::ThetaQ, &[Eta], 101) },
            ),
        ],
        "fig16" => vec![panel(
            name,
            "Directional fractional rates vs r/a, z_Q = y",
            "eta_f",
            axis_y(radial(&[EtaForward, EtaBackward])),
        )],
        "fig17" => vec![panel(
            name,
            "Directional fractional rates vs fiber radius, z_Q = y",
            "eta_f",
            axis_y(radius(&[EtaForward, EtaBackward])),
        )],
        "fig18" => vec![panel(name, "Mode asymmetry vs r/a, z_Q = y", "zeta", axis_y(radial(&[ModeZeta])))],
        "fig19" => vec![panel(name, "Mode asymmetry vs fiber radius, z_Q = y", "zeta", axis_y(radius(&[ModeZeta])))],
        "fig20" => vec![panel(
            name,
            "Mode asymmetry vs phi_Q (theta_Q = pi/2)",
            "zeta",
            angle(SweepVariable::PhiQ, &[ModeZeta], 721),
        )],
        "fig21" => vec![panel(
            name,
            "Mode asymmetry vs theta_Q (phi_Q = pi/2)",
            "zeta",
            SweepSpec { phi_q: 0.5, ..angle(SweepVariable::ThetaQ, &[ModeZeta], 181) },
        )],
        _ => return Err(CliError::UnknownFigure(name.to_string())),
    };
    Ok(panels)
}
