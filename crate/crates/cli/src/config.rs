//! Flat `key = value` configuration files.
//!
//! Blank lines are ignored and `#` starts a comment that runs to the end of
//! the line. Recognized keys and their defaults:
//!
//! ```text
//! radius_nm     = 400        # fiber radius a
//! wavelength_nm = 780        # atomic transition wavelength
//! n1            = 1.4537     # core index
//! n2            = 1          # cladding index
//! r_over_a      = 1          # radial position of the atom
//! atom_phi      = 0          # azimuth of the atom (units of pi)
//! theta_q       = 0          # polar angle of the quantization axis (units of pi)
//! phi_q         = 0          # azimuth of the quantization axis (units of pi)
//! hyperfine     = 3          # excited hyperfine level F'
//! variable      = radial_distance   # radial_distance | fiber_radius | phi_Q | theta_Q
//! range         = 1, 3, 41   # start, stop, points
//! outputs       = guided, radiation, total
//! format        = csv        # csv | json
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{CliError, CliResult};

/// Swept quantity together with its boundary unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepVariable {
    /// `r / a`.
    RadialDistance,
    /// Fiber radius in nm; the atom stays at the same `r / a`.
    FiberRadius,
    /// Quantization-axis azimuth in units of π.
    PhiQ,
    /// Quantization-axis polar angle in units of π.
    ThetaQ,
}

impl SweepVariable {
    pub fn column_name(self) -> &'static str {
        match self {
            Self::RadialDistance => "r_over_a",
            Self::FiberRadius => "radius_nm",
            Self::PhiQ => "phi_q_over_pi",
            Self::ThetaQ => "theta_q_over_pi",
        }
    }

    /// Whether the field correlations stay fixed along the sweep.
    pub fn is_frame_only(self) -> bool {
        matches!(self, Self::PhiQ | Self::ThetaQ)
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::RadialDistance => "radial_distance",
            Self::FiberRadius => "fiber_radius",
            Self::PhiQ => "phi_Q",
            Self::ThetaQ => "theta_Q",
        })
    }
}

impl FromStr for SweepVariable {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "radial_distance" => Ok(Self::RadialDistance),
            "fiber_radius" => Ok(Self::FiberRadius),
            "phi_Q" | "phi_q" => Ok(Self::PhiQ),
            "theta_Q" | "theta_q" => Ok(Self::ThetaQ),
            _ => Err(format!("unknown sweep variable `{s}`")),
        }
    }
}

/// Per-sublevel quantity written as one column per `M'` (and per guided
/// family for the `mode_*` outputs).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Output {
    Guided,
    Radiation,
    Total,
    Eta,
    EtaForward,
    EtaBackward,
    Zeta,
    ModeRate,
    ModeEta,
    ModeZeta,
}

impl Output {
    pub const ALL: [Output; 10] = [
        Self::Guided,
        Self::Radiation,
        Self::Total,
        Self::Eta,
        Self::EtaForward,
        Self::EtaBackward,
        Self::Zeta,
        Self::ModeRate,
        Self::ModeEta,
        Self::ModeZeta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Guided => "guided",
            Self::Radiation => "radiation",
            Self::Total => "total",
            Self::Eta => "eta",
            Self::EtaForward => "eta_forward",
            Self::EtaBackward => "eta_backward",
            Self::Zeta => "zeta",
            Self::ModeRate => "mode_rate",
            Self::ModeEta => "mode_eta",
            Self::ModeZeta => "mode_zeta",
        }
    }

    pub fn needs_radiation(self) -> bool {
        !matches!(self, Self::Guided | Self::Zeta | Self::ModeRate | Self::ModeZeta)
    }

    pub fn per_mode(self) -> bool {
        matches!(self, Self::ModeRate | Self::ModeEta | Self::ModeZeta)
    }
}

impl FromStr for Output {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL.into_iter().find(|o| o.name() == s).ok_or_else(|| format!("unknown output `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Format {
    Csv,
    Json,
}

/// A complete one-dimensional sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub radius_nm: f64,
    pub wavelength_nm: f64,
    pub n1: f64,
    pub n2: f64,
    pub r_over_a: f64,
    pub atom_phi: f64,
    pub theta_q: f64,
    pub phi_q: f64,
    pub hyperfine: i32,
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub outputs: Vec<Output>,
    pub format: Format,
    /// Coarser radiation quadrature.
    pub coarse: bool,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            radius_nm: 400.0,
            wavelength_nm: 780.0,
            n1: 1.4537,
            n2: 1.0,
            r_over_a: 1.0,
            atom_phi: 0.0,
            theta_q: 0.0,
            phi_q: 0.0,
            hyperfine: 3,
            variable: SweepVariable::RadialDistance,
            start: 1.0,
            stop: 3.0,
            points: 41,
            outputs: vec![Output::Guided, Output::Radiation, Output::Total],
            format: Format::Csv,
            coarse: false,
        }
    }
}

impl SweepSpec {
    /// Parse a configuration file on top of the defaults.
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut spec = Self::default();
        for (line, key, value) in parse_pairs(text)? {
            spec.set(&key, &value).map_err(|message| CliError::Config { line, message })?;
        }
        Ok(spec)
    }

    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let num = |v: &str| v.parse::<f64>().map_err(|_| format!("`{key}` expects a number, got `{v}`"));
        match key {
            "radius_nm" => self.radius_nm = num(value)?,
            "wavelength_nm" => self.wavelength_nm = num(value)?,
            "n1" => self.n1 = num(value)?,
            "n2" => self.n2 = num(value)?,
            "r_over_a" => self.r_over_a = num(value)?,
            "atom_phi" => self.atom_phi = num(value)?,
            "theta_q" => self.theta_q = num(value)?,
            "phi_q" => self.phi_q = num(value)?,
            "hyperfine" => {
                self.hyperfine = value.parse().map_err(|_| format!("`hyperfine` expects an integer, got `{value}`"))?
            }
            "variable" => self.variable = value.parse()?,
            "range" => {
                let (start, stop, points) = parse_range(value)?;
                self.start = start;
                self.stop = stop;
                self.points = points;
            }
            "outputs" => {
                self.outputs = value.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>()?;
            }
            "format" => {
                self.format = match value {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    _ => return Err(format!("unknown format `{value}`")),
                }
            }
            "coarse" => self.coarse = value.parse().map_err(|_| "`coarse` expects true or false".to_string())?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: &str| Err(CliError::InvalidSpec(m.to_string()));
        if self.points < 2 {
            return bad("a sweep needs at least 2 points");
        }
        if !(self.start < self.stop) {
            return bad("sweep start must be below stop");
        }
        if !(0..=3).contains(&self.hyperfine) {
            return bad("hyperfine must be one of 0, 1, 2, 3");
        }
        if self.outputs.is_empty() {
            return bad("no outputs requested");
        }
        let lo_r = if self.variable == SweepVariable::RadialDistance { self.start } else { self.r_over_a };
        if lo_r < 0.0 {
            return bad("radial position must be nonnegative");
        }
        if self.variable == SweepVariable::FiberRadius && self.start <= 0.0 {
            return bad("fiber radius must be positive");
        }
        if self.variable == SweepVariable::ThetaQ && (self.start < 0.0 || self.stop > 1.0) {
            return bad("theta_Q must lie in [0, 1] pi");
        }
        Ok(())
    }

    /// Grid values of the swept variable, endpoints included.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..=n)
            .map(|i| if i == n { self.stop } else { self.start + (self.stop - self.start) * i as f64 / n as f64 })
            .collect()
    }

    /// Full configuration as ordered key/value metadata.
    pub fn metadata(&self) -> BTreeMap<String, String> {
        let outputs: Vec<&str> = self.outputs.iter().map(|o| o.name()).collect();
        [
            ("radius_nm", self.radius_nm.to_string()),
            ("wavelength_nm", self.wavelength_nm.to_string()),
            ("n1", self.n1.to_string()),
            ("n2", self.n2.to_string()),
            ("r_over_a", self.r_over_a.to_string()),
            ("atom_phi", self.atom_phi.to_string()),
            ("theta_q", self.theta_q.to_string()),
            ("phi_q", self.phi_q.to_string()),
            ("hyperfine", self.hyperfine.to_string()),
            ("variable", self.variable.to_string()),
            ("range", format!("{}, {}, {}", self.start, self.stop, self.points)),
            ("outputs", outputs.join(", ")),
            ("coarse", self.coarse.to_string()),
            ("rate_unit", "free-space rate gamma0".to_string()),
            ("angle_unit", "pi".to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}

/// `start, stop, points`.
pub fn parse_range(value: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    let err = || format!("range expects `start, stop, points`, got `{value}`");
    if parts.len() != 3 {
        return Err(err());
    }
    Ok((
        parts[0].parse().map_err(|_| err())?,
        parts[1].parse().map_err(|_| err())?,
        parts[2].parse().map_err(|_| err())?,
    ))
}

/// Split a file into `(line number, key, value)` triples.
pub fn parse_pairs(text: &str) -> CliResult<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| CliError::Config {
            line: i + 1,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(CliError::Config { line: i + 1, message: "empty key".into() });
        }
        out.push((i + 1, key.to_string(), value.trim().to_string()));
    }
    Ok(out)
}
