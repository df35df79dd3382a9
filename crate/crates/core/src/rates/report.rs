use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{AtomConfiguration, FieldCorrelation, GuidedChannel, RateEngine};
use crate::atom::{DipoleTable, Sublevel};
use crate::error::Result;
use crate::fiber::{Direction, ModeKind};

/// `(plus - minus) / (plus + minus)`, defined as 0 when both vanish.
pub fn asymmetry(plus: f64, minus: f64) -> f64 {
    let sum = plus + minus;
    if sum == 0.0 {
        0.0
    } else {
        (plus - minus) / sum
    }
}

/// Emission of one sublevel into one guided family, split by direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeChannelRates {
    pub kind: ModeKind,
    pub forward: f64,
    pub backward: f64,
}

impl ModeChannelRates {
    pub fn total(&self) -> f64 {
        self.forward + self.backward
    }

    pub fn asymmetry(&self) -> f64 {
        asymmetry(self.forward, self.backward)
    }
}

/// Rates of one excited sublevel, all in units of `γ0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SublevelRates {
    pub level: Sublevel,
    pub modes: Vec<ModeChannelRates>,
    pub guided_forward: f64,
    pub guided_backward: f64,
    pub guided: f64,
    /// Absent for guided-only reports.
    pub radiation: Option<f64>,
}

impl SublevelRates {
    pub fn total(&self) -> Option<f64> {
        self.radiation.map(|r| r + self.guided)
    }

    pub fn mode(&self, kind: ModeKind) -> Option<&ModeChannelRates> {
        self.modes.iter().find(|m| m.kind == kind)
    }

    /// Guided fraction `γ^(g) / γ`.
    pub fn eta(&self) -> Option<f64> {
        self.total().map(|t| self.guided / t)
    }

    pub fn eta_mode(&self, kind: ModeKind) -> Option<f64> {
        Some(self.mode(kind)?.total() / self.total()?)
    }

    pub fn eta_direction(&self, direction: Direction) -> Option<f64> {
        let g = match direction {
            Direction::Forward => self.guided_forward,
            Direction::Backward => self.guided_backward,
        };
        self.total().map(|t| g / t)
    }

    pub fn zeta(&self) -> f64 {
        asymmetry(self.guided_forward, self.guided_backward)
    }

    pub fn zeta_mode(&self, kind: ModeKind) -> Option<f64> {
        self.mode(kind).map(ModeChannelRates::asymmetry)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    /// Free-space rate in `1/s`.
    pub gamma0: f64,
    pub sublevels: Vec<SublevelRates>,
}

impl RateReport {
    /// Assemble a report from field correlations, which do not depend on the
    /// quantization frame and may be reused across frames.
    pub fn from_channels(
        config: &AtomConfiguration,
        dipoles: &DipoleTable,
        guided: &[GuidedChannel],
        radiation: Option<&FieldCorrelation>,
    ) -> Self {
        let s = dipoles.structure();
        let mut kinds: Vec<ModeKind> = Vec::new();
        for ch in guided {
            if !kinds.contains(&ch.kind) {
                kinds.push(ch.kind);
            }
        }
        let sublevels = s
            .excited()
            .iter()
            .enumerate()
            .map(|(ei, level)| {
                let ds: Vec<[Complex64; 3]> =
                    (0..s.ground().len()).map(|gi| dipoles.fiber_cartesian(ei, gi, &config.frame)).collect();
                let rate = |c: &FieldCorrelation| ds.iter().map(|d| c.rate(d)).sum::<f64>().max(0.0);
                let modes: Vec<ModeChannelRates> = kinds
                    .iter()
                    .map(|&kind| {
                        let pick = |dir| {
                            guided
                                .iter()
                                .filter(|ch| ch.kind == kind && ch.direction == dir)
                                .map(|ch| rate(&ch.correlation))
                                .sum()
                        };
                        ModeChannelRates { kind, forward: pick(Direction::Forward), backward: pick(Direction::Backward) }
                    })
                    .collect();
                let guided_forward = modes.iter().map(|m| m.forward).sum::<f64>();
                let guided_backward = modes.iter().map(|m| m.backward).sum::<f64>();
                SublevelRates {
                    level: *level,
                    modes,
                    guided_forward,
                    guided_backward,
                    guided: guided_forward + guided_backward,
                    radiation: radiation.map(rate),
                }
            })
            .collect();
        Self { gamma0: config.gamma0(), sublevels }
    }

    pub fn sublevel(&self, f: i32, m: i32) -> Option<&SublevelRates> {
        use crate::specfun::HalfInteger;
        self.sublevels
            .iter()
            .find(|s| s.level.f == HalfInteger::integer(f) && s.level.m == HalfInteger::integer(m))
    }

    /// Sublevels of one excited hyperfine level, ordered by `M'`.
    pub fn hyperfine(&self, f: i32) -> Vec<&SublevelRates> {
        use crate::specfun::HalfInteger;
        self.sublevels.iter().filter(|s| s.level.f == HalfInteger::integer(f)).collect()
    }
}

/// Per-direction guided rates and asymmetries for every excited sublevel.
pub fn directional_report(engine: &RateEngine, config: &AtomConfiguration) -> Result<RateReport> {
    engine.guided_report(config)
}
