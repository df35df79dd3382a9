use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{AtomConfiguration, FieldCorrelation};
use crate::atom::DipoleTable;

/// Decay coefficients `γ_{ee'gg'}` in units of `γ0`, split into guided and
/// radiation parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayCoefficientTensor {
    n_excited: usize,
    n_ground: usize,
    guided: Vec<Complex64>,
    radiation: Vec<Complex64>,
}

impl DecayCoefficientTensor {
    pub(crate) fn build(
        config: &AtomConfiguration,
        dipoles: &DipoleTable,
        guided: &FieldCorrelation,
        radiation: &FieldCorrelation,
    ) -> Self {
        let s = dipoles.structure();
        let (ne, ng) = (s.excited().len(), s.ground().len());
        let d: Vec<Vec<[Complex64; 3]>> =
            (0..ne).map(|e| (0..ng).map(|g| dipoles.fiber_cartesian(e, g, &config.frame)).collect()).collect();
        let mut gd = vec![Complex64::new(0.0, 0.0); ne * ne * ng * ng];
        let mut rd = gd.clone();
        for e in 0..ne {
            for e2 in 0..ne {
                for g in 0..ng {
                    for g2 in 0..ng {
                        let i = ((e * ne + e2) * ng + g) * ng + g2;
                        gd[i] = guided.cross(&d[e][g], &d[e2][g2]);
                        rd[i] = radiation.cross(&d[e][g], &d[e2][g2]);
                    }
                }
            }
        }
        Self { n_excited: ne, n_ground: ng, guided: gd, radiation: rd }
    }

    /// Assemble from explicit coefficient arrays indexed `((e ne + e') ng + g) ng + g'`.
    pub fn from_parts(n_excited: usize, n_ground: usize, guided: Vec<Complex64>, radiation: Vec<Complex64>) -> Self {
        let len = n_excited * n_excited * n_ground * n_ground;
        assert!(guided.len() == len && radiation.len() == len, "coefficient arrays must hold {len} entries");
        Self { n_excited, n_ground, guided, radiation }
    }

    pub fn n_excited(&self) -> usize {
        self.n_excited
    }

    pub fn n_ground(&self) -> usize {
        self.n_ground
    }

    fn index(&self, e: usize, e2: usize, g: usize, g2: usize) -> usize {
        ((e * self.n_excited + e2) * self.n_ground + g) * self.n_ground + g2
    }

    pub fn guided(&self, e: usize, e2: usize, g: usize, g2: usize) -> Complex64 {
        self.guided[self.index(e, e2, g, g2)]
    }

    pub fn radiation(&self, e: usize, e2: usize, g: usize, g2: usize) -> Complex64 {
        self.radiation[self.index(e, e2, g, g2)]
    }

    pub fn gamma(&self, e: usize, e2: usize, g: usize, g2: usize) -> Complex64 {
        let i = self.index(e, e2, g, g2);
        self.guided[i] + self.radiation[i]
    }

    /// `γ_{ee'} = Σ_g γ_{ee'gg}`.
    pub fn gamma_excited(&self, e: usize, e2: usize) -> Complex64 {
        (0..self.n_ground).map(|g| self.gamma(e, e2, g, g)).sum()
    }

    /// Largest violation of `γ_{ee'gg'} = conj(γ_{e'eg'g})`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for e in 0..self.n_excited {
            for e2 in 0..self.n_excited {
                for g in 0..self.n_ground {
                    for g2 in 0..self.n_ground {
                        let a = self.gamma(e, e2, g, g2);
                        let b = self.gamma(e2, e, g2, g).conj();
                        worst = worst.max((a - b).norm());
                    }
                }
            }
        }
        worst
    }
}
