use std::ops::{Add, AddAssign, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Hermitian matrix `S_ab = Σ w e_a e_b*` of fiber-frame Cartesian field
/// components, in units where `d^T S d*` is a rate in units of `γ0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldCorrelation {
    pub m: [[Complex64; 3]; 3],
}

impl Default for FieldCorrelation {
    fn default() -> Self {
        Self::zero()
    }
}

impl FieldCorrelation {
    pub fn zero() -> Self {
        Self { m: [[Complex64::new(0.0, 0.0); 3]; 3] }
    }

    /// Add `weight · e e†`.
    pub fn add_field(&mut self, e: &[Complex64; 3], weight: f64) {
        for a in 0..3 {
            for b in 0..3 {
                self.m[a][b] += e[a] * e[b].conj() * weight;
            }
        }
    }

    pub fn outer(e: &[Complex64; 3], weight: f64) -> Self {
        let mut s = Self::zero();
        s.add_field(e, weight);
        s
    }

    /// `Σ_ab d1_a d2_b* S_ab`.
    pub fn cross(&self, d1: &[Complex64; 3], d2: &[Complex64; 3]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..3 {
            for b in 0..3 {
                acc += d1[a] * d2[b].conj() * self.m[a][b];
            }
        }
        acc
    }

    /// `|d · e|²` summed over the modes, i.e. the rate for dipole `d`.
    pub fn rate(&self, d: &[Complex64; 3]) -> f64 {
        self.cross(d, d).re
    }

    pub fn trace(&self) -> f64 {
        (0..3).map(|a| self.m[a][a].re).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut out: f64 = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                out = out.max((self.m[a][b] - other.m[a][b]).norm());
            }
        }
        out
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut out: f64 = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                out = out.max((self.m[a][b] - self.m[b][a].conj()).norm());
            }
        }
        out
    }
}

impl Add for FieldCorrelation {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for FieldCorrelation {
    fn add_assign(&mut self, rhs: Self) {
        for a in 0..3 {
            for b in 0..3 {
                self.m[a][b] += rhs.m[a][b];
            }
        }
    }
}

impl Mul<f64> for FieldCorrelation {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        for row in self.m.iter_mut() {
            for x in row.iter_mut() {
                *x *= rhs;
            }
        }
        self
    }
}

impl std::iter::Sum for FieldCorrelation {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}
