//! Wigner 3j and 6j symbols from the Racah single-sum formulas.
//!
//! Angular momenta are carried as doubled integers so that triangle and
//! parity tests are exact. Factorials are exact integers up to 20! and exact
//! to f64 rounding beyond; the arguments used here never exceed 20.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A value in `{..., -1, -1/2, 0, 1/2, 1, ...}` stored as twice itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfInteger(i32);

impl HalfInteger {
    pub const ZERO: HalfInteger = HalfInteger(0);

    pub const fn from_twice(twice_value: i32) -> Self {
        HalfInteger(twice_value)
    }

    pub const fn integer(v: i32) -> Self {
        HalfInteger(2 * v)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Projections `-j, -j+1, ..., j`.
    pub fn projections(self) -> impl Iterator<Item = HalfInteger> {
        let j = self.0;
        (-j..=j).step_by(2).map(HalfInteger)
    }
}

impl std::ops::Neg for HalfInteger {
    type Output = HalfInteger;
    fn neg(self) -> HalfInteger {
        HalfInteger(-self.0)
    }
}

impl std::ops::Add for HalfInteger {
    type Output = HalfInteger;
    fn add(self, rhs: HalfInteger) -> HalfInteger {
        HalfInteger(self.0 + rhs.0)
    }
}

impl std::ops::Sub for HalfInteger {
    type Output = HalfInteger;
    fn sub(self, rhs: HalfInteger) -> HalfInteger {
        HalfInteger(self.0 - rhs.0)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

fn factorial(n: i32) -> f64 {
    debug_assert!(n >= 0);
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `(-1)^n` for a doubled exponent that must be even.
fn phase_twice(twice_exp: i32) -> f64 {
    debug_assert!(twice_exp % 2 == 0);
    if (twice_exp / 2).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

fn triangle(a: HalfInteger, b: HalfInteger, c: HalfInteger) -> bool {
    let (a, b, c) = (a.0, b.0, c.0);
    a >= 0 && b >= 0 && c >= 0 && (a + b + c) % 2 == 0 && c <= a + b && c >= (a - b).abs()
}

/// Triangle coefficient Δ(abc) for a valid triad (doubled arguments).
fn delta(a: i32, b: i32, c: i32) -> f64 {
    (factorial((a + b - c) / 2) * factorial((a - b + c) / 2) * factorial((-a + b + c) / 2)
        / factorial((a + b + c) / 2 + 1))
        .sqrt()
}

/// Wigner 3j symbol `(j1 j2 j3; m1 m2 m3)`.
pub fn wigner_3j(
    j1: HalfInteger,
    j2: HalfInteger,
    j3: HalfInteger,
    m1: HalfInteger,
    m2: HalfInteger,
    m3: HalfInteger,
) -> Result<f64> {
    for (j, m) in [(j1, m1), (j2, m2), (j3, m3)] {
        if j.0 < 0 || m.0.abs() > j.0 || (j.0 - m.0) % 2 != 0 {
            return Err(Error::AngularMomentum(format!("projection {m} invalid for j = {j}")));
        }
    }
    if m1.0 + m2.0 + m3.0 != 0 || !triangle(j1, j2, j3) {
        return Ok(0.0);
    }
    let (j1, j2, j3, m1, m2, m3) = (j1.0, j2.0, j3.0, m1.0, m2.0, m3.0);
    let pre = delta(j1, j2, j3)
        * (factorial((j1 + m1) / 2)
            * factorial((j1 - m1) / 2)
            * factorial((j2 + m2) / 2)
            * factorial((j2 - m2) / 2)
            * factorial((j3 + m3) / 2)
            * factorial((j3 - m3) / 2))
            .sqrt();
    // Summation bounds in doubled units; every bracket below is a non-negative integer.
    let t_min = 0.max(j2 - j3 - m1).max(j1 - j3 + m2);
    let t_max = (j1 + j2 - j3).min(j1 - m1).min(j2 + m2);
    let mut sum = 0.0;
    let mut t = t_min;
    while t <= t_max {
        let denom = factorial(t / 2)
            * factorial((j3 - j2 + t + m1) / 2)
            * factorial((j3 - j1 + t - m2) / 2)
            * factorial((j1 + j2 - j3 - t) / 2)
            * factorial((j1 - t - m1) / 2)
            * factorial((j2 - t + m2) / 2);
        sum += phase_twice(t) / denom;
        t += 2;
    }
    Ok(phase_twice(j1 - j2 - m3) * pre * sum)
}

/// Wigner 6j symbol `{j1 j2 j3; j4 j5 j6}`.
pub fn wigner_6j(
    j1: HalfInteger,
    j2: HalfInteger,
    j3: HalfInteger,
    j4: HalfInteger,
    j5: HalfInteger,
    j6: HalfInteger,
) -> f64 {
    if !(triangle(j1, j2, j3) && triangle(j1, j5, j6) && triangle(j4, j2, j6) && triangle(j4, j5, j3)) {
        return 0.0;
    }
    let (j1, j2, j3, j4, j5, j6) = (j1.0, j2.0, j3.0, j4.0, j5.0, j6.0);
    let a = [j1 + j2 + j3, j1 + j5 + j6, j4 + j2 + j6, j4 + j5 + j3];
    let b = [j1 + j2 + j4 + j5, j2 + j3 + j5 + j6, j3 + j1 + j6 + j4];
    let pre = delta(j1, j2, j3) * delta(j1, j5, j6) * delta(j4, j2, j6) * delta(j4, j5, j3);
    let t_min = *a.iter().max().unwrap();
    let t_max = *b.iter().min().unwrap();
    let mut sum = 0.0;
    let mut t = t_min;
    while t <= t_max {
        let mut denom = 1.0;
        for &ai in &a {
            denom *= factorial((t - ai) / 2);
        }
        for &bi in &b {
            denom *= factorial((bi - t) / 2);
        }
        sum += phase_twice(t) * factorial(t / 2 + 1) / denom;
        t += 2;
    }
    pre * sum
}

/// Clebsch–Gordan coefficient `⟨j1 m1 j2 m2 | J M⟩`.
pub fn clebsch_gordan(
    j1: HalfInteger,
    m1: HalfInteger,
    j2: HalfInteger,
    m2: HalfInteger,
    j: HalfInteger,
    m: HalfInteger,
) -> Result<f64> {
    let w = wigner_3j(j1, j2, j, m1, m2, -m)?;
    Ok(phase_twice(j1.0 - j2.0 + m.0) * ((j.0 + 1) as f64).sqrt() * w)
}
