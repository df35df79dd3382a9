//! Cylindrical Bessel functions of integer order.
//!
//! `J` is evaluated by Miller's backward recurrence normalized with
//! `J_0 + 2 Σ J_2k = 1`, which is accurate for every order at once.
//! `Y_0` and `Y_1` come from the Neumann series over the same `J` values and
//! higher orders from forward recurrence. `K_0` and `K_1` use the ascending
//! series below `x = 2` and Steed's continued fraction above, then forward
//! recurrence.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const RESCALE: f64 = 1e200;

/// Which Bessel family a derivative is requested for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselFamily {
    J,
    K,
    H1,
    H2,
}

/// Value of a Bessel-family derivative; real for `J`, `K`, complex for Hankel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BesselValue {
    Real(f64),
    Complex(Complex64),
}

impl BesselValue {
    pub fn re(self) -> f64 {
        match self {
            BesselValue::Real(v) => v,
            BesselValue::Complex(c) => c.re,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            BesselValue::Real(v) => Complex64::new(v, 0.0),
            BesselValue::Complex(c) => c,
        }
    }
}

fn miller_start(order: usize, x: f64) -> usize {
    let top = (order as f64).max(x);
    let n = (top + 25.0 + 10.0 * top.sqrt()).ceil() as usize;
    n + (n & 1)
}

/// Backward recurrence up to `len - 1` orders; returns the full normalized table,
/// which is longer than requested so that the Neumann series can use it.
fn miller_table(order: usize, x: f64) -> Vec<f64> {
    let start = miller_start(order, x);
    let mut table = vec![0.0; start + 1];
    let mut next = 0.0;
    let mut cur = 1e-30;
    let mut sum = 0.0;
    for k in (1..=start).rev() {
        table[k] = cur;
        if k % 2 == 0 {
            sum += 2.0 * cur;
        }
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            next /= RESCALE;
            sum /= RESCALE;
            for v in table[k..].iter_mut() {
                *v /= RESCALE;
            }
        }
    }
    table[0] = cur;
    sum += cur;
    for v in table.iter_mut() {
        *v /= sum;
    }
    table
}

/// `J_0(x) ..= J_nmax(x)` for `x ≥ 0`.
pub fn bessel_j_seq(nmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let table = miller_table(nmax, x.abs());
    out.copy_from_slice(&table[..=nmax]);
    if x < 0.0 {
        for (n, v) in out.iter_mut().enumerate() {
            if n % 2 == 1 {
                *v = -*v;
            }
        }
    }
    out
}

/// `J_n(x)` for integer `n` of either sign.
pub fn bessel_j(order: i32, x: f64) -> f64 {
    let n = order.unsigned_abs() as usize;
    let v = bessel_j_seq(n, x)[n];
    if order < 0 && n % 2 == 1 {
        -v
    } else {
        v
    }
}

/// `(J_0..=J_nmax, Y_0..=Y_nmax)` at `x > 0`.
pub fn bessel_jy_seq(nmax: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
    debug_assert!(x > 0.0);
    let table = miller_table(nmax.max(1), x);
    let log_term = (0.5 * x).ln() + EULER_GAMMA;

    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut k = 1;
    while 2 * k + 1 < table.len() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s0 += sign * table[2 * k] / k as f64;
        s1 += sign * (table[2 * k - 1] - table[2 * k + 1]) / k as f64;
        k += 1;
    }
    let y0 = 2.0 / PI * log_term * table[0] - 4.0 / PI * s0;
    let y1 = -2.0 / PI * (table[0] / x - log_term * table[1]) + 2.0 / PI * s1;

    let mut y = vec![0.0; nmax + 1];
    y[0] = y0;
    if nmax >= 1 {
        y[1] = y1;
    }
    for n in 1..nmax {
        y[n + 1] = 2.0 * n as f64 / x * y[n] - y[n - 1];
    }
    (table[..=nmax].to_vec(), y)
}

/// `Y_n(x)` for integer `n`, `x > 0`.
pub fn bessel_y(order: i32, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain { function: "bessel_y", value: x });
    }
    let n = order.unsigned_abs() as usize;
    let v = bessel_jy_seq(n, x).1[n];
    Ok(if order < 0 && n % 2 == 1 { -v } else { v })
}

/// `(K_0(x), K_1(x))` for `x > 0`.
fn bessel_k01(x: f64) -> (f64, f64) {
    if x <= 2.0 {
        let t = 0.25 * x * x;
        let log_term = (0.5 * x).ln() + EULER_GAMMA;
        // I_0, I_1 and the harmonic-number sums share one loop.
        let mut term0 = 1.0; // t^k / (k!)^2
        let mut term1 = 0.5 * x; // (x/2) t^k / (k!(k+1)!)
        let mut i0 = 0.0;
        let mut i1 = 0.0;
        let mut k0_sum = 0.0;
        let mut k1_sum = 0.0;
        let mut harmonic = 0.0; // H_k
        for k in 0..60 {
            let kf = k as f64;
            if k > 0 {
                harmonic += 1.0 / kf;
                term0 *= t / (kf * kf);
                term1 *= t / (kf * (kf + 1.0));
            }
            i0 += term0;
            i1 += term1;
            k0_sum += term0 * harmonic;
            // psi(k+1) + psi(k+2) = 2 H_k + 1/(k+1) - 2 gamma
            k1_sum += term1 * (2.0 * harmonic + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA);
            if term0 < 1e-18 * i0 && k > 2 {
                break;
            }
        }
        let k0 = -log_term * i0 + k0_sum;
        let k1 = 1.0 / x + (0.5 * x).ln() * i1 - 0.5 * k1_sum;
        (k0, k1)
    } else {
        // Steed's method on the continued fraction for K_1/K_0 (order mu = 0).
        let a1 = 0.25;
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut delh = d;
        let mut h = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        for i in 2..10_000 {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh *= b * d - 1.0;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < 1e-17 {
                break;
            }
        }
        h *= a1;
        let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
        let k1 = k0 * (x + 0.5 - h) / x;
        (k0, k1)
    }
}

/// `K_0(x) ..= K_nmax(x)` for `x > 0`.
pub fn bessel_k_seq(nmax: usize, x: f64) -> Vec<f64> {
    debug_assert!(x > 0.0);
    let (k0, k1) = bessel_k01(x);
    let mut out = vec![0.0; nmax.max(1) + 1];
    out[0] = k0;
    out[1] = k1;
    for n in 1..nmax {
        out[n + 1] = out[n - 1] + 2.0 * n as f64 / x * out[n];
    }
    out.truncate(nmax + 1);
    out
}

/// `K_n(x)` for integer `n`; domain error for `x ≤ 0`.
pub fn bessel_k(order: i32, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain { function: "bessel_k", value: x });
    }
    let n = order.unsigned_abs() as usize;
    Ok(bessel_k_seq(n, x)[n])
}

/// Hankel function `H_n^(kind)(x)`, `kind ∈ {1, 2}`.
pub fn hankel(kind: u8, order: i32, x: f64) -> Result<Complex64> {
    if !(x > 0.0) {
        return Err(Error::Domain { function: "hankel", value: x });
    }
    let n = order.unsigned_abs() as usize;
    let (j, y) = bessel_jy_seq(n, x);
    let sign = if order < 0 && n % 2 == 1 { -1.0 } else { 1.0 };
    let (jv, yv) = (sign * j[n], sign * y[n]);
    match kind {
        1 => Ok(Complex64::new(jv, yv)),
        2 => Ok(Complex64::new(jv, -yv)),
        _ => Err(Error::Domain { function: "hankel kind", value: kind as f64 }),
    }
}

/// Derivative with respect to the argument, from the two-neighbor recurrences.
pub fn bessel_derivative(family: BesselFamily, order: i32, x: f64) -> Result<BesselValue> {
    match family {
        BesselFamily::J => Ok(BesselValue::Real(
            0.5 * (bessel_j(order - 1, x) - bessel_j(order + 1, x)),
        )),
        BesselFamily::K => Ok(BesselValue::Real(
            -0.5 * (bessel_k(order - 1, x)? + bessel_k(order + 1, x)?),
        )),
        BesselFamily::H1 | BesselFamily::H2 => {
            let kind = if family == BesselFamily::H1 { 1 } else { 2 };
            Ok(BesselValue::Complex(
                0.5 * (hankel(kind, order - 1, x)? - hankel(kind, order + 1, x)?),
            ))
        }
    }
}

/// Value and derivative tables for orders `0..=nmax`, used in the hot loops of
/// the mode builders. Derivatives at order 0 use `J_{-1} = -J_1`.
#[derive(Debug, Clone)]
pub struct JyTable {
    pub j: Vec<f64>,
    pub y: Vec<f64>,
}

impl JyTable {
    pub fn new(nmax: usize, x: f64) -> Self {
        let (j, y) = bessel_jy_seq(nmax + 1, x);
        Self { j, y }
    }

    fn signed(v: &[f64], order: i32) -> f64 {
        let n = order.unsigned_abs() as usize;
        if order < 0 && n % 2 == 1 {
            -v[n]
        } else {
            v[n]
        }
    }

    pub fn j(&self, order: i32) -> f64 {
        Self::signed(&self.j, order)
    }

    pub fn y(&self, order: i32) -> f64 {
        Self::signed(&self.y, order)
    }

    pub fn jp(&self, order: i32) -> f64 {
        0.5 * (self.j(order - 1) - self.j(order + 1))
    }

    pub fn yp(&self, order: i32) -> f64 {
        0.5 * (self.y(order - 1) - self.y(order + 1))
    }

    pub fn h(&self, kind: u8, order: i32) -> Complex64 {
        let s = if kind == 1 { 1.0 } else { -1.0 };
        Complex64::new(self.j(order), s * self.y(order))
    }

    pub fn hp(&self, kind: u8, order: i32) -> Complex64 {
        let s = if kind == 1 { 1.0 } else { -1.0 };
        Complex64::new(self.jp(order), s * self.yp(order))
    }
}
