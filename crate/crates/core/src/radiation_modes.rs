//! Radiation modes of the fiber: continuum modes labeled by `(ω, β, l, p)`
//! with `|β| < k n2`.
//!
//! Profiles are stored delta-normalized (divided by `sqrt(N_ν)`), so the
//! β-integrals of the rate engine need no extra weight.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fiber::{FiberGeometry, Polarization};
use crate::guided_modes::CylindricalField;
use crate::specfun::JyTable;
use crate::units::{SPEED_OF_LIGHT, VACUUM_PERMEABILITY, VACUUM_PERMITTIVITY};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiationModeId {
    pub omega: f64,
    pub beta: f64,
    pub l: i32,
    pub polarization: Polarization,
}

impl RadiationModeId {
    pub fn new(omega: f64, beta: f64, l: i32, polarization: Polarization) -> Result<Self> {
        if polarization == Polarization::None {
            return Err(Error::RadiationMode("radiation modes carry p = + or p = -".into()));
        }
        Ok(Self { omega, beta, l, polarization })
    }
}

/// Coefficients and normalization of one radiation mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiationModeField {
    pub id: RadiationModeId,
    pub geom: FiberGeometry,
    pub h: f64,
    pub q: f64,
    pub a: f64,
    pub b: Complex64,
    pub c: [Complex64; 2],
    pub d: [Complex64; 2],
    pub eta: f64,
    /// `N_ν` evaluated with the `j = 1` coefficient pair.
    pub norm_n: f64,
}

impl RadiationModeField {
    /// `N_ν` evaluated with coefficient pair `j` (1 or 2).
    pub fn norm_from_pair(&self, j: usize) -> f64 {
        let n2s = self.geom.n2().powi(2);
        let c = self.c[j - 1];
        let d = self.d[j - 1];
        8.0 * std::f64::consts::PI * self.id.omega / (self.q * self.q)
            * (n2s * c.norm_sqr() + VACUUM_PERMEABILITY / VACUUM_PERMITTIVITY * d.norm_sqr())
    }

    /// Far-field weight `n2² Σ_j C_j C'_j* + (μ0/ε0) Σ_j D_j D'_j*` that multiplies
    /// the delta function in the overlap of two modes sharing `(ω, β, l)`.
    pub fn far_field_overlap(&self, other: &RadiationModeField) -> Complex64 {
        let n2s = self.geom.n2().powi(2);
        let ratio = VACUUM_PERMEABILITY / VACUUM_PERMITTIVITY;
        (0..2)
            .map(|j| self.c[j] * other.c[j].conj() * n2s + self.d[j] * other.d[j].conj() * ratio)
            .sum()
    }
}

/// Bessel tables shared by every `(l, p)` at one `(ω, β)`.
#[derive(Debug, Clone)]
pub struct RadiationNode {
    geom: FiberGeometry,
    omega: f64,
    beta: f64,
    h: f64,
    q: f64,
    core: JyTable,
    clad: JyTable,
    l_max: usize,
}

impl RadiationNode {
    /// Tables for all `|l| <= l_max`.
    pub fn new(geom: &FiberGeometry, omega: f64, beta: f64, l_max: usize) -> Result<Self> {
        let k = omega / SPEED_OF_LIGHT;
        let kn2 = k * geom.n2();
        if !(beta.abs() < kn2) {
            return Err(Error::RadiationMode(format!("|beta| = {} must be below k n2 = {kn2}", beta.abs())));
        }
        let h = (k * k * geom.n1() * geom.n1() - beta * beta).sqrt();
        let q = (kn2 * kn2 - beta * beta).sqrt();
        let a = geom.radius();
        Ok(Self {
            geom: *geom,
            omega,
            beta,
            h,
            q,
            core: JyTable::new(l_max + 1, h * a),
            clad: JyTable::new(l_max + 1, q * a),
            l_max,
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Coefficients of mode `(l, p)`. `None` when the Hankel functions at the
    /// boundary overflow, which only happens for modes whose contribution is
    /// far below double precision.
    pub fn mode(&self, l: i32, polarization: Polarization) -> Option<RadiationModeField> {
        assert!(l.unsigned_abs() as usize <= self.l_max, "order {l} beyond table size {}", self.l_max);
        let id = RadiationModeId::new(self.omega, self.beta, l, polarization).ok()?;
        let (n1s, n2s) = (self.geom.n1().powi(2), self.geom.n2().powi(2));
        let (h, q, beta) = (self.h, self.q, self.beta);
        let a = self.geom.radius();
        let k = self.omega / SPEED_OF_LIGHT;

        // Every coefficient is linear in A, so A = 1/|H_l(qa)| keeps the
        // intermediate products finite without changing the normalized profile.
        let scale = self.clad.h(1, l).norm();
        if !scale.is_finite() || scale == 0.0 {
            return None;
        }
        let amp = 1.0 / scale;
        let jl = self.core.j(l);
        let jlp = self.core.jp(l);
        let hstar = [self.clad.h(1, l).conj(), self.clad.h(2, l).conj()];
        let hstar_p = [self.clad.hp(1, l).conj(), self.clad.hp(2, l).conj()];

        let mut v = [Complex64::new(0.0, 0.0); 2];
        let mut m = [Complex64::new(0.0, 0.0); 2];
        let mut lj = [Complex64::new(0.0, 0.0); 2];
        for j in 0..2 {
            v[j] = hstar[j] * (l as f64 * k * beta / (a * h * h * q * q) * (n2s - n1s) * jl);
            m[j] = hstar[j] * (jlp / h) - hstar_p[j] * (jl / q);
            lj[j] = hstar[j] * (n1s * jlp / h) - hstar_p[j] * (n2s * jl / q);
        }
        let eps_c = VACUUM_PERMITTIVITY * SPEED_OF_LIGHT;
        let mu_c = VACUUM_PERMEABILITY * SPEED_OF_LIGHT;
        let eta = eps_c
            * ((n2s * v[0].norm_sqr() + lj[0].norm_sqr()) / (v[0].norm_sqr() + n2s * m[0].norm_sqr())).sqrt();
        let b = I * (polarization.sign() * eta * amp);

        let pre = std::f64::consts::PI * q * q * a / 4.0;
        let mut c = [Complex64::new(0.0, 0.0); 2];
        let mut d = [Complex64::new(0.0, 0.0); 2];
        for j in 0..2 {
            let sign = if j == 0 { -1.0 } else { 1.0 };
            c[j] = I * (sign * pre / n2s) * (lj[j] * amp + I * mu_c * b * v[j]);
            d[j] = I * (-sign * pre) * (I * eps_c * amp * v[j] - b * m[j]);
        }
        let mut field = RadiationModeField {
            id,
            geom: self.geom,
            h,
            q,
            a: amp,
            b,
            c,
            d,
            eta,
            norm_n: 0.0,
        };
        field.norm_n = field.norm_from_pair(1);
        if !(field.norm_n.is_finite() && field.norm_n > 0.0) {
            return None;
        }
        Some(field)
    }
}

/// Build one radiation mode from scratch.
pub fn build_radiation_mode(geom: &FiberGeometry, id: RadiationModeId) -> Result<RadiationModeField> {
    if id.polarization == Polarization::None {
        return Err(Error::RadiationMode("radiation modes carry p = + or p = -".into()));
    }
    RadiationNode::new(geom, id.omega, id.beta, id.l.unsigned_abs() as usize)?
        .mode(id.l, id.polarization)
        .ok_or_else(|| Error::RadiationMode(format!("Hankel overflow for l = {} at beta = {}", id.l, id.beta)))
}

/// Radius at which profiles are evaluated: the axis is replaced by a point
/// `1e-12 a` off it so the `l/r` terms take their limiting values.
pub fn effective_radius(geom: &FiberGeometry, r: f64) -> f64 {
    r.max(geom.radius() * 1e-12)
}

/// Argument table needed by [`radiation_profile_with_table`] at radius `r`.
pub fn profile_table(field: &RadiationModeField, r: f64, l_max: usize) -> JyTable {
    let r = effective_radius(&field.geom, r);
    let x = if r < field.geom.radius() { field.h * r } else { field.q * r };
    JyTable::new(l_max + 1, x)
}

/// Delta-normalized profile at radius `r`.
pub fn radiation_profile(field: &RadiationModeField, r: f64) -> CylindricalField {
    let table = profile_table(field, r, field.id.l.unsigned_abs() as usize);
    radiation_profile_with_table(field, r, &table)
}

/// Profile at `r` given a precomputed table at `h r` (inside) or `q r` (outside).
pub fn radiation_profile_with_table(field: &RadiationModeField, r: f64, table: &JyTable) -> CylindricalField {
    let a = field.geom.radius();
    let l = field.id.l;
    let lf = l as f64;
    let beta = field.id.beta;
    let wmu = field.id.omega * VACUUM_PERMEABILITY;
    let norm = 1.0 / field.norm_n.sqrt();
    let r_eff = effective_radius(&field.geom, r);
    if r < a {
        let h = field.h;
        let jl = table.j(l);
        let jp = table.jp(l);
        let pre = I / (h * h);
        let e_r = pre * (field.a * beta * h * jp + I * (lf * wmu / r_eff) * field.b * jl);
        let e_phi = pre * (I * (lf * beta / r_eff * field.a * jl) - field.b * (h * wmu * jp));
        let e_z = Complex64::from(field.a * jl);
        CylindricalField::new(e_r, e_phi, e_z) * norm
    } else {
        let q = field.q;
        let pre = I / (q * q);
        let mut e = CylindricalField::default();
        for j in 0..2 {
            let kind = (j + 1) as u8;
            let hj = table.h(kind, l);
            let hjp = table.hp(kind, l);
            e.e_r += pre * (field.c[j] * (beta * q) * hjp + I * (lf * wmu / r_eff) * field.d[j] * hj);
            e.e_phi += pre * (I * (lf * beta / r_eff) * field.c[j] * hj - field.d[j] * (q * wmu) * hjp);
            e.e_z += field.c[j] * hj;
        }
        e * norm
    }
}
