//! Vector profile functions of guided modes, their normalization and the
//! assembly of full mode functions for a given direction and circulation.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fiber::{GuidedModeSolution, ModeFamily, ModeId};
use crate::quadrature::integrate_adaptive;
use crate::specfun::{bessel_j_seq, bessel_k_seq};
use crate::units::VACUUM_PERMEABILITY;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Electric-field profile in cylindrical components.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CylindricalField {
    pub e_r: Complex64,
    pub e_phi: Complex64,
    pub e_z: Complex64,
}

impl CylindricalField {
    pub fn new(e_r: Complex64, e_phi: Complex64, e_z: Complex64) -> Self {
        Self { e_r, e_phi, e_z }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.e_r.norm_sqr() + self.e_phi.norm_sqr() + self.e_z.norm_sqr()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.e_r.conj(), self.e_phi.conj(), self.e_z.conj())
    }

    pub fn components(&self) -> [Complex64; 3] {
        [self.e_r, self.e_phi, self.e_z]
    }

    /// Cartesian `(e_x, e_y, e_z)` at azimuth `phi`.
    pub fn to_cartesian(&self, phi: f64) -> [Complex64; 3] {
        let (s, c) = phi.sin_cos();
        [self.e_r * c - self.e_phi * s, self.e_r * s + self.e_phi * c, self.e_z]
    }

    /// Largest componentwise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.e_r - other.e_r)
            .norm()
            .max((self.e_phi - other.e_phi).norm())
            .max((self.e_z - other.e_z).norm())
    }
}

impl Mul<Complex64> for CylindricalField {
    type Output = Self;
    fn mul(self, k: Complex64) -> Self {
        Self::new(self.e_r * k, self.e_phi * k, self.e_z * k)
    }
}

impl Mul<f64> for CylindricalField {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::new(self.e_r * k, self.e_phi * k, self.e_z * k)
    }
}

impl Add for CylindricalField {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.e_r + o.e_r, self.e_phi + o.e_phi, self.e_z + o.e_z)
    }
}

impl Neg for CylindricalField {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

/// Atom position in fiber cylindrical coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomPosition {
    r: f64,
    phi: f64,
    z: f64,
}

impl AtomPosition {
    /// `phi` is wrapped into `[0, 2π)`.
    pub fn new(r: f64, phi: f64, z: f64) -> Result<Self> {
        if !(r >= 0.0 && r.is_finite()) || !phi.is_finite() || !z.is_finite() {
            return Err(Error::Geometry(format!("invalid atom position r = {r}, phi = {phi}, z = {z}")));
        }
        let phi = phi.rem_euclid(2.0 * PI);
        Ok(Self { r, phi, z })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn z(&self) -> f64 {
        self.z
    }
}

/// Unsigned profile `(e_r, e_phi, e_z)` of the mode type at radius `r`, scaled by
/// `sol.amplitude`. For `r >= a` the exterior expressions are used.
pub fn base_profile(sol: &GuidedModeSolution, r: f64) -> CylindricalField {
    branch_profile(sol, r, r < sol.geom.radius())
}

/// Interior expressions evaluated at any `r`, for boundary-continuity checks.
pub fn interior_profile(sol: &GuidedModeSolution, r: f64) -> CylindricalField {
    branch_profile(sol, r, true)
}

fn branch_profile(sol: &GuidedModeSolution, r: f64, inside: bool) -> CylindricalField {
    let a = sol.geom.radius();
    let amp = sol.amplitude;
    let (h, q, beta, s) = (sol.h, sol.q, sol.beta, sol.s);
    match sol.kind.family() {
        ModeFamily::HE | ModeFamily::EH => {
            let l = sol.kind.l() as usize;
            if inside {
                let j = bessel_j_seq(l + 1, h * r);
                let jm = j[l - 1];
                let jp = j[l + 1];
                let pre = amp * beta / (2.0 * h);
                CylindricalField::new(
                    I * (pre * ((1.0 - s) * jm - (1.0 + s) * jp)),
                    Complex64::from(-pre * ((1.0 - s) * jm + (1.0 + s) * jp)),
                    Complex64::from(amp * j[l]),
                )
            } else {
                let ratio = bessel_j_seq(l, h * a)[l] / bessel_k_seq(l, q * a)[l];
                let k = bessel_k_seq(l + 1, q * r);
                let km = k[l - 1];
                let kp = k[l + 1];
                let pre = amp * beta / (2.0 * q) * ratio;
                CylindricalField::new(
                    I * (pre * ((1.0 - s) * km + (1.0 + s) * kp)),
                    Complex64::from(-pre * ((1.0 - s) * km - (1.0 + s) * kp)),
                    Complex64::from(amp * ratio * k[l]),
                )
            }
        }
        ModeFamily::TE => {
            let wmu = sol.omega * VACUUM_PERMEABILITY;
            let e_phi = if inside {
                I * (wmu / h * amp * bessel_j_seq(1, h * r)[1])
            } else {
                let ratio = bessel_j_seq(0, h * a)[0] / bessel_k_seq(0, q * a)[0];
                -I * (wmu / q * ratio * amp * bessel_k_seq(1, q * r)[1])
            };
            CylindricalField::new(Complex64::from(0.0), e_phi, Complex64::from(0.0))
        }
        ModeFamily::TM => {
            if inside {
                let j = bessel_j_seq(1, h * r);
                CylindricalField::new(
                    -I * (beta / h * amp * j[1]),
                    Complex64::from(0.0),
                    Complex64::from(amp * j[0]),
                )
            } else {
                let ratio = bessel_j_seq(0, h * a)[0] / bessel_k_seq(0, q * a)[0];
                let k = bessel_k_seq(1, q * r);
                CylindricalField::new(
                    I * (beta / q * ratio * amp * k[1]),
                    Complex64::from(0.0),
                    Complex64::from(ratio * amp * k[0]),
                )
            }
        }
    }
}

/// `∫₀^{2π} dφ ∫₀^∞ n_ref² |e|² r dr` for the current amplitude.
pub fn normalization_integral(sol: &GuidedModeSolution) -> Result<f64> {
    let a = sol.geom.radius();
    let (n1s, n2s) = (sol.geom.n1().powi(2), sol.geom.n2().powi(2));
    let tol = 1e-12;
    let inner = integrate_adaptive(|r| n1s * base_profile(sol, r).norm_sqr() * r, 0.0, a, tol)?;
    let outer_end = a + 40.0 / sol.q;
    let outer_fn = |r: f64| n2s * base_profile(sol, r).norm_sqr() * r;
    let mid = a + 4.0 / sol.q;
    let outer = integrate_adaptive(outer_fn, a, mid, tol)? + integrate_adaptive(outer_fn, mid, outer_end, tol)?;
    // K_l(x)² x ~ (π/2) e^{-2x}, so the remaining tail is f(R)/(2q).
    let tail = outer_fn(outer_end) / (2.0 * sol.q);
    Ok(2.0 * PI * (inner + outer + tail))
}

/// Fraction of the normalization integral carried outside the core.
pub fn outside_fraction(sol: &GuidedModeSolution) -> Result<f64> {
    let a = sol.geom.radius();
    let n1s = sol.geom.n1().powi(2);
    let inner = 2.0 * PI * integrate_adaptive(|r| n1s * base_profile(sol, r).norm_sqr() * r, 0.0, a, 1e-12)?;
    Ok(1.0 - inner / normalization_integral(sol)?)
}

/// Fix the real positive amplitude so the normalization integral equals one.
pub fn normalize(sol: &GuidedModeSolution) -> Result<GuidedModeSolution> {
    let mut unit = *sol;
    unit.amplitude = 1.0;
    let integral = normalization_integral(&unit)?;
    if !(integral > 0.0 && integral.is_finite()) {
        return Err(Error::Quadrature { achieved: f64::NAN, wanted: 1e-12 });
    }
    unit.amplitude = 1.0 / integral.sqrt();
    Ok(unit)
}

/// Mode function of one `(N, f, p)` at a point, with the propagation phase kept apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeFunction {
    pub field: CylindricalField,
    /// `exp(i(fβz + plφ))`.
    pub phase: Complex64,
}

/// Profile `e^(ω N f p)` at the atom position plus its phase factor.
pub fn full_mode_function(sol: &GuidedModeSolution, id: ModeId, pos: &AtomPosition) -> ModeFunction {
    let base = base_profile(sol, pos.r());
    ModeFunction { field: oriented_profile(&base, id), phase: mode_phase(sol, id, pos) }
}

/// Apply the `f` and `p` signs to an unsigned profile.
pub fn oriented_profile(base: &CylindricalField, id: ModeId) -> CylindricalField {
    let f = id.direction.sign();
    let p = id.polarization.sign();
    match id.kind.family() {
        ModeFamily::HE | ModeFamily::EH => CylindricalField::new(base.e_r, base.e_phi * p, base.e_z * f),
        ModeFamily::TE => CylindricalField::new(Complex64::from(0.0), base.e_phi, Complex64::from(0.0)),
        ModeFamily::TM => CylindricalField::new(base.e_r, Complex64::from(0.0), base.e_z * f),
    }
}

pub fn mode_phase(sol: &GuidedModeSolution, id: ModeId, pos: &AtomPosition) -> Complex64 {
    let f = id.direction.sign();
    let p = id.polarization.sign();
    let l = sol.kind.l() as f64;
    Complex64::from_polar(1.0, f * sol.beta * pos.z() + p * l * pos.phi())
}

/// Spherical components `(e_{-1}, e_0, e_{+1})` of a Cartesian vector.
pub fn spherical_from_cartesian(v: [Complex64; 3]) -> [Complex64; 3] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [(v[0] - I * v[1]) * s, v[2], -(v[0] + I * v[1]) * s]
}

/// Spherical components in the fiber frame at azimuth `phi`.
pub fn fiber_frame_spherical(field: &CylindricalField, phi: f64) -> [Complex64; 3] {
    spherical_from_cartesian(field.to_cartesian(phi))
}

/// Convenience: `Direction` flip for a mode label.
pub fn reversed_direction(id: ModeId) -> ModeId {
    ModeId { direction: id.direction.reversed(), ..id }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::{solve_beta, supported_modes, FiberGeometry, ModeKind};
    use crate::units::angular_frequency;

    fn normalized(a_nm: f64, kind: ModeKind) -> GuidedModeSolution {
        let g = FiberGeometry::vacuum_clad_silica(a_nm * 1e-9).unwrap();
        normalize(&solve_beta(&g, angular_frequency(780e-9), kind).unwrap()).unwrap()
    }

    #[test]
    fn normalization_is_unity_and_quadratic() {
        for kind in [ModeKind::HE11, ModeKind::TE01, ModeKind::TM01, ModeKind::HE21] {
            let sol = normalized(400.0, kind);
            assert!(sol.amplitude > 0.0);
            let n = normalization_integral(&sol).unwrap();
            assert!((n - 1.0).abs() < 1e-8, "{kind}: {n}");
            let mut doubled = sol;
            doubled.amplitude *= 2.0;
            assert!((normalization_integral(&doubled).unwrap() - 4.0).abs() < 4e-8);
        }
    }

    #[test]
    fn outside_fraction_shrinks_with_radius() {
        let f_small = outside_fraction(&normalized(300.0, ModeKind::HE11)).unwrap();
        let f_big = outside_fraction(&normalized(400.0, ModeKind::HE11)).unwrap();
        assert!(0.0 < f_big && f_big < f_small && f_small < 1.0);
    }

    #[test]
    fn boundary_conditions() {
        for kind in [ModeKind::HE11, ModeKind::TE01, ModeKind::TM01, ModeKind::HE21] {
            let sol = normalized(400.0, kind);
            let a = sol.geom.radius();
            let inside = interior_profile(&sol, a);
            let outside = base_profile(&sol, a);
            let scale = outside.norm_sqr().sqrt();
            assert!((inside.e_z - outside.e_z).norm() < 1e-9 * scale, "{kind}");
            assert!((inside.e_phi - outside.e_phi).norm() < 1e-9 * scale, "{kind}");
            let (n1s, n2s) = (sol.geom.n1().powi(2), sol.geom.n2().powi(2));
            assert!((inside.e_r * n1s - outside.e_r * n2s).norm() < 1e-9 * scale * n1s, "{kind}");
        }
    }

    #[test]
    fn te_and_tm_null_components() {
        let te = normalized(400.0, ModeKind::TE01);
        let tm = normalized(400.0, ModeKind::TM01);
        for r in [0.0, 100e-9, 399e-9, 400e-9, 800e-9] {
            let e = base_profile(&te, r);
            assert_eq!(e.e_r.norm(), 0.0);
            assert_eq!(e.e_z.norm(), 0.0);
            assert_eq!(base_profile(&tm, r).e_phi.norm(), 0.0);
        }
    }

    #[test]
    fn direction_and_circulation_signs() {
        let pos = AtomPosition::new(450e-9, 0.7, 1e-6).unwrap();
        let g = FiberGeometry::vacuum_clad_silica(400e-9).unwrap();
        let omega = angular_frequency(780e-9);
        for kind in supported_modes(&g, omega) {
            let sol = normalize(&solve_beta(&g, omega, kind).unwrap()).unwrap();
            for id in kind.mode_ids() {
                let e = full_mode_function(&sol, id, &pos).field;
                let flipped = ModeId {
                    direction: id.direction.reversed(),
                    polarization: id.polarization.reversed(),
                    ..id
                };
                let e2 = full_mode_function(&sol, flipped, &pos).field;
                assert!(e.max_abs_diff(&-e2.conj()) < 1e-12 * e.norm_sqr().sqrt());
                let rev = full_mode_function(&sol, reversed_direction(id), &pos).field;
                if kind.family() == ModeFamily::TE {
                    assert_eq!(e, rev);
                } else {
                    assert_eq!(e.e_r, rev.e_r);
                    assert_eq!(e.e_phi, rev.e_phi);
                    assert_eq!(e.e_z, -rev.e_z);
                }
            }
        }
    }
}
