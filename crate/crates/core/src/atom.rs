//! Hyperfine sublevels of the rubidium-87 D2 line, their dipole matrix
//! elements and the rotation of field vectors into the quantization frame.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::guided_modes::spherical_from_cartesian;
use crate::specfun::{wigner_3j, wigner_6j, HalfInteger};
use crate::units::{angular_frequency, HBAR, SPEED_OF_LIGHT, VACUUM_PERMEABILITY, VACUUM_PERMITTIVITY};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Manifold {
    Ground,
    Excited,
}

/// A magnetic sublevel `|J F M>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sublevel {
    pub manifold: Manifold,
    pub j: HalfInteger,
    pub f: HalfInteger,
    pub m: HalfInteger,
}

impl Sublevel {
    pub fn new(manifold: Manifold, j: HalfInteger, f: HalfInteger, m: HalfInteger) -> Result<Self> {
        if m.twice().abs() > f.twice() || (f.twice() + m.twice()) % 2 != 0 {
            return Err(Error::AngularMomentum(format!("|M| = {m} not allowed for F = {f}")));
        }
        Ok(Self { manifold, j, f, m })
    }

    /// The same level with `M -> -M`.
    pub fn mirrored(&self) -> Self {
        Self { m: -self.m, ..*self }
    }

    pub fn is_excited(&self) -> bool {
        self.manifold == Manifold::Excited
    }
}

impl std::fmt::Display for Sublevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let prime = if self.is_excited() { "'" } else { "" };
        write!(f, "|F{prime}={}, M{prime}={}>", self.f, self.m)
    }
}

/// Fine- and hyperfine structure of an alkali D line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelStructure {
    pub nuclear_spin: HalfInteger,
    pub j_ground: HalfInteger,
    pub j_excited: HalfInteger,
    excited: Vec<Sublevel>,
    ground: Vec<Sublevel>,
}

impl LevelStructure {
    pub fn new(nuclear_spin: HalfInteger, j_ground: HalfInteger, j_excited: HalfInteger) -> Self {
        let levels = |manifold, j: HalfInteger| {
            let f_min = (j.twice() - nuclear_spin.twice()).abs();
            let f_max = j.twice() + nuclear_spin.twice();
            let mut out = Vec::new();
            for f2 in (f_min..=f_max).step_by(2) {
                let f = HalfInteger::from_twice(f2);
                for m in f.projections() {
                    out.push(Sublevel { manifold, j, f, m });
                }
            }
            out
        };
        Self {
            nuclear_spin,
            j_ground,
            j_excited,
            excited: levels(Manifold::Excited, j_excited),
            ground: levels(Manifold::Ground, j_ground),
        }
    }

    /// Rubidium 87, `5S_{1/2} -> 5P_{3/2}`, nuclear spin 3/2.
    pub fn rb87_d2() -> Self {
        Self::new(HalfInteger::from_twice(3), HalfInteger::from_twice(1), HalfInteger::from_twice(3))
    }

    /// Excited sublevels ordered by `F'` then `M'`.
    pub fn excited(&self) -> &[Sublevel] {
        &self.excited
    }

    /// Ground sublevels ordered by `F` then `M`.
    pub fn ground(&self) -> &[Sublevel] {
        &self.ground
    }

    pub fn excited_in(&self, f: i32) -> Vec<Sublevel> {
        self.excited.iter().copied().filter(|s| s.f == HalfInteger::integer(f)).collect()
    }

    pub fn excited_level(&self, f: i32, m: i32) -> Result<Sublevel> {
        self.excited
            .iter()
            .copied()
            .find(|s| s.f == HalfInteger::integer(f) && s.m == HalfInteger::integer(m))
            .ok_or_else(|| Error::AngularMomentum(format!("no excited sublevel F'={f}, M'={m}")))
    }

    pub fn index_of(&self, level: &Sublevel) -> Option<usize> {
        match level.manifold {
            Manifold::Excited => self.excited.iter().position(|s| s == level),
            Manifold::Ground => self.ground.iter().position(|s| s == level),
        }
    }
}

/// Spherical component `d_q` (in the quantization frame) of `<e|D|g>` with a
/// unit reduced matrix element.
pub fn dipole_spherical_component(
    structure: &LevelStructure,
    e: &Sublevel,
    g: &Sublevel,
    q: i32,
) -> Result<f64> {
    if !e.is_excited() || g.is_excited() {
        return Err(Error::AngularMomentum(format!("{e} -> {g} is not an excited-to-ground pair")));
    }
    if e.m.twice() - g.m.twice() != 2 * q {
        return Ok(0.0);
    }
    let one = HalfInteger::integer(1);
    let phase_twice = structure.nuclear_spin.twice() + e.j.twice() - e.m.twice();
    let phase = if (phase_twice / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let six = wigner_6j(e.j, e.f, structure.nuclear_spin, g.f, g.j, one);
    let three = wigner_3j(g.f, one, e.f, g.m, HalfInteger::integer(q), -e.m)?;
    let dim = ((g.f.twice() + 1) * (e.f.twice() + 1)) as f64;
    Ok(phase * dim.sqrt() * six * three)
}

/// Precomputed dipole elements between every excited and ground sublevel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DipoleTable {
    structure: LevelStructure,
    /// `values[e][g]` is the nonzero spherical component, with `q = M' - M`.
    values: Vec<Vec<f64>>,
}

impl DipoleTable {
    pub fn new(structure: LevelStructure) -> Self {
        let values = structure
            .excited()
            .iter()
            .map(|e| {
                structure
                    .ground()
                    .iter()
                    .map(|g| {
                        let dq = e.m.twice() - g.m.twice();
                        if dq.abs() > 2 {
                            0.0
                        } else {
                            dipole_spherical_component(&structure, e, g, dq / 2).unwrap_or(0.0)
                        }
                    })
                    .collect()
            })
            .collect();
        Self { structure, values }
    }

    pub fn rb87_d2() -> Self {
        Self::new(LevelStructure::rb87_d2())
    }

    pub fn structure(&self) -> &LevelStructure {
        &self.structure
    }

    /// Nonzero component `d_q` and its `q`, by sublevel indices.
    pub fn element(&self, e: usize, g: usize) -> (i32, f64) {
        let q = (self.structure.excited()[e].m.twice() - self.structure.ground()[g].m.twice()) / 2;
        (q, self.values[e][g])
    }

    /// Spherical vector `(d_{-1}, d_0, d_{+1})` in the quantization frame.
    pub fn spherical_vector(&self, e: usize, g: usize) -> [f64; 3] {
        let (q, v) = self.element(e, g);
        let mut out = [0.0; 3];
        if q.abs() <= 1 {
            out[(q + 1) as usize] = v;
        }
        out
    }

    /// Cartesian vector in the fiber frame, for use in `d · e` with fiber-frame
    /// Cartesian field components.
    pub fn fiber_cartesian(&self, e: usize, g: usize, frame: &QuantizationFrame) -> [Complex64; 3] {
        let s = self.spherical_vector(e, g);
        let dq = cartesian_from_spherical([s[0].into(), s[1].into(), s[2].into()]);
        frame.to_fiber(dq)
    }
}

/// Orientation `(θ_Q, φ_Q)` of the quantization axis relative to the fiber frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizationFrame {
    pub theta: f64,
    pub phi: f64,
}

impl QuantizationFrame {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !phi.is_finite() {
            return Err(Error::Geometry(format!("quantization angles theta = {theta}, phi = {phi} out of range")));
        }
        Ok(Self { theta, phi: phi.rem_euclid(2.0 * PI) })
    }

    /// Quantization axis along the fiber axis.
    pub fn fiber_axis() -> Self {
        Self { theta: 0.0, phi: 0.0 }
    }

    pub fn along_x() -> Self {
        Self { theta: PI / 2.0, phi: 0.0 }
    }

    pub fn along_y() -> Self {
        Self { theta: PI / 2.0, phi: PI / 2.0 }
    }

    /// Rows are the unit vectors `x_Q, y_Q, z_Q` in fiber coordinates.
    pub fn rotation(&self) -> [[f64; 3]; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [[cp * ct, sp * ct, -st], [-sp, cp, 0.0], [cp * st, sp * st, ct]]
    }

    /// Fiber-frame Cartesian vector to quantization-frame Cartesian components.
    pub fn to_quantization(&self, v: [Complex64; 3]) -> [Complex64; 3] {
        let r = self.rotation();
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (o, row) in out.iter_mut().zip(r.iter()) {
            *o = v[0] * row[0] + v[1] * row[1] + v[2] * row[2];
        }
        out
    }

    /// Inverse of [`Self::to_quantization`].
    pub fn to_fiber(&self, v: [Complex64; 3]) -> [Complex64; 3] {
        let r = self.rotation();
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = v[0] * r[0][i] + v[1] * r[1][i] + v[2] * r[2][i];
        }
        out
    }
}

/// Cartesian components from spherical `(v_{-1}, v_0, v_{+1})`.
pub fn cartesian_from_spherical(s: [Complex64; 3]) -> [Complex64; 3] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [(s[0] - s[2]) * r, I * (s[0] + s[2]) * r, s[1]]
}

/// Spherical components `(e_{-1Q}, e_{0Q}, e_{+1Q})` of a cylindrical field at
/// azimuth `atom_phi`, in the quantization frame.
pub fn frame_rotate(
    field: &crate::guided_modes::CylindricalField,
    atom_phi: f64,
    frame: &QuantizationFrame,
) -> [Complex64; 3] {
    spherical_from_cartesian(frame.to_quantization(field.to_cartesian(atom_phi)))
}

/// `d · e = Σ_q (-1)^q d_q e_{-q}` for spherical components.
pub fn spherical_dot(d: [Complex64; 3], e: [Complex64; 3]) -> Complex64 {
    -d[0] * e[2] + d[1] * e[1] - d[2] * e[0]
}

/// SI constants and the atomic transition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub c: f64,
    pub epsilon0: f64,
    pub mu0: f64,
    pub hbar: f64,
    pub omega0: f64,
    pub reduced_dipole: f64,
    /// `J'` of the upper fine-structure level.
    pub j_excited: HalfInteger,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            c: SPEED_OF_LIGHT,
            epsilon0: VACUUM_PERMITTIVITY,
            mu0: VACUUM_PERMEABILITY,
            hbar: HBAR,
            omega0: angular_frequency(780e-9),
            reduced_dipole: 1.0,
            j_excited: HalfInteger::from_twice(3),
        }
    }
}

impl PhysicalConstants {
    pub fn with_wavelength(lambda: f64) -> Self {
        Self { omega0: angular_frequency(lambda), ..Self::default() }
    }

    pub fn wavelength(&self) -> f64 {
        2.0 * PI * self.c / self.omega0
    }

    pub fn k0(&self) -> f64 {
        self.omega0 / self.c
    }
}

/// Free-space decay rate of the excited fine-structure level.
pub fn free_space_rate(constants: &PhysicalConstants) -> f64 {
    let c = constants;
    c.omega0.powi(3) * c.reduced_dipole.powi(2)
        / (3.0 * PI * c.epsilon0 * c.hbar * c.c.powi(3) * (c.j_excited.twice() + 1) as f64)
}
