//! Step-index fiber dispersion: cutoffs, guided-mode propagation constants and
//! group delay.
//!
//! Eigenvalue equations are solved in the variable `u = h a` on `(0, V)` with
//! `w = q a = sqrt(V² - u²)`. Each family-specific equation is multiplied
//! through by its pole factor (`J_l(u)` for hybrid modes, `u w J_0(u) K_0(w)`
//! for TE/TM) so the scanned residual is continuous and every sign change
//! brackets a genuine root.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{bessel_j, bessel_j_seq, bessel_k_seq};
use crate::units::SPEED_OF_LIGHT;

/// Core index of silica at 780 nm.
pub const SILICA_INDEX_780NM: f64 = 1.4537;

/// Radius and refractive indices of a step-index fiber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberGeometry {
    radius: f64,
    n1: f64,
    n2: f64,
}

impl FiberGeometry {
    /// `radius` in meters. `n1 == n2` is accepted as the homogeneous (no fiber) limit.
    pub fn new(radius: f64, n1: f64, n2: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Geometry(format!("radius must be positive, got {radius}")));
        }
        if !(n2 >= 1.0 && n1 >= n2 && n1.is_finite()) {
            return Err(Error::Geometry(format!("need n1 >= n2 >= 1, got n1 = {n1}, n2 = {n2}")));
        }
        Ok(Self { radius, n1, n2 })
    }

    /// Silica core (`n1 = 1.4537`) in vacuum (`n2 = 1`).
    pub fn vacuum_clad_silica(radius: f64) -> Result<Self> {
        Self::new(radius, SILICA_INDEX_780NM, 1.0)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn n1(&self) -> f64 {
        self.n1
    }

    pub fn n2(&self) -> f64 {
        self.n2
    }

    pub fn numerical_aperture(&self) -> f64 {
        (self.n1 * self.n1 - self.n2 * self.n2).sqrt()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.n1 == self.n2
    }

    /// Refractive index at radial distance `r` (exterior value at `r = a`).
    pub fn index_at(&self, r: f64) -> f64 {
        if r < self.radius {
            self.n1
        } else {
            self.n2
        }
    }

    /// Fiber radius at which a mode with cutoff `v_cutoff` starts to be guided.
    pub fn cutoff_radius(v_cutoff: f64, wavelength: f64, n1: f64, n2: f64) -> f64 {
        v_cutoff * wavelength / (2.0 * std::f64::consts::PI * (n1 * n1 - n2 * n2).sqrt())
    }
}

/// Fiber size parameter `V = k a sqrt(n1² - n2²)`.
pub fn size_parameter(geom: &FiberGeometry, omega: f64) -> f64 {
    omega / SPEED_OF_LIGHT * geom.radius * geom.numerical_aperture()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModeFamily {
    HE,
    EH,
    TE,
    TM,
}

impl ModeFamily {
    pub fn is_hybrid(self) -> bool {
        matches!(self, ModeFamily::HE | ModeFamily::EH)
    }
}

/// Mode type `N`: family with azimuthal order `l` and radial order `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeKind {
    family: ModeFamily,
    l: u32,
    m: u32,
}

impl ModeKind {
    pub fn new(family: ModeFamily, l: u32, m: u32) -> Result<Self> {
        let ok = m >= 1
            && match family {
                ModeFamily::TE | ModeFamily::TM => l == 0,
                ModeFamily::HE | ModeFamily::EH => l >= 1,
            };
        if ok {
            Ok(Self { family, l, m })
        } else {
            Err(Error::InvalidMode(format!("{family:?}{l}{m}")))
        }
    }

    pub const HE11: ModeKind = ModeKind { family: ModeFamily::HE, l: 1, m: 1 };
    pub const TE01: ModeKind = ModeKind { family: ModeFamily::TE, l: 0, m: 1 };
    pub const TM01: ModeKind = ModeKind { family: ModeFamily::TM, l: 0, m: 1 };
    pub const HE21: ModeKind = ModeKind { family: ModeFamily::HE, l: 2, m: 1 };

    pub fn family(&self) -> ModeFamily {
        self.family
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// All `(f, p)` labels of this mode type: four for hybrid modes, two for TE/TM.
    pub fn mode_ids(&self) -> Vec<ModeId> {
        let pols: &[Polarization] = if self.family.is_hybrid() {
            &[Polarization::Plus, Polarization::Minus]
        } else {
            &[Polarization::None]
        };
        let mut out = Vec::with_capacity(4);
        for dir in [Direction::Forward, Direction::Backward] {
            for &pol in pols {
                out.push(ModeId { kind: *self, direction: dir, polarization: pol });
            }
        }
        out
    }
}

impl fmt::Display for ModeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}{}", self.family, self.l, self.m)
    }
}

/// Propagation direction `f` along the fiber axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }

    pub fn reversed(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// Phase circulation `p`; `None` stands for `p = 0` of TE and TM modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarization {
    Plus,
    Minus,
    None,
}

impl Polarization {
    pub fn sign(self) -> f64 {
        match self {
            Polarization::Plus => 1.0,
            Polarization::Minus => -1.0,
            Polarization::None => 0.0,
        }
    }

    pub fn reversed(self) -> Polarization {
        match self {
            Polarization::Plus => Polarization::Minus,
            Polarization::Minus => Polarization::Plus,
            Polarization::None => Polarization::None,
        }
    }
}

/// Full guided-mode label `(N, f, p)` at a fixed frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeId {
    pub kind: ModeKind,
    pub direction: Direction,
    pub polarization: Polarization,
}

impl ModeId {
    pub fn new(kind: ModeKind, direction: Direction, polarization: Polarization) -> Result<Self> {
        let hybrid = kind.family.is_hybrid();
        if hybrid == (polarization == Polarization::None) {
            return Err(Error::InvalidMode(format!("{kind} with polarization {polarization:?}")));
        }
        Ok(Self { kind, direction, polarization })
    }
}

/// A solved guided mode at one frequency.
///
/// `amplitude` is 1 straight out of [`solve_beta`] and is fixed by
/// `guided_modes::normalize`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GuidedModeSolution {
    pub geom: FiberGeometry,
    pub kind: ModeKind,
    pub omega: f64,
    pub beta: f64,
    pub h: f64,
    pub q: f64,
    /// Hybrid-mode parameter `s`; zero for TE and TM.
    pub s: f64,
    pub amplitude: f64,
    pub beta_prime: f64,
}

impl GuidedModeSolution {
    pub fn k(&self) -> f64 {
        self.omega / SPEED_OF_LIGHT
    }

    pub fn effective_index(&self) -> f64 {
        self.beta / self.k()
    }
}

// ---------------------------------------------------------------------------
// Cutoffs

fn scan_roots<F: Fn(f64) -> f64>(f: F, start: f64, stop: f64, step: f64, count: usize) -> Vec<f64> {
    let mut roots = Vec::with_capacity(count);
    let mut x0 = start;
    let mut f0 = f(x0);
    while roots.len() < count && x0 < stop {
        let x1 = x0 + step;
        let f1 = f(x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0 * f1 < 0.0 {
            roots.push(bisect(&f, x0, x1, f0));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Cutoff size parameter `V_c` of a mode type, root-bracketed to 1e-10 or better.
pub fn cutoff_v(geom: &FiberGeometry, kind: ModeKind) -> f64 {
    let m = kind.m as usize;
    let l = kind.l as i32;
    let step = 0.01;
    let stop = 400.0;
    match kind.family {
        ModeFamily::HE if l == 1 => {
            if m == 1 {
                0.0
            } else {
                scan_roots(|v| bessel_j(1, v), 1e-3, stop, step, m - 1)[m - 2]
            }
        }
        ModeFamily::HE => {
            let ratio = geom.n1 * geom.n1 / (geom.n2 * geom.n2) + 1.0;
            let f = |v: f64| {
                let j = bessel_j_seq(l as usize, v);
                ratio * (l - 1) as f64 * j[l as usize - 1] - v * j[l as usize]
            };
            scan_roots(f, 1e-3, stop, step, m)[m - 1]
        }
        ModeFamily::EH => scan_roots(|v| bessel_j(l, v), 1e-3, stop, step, m)[m - 1],
        ModeFamily::TE | ModeFamily::TM => scan_roots(|v| bessel_j(0, v), 1e-3, stop, step, m)[m - 1],
    }
}

/// Default enumeration caps for [`supported_modes`].
pub const DEFAULT_L_MAX: u32 = 5;
pub const DEFAULT_M_MAX: u32 = 3;

/// Mode types guided at `omega`, ordered by cutoff.
pub fn supported_modes(geom: &FiberGeometry, omega: f64) -> Vec<ModeKind> {
    supported_modes_with_caps(geom, omega, DEFAULT_L_MAX, DEFAULT_M_MAX)
}

pub fn supported_modes_with_caps(geom: &FiberGeometry, omega: f64, l_max: u32, m_max: u32) -> Vec<ModeKind> {
    if geom.is_homogeneous() {
        return Vec::new();
    }
    let v = size_parameter(geom, omega);
    let mut found: Vec<(f64, ModeKind)> = Vec::new();
    let families = [ModeFamily::HE, ModeFamily::TE, ModeFamily::TM, ModeFamily::EH];
    for family in families {
        let ls: Vec<u32> = match family {
            ModeFamily::TE | ModeFamily::TM => vec![0],
            _ => (1..=l_max).collect(),
        };
        for l in ls {
            for m in 1..=m_max {
                let kind = ModeKind { family, l, m };
                let vc = cutoff_v(geom, kind);
                if vc < v {
                    found.push((vc, kind));
                } else {
                    break;
                }
            }
        }
    }
    found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    found.into_iter().map(|(_, k)| k).collect()
}

// ---------------------------------------------------------------------------
// Eigenvalue equations

/// `K'_l(w) / (w K_l(w))`.
fn k_log_ratio(l: usize, w: f64) -> f64 {
    let k = bessel_k_seq(l + 1, w);
    let km1 = if l == 0 { k[1] } else { k[l - 1] };
    let kp = -0.5 * (km1 + k[l + 1]);
    kp / (w * k[l])
}

/// `J'_l(u) / (u J_l(u))`.
fn j_log_ratio(l: usize, u: f64) -> f64 {
    let j = bessel_j_seq(l + 1, u);
    let jm1 = if l == 0 { -j[1] } else { j[l - 1] };
    let jp = 0.5 * (jm1 - j[l + 1]);
    jp / (u * j[l])
}

struct Problem {
    n1: f64,
    n2: f64,
    v: f64,
    ka: f64,
    family: ModeFamily,
    l: usize,
}

impl Problem {
    fn new(geom: &FiberGeometry, omega: f64, family: ModeFamily, l: usize) -> Self {
        let ka = omega / SPEED_OF_LIGHT * geom.radius;
        Self { n1: geom.n1, n2: geom.n2, v: size_parameter(geom, omega), ka, family, l }
    }

    fn w(&self, u: f64) -> f64 {
        (self.v * self.v - u * u).max(0.0).sqrt()
    }

    /// `β / k` for a given `u`.
    fn beta_over_k(&self, u: f64) -> f64 {
        (self.n1 * self.n1 - (u / self.ka).powi(2)).sqrt()
    }

    /// Pole-free residual of the family equation.
    fn residual(&self, u: f64) -> f64 {
        let w = self.w(u);
        let l = self.l;
        match self.family {
            ModeFamily::TE | ModeFamily::TM => {
                let j = bessel_j_seq(1, u);
                let k = bessel_k_seq(1, w);
                let (a, b) = if self.family == ModeFamily::TE {
                    (1.0, 1.0)
                } else {
                    (self.n1 * self.n1, self.n2 * self.n2)
                };
                a * w * j[1] * k[0] + b * u * j[0] * k[1]
            }
            ModeFamily::HE | ModeFamily::EH => {
                let j = bessel_j_seq(l, u);
                let kr = k_log_ratio(l, w);
                let r = self.r_term(u, w, kr);
                let sign = if self.family == ModeFamily::HE { 1.0 } else { -1.0 };
                let c = (self.n1 * self.n1 + self.n2 * self.n2) / (2.0 * self.n1 * self.n1);
                j[l - 1] / u + j[l] * (c * kr - l as f64 / (u * u) + sign * r)
            }
        }
    }

    fn r_term(&self, u: f64, w: f64, kr: f64) -> f64 {
        let n1s = self.n1 * self.n1;
        let a = (n1s - self.n2 * self.n2) / (2.0 * n1s) * kr;
        let b = self.l as f64 * self.beta_over_k(u) / self.n1 * (1.0 / (w * w) + 1.0 / (u * u));
        (a * a + b * b).sqrt()
    }

    /// Left side minus right side of the general (unsplit) eigenvalue equation,
    /// scaled by the right side (or the first bracket for `l = 0`).
    fn general_residual(&self, u: f64) -> f64 {
        let w = self.w(u);
        let l = self.l;
        let jr = j_log_ratio(l, u);
        let kr = k_log_ratio(l, w);
        let lhs = (jr + kr) * (self.n1 * self.n1 * jr + self.n2 * self.n2 * kr);
        let bk = self.beta_over_k(u);
        let rhs = (l as f64).powi(2) * (1.0 / (u * u) + 1.0 / (w * w)).powi(2) * bk * bk;
        let scale = rhs.abs().max((jr * jr).abs() * self.n1 * self.n1).max(1e-300);
        (lhs - rhs) / scale
    }

    /// Ascending roots in `u`; the m-th mode is the m-th root.
    fn roots(&self) -> Vec<f64> {
        let n = 4096;
        let mut grid: Vec<f64> = (1..n).map(|i| self.v * i as f64 / n as f64).collect();
        for e in 4..=13 {
            grid.push(self.v * (1.0 - 10f64.powi(-e)));
        }
        grid.push(self.v * 1e-4);
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let vals: Vec<f64> = grid.iter().map(|&u| self.residual(u)).collect();
        let mut roots = Vec::new();
        for i in 0..grid.len() - 1 {
            let (f0, f1) = (vals[i], vals[i + 1]);
            if !(f0.is_finite() && f1.is_finite()) {
                continue;
            }
            if f0 == 0.0 {
                roots.push(grid[i]);
            } else if f0 * f1 < 0.0 {
                roots.push(bisect(&|u| self.residual(u), grid[i], grid[i + 1], f0));
            }
        }
        roots
    }
}

/// Propagation constant and profile parameters of mode `kind` at `omega`.
///
/// The returned solution carries `amplitude = 1`; `beta_prime` is filled in.
pub fn solve_beta(geom: &FiberGeometry, omega: f64, kind: ModeKind) -> Result<GuidedModeSolution> {
    let mut sol = solve_beta_only(geom, omega, kind)?;
    sol.beta_prime = beta_prime(geom, omega, kind)?;
    Ok(sol)
}

fn solve_beta_only(geom: &FiberGeometry, omega: f64, kind: ModeKind) -> Result<GuidedModeSolution> {
    let v = size_parameter(geom, omega);
    let vc = cutoff_v(geom, kind);
    if geom.is_homogeneous() || v <= vc {
        return Err(Error::BelowCutoff { mode: kind.to_string(), v, cutoff: vc });
    }
    let problem = Problem::new(geom, omega, kind.family, kind.l as usize);
    let roots = problem.roots();
    let u = *roots
        .get(kind.m as usize - 1)
        .ok_or_else(|| Error::NoRoot { mode: kind.to_string(), v })?;
    let a = geom.radius;
    let k = omega / SPEED_OF_LIGHT;
    let h = u / a;
    let q = problem.w(u) / a;
    let beta = problem.beta_over_k(u) * k;
    let s = if kind.family.is_hybrid() {
        let l = kind.l as usize;
        let w = q * a;
        l as f64 * (1.0 / (u * u) + 1.0 / (w * w)) / (j_log_ratio(l, u) + k_log_ratio(l, w))
    } else {
        0.0
    };
    Ok(GuidedModeSolution { geom: *geom, kind, omega, beta, h, q, s, amplitude: 1.0, beta_prime: 0.0 })
}

/// Relative band above a cutoff in which a missing root is accepted: the
/// `HE_1m` (`m >= 2`) roots approach `u = V` exponentially fast there, so the
/// mode is too delocalized to resolve and couples negligibly to the fiber surface.
pub const NEAR_CUTOFF_BAND: f64 = 0.01;

/// Like [`solve_beta`], but `Ok(None)` for a mode whose root is unresolvable
/// within [`NEAR_CUTOFF_BAND`] of its cutoff.
pub fn solve_beta_if_resolved(geom: &FiberGeometry, omega: f64, kind: ModeKind) -> Result<Option<GuidedModeSolution>> {
    match solve_beta(geom, omega, kind) {
        Ok(sol) => Ok(Some(sol)),
        Err(Error::NoRoot { v, .. }) if v <= cutoff_v(geom, kind) * (1.0 + NEAR_CUTOFF_BAND) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Number of eigenvalue roots of the family/azimuthal order of `kind` below `V`.
pub fn branch_count(geom: &FiberGeometry, omega: f64, family: ModeFamily, l: u32) -> usize {
    if geom.is_homogeneous() {
        return 0;
    }
    Problem::new(geom, omega, family, l as usize).roots().len()
}

/// Residual of the general eigenvalue equation at a solved mode, relative to its scale.
pub fn general_equation_residual(sol: &GuidedModeSolution) -> f64 {
    let p = Problem::new(&sol.geom, sol.omega, sol.kind.family, sol.kind.l as usize);
    p.general_residual(sol.h * sol.geom.radius)
}

/// Residual of the family-specific equation at a solved mode, normalized by
/// the largest term of the equation.
pub fn family_equation_residual(sol: &GuidedModeSolution) -> f64 {
    let p = Problem::new(&sol.geom, sol.omega, sol.kind.family, sol.kind.l as usize);
    let u = sol.h * sol.geom.radius;
    let w = sol.q * sol.geom.radius;
    let l = sol.kind.l as usize;
    let scale = match sol.kind.family {
        ModeFamily::TE | ModeFamily::TM => {
            let j = bessel_j_seq(1, u);
            let k = bessel_k_seq(1, w);
            (w * j[1] * k[0]).abs().max((u * j[0] * k[1]).abs()) * p.n1 * p.n1
        }
        _ => {
            let j = bessel_j_seq(l, u);
            (j[l - 1] / u).abs().max((j[l] * l as f64 / (u * u)).abs())
        }
    };
    p.residual(u).abs() / scale
}

/// `dβ/dω` by Richardson-extrapolated central differences at fixed indices.
///
/// In the homogeneous limit `n1 = n2 = n` the medium is dispersionless with
/// `β = n k`, giving `n / c`.
pub fn beta_prime(geom: &FiberGeometry, omega: f64, kind: ModeKind) -> Result<f64> {
    if geom.is_homogeneous() {
        return Ok(geom.n2 / SPEED_OF_LIGHT);
    }
    beta_prime_with_index(geom, omega, kind, |_| geom.n1)
}

/// `dβ/dω` with a user-supplied core index `n1(ω)` (material dispersion hook).
pub fn beta_prime_with_index<F: Fn(f64) -> f64>(
    geom: &FiberGeometry,
    omega: f64,
    kind: ModeKind,
    n1_of_omega: F,
) -> Result<f64> {
    let beta_at = |w: f64| -> Result<f64> {
        let g = FiberGeometry::new(geom.radius, n1_of_omega(w), geom.n2)?;
        Ok(solve_beta_only(&g, w, kind)?.beta)
    };
    let step = 1e-6 * omega;
    let central = |h: f64| -> Result<f64> { Ok((beta_at(omega + h)? - beta_at(omega - h)?) / (2.0 * h)) };
    let d1 = central(step)?;
    let d2 = central(0.5 * step)?;
    Ok((4.0 * d2 - d1) / 3.0)
}

/// Bit patterns of radius, core index, cladding index and frequency, plus the mode.
type CacheKey = (u64, u64, u64, u64, ModeKind);

/// Read-through cache of normalized solutions keyed by geometry, frequency and mode.
#[derive(Debug, Default)]
pub struct SolutionCache {
    map: RwLock<HashMap<CacheKey, Option<GuidedModeSolution>>>,
}

impl SolutionCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_solve(&self, geom: &FiberGeometry, omega: f64, kind: ModeKind) -> Result<GuidedModeSolution> {
        self.get_if_resolved(geom, omega, kind)?.ok_or_else(|| Error::NoRoot {
            mode: kind.to_string(),
            v: size_parameter(geom, omega),
        })
    }

    /// Cached [`solve_beta_if_resolved`] followed by normalization.
    pub fn get_if_resolved(
        &self,
        geom: &FiberGeometry,
        omega: f64,
        kind: ModeKind,
    ) -> Result<Option<GuidedModeSolution>> {
        let key = (geom.radius.to_bits(), geom.n1.to_bits(), geom.n2.to_bits(), omega.to_bits(), kind);
        if let Some(sol) = self.map.read().expect("cache lock poisoned").get(&key) {
            return Ok(*sol);
        }
        let sol = match solve_beta_if_resolved(geom, omega, kind)? {
            Some(raw) => Some(crate::guided_modes::normalize(&raw)?),
            None => None,
        };
        self.map.write().expect("cache lock poisoned").insert(key, sol);
        Ok(sol)
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
