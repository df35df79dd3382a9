use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::DecayCoefficientTensor;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Density matrix over excited sublevels (first block) and ground sublevels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix {
    n_excited: usize,
    n_ground: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn zeros(n_excited: usize, n_ground: usize) -> Self {
        let n = n_excited + n_ground;
        Self { n_excited, n_ground, data: vec![ZERO; n * n] }
    }

    /// All population in excited sublevel `e`.
    pub fn excited_state(n_excited: usize, n_ground: usize, e: usize) -> Self {
        let mut rho = Self::zeros(n_excited, n_ground);
        rho[(e, e)] = Complex64::new(1.0, 0.0);
        rho
    }

    /// All population in ground sublevel `g`.
    pub fn ground_state(n_excited: usize, n_ground: usize, g: usize) -> Self {
        let mut rho = Self::zeros(n_excited, n_ground);
        let i = n_excited + g;
        rho[(i, i)] = Complex64::new(1.0, 0.0);
        rho
    }

    /// Pure state `|ψ><ψ|` from unnormalized amplitudes.
    pub fn pure(n_excited: usize, n_ground: usize, psi: &[Complex64]) -> Result<Self> {
        let n = n_excited + n_ground;
        let norm: f64 = psi.iter().map(|x| x.norm_sqr()).sum();
        if psi.len() != n || norm == 0.0 {
            return Err(Error::DensityMatrix(format!("state vector needs {n} entries and nonzero norm")));
        }
        let mut rho = Self::zeros(n_excited, n_ground);
        for i in 0..n {
            for j in 0..n {
                rho[(i, j)] = psi[i] * psi[j].conj() / norm;
            }
        }
        Ok(rho)
    }

    pub fn dim(&self) -> usize {
        self.n_excited + self.n_ground
    }

    pub fn n_excited(&self) -> usize {
        self.n_excited
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self[(i, i)]).sum()
    }

    pub fn population(&self, i: usize) -> f64 {
        self[(i, i)].re
    }

    pub fn excited_population(&self) -> f64 {
        (0..self.n_excited).map(|i| self.population(i)).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Positive semidefiniteness up to `tol`, tested by a Cholesky
    /// factorization of `ρ + tol·1`.
    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        let n = self.dim();
        let mut l = vec![ZERO; n * n];
        for j in 0..n {
            let mut diag = self[(j, j)].re + tol;
            for k in 0..j {
                diag -= l[j * n + k].norm_sqr();
            }
            if diag <= 0.0 {
                return false;
            }
            let ljj = diag.sqrt();
            l[j * n + j] = Complex64::new(ljj, 0.0);
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / ljj;
            }
        }
        true
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).norm() > tol {
            return Err(Error::DensityMatrix(format!("trace {tr} differs from 1")));
        }
        if self.hermiticity_defect() > tol {
            return Err(Error::DensityMatrix("matrix is not Hermitian".into()));
        }
        if !self.is_positive_semidefinite(tol) {
            return Err(Error::DensityMatrix("matrix is not positive semidefinite".into()));
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for DensityMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim() + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DensityMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        let n = self.dim();
        &mut self.data[i * n + j]
    }
}

/// Right-hand side of the pure-decay master equation.
struct Generator {
    ne: usize,
    ng: usize,
    /// `γ_{ee'}`, row-major.
    gamma_ee: Vec<Complex64>,
    tensor: DecayCoefficientTensor,
}

impl Generator {
    fn new(tensor: &DecayCoefficientTensor) -> Self {
        let (ne, ng) = (tensor.n_excited(), tensor.n_ground());
        let mut gamma_ee = vec![ZERO; ne * ne];
        for e in 0..ne {
            for e2 in 0..ne {
                gamma_ee[e * ne + e2] = tensor.gamma_excited(e, e2);
            }
        }
        Self { ne, ng, gamma_ee, tensor: tensor.clone() }
    }

    fn derivative(&self, rho: &DensityMatrix) -> Vec<Complex64> {
        let (ne, ng) = (self.ne, self.ng);
        let n = ne + ng;
        let ge = |a: usize, b: usize| self.gamma_ee[a * ne + b];
        let mut out = vec![ZERO; n * n];
        for e in 0..ne {
            for e2 in 0..ne {
                let mut acc = ZERO;
                for e3 in 0..ne {
                    acc += ge(e, e3) * rho[(e3, e2)] + ge(e3, e2) * rho[(e, e3)];
                }
                out[e * n + e2] = -0.5 * acc;
            }
        }
        for g in 0..ng {
            for g2 in 0..ng {
                let mut acc = ZERO;
                for e in 0..ne {
                    for e2 in 0..ne {
                        let r = rho[(e, e2)];
                        if r != ZERO {
                            acc += self.tensor.gamma(e2, e, g2, g) * r;
                        }
                    }
                }
                out[(ne + g) * n + ne + g2] = acc;
            }
        }
        for e in 0..ne {
            for g in 0..ng {
                let mut acc = ZERO;
                for e2 in 0..ne {
                    acc += ge(e, e2) * rho[(e2, ne + g)];
                }
                let v = -0.5 * acc;
                out[e * n + ne + g] = v;
                out[(ne + g) * n + e] = v.conj();
            }
        }
        out
    }
}

/// Step control for [`evolve_density_matrix`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolveOptions {
    /// Per-step local error bound, absolute and relative.
    pub tol: f64,
    pub initial_step: f64,
    pub min_step: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self { tol: 1e-9, initial_step: 1e-3, min_step: 1e-14 }
    }
}

// Dormand-Prince 5(4) tableau; the autonomous right-hand side needs no time nodes.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn dp45_step(gen: &Generator, y: &DensityMatrix, h: f64) -> (DensityMatrix, f64, f64) {
    let mut k: Vec<Vec<Complex64>> = Vec::with_capacity(7);
    for s in 0..7 {
        let mut stage = y.clone();
        for (j, kj) in k.iter().enumerate() {
            let a = A[s][j];
            if a != 0.0 {
                for (o, x) in stage.data.iter_mut().zip(kj) {
                    *o += x * (a * h);
                }
            }
        }
        k.push(gen.derivative(&stage));
    }
    let mut next = y.clone();
    let mut err_max: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 0..y.data.len() {
        let mut hi = ZERO;
        let mut lo = ZERO;
        for s in 0..7 {
            hi += k[s][i] * B5[s];
            lo += k[s][i] * B4[s];
        }
        next.data[i] += hi * h;
        err_max = err_max.max(((hi - lo) * h).norm());
        scale = scale.max(y.data[i].norm().max(next.data[i].norm()));
    }
    (next, err_max, scale)
}

/// Integrate the decay master equation from `t = 0` and return `ρ` at each
/// requested time (in units of `1/γ0`, nondecreasing, starting at or after 0).
pub fn evolve_density_matrix(
    tensor: &DecayCoefficientTensor,
    rho0: &DensityMatrix,
    times: &[f64],
    opts: &EvolveOptions,
) -> Result<Vec<DensityMatrix>> {
    if rho0.n_excited != tensor.n_excited() || rho0.n_ground != tensor.n_ground() {
        return Err(Error::DensityMatrix("density matrix and decay tensor disagree on level count".into()));
    }
    rho0.validate(1e-8)?;
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::DensityMatrix("output times must be finite, nonnegative and sorted".into()));
    }
    let gen = Generator::new(tensor);
    let mut t = 0.0;
    let mut y = rho0.clone();
    let mut h = opts.initial_step;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        while t < target {
            let step = h.min(target - t);
            if step < opts.min_step * (1.0 + t) && target - t > step {
                return Err(Error::StepUnderflow { t });
            }
            let (next, err, scale) = dp45_step(&gen, &y, step);
            let bound = opts.tol * (1.0 + scale);
            if err <= bound {
                t = if step == target - t { target } else { t + step };
                y = next;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * (bound / err).powf(0.2)).clamp(0.2, 5.0) };
            if step == h || err > bound {
                h = step * factor;
            }
            if h < opts.min_step * (1.0 + t) {
                return Err(Error::StepUnderflow { t });
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}
