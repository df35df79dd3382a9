use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::guided::guided_weight;
use super::AtomConfiguration;
use crate::atom::DipoleTable;
use crate::fiber::{Direction, GuidedModeSolution};
use crate::guided_modes::{base_profile, oriented_profile, spherical_from_cartesian};
use crate::specfun::{clebsch_gordan, HalfInteger};

/// Scalar, vector and tensor parts of a directional transition rate (units of `γ0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateDecomposition {
    pub scalar: f64,
    pub vector: f64,
    pub tensor: f64,
}

impl RateDecomposition {
    pub fn total(&self) -> f64 {
        self.scalar + self.vector + self.tensor
    }
}

fn cross(a: &[Complex64; 3], b: &[Complex64; 3]) -> [Complex64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn conj3(a: &[Complex64; 3]) -> [Complex64; 3] {
    [a[0].conj(), a[1].conj(), a[2].conj()]
}

/// `{A ⊗ B}_{2,m}` for `m = -2..=2` from Cartesian vectors, coupling the
/// spherical components with `<1 m1 1 m2 | 2 m>`.
pub fn rank2_product(a: &[Complex64; 3], b: &[Complex64; 3]) -> [Complex64; 5] {
    let sa = spherical_from_cartesian(*a);
    let sb = spherical_from_cartesian(*b);
    let one = HalfInteger::integer(1);
    let mut out = [Complex64::new(0.0, 0.0); 5];
    for (mi, o) in out.iter_mut().enumerate() {
        let m = mi as i32 - 2;
        for m1 in -1..=1i32 {
            let m2 = m - m1;
            if m2.abs() > 1 {
                continue;
            }
            let cg = clebsch_gordan(
                one,
                HalfInteger::integer(m1),
                one,
                HalfInteger::integer(m2),
                HalfInteger::integer(2),
                HalfInteger::integer(m),
            )
            .expect("valid rank-1 coupling");
            *o += sa[(m1 + 1) as usize] * sb[(m2 + 1) as usize] * cg;
        }
    }
    out
}

/// `Σ_m (-1)^m A_m B_{-m}` for two rank-2 tensors.
pub fn tensor_contraction(a: &[Complex64; 5], b: &[Complex64; 5]) -> Complex64 {
    (0..5).map(|i| a[i] * b[4 - i] * if (i as i32 - 2) % 2 == 0 { 1.0 } else { -1.0 }).sum()
}

/// Decomposition of `γ_eg^(Nf)` for excited index `e`, ground index `g` and
/// direction `f`, summed over the mode polarizations.
pub fn rate_decomposition(
    config: &AtomConfiguration,
    dipoles: &DipoleTable,
    sol: &GuidedModeSolution,
    e: usize,
    g: usize,
    direction: Direction,
) -> RateDecomposition {
    let w = guided_weight(config, sol);
    let d = dipoles.fiber_cartesian(e, g, &config.frame);
    let dc = conj3(&d);
    let d2: f64 = d.iter().map(|x| x.norm_sqr()).sum();
    let dd_cross = cross(&dc, &d);
    let dd_rank2 = rank2_product(&dc, &d);

    let base = base_profile(sol, config.pos.r());
    let mut e2 = 0.0;
    let mut ee_cross = [Complex64::new(0.0, 0.0); 3];
    let mut ee_rank2 = [Complex64::new(0.0, 0.0); 5];
    for id in sol.kind.mode_ids().into_iter().filter(|id| id.direction == direction) {
        let field = oriented_profile(&base, id).to_cartesian(config.pos.phi());
        let fc = conj3(&field);
        e2 += field.iter().map(|x| x.norm_sqr()).sum::<f64>();
        let c = cross(&fc, &field);
        let t = rank2_product(&fc, &field);
        for i in 0..3 {
            ee_cross[i] += c[i];
        }
        for i in 0..5 {
            ee_rank2[i] += t[i];
        }
    }
    let vector: Complex64 = dd_cross.iter().zip(&ee_cross).map(|(a, b)| a * b).sum();
    RateDecomposition {
        scalar: w / 3.0 * d2 * e2,
        vector: w / 2.0 * vector.re,
        tensor: w * tensor_contraction(&dd_rank2, &ee_rank2).re,
    }
}
