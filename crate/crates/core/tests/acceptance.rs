//! End-to-end acceptance checks. Each criterion prints one PASS or FAIL line;
//! the process exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;

use nanofiber_core::atom::LevelStructure;
use nanofiber_core::fiber::{
    cutoff_v, solve_beta, supported_modes, Direction, FiberGeometry, ModeFamily, ModeKind, Polarization,
};
use nanofiber_core::guided_modes::{
    base_profile, fiber_frame_spherical, interior_profile, normalization_integral, oriented_profile, CylindricalField,
};
use nanofiber_core::radiation_modes::{build_radiation_mode, radiation_profile, RadiationModeId};
use nanofiber_core::rates::{
    evolve_density_matrix, rate_decomposition, AtomConfiguration, DecayCoefficientTensor, DensityMatrix,
    EvolveOptions, RateEngine, RateReport,
};
use nanofiber_core::units::{angular_frequency, SPEED_OF_LIGHT};
use nanofiber_core::{AtomPosition, QuantizationFrame};

const LAMBDA: f64 = 780e-9;
const N1: f64 = 1.4537;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn omega() -> f64 {
    angular_frequency(LAMBDA)
}

fn fiber(radius_nm: f64) -> FiberGeometry {
    FiberGeometry::new(radius_nm * 1e-9, N1, 1.0).expect("valid fiber")
}

fn surface(radius_nm: f64, phi: f64, frame: QuantizationFrame) -> AtomConfiguration {
    AtomConfiguration::on_surface(fiber(radius_nm), phi, frame).expect("valid placement")
}

fn frame(theta: f64, phi: f64) -> QuantizationFrame {
    QuantizationFrame::new(theta, phi).expect("valid frame")
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn cutoff_radius_nm(kind: ModeKind) -> f64 {
    let v = cutoff_v(&fiber(400.0), kind);
    FiberGeometry::cutoff_radius(v, LAMBDA, N1, 1.0) * 1e9
}

fn criterion_1_cutoff_radii() -> Outcome {
    let te = cutoff_radius_nm(ModeKind::TE01);
    let tm = cutoff_radius_nm(ModeKind::TM01);
    let he21 = cutoff_radius_nm(ModeKind::HE21);
    // The solver itself must agree: no root just below, a root just above.
    let brackets = [(ModeKind::TE01, te), (ModeKind::TM01, tm), (ModeKind::HE21, he21)]
        .iter()
        .all(|&(kind, a)| {
            solve_beta(&fiber(a - 0.05), omega(), kind).is_err() && solve_beta(&fiber(a + 0.05), omega(), kind).is_ok()
        });
    check(
        (te - 283.0).abs() <= 1.0 && (tm - 283.0).abs() <= 1.0 && (he21 - 325.0).abs() <= 3.0 && brackets,
        format!("TE01 {te:.3} nm, TM01 {tm:.3} nm, HE21 {he21:.3} nm, solver brackets consistent: {brackets}"),
    )
}

fn criterion_2_supported_modes() -> Outcome {
    let modes = supported_modes(&fiber(400.0), omega());
    let names: Vec<String> = modes.iter().map(ToString::to_string).collect();
    let mut sorted = names.clone();
    sorted.sort();
    check(sorted == ["HE11", "HE21", "TE01", "TM01"], format!("a = 400 nm supports {names:?}"))
}

fn criterion_3_fractional_rate(engine: &RateEngine) -> Outcome {
    let report = engine.report(&surface(400.0, 0.0, QuantizationFrame::fiber_axis())).map_err(|e| e.to_string())?;
    let etas: Vec<(i32, f64)> = report
        .hyperfine(3)
        .iter()
        .map(|s| (s.level.m.value() as i32, s.eta().expect("full report")))
        .collect();
    let in_band = etas.iter().all(|&(_, e)| (0.15..=0.23).contains(&e));
    let max = etas.iter().map(|p| p.1).fold(f64::MIN, f64::max);
    let top = etas.iter().filter(|p| p.0.abs() == 3).all(|p| (p.1 - max).abs() < 1e-12);
    let listing: Vec<String> = etas.iter().map(|(m, e)| format!("{m:+}:{e:.4}")).collect();
    check(in_band && top, format!("eta by M' = [{}], maximum at |M'| = 3: {top}", listing.join(" ")))
}

fn criterion_4_mode_ratio(engine: &RateEngine) -> Outcome {
    let report =
        engine.guided_report(&surface(400.0, 0.0, QuantizationFrame::fiber_axis())).map_err(|e| e.to_string())?;
    let mut ratios = Vec::new();
    for m in [-3, 3] {
        let s = report.sublevel(3, m).expect("sublevel exists");
        let he11 = s.mode(ModeKind::HE11).expect("HE11 guided").total();
        let he21 = s.mode(ModeKind::HE21).expect("HE21 guided").total();
        ratios.push(he21 / he11);
    }
    check(
        ratios.iter().all(|r| (r - 3.0).abs() <= 0.5),
        format!("HE21/HE11 rate ratio at r = a for M' = -3, +3: {:.4}, {:.4} (required 3 +/- 0.5)", ratios[0], ratios[1]),
    )
}

fn criterion_5_unidirectional(engine: &RateEngine) -> Outcome {
    let geom = fiber(400.0);
    let sol = engine.cache().get_or_solve(&geom, omega(), ModeKind::TM01).map_err(|e| e.to_string())?;
    let field = base_profile(&sol, geom.radius());
    let phi0 = (field.e_z.norm() / field.e_r.norm()).asin();
    let cfg = surface(400.0, 0.0, QuantizationFrame::fiber_axis());
    let channels = engine.guided(&cfg).map_err(|e| e.to_string())?;
    let mut zetas = Vec::new();
    for phi_q in [phi0, PI - phi0, PI + phi0, 2.0 * PI - phi0] {
        let c = AtomConfiguration { frame: frame(PI / 2.0, phi_q), ..cfg };
        let report = RateReport::from_channels(&c, engine.dipoles(), &channels, None);
        zetas.push(report.sublevel(3, 3).unwrap().zeta_mode(ModeKind::TM01).unwrap());
    }
    let mid = AtomConfiguration { frame: frame(PI / 2.0, 0.5 * phi0), ..cfg };
    let off = RateReport::from_channels(&mid, engine.dipoles(), &channels, None)
        .sublevel(3, 3)
        .unwrap()
        .zeta_mode(ModeKind::TM01)
        .unwrap();
    let angle_ok = (phi0 / PI - 0.108).abs() <= 0.002;
    let unity = zetas.iter().all(|z| (z.abs() - 1.0).abs() <= 1e-6);
    check(
        angle_ok && unity && off.abs() < 1.0 - 1e-3,
        format!(
            "phi0 = {:.5} pi; TM01 zeta at the four crossings = {:?}; at phi0/2 = {off:.4}",
            phi0 / PI,
            zetas.iter().map(|z| format!("{z:+.9}")).collect::<Vec<_>>()
        ),
    )
}

fn criterion_6_te_symmetry(engine: &RateEngine) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for radius in [300.0, 400.0, 500.0] {
        for atom_phi in [0.0, 0.7, 2.5] {
            let cfg = surface(radius, atom_phi, QuantizationFrame::fiber_axis());
            let channels = engine.guided(&cfg).map_err(|e| e.to_string())?;
            for theta in [0.0, 0.3, PI / 2.0, 2.2, PI] {
                for phi_q in [0.0, 0.4, 1.9, 4.0] {
                    let c = AtomConfiguration { frame: frame(theta, phi_q), ..cfg };
                    let report = RateReport::from_channels(&c, engine.dipoles(), &channels, None);
                    for s in &report.sublevels {
                        worst = worst.max(s.zeta_mode(ModeKind::TE01).expect("TE01 guided").abs());
                        cases += 1;
                    }
                }
            }
        }
    }
    check(worst <= 1e-12, format!("max |zeta(TE01)| = {worst:.2e} over {cases} sublevel/frame/position cases"))
}

fn criterion_7_free_space(engine: &RateEngine) -> Outcome {
    let homogeneous = FiberGeometry::new(400e-9, 1.0, 1.0).unwrap();
    let mut worst_free: f64 = 0.0;
    for (r, frame_q) in [(400e-9, frame(0.0, 0.0)), (650e-9, frame(1.1, 2.3)), (250e-9, frame(PI / 2.0, 0.0))] {
        let cfg = AtomConfiguration::new(homogeneous, AtomPosition::new(r, 0.4, 0.0).unwrap(), frame_q);
        let report = engine.report(&cfg).map_err(|e| e.to_string())?;
        for s in &report.sublevels {
            worst_free = worst_free.max((s.radiation.unwrap() - 1.0).abs());
            worst_free = worst_free.max(s.guided);
        }
    }
    let far = AtomConfiguration::new(
        fiber(400.0),
        AtomPosition::new(4000e-9, 0.0, 0.0).unwrap(),
        QuantizationFrame::fiber_axis(),
    );
    let report = engine.report(&far).map_err(|e| e.to_string())?;
    let worst_far = report.sublevels.iter().map(|s| (s.total().unwrap() - 1.0).abs()).fold(0.0, f64::max);
    check(
        worst_free <= 1e-4 && worst_far <= 0.05,
        format!("homogeneous limit max |gamma_r - 1| = {worst_free:.2e}; r = 10a max |gamma - 1| = {worst_far:.4}"),
    )
}

fn close(a: &CylindricalField, b: &CylindricalField, tol: f64) -> bool {
    a.max_abs_diff(b) <= tol * (a.norm_sqr().sqrt() + b.norm_sqr().sqrt() + 1e-300)
}

fn sign_pow(n: i32) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Guided-mode pointwise relations: normalization, direction and
/// polarization flips, reality structure and time reversal.
fn guided_mode_relations() -> Result<usize, String> {
    let mut checks = 0;
    for radius in [200.0, 400.0, 550.0] {
        let geom = fiber(radius);
        for kind in supported_modes(&geom, omega()) {
            let sol = solve_beta(&geom, omega(), kind).map_err(|e| e.to_string())?;
            let sol = nanofiber_core::guided_modes::normalize(&sol).map_err(|e| e.to_string())?;
            let norm = normalization_integral(&sol).map_err(|e| e.to_string())?;
            if (norm - 1.0).abs() > 1e-8 {
                return Err(format!("{kind} at a = {radius} nm normalization {norm}"));
            }
            for r in [0.3, 0.999, 1.0, 1.6] {
                let r = r * geom.radius();
                let base = if r < geom.radius() { interior_profile(&sol, r) } else { base_profile(&sol, r) };
                let ids = kind.mode_ids();
                for id in &ids {
                    let e = oriented_profile(&base, *id);
                    let scale = e.norm_sqr().sqrt().max(1e-300);
                    // Reality: e_r imaginary, e_phi real (imaginary for TE), e_z real.
                    let te = kind.family() == ModeFamily::TE;
                    let bad = e.e_r.re.abs() > 1e-12 * scale
                        || if te { e.e_phi.re.abs() } else { e.e_phi.im.abs() } > 1e-12 * scale
                        || e.e_z.im.abs() > 1e-12 * scale;
                    if bad {
                        return Err(format!("{kind} reality structure at r = {r:e}"));
                    }
                    let flip_f = oriented_profile(&base, nanofiber_core::guided_modes::reversed_direction(*id));
                    let flip_fp = oriented_profile(
                        &base,
                        nanofiber_core::fiber::ModeId {
                            direction: id.direction.reversed(),
                            polarization: id.polarization.reversed(),
                            ..*id
                        },
                    );
                    // Direction flip: transverse parts unchanged, e_z reversed.
                    let expect_f = CylindricalField::new(e.e_r, e.e_phi, -e.e_z);
                    // Time reversal: e(f, p) = -conj(e(-f, -p)).
                    let expect_t = -flip_fp.conj();
                    if !close(&flip_f, &expect_f, 1e-14) || !close(&e, &expect_t, 1e-14) {
                        return Err(format!("{kind} flip relations at r = {r:e}"));
                    }
                    if kind.family().is_hybrid() {
                        let flip_p = oriented_profile(
                            &base,
                            nanofiber_core::fiber::ModeId { polarization: id.polarization.reversed(), ..*id },
                        );
                        if !close(&flip_p, &CylindricalField::new(e.e_r, -e.e_phi, e.e_z), 1e-14) {
                            return Err(format!("{kind} polarization flip at r = {r:e}"));
                        }
                    }
                    // Fiber-frame spherical components: e_q(f) = (-1)^(1+q) e_q(-f).
                    for phi in [0.0, 1.3, 4.0] {
                        let a = fiber_frame_spherical(&e, phi);
                        let b = fiber_frame_spherical(&flip_f, phi);
                        for (i, q) in (-1..=1).enumerate() {
                            if (a[i] - b[i] * sign_pow(1 + q)).norm() > 1e-13 * scale {
                                return Err(format!("{kind} spherical direction relation"));
                            }
                        }
                    }
                    checks += 1;
                }
            }
        }
    }
    Ok(checks)
}

/// Radiation-mode pointwise relations, including the flips of `β`, `l`, `p`
/// and the spherical-component identities.
fn radiation_mode_relations() -> Result<usize, String> {
    let geom = fiber(400.0);
    let k = omega() / SPEED_OF_LIGHT;
    let build = |b: f64, l: i32, p: Polarization| {
        build_radiation_mode(&geom, RadiationModeId::new(omega(), b * k, l, p).unwrap()).map_err(|e| e.to_string())
    };
    let mut checks = 0;
    for beta in [-0.8, 0.1, 0.6] {
        for l in -3..=3 {
            for p in [Polarization::Plus, Polarization::Minus] {
                let m = build(beta, l, p)?;
                let m_bp = build(-beta, l, p.reversed())?;
                let m_lp = build(beta, -l, p.reversed())?;
                let m_bl = build(-beta, -l, p)?;
                for r in [0.4, 1.0, 2.5] {
                    let r = r * geom.radius();
                    let e = radiation_profile(&m, r);
                    let s = sign_pow(l);
                    let scale = e.norm_sqr().sqrt();
                    let bp = radiation_profile(&m_bp, r);
                    let lp = radiation_profile(&m_lp, r);
                    let bl = radiation_profile(&m_bl, r);
                    let ok = close(&e, &CylindricalField::new(-bp.e_r, -bp.e_phi, bp.e_z), 1e-9)
                        && close(&e, &CylindricalField::new(lp.e_r * s, -lp.e_phi * s, lp.e_z * s), 1e-9)
                        && close(&e, &(bl.conj() * s), 1e-9)
                        && e.e_r.re.abs() <= 1e-12 * scale
                        && e.e_phi.im.abs() <= 1e-12 * scale
                        && e.e_z.im.abs() <= 1e-12 * scale;
                    if !ok {
                        return Err(format!("radiation flips at beta = {beta} k, l = {l}, r = {r:e}"));
                    }
                    for phi in [0.0, 0.9, 3.7] {
                        let eq = fiber_frame_spherical(&e, phi);
                        let eq_bp = fiber_frame_spherical(&bp, phi);
                        let eq_lp = fiber_frame_spherical(&lp, phi);
                        for (i, q) in (-1..=1).enumerate() {
                            let rot = Complex64::from_polar(1.0, 2.0 * q as f64 * phi);
                            let tol = 1e-9 * scale;
                            if (eq[i] - eq_bp[i] * sign_pow(q)).norm() > tol
                                || (eq[i] - rot * eq_lp[2 - i] * sign_pow(l + q)).norm() > tol
                                || (eq[i] - rot * eq[i].conj() * sign_pow(q)).norm() > tol
                            {
                                return Err(format!("radiation spherical relations at l = {l}"));
                            }
                        }
                    }
                    checks += 1;
                }
            }
        }
    }
    Ok(checks)
}

/// Rate symmetries: M' reflection, direction/M' exchange, meridional-plane
/// direction independence, fiber-axis quantization and frame independence
/// for `|M'| = 2`.
fn rate_symmetries(engine: &RateEngine) -> Result<usize, String> {
    let mut checks = 0;
    let configs = [(400.0, 0.0), (350.0, 1.1), (520.0, 4.0)];
    for &(radius, atom_phi) in &configs {
        let cfg = surface(radius, atom_phi, QuantizationFrame::fiber_axis());
        let channels = engine.guided(&cfg).map_err(|e| e.to_string())?;
        let radiation = engine.radiation(&cfg).map_err(|e| e.to_string())?.correlation;
        let report_for = |theta: f64, phi_q: f64| {
            let c = AtomConfiguration { frame: frame(theta, phi_q), ..cfg };
            RateReport::from_channels(&c, engine.dipoles(), &channels, Some(&radiation))
        };
        let mut eta_two: Vec<f64> = Vec::new();
        for theta in [0.0, 0.4, PI / 2.0, 2.6] {
            for phi_q in [0.0, 0.8, 2.0, 3.5, 5.5] {
                let report = report_for(theta, phi_q);
                for s in &report.sublevels {
                    let m = s.level.m.value() as i32;
                    let f = s.level.f.value() as i32;
                    let mirror = report.sublevel(f, -m).unwrap();
                    let tol = 1e-10 * (s.total().unwrap() + 1.0);
                    if (s.guided - mirror.guided).abs() > tol
                        || (s.radiation.unwrap() - mirror.radiation.unwrap()).abs() > tol
                    {
                        return Err(format!("M' reflection at F'={f}, M'={m}"));
                    }
                    for (a, b) in s.modes.iter().zip(&mirror.modes) {
                        if (a.total() - b.total()).abs() > tol || (a.forward - b.backward).abs() > tol {
                            return Err(format!("{} direction exchange at F'={f}, M'={m}", a.kind));
                        }
                    }
                    if f == 3 && m.abs() == 2 {
                        eta_two.push(s.eta().unwrap());
                    }
                    checks += 1;
                }
            }
        }
        let spread = eta_two.iter().fold(f64::MIN, |a, &b| a.max(b)) - eta_two.iter().fold(f64::MAX, |a, &b| a.min(b));
        if spread > 1e-8 {
            return Err(format!("|M'| = 2 eta varies by {spread:e} across frames"));
        }
        // Meridional plane: axis in the plane through the fiber axis and the atom.
        for theta in [0.0, 0.5, 1.2, PI / 2.0, 2.9] {
            for phi_q in [atom_phi, atom_phi + PI] {
                let report = report_for(theta, phi_q.rem_euclid(2.0 * PI));
                for s in &report.sublevels {
                    for m in &s.modes {
                        if (m.forward - m.backward).abs() > 1e-12 * (m.total() + 1e-30) {
                            return Err(format!("meridional direction dependence in {}", m.kind));
                        }
                    }
                }
            }
        }
    }
    // Quantization along the fiber axis: no dependence on the atom azimuth.
    let reference = engine
        .guided_report(&surface(400.0, 0.0, QuantizationFrame::fiber_axis()))
        .map_err(|e| e.to_string())?;
    for atom_phi in [0.5, 2.0, 3.3, 6.0] {
        let report = engine
            .guided_report(&surface(400.0, atom_phi, QuantizationFrame::fiber_axis()))
            .map_err(|e| e.to_string())?;
        for (a, b) in report.sublevels.iter().zip(&reference.sublevels) {
            if (a.guided - b.guided).abs() > 1e-12 || (a.guided_forward - a.guided_backward).abs() > 1e-12 {
                return Err(format!("fiber-axis quantization depends on atom azimuth {atom_phi}"));
            }
            checks += 1;
        }
    }
    Ok(checks)
}

fn decomposition_rules(engine: &RateEngine) -> Result<usize, String> {
    let mut checks = 0;
    let structure = LevelStructure::rb87_d2();
    for (theta, phi_q, atom_phi) in [(0.0, 0.0, 0.0), (PI / 2.0, 0.4, 0.0), (1.1, 2.2, 0.8)] {
        let cfg = surface(400.0, atom_phi, frame(theta, phi_q));
        for kind in supported_modes(&cfg.geom, omega()) {
            let sol = engine.cache().get_or_solve(&cfg.geom, omega(), kind).map_err(|e| e.to_string())?;
            let channels = engine.guided(&cfg).map_err(|e| e.to_string())?;
            for e in 0..structure.excited().len() {
                for g in 0..structure.ground().len() {
                    let d = engine.dipoles().fiber_cartesian(e, g, &cfg.frame);
                    let fwd = rate_decomposition(&cfg, engine.dipoles(), &sol, e, g, Direction::Forward);
                    let bwd = rate_decomposition(&cfg, engine.dipoles(), &sol, e, g, Direction::Backward);
                    for (dec, dir) in [(fwd, Direction::Forward), (bwd, Direction::Backward)] {
                        let full = channels
                            .iter()
                            .find(|c| c.kind == kind && c.direction == dir)
                            .unwrap()
                            .correlation
                            .rate(&d);
                        if (dec.total() - full).abs() > 1e-10 * full.abs().max(1e-30) && full > 1e-300 {
                            return Err(format!("sum rule {kind} e={e} g={g}: {} vs {full}", dec.total()));
                        }
                    }
                    let scale = fwd.total().abs().max(1e-300);
                    if (fwd.scalar - bwd.scalar).abs() > 1e-12 * scale
                        || (fwd.tensor - bwd.tensor).abs() > 1e-12 * scale
                        || (fwd.vector + bwd.vector).abs() > 1e-12 * scale
                    {
                        return Err(format!("direction parity of the decomposition, {kind} e={e} g={g}"));
                    }
                    if structure.excited()[e].m == structure.ground()[g].m && fwd.vector.abs() > 1e-14 * scale {
                        return Err("pi transition carries a vector part".into());
                    }
                    checks += 1;
                }
            }
        }
    }
    Ok(checks)
}

/// `exp(-Γ t / 2)` of the excited block by scaling and squaring.
fn excited_propagator(tensor: &DecayCoefficientTensor, t: f64) -> Vec<Complex64> {
    let n = tensor.n_excited();
    let mut a = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = -tensor.gamma_excited(i, j) * (t / 2.0);
        }
    }
    let norm: f64 = a.iter().map(|x| x.norm()).sum();
    let squarings = (norm.max(1.0).log2().ceil() as i32 + 4).max(0);
    let scale = 0.5f64.powi(squarings);
    for x in a.iter_mut() {
        *x *= scale;
    }
    let mul = |x: &[Complex64], y: &[Complex64]| {
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let xik = x[i * n + k];
                for j in 0..n {
                    out[i * n + j] += xik * y[k * n + j];
                }
            }
        }
        out
    };
    let mut result = vec![Complex64::new(0.0, 0.0); n * n];
    let mut term = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        result[i * n + i] = 1.0.into();
        term[i * n + i] = 1.0.into();
    }
    for k in 1..30 {
        term = mul(&term, &a).into_iter().map(|x| x / k as f64).collect();
        for (r, t) in result.iter_mut().zip(&term) {
            *r += t;
        }
    }
    for _ in 0..squarings {
        result = mul(&result, &result);
    }
    result
}

fn density_checks(engine: &RateEngine) -> Result<usize, String> {
    let structure = LevelStructure::rb87_d2();
    let (ne, ng) = (structure.excited().len(), structure.ground().len());
    let top = structure.index_of(&structure.excited_level(3, 3).unwrap()).unwrap();
    let opts = EvolveOptions::default();
    let mut checks = 0;

    // On the fiber axis with the quantization axis along it, |F'=3, M'=3> has no
    // partner sublevel, so its population decays as a pure exponential.
    let axis = AtomConfiguration::new(fiber(400.0), AtomPosition::new(0.0, 0.0, 0.0).unwrap(), QuantizationFrame::fiber_axis());
    let tensor = engine.decay_tensor(&axis).map_err(|e| e.to_string())?;
    let report = engine.report(&axis).map_err(|e| e.to_string())?;
    let gamma = report.sublevel(3, 3).unwrap().total().unwrap();
    let rho0 = DensityMatrix::excited_state(ne, ng, top);
    let times = [0.25 / gamma, 1.0 / gamma, 2.0 / gamma];
    let out = evolve_density_matrix(&tensor, &rho0, &times, &opts).map_err(|e| e.to_string())?;
    for (t, rho) in times.iter().zip(&out) {
        let expect = (-gamma * t).exp();
        if (rho.population(top) - expect).abs() > 1e-6 * expect {
            return Err(format!("axis exponential: {} vs {expect}", rho.population(top)));
        }
        checks += 1;
    }

    // Surface atom, tilted axis: the excited block follows U rho U+ with U = exp(-Γt/2).
    let cfg = surface(400.0, 0.3, frame(1.0, 0.6));
    let tensor = engine.decay_tensor(&cfg).map_err(|e| e.to_string())?;
    if tensor.hermiticity_defect() > 1e-12 {
        return Err("decay tensor is not Hermitian".into());
    }
    for e in 0..ne {
        for g in 0..ng {
            if tensor.gamma(e, e, g, g).re < -1e-14 {
                return Err("negative diagonal decay coefficient".into());
            }
        }
    }
    let mut psi = vec![Complex64::new(0.0, 0.0); ne + ng];
    psi[top] = Complex64::new(0.8, 0.0);
    psi[structure.index_of(&structure.excited_level(2, 1).unwrap()).unwrap()] = Complex64::new(0.0, 0.5);
    psi[ne + 3] = Complex64::new(0.33, 0.1);
    let rho0 = DensityMatrix::pure(ne, ng, &psi).map_err(|e| e.to_string())?;
    let times = [0.0, 0.3, 1.0, 2.5, 6.0];
    let out = evolve_density_matrix(&tensor, &rho0, &times, &opts).map_err(|e| e.to_string())?;
    for (t, rho) in times.iter().zip(&out) {
        if (rho.trace() - 1.0).norm() > 1e-8 {
            return Err(format!("trace drift {} at t = {t}", rho.trace()));
        }
        if rho.validate(1e-8).is_err() {
            return Err(format!("unphysical density matrix at t = {t}"));
        }
        let u = excited_propagator(&tensor, *t);
        for i in 0..ne {
            let mut pop = Complex64::new(0.0, 0.0);
            for a in 0..ne {
                for b in 0..ne {
                    pop += u[i * ne + a] * rho0[(a, b)] * u[i * ne + b].conj();
                }
            }
            if (rho.population(i) - pop.re).abs() > 1e-6 * pop.re.abs().max(1e-3) {
                return Err(format!("excited population {i} at t = {t}: {} vs {}", rho.population(i), pop.re));
            }
        }
        checks += 1;
    }

    // Ground-state population does not move.
    let rho0 = DensityMatrix::ground_state(ne, ng, 2);
    let out = evolve_density_matrix(&tensor, &rho0, &[5.0], &opts).map_err(|e| e.to_string())?;
    if (out[0].population(ne + 2) - 1.0).abs() > 1e-14 {
        return Err("ground population changed".into());
    }
    Ok(checks + 1)
}

fn criterion_8_property_suite(engine: &RateEngine) -> Outcome {
    let mut parts = Vec::new();
    let mut failures = Vec::new();
    for (name, result) in [
        ("guided-mode relations", guided_mode_relations()),
        ("radiation-mode relations", radiation_mode_relations()),
        ("rate symmetries", rate_symmetries(engine)),
        ("decomposition", decomposition_rules(engine)),
        ("density matrix", density_checks(engine)),
    ] {
        match result {
            Ok(n) => parts.push(format!("{name}: {n} ok")),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    if failures.is_empty() {
        Ok(parts.join("; "))
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_9_cutoff_compensation() -> Outcome {
    let engine = RateEngine::coarse();
    let mut lines = Vec::new();
    let mut ok = true;
    for kind in [ModeKind::TE01, ModeKind::HE21] {
        let ac = cutoff_radius_nm(kind);
        let below = engine.report(&surface(ac - 2.0, 0.0, QuantizationFrame::fiber_axis())).map_err(|e| e.to_string())?;
        let above = engine.report(&surface(ac + 2.0, 0.0, QuantizationFrame::fiber_axis())).map_err(|e| e.to_string())?;
        let mut worst_total: f64 = 0.0;
        let mut smallest_jump = f64::MAX;
        for (lo, hi) in below.sublevels.iter().zip(&above.sublevels) {
            let dg = hi.guided - lo.guided;
            let dr = hi.radiation.unwrap() - lo.radiation.unwrap();
            let dt = hi.total().unwrap() - lo.total().unwrap();
            let rel = dt.abs() / lo.total().unwrap();
            worst_total = worst_total.max(rel);
            smallest_jump = smallest_jump.min(dg.abs().min(dr.abs()) / dt.abs().max(1e-300));
            ok &= rel < 0.02 && dg * dr < 0.0 && dg.abs() > dt.abs() && dr.abs() > dt.abs();
        }
        lines.push(format!(
            "{kind} cutoff {ac:.2} nm: max relative change of gamma {worst_total:.2e}, smallest |jump|/|change| {smallest_jump:.1}"
        ));
    }
    check(ok, lines.join("; "))
}

fn main() {
    let engine = RateEngine::default();
    let criteria: Vec<Criterion> = vec![
        ("1 cutoff radii", Box::new(criterion_1_cutoff_radii)),
        ("2 supported modes at a = 400 nm", Box::new(criterion_2_supported_modes)),
        ("3 guided fraction at the surface", Box::new(|| criterion_3_fractional_rate(&engine))),
        ("4 HE21 to HE11 ratio", Box::new(|| criterion_4_mode_ratio(&engine))),
        ("5 unidirectional TM01 emission", Box::new(|| criterion_5_unidirectional(&engine))),
        ("6 TE01 direction symmetry", Box::new(|| criterion_6_te_symmetry(&engine))),
        ("7 free-space recovery", Box::new(|| criterion_7_free_space(&engine))),
        ("8 property suite", Box::new(|| criterion_8_property_suite(&engine))),
        ("9 cutoff compensation", Box::new(criterion_9_cutoff_compensation)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({secs:.1} s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.1} s): {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
