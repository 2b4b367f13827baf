//! One line per acceptance criterion; the test fails if any criterion does.
//!
//! Run with `cargo test -p swkb-core --test acceptance -- --nocapture` to
//! see the report.

use std::f64::consts::PI;
use std::time::Instant;

use swkb_core::oracle::{isospectrality_check, numerical_energies, solve_spectrum, OracleConfig};
use swkb_core::shape_invariance::{classify, residual_pde1, residual_pde2, residual_sic, standard_grid};
use swkb_core::spectrum::SpectrumModel;
use swkb_core::swkb::{
    d_i_d_hbar, swkb_integral, swkb_integral_at_energy, DerivativeMode, QuadratureConfig, QuadratureMethod,
};
use swkb_core::{catalog, catalog_entry, PartnerSign, SuperpotentialSpec};

struct Outcome {
    failures: Vec<String>,
}

impl Outcome {
    fn record(&mut self, criterion: &str, result: Result<String, String>) {
        match result {
            Ok(detail) => println!("[PASS] {criterion}: {detail}"),
            Err(detail) => {
                println!("[FAIL] {criterion}: {detail}");
                self.failures.push(criterion.to_string());
            }
        }
    }
}

fn conventional() -> Vec<SuperpotentialSpec> {
    catalog().into_iter().filter(|s| s.si_class.is_conventional()).collect()
}

/// Levels 1..=min(cap, highest bound level).
fn levels(spec: &SuperpotentialSpec, cap: usize) -> std::ops::RangeInclusive<usize> {
    let model = SpectrumModel::from_spec(spec).unwrap();
    1..=model.bound_limit.unwrap_or(cap).min(cap)
}

fn exactness() -> Result<String, String> {
    let start = Instant::now();
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for s in conventional() {
        for n in levels(&s, 10) {
            let r = swkb_integral(&s, n, &cfg).map_err(|e| format!("{} n={n}: {e}", s.name))?;
            let target = n as f64 * PI * s.hbar;
            let scaled = r.residual.abs() / target.max(s.hbar);
            if !r.converged || scaled > 1e-8 {
                return Err(format!("{} n={n}: residual {:e}, converged {}", s.name, r.residual, r.converged));
            }
            worst = worst.max(scaled);
            runs += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 10.0 {
        return Err(format!("took {elapsed:.2} s"));
    }
    Ok(format!("{runs} runs, max |I - n*pi*hbar| / max(n*pi*hbar, hbar) = {worst:.2e}, {elapsed:.2} s"))
}

fn zero_level() -> Result<String, String> {
    let cfg = QuadratureConfig::default();
    for s in conventional() {
        let r = swkb_integral(&s, 0, &cfg).map_err(|e| format!("{}: {e}", s.name))?;
        if r.integral != 0.0 || r.residual != 0.0 || r.turning.x1 != r.turning.x2 || r.refinements_used != 0 {
            return Err(format!("{}: I = {:e}, x1 = {}, x2 = {}", s.name, r.integral, r.turning.x1, r.turning.x2));
        }
    }
    Ok("I(a, 0, hbar) = 0 exactly with coincident turning points for all 6 entries".into())
}

fn derivative_identity() -> Result<String, String> {
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    for s in conventional() {
        for n in levels(&s, 5) {
            let target = n as f64 * PI;
            let fd = d_i_d_hbar(&s, n, &cfg, DerivativeMode::FiniteDifference).map_err(|e| e.to_string())?;
            let red = d_i_d_hbar(&s, n, &cfg, DerivativeMode::ReducedIntegral).map_err(|e| e.to_string())?;
            let gap = (fd - target).abs().max((red - target).abs()).max((fd - red).abs());
            if gap > 1e-4 {
                return Err(format!("{} n={n}: finite difference {fd}, reduced {red}, n*pi {target}", s.name));
            }
            worst = worst.max(gap);
        }
    }
    Ok(format!("max deviation from n*pi or between modes = {worst:.2e}"))
}

fn hbar_linearity() -> Result<String, String> {
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    for name in ["harmonic", "coulomb"] {
        let base = catalog_entry(name).unwrap();
        for n in 1..=5 {
            let ratios: Vec<f64> = [0.5, 1.0, 2.0]
                .iter()
                .map(|&h| {
                    let s = base.with_hbar(h).unwrap();
                    swkb_integral(&s, n, &cfg).map(|r| r.integral / h)
                })
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let hi = ratios.iter().cloned().fold(f64::MIN, f64::max);
            let lo = ratios.iter().cloned().fold(f64::MAX, f64::min);
            let spread = (hi - lo) / hi.abs().max(1.0);
            if spread > 1e-8 {
                return Err(format!("{name} n={n}: I/hbar = {ratios:?}"));
            }
            worst = worst.max(spread);
        }
    }
    Ok(format!("harmonic and coulomb, n = 1..5, max relative spread of I/hbar = {worst:.2e}"))
}

fn shape_invariance() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for s in conventional() {
        let grid = standard_grid(&s).map_err(|e| e.to_string())?;
        for (which, report) in [
            ("shape invariance", residual_sic(&s, &grid)),
            ("first PDE", residual_pde1(&s, &grid)),
            ("second PDE", residual_pde2(&s, &grid)),
        ] {
            let r = report.map_err(|e| format!("{} {which}: {e}", s.name))?;
            if r.max_abs_residual > 1e-8 || r.sample_count != 200 {
                return Err(format!("{} {which}: max residual {:e} over {} points", s.name, r.max_abs_residual, r.sample_count));
            }
            worst = worst.max(r.max_abs_residual);
        }
        let c = classify(&s);
        if c.class != s.si_class {
            return Err(format!("{}: classified as {}, declared {}", s.name, c.class, s.si_class));
        }
        for (k, v) in s.constants.entries() {
            match c.constants.get(k) {
                Some(found) if (found - v).abs() <= 1e-8 => {}
                other => return Err(format!("{}: constant {k} = {v}, recovered {other:?}", s.name)),
            }
        }
    }
    Ok(format!("6 entries x 200 points, max residual {worst:.2e}; classes and constants recovered"))
}

fn closed_forms() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for s in conventional() {
        let m = SpectrumModel::from_spec(&s).unwrap();
        for n in 0..=m.bound_limit.unwrap_or(10).min(10) {
            let by_g = m.energy(n).map_err(|e| e.to_string())?;
            let closed = m.closed_form_energy(n).map_err(|e| e.to_string())?;
            let rel = (by_g - closed).abs() / closed.abs().max(f64::MIN_POSITIVE);
            let rel = if by_g == closed { 0.0 } else { rel };
            if rel > 1e-12 {
                return Err(format!("{} n={n}: {by_g} vs {closed}", s.name));
            }
            worst = worst.max(rel);
        }
    }
    let morse = SpectrumModel::from_spec(&catalog_entry("morse").unwrap()).unwrap().energy(1).unwrap();
    let scarf = SpectrumModel::from_spec(&catalog_entry("scarf_I").unwrap()).unwrap().energy(2).unwrap();
    if morse != 5.0 || scarf != 8.0 {
        return Err(format!("morse E1 = {morse}, scarf_I E2 = {scarf}"));
    }
    Ok(format!("max relative difference {worst:.2e}; morse E1 = 5, scarf_I E2 = 8"))
}

fn oracle_agreement() -> Result<String, String> {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (name, count, tol) in [
        ("harmonic", 4, 1e-5),
        ("coulomb", 4, 1e-5),
        ("radial_oscillator", 4, 1e-5),
        ("scarf_I", 4, 1e-5),
        ("morse", 3, 1e-4),
        ("eckart_like", 4, 1e-4),
    ] {
        let s = catalog_entry(name).unwrap();
        let r = solve_spectrum(&s, PartnerSign::Minus, &OracleConfig::for_spec(&s, count))
            .map_err(|e| format!("{name}: {e}"))?;
        let dev = r.max_rel_deviation.unwrap();
        let e0 = r.eigenvalues[0].abs();
        if dev > tol || e0 > 1e-6 {
            return Err(format!("{name}: max_rel_deviation {dev:e} (tolerance {tol:e}), |E0| = {e0:e}"));
        }
        parts.push(format!("{name} {dev:.1e}"));
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 60.0 {
        return Err(format!("took {elapsed:.1} s"));
    }
    Ok(format!("{}; {elapsed:.1} s", parts.join(", ")))
}

fn isospectrality() -> Result<String, String> {
    let mut parts = Vec::new();
    for name in ["harmonic", "scarf_I"] {
        let s = catalog_entry(name).unwrap();
        let gap = isospectrality_check(&s, &OracleConfig::for_spec(&s, 3)).map_err(|e| format!("{name}: {e}"))?;
        if gap > 1e-5 {
            return Err(format!("{name}: partner gap {gap:e}"));
        }
        parts.push(format!("{name} {gap:.1e}"));
    }
    Ok(format!("max |E-(n+1) - E+(n)| relative, n = 0..2: {}", parts.join(", ")))
}

/// SWKB residuals of the perturbed oscillator at its eigensolver levels.
fn control_residuals(amplitude: f64) -> Result<Vec<f64>, String> {
    let s = catalog_entry("perturbed_harmonic")
        .unwrap()
        .with_overrides([("amplitude", amplitude)])
        .map_err(|e| e.to_string())?;
    let energies = numerical_energies(&s, 6).map_err(|e| e.to_string())?;
    (1..=5)
        .map(|n| {
            swkb_integral_at_energy(&s, n, energies[n], &QuadratureConfig::default())
                .map(|r| r.residual / (n as f64 * PI * s.hbar))
                .map_err(|e| e.to_string())
        })
        .collect()
}

fn negative_control() -> Result<String, String> {
    let perturbed = control_residuals(0.1)?;
    let broken = perturbed.iter().cloned().fold(0.0f64, |m, r| m.max(r.abs()));
    // residual / (n*pi*hbar) > 1e-3 / (n*pi) is what |residual| > 1e-3 means
    let s = catalog_entry("perturbed_harmonic").unwrap();
    let any_large = perturbed
        .iter()
        .enumerate()
        .any(|(i, r)| (r * (i + 1) as f64 * PI * s.hbar).abs() > 1e-3);
    let restored = control_residuals(0.0)?;
    let clean = restored.iter().cloned().fold(0.0f64, |m, r| m.max(r.abs()));
    if !any_large {
        return Err(format!("amplitude 0.1 residuals too small: {perturbed:?}"));
    }
    if clean > 1e-8 {
        return Err(format!("amplitude 0 residuals not restored: {restored:?}"));
    }
    Ok(format!(
        "amplitude 0.1: max |residual|/(n*pi*hbar) = {broken:.2e}; amplitude 0: {clean:.2e}"
    ))
}

fn method_cross_check() -> Result<String, String> {
    let sine = QuadratureConfig::default();
    let tanh = QuadratureConfig::with_method(QuadratureMethod::TanhSinh);
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for s in conventional() {
        for n in 0..=*levels(&s, 10).end() {
            let a = swkb_integral(&s, n, &sine).map_err(|e| e.to_string())?.integral;
            let b = swkb_integral(&s, n, &tanh).map_err(|e| e.to_string())?.integral;
            let rel = if a == b { 0.0 } else { (a - b).abs() / a.abs().max(b.abs()) };
            if rel > 1e-9 {
                return Err(format!("{} n={n}: sine {a}, tanh-sinh {b}", s.name));
            }
            worst = worst.max(rel);
            runs += 1;
        }
    }
    Ok(format!("{runs} runs, max relative difference {worst:.2e}"))
}

#[test]
fn acceptance_suite() {
    let mut out = Outcome { failures: Vec::new() };
    out.record("SWKB exactness", exactness());
    out.record("n = 0 identity", zero_level());
    out.record("derivative identity", derivative_identity());
    out.record("hbar-linearity", hbar_linearity());
    out.record("shape-invariance residuals", shape_invariance());
    out.record("algebraic-spectrum closed forms", closed_forms());
    out.record("oracle agreement", oracle_agreement());
    out.record("isospectrality", isospectrality());
    out.record("negative control", negative_control());
    out.record("method cross-check", method_cross_check());
    assert!(out.failures.is_empty(), "failed criteria: {:?}", out.failures);
}
