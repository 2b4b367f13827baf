use std::f64::consts::PI;

use proptest::prelude::*;
use swkb_core::oracle::{solve_spectrum, OracleConfig};
use swkb_core::spectrum::SpectrumModel;
use swkb_core::swkb::{conventional_wkb_integral, swkb_integral, QuadratureConfig};
use swkb_core::{catalog, catalog_entry, PartnerSign, SuperpotentialSpec};

fn conventional() -> Vec<SuperpotentialSpec> {
    catalog().into_iter().filter(|s| s.si_class.is_conventional()).collect()
}

/// x at fraction t ∈ [0, 1] of the entry's sample window.
fn at(spec: &SuperpotentialSpec, t: f64) -> f64 {
    let (lo, hi) = spec.sample_window();
    lo + t * (hi - lo)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn w_prime_matches_central_difference(t in 0.0f64..1.0, which in 0usize..7) {
        let s = &catalog()[which];
        let x = at(s, t);
        let h = 1e-5 * x.abs().max(1.0);
        let fd = (s.w(x + h, s.a).unwrap() - s.w(x - h, s.a).unwrap()) / (2.0 * h);
        let exact = s.w_prime(x, s.a).unwrap();
        prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0), "{} x={x}: {fd} vs {exact}", s.name);
    }

    #[test]
    fn partner_difference_is_minus_two_hbar_w_prime(t in 0.0f64..1.0, which in 0usize..7) {
        let s = &catalog()[which];
        let x = at(s, t);
        let minus = s.v(x, s.a, PartnerSign::Minus).unwrap();
        let plus = s.v(x, s.a, PartnerSign::Plus).unwrap();
        let wp = s.w_prime(x, s.a).unwrap();
        let scale = minus.abs().max(plus.abs()).max(1.0);
        prop_assert!((minus - plus + 2.0 * s.hbar * wp).abs() <= 4.0 * f64::EPSILON * scale);
    }

    #[test]
    fn mirroring_reflects_v_minus(t in 0.0f64..1.0, which in 0usize..7) {
        let s = &catalog()[which];
        let m = s.mirrored();
        let x = at(s, t);
        let original = s.v(x, s.a, PartnerSign::Minus).unwrap();
        let reflected = m.v(-x, m.a, PartnerSign::Minus).unwrap();
        prop_assert!((original - reflected).abs() <= 1e-12 * original.abs().max(1.0));
    }

    #[test]
    fn log_density_peaks_at_the_zero_of_w(t in 0.0f64..1.0, which in 0usize..7) {
        let s = &catalog()[which];
        let x0 = s.zero_of_w().unwrap();
        let x = at(s, t);
        prop_assert!(s.ground_state_log_density(x).unwrap() <= 1e-12);
        prop_assert!(s.ground_state_log_density(x0).unwrap().abs() <= 1e-12);
    }
}

#[test]
fn de_dhbar_matches_finite_difference() {
    for s in conventional() {
        let m = SpectrumModel::from_spec(&s).unwrap();
        for n in 1..=m.n_max.min(10) {
            let step = 1e-6;
            let up = m.with_hbar(s.hbar + step).unwrap().energy(n).unwrap();
            let down = m.with_hbar(s.hbar - step).unwrap().energy(n).unwrap();
            let fd = (up - down) / (2.0 * step);
            let exact = m.de_dhbar(n).unwrap();
            assert!((fd - exact).abs() <= 1e-5 * exact.abs(), "{} n={n}: {fd} vs {exact}", s.name);
        }
    }
}

#[test]
fn energies_increase_with_n() {
    for s in conventional() {
        let e = SpectrumModel::from_spec(&s).unwrap().energies().unwrap();
        assert_eq!(e[0], 0.0);
        assert!(e.windows(2).all(|w| w[1] > w[0]), "{}: {e:?}", s.name);
    }
}

#[test]
fn levels_collapse_as_hbar_vanishes() {
    for s in conventional() {
        let m = SpectrumModel::from_spec(&s).unwrap().with_hbar(1e-6).unwrap();
        let e5 = m.energy(5).unwrap();
        let slope = m.dg_da(s.a).unwrap();
        // E_n ≈ nħ·g′(a) for small ħ
        assert!((e5 / (5e-6 * slope) - 1.0).abs() <= 1e-4, "{}", s.name);
        if slope <= 20.0 {
            assert!(e5 <= 1e-4, "{}: {e5}", s.name);
        }
    }
}

#[test]
fn swkb_integral_is_mirror_invariant() {
    let cfg = QuadratureConfig::default();
    for s in conventional() {
        let m = s.mirrored();
        for n in 1..=3.min(SpectrumModel::from_spec(&s).unwrap().n_max) {
            let a = swkb_integral(&s, n, &cfg).unwrap().integral;
            let b = swkb_integral(&m, n, &cfg).unwrap().integral;
            assert!((a - b).abs() <= 1e-10 * a, "{} n={n}: {a} vs {b}", s.name);
        }
    }
}

#[test]
fn swkb_exact_under_parameter_overrides() {
    let cfg = QuadratureConfig::default();
    let cases = [
        ("harmonic", vec![("omega", 3.5)]),
        ("morse", vec![("a", -4.5), ("alpha", -0.7)]),
        ("coulomb", vec![("B", 2.5), ("a", 1.5)]),
        ("radial_oscillator", vec![("omega", 0.4), ("a", 2.0)]),
        ("scarf_I", vec![("lambda", -4.0), ("beta", -0.3), ("a", 2.0)]),
        ("eckart_like", vec![("B", 12.0), ("a", 1.0), ("lambda", 2.0)]),
    ];
    for (name, overrides) in cases {
        let s = catalog_entry(name).unwrap().with_overrides(overrides.iter().map(|(k, v)| (*k, *v))).unwrap();
        let model = SpectrumModel::from_spec(&s).unwrap();
        for n in 1..=model.n_max.min(4) {
            let r = swkb_integral(&s, n, &cfg).unwrap();
            assert!(r.residual.abs() <= 1e-8 * n as f64 * PI * s.hbar, "{name} n={n}: {r:?}");
        }
    }
}

#[test]
fn wkb_baseline_misses_coulomb() {
    let cfg = QuadratureConfig::default();
    let c = conventional_wkb_integral(&catalog_entry("coulomb").unwrap(), 1, &cfg).unwrap();
    assert!((c - 1.5 * PI).abs() > 1e-3);
}

#[test]
fn oracle_coulomb_example() {
    let c = catalog_entry("coulomb").unwrap();
    let r = solve_spectrum(&c, PartnerSign::Minus, &OracleConfig::for_spec(&c, 3)).unwrap();
    for (e, want) in r.eigenvalues.iter().zip([0.0, 0.75, 8.0 / 9.0]) {
        assert!((e - want).abs() <= 1e-5, "{e} vs {want}");
    }
}

#[test]
fn oracle_on_mirrored_entries() {
    for name in ["morse", "scarf_I", "coulomb"] {
        let s = catalog_entry(name).unwrap().mirrored();
        let r = solve_spectrum(&s, PartnerSign::Minus, &OracleConfig::for_spec(&s, 3)).unwrap();
        assert!(r.max_rel_deviation.unwrap() <= s.oracle_tolerance(), "{name}: {r:?}");
    }
}

#[test]
fn oracle_plus_partner_matches_shifted_ladder() {
    for s in conventional() {
        let count = SpectrumModel::from_spec(&s).unwrap().bound_limit.unwrap_or(3).min(3);
        let r = solve_spectrum(&s, PartnerSign::Plus, &OracleConfig::for_spec(&s, count)).unwrap();
        assert!(r.max_rel_deviation.unwrap() <= s.oracle_tolerance(), "{}: {r:?}", s.name);
    }
}
