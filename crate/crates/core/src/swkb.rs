//! The SWKB integral I(a, n, ħ) = ∫_{x₁}^{x₂} √(E_n − W²) dx between the
//! points where W = ∓√E_n, its ħ-derivative, and the ordinary WKB action
//! of V₋ as a baseline.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::numerics::gauss::GaussLegendre;
use crate::numerics::roots;
use crate::numerics::tanh_sinh::{self, TanhSinhOptions};
use crate::spectrum::SpectrumModel;
use crate::superpotential::{PartnerSign, SuperpotentialSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureMethod {
    /// x = m + r·sin θ, Gauss–Legendre in θ.
    SineSubstitutionGauss,
    /// Double-exponential quadrature directly in x.
    TanhSinh,
}

impl QuadratureMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::SineSubstitutionGauss => "sine_substitution_gauss",
            Self::TanhSinh => "tanh_sinh",
        }
    }
}

/// Missing fields take their defaults when deserialised.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub method: QuadratureMethod,
    pub base_nodes: usize,
    pub max_refinements: usize,
    pub rel_tol: f64,
    pub root_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            method: QuadratureMethod::SineSubstitutionGauss,
            base_nodes: 64,
            max_refinements: 8,
            rel_tol: 1e-10,
            root_tol: 1e-12,
        }
    }
}

impl QuadratureConfig {
    pub fn with_method(method: QuadratureMethod) -> Self {
        Self { method, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(LabError::InvalidConfig(format!("rel_tol must be > 0, got {}", self.rel_tol)));
        }
        if !(self.root_tol > 0.0 && self.root_tol.is_finite()) {
            return Err(LabError::InvalidConfig(format!("root_tol must be > 0, got {}", self.root_tol)));
        }
        if self.base_nodes < 16 {
            return Err(LabError::InvalidConfig(format!("base_nodes must be >= 16, got {}", self.base_nodes)));
        }
        if self.max_refinements < 1 || self.max_refinements > 16 {
            return Err(LabError::InvalidConfig(format!(
                "max_refinements must be in 1..=16, got {}",
                self.max_refinements
            )));
        }
        Ok(())
    }

    fn tanh_sinh_options(&self, hbar: f64) -> TanhSinhOptions {
        TanhSinhOptions {
            initial_step: 8.0 / self.base_nodes as f64,
            max_refinements: self.max_refinements,
            rel_tol: self.rel_tol,
            abs_floor: hbar,
            min_offset: NODE_CLAMP,
        }
    }
}

/// Quadrature nodes stay at least this far inside the turning points.
const NODE_CLAMP: f64 = 1e-14;
/// Negative radicands up to this size (relative to max(1, E)) are rounding.
const RADICAND_ROUNDING: f64 = 1e-13;
/// |W′| at a turning point below this is treated as a double root.
const DEGENERATE_SLOPE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurningPoints {
    pub x1: f64,
    pub x2: f64,
    /// W(x₁) + √E
    pub f_at_x1: f64,
    /// W(x₂) − √E
    pub f_at_x2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwkbResult {
    pub n: usize,
    #[serde(rename = "E_n")]
    pub energy: f64,
    pub turning: TurningPoints,
    pub integral: f64,
    /// integral − nπħ
    pub residual: f64,
    pub converged: bool,
    pub refinements_used: usize,
    /// Difference between the last two quadrature levels.
    pub error_estimate: f64,
    pub method: QuadratureMethod,
}

fn root_of(
    f: impl Fn(f64) -> Result<f64> + Copy,
    start: f64,
    direction: f64,
    boundary: f64,
) -> Result<f64> {
    let (inner, outer) = roots::bracket_outward(f, start, direction, boundary, 0.1, 2.0, 200)?;
    roots::brent(f, inner, outer, 0.0, 200)
}

/// Solves W(x₁) = −√E left of the zero of W and W(x₂) = +√E right of it.
pub fn find_turning_points(spec: &SuperpotentialSpec, energy: f64, config: &QuadratureConfig) -> Result<TurningPoints> {
    if !(energy >= 0.0 && energy.is_finite()) {
        return Err(LabError::Validity(format!("energy must be finite and >= 0, got {energy}")));
    }
    let x0 = spec.zero_of_w()?;
    if energy == 0.0 {
        return Ok(TurningPoints { x1: x0, x2: x0, f_at_x1: 0.0, f_at_x2: 0.0 });
    }
    let root_e = energy.sqrt();
    let a = spec.a;
    let lower = move |x: f64| spec.w(x, a).map(|w| w + root_e);
    let upper = move |x: f64| spec.w(x, a).map(|w| w - root_e);
    let x1 = root_of(lower, x0, -1.0, spec.domain.left)
        .map_err(|e| bracket_context(e, "W = -sqrt(E)", energy))?;
    let x2 = root_of(upper, x0, 1.0, spec.domain.right)
        .map_err(|e| bracket_context(e, "W = +sqrt(E)", energy))?;
    let tp = TurningPoints { x1, x2, f_at_x1: lower(x1)?, f_at_x2: upper(x2)? };
    for (x, r) in [(x1, tp.f_at_x1), (x2, tp.f_at_x2)] {
        let slope = spec.w_prime(x, a)?;
        if slope.abs() <= DEGENERATE_SLOPE {
            return Err(LabError::DegenerateTurningPoint { x, slope });
        }
        // Brent stops at adjacent floats; allow the W change across one ulp.
        let floor = 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) * slope.abs();
        if r.abs() > config.root_tol.max(floor) {
            return Err(LabError::NotConverged(format!(
                "turning point at x = {x} has residual {r:e} above root_tol {:e}",
                config.root_tol
            )));
        }
    }
    Ok(tp)
}

fn bracket_context(err: LabError, what: &str, energy: f64) -> LabError {
    match err {
        LabError::Bracket(msg) => LabError::Bracket(format!("{what} at E = {energy}: {msg}")),
        other => other,
    }
}

/// √(E − W²) formed as √((√E − W)(√E + W)).
fn radicand(spec: &SuperpotentialSpec, energy: f64, x: f64) -> Result<f64> {
    let w = spec.w(x, spec.a)?;
    let root_e = energy.sqrt();
    let value = (root_e - w) * (root_e + w);
    if value >= 0.0 {
        Ok(value)
    } else if value >= -RADICAND_ROUNDING * energy.max(1.0) {
        Ok(0.0)
    } else {
        Err(LabError::NegativeRadicand { x, value })
    }
}

fn clamp_inside(x: f64, x1: f64, x2: f64) -> f64 {
    x.max(x1 + NODE_CLAMP).min(x2 - NODE_CLAMP)
}

struct Quadrature {
    value: f64,
    error_estimate: f64,
    refinements_used: usize,
    converged: bool,
}

/// ∫_{x₁}^{x₂} f dx with x = m + r·sin θ and Gauss–Legendre in θ.
fn sine_gauss<F>(f: F, x1: f64, x2: f64, config: &QuadratureConfig, floor: f64) -> Result<Quadrature>
where
    F: Fn(f64) -> Result<f64>,
{
    let m = 0.5 * (x1 + x2);
    let r = 0.5 * (x2 - x1);
    gauss_doubling(
        |theta| {
            let (s, c) = theta.sin_cos();
            Ok(f(clamp_inside(m + r * s, x1, x2))? * r * c)
        },
        -0.5 * PI,
        0.5 * PI,
        config,
        floor,
    )
}

/// Gauss–Legendre on [lo, hi], doubling the node count until two levels
/// agree to rel_tol·max(|I|, floor).
fn gauss_doubling<G>(g: G, lo: f64, hi: f64, config: &QuadratureConfig, floor: f64) -> Result<Quadrature>
where
    G: Fn(f64) -> Result<f64>,
{
    let level = |nodes: usize| -> Result<f64> { GaussLegendre::cached(nodes).integrate(&g, lo, hi) };
    let mut nodes = config.base_nodes;
    let mut previous = level(nodes)?;
    let mut error_estimate = f64::INFINITY;
    for refinement in 1..=config.max_refinements {
        nodes *= 2;
        let current = level(nodes)?;
        error_estimate = (current - previous).abs();
        previous = current;
        if error_estimate <= config.rel_tol * current.abs().max(floor) {
            return Ok(Quadrature { value: current, error_estimate, refinements_used: refinement, converged: true });
        }
    }
    Ok(Quadrature {
        value: previous,
        error_estimate,
        refinements_used: config.max_refinements,
        converged: false,
    })
}

fn tanh_sinh_in_x<F>(f: F, x1: f64, x2: f64, config: &QuadratureConfig, floor: f64) -> Result<Quadrature>
where
    F: Fn(f64) -> Result<f64>,
{
    let out = tanh_sinh::integrate(f, x1, x2, &config.tanh_sinh_options(floor))?;
    Ok(Quadrature {
        value: out.value,
        error_estimate: out.error_estimate,
        refinements_used: out.refinements_used,
        converged: out.converged,
    })
}

fn integrate_between<F>(f: F, x1: f64, x2: f64, config: &QuadratureConfig, floor: f64) -> Result<Quadrature>
where
    F: Fn(f64) -> Result<f64>,
{
    match config.method {
        QuadratureMethod::SineSubstitutionGauss => sine_gauss(f, x1, x2, config, floor),
        QuadratureMethod::TanhSinh => tanh_sinh_in_x(f, x1, x2, config, floor),
    }
}

/// I(a, n, ħ) at E_n from the algebraic spectrum.
pub fn swkb_integral(spec: &SuperpotentialSpec, n: usize, config: &QuadratureConfig) -> Result<SwkbResult> {
    let energy = SpectrumModel::from_spec(spec)?.energy(n)?;
    swkb_integral_at_energy(spec, n, energy, config)
}

/// The SWKB integral at a caller-supplied energy, compared against nπħ.
/// Used where no algebraic spectrum exists.
pub fn swkb_integral_at_energy(
    spec: &SuperpotentialSpec,
    n: usize,
    energy: f64,
    config: &QuadratureConfig,
) -> Result<SwkbResult> {
    config.validate()?;
    let turning = find_turning_points(spec, energy, config)?;
    let target = n as f64 * PI * spec.hbar;
    if energy == 0.0 {
        return Ok(SwkbResult {
            n,
            energy,
            turning,
            integral: 0.0,
            residual: -target,
            converged: true,
            refinements_used: 0,
            error_estimate: 0.0,
            method: config.method,
        });
    }
    let f = |x: f64| radicand(spec, energy, x).map(f64::sqrt);
    let q = integrate_between(f, turning.x1, turning.x2, config, spec.hbar)?;
    Ok(SwkbResult {
        n,
        energy,
        turning,
        integral: q.value,
        residual: q.value - target,
        converged: q.converged,
        refinements_used: q.refinements_used,
        error_estimate: q.error_estimate,
        method: config.method,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeMode {
    /// Central difference of I in ħ with E_n recomputed at each ħ.
    FiniteDifference,
    /// ½ ∂E_n/∂ħ ∫ dx/√(E_n − W²), the boundary terms having dropped out.
    ReducedIntegral,
}

/// Relative step of the finite-difference derivative.
pub const HBAR_STEP: f64 = 1e-4;

/// ∂I/∂ħ at fixed a and constants.
pub fn d_i_d_hbar(spec: &SuperpotentialSpec, n: usize, config: &QuadratureConfig, mode: DerivativeMode) -> Result<f64> {
    config.validate()?;
    let model = SpectrumModel::from_spec(spec)?;
    model.energy(n)?;
    if n == 0 {
        return Ok(0.0);
    }
    match mode {
        DerivativeMode::FiniteDifference => {
            let delta = HBAR_STEP * spec.hbar;
            let at = |hbar: f64| -> Result<f64> {
                let shifted = spec.with_hbar(hbar)?;
                let energy = model.with_hbar(hbar)?.energy(n)?;
                Ok(swkb_integral_at_energy(&shifted, n, energy, config)?.integral)
            };
            Ok((at(spec.hbar + delta)? - at(spec.hbar - delta)?) / (2.0 * delta))
        }
        DerivativeMode::ReducedIntegral => {
            let energy = model.energy(n)?;
            let de = model.de_dhbar(n)?;
            let tp = find_turning_points(spec, energy, config)?;
            let f = |x: f64| -> Result<f64> {
                let r = radicand(spec, energy, x)?;
                Ok(if r > 0.0 { 1.0 / r.sqrt() } else { 0.0 })
            };
            let out = tanh_sinh::integrate(f, tp.x1, tp.x2, &config.tanh_sinh_options(1.0))?;
            Ok(0.5 * de * out.value)
        }
    }
}

/// Ordinary WKB action ∫√(E_n − V₋) dx over the classically allowed region
/// around the zero of W; compare with (n + ½)πħ.
pub fn conventional_wkb_integral(spec: &SuperpotentialSpec, n: usize, config: &QuadratureConfig) -> Result<f64> {
    let energy = SpectrumModel::from_spec(spec)?.energy(n)?;
    conventional_wkb_integral_at_energy(spec, energy, config)
}

/// As [`conventional_wkb_integral`] at a given energy. Where V₋ stays below
/// E all the way to an open finite domain endpoint, that endpoint bounds the
/// region.
pub fn conventional_wkb_integral_at_energy(
    spec: &SuperpotentialSpec,
    energy: f64,
    config: &QuadratureConfig,
) -> Result<f64> {
    config.validate()?;
    let a = spec.a;
    let x0 = spec.zero_of_w()?;
    let gap = move |x: f64| spec.v(x, a, PartnerSign::Minus).map(|v| v - energy);
    if gap(x0)? >= 0.0 {
        return Err(LabError::Bracket(format!("E = {energy} is not above V- at the zero of W (x = {x0})")));
    }
    let side = |direction: f64, boundary: f64| -> Result<f64> {
        match root_of(gap, x0, direction, boundary) {
            Ok(x) => Ok(x),
            Err(LabError::Bracket(_)) if boundary.is_finite() => Ok(boundary),
            Err(LabError::Bracket(msg)) => Err(LabError::Bracket(format!("V- = {energy}: {msg}"))),
            Err(e) => Err(e),
        }
    };
    let x1 = side(-1.0, spec.domain.left)?;
    let x2 = side(1.0, spec.domain.right)?;
    let f = |x: f64| -> Result<f64> {
        let r = -gap(x)?;
        if r >= 0.0 {
            Ok(r.sqrt())
        } else if r >= -RADICAND_ROUNDING * energy.abs().max(1.0) {
            Ok(0.0)
        } else {
            Err(LabError::NegativeRadicand { x, value: r })
        }
    };
    // x = x₁ + (x₂ − x₁)·sin²θ absorbs both √-vanishing turning points and
    // 1/√ growth at a Coulomb-like domain edge.
    let q = gauss_doubling(
        |theta| {
            let (sn, cs) = theta.sin_cos();
            let len = x2 - x1;
            let x = (x1 + len * sn * sn).max(x1.next_up()).min(x2.next_down());
            Ok(f(x)? * 2.0 * len * sn * cs)
        },
        0.0,
        0.5 * PI,
        config,
        spec.hbar,
    )?;
    if !q.converged {
        return Err(LabError::NotConverged(format!(
            "WKB action at E = {energy}: last two levels differ by {:e}",
            q.error_estimate
        )));
    }
    Ok(q.value)
}

/// `count` evenly spaced samples (x, √(E_n − W²)) across [x₁, x₂].
pub fn integrand_samples(spec: &SuperpotentialSpec, energy: f64, count: usize, config: &QuadratureConfig) -> Result<Vec<(f64, f64)>> {
    let tp = find_turning_points(spec, energy, config)?;
    if count == 0 {
        return Ok(Vec::new());
    }
    if count == 1 || tp.x1 == tp.x2 {
        let x = 0.5 * (tp.x1 + tp.x2);
        return Ok(vec![(x, radicand(spec, energy, x)?.sqrt())]);
    }
    (0..count)
        .map(|i| {
            let x = tp.x1 + (tp.x2 - tp.x1) * i as f64 / (count - 1) as f64;
            let inside = if i == 0 || i == count - 1 { x } else { clamp_inside(x, tp.x1, tp.x2) };
            Ok((x, radicand(spec, energy, inside)?.sqrt()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superpotential::catalog_entry;

    fn entry(name: &str) -> SuperpotentialSpec {
        catalog_entry(name).unwrap()
    }

    #[test]
    fn turning_point_examples() {
        let cfg = QuadratureConfig::default();
        let h = find_turning_points(&entry("harmonic"), 4.0, &cfg).unwrap();
        assert!((h.x1 + 2.0).abs() < 1e-12 && (h.x2 - 2.0).abs() < 1e-12);
        let m = find_turning_points(&entry("morse"), 5.0, &cfg).unwrap();
        let s5 = 5f64.sqrt();
        assert!((m.x1 + (3.0 + s5).ln()).abs() < 1e-12);
        assert!((m.x2 + (3.0 - s5).ln()).abs() < 1e-12);
        assert!((m.x1 + 1.65558).abs() < 1e-5 && (m.x2 - 0.26928).abs() < 1e-5);
        let z = find_turning_points(&entry("morse"), 0.0, &cfg).unwrap();
        assert_eq!(z.x1, z.x2);
        assert!((z.x1 - (1.0f64 / 3.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn energy_above_the_well_is_a_bracket_error() {
        // Morse W stays below 3 on the right.
        let r = find_turning_points(&entry("morse"), 10.0, &QuadratureConfig::default());
        assert!(matches!(r, Err(LabError::Bracket(_))), "{r:?}");
    }

    #[test]
    fn integral_examples() {
        let cfg = QuadratureConfig::default();
        let h = entry("harmonic");
        let zero = swkb_integral(&h, 0, &cfg).unwrap();
        assert_eq!((zero.integral, zero.residual), (0.0, 0.0));
        let two = swkb_integral(&h, 2, &cfg).unwrap();
        assert!((two.integral - 2.0 * PI).abs() < 1e-12);
        let c = swkb_integral(&entry("coulomb"), 1, &cfg).unwrap();
        assert!(c.residual.abs() < 1e-8 && c.converged);
    }

    #[test]
    fn control_breaks_exactness_at_its_true_levels() {
        // Energies of H- for the perturbed oscillator are not algebraic;
        // nπħ misses by much more than the quadrature error anyway at the
        // unperturbed levels.
        let p = entry("perturbed_harmonic");
        assert!(matches!(swkb_integral(&p, 1, &QuadratureConfig::default()), Err(LabError::NoAlgebraicSpectrum(_))));
        let r = swkb_integral_at_energy(&p, 1, 2.0, &QuadratureConfig::default()).unwrap();
        assert!(r.residual.abs() > 1e-3);
    }

    #[test]
    fn derivative_examples() {
        let cfg = QuadratureConfig::default();
        let h = entry("harmonic");
        for mode in [DerivativeMode::FiniteDifference, DerivativeMode::ReducedIntegral] {
            assert!((d_i_d_hbar(&h, 3, &cfg, mode).unwrap() - 3.0 * PI).abs() < 1e-5, "{mode:?}");
            assert_eq!(d_i_d_hbar(&h, 0, &cfg, mode).unwrap(), 0.0);
        }
        let m = d_i_d_hbar(&entry("morse"), 1, &cfg, DerivativeMode::ReducedIntegral).unwrap();
        assert!((m - PI).abs() < 1e-6, "{m}");
    }

    #[test]
    fn wkb_baseline() {
        let cfg = QuadratureConfig::default();
        let h = conventional_wkb_integral(&entry("harmonic"), 1, &cfg).unwrap();
        assert!((h - 1.5 * PI).abs() < 1e-10);
        let c = conventional_wkb_integral(&entry("coulomb"), 1, &cfg).unwrap();
        assert!((c - 1.5 * PI).abs() > 1e-3);
        assert!((c - 2.0 * PI).abs() < 1e-8, "{c}");
        let below = conventional_wkb_integral_at_energy(&entry("harmonic"), -2.0, &cfg);
        assert!(matches!(below, Err(LabError::Bracket(_))));
    }

    #[test]
    fn methods_agree() {
        let h = entry("scarf_I");
        let a = swkb_integral(&h, 4, &QuadratureConfig::default()).unwrap();
        let b = swkb_integral(&h, 4, &QuadratureConfig::with_method(QuadratureMethod::TanhSinh)).unwrap();
        assert!((a.integral - b.integral).abs() <= 1e-9 * a.integral);
    }

    #[test]
    fn config_is_validated() {
        let bad = QuadratureConfig { base_nodes: 8, ..QuadratureConfig::default() };
        assert!(matches!(swkb_integral(&entry("harmonic"), 1, &bad), Err(LabError::InvalidConfig(_))));
    }

    #[test]
    fn samples_vanish_at_turning_points() {
        let s = integrand_samples(&entry("harmonic"), 4.0, 5, &QuadratureConfig::default()).unwrap();
        assert_eq!(s.len(), 5);
        assert!(s[0].1.abs() < 1e-6 && s[4].1.abs() < 1e-6);
        assert!((s[2].1 - 2.0).abs() < 1e-12);
    }
}
