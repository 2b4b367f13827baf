//! Superpotentials W(x, a) = a·f1(x) + f2(x) + u(a), their partner
//! potentials V∓ = W² ∓ ħW′, and the ground-state log-amplitude.
//!
//! Units: 2m = 1 throughout.

mod catalog;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::domain::DomainInterval;
use crate::error::{LabError, Result};
use crate::numerics::{gauss, roots};

pub use catalog::{catalog, catalog_document, catalog_entry, CatalogRecord, CATALOG_NAMES};

/// Shape-invariance class of a superpotential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SiClass {
    IA,
    IB,
    IIA,
    IIB,
    IIIa,
    IIIb,
    NonConventional,
}

impl SiClass {
    pub fn is_conventional(self) -> bool {
        self != SiClass::NonConventional
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SiClass::IA => "IA",
            SiClass::IB => "IB",
            SiClass::IIA => "IIA",
            SiClass::IIB => "IIB",
            SiClass::IIIa => "IIIa",
            SiClass::IIIb => "IIIb",
            SiClass::NonConventional => "NonConventional",
        }
    }
}

impl fmt::Display for SiClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which partner potential: V₋ = W² − ħW′ or V₊ = W² + ħW′.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartnerSign {
    Minus,
    Plus,
}

impl fmt::Display for PartnerSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartnerSign::Minus => "minus",
            PartnerSign::Plus => "plus",
        })
    }
}

/// Class constants. Only those meaningful for a form are present.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
}

impl Constants {
    pub const NAMES: [&'static str; 6] = ["alpha", "beta", "B", "lambda", "epsilon", "omega"];

    fn slot(&mut self, name: &str) -> Option<&mut Option<f64>> {
        match name {
            "alpha" => Some(&mut self.alpha),
            "beta" => Some(&mut self.beta),
            "B" => Some(&mut self.b),
            "lambda" => Some(&mut self.lambda),
            "epsilon" => Some(&mut self.epsilon),
            "omega" => Some(&mut self.omega),
            _ => None,
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        match name {
            "alpha" => self.alpha,
            "beta" => self.beta,
            "B" => self.b,
            "lambda" => self.lambda,
            "epsilon" => self.epsilon,
            "omega" => self.omega,
            _ => None,
        }
    }

    /// Present constants in canonical order.
    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        Self::NAMES.iter().filter_map(|&n| self.get(n).map(|v| (n, v))).collect()
    }
}

/// Concrete family of f1, f2, u. Each catalog entry is one of these with
/// default constants; overrides move within the family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    /// W = (ω/2)·x
    Linear,
    /// W = α·a − e^{αx}
    Exponential,
    /// W = −a/x + B/a
    InverseX,
    /// W = −a·k·coth(kx) + B/a, k = √λ
    Coth,
    /// W = −a/x + (ω/2)·x
    RadialOscillator,
    /// W = a·k·tan(kx) + β·k·sec(kx), k = √(−λ)
    Trigonometric,
    /// W = (ω/2)·x + A·ħ·x/(1 + x²), depends on ħ
    PerturbedLinear,
}

/// f1, f1′, f2, f2′ at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parts {
    pub f1: f64,
    pub f1_prime: f64,
    pub f2: f64,
    pub f2_prime: f64,
}

/// A concrete superpotential: class, form, constants, shape parameter a₀, ħ
/// and the x-domain. Immutable once built; the `with_*` methods return
/// modified copies.
///
/// `mirrored` applies W(x) → −W(−x). Constants always describe the
/// unmirrored generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperpotentialSpec {
    pub name: String,
    pub si_class: SiClass,
    pub form: Form,
    pub a: f64,
    pub hbar: f64,
    pub constants: Constants,
    pub domain: DomainInterval,
    pub perturbation_amplitude: f64,
    #[serde(default)]
    pub mirrored: bool,
}

impl SuperpotentialSpec {
    fn constant(&self, name: &'static str) -> Result<f64> {
        self.constants
            .get(name)
            .ok_or_else(|| LabError::UnknownParameter { spec: self.name.clone(), name })
    }

    /// f1, f2 and derivatives of the unmirrored generator.
    fn raw_parts(&self, x: f64) -> Result<Parts> {
        let p = match self.form {
            Form::Linear => {
                let omega = self.constant("omega")?;
                Parts { f1: 0.0, f1_prime: 0.0, f2: 0.5 * omega * x, f2_prime: 0.5 * omega }
            }
            Form::Exponential => {
                let alpha = self.constant("alpha")?;
                let e = (alpha * x).exp();
                Parts { f1: 0.0, f1_prime: 0.0, f2: -e, f2_prime: -alpha * e }
            }
            Form::InverseX => Parts { f1: -1.0 / x, f1_prime: 1.0 / (x * x), f2: 0.0, f2_prime: 0.0 },
            Form::Coth => {
                let k = self.constant("lambda")?.sqrt();
                let s = (k * x).sinh();
                Parts {
                    f1: -k / (k * x).tanh(),
                    f1_prime: k * k / (s * s),
                    f2: 0.0,
                    f2_prime: 0.0,
                }
            }
            Form::RadialOscillator => {
                let omega = self.constant("omega")?;
                Parts { f1: -1.0 / x, f1_prime: 1.0 / (x * x), f2: 0.5 * omega * x, f2_prime: 0.5 * omega }
            }
            Form::Trigonometric => {
                let k = (-self.constant("lambda")?).sqrt();
                let beta = self.constant("beta")?;
                let (sin, cos) = (k * x).sin_cos();
                let sec = 1.0 / cos;
                let tan = sin / cos;
                Parts {
                    f1: k * tan,
                    f1_prime: k * k * sec * sec,
                    f2: beta * k * sec,
                    f2_prime: beta * k * k * sec * tan,
                }
            }
            Form::PerturbedLinear => {
                let omega = self.constant("omega")?;
                let amp = self.perturbation_amplitude * self.hbar;
                let d = 1.0 + x * x;
                Parts {
                    f1: 0.0,
                    f1_prime: 0.0,
                    f2: 0.5 * omega * x + amp * x / d,
                    f2_prime: 0.5 * omega + amp * (1.0 - x * x) / (d * d),
                }
            }
        };
        Ok(p)
    }

    fn raw_u(&self, a: f64) -> Result<(f64, f64)> {
        Ok(match self.form {
            Form::Exponential => {
                let alpha = self.constant("alpha")?;
                (alpha * a, alpha)
            }
            Form::InverseX | Form::Coth => {
                let b = self.constant("B")?;
                (b / a, -b / (a * a))
            }
            _ => (0.0, 0.0),
        })
    }

    /// f1, f2 decomposition at `x` after mirroring. Checks the domain.
    pub fn parts(&self, x: f64) -> Result<Parts> {
        self.domain.check(x)?;
        if self.mirrored {
            let p = self.raw_parts(-x)?;
            Ok(Parts { f1: -p.f1, f1_prime: p.f1_prime, f2: -p.f2, f2_prime: p.f2_prime })
        } else {
            self.raw_parts(x)
        }
    }

    /// u(a) and du/da after mirroring.
    pub fn u(&self, a: f64) -> Result<(f64, f64)> {
        let (u, du) = self.raw_u(a)?;
        Ok(if self.mirrored { (-u, -du) } else { (u, du) })
    }

    /// W(x, a_eff).
    pub fn w(&self, x: f64, a_eff: f64) -> Result<f64> {
        let p = self.parts(x)?;
        Ok(a_eff * p.f1 + p.f2 + self.u(a_eff)?.0)
    }

    /// ∂W/∂x at (x, a_eff), from closed-form derivatives.
    pub fn w_prime(&self, x: f64, a_eff: f64) -> Result<f64> {
        let p = self.parts(x)?;
        Ok(a_eff * p.f1_prime + p.f2_prime)
    }

    /// ∂W/∂a at (x, a_eff).
    pub fn w_da(&self, x: f64, a_eff: f64) -> Result<f64> {
        let p = self.parts(x)?;
        Ok(p.f1 + self.u(a_eff)?.1)
    }

    /// ∂³W/∂a²∂x. Every form is affine in a apart from the x-independent
    /// u(a), so this vanishes identically.
    pub fn w_aax(&self, x: f64, _a_eff: f64) -> Result<f64> {
        self.domain.check(x)?;
        Ok(0.0)
    }

    /// Partner potential V∓ = W² ∓ ħ·W′.
    pub fn v(&self, x: f64, a_eff: f64, sign: PartnerSign) -> Result<f64> {
        let w = self.w(x, a_eff)?;
        let wp = self.w_prime(x, a_eff)?;
        Ok(match sign {
            PartnerSign::Minus => w * w - self.hbar * wp,
            PartnerSign::Plus => w * w + self.hbar * wp,
        })
    }

    /// The point W(x, a) = 0 (unbroken supersymmetry).
    pub fn zero_of_w(&self) -> Result<f64> {
        let f = |x: f64| self.w(x, self.a);
        let seed = self.seed_point();
        let w0 = f(seed)?;
        if w0 == 0.0 {
            return Ok(seed);
        }
        let (direction, boundary) = if w0 > 0.0 { (-1.0, self.domain.left) } else { (1.0, self.domain.right) };
        let (inner, outer) = roots::bracket_outward(f, seed, direction, boundary, 0.1, 2.0, 400)
            .map_err(|_| LabError::NoZeroCrossing(self.name.clone()))?;
        roots::brent(f, inner, outer, 0.0, 200)
    }

    /// Unnormalised ln ψ₀(x) = −(1/ħ)∫_{x₀}^{x} W(y, a) dy with W(x₀) = 0.
    pub fn ground_state_log_density(&self, x: f64) -> Result<f64> {
        self.domain.check(x)?;
        let x0 = self.zero_of_w()?;
        let integral = gauss::adaptive(|y| self.w(y, self.a), x0, x, 1e-13, 1e-13)?;
        Ok(-integral / self.hbar)
    }

    /// Starting point for zero searches.
    pub fn seed_point(&self) -> f64 {
        let d = &self.domain;
        match (d.left.is_finite(), d.right.is_finite()) {
            (true, true) => 0.5 * (d.left + d.right),
            (true, false) => d.left + 1.0,
            (false, true) => d.right - 1.0,
            (false, false) => 0.0,
        }
    }

    /// W̃(x, a) = −W(−x, a) on the mirrored domain.
    pub fn mirrored(&self) -> Self {
        let mut out = self.clone();
        out.mirrored = !self.mirrored;
        out.domain = self.domain.mirrored();
        out.name = format!("{}~mirrored", self.name);
        out
    }

    pub fn with_hbar(&self, hbar: f64) -> Result<Self> {
        let mut out = self.clone();
        out.hbar = hbar;
        out.validate()?;
        Ok(out)
    }

    pub fn with_a(&self, a: f64) -> Result<Self> {
        let mut out = self.clone();
        out.a = a;
        out.validate()?;
        Ok(out)
    }

    /// Applies `key=value` overrides (`a`, `hbar`, `amplitude`, or a class
    /// constant) and re-validates. Keys absent from the form are rejected.
    pub fn with_overrides<'k, I>(&self, overrides: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'k str, f64)>,
    {
        let mut out = self.clone();
        for (key, value) in overrides {
            if !value.is_finite() {
                return Err(LabError::Validity(format!("override {key} = {value} is not finite")));
            }
            match key {
                "a" => out.a = value,
                "hbar" => out.hbar = value,
                "amplitude" | "perturbation_amplitude" => {
                    if out.form != Form::PerturbedLinear {
                        return Err(LabError::Validity(format!("`{}` has no perturbation amplitude", out.name)));
                    }
                    out.perturbation_amplitude = value;
                }
                other => {
                    if out.constants.get(other).is_none() {
                        return Err(LabError::Validity(format!(
                            "`{}` has no constant `{other}` (known: a, hbar{})",
                            out.name,
                            out.constants.entries().iter().map(|(n, _)| format!(", {n}")).collect::<String>()
                        )));
                    }
                    *out.constants.slot(other).expect("known constant name") = Some(value);
                    out.sync_dependent_constants(other);
                }
            }
        }
        if out.form == Form::Trigonometric {
            let half = std::f64::consts::FRAC_PI_2 / (-out.constant("lambda")?).max(f64::MIN_POSITIVE).sqrt();
            out.domain = DomainInterval::open(-half, half);
            if out.mirrored {
                out.domain = out.domain.mirrored();
            }
        }
        out.validate()?;
        Ok(out)
    }

    /// ω and ε are tied for the linear and radial-oscillator forms.
    fn sync_dependent_constants(&mut self, changed: &str) {
        let c = &mut self.constants;
        match (self.form, changed) {
            (Form::Linear, "omega") => c.epsilon = c.omega.map(|w| -0.5 * w),
            (Form::Linear, "epsilon") => c.omega = c.epsilon.map(|e| -2.0 * e),
            (Form::RadialOscillator, "omega") => c.epsilon = c.omega.map(|w| -w),
            (Form::RadialOscillator, "epsilon") => c.omega = c.epsilon.map(|e| -e),
            _ => {}
        }
    }

    /// Parameter-validity constraints of the form, as evaluated predicates.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(LabError::Validity(format!("{}: {msg}", self.name)));
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return bad(format!("hbar must be positive, got {}", self.hbar));
        }
        if !self.a.is_finite() {
            return bad(format!("a must be finite, got {}", self.a));
        }
        let a = self.a;
        match self.form {
            Form::Linear => {
                let omega = self.constant("omega")?;
                if omega <= 0.0 {
                    return bad(format!("omega must be > 0, got {omega}"));
                }
            }
            Form::Exponential => {
                let alpha = self.constant("alpha")?;
                if alpha >= 0.0 {
                    return bad(format!("alpha must be < 0, got {alpha}"));
                }
                if a >= 0.0 {
                    return bad(format!("a must be < 0, got {a}"));
                }
            }
            Form::InverseX => {
                let b = self.constant("B")?;
                if a <= 0.0 || b <= 0.0 {
                    return bad(format!("need a > 0 and B > 0, got a = {a}, B = {b}"));
                }
            }
            Form::Coth => {
                let b = self.constant("B")?;
                let lambda = self.constant("lambda")?;
                if lambda <= 0.0 {
                    return bad(format!("lambda must be > 0, got {lambda}"));
                }
                if a <= 0.0 || b <= lambda.sqrt() * a * a {
                    return bad(format!("need a > 0 and B > sqrt(lambda)·a², got a = {a}, B = {b}"));
                }
            }
            Form::RadialOscillator => {
                let omega = self.constant("omega")?;
                if omega <= 0.0 || a <= 0.0 {
                    return bad(format!("need omega > 0 and a > 0, got omega = {omega}, a = {a}"));
                }
            }
            Form::Trigonometric => {
                let lambda = self.constant("lambda")?;
                let beta = self.constant("beta")?;
                if lambda >= 0.0 {
                    return bad(format!("lambda must be < 0, got {lambda}"));
                }
                if a <= beta.abs() {
                    return bad(format!("need a > |beta|, got a = {a}, beta = {beta}"));
                }
            }
            Form::PerturbedLinear => {
                let omega = self.constant("omega")?;
                if omega <= 0.0 {
                    return bad(format!("omega must be > 0, got {omega}"));
                }
                if self.perturbation_amplitude.abs() * self.hbar >= 0.5 * omega {
                    return bad("|amplitude|·hbar must stay below omega/2 to keep W monotone".into());
                }
            }
        }
        Ok(())
    }

    /// Human-readable constraint expressions for the catalog document.
    pub fn constraint_expressions(&self) -> Vec<String> {
        let v: &[&str] = match self.form {
            Form::Linear => &["omega > 0", "hbar > 0"],
            Form::Exponential => &["alpha < 0", "a < 0", "a + n*hbar < 0 for every bound state n"],
            Form::InverseX => &["a > 0", "B > 0", "lambda = 0"],
            Form::Coth => &["lambda > 0", "a > 0", "B^2 > lambda*a^4", "B > sqrt(lambda)*(a + n*hbar)^2 for every bound state n"],
            Form::RadialOscillator => &["omega > 0", "a > 0", "epsilon = -omega", "lambda = 0"],
            Form::Trigonometric => &["lambda < 0", "a > |beta|", "lambda*(a + n*hbar) < 0 for every bound state n"],
            Form::PerturbedLinear => &["omega > 0", "|amplitude|*hbar < omega/2", "depends on hbar: outside the conventional classes"],
        };
        v.iter().map(|s| s.to_string()).collect()
    }

    /// x-window for residual grids, inside the domain by at least 1e-3.
    pub fn sample_window(&self) -> (f64, f64) {
        let (lo, hi) = match self.form {
            Form::Linear | Form::PerturbedLinear => (-5.0, 5.0),
            Form::Exponential => (-2.0, 6.0),
            Form::InverseX => (0.1, 20.0),
            Form::Coth => (0.05, 10.0),
            Form::RadialOscillator => (0.1, 10.0),
            Form::Trigonometric => {
                // W grows like sec near the walls; stay where W² keeps
                // rounding below the residual tolerances.
                let margin = 0.02 * 0.5 * self.domain.length();
                return (self.domain.left + margin, self.domain.right - margin);
            }
        };
        let (lo, hi) = if self.mirrored { (-hi, -lo) } else { (lo, hi) };
        self.domain.inset(lo, hi, 1e-3)
    }

    /// Dirichlet box for the eigensolver. Open finite endpoints are kept as
    /// box edges; infinite sides are truncated where the target states have
    /// decayed.
    pub fn oracle_box(&self) -> DomainInterval {
        let (lo, hi) = match self.form {
            Form::Linear | Form::PerturbedLinear => (-12.0, 12.0),
            Form::Exponential => (-6.0, 25.0),
            Form::InverseX => (0.0, 150.0),
            Form::Coth => (0.0, 25.0),
            Form::RadialOscillator => (0.0, 20.0),
            Form::Trigonometric => (self.domain.left, self.domain.right),
        };
        let (lo, hi) = if self.mirrored && self.form != Form::Trigonometric { (-hi, -lo) } else { (lo, hi) };
        DomainInterval::open(lo, hi)
    }

    /// Starting grid size for the eigensolver.
    pub fn oracle_grid_points(&self) -> usize {
        match self.form {
            Form::InverseX | Form::Coth => 8000,
            _ => 2000,
        }
    }

    /// Acceptable relative deviation between eigensolver and algebraic
    /// spectrum; flat tails converge more slowly.
    pub fn oracle_tolerance(&self) -> f64 {
        match self.form {
            Form::Exponential | Form::Coth => 1e-4,
            _ => 1e-5,
        }
    }
}
