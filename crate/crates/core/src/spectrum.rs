//! Algebraic bound-state energies E_n = g(a + nħ) − g(a).
//!
//! g is fixed up to an additive constant; the conventions used here are
//!
//! | class | g(a)              |
//! |-------|-------------------|
//! | IA    | ω·a               |
//! | IB    | −α²a²             |
//! | II    | −B²/a² − λa²      |
//! | IIIa  | −2ε·a             |
//! | IIIb  | −λa²              |
//!
//! Only differences of g are observable.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::superpotential::{Constants, SiClass, SuperpotentialSpec};

/// Suite default for classes with an infinite ladder of bound states.
pub const INFINITE_LADDER_N_MAX: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumModel {
    pub si_class: SiClass,
    pub constants: Constants,
    pub a: f64,
    pub hbar: f64,
    /// Highest level used by default in test suites and tables.
    pub n_max: usize,
    /// Highest bound level, `None` for an infinite ladder.
    pub bound_limit: Option<usize>,
}

fn need(c: &Constants, name: &'static str, class: SiClass) -> Result<f64> {
    c.get(name)
        .ok_or_else(|| LabError::UnknownParameter { spec: format!("class {class}"), name })
}

impl SpectrumModel {
    pub fn new(si_class: SiClass, constants: Constants, a: f64, hbar: f64) -> Result<Self> {
        if !si_class.is_conventional() {
            return Err(LabError::NoAlgebraicSpectrum(format!("class {si_class}")));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(LabError::Validity(format!("hbar must be positive, got {hbar}")));
        }
        let mut model = Self { si_class, constants, a, hbar, n_max: 0, bound_limit: None };
        model.g_of_a(a)?;
        model.dg_da(a)?;
        if model.dg_da(a)? <= 0.0 {
            return Err(LabError::Validity(format!(
                "dg/da = {} at a = {a}: levels would cross",
                model.dg_da(a)?
            )));
        }
        model.bound_limit = model.compute_bound_limit()?;
        model.n_max = model.bound_limit.unwrap_or(INFINITE_LADDER_N_MAX);
        Ok(model)
    }

    pub fn from_spec(spec: &SuperpotentialSpec) -> Result<Self> {
        if !spec.si_class.is_conventional() {
            return Err(LabError::NoAlgebraicSpectrum(spec.name.clone()));
        }
        Self::new(spec.si_class, spec.constants.clone(), spec.a, spec.hbar)
    }

    pub fn with_hbar(&self, hbar: f64) -> Result<Self> {
        Self::new(self.si_class, self.constants.clone(), self.a, hbar)
    }

    /// Largest n with the shifted parameter a + nħ still in the region where
    /// dg/da > 0.
    fn compute_bound_limit(&self) -> Result<Option<usize>> {
        let c = &self.constants;
        let (a, h) = (self.a, self.hbar);
        let largest_below = |limit: f64| -> usize {
            // largest n >= 0 with a + n·h < limit
            let mut n = ((limit - a) / h).ceil() as i64 - 1;
            while n >= 0 && a + (n as f64) * h >= limit {
                n -= 1;
            }
            while a + ((n + 1) as f64) * h < limit {
                n += 1;
            }
            n.max(0) as usize
        };
        Ok(match self.si_class {
            SiClass::IA | SiClass::IIIa => None,
            SiClass::IB => Some(largest_below(0.0)),
            SiClass::IIA | SiClass::IIB => {
                let lambda = need(c, "lambda", self.si_class)?;
                if lambda > 0.0 {
                    // B > √λ (a + nħ)²  ⇔  a + nħ < (B/√λ)^{1/2}
                    let b = need(c, "B", self.si_class)?;
                    Some(largest_below((b / lambda.sqrt()).sqrt()))
                } else {
                    None
                }
            }
            SiClass::IIIb => {
                let lambda = need(c, "lambda", self.si_class)?;
                if lambda > 0.0 {
                    Some(largest_below(0.0))
                } else {
                    None
                }
            }
            SiClass::NonConventional => unreachable!("rejected in new"),
        })
    }

    /// g without validity checks; shared with the shape-invariance residuals.
    pub(crate) fn g_unchecked(&self, a: f64) -> Result<f64> {
        let c = &self.constants;
        let class = self.si_class;
        Ok(match class {
            SiClass::IA => need(c, "omega", class)? * a,
            SiClass::IB => {
                let alpha = need(c, "alpha", class)?;
                -alpha * alpha * a * a
            }
            SiClass::IIA | SiClass::IIB => {
                let b = need(c, "B", class)?;
                let lambda = need(c, "lambda", class)?;
                -b * b / (a * a) - lambda * a * a
            }
            SiClass::IIIa => -2.0 * need(c, "epsilon", class)? * a,
            SiClass::IIIb => -need(c, "lambda", class)? * a * a,
            SiClass::NonConventional => return Err(LabError::NoAlgebraicSpectrum("NonConventional".into())),
        })
    }

    pub(crate) fn dg_da_unchecked(&self, a: f64) -> Result<f64> {
        let c = &self.constants;
        let class = self.si_class;
        Ok(match class {
            SiClass::IA => need(c, "omega", class)?,
            SiClass::IB => {
                let alpha = need(c, "alpha", class)?;
                -2.0 * alpha * alpha * a
            }
            SiClass::IIA | SiClass::IIB => {
                let b = need(c, "B", class)?;
                let lambda = need(c, "lambda", class)?;
                2.0 * b * b / (a * a * a) - 2.0 * lambda * a
            }
            SiClass::IIIa => -2.0 * need(c, "epsilon", class)?,
            SiClass::IIIb => -2.0 * need(c, "lambda", class)? * a,
            SiClass::NonConventional => return Err(LabError::NoAlgebraicSpectrum("NonConventional".into())),
        })
    }

    fn check_parameter(&self, a_eff: f64) -> Result<()> {
        let c = &self.constants;
        let ok = match self.si_class {
            SiClass::IA | SiClass::IIIa => a_eff.is_finite(),
            SiClass::IB => a_eff < 0.0,
            SiClass::IIA | SiClass::IIB => {
                let lambda = need(c, "lambda", self.si_class)?;
                let b = need(c, "B", self.si_class)?;
                a_eff > 0.0 && (lambda <= 0.0 || b * b > lambda * a_eff.powi(4))
            }
            SiClass::IIIb => need(c, "lambda", self.si_class)? * a_eff < 0.0,
            SiClass::NonConventional => false,
        };
        if ok {
            Ok(())
        } else {
            Err(LabError::Validity(format!(
                "parameter {a_eff} is outside the class {} validity region",
                self.si_class
            )))
        }
    }

    pub fn g_of_a(&self, a_eff: f64) -> Result<f64> {
        self.check_parameter(a_eff)?;
        self.g_unchecked(a_eff)
    }

    pub fn dg_da(&self, a_eff: f64) -> Result<f64> {
        self.check_parameter(a_eff)?;
        self.dg_da_unchecked(a_eff)
    }

    fn shifted(&self, n: usize) -> Result<f64> {
        if let Some(limit) = self.bound_limit {
            if n > limit {
                return Err(LabError::Validity(format!(
                    "level {n} exceeds the {limit} bound states above the ground state of class {}",
                    self.si_class
                )));
            }
        }
        Ok(self.a + n as f64 * self.hbar)
    }

    /// E_n by differencing g.
    pub fn energy(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Ok(0.0);
        }
        let shifted = self.shifted(n)?;
        Ok(self.g_of_a(shifted)? - self.g_of_a(self.a)?)
    }

    /// E_n from the per-class closed form, independent of [`Self::energy`].
    pub fn closed_form_energy(&self, n: usize) -> Result<f64> {
        let shifted = self.shifted(n)?;
        self.check_parameter(shifted)?;
        let c = &self.constants;
        let class = self.si_class;
        let (a, nh) = (self.a, n as f64 * self.hbar);
        Ok(match class {
            SiClass::IA => nh * need(c, "omega", class)?,
            SiClass::IB => {
                let alpha2 = need(c, "alpha", class)?.powi(2);
                alpha2 * a * a - alpha2 * shifted * shifted
            }
            SiClass::IIA | SiClass::IIB => {
                let b2 = need(c, "B", class)?.powi(2);
                let lambda = need(c, "lambda", class)?;
                b2 / (a * a) - b2 / (shifted * shifted) + lambda * (a * a - shifted * shifted)
            }
            SiClass::IIIa => -2.0 * need(c, "epsilon", class)? * nh,
            SiClass::IIIb => need(c, "lambda", class)? * (a * a - shifted * shifted),
            SiClass::NonConventional => unreachable!(),
        })
    }

    /// ∂E_n/∂ħ at fixed a and n.
    pub fn de_dhbar(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Ok(0.0);
        }
        let shifted = self.shifted(n)?;
        self.check_parameter(shifted)?;
        let c = &self.constants;
        let class = self.si_class;
        let nf = n as f64;
        Ok(match class {
            SiClass::IA => nf * need(c, "omega", class)?,
            SiClass::IB => -2.0 * need(c, "alpha", class)?.powi(2) * shifted * nf,
            SiClass::IIA | SiClass::IIB => {
                let b2 = need(c, "B", class)?.powi(2);
                let lambda = need(c, "lambda", class)?;
                2.0 * b2 * nf / shifted.powi(3) - 2.0 * nf * lambda * shifted
            }
            SiClass::IIIa => -2.0 * need(c, "epsilon", class)? * nf,
            SiClass::IIIb => -2.0 * nf * need(c, "lambda", class)? * shifted,
            SiClass::NonConventional => unreachable!(),
        })
    }

    /// Pairs (E⁻_{n+1}, E⁺_n) for n < n_max. The H₊ level comes from the
    /// shifted model at a + ħ plus the constant g(a + ħ) − g(a).
    pub fn partner_check_pairs(&self) -> Result<Vec<(f64, f64)>> {
        if self.n_max == 0 {
            return Ok(Vec::new());
        }
        let partner = Self::new(self.si_class, self.constants.clone(), self.a + self.hbar, self.hbar)?;
        let offset = self.g_of_a(self.a + self.hbar)? - self.g_of_a(self.a)?;
        (0..self.n_max)
            .map(|n| Ok((self.energy(n + 1)?, partner.energy(n)? + offset)))
            .collect()
    }

    /// Levels 0..=n_max.
    pub fn energies(&self) -> Result<Vec<f64>> {
        (0..=self.n_max).map(|n| self.energy(n)).collect()
    }
}
