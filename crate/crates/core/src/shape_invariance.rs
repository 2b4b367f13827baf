//! Numerical checks of additive shape invariance and of the two PDEs that
//! characterise conventional superpotentials, plus class recognition from
//! the f1/f2 decomposition.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::numerics::gauss::GaussLegendre;
use crate::spectrum::SpectrumModel;
use crate::superpotential::{Form, SiClass, SuperpotentialSpec};

/// What the residual checks need from a superpotential: W and its partial
/// derivatives as functions of (x, a), and the g(a) it is tested against.
pub trait ParametricSuperpotential {
    fn hbar(&self) -> f64;
    fn w(&self, x: f64, a: f64) -> Result<f64>;
    fn w_x(&self, x: f64, a: f64) -> Result<f64>;
    fn w_a(&self, x: f64, a: f64) -> Result<f64>;
    fn w_aax(&self, x: f64, a: f64) -> Result<f64>;
    fn g(&self, a: f64) -> Result<f64>;
    fn dg_da(&self, a: f64) -> Result<f64>;
}

/// g for a spec. Conventional entries use their spectrum model; the
/// perturbed control is tested against the g = ωa of the oscillator it
/// perturbs.
fn spec_g(spec: &SuperpotentialSpec, a: f64, derivative: bool) -> Result<f64> {
    if spec.si_class.is_conventional() {
        let model = SpectrumModel::new(spec.si_class, spec.constants.clone(), spec.a, spec.hbar)?;
        if derivative {
            model.dg_da_unchecked(a)
        } else {
            model.g_unchecked(a)
        }
    } else if spec.form == Form::PerturbedLinear {
        let omega = spec
            .constants
            .omega
            .ok_or(LabError::UnknownParameter { spec: spec.name.clone(), name: "omega" })?;
        Ok(if derivative { omega } else { omega * a })
    } else {
        Err(LabError::NoAlgebraicSpectrum(spec.name.clone()))
    }
}

impl ParametricSuperpotential for SuperpotentialSpec {
    fn hbar(&self) -> f64 {
        self.hbar
    }
    fn w(&self, x: f64, a: f64) -> Result<f64> {
        SuperpotentialSpec::w(self, x, a)
    }
    fn w_x(&self, x: f64, a: f64) -> Result<f64> {
        self.w_prime(x, a)
    }
    fn w_a(&self, x: f64, a: f64) -> Result<f64> {
        self.w_da(x, a)
    }
    fn w_aax(&self, x: f64, a: f64) -> Result<f64> {
        SuperpotentialSpec::w_aax(self, x, a)
    }
    fn g(&self, a: f64) -> Result<f64> {
        spec_g(self, a, false)
    }
    fn dg_da(&self, a: f64) -> Result<f64> {
        spec_g(self, a, true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub x: f64,
    pub a: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub max_abs_residual: f64,
    pub rms_residual: f64,
    pub sample_count: usize,
    pub worst_point: GridPoint,
}

impl ResidualReport {
    fn from_residuals(points: &[GridPoint], residuals: &[f64]) -> Result<Self> {
        if points.is_empty() {
            return Err(LabError::InvalidConfig("residual grid is empty".into()));
        }
        let mut worst = 0;
        let mut sum_sq = 0.0;
        for (i, r) in residuals.iter().enumerate() {
            if !r.is_finite() {
                return Err(LabError::Validity(format!(
                    "non-finite residual at x = {}, a = {}",
                    points[i].x, points[i].a
                )));
            }
            sum_sq += r * r;
            if r.abs() > residuals[worst].abs() {
                worst = i;
            }
        }
        Ok(Self {
            max_abs_residual: residuals[worst].abs(),
            rms_residual: (sum_sq / residuals.len() as f64).sqrt(),
            sample_count: residuals.len(),
            worst_point: points[worst],
        })
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Tensor grid of `nx` x-values by `na` a-values, endpoints included. Every x
/// must lie inside the domain.
pub fn grid(
    spec: &SuperpotentialSpec,
    x_range: (f64, f64),
    a_range: (f64, f64),
    nx: usize,
    na: usize,
) -> Result<Vec<GridPoint>> {
    let (x_lo, x_hi) = x_range;
    let (a_lo, a_hi) = a_range;
    if !(x_lo.is_finite() && x_hi.is_finite() && x_lo < x_hi) {
        return Err(LabError::InvalidConfig(format!("bad x range [{x_lo}, {x_hi}]")));
    }
    if !(a_lo.is_finite() && a_hi.is_finite() && a_lo <= a_hi) {
        return Err(LabError::InvalidConfig(format!("bad a range [{a_lo}, {a_hi}]")));
    }
    if nx == 0 || na == 0 {
        return Err(LabError::InvalidConfig("grid needs at least one point per axis".into()));
    }
    spec.domain.check(x_lo)?;
    spec.domain.check(x_hi)?;
    let xs = linspace(x_lo, x_hi, nx);
    let as_ = if a_lo == a_hi { vec![a_lo; na] } else { linspace(a_lo, a_hi, na) };
    Ok(as_.iter().flat_map(|&a| xs.iter().map(move |&x| GridPoint { x, a })).collect())
}

/// Default a-range: from a₀ over at most three ħ-steps, staying inside the
/// bound-state ladder so that a + ħ is still a valid parameter.
pub fn standard_a_range(spec: &SuperpotentialSpec) -> (f64, f64) {
    let steps = match SpectrumModel::from_spec(spec) {
        Ok(m) => m.n_max.saturating_sub(1).min(3),
        Err(_) => 3,
    };
    (spec.a, spec.a + steps as f64 * spec.hbar)
}

/// The standard 20 × 10 grid over the entry's sample window.
pub fn standard_grid(spec: &SuperpotentialSpec) -> Result<Vec<GridPoint>> {
    grid(spec, spec.sample_window(), standard_a_range(spec), 20, 10)
}

fn residuals<P, F>(p: &P, points: &[GridPoint], f: F) -> Result<ResidualReport>
where
    P: ParametricSuperpotential + ?Sized,
    F: Fn(&P, f64, f64) -> Result<f64>,
{
    let r = points.iter().map(|pt| f(p, pt.x, pt.a)).collect::<Result<Vec<_>>>()?;
    ResidualReport::from_residuals(points, &r)
}

fn sic_point<P: ParametricSuperpotential + ?Sized>(p: &P, x: f64, a: f64) -> Result<f64> {
    let h = p.hbar();
    let next = a + h;
    let (w0, w1) = (p.w(x, a)?, p.w(x, next)?);
    let lhs = w0 * w0 + h * p.w_x(x, a)? + p.g(a)?;
    let rhs = w1 * w1 - h * p.w_x(x, next)? + p.g(next)?;
    Ok(lhs - rhs)
}

fn pde1_point<P: ParametricSuperpotential + ?Sized>(p: &P, x: f64, a: f64) -> Result<f64> {
    Ok(p.w(x, a)? * p.w_a(x, a)? - p.w_x(x, a)? + 0.5 * p.dg_da(a)?)
}

/// V₊(x, a) + g(a) − [V₋(x, a + ħ) + g(a + ħ)] at each grid point.
pub fn residual_sic<P: ParametricSuperpotential + ?Sized>(p: &P, points: &[GridPoint]) -> Result<ResidualReport> {
    residuals(p, points, sic_point)
}

/// W·∂W/∂a − ∂W/∂x + ½·dg/da.
pub fn residual_pde1<P: ParametricSuperpotential + ?Sized>(p: &P, points: &[GridPoint]) -> Result<ResidualReport> {
    residuals(p, points, pde1_point)
}

/// ∂³W/∂a²∂x.
pub fn residual_pde2<P: ParametricSuperpotential + ?Sized>(p: &P, points: &[GridPoint]) -> Result<ResidualReport> {
    residuals(p, points, |p, x, a| p.w_aax(x, a))
}

/// The shape-invariance residual rebuilt by integrating the first PDE over
/// a ∈ [a, a + ħ]:
///
/// −2∫ r₁ da + ħ[W′(a) + W′(a + ħ)] − 2∫ W′ da
///
/// where r₁ is the first-PDE residual. The bracket vanishes whenever W′ is
/// linear in a.
pub fn residual_sic_from_pde1<P: ParametricSuperpotential + ?Sized>(
    p: &P,
    points: &[GridPoint],
) -> Result<ResidualReport> {
    let gl = GaussLegendre::cached(16);
    residuals(p, points, |p, x, a| {
        let h = p.hbar();
        let r1 = gl.integrate(|s| pde1_point(p, x, s), a, a + h)?;
        let wx = gl.integrate(|s| p.w_x(x, s), a, a + h)?;
        Ok(-2.0 * r1 + h * (p.w_x(x, a)? + p.w_x(x, a + h)?) - 2.0 * wx)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub class: SiClass,
    pub constants: BTreeMap<String, f64>,
}

const CLASSIFY_SAMPLES: usize = 64;
const CONSTANCY_TOL: f64 = 1e-8;

/// Mean of the samples if they are constant to 1e-8·(1 + |mean|).
fn constant_value(samples: &[f64]) -> Option<f64> {
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let (lo, hi) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    (hi - lo <= CONSTANCY_TOL * (1.0 + mean.abs()) && mean.is_finite()).then_some(mean)
}

/// Recognises the regrouped class forms from f1, f2 and u sampled over the
/// entry's sample window. A decomposition that changes with ħ, or fits no
/// class relation, is `NonConventional`.
pub fn classify(spec: &SuperpotentialSpec) -> Classification {
    classify_inner(spec).unwrap_or(Classification { class: SiClass::NonConventional, constants: BTreeMap::new() })
}

fn classify_inner(spec: &SuperpotentialSpec) -> Option<Classification> {
    let (lo, hi) = spec.sample_window();
    let xs = linspace(lo, hi, CLASSIFY_SAMPLES);
    let parts = xs.iter().map(|&x| spec.parts(x)).collect::<Result<Vec<_>>>().ok()?;

    let mut doubled = spec.clone();
    doubled.hbar = 2.0 * spec.hbar;
    for (&x, p) in xs.iter().zip(&parts) {
        let q = doubled.parts(x).ok()?;
        let scale = 1.0 + p.f1.abs().max(p.f2.abs());
        if (q.f1 - p.f1).abs() > CONSTANCY_TOL * scale || (q.f2 - p.f2).abs() > CONSTANCY_TOL * scale {
            return None;
        }
    }

    let collect = |f: &dyn Fn(&crate::superpotential::Parts) -> f64| parts.iter().map(f).collect::<Vec<_>>();
    let (u, du) = spec.u(spec.a).ok()?;
    let mut constants = BTreeMap::new();
    let mut put = |k: &str, v: f64| {
        constants.insert(k.to_string(), v);
    };

    if let Some(c1) = constant_value(&collect(&|p| p.f1)) {
        let alpha = c1 + du;
        let class = if alpha.abs() <= CONSTANCY_TOL {
            let epsilon = constant_value(&collect(&|p| -p.f2_prime))?;
            put("epsilon", epsilon);
            put("omega", -2.0 * epsilon);
            SiClass::IA
        } else {
            let epsilon = constant_value(&collect(&|p| alpha * p.f2 - p.f2_prime))?;
            put("alpha", alpha);
            put("epsilon", epsilon);
            SiClass::IB
        };
        return Some(Classification { class, constants });
    }

    let lambda = constant_value(&collect(&|p| p.f1 * p.f1 - p.f1_prime))?;
    if let Some(c2) = constant_value(&collect(&|p| p.f2)) {
        put("B", spec.a * (u + c2));
        if lambda.abs() <= CONSTANCY_TOL {
            put("lambda", 0.0);
            return Some(Classification { class: SiClass::IIA, constants });
        }
        put("lambda", lambda);
        return Some(Classification { class: SiClass::IIB, constants });
    }

    if lambda.abs() <= CONSTANCY_TOL {
        let epsilon = constant_value(&collect(&|p| p.f1 * p.f2 - p.f2_prime))?;
        put("lambda", 0.0);
        put("epsilon", epsilon);
        put("omega", -epsilon);
        return Some(Classification { class: SiClass::IIIa, constants });
    }
    let beta = constant_value(&collect(&|p| p.f2 / (p.f1 * p.f1 - lambda).sqrt()))?;
    put("lambda", lambda);
    put("beta", beta);
    Some(Classification { class: SiClass::IIIb, constants })
}
