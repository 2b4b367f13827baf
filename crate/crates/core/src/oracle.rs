//! Direct eigensolver for H∓ = −ħ² d²/dx² + V∓, used as an independent check
//! of the algebraic spectrum.
//!
//! The grid is cell-centred, x_i = L + (i + ½)h, with ψ = 0 imposed half a
//! cell outside the first and last node. Box edges that sit on an open
//! finite endpoint of the domain, where V ~ c/y² with y the distance to the
//! edge, are treated with the factorisation ψ = ρχ, ρ = y^s and
//! s(s − 1)ħ² = c. χ then solves a regular weighted problem
//!
//! −ħ²(ρ²χ′)′ + ρ²(V − ħ²ρ″/ρ)χ = Eρ²χ,
//!
//! whose second differences stay second-order accurate up to the edge.
//! Eigenvalues of two successive grids are combined by Richardson
//! extrapolation; refinement stops when successive extrapolants agree.

use serde::{Deserialize, Serialize};

use crate::domain::DomainInterval;
use crate::error::{LabError, Result};
use crate::numerics::tridiagonal::SymTridiagonal;
use crate::spectrum::SpectrumModel;
use crate::superpotential::{PartnerSign, SuperpotentialSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Nodes on the coarsest grid.
    pub grid_points: usize,
    #[serde(rename = "box")]
    pub box_: DomainInterval,
    pub eigen_count: usize,
    pub convergence_rel_tol: f64,
    /// Grid doublings allowed after the coarsest grid.
    pub max_refinements: usize,
}

/// Richardson sets must agree to this fraction of the entry's acceptance
/// tolerance.
const CONVERGENCE_FRACTION: f64 = 1e-2;

impl OracleConfig {
    /// Box, starting grid and tolerances recorded for the entry.
    pub fn for_spec(spec: &SuperpotentialSpec, eigen_count: usize) -> Self {
        Self {
            grid_points: spec.oracle_grid_points(),
            box_: spec.oracle_box(),
            eigen_count,
            convergence_rel_tol: CONVERGENCE_FRACTION * spec.oracle_tolerance(),
            max_refinements: 6,
        }
    }

    pub fn validate(&self, spec: &SuperpotentialSpec) -> Result<()> {
        if self.eigen_count == 0 {
            return Err(LabError::InvalidConfig("eigen_count must be >= 1".into()));
        }
        if self.grid_points < 500 {
            return Err(LabError::InvalidConfig(format!("grid_points must be >= 500, got {}", self.grid_points)));
        }
        if self.eigen_count * 10 > self.grid_points {
            return Err(LabError::InvalidConfig(format!(
                "{} grid points cannot resolve {} eigenvalues",
                self.grid_points, self.eigen_count
            )));
        }
        if !self.box_.is_bounded() {
            return Err(LabError::InvalidConfig(format!("box {} must be finite", self.box_)));
        }
        if !spec.domain.encloses(&self.box_) {
            return Err(LabError::InvalidConfig(format!("box {} leaves the domain {}", self.box_, spec.domain)));
        }
        if !(self.convergence_rel_tol > 0.0 && self.convergence_rel_tol.is_finite()) {
            return Err(LabError::InvalidConfig(format!(
                "convergence_rel_tol must be > 0, got {}",
                self.convergence_rel_tol
            )));
        }
        if self.max_refinements < 1 || self.max_refinements > 10 {
            return Err(LabError::InvalidConfig(format!(
                "max_refinements must be in 1..=10, got {}",
                self.max_refinements
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub name: String,
    pub sign: PartnerSign,
    /// Richardson-extrapolated eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Algebraic levels of the same Hamiltonian; empty without a spectrum.
    pub algebraic: Vec<f64>,
    /// max |numerical − algebraic| / max(|algebraic|, ħ)
    pub max_rel_deviation: Option<f64>,
    /// Nodes on the finest grid.
    pub grid_points_used: usize,
    #[serde(rename = "box")]
    pub box_: DomainInterval,
    /// Exponents s of the edge factor y^s (0 on plain Dirichlet edges).
    pub edge_exponents: (f64, f64),
    /// Largest |ψ| in the outermost cells relative to max |ψ|, per level,
    /// over the plain Dirichlet edges.
    pub edge_decay: Vec<f64>,
    pub refinements_used: usize,
}

/// c in V ≈ c/y² next to an edge, with the 1/y term extrapolated out.
fn edge_coefficient(spec: &SuperpotentialSpec, sign: PartnerSign, edge: f64, inward: f64) -> Result<f64> {
    let c = |y: f64| -> Result<f64> { Ok(y * y * spec.v(edge + inward * y, spec.a, sign)?) };
    let y = 1e-6;
    Ok(2.0 * c(y)? - c(2.0 * y)?)
}

fn frobenius_exponent(c: f64, hbar: f64) -> f64 {
    0.5 + (0.25 + c / (hbar * hbar)).max(0.0).sqrt()
}

/// Discretisation of one Hamiltonian on one box.
#[derive(Debug, Clone)]
struct Discretisation<'a> {
    spec: &'a SuperpotentialSpec,
    sign: PartnerSign,
    left: f64,
    right: f64,
    /// Edge exponents; 0 on plain Dirichlet edges.
    s_left: f64,
    s_right: f64,
}

impl<'a> Discretisation<'a> {
    fn new(spec: &'a SuperpotentialSpec, sign: PartnerSign, box_: &DomainInterval) -> Result<Self> {
        let d = &spec.domain;
        let weighted_left = d.has_open_finite_left() && box_.left == d.left;
        let weighted_right = d.has_open_finite_right() && box_.right == d.right;
        let s_left = if weighted_left {
            frobenius_exponent(edge_coefficient(spec, sign, box_.left, 1.0)?, spec.hbar)
        } else {
            0.0
        };
        let s_right = if weighted_right {
            frobenius_exponent(edge_coefficient(spec, sign, box_.right, -1.0)?, spec.hbar)
        } else {
            0.0
        };
        Ok(Self { spec, sign, left: box_.left, right: box_.right, s_left, s_right })
    }

    /// ρ² at x. Only called strictly inside or on the box.
    fn weight(&self, x: f64) -> f64 {
        let mut w = 1.0;
        if self.s_left > 0.0 {
            w *= (x - self.left).max(0.0).powf(2.0 * self.s_left);
        }
        if self.s_right > 0.0 {
            w *= (self.right - x).max(0.0).powf(2.0 * self.s_right);
        }
        w
    }

    /// ρ″/ρ at an interior x.
    fn curvature(&self, x: f64) -> f64 {
        let (y, y2) = (x - self.left, self.right - x);
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        if self.s_left > 0.0 {
            d1 += self.s_left / y;
            d2 -= self.s_left / (y * y);
        }
        if self.s_right > 0.0 {
            d1 -= self.s_right / y2;
            d2 -= self.s_right / (y2 * y2);
        }
        d2 + d1 * d1
    }

    /// Symmetric matrix on `n` cells; its eigenvectors hold ψ at the nodes.
    fn matrix(&self, n: usize) -> Result<SymTridiagonal> {
        let h = (self.right - self.left) / n as f64;
        let hb2 = self.spec.hbar * self.spec.hbar;
        let inv_h2 = hb2 / (h * h);
        let face = |i: usize| self.weight(self.left + i as f64 * h);
        let mut diag = Vec::with_capacity(n);
        let mut mass = Vec::with_capacity(n);
        for i in 0..n {
            let x = self.left + (i as f64 + 0.5) * h;
            let m = self.weight(x);
            let v = self.spec.v(x, self.spec.a, self.sign)?;
            let q = m * (v - hb2 * self.curvature(x));
            let mut d = inv_h2 * (face(i) + face(i + 1)) + q;
            // Antisymmetric ghost cell puts ψ = 0 on the box edge.
            if i == 0 {
                d += inv_h2 * face(0);
            }
            if i == n - 1 {
                d += inv_h2 * face(n);
            }
            diag.push(d);
            mass.push(m);
        }
        if mass.iter().any(|m| !(*m > 0.0 && m.is_finite())) {
            return Err(LabError::InvalidConfig("edge weight underflowed; use a coarser grid".into()));
        }
        let scale: Vec<f64> = mass.iter().map(|m| 1.0 / m.sqrt()).collect();
        let off = (0..n - 1).map(|i| -inv_h2 * face(i + 1) * scale[i] * scale[i + 1]).collect();
        for (d, s) in diag.iter_mut().zip(&scale) {
            *d *= s * s;
        }
        if diag.iter().any(|d: &f64| !d.is_finite()) {
            return Err(LabError::Validity(format!("potential is not finite on the grid for `{}`", self.spec.name)));
        }
        Ok(SymTridiagonal::new(diag, off))
    }

    fn eigenvalues(&self, n: usize, k: usize) -> Result<Vec<f64>> {
        self.matrix(n)?.lowest_eigenvalues(k)
    }
}

/// Lowest `k` eigenvalues on `n` cells of `box_`, without extrapolation.
pub fn raw_eigenvalues(
    spec: &SuperpotentialSpec,
    sign: PartnerSign,
    box_: &DomainInterval,
    n: usize,
    k: usize,
) -> Result<Vec<f64>> {
    Discretisation::new(spec, sign, box_)?.eigenvalues(n, k)
}

/// Algebraic levels of H∓ (H₊ levels are E⁻_{n+1}). Errors if more levels
/// are requested than the ladder holds.
pub fn algebraic_levels(spec: &SuperpotentialSpec, sign: PartnerSign, count: usize) -> Result<Vec<f64>> {
    let model = SpectrumModel::from_spec(spec)?;
    let offset = match sign {
        PartnerSign::Minus => 0,
        PartnerSign::Plus => 1,
    };
    if let Some(limit) = model.bound_limit {
        if count + offset > limit + 1 {
            return Err(LabError::Validity(format!(
                "`{}` has {} bound states of H{}, {count} requested",
                spec.name,
                limit + 1 - offset,
                sign_symbol(sign)
            )));
        }
    }
    (0..count).map(|n| model.energy(n + offset)).collect()
}

fn sign_symbol(sign: PartnerSign) -> &'static str {
    match sign {
        PartnerSign::Minus => "-",
        PartnerSign::Plus => "+",
    }
}

fn relative_gap(a: f64, b: f64, hbar: f64) -> f64 {
    (a - b).abs() / b.abs().max(hbar)
}

/// Box with each plain Dirichlet side pushed out so the length doubles.
fn doubled_box(spec: &SuperpotentialSpec, d: &Discretisation<'_>) -> Result<Option<DomainInterval>> {
    let len = d.right - d.left;
    let (free_left, free_right) = (d.s_left == 0.0, d.s_right == 0.0);
    let ext = match (free_left, free_right) {
        (true, true) => 0.5 * len,
        (false, false) => return Ok(None),
        _ => len,
    };
    let push = |edge: f64, dir: f64, limit: f64| -> f64 {
        let target = edge + dir * ext;
        if limit.is_finite() && (target - limit) * dir >= 0.0 {
            0.5 * (edge + limit)
        } else {
            target
        }
    };
    let left = if free_left { push(d.left, -1.0, spec.domain.left) } else { d.left };
    let right = if free_right { push(d.right, 1.0, spec.domain.right) } else { d.right };
    Ok(Some(DomainInterval::open(left, right)))
}

/// Eigenvalues of H∓ on the configured box, refined until converged, and
/// their deviation from the algebraic spectrum when one exists.
pub fn solve_spectrum(spec: &SuperpotentialSpec, sign: PartnerSign, config: &OracleConfig) -> Result<OracleReport> {
    config.validate(spec)?;
    let algebraic = if spec.si_class.is_conventional() {
        algebraic_levels(spec, sign, config.eigen_count)?
    } else {
        Vec::new()
    };
    let k = config.eigen_count;
    let hbar = spec.hbar;
    let disc = Discretisation::new(spec, sign, &config.box_)?;

    let mut n = config.grid_points;
    let coarse = disc.eigenvalues(n, k)?;

    if let Some(bigger) = doubled_box(spec, &disc)? {
        let wide = Discretisation::new(spec, sign, &bigger)?;
        let cells = ((bigger.right - bigger.left) / (disc.right - disc.left) * n as f64).round() as usize;
        let shifted = wide.eigenvalues(cells, k)?;
        if let Some((i, gap)) = coarse
            .iter()
            .zip(&shifted)
            .map(|(a, b)| relative_gap(*a, *b, hbar))
            .enumerate()
            .find(|(_, g)| *g > config.convergence_rel_tol)
        {
            return Err(LabError::BoxTooSmall(format!(
                "level {i} moves by {gap:e} (relative) when the box {} is widened to {}",
                config.box_, bigger
            )));
        }
    }

    let mut previous_raw = coarse;
    let mut previous_extrapolated: Option<Vec<f64>> = None;
    for refinement in 1..=config.max_refinements {
        n *= 2;
        let raw = disc.eigenvalues(n, k)?;
        let extrapolated: Vec<f64> = raw.iter().zip(&previous_raw).map(|(f, c)| (4.0 * f - c) / 3.0).collect();
        let done = previous_extrapolated.as_ref().is_some_and(|prev| {
            extrapolated
                .iter()
                .zip(prev)
                .all(|(e, p)| (e - p).abs() <= config.convergence_rel_tol * e.abs().max(hbar))
        });
        if done {
            let matrix = disc.matrix(n)?;
            let edge_decay = raw
                .iter()
                .map(|&e| {
                    let v = matrix.eigenvector(e);
                    let mut edge: f64 = 0.0;
                    if disc.s_left == 0.0 {
                        edge = edge.max(v[0].abs());
                    }
                    if disc.s_right == 0.0 {
                        edge = edge.max(v[v.len() - 1].abs());
                    }
                    edge
                })
                .collect();
            let max_rel_deviation = (!algebraic.is_empty()).then(|| {
                extrapolated
                    .iter()
                    .zip(&algebraic)
                    .map(|(e, a)| relative_gap(*e, *a, hbar))
                    .fold(0.0, f64::max)
            });
            return Ok(OracleReport {
                name: spec.name.clone(),
                sign,
                eigenvalues: extrapolated,
                algebraic,
                max_rel_deviation,
                grid_points_used: n,
                box_: config.box_,
                edge_exponents: (disc.s_left, disc.s_right),
                edge_decay,
                refinements_used: refinement,
            });
        }
        previous_raw = raw;
        previous_extrapolated = Some(extrapolated);
    }
    Err(LabError::NotConverged(format!(
        "`{}` H{}: eigenvalues not stable to {:e} after {} grid doublings ({} cells)",
        spec.name,
        sign_symbol(sign),
        config.convergence_rel_tol,
        config.max_refinements,
        n
    )))
}

/// max_n |E⁻_{n+1} − E⁺_n| / max(E⁻_{n+1}, ħ) over `config.eigen_count`
/// pairs.
pub fn isospectrality_check(spec: &SuperpotentialSpec, config: &OracleConfig) -> Result<f64> {
    let minus_config = OracleConfig { eigen_count: config.eigen_count + 1, ..config.clone() };
    let minus = solve_spectrum(spec, PartnerSign::Minus, &minus_config)?;
    let plus = solve_spectrum(spec, PartnerSign::Plus, config)?;
    Ok(minus.eigenvalues[1..]
        .iter()
        .zip(&plus.eigenvalues)
        .map(|(m, p)| (m - p).abs() / m.max(spec.hbar))
        .fold(0.0, f64::max))
}

/// The lowest `count` levels of H₋ from the eigensolver with the entry's
/// default configuration.
pub fn numerical_energies(spec: &SuperpotentialSpec, count: usize) -> Result<Vec<f64>> {
    Ok(solve_spectrum(spec, PartnerSign::Minus, &OracleConfig::for_spec(spec, count))?.eigenvalues)
}
