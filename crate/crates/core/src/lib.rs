//! Numerical verification of the supersymmetric WKB (SWKB) quantization
//! condition for additively shape-invariant superpotentials.
//!
//! The crate is organised bottom-up:
//!
//! * [`superpotential`] – W(x, a), partner potentials, ground state, catalog.
//! * [`shape_invariance`] – residuals of the shape-invariance condition and
//!   its two characterising PDEs; class detection.
//! * [`spectrum`] – algebraic energies E_n = g(a + nħ) − g(a).
//! * [`swkb`] – turning points and the singular-endpoint integral
//!   ∫√(E_n − W²) dx, with its ħ-derivative.
//! * [`oracle`] – independent finite-difference eigensolver for H∓.
//!
//! Units use 2m = 1.

pub mod domain;
pub mod error;
pub mod numerics;
pub mod oracle;
pub mod report;
pub mod shape_invariance;
pub mod spectrum;
pub mod superpotential;
pub mod swkb;

pub use domain::DomainInterval;
pub use error::{LabError, Result};
pub use superpotential::{catalog, catalog_entry, PartnerSign, SiClass, SuperpotentialSpec};
