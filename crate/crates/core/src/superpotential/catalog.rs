use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::{Constants, Form, SiClass, SuperpotentialSpec};
use crate::domain::DomainInterval;
use crate::error::{LabError, Result};

pub const CATALOG_NAMES: [&str; 7] = [
    "harmonic",
    "morse",
    "coulomb",
    "eckart_like",
    "radial_oscillator",
    "scarf_I",
    "perturbed_harmonic",
];

/// Amplitude of the ħ-dependent term in `perturbed_harmonic`.
pub const DEFAULT_PERTURBATION_AMPLITUDE: f64 = 0.1;

fn spec(
    name: &str,
    si_class: SiClass,
    form: Form,
    a: f64,
    constants: Constants,
    domain: DomainInterval,
) -> SuperpotentialSpec {
    SuperpotentialSpec {
        name: name.to_string(),
        si_class,
        form,
        a,
        hbar: 1.0,
        constants,
        domain,
        perturbation_amplitude: 0.0,
        mirrored: false,
    }
}

/// One representative per class plus the ħ-dependent negative control.
pub fn catalog() -> Vec<SuperpotentialSpec> {
    let mut perturbed = spec(
        "perturbed_harmonic",
        SiClass::NonConventional,
        Form::PerturbedLinear,
        0.0,
        Constants { omega: Some(2.0), ..Default::default() },
        DomainInterval::real_line(),
    );
    perturbed.perturbation_amplitude = DEFAULT_PERTURBATION_AMPLITUDE;
    vec![
        spec(
            "harmonic",
            SiClass::IA,
            Form::Linear,
            0.0,
            Constants { epsilon: Some(-1.0), omega: Some(2.0), ..Default::default() },
            DomainInterval::real_line(),
        ),
        spec(
            "morse",
            SiClass::IB,
            Form::Exponential,
            -3.0,
            Constants { alpha: Some(-1.0), ..Default::default() },
            DomainInterval::real_line(),
        ),
        spec(
            "coulomb",
            SiClass::IIA,
            Form::InverseX,
            1.0,
            Constants { b: Some(1.0), lambda: Some(0.0), ..Default::default() },
            DomainInterval::positive_half_line(),
        ),
        spec(
            "eckart_like",
            SiClass::IIB,
            Form::Coth,
            2.0,
            Constants { b: Some(30.0), lambda: Some(1.0), ..Default::default() },
            DomainInterval::positive_half_line(),
        ),
        spec(
            "radial_oscillator",
            SiClass::IIIa,
            Form::RadialOscillator,
            1.0,
            Constants { lambda: Some(0.0), epsilon: Some(-1.0), omega: Some(1.0), ..Default::default() },
            DomainInterval::positive_half_line(),
        ),
        spec(
            "scarf_I",
            SiClass::IIIb,
            Form::Trigonometric,
            1.0,
            Constants { beta: Some(0.5), lambda: Some(-1.0), ..Default::default() },
            DomainInterval::open(-FRAC_PI_2, FRAC_PI_2),
        ),
        perturbed,
    ]
}

pub fn catalog_entry(name: &str) -> Result<SuperpotentialSpec> {
    catalog()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| LabError::Validity(format!("no catalog entry named `{name}` (known: {})", CATALOG_NAMES.join(", "))))
}

/// Machine-readable description of one catalog entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub name: String,
    pub class: SiClass,
    pub form: Form,
    pub a: f64,
    pub hbar: f64,
    pub constants: Constants,
    pub domain: DomainInterval,
    pub perturbation_amplitude: f64,
    pub constraints: Vec<String>,
}

impl From<&SuperpotentialSpec> for CatalogRecord {
    fn from(s: &SuperpotentialSpec) -> Self {
        Self {
            name: s.name.clone(),
            class: s.si_class,
            form: s.form,
            a: s.a,
            hbar: s.hbar,
            constants: s.constants.clone(),
            domain: s.domain,
            perturbation_amplitude: s.perturbation_amplitude,
            constraints: s.constraint_expressions(),
        }
    }
}

/// `{"entries": [...]}` document for the whole catalog.
pub fn catalog_document() -> serde_json::Value {
    let entries: Vec<CatalogRecord> = catalog().iter().map(CatalogRecord::from).collect();
    serde_json::json!({ "entries": entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contains_every_class() {
        let cat = catalog();
        assert_eq!(cat.len(), 7);
        let names: Vec<_> = cat.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, CATALOG_NAMES);
        for class in [SiClass::IA, SiClass::IB, SiClass::IIA, SiClass::IIB, SiClass::IIIa, SiClass::IIIb, SiClass::NonConventional] {
            assert!(cat.iter().any(|s| s.si_class == class), "missing {class}");
        }
        assert_eq!(catalog_entry("harmonic").unwrap().si_class, SiClass::IA);
        assert_eq!(catalog_entry("perturbed_harmonic").unwrap().si_class, SiClass::NonConventional);
    }

    #[test]
    fn defaults_satisfy_constraints() {
        for s in catalog() {
            s.validate().unwrap_or_else(|e| panic!("{}: {e}", s.name));
            let x0 = s.zero_of_w().unwrap();
            assert!(s.domain.contains(x0));
        }
    }

    #[test]
    fn only_the_control_is_perturbed() {
        for s in catalog() {
            assert_eq!(s.perturbation_amplitude != 0.0, s.si_class == SiClass::NonConventional);
        }
    }

    #[test]
    fn unknown_name_fails() {
        assert!(catalog_entry("nosuch").is_err());
    }

    #[test]
    fn document_round_trips() {
        let doc = catalog_document();
        let entries: Vec<CatalogRecord> = serde_json::from_value(doc["entries"].clone()).unwrap();
        assert_eq!(entries.len(), 7);
        let coulomb = &entries[2];
        assert_eq!(coulomb.constants.b, Some(1.0));
        assert_eq!(coulomb.domain.right, f64::INFINITY);
        assert!(doc["entries"][2]["constants"].get("B").is_some());
    }
}
