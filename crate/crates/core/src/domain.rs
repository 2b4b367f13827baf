use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Interval of the real line on which a superpotential is defined.
///
/// Endpoints may be infinite. A finite endpoint marked open is a place where
/// the superpotential may be singular; evaluating exactly there is an error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainInterval {
    #[serde(with = "extended_real")]
    pub left: f64,
    #[serde(with = "extended_real")]
    pub right: f64,
    pub left_open: bool,
    pub right_open: bool,
}

impl DomainInterval {
    pub fn new(left: f64, right: f64, left_open: bool, right_open: bool) -> Result<Self> {
        if left.is_nan() || right.is_nan() || left >= right {
            return Err(LabError::Validity(format!(
                "domain requires left < right, got [{left}, {right}]"
            )));
        }
        Ok(Self {
            left,
            right,
            left_open: left_open || left.is_infinite(),
            right_open: right_open || right.is_infinite(),
        })
    }

    pub fn real_line() -> Self {
        Self::open(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn positive_half_line() -> Self {
        Self::open(0.0, f64::INFINITY)
    }

    /// Open interval; panics on `left >= right`, so only for literals.
    pub fn open(left: f64, right: f64) -> Self {
        Self::new(left, right, true, true).expect("open interval with left < right")
    }

    pub fn closed(left: f64, right: f64) -> Result<Self> {
        Self::new(left, right, false, false)
    }

    pub fn is_bounded(&self) -> bool {
        self.left.is_finite() && self.right.is_finite()
    }

    pub fn length(&self) -> f64 {
        self.right - self.left
    }

    /// Finite endpoint excluded from the domain (a possible singularity).
    pub fn has_open_finite_left(&self) -> bool {
        self.left_open && self.left.is_finite()
    }

    pub fn has_open_finite_right(&self) -> bool {
        self.right_open && self.right.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        if !x.is_finite() {
            return false;
        }
        let left_ok = if self.left_open { x > self.left } else { x >= self.left };
        let right_ok = if self.right_open { x < self.right } else { x <= self.right };
        left_ok && right_ok
    }

    pub fn check(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(LabError::Domain { x, domain: self.to_string() })
        }
    }

    /// `true` when `other` lies inside `self` (open finite endpoints of `self`
    /// may be shared with `other`).
    pub fn encloses(&self, other: &DomainInterval) -> bool {
        other.left >= self.left && other.right <= self.right
    }

    /// Image under x -> -x.
    pub fn mirrored(&self) -> Self {
        Self {
            left: -self.right,
            right: -self.left,
            left_open: self.right_open,
            right_open: self.left_open,
        }
    }

    /// Pull a sample range in by `margin` from every open finite endpoint.
    pub fn inset(&self, lo: f64, hi: f64, margin: f64) -> (f64, f64) {
        let lo = if self.has_open_finite_left() { lo.max(self.left + margin) } else { lo.max(self.left) };
        let hi = if self.has_open_finite_right() { hi.min(self.right - margin) } else { hi.min(self.right) };
        (lo, hi)
    }
}

impl fmt::Display for DomainInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.left_open { '(' } else { '[' };
        let close = if self.right_open { ')' } else { ']' };
        write!(f, "{open}{}, {}{close}", self.left, self.right)
    }
}

/// JSON has no infinities; they travel as the strings "-inf" / "inf".
pub(crate) mod extended_real {
    use serde::de::{self, Deserializer, Visitor};
    use serde::Serializer;
    use std::fmt;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *v == f64::INFINITY {
            s.serialize_str("inf")
        } else if *v == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        struct ExtendedReal;
        impl Visitor<'_> for ExtendedReal {
            type Value = f64;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number, \"inf\" or \"-inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
                Ok(v)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
                Ok(v as f64)
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
                Ok(v as f64)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
                match v {
                    "inf" | "+inf" => Ok(f64::INFINITY),
                    "-inf" => Ok(f64::NEG_INFINITY),
                    other => other.parse().map_err(E::custom),
                }
            }
        }
        d.deserialize_any(ExtendedReal)
    }
}
