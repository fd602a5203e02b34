//! The multiplicative group of scalars `(0, ∞)`.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bounds applied to user-facing scalars (sample ranges, config and CLI
/// values). Reciprocals of anything in this window stay far from overflow.
pub const INTERFACE_MIN: f64 = 1e-6;
pub const INTERFACE_MAX: f64 = 1e6;

/// An element of `Γ = (0, ∞)`.
///
/// Internally any finite positive value with a finite reciprocal is allowed,
/// since limit schedules run all the way down to the double-precision floor.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Scalar(f64);

impl Scalar {
    pub const ONE: Scalar = Scalar(1.0);
    pub const HALF: Scalar = Scalar(0.5);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 && (1.0 / value).is_finite() {
            Ok(Scalar(value))
        } else {
            Err(Error::InvalidScalar(value))
        }
    }

    /// Like [`Scalar::new`], additionally enforcing the interface window
    /// `[1e-6, 1e6]`.
    pub fn interface(value: f64) -> Result<Self> {
        let s = Self::new(value)?;
        if !(INTERFACE_MIN..=INTERFACE_MAX).contains(&value) {
            return Err(Error::OutOfRange {
                what: "scalar",
                value,
                min: INTERFACE_MIN,
                max: INTERFACE_MAX,
            });
        }
        Ok(s)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn recip(self) -> Scalar {
        Scalar(1.0 / self.0)
    }

    /// `1 - b`, defined for `b < 1`.
    pub fn complement(self) -> Result<Scalar> {
        Scalar::new(1.0 - self.0)
    }
}

impl Mul for Scalar {
    type Output = Scalar;

    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 * rhs.0)
    }
}

impl TryFrom<f64> for Scalar {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Scalar::new(value)
    }
}

impl From<Scalar> for f64 {
    fn from(s: Scalar) -> f64 {
        s.0
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_positive_and_non_finite() {
        for v in [0.0, -1.0, f64::NAN, f64::INFINITY, f64::MIN_POSITIVE / 4.0] {
            assert!(Scalar::new(v).is_err(), "{v} accepted");
        }
    }

    #[test]
    fn interface_window() {
        assert!(Scalar::interface(1e-6).is_ok());
        assert!(Scalar::interface(1e6).is_ok());
        assert!(Scalar::interface(1e-7).is_err());
        assert!(Scalar::interface(2e6).is_err());
        // internal values below the window are still scalars
        assert!(Scalar::new(3.6e-15).is_ok());
    }

    #[test]
    fn group_operations() {
        let a = Scalar::new(0.25).unwrap();
        assert_eq!((a * a.recip()).value(), 1.0);
        assert_eq!(Scalar::new(0.3).unwrap().complement().unwrap().value(), 0.7);
        assert!(Scalar::new(1.5).unwrap().complement().is_err());
    }
}
