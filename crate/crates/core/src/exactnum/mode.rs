//! Scalar mode selection and the surrogate ambiguity guard.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::Surd;
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION_BITS: u32 = 256;

fn default_bits() -> u32 {
    DEFAULT_PRECISION_BITS
}

fn default_radius() -> String {
    "4294967296".to_string()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum ScalarMode {
    #[default]
    ExactQuadratic,
    RationalSurrogate {
        #[serde(default = "default_bits")]
        precision_bits: u32,
        /// Rational literal; scales the ambiguity tolerance `2^-precision_bits`.
        #[serde(default = "default_radius")]
        validity_radius: String,
    },
}

impl ScalarMode {
    pub fn surrogate(precision_bits: u32) -> Self {
        ScalarMode::RationalSurrogate { precision_bits, validity_radius: default_radius() }
    }

    pub fn is_surrogate(&self) -> bool {
        matches!(self, ScalarMode::RationalSurrogate { .. })
    }

    pub fn guard(&self) -> Result<Guard> {
        match self {
            ScalarMode::ExactQuadratic => Ok(Guard::exact()),
            ScalarMode::RationalSurrogate { precision_bits, validity_radius } => {
                if *precision_bits == 0 {
                    return Err(Error::config("precision_bits must be positive"));
                }
                let radius = Surd::parse(validity_radius)
                    .ok()
                    .and_then(|s| s.to_rational())
                    .filter(|q| q.is_positive())
                    .ok_or_else(|| Error::config("validity_radius must be a positive rational"))?;
                let tol = radius / BigRational::from_integer(BigInt::one() << *precision_bits);
                Ok(Guard { tol: Some(tol) })
            }
        }
    }
}

/// Decides comparisons, refusing those a surrogate cannot resolve.
///
/// In exact mode every comparison is decided. In surrogate mode two values
/// closer than the tolerance, but not identical, raise `AmbiguousComparison`:
/// their true order (or equality) is beyond the approximation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Guard {
    tol: Option<BigRational>,
}

impl Guard {
    pub fn exact() -> Self {
        Guard { tol: None }
    }

    pub fn with_tolerance(tol: BigRational) -> Self {
        Guard { tol: Some(tol) }
    }

    pub fn tolerance(&self) -> Option<&BigRational> {
        self.tol.as_ref()
    }

    pub fn check(&self, x: &Surd, y: &Surd, context: &str) -> Result<()> {
        if let Some(tol) = &self.tol {
            if x != y {
                let diff = x.checked_sub(y)?.abs();
                if let Some(q) = diff.to_rational() {
                    if &q < tol {
                        return Err(Error::AmbiguousComparison { context: context.to_string() });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn cmp(&self, x: &Surd, y: &Surd, context: &str) -> Result<Ordering> {
        self.check(x, y, context)?;
        x.try_cmp(y)
    }

    /// Floor of `x`, refusing values within tolerance of a different integer.
    pub fn floor(&self, x: &Surd, context: &str) -> Result<BigInt> {
        let f = x.floor();
        if self.tol.is_some() {
            let below = Surd::from_int(f.clone());
            self.check(x, &below, context)?;
            self.check(x, &Surd::from_int(&f + 1), context)?;
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serde_shape() {
        let m: ScalarMode = serde_json::from_str(r#"{"mode":"exact-quadratic"}"#).unwrap();
        assert_eq!(m, ScalarMode::ExactQuadratic);
        let m: ScalarMode =
            serde_json::from_str(r#"{"mode":"rational-surrogate","precision_bits":64}"#).unwrap();
        assert_eq!(m, ScalarMode::surrogate(64));
        let back = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<ScalarMode>(&back).unwrap(), m);
    }

    #[test]
    fn guard_rejects_near_ties() {
        let g = ScalarMode::RationalSurrogate { precision_bits: 10, validity_radius: "1".into() }
            .guard()
            .unwrap();
        let x = Surd::from_rational(&BigRational::new(1.into(), 3.into()));
        let y = Surd::from_rational(&BigRational::new(1_000_001.into(), 3_000_000.into()));
        assert!(matches!(g.cmp(&x, &y, "t"), Err(Error::AmbiguousComparison { .. })));
        assert_eq!(g.cmp(&x, &x, "t").unwrap(), Ordering::Equal);
        assert_eq!(Guard::exact().cmp(&x, &y, "t").unwrap(), Ordering::Less);
    }
}
