//! Lower bounds on linear forms and on their restrictions omitting one variable.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{canonical_vectors, sup, LinearFormSystem, PREFILTER};
use crate::error::{Error, Result};
use crate::exactnum::Surd;

/// A named decay profile `psi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "kebab-case")]
pub enum Psi {
    /// `psi(r) = log(2 + r)^(-1 - epsilon)`.
    Logpower { epsilon: f64 },
    /// `psi(r) = c` for a rational `c`.
    Constant { c: String },
}

impl Psi {
    pub fn value(&self, r: f64) -> f64 {
        match self {
            Psi::Logpower { epsilon } => (2.0 + r).ln().powf(-1.0 - epsilon),
            Psi::Constant { c } => self.exact().and_then(|q| q.to_f64()).unwrap_or_else(|| c.parse().unwrap_or(f64::NAN)),
        }
    }

    fn exact(&self) -> Option<BigRational> {
        match self {
            Psi::Logpower { .. } => None,
            Psi::Constant { c } => Surd::parse(c).ok().and_then(|s| s.to_rational()),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Psi::Logpower { epsilon } if *epsilon > 0.0 => Ok(()),
            Psi::Logpower { .. } => Err(Error::invalid("epsilon must be positive")),
            Psi::Constant { .. } => match self.exact() {
                Some(q) if q > BigRational::from_integer(0.into()) => Ok(()),
                _ => Err(Error::invalid("psi constant must be a positive rational")),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub form: usize,
    /// The variable set to zero (second family only).
    pub omitted: Option<usize>,
    pub n: Vec<i64>,
    /// Scaled distance and its required lower bound.
    pub value: f64,
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub psi: Psi,
    pub height: u64,
    /// Whether thresholds were evaluated in floating point.
    pub floating: bool,
    pub checked_single: u64,
    pub checked_restricted: u64,
    pub single_violation: Option<Violation>,
    pub restricted_violation: Option<Violation>,
}

impl HypothesisReport {
    pub fn pass(&self) -> bool {
        self.single_violation.is_none() && self.restricted_violation.is_none()
    }
}

/// Checks, for `0 < |n| <= H`:
/// `||L_i(n)|| >= psi(|n|) / |n|^d` for every form, and
/// `||L_i(n)|| >= 3^d / (|n|^d psi(|n|)^d)` for every form restricted to `n_j = 0`.
pub fn check_hypotheses(system: &LinearFormSystem, psi: &Psi, h: u64) -> Result<HypothesisReport> {
    if h < 2 {
        return Err(Error::invalid("height must be at least 2"));
    }
    psi.validate()?;
    let d = system.d();
    let exact_c = psi.exact();
    let mut report = HypothesisReport {
        psi: psi.clone(),
        height: h,
        floating: exact_c.is_none(),
        checked_single: 0,
        checked_restricted: 0,
        single_violation: None,
        restricted_violation: None,
    };

    // lhs = dist * |n|^d; single: lhs >= psi; restricted: lhs * psi^d >= 3^d.
    let below = |n: &[i64], i: usize, restricted: bool| -> Result<Option<Violation>> {
        let s = sup(n);
        let scale = (s as f64).powi(d as i32);
        let dist = system.dists_f64(n, None)[i];
        let p = psi.value(s as f64);
        let (value, threshold) = if restricted {
            (dist * scale, 3f64.powi(d as i32) / p.powi(d as i32))
        } else {
            (dist * scale, p)
        };
        let fails = if let (Some(c), true) = (&exact_c, (value - threshold).abs() <= PREFILTER * threshold.max(1.0)) {
            let lhs = system.eval(n)[i].dist_to_int().mul_int(s.pow(d as u32));
            let rhs = if restricted {
                BigRational::from_integer(BigInt::from(3).pow(d as u32)) / c.pow(d as i32)
            } else {
                c.clone()
            };
            system.guard.cmp(&lhs, &Surd::from_rational(&rhs), "hypothesis bound")?.is_lt()
        } else {
            value < threshold
        };
        Ok(fails.then(|| Violation { form: i, omitted: None, n: n.to_vec(), value, threshold }))
    };

    'single: for n in canonical_vectors(d, h as i64) {
        for i in 0..system.rows().len() {
            report.checked_single += 1;
            if let Some(v) = below(&n, i, false)? {
                report.single_violation = Some(v);
                break 'single;
            }
        }
    }
    if d >= 2 {
        'restricted: for omitted in 0..d {
            for m in canonical_vectors(d - 1, h as i64) {
                let mut n = m.clone();
                n.insert(omitted, 0);
                for i in 0..system.rows().len() {
                    report.checked_restricted += 1;
                    if let Some(mut v) = below(&n, i, true)? {
                        v.omitted = Some(omitted);
                        report.restricted_violation = Some(v);
                        break 'restricted;
                    }
                }
            }
        }
    }
    Ok(report)
}
