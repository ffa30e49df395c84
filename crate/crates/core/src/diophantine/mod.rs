//! Diophantine approximation for systems of linear forms.

mod cf;
mod hypotheses;
mod thm13;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{Guard, Surd};
use crate::scheme::Scheme;

pub use cf::{cf, ContinuedFraction};
pub use hypotheses::{check_hypotheses, HypothesisReport, Psi, Violation};
pub use thm13::{
    calibrate_gap_constant, consecutive_gap_count, thm13_alpha, thm13_radius, Thm13Params, Thm13Run,
};

/// `k - d` linear forms in `d` integer variables, `L_i(n) = sum_j a_ij n_j`.
#[derive(Clone, Debug)]
pub struct LinearFormSystem {
    rows: Vec<Vec<Surd>>,
    approx: Vec<Vec<f64>>,
    guard: Guard,
}

/// Slack used when an `f64` estimate decides whether to evaluate exactly.
const PREFILTER: f64 = 1e-9;

impl LinearFormSystem {
    pub fn new(rows: Vec<Vec<Surd>>, guard: Guard) -> Result<Self> {
        let d = rows.first().map_or(0, |r| r.len());
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return Err(Error::invalid("forms must share a positive number of variables"));
        }
        let mut field = 0;
        for v in rows.iter().flatten() {
            match (field, v.field()) {
                (_, 0) => {}
                (0, f) => field = f,
                (a, f) if a != f => return Err(Error::MixedFields(a, f)),
                _ => {}
            }
        }
        let approx = rows.iter().map(|r| r.iter().map(Surd::to_f64).collect()).collect();
        Ok(LinearFormSystem { rows, approx, guard })
    }

    pub fn from_strings(rows: &[Vec<&str>]) -> Result<Self> {
        let rows = rows.iter().map(|r| r.iter().map(|s| Surd::parse(s)).collect::<Result<_>>()).collect::<Result<_>>()?;
        LinearFormSystem::new(rows, Guard::exact())
    }

    pub fn from_scheme(scheme: &Scheme) -> Result<Self> {
        LinearFormSystem::new(scheme.alpha().to_vec(), scheme.guard().clone())
    }

    /// Number of variables.
    pub fn d(&self) -> usize {
        self.rows[0].len()
    }

    /// Total dimension: variables plus forms.
    pub fn k(&self) -> usize {
        self.d() + self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Surd>] {
        &self.rows
    }

    pub fn eval(&self, n: &[i64]) -> Vec<Surd> {
        self.rows
            .iter()
            .map(|row| row.iter().zip(n).filter(|(_, &x)| x != 0).fold(Surd::zero(), |acc, (a, &x)| &acc + &a.mul_int(x)))
            .collect()
    }

    /// `max_i ||L_i(n) - gamma_i||`, the distance to the nearest integer vector.
    pub fn norm_shifted(&self, n: &[i64], gamma: &[Surd]) -> Surd {
        self.eval(n).iter().zip(gamma).map(|(v, g)| (v - g).dist_to_int()).max().unwrap_or_else(Surd::zero)
    }

    /// `||L(n)||`.
    pub fn norm(&self, n: &[i64]) -> Surd {
        self.eval(n).iter().map(Surd::dist_to_int).max().unwrap_or_else(Surd::zero)
    }

    /// Per-form distances to the nearest integer, in floating point.
    fn dists_f64(&self, n: &[i64], gamma: Option<&[f64]>) -> Vec<f64> {
        self.approx
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let v: f64 = row.iter().zip(n).map(|(a, &x)| a * x as f64).sum::<f64>() - gamma.map_or(0.0, |g| g[i]);
                (v - v.round()).abs()
            })
            .collect()
    }

    fn norm_f64(&self, n: &[i64]) -> f64 {
        self.dists_f64(n, None).into_iter().fold(0.0, f64::max)
    }
}

/// Integer vectors with sup-norm exactly `s`.
fn shell(d: usize, s: i64, canonical: bool) -> Vec<Vec<i64>> {
    fn fill(prefix: &mut Vec<i64>, left: usize, hit: bool, s: i64, canonical: bool, out: &mut Vec<Vec<i64>>) {
        if left == 0 {
            if hit {
                out.push(prefix.clone());
            }
            return;
        }
        let leading_zero = prefix.iter().all(|&x| x == 0);
        let lo = if canonical && leading_zero { 0 } else { -s };
        let choices: Vec<i64> = if left == 1 && !hit { vec![-s, s] } else { (lo..=s).collect() };
        for x in choices {
            if x < lo {
                continue;
            }
            prefix.push(x);
            fill(prefix, left - 1, hit || x.abs() == s, s, canonical, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if s > 0 {
        fill(&mut Vec::with_capacity(d), d, false, s, canonical, &mut out);
    }
    out
}

/// Nonzero integer vectors up to sign, by increasing sup-norm then lexicographically.
pub fn canonical_vectors(d: usize, max_norm: i64) -> impl Iterator<Item = Vec<i64>> {
    (1..=max_norm).flat_map(move |s| shell(d, s, true))
}

fn sup(n: &[i64]) -> i64 {
    n.iter().map(|x| x.abs()).max().unwrap_or(0)
}

/// The first `n` with `0 < |n| < N` and `||L(n)|| <= N^(-d/(k-d))`, which always exists.
pub fn dirichlet_witness(system: &LinearFormSystem, big_n: u64) -> Result<Vec<i64>> {
    if big_n < 2 {
        return Err(Error::invalid("N must be at least 2"));
    }
    let d = system.d() as i32;
    let m = system.rows.len() as u32;
    let bound = (big_n as f64).powf(-(d as f64) / m as f64);
    let n_pow = BigRational::from_integer(BigInt::from(big_n).pow(d as u32));
    for n in canonical_vectors(system.d(), big_n as i64 - 1) {
        if system.norm_f64(&n) > bound + PREFILTER {
            continue;
        }
        // ||L(n)||^(k-d) * N^d <= 1, exactly
        let v = system.norm(&n).pow(m).mul_rational(&n_pow);
        if system.guard.cmp(&v, &Surd::one(), "Dirichlet bound")?.is_le() {
            return Ok(n);
        }
    }
    Err(Error::DirichletViolated(big_n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BadApprox {
    /// `min |n|^d ||L(n)||^(k-d)` over `0 < |n| <= H`.
    #[serde(serialize_with = "crate::diophantine::ser_display")]
    pub constant: Surd,
    pub witness: Vec<i64>,
}

pub(crate) fn ser_display_all<T: std::fmt::Display, S: serde::Serializer>(
    v: &[T],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub(crate) fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// The empirical badly-approximable constant up to height `h`.
pub fn bad_approx_constant(system: &LinearFormSystem, h: u64) -> Result<BadApprox> {
    if h < 1 {
        return Err(Error::invalid("height must be at least 1"));
    }
    let d = system.d() as u32;
    let m = system.rows.len() as u32;
    let mut best: Option<(f64, Surd, Vec<i64>)> = None;
    for n in canonical_vectors(system.d(), h as i64) {
        let scale = (sup(&n) as f64).powi(d as i32);
        let approx = scale * system.norm_f64(&n).powi(m as i32);
        if let Some((b, _, _)) = &best {
            if approx > b * (1.0 + PREFILTER) + PREFILTER {
                continue;
            }
        }
        let exact = system.norm(&n).pow(m).mul_int(sup(&n).pow(d));
        let better = match &best {
            None => true,
            Some((_, v, _)) => system.guard.cmp(&exact, v, "approximation constant")?.is_lt(),
        };
        if better {
            best = Some((exact.to_f64(), exact, n));
        }
    }
    let (_, constant, witness) = best.expect("at least one vector");
    Ok(BadApprox { constant, witness })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transference {
    #[serde(serialize_with = "ser_display")]
    pub h: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub c1: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub x1: BigRational,
}

/// Inhomogeneous bounds from homogeneous ones: `h = floor(X^-d C^(d-k))`,
/// `C1 = (h+1) C / 2`, `X1 = (h+1) X / 2`.
pub fn transference(c: &BigRational, x: &BigRational, d: usize, k: usize) -> Result<Transference> {
    if !c.is_positive() || !x.is_positive() {
        return Err(Error::invalid("C and X must be positive"));
    }
    if k <= d {
        return Err(Error::invalid("need k > d"));
    }
    let xd = x.pow(d as i32);
    let ck = c.pow((k - d) as i32);
    let h = (xd * ck).recip().floor().to_integer();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let factor = BigRational::from_integer(&h + 1) * half;
    Ok(Transference { c1: &factor * c, x1: &factor * x, h })
}

/// A nonzero `n` with `|n| <= X` and `||L(n)|| <= C`, which refutes the homogeneous premise.
pub fn homogeneous_counterexample(system: &LinearFormSystem, c: &BigRational, x: &BigRational) -> Result<Option<Vec<i64>>> {
    let max = x.floor().to_integer().to_i64().ok_or_else(|| Error::invalid("X too large"))?;
    let cs = Surd::from_rational(c);
    for n in canonical_vectors(system.d(), max) {
        if system.norm_f64(&n) > c.to_f64().unwrap_or(f64::INFINITY) + PREFILTER {
            continue;
        }
        if system.guard.cmp(&system.norm(&n), &cs, "transference premise")?.is_le() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// The first `n` with `|n| <= X1` and `||L(n) - gamma|| <= C1`, by sup-norm then lexicographic order.
pub fn inhomogeneous_witness(
    system: &LinearFormSystem,
    gamma: &[Surd],
    c1: &BigRational,
    x1: &BigRational,
) -> Result<Option<Vec<i64>>> {
    if gamma.len() != system.rows.len() {
        return Err(Error::invalid("gamma must have one entry per form"));
    }
    let max = x1.floor().to_integer().to_i64().ok_or_else(|| Error::invalid("X1 too large"))?;
    let cs = Surd::from_rational(c1);
    let cf = c1.to_f64().unwrap_or(f64::INFINITY);
    let gf: Vec<f64> = gamma.iter().map(Surd::to_f64).collect();
    let zero = vec![0; system.d()];
    let candidates = std::iter::once(zero).chain((1..=max).flat_map(|s| shell(system.d(), s, false)));
    for n in candidates {
        if system.dists_f64(&n, Some(&gf)).into_iter().fold(0.0, f64::max) > cf + PREFILTER {
            continue;
        }
        if system.guard.cmp(&system.norm_shifted(&n, gamma), &cs, "inhomogeneous bound")?.is_le() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferenceCheck {
    pub bounds: Transference,
    /// A vector refuting the premise, in which case nothing is guaranteed.
    pub premise_counterexample: Option<Vec<i64>>,
    pub witness: Option<Vec<i64>>,
}

impl TransferenceCheck {
    /// True when the premise holds and the promised witness exists.
    pub fn holds(&self) -> bool {
        self.premise_counterexample.is_none() && self.witness.is_some()
    }
}

/// Verifies the homogeneous premise for `(C, X)` and searches the promised inhomogeneous witness.
pub fn check_transference(
    system: &LinearFormSystem,
    gamma: &[Surd],
    c: &BigRational,
    x: &BigRational,
) -> Result<TransferenceCheck> {
    let bounds = transference(c, x, system.d(), system.k())?;
    let premise_counterexample = homogeneous_counterexample(system, c, x)?;
    let witness = inhomogeneous_witness(system, gamma, &bounds.c1, &bounds.x1)?;
    Ok(TransferenceCheck { bounds, premise_counterexample, witness })
}

#[cfg(test)]
mod tests;
