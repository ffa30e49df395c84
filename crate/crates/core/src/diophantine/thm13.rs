//! Slopes whose last entry is a tiny perturbation of a rational multiple of the
//! first, and the number of distinct consecutive gaps they produce.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::circle::CircleGaps;
use crate::error::{Error, Result};
use crate::exactnum::{find_relation, Guard, Real, ScalarMode, Surd};
use crate::scheme::{working_values, Omega};

fn default_bits() -> u32 {
    crate::exactnum::DEFAULT_PRECISION_BITS
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thm13Params {
    pub d: usize,
    pub epsilon: String,
    pub q: u64,
    pub p: u64,
    pub alpha1: String,
    #[serde(default)]
    pub middle: Vec<String>,
    pub gamma: String,
    #[serde(default = "default_bits")]
    pub precision_bits: u32,
}

fn parse_rational(s: &str, what: &str) -> Result<BigRational> {
    Surd::parse(s)?.to_rational().ok_or_else(|| Error::config(format!("{what} must be rational")))
}

impl Thm13Params {
    fn epsilon(&self) -> Result<BigRational> {
        let e = parse_rational(&self.epsilon, "epsilon")?;
        if !e.is_positive() {
            return Err(Error::invalid("epsilon must be positive"));
        }
        Ok(e)
    }
}

/// `(alpha_1, ..., alpha_d)` with `alpha_d = p alpha_1 / q + gamma`.
pub fn thm13_alpha(params: &Thm13Params) -> Result<Vec<Real>> {
    let d = params.d;
    if d < 2 {
        return Err(Error::invalid("d must be at least 2"));
    }
    if params.middle.len() != d - 2 {
        return Err(Error::invalid("need exactly d - 2 middle entries"));
    }
    let (p, q) = (params.p, params.q);
    if p == 0 || q == 0 || p.gcd(&q) != 1 {
        return Err(Error::invalid("p and q must be coprime positive integers"));
    }
    if 2 * p >= q {
        return Err(Error::invalid("p/q must be below 1/2"));
    }
    let eps = params.epsilon()?;
    let alpha1 = Real::parse(&params.alpha1, None)?;
    let gamma = Real::parse(&params.gamma, None)?;
    if !gamma.approx(64).is_positive() {
        return Err(Error::invalid("gamma must be positive"));
    }
    let mut alpha = vec![alpha1.clone()];
    for m in &params.middle {
        alpha.push(Real::parse(m, None)?);
    }
    let last = alpha1.scale(&BigRational::new(BigInt::from(p), BigInt::from(q))).checked_add(&gamma)?;
    alpha.push(last);
    if let Some(rel) = find_relation(&alpha) {
        return Err(Error::RelationFound { relation: rel.iter().map(|c| c.to_string()).collect() });
    }
    // gamma <= alpha_1 / q^(2d + eps)  <=>  alpha_1^b >= gamma^b q^((2d) b + a) for eps = a/b
    let (Some(ea), Some(eb)) = (eps.numer().to_u32(), eps.denom().to_u32()) else {
        return Err(Error::invalid("epsilon too large"));
    };
    let qpow = BigRational::from_integer(BigInt::from(q).pow(2 * d as u32 * eb + ea));
    let (sign_a, sign_g, fits) = match (alpha1.to_surd(), gamma.to_surd()) {
        (Ok(a), Ok(g)) if a.field() == g.field() || a.field() == 0 || g.field() == 0 => {
            let fits = a.pow(eb) >= g.pow(eb).mul_rational(&qpow);
            (a.signum(), g.signum(), fits)
        }
        _ => {
            let bits = params.precision_bits;
            let (a, g) = (alpha1.approx(bits), gamma.approx(bits));
            let fits = a.pow(eb as i32) >= g.pow(eb as i32) * &qpow;
            (a.cmp(&BigRational::zero()), g.cmp(&BigRational::zero()), fits)
        }
    };
    if !sign_a.is_gt() {
        return Err(Error::invalid("alpha_1 must be positive"));
    }
    if !sign_g.is_gt() {
        return Err(Error::invalid("gamma must be positive"));
    }
    if !fits {
        return Err(Error::invalid("gamma exceeds alpha_1 / q^(2d + epsilon)"));
    }
    Ok(alpha)
}

/// Exact values when all entries share one quadratic field, rational approximations otherwise.
fn working(alpha: &[Real], bits: u32) -> Result<(Vec<Surd>, Guard)> {
    match working_values(alpha, &ScalarMode::ExactQuadratic) {
        Ok(v) => Ok((v, Guard::exact())),
        Err(Error::MixedFields(..)) | Err(Error::Config(_)) => {
            let mode = ScalarMode::surrogate(bits);
            Ok((working_values(alpha, &mode)?, mode.guard()?))
        }
        Err(e) => Err(e),
    }
}

fn form(coeffs: &[Surd], n: &[i64]) -> Surd {
    coeffs.iter().zip(n).filter(|(_, &x)| x != 0).fold(Surd::zero(), |acc, (a, &x)| &acc + &a.mul_int(x))
}

/// Number of distinct gaps between consecutive points of `{L(n) mod 1 : n in r Omega}`.
pub fn consecutive_gap_count(coeffs: &[Surd], r: &Surd, omega: &Omega, guard: &Guard) -> Result<usize> {
    if !r.signum().is_gt() {
        return Err(Error::invalid("radius must be positive"));
    }
    if coeffs.len() != omega.dim() {
        return Err(Error::invalid("form and region dimensions differ"));
    }
    let mut circle = CircleGaps::new(Surd::one(), guard.clone());
    for n in omega.lattice_points(r, false)? {
        circle.insert(form(coeffs, &n).fract())?;
    }
    Ok(circle.distinct_gap_count())
}

/// `(c / alpha_1)^(1/d) q^(1 + eps/d)`.
pub fn thm13_radius(c: f64, alpha1: f64, q: u64, eps: f64, d: usize) -> f64 {
    let d = d as f64;
    (c / alpha1).powf(1.0 / d) * (q as f64).powf(1.0 + eps / d)
}

/// `min_r r^(d-1) q^d g(r)` over integer `r` in `1..=r_max`, where `g(r)` is the
/// smallest consecutive gap of the unperturbed values
/// `(n_1 q + n_d p) alpha_1 / q + sum_j n_j alpha_j` over `n in r Omega`.
///
/// Returns the constant and the radius attaining it.
pub fn calibrate_gap_constant(
    alpha: &[Surd],
    p: u64,
    q: u64,
    omega: &Omega,
    guard: &Guard,
    r_max: u64,
) -> Result<(Surd, u64)> {
    let d = alpha.len();
    let base = alpha[0].mul_rational(&BigRational::new(BigInt::from(1), BigInt::from(q)));
    let outer = Surd::from_int(r_max as i64);
    let mut pending: Vec<(BigRational, bool, Vec<i64>)> = omega
        .lattice_points(&outer, false)?
        .into_iter()
        .filter_map(|n| omega.entry_radius(&n).map(|(e, s)| (e, s, n)))
        .collect();
    pending.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.cmp(&a.1)).then(b.2.cmp(&a.2)));
    let mut circle = CircleGaps::new(Surd::one(), guard.clone());
    let qd = BigInt::from(q).pow(d as u32);
    let mut best: Option<(Surd, u64)> = None;
    for r in 1..=r_max {
        let rq = BigRational::from_integer(BigInt::from(r));
        while let Some((e, strict, _)) = pending.last() {
            if e > &rq || (e == &rq && *strict) {
                break;
            }
            let (_, _, n) = pending.pop().expect("nonempty");
            let m = n[0] * q as i64 + n[d - 1] * p as i64;
            let mut v = base.mul_int(m);
            for j in 1..d - 1 {
                v = &v + &alpha[j].mul_int(n[j]);
            }
            circle.insert(v.fract())?;
        }
        if circle.is_empty() {
            continue;
        }
        let (g, _) = circle.gaps().next().expect("nonempty");
        let c = g.mul_rational(&BigRational::from_integer(BigInt::from(r).pow(d as u32 - 1) * &qd));
        let better = match &best {
            None => true,
            Some((b, _)) => guard.cmp(&c, b, "gap constant")?.is_lt(),
        };
        if better {
            best = Some((c, r));
        }
    }
    best.ok_or_else(|| Error::invalid("region contains no lattice points"))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Thm13Run {
    pub q: u64,
    pub p: u64,
    pub alpha: Vec<String>,
    /// Calibrated constant, with the warm-up radius attaining it.
    pub constant: f64,
    pub calibration_radius: u64,
    pub warmup_radius: u64,
    pub r_star: f64,
    /// The rational radius actually used (`r*` rounded down to `2^-32`).
    pub radius: String,
    pub distinct_gaps: usize,
    pub bound: f64,
}

impl Thm13Run {
    pub fn pass(&self) -> bool {
        self.distinct_gaps as f64 >= self.bound
    }
}

impl Thm13Params {
    /// Builds the slopes, calibrates the gap constant by a warm-up scan reaching
    /// `r*`, and counts distinct gaps at `r*`.
    pub fn run(&self, omega: &Omega) -> Result<Thm13Run> {
        let alpha = thm13_alpha(self)?;
        if omega.dim() != self.d {
            return Err(Error::invalid("region dimension must equal d"));
        }
        let (values, guard) = working(&alpha, self.precision_bits)?;
        let eps = self.epsilon()?.to_f64().unwrap_or(f64::NAN);
        let a1 = values[0].to_f64();
        let mut warmup = thm13_radius(a1, a1, self.q, eps, self.d).ceil() as u64;
        let (c, at, r_star) = loop {
            let (c, at) = calibrate_gap_constant(&values, self.p, self.q, omega, &guard, warmup)?;
            let r_star = thm13_radius(c.to_f64(), a1, self.q, eps, self.d);
            if r_star <= warmup as f64 {
                break (c, at, r_star);
            }
            warmup = r_star.ceil() as u64;
        };
        let scale = 1u64 << 32;
        let radius = BigRational::new(BigInt::from((r_star * scale as f64).floor() as u64), BigInt::from(scale));
        let distinct_gaps = consecutive_gap_count(&values, &Surd::from_rational(&radius), omega, &guard)?;
        Ok(Thm13Run {
            q: self.q,
            p: self.p,
            alpha: alpha.iter().map(|a| a.to_string()).collect(),
            constant: c.to_f64(),
            calibration_radius: at,
            warmup_radius: warmup,
            r_star,
            radius: radius.to_string(),
            distinct_gaps,
            bound: r_star / self.q as f64,
        })
    }
}
