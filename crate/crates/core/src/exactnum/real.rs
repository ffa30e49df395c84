//! Exact input numbers that may mix several quadratic fields and one cubic field.
//!
//! A [`Real`] is a rational linear combination of basis elements `1`, `sqrt(D)`
//! (distinct squarefree `D`) and `t`, `t^2`, where `t` is a root of a declared
//! irreducible cubic. These are linearly independent over the rationals, so
//! integer relations among reals reduce to exact rational linear algebra.
//! Only linear operations are supported; products are done after conversion to
//! a working [`Surd`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::linalg::{nullspace, primitive_integer};
use super::surd::squarefree_split;
use super::Surd;
use crate::error::{Error, Result};

/// A real root of an irreducible integer cubic, isolated by a rational interval.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CubicGenerator {
    /// Coefficients from the constant term upwards (length 4).
    pub poly: Vec<i64>,
    pub lo: String,
    pub hi: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    One,
    Sqrt(u64),
    Gen(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Real {
    terms: BTreeMap<Basis, BigRational>,
    gen: Option<Arc<CubicGenerator>>,
}

fn parse_rational(s: &str, offset: usize) -> Result<BigRational> {
    let bad = |message: &str| Error::Parse { position: offset, message: message.into() };
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: BigInt = p.trim().parse().map_err(|_| bad("expected rational"))?;
    let q: BigInt = q.trim().parse().map_err(|_| bad("expected rational"))?;
    if q.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(BigRational::new(p, q))
}

impl CubicGenerator {
    pub fn validate(&self) -> Result<()> {
        if self.poly.len() != 4 || self.poly[3] == 0 {
            return Err(Error::config("generator polynomial must be a cubic (4 coefficients)"));
        }
        let (lo, hi) = self.interval()?;
        if lo >= hi {
            return Err(Error::config("generator interval is empty"));
        }
        let (fl, fh) = (self.eval(&lo), self.eval(&hi));
        if fl.is_zero() || fh.is_zero() || fl.signum() == fh.signum() {
            return Err(Error::config("generator interval does not isolate a sign change"));
        }
        // a cubic is irreducible over Q iff it has no rational root
        let c0 = BigInt::from(self.poly[0]);
        let c3 = BigInt::from(self.poly[3]);
        if c0.is_zero() {
            return Err(Error::config("generator polynomial has the rational root 0"));
        }
        for p in divisors(&c0.abs()) {
            for q in divisors(&c3.abs()) {
                for sp in [p.clone(), -p.clone()] {
                    if self.eval(&BigRational::new(sp, q.clone())).is_zero() {
                        return Err(Error::config("generator polynomial is reducible over Q"));
                    }
                }
            }
        }
        Ok(())
    }

    fn interval(&self) -> Result<(BigRational, BigRational)> {
        Ok((parse_rational(&self.lo, 0)?, parse_rational(&self.hi, 0)?))
    }

    fn eval(&self, x: &BigRational) -> BigRational {
        self.poly
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, &c| acc * x + BigRational::from_integer(c.into()))
    }

    /// Root approximation with error below `2^-bits`, by bisection.
    pub fn root(&self, bits: u32) -> BigRational {
        let (mut lo, mut hi) = self.interval().expect("validated generator");
        let lo_sign = self.eval(&lo).signum();
        let eps = BigRational::new(BigInt::one(), BigInt::one() << bits);
        let two = BigRational::from_integer(2.into());
        while &hi - &lo > eps {
            let mid = (&lo + &hi) / &two;
            let v = self.eval(&mid);
            if v.is_zero() {
                return mid;
            }
            if v.signum() == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    pub fn approx_f64(&self) -> f64 {
        let r = self.root(60);
        r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.to_u64().expect("small coefficient");
    (1..=n).filter(|d| n % d == 0).map(BigInt::from).collect()
}

/// `isqrt(d * 4^k) / 2^k`, an under-approximation of `sqrt(d)` within `2^-k`.
fn sqrt_approx(d: u64, k: u32) -> BigRational {
    let scaled = BigInt::from(d) << (2 * k);
    BigRational::new(scaled.sqrt(), BigInt::one() << k)
}

impl Real {
    pub fn from_rational(q: BigRational) -> Real {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(Basis::One, q);
        }
        Real { terms, gen: None }
    }

    pub fn from_int(n: i64) -> Real {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_surd(s: &Surd) -> Real {
        let (r, i) = s.rational_parts();
        let mut out = Self::from_rational(r);
        if !i.is_zero() {
            out.terms.insert(Basis::Sqrt(s.field()), i);
        }
        out
    }

    /// `t^power` for the declared generator (`power` in 1..=2).
    pub fn generator_power(gen: &Arc<CubicGenerator>, power: u32) -> Real {
        let mut terms = BTreeMap::new();
        terms.insert(Basis::Gen(power), BigRational::one());
        Real { terms, gen: Some(gen.clone()) }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Basis, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, b: Basis) -> BigRational {
        self.terms.get(&b).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|b| *b == Basis::One)
    }

    fn merge_gen(&self, o: &Real) -> Result<Option<Arc<CubicGenerator>>> {
        match (&self.gen, &o.gen) {
            (Some(a), Some(b)) if a != b => Err(Error::config("at most one cubic generator is supported")),
            (Some(a), _) => Ok(Some(a.clone())),
            (_, b) => Ok(b.clone()),
        }
    }

    pub fn checked_add(&self, o: &Real) -> Result<Real> {
        let gen = self.merge_gen(o)?;
        let mut terms = self.terms.clone();
        for (b, q) in &o.terms {
            let v = terms.remove(b).unwrap_or_else(BigRational::zero) + q;
            if !v.is_zero() {
                terms.insert(*b, v);
            }
        }
        let gen = if terms.keys().any(|b| matches!(b, Basis::Gen(_))) { gen } else { None };
        Ok(Real { terms, gen })
    }

    pub fn scale(&self, q: &BigRational) -> Real {
        if q.is_zero() {
            return Real::from_int(0);
        }
        Real {
            terms: self.terms.iter().map(|(b, v)| (*b, v * q)).collect(),
            gen: self.gen.clone(),
        }
    }

    pub fn neg(&self) -> Real {
        self.scale(&-BigRational::one())
    }

    /// Exact conversion when only one quadratic field is involved.
    pub fn to_surd(&self) -> Result<Surd> {
        let mut out = Surd::from_rational(&self.coefficient(Basis::One));
        for (b, q) in &self.terms {
            match b {
                Basis::One => {}
                Basis::Sqrt(d) => {
                    out = out.checked_add(&Surd::sqrt(*d).mul_rational(q))?;
                }
                Basis::Gen(_) => {
                    return Err(Error::config(
                        "cubic numbers need the rational-surrogate scalar mode",
                    ))
                }
            }
        }
        Ok(out)
    }

    /// Rational approximation with absolute error below `2^-bits`.
    pub fn approx(&self, bits: u32) -> BigRational {
        let guard = bits + 8 + self.terms.len() as u32;
        let mut acc = BigRational::zero();
        for (b, q) in &self.terms {
            let extra = q.abs().ceil().to_integer().bits() as u32 + 4;
            let v = match b {
                Basis::One => BigRational::one(),
                Basis::Sqrt(d) => sqrt_approx(*d, guard + extra),
                Basis::Gen(p) => {
                    let gen = self.gen.as_ref().expect("generator attached");
                    gen.root(guard + extra + 4).pow(*p as i32)
                }
            };
            acc += q * v;
        }
        // round onto the dyadic grid so every surrogate value has a short numerator
        let scale = BigInt::one() << bits;
        let n = (acc * BigRational::from_integer(scale.clone()) + BigRational::new(1.into(), 2.into()))
            .floor()
            .to_integer();
        BigRational::new(n, scale)
    }

    pub fn to_f64(&self) -> f64 {
        let q = self.approx(64);
        q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
    }

    /// Parses a linear combination such as `(-1+1*sqrt(5))/2 + 3/4*sqrt(2) - t^2 + 1`.
    ///
    /// Terms are separated by top-level `+`/`-`; each term is a surd literal, a
    /// rational, or `[q*]sqrt(D)` / `[q*]t[^e]` (the latter needs a generator).
    pub fn parse(s: &str, gen: Option<&Arc<CubicGenerator>>) -> Result<Real> {
        let bytes = s.as_bytes();
        let mut pieces = Vec::new();
        let mut depth = 0i32;
        let mut start = 0usize;
        for (i, &ch) in bytes.iter().enumerate() {
            match ch {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if depth == 0 && i > start && !matches!(bytes[i - 1], b'*' | b'^' | b'/') => {
                    pieces.push((start, &s[start..i]));
                    start = i;
                }
                _ => {}
            }
        }
        pieces.push((start, &s[start..]));
        let mut out = Real::from_int(0);
        for (offset, piece) in pieces {
            let lead = piece.len() - piece.trim_start().len();
            let term = Self::parse_term(piece.trim(), offset + lead, gen)?;
            out = out.checked_add(&term)?;
        }
        Ok(out)
    }

    fn parse_term(t: &str, offset: usize, gen: Option<&Arc<CubicGenerator>>) -> Result<Real> {
        if t.is_empty() {
            return Err(Error::Parse { position: offset, message: "empty term".into() });
        }
        let (sign, rest, rest_off) = match t.as_bytes()[0] {
            b'+' => (1, &t[1..], offset + 1),
            b'-' => (-1, &t[1..], offset + 1),
            _ => (1, t, offset),
        };
        let body = rest.trim_start();
        let body_off = rest_off + (rest.len() - body.len());
        let sign = BigRational::from_integer(sign.into());
        let top_star = if body.starts_with('(') { None } else { body.find('*') };
        let (coef, atom, atom_off) = match top_star {
            Some(star) => {
                let atom = &body[star + 1..];
                let trimmed = atom.trim_start();
                let off = body_off + star + 1 + (atom.len() - trimmed.len());
                (parse_rational(body[..star].trim(), body_off)?, trimmed, off)
            }
            None => (BigRational::one(), body, body_off),
        };
        let coef = coef * sign;
        if let Some(rest) = atom.strip_prefix("sqrt(") {
            let inner = rest.strip_suffix(')').ok_or(Error::Parse {
                position: atom_off + atom.len(),
                message: "expected `)`".into(),
            })?;
            let d: u64 = inner.trim().parse().map_err(|_| Error::Parse {
                position: atom_off + 5,
                message: "expected radicand".into(),
            })?;
            let (s, f) = squarefree_split(d);
            let coef = coef * BigRational::from_integer(s.into());
            let r = Real::from_rational(BigRational::one());
            return Ok(if f == 1 {
                r.scale(&coef)
            } else if f == 0 {
                Real::from_int(0)
            } else {
                let mut terms = BTreeMap::new();
                terms.insert(Basis::Sqrt(f), coef);
                Real { terms, gen: None }
            });
        }
        if let Some(rest) = atom.strip_prefix('t') {
            let gen = gen.ok_or(Error::Parse {
                position: atom_off,
                message: "`t` used without a declared generator".into(),
            })?;
            let power: u32 = match rest.strip_prefix('^') {
                None if rest.is_empty() => 1,
                Some(e) => e.trim().parse().map_err(|_| Error::Parse {
                    position: atom_off + 2,
                    message: "expected exponent".into(),
                })?,
                None => {
                    return Err(Error::Parse { position: atom_off + 1, message: "unexpected characters".into() })
                }
            };
            return match power {
                0 => Ok(Real::from_rational(coef)),
                1 | 2 => Ok(Real::generator_power(gen, power).scale(&coef)),
                _ => Err(Error::Parse { position: atom_off, message: "only t and t^2 are basis elements".into() }),
            };
        }
        let surd = Surd::parse(atom).map_err(|e| match e {
            Error::Parse { position, message } => Error::Parse { position: position + atom_off, message },
            other => other,
        })?;
        Ok(Real::from_surd(&surd).scale(&coef))
    }
}

impl fmt::Display for Real {
    /// A single surd literal when possible, otherwise `q*sqrt(D)` / `q*t^e` terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Ok(s) = self.to_surd() {
            return write!(f, "{s}");
        }
        let mut first = true;
        for (b, q) in &self.terms {
            let neg = q.is_negative();
            let mag = q.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match b {
                Basis::One => write!(f, "{mag}")?,
                Basis::Sqrt(d) => write!(f, "{mag}*sqrt({d})")?,
                Basis::Gen(1) => write!(f, "{mag}*t")?,
                Basis::Gen(p) => write!(f, "{mag}*t^{p}")?,
            }
        }
        Ok(())
    }
}

/// Exact integer relations `c_0 + c_1 x_1 + ... + c_n x_n = 0`.
///
/// Returns `None` when `{1, x_1, ..., x_n}` is linearly independent over Q, and
/// otherwise a primitive integer relation `(c_0, ..., c_n)`.
pub fn find_relation(values: &[Real]) -> Option<Vec<BigInt>> {
    let mut cols = vec![Real::from_int(1)];
    cols.extend(values.iter().cloned());
    let mut basis: Vec<Basis> = cols.iter().flat_map(|v| v.terms.keys().copied()).collect();
    basis.sort();
    basis.dedup();
    let matrix: Vec<Vec<BigRational>> = basis
        .iter()
        .map(|b| cols.iter().map(|v| v.coefficient(*b)).collect())
        .collect();
    let ns = nullspace(&matrix, cols.len());
    ns.first().map(|v| primitive_integer(v))
}

/// Integer combinations `v` (nonzero) with every `sum_i v_i x_{ij}` rational.
///
/// `columns[j]` holds the reals `x_{1j}, ..., x_{nj}`.
pub fn rational_combination(columns: &[Vec<Real>]) -> Option<Vec<BigInt>> {
    let n = columns.first().map_or(0, |c| c.len());
    let mut rows = Vec::new();
    for col in columns {
        let mut basis: Vec<Basis> = col.iter().flat_map(|v| v.terms.keys().copied()).collect();
        basis.sort();
        basis.dedup();
        for b in basis.into_iter().filter(|b| *b != Basis::One) {
            rows.push(col.iter().map(|v| v.coefficient(b)).collect::<Vec<_>>());
        }
    }
    if rows.is_empty() {
        return (n > 0).then(|| {
            let mut v = vec![BigInt::zero(); n];
            v[0] = BigInt::one();
            v
        });
    }
    nullspace(&rows, n).first().map(|v| primitive_integer(v))
}
