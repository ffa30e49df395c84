//! Exact real quadratic numbers `(a + b*sqrt(D)) / c`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact element of a real quadratic field.
///
/// The representation is normalized: `c > 0`, `gcd(a, b, c) = 1`, `D` squarefree,
/// and `b = 0` exactly when `D = 0`. Equality of values is therefore equality of
/// representations, which makes `Surd` usable as a hash or ordered-map key.
///
/// The arithmetic operators panic when the operands come from two different
/// quadratic fields; use the `checked_*` methods where that can happen.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Surd {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: u64,
}

/// Splits `d` into `(s, f)` with `d = s^2 * f` and `f` squarefree.
pub fn squarefree_split(mut d: u64) -> (u64, u64) {
    if d == 0 {
        return (1, 0);
    }
    let mut s = 1u64;
    let mut f = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= d {
        let mut e = 0;
        while d % p == 0 {
            d /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            f *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (s, f * d)
}

fn merge_field(x: u64, y: u64) -> Result<u64> {
    match (x, y) {
        (0, y) => Ok(y),
        (x, 0) => Ok(x),
        (x, y) if x == y => Ok(x),
        (x, y) => Err(Error::MixedFields(x, y)),
    }
}

/// Sign of `a + b*sqrt(d)` for squarefree `d`.
fn quad_sign(a: &BigInt, b: &BigInt, d: u64) -> Ordering {
    let sa = a.sign();
    let sb = if d == 0 { Sign::NoSign } else { b.sign() };
    let to_ord = |s: Sign| match s {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    };
    if sb == Sign::NoSign {
        return to_ord(sa);
    }
    if sa == Sign::NoSign || sa == sb {
        return to_ord(sb);
    }
    // opposite signs: compare a^2 with b^2 d
    let lhs = a * a;
    let rhs = b * b * BigInt::from(d);
    match lhs.cmp(&rhs) {
        Ordering::Greater => to_ord(sa),
        Ordering::Less => to_ord(sb),
        // d squarefree and b != 0 makes this impossible
        Ordering::Equal => Ordering::Equal,
    }
}

impl Surd {
    /// Builds `(a + b*sqrt(d)) / c` and normalizes it.
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: u64) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(a, b, c, d))
    }

    fn normalized(a: BigInt, mut b: BigInt, c: BigInt, d: u64) -> Self {
        let (s, f) = squarefree_split(d);
        if s != 1 {
            b *= BigInt::from(s);
        }
        Self::reduce(a, b, c, f)
    }

    /// Like `normalized`, for a radicand already known to be squarefree (or 1).
    fn reduce(mut a: BigInt, mut b: BigInt, mut c: BigInt, mut d: u64) -> Self {
        if d == 1 {
            a += &b;
            b = BigInt::zero();
            d = 0;
        }
        if b.is_zero() {
            d = 0;
        }
        if d == 0 {
            b = BigInt::zero();
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() && !g.is_zero() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        Surd { a, b, c, d }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Surd { a: n.into(), b: BigInt::zero(), c: BigInt::one(), d: 0 }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::reduce(q.numer().clone(), BigInt::zero(), q.denom().clone(), 0)
    }

    /// `sqrt(d)` for a non-negative integer `d`.
    pub fn sqrt(d: u64) -> Self {
        Self::normalized(BigInt::zero(), BigInt::one(), BigInt::one(), d)
    }

    pub fn parts(&self) -> (&BigInt, &BigInt, &BigInt, u64) {
        (&self.a, &self.b, &self.c, self.d)
    }

    /// Radicand of the field this number lives in; 0 for rationals.
    pub fn field(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.d == 0
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.d == 0 && self.c.is_one()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.a.clone(), self.c.clone()))
    }

    /// Rational part and coefficient of `sqrt(D)`.
    pub fn rational_parts(&self) -> (BigRational, BigRational) {
        (
            BigRational::new(self.a.clone(), self.c.clone()),
            BigRational::new(self.b.clone(), self.c.clone()),
        )
    }

    pub fn signum(&self) -> Ordering {
        quad_sign(&self.a, &self.b, self.d)
    }

    pub fn abs(&self) -> Surd {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    pub fn checked_add(&self, o: &Surd) -> Result<Surd> {
        let d = merge_field(self.d, o.d)?;
        if self.c == o.c {
            return Ok(Self::reduce(&self.a + &o.a, &self.b + &o.b, self.c.clone(), d));
        }
        Ok(Self::reduce(
            &self.a * &o.c + &o.a * &self.c,
            &self.b * &o.c + &o.b * &self.c,
            &self.c * &o.c,
            d,
        ))
    }

    pub fn checked_sub(&self, o: &Surd) -> Result<Surd> {
        self.checked_add(&-o)
    }

    pub fn checked_mul(&self, o: &Surd) -> Result<Surd> {
        let d = merge_field(self.d, o.d)?;
        let a = &self.a * &o.a + &self.b * &o.b * BigInt::from(d);
        let b = &self.a * &o.b + &self.b * &o.a;
        Ok(Self::reduce(a, b, &self.c * &o.c, d))
    }

    pub fn recip(&self) -> Result<Surd> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // c / (a + b r) = c (a - b r) / (a^2 - b^2 D)
        let norm = &self.a * &self.a - &self.b * &self.b * BigInt::from(self.d);
        if norm.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(&self.c * &self.a, -(&self.c * &self.b), norm, self.d))
    }

    pub fn checked_div(&self, o: &Surd) -> Result<Surd> {
        self.checked_mul(&o.recip()?)
    }

    pub fn mul_int(&self, n: i64) -> Surd {
        if n == 0 {
            return Surd::zero();
        }
        let n = BigInt::from(n);
        Self::reduce(&self.a * &n, &self.b * &n, self.c.clone(), self.d)
    }

    pub fn mul_rational(&self, q: &BigRational) -> Surd {
        Self::reduce(
            &self.a * q.numer(),
            &self.b * q.numer(),
            &self.c * q.denom(),
            self.d,
        )
    }

    pub fn add_rational(&self, q: &BigRational) -> Surd {
        Self::reduce(
            &self.a * q.denom() + q.numer() * &self.c,
            &self.b * q.denom(),
            &self.c * q.denom(),
            self.d,
        )
    }

    pub fn pow(&self, e: u32) -> Surd {
        let mut acc = Surd::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Exact three-way comparison of real values.
    pub fn try_cmp(&self, o: &Surd) -> Result<Ordering> {
        let d = merge_field(self.d, o.d)?;
        if self.c == o.c {
            return Ok(quad_sign(&(&self.a - &o.a), &(&self.b - &o.b), d));
        }
        let a = &self.a * &o.c - &o.a * &self.c;
        let b = &self.b * &o.c - &o.b * &self.c;
        Ok(quad_sign(&a, &b, d))
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        if self.d == 0 {
            return self.a.div_floor(&self.c);
        }
        // numerator lies strictly inside (l, l + 1)
        let s = (&self.b * &self.b * BigInt::from(self.d)).sqrt();
        let l = if self.b.is_positive() { &self.a + s } else { &self.a - s - 1 };
        l.div_floor(&self.c)
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// `x - floor(x)`, in `[0, 1)`.
    pub fn fract(&self) -> Surd {
        let f = self.floor();
        if f.is_zero() {
            return self.clone();
        }
        Self::reduce(&self.a - f * &self.c, self.b.clone(), self.c.clone(), self.d)
    }

    /// `x - m * floor(x / m)`, in `[0, m)`.
    pub fn frac_mod(&self, m: &BigRational) -> Result<Surd> {
        if !m.is_positive() {
            return Err(Error::invalid("modulus must be positive"));
        }
        let q = self.mul_rational(&m.recip()).floor();
        Ok(self.add_rational(&(-(m * BigRational::from_integer(q)))))
    }

    /// Distance to the nearest integer.
    pub fn dist_to_int(&self) -> Surd {
        let f = self.fract();
        let g = Surd::one() - &f;
        if f <= g {
            f
        } else {
            g
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let c = self.c.to_f64().unwrap_or(f64::NAN);
        if c.is_finite() && a.is_finite() && b.is_finite() {
            return (a + b * (self.d as f64).sqrt()) / c;
        }
        // huge surrogate rationals: go through a fixed-point decimal
        self.to_decimal(20).parse().unwrap_or(f64::NAN)
    }

    /// Decimal expansion rounded to `digits` places after the point.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = self.mul_rational(&BigRational::from_integer(scale.clone()));
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let n = scaled.add_rational(&half).floor();
        let neg = n.is_negative();
        let n = n.abs();
        let (int, frac) = n.div_rem(&scale);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
        }
    }

    /// The Galois conjugate `(a - b*sqrt(D))/c`.
    pub fn conjugate(&self) -> Surd {
        Surd { a: self.a.clone(), b: -&self.b, c: self.c.clone(), d: self.d }
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Panics when the two values come from different quadratic fields.
impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        self.try_cmp(other).expect("ordering across quadratic fields")
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&Surd> for &Surd {
            type Output = Surd;
            fn $m(self, rhs: &Surd) -> Surd {
                self.$checked(rhs).expect(concat!("Surd::", stringify!($m)))
            }
        }
        impl $tr<Surd> for Surd {
            type Output = Surd;
            fn $m(self, rhs: Surd) -> Surd {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Surd> for Surd {
            type Output = Surd;
            fn $m(self, rhs: &Surd) -> Surd {
                (&self).$m(rhs)
            }
        }
        impl $tr<Surd> for &Surd {
            type Output = Surd;
            fn $m(self, rhs: Surd) -> Surd {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { a: -&self.a, b: -&self.b, c: self.c.clone(), d: self.d }
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { a: -self.a, b: -self.b, c: self.c, d: self.d }
    }
}

impl From<i64> for Surd {
    fn from(n: i64) -> Self {
        Surd::from_int(n)
    }
}

impl From<BigRational> for Surd {
    fn from(q: BigRational) -> Self {
        Surd::from_rational(&q)
    }
}

/// Canonical literal: `p`, `p/q`, or `(a+b*sqrt(D))/c`.
impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 0 {
            if self.c.is_one() {
                write!(f, "{}", self.a)
            } else {
                write!(f, "{}/{}", self.a, self.c)
            }
        } else {
            let sign = if self.b.is_negative() { '-' } else { '+' };
            write!(f, "({}{}{}*sqrt({}))/{}", self.a, sign, self.b.abs(), self.d, self.c)
        }
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { position: self.pos, message: msg.to_string() })
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.s[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            Ok(())
        } else {
            self.err(&format!("expected `{lit}`"))
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        Ok(txt.parse().expect("digits parse"))
    }

    fn signed(&mut self) -> Result<BigInt> {
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
        }
        let v = self.digits()?;
        Ok(if neg { -v } else { v })
    }
}

impl Surd {
    /// Parses a literal `p`, `p/q` or `(a+b*sqrt(D))/c` (the `/c` may be omitted).
    pub fn parse(s: &str) -> Result<Surd> {
        let mut cur = Cursor { s: s.as_bytes(), pos: 0 };
        let value = if cur.peek() == Some(b'(') {
            cur.pos += 1;
            let a = cur.signed()?;
            let neg = match cur.peek() {
                Some(b'+') => false,
                Some(b'-') => true,
                _ => return cur.err("expected `+` or `-`"),
            };
            cur.pos += 1;
            let b = cur.digits()?;
            cur.expect("*sqrt(")?;
            let d_pos = cur.pos;
            let d = cur.digits()?;
            let d = d.to_u64().ok_or(Error::Parse {
                position: d_pos,
                message: "radicand too large".into(),
            })?;
            cur.expect("))")?;
            let c = if cur.peek() == Some(b'/') {
                cur.pos += 1;
                cur.digits()?
            } else {
                BigInt::one()
            };
            if c.is_zero() {
                return cur.err("zero denominator");
            }
            Surd::normalized(a, if neg { -b } else { b }, c, d)
        } else {
            let p = cur.signed()?;
            let q = if cur.peek() == Some(b'/') {
                cur.pos += 1;
                cur.digits()?
            } else {
                BigInt::one()
            };
            if q.is_zero() {
                return cur.err("zero denominator");
            }
            Surd::normalized(p, BigInt::zero(), q, 0)
        };
        if cur.pos != s.len() {
            return cur.err("trailing characters");
        }
        Ok(value)
    }
}

impl FromStr for Surd {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Surd::parse(s)
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Surd {
        Surd::parse(x).unwrap()
    }

    #[test]
    fn golden_ratio_exceeds_three_halves() {
        assert_eq!(s("(1+1*sqrt(5))/2").try_cmp(&s("3/2")).unwrap(), Ordering::Greater);
        let x = s("(1+1*sqrt(5))/2");
        assert_eq!(x.try_cmp(&x).unwrap(), Ordering::Equal);
    }

    #[test]
    fn mixed_fields_rejected() {
        let err = s("(0+1*sqrt(2))/1").try_cmp(&s("(0+1*sqrt(3))/1")).unwrap_err();
        assert_eq!(err, Error::MixedFields(2, 3));
    }

    #[test]
    fn frac_mod_examples() {
        let one = rat(1, 1);
        let x = s("(-1+1*sqrt(5))/2");
        assert_eq!(x.frac_mod(&one).unwrap(), x);
        let y = s("(-3+3*sqrt(5))/2").frac_mod(&one).unwrap();
        assert_eq!(y, s("(-5+3*sqrt(5))/2"));
        assert_eq!(y.to_decimal(3), "0.854");
        assert_eq!(s("7/2").frac_mod(&rat(1, 2)).unwrap(), Surd::zero());
    }

    #[test]
    fn normalization_is_canonical() {
        assert_eq!(s("(2+2*sqrt(20))/4"), s("(1+2*sqrt(5))/2"));
        assert_eq!(s("(3+1*sqrt(4))/5"), Surd::one());
        assert_eq!(s("4/6").to_string(), "2/3");
        assert_eq!(s("(-1+1*sqrt(5))/2").to_string(), "(-1+1*sqrt(5))/2");
        assert_eq!(s("(1-1*sqrt(5))").to_string(), "(1-1*sqrt(5))/1");
    }

    #[test]
    fn parse_errors_carry_position() {
        match Surd::parse("(1+2*sqrt(5)/2") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 11),
            other => panic!("{other:?}"),
        }
        assert!(matches!(Surd::parse("1/0"), Err(Error::Parse { .. })));
        assert!(matches!(Surd::parse("abc"), Err(Error::Parse { position: 0, .. })));
    }

    #[test]
    fn floor_of_irrationals() {
        assert_eq!(s("(1+1*sqrt(5))/2").floor(), BigInt::from(1));
        assert_eq!(s("(-1-1*sqrt(5))/2").floor(), BigInt::from(-2));
        assert_eq!(s("(0-1*sqrt(2))/1").floor(), BigInt::from(-2));
        assert_eq!(s("-7/2").floor(), BigInt::from(-4));
    }

    #[test]
    fn reciprocal_and_division() {
        let phi = s("(1+1*sqrt(5))/2");
        assert_eq!(&phi.recip().unwrap() + &Surd::one(), phi);
        assert_eq!(&phi / &phi, Surd::one());
        assert!(Surd::zero().recip().is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(s("(-1+1*sqrt(5))/2").to_decimal(6), "0.618034");
        assert_eq!(s("-1/3").to_decimal(3), "-0.333");
        assert_eq!(s("5").to_decimal(0), "5");
    }
}
