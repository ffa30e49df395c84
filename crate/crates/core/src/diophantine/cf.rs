//! Continued fractions of rationals and quadratic surds.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::exactnum::Surd;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuedFraction {
    /// Leading partial quotients (at most the requested depth).
    #[serde(serialize_with = "super::ser_display_all")]
    pub quotients: Vec<BigInt>,
    /// Whether the expansion ended (rational input).
    pub terminates: bool,
    /// Index where the periodic part starts, if found.
    pub period_start: Option<usize>,
    #[serde(serialize_with = "super::ser_display_all")]
    pub period: Vec<BigInt>,
}

/// States examined beyond `depth` while looking for the period.
const PERIOD_SEARCH: usize = 4096;

pub fn cf(x: &Surd, depth: usize) -> ContinuedFraction {
    match x.to_rational() {
        Some(q) => {
            let (mut p, mut d) = (q.numer().clone(), q.denom().clone());
            let mut quotients = Vec::new();
            while !d.is_zero() && quotients.len() < depth {
                let (a, r) = p.div_mod_floor(&d);
                quotients.push(a);
                p = std::mem::replace(&mut d, r);
            }
            ContinuedFraction { quotients, terminates: d.is_zero(), period_start: None, period: Vec::new() }
        }
        None => quadratic(x, depth),
    }
}

/// Expansion of `(p + sqrt(m)) / q` with `q | m - p^2`.
fn quadratic(x: &Surd, depth: usize) -> ContinuedFraction {
    let (a, b, c, d) = x.parts();
    let s = if b.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut p = &s * a;
    let mut q = &s * c;
    let mut m = b * b * BigInt::from(d);
    if !(&m - &p * &p).is_multiple_of(&q) {
        let aq = q.abs();
        p *= &aq;
        m *= &aq * &aq;
        q *= aq;
    }
    let md = m.to_u64_digits();
    let m_u64 = match md.1.as_slice() {
        [v] => *v,
        _ => panic!("radicand exceeds u64"),
    };
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut all = Vec::new();
    let mut period_start = None;
    while all.len() < depth + PERIOD_SEARCH {
        if let Some(&i) = seen.get(&(p.clone(), q.clone())) {
            period_start = Some(i);
            break;
        }
        seen.insert((p.clone(), q.clone()), all.len());
        let v = Surd::new(p.clone(), BigInt::one(), q.clone(), m_u64).expect("nonzero denominator");
        let a = v.floor();
        p = &a * &q - &p;
        q = (&m - &p * &p) / &q;
        all.push(a);
    }
    let period = match period_start {
        Some(i) => all[i..].to_vec(),
        None => Vec::new(),
    };
    if period_start.is_some() && all.len() < depth {
        let start = period_start.unwrap();
        let len = all.len() - start;
        let mut j = 0;
        while all.len() < depth {
            all.push(all[start + j % len].clone());
            j += 1;
        }
    }
    all.truncate(depth);
    ContinuedFraction { quotients: all, terminates: false, period_start, period }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn golden_ratio() {
        let f = cf(&Surd::parse("(1+1*sqrt(5))/2").unwrap(), 8);
        assert_eq!(f.quotients, ints(&[1; 8]));
        assert_eq!(f.period, ints(&[1]));
    }

    #[test]
    fn sqrt_two() {
        let f = cf(&Surd::sqrt(2), 6);
        assert_eq!(f.quotients, ints(&[1, 2, 2, 2, 2, 2]));
        assert_eq!(f.period, ints(&[2]));
        assert_eq!(f.period_start, Some(1));
    }

    #[test]
    fn rational_terminates() {
        let f = cf(&Surd::parse("7/3").unwrap(), 5);
        assert_eq!(f.quotients, ints(&[2, 3]));
        assert!(f.terminates);
    }

    #[test]
    fn negative_and_scaled() {
        // -sqrt(7)/3 = -0.8819... = [-1; 8, 2, 8, ...]
        let f = cf(&Surd::parse("(0-1*sqrt(7))/3").unwrap(), 4);
        assert_eq!(f.quotients[0], BigInt::from(-1));
        let mut back = Surd::zero();
        for a in f.quotients.iter().rev().take(f.quotients.len() - 1) {
            back = (&Surd::from_int(a.clone()) + &back).recip().unwrap();
        }
        let approx = (&Surd::from_int(f.quotients[0].clone()) + &back).to_f64();
        assert!((approx - (-(7f64).sqrt() / 3.0)).abs() < 1e-2);
        assert!(!f.period.is_empty());
    }
}
