//! Bounded convex regions given by halfspaces, scaled by a radius.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::linalg::{nullspace, rational_inverse, rat_int};
use crate::exactnum::{Guard, Surd};

/// `normal . x <= offset` (or `<` when strict), scaled to `normal . x <= r * offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vec<BigRational>,
    pub offset: BigRational,
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "kebab-case")]
pub enum OmegaConfig {
    /// The open cube `(-1, 1)^d`.
    Hypercube,
    /// The closed cube `[-1, 1]^d`.
    ClosedHypercube,
    /// `{x in (0,1]^d : x_d + 2 x_1 <= 1}`, optionally translated.
    Thm13Region {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        translate: Option<Vec<String>>,
    },
    Halfspaces { halfspaces: Vec<HalfspaceConfig> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfspaceConfig {
    pub normal: Vec<String>,
    pub offset: String,
    #[serde(default)]
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Omega {
    d: usize,
    halfspaces: Vec<Halfspace>,
    lo: Vec<BigRational>,
    hi: Vec<BigRational>,
}

fn parse_q(s: &str) -> Result<BigRational> {
    Surd::parse(s)?
        .to_rational()
        .ok_or_else(|| Error::config(format!("`{s}` is not rational")))
}

/// Subsets of `0..n` of size `k`, lexicographic.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Omega {
    pub fn from_config(cfg: &OmegaConfig, d: usize) -> Result<Omega> {
        let unit = |i: usize, s: i64| -> Vec<BigRational> {
            (0..d).map(|j| if i == j { rat_int(s) } else { BigRational::zero() }).collect()
        };
        let halfspaces = match cfg {
            OmegaConfig::Hypercube | OmegaConfig::ClosedHypercube => {
                let strict = matches!(cfg, OmegaConfig::Hypercube);
                (0..d)
                    .flat_map(|i| {
                        [1, -1].map(|s| Halfspace { normal: unit(i, s), offset: BigRational::one(), strict })
                    })
                    .collect()
            }
            OmegaConfig::Thm13Region { translate } => {
                let t: Vec<BigRational> = match translate {
                    Some(v) if v.len() == d => v.iter().map(|s| parse_q(s)).collect::<Result<_>>()?,
                    Some(_) => return Err(Error::config("translate must have d entries")),
                    None => vec![BigRational::zero(); d],
                };
                let mut hs = Vec::new();
                for i in 0..d {
                    hs.push(Halfspace { normal: unit(i, -1), offset: BigRational::zero(), strict: true });
                    hs.push(Halfspace { normal: unit(i, 1), offset: BigRational::one(), strict: false });
                }
                let mut n = vec![BigRational::zero(); d];
                n[d - 1] += rat_int(1);
                n[0] += rat_int(2);
                hs.push(Halfspace { normal: n, offset: BigRational::one(), strict: false });
                for h in hs.iter_mut() {
                    h.offset = &h.offset + dot(&h.normal, &t);
                }
                hs
            }
            OmegaConfig::Halfspaces { halfspaces } => halfspaces
                .iter()
                .map(|h| {
                    if h.normal.len() != d {
                        return Err(Error::config("halfspace normal must have d entries"));
                    }
                    Ok(Halfspace {
                        normal: h.normal.iter().map(|s| parse_q(s)).collect::<Result<_>>()?,
                        offset: parse_q(&h.offset)?,
                        strict: h.strict,
                    })
                })
                .collect::<Result<_>>()?,
        };
        Self::new(d, halfspaces)
    }

    pub fn new(d: usize, halfspaces: Vec<Halfspace>) -> Result<Omega> {
        if d == 0 || halfspaces.iter().any(|h| h.normal.len() != d) {
            return Err(Error::config("halfspace dimensions do not match"));
        }
        let normals: Vec<Vec<BigRational>> = halfspaces.iter().map(|h| h.normal.clone()).collect();
        // bounded iff the recession cone {y : N y <= 0} is {0}
        if nullspace(&normals, d).len() > 0 {
            return Err(Error::config("region is unbounded"));
        }
        for rows in subsets(halfspaces.len(), d - 1) {
            let sub: Vec<Vec<BigRational>> = rows.iter().map(|&i| normals[i].clone()).collect();
            let ns = if d == 1 { vec![vec![BigRational::one()]] } else { nullspace(&sub, d) };
            if ns.len() != 1 {
                continue;
            }
            let y = &ns[0];
            for s in [1, -1] {
                let ys: Vec<BigRational> = y.iter().map(|v| v * rat_int(s)).collect();
                if normals.iter().all(|n| !dot(n, &ys).is_positive()) {
                    return Err(Error::config("region is unbounded"));
                }
            }
        }
        // vertices: feasible intersections of d boundary hyperplanes
        let mut vertices = Vec::new();
        for rows in subsets(halfspaces.len(), d) {
            let sub: Vec<Vec<BigRational>> = rows.iter().map(|&i| normals[i].clone()).collect();
            let Some(inv) = rational_inverse(&sub) else { continue };
            let rhs: Vec<BigRational> = rows.iter().map(|&i| halfspaces[i].offset.clone()).collect();
            let v: Vec<BigRational> = inv.iter().map(|row| dot(row, &rhs)).collect();
            if halfspaces.iter().all(|h| dot(&h.normal, &v) <= h.offset) {
                vertices.push(v);
            }
        }
        if vertices.is_empty() {
            return Err(Error::config("region is empty"));
        }
        let n = rat_int(vertices.len() as i64);
        let centroid: Vec<BigRational> =
            (0..d).map(|j| vertices.iter().map(|v| v[j].clone()).sum::<BigRational>() / &n).collect();
        if halfspaces.iter().any(|h| dot(&h.normal, &centroid) >= h.offset) {
            return Err(Error::config("region has no interior point"));
        }
        let lo = (0..d).map(|j| vertices.iter().map(|v| v[j].clone()).min().unwrap()).collect();
        let hi = (0..d).map(|j| vertices.iter().map(|v| v[j].clone()).max().unwrap()).collect();
        Ok(Omega { d, halfspaces, lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    /// Bounding box of the unscaled region.
    pub fn bounds(&self) -> (&[BigRational], &[BigRational]) {
        (&self.lo, &self.hi)
    }

    /// Whether `x` lies in `r * Omega` (with `0 * Omega = {0}`).
    pub fn contains(&self, x: &[Surd], r: &Surd, guard: &Guard) -> Result<bool> {
        if r.is_zero() {
            return Ok(x.iter().all(|v| v.is_zero()));
        }
        for h in &self.halfspaces {
            let mut s = Surd::zero();
            for (n, v) in h.normal.iter().zip(x) {
                if !n.is_zero() {
                    s = s.checked_add(&v.mul_rational(n))?;
                }
            }
            let bound = r.mul_rational(&h.offset);
            let ord = guard.cmp(&s, &bound, "region boundary")?;
            let inside = if h.strict { ord.is_lt() } else { ord.is_le() };
            if !inside {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains_int(&self, x: &[i64], r: &Surd) -> Result<bool> {
        let v: Vec<Surd> = x.iter().map(|&c| Surd::from_int(c)).collect();
        self.contains(&v, r, &Guard::exact())
    }

    /// Integer box `[lo, hi]` per coordinate covering `r * Omega` widened by `pad`.
    pub fn int_box(&self, r: &Surd, pad: &Surd, negate: bool) -> Vec<(i64, i64)> {
        (0..self.d)
            .map(|j| {
                let (mut a, mut b) = (r.mul_rational(&self.lo[j]), r.mul_rational(&self.hi[j]));
                if negate {
                    (a, b) = (-&b, -&a);
                }
                let lo = (&a - pad).floor().to_i64().expect("box fits i64");
                let hi = (&b + pad).ceil().to_i64().expect("box fits i64");
                (lo, hi)
            })
            .collect()
    }

    /// Integer points of `r * Omega` (or of `-r * Omega`), lexicographic.
    pub fn lattice_points(&self, r: &Surd, negate: bool) -> Result<Vec<Vec<i64>>> {
        let boxes = self.int_box(r, &Surd::zero(), negate);
        let mut out = Vec::new();
        for p in box_points(&boxes) {
            let q: Vec<i64> = if negate { p.iter().map(|v| -v).collect() } else { p.clone() };
            if self.contains_int(&q, r)? {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// Smallest `rho >= 0` with `x` in `r * Omega` for every `r > rho`, and whether
    /// `r = rho` itself is excluded; `None` when no positive multiple contains `x`.
    ///
    /// Membership is monotone in `r` only when every offset is nonnegative; `None` is
    /// also returned for regions violating that.
    pub fn entry_radius(&self, x: &[i64]) -> Option<(BigRational, bool)> {
        let mut best = BigRational::zero();
        let mut strict = false;
        for h in &self.halfspaces {
            let dot: BigRational =
                h.normal.iter().zip(x).map(|(a, &v)| a * BigRational::from_integer(BigInt::from(v))).sum();
            if h.offset.is_negative() {
                return None;
            }
            if h.offset.is_zero() {
                if dot.is_positive() || (dot.is_zero() && h.strict) {
                    return None;
                }
                continue;
            }
            let ratio = dot / &h.offset;
            if ratio > best {
                best = ratio;
                strict = h.strict;
            } else if ratio == best && best.is_positive() {
                strict |= h.strict;
            }
        }
        Some((best, strict))
    }

    /// `min_h offset_h / |normal_h|_1`: the largest `rho` with the sup-norm ball of
    /// radius `rho` inside the region (zero or negative when 0 is not interior).
    pub fn inradius_sup(&self) -> BigRational {
        self.halfspaces
            .iter()
            .map(|h| {
                let l1: BigRational = h.normal.iter().map(|v| v.abs()).sum();
                &h.offset / l1
            })
            .min()
            .expect("at least one halfspace")
    }
}

/// All integer points in a product of closed integer ranges, lexicographic.
pub fn box_points(ranges: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for &(lo, hi) in ranges {
        let mut next = Vec::new();
        for p in &out {
            for v in lo..=hi {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_cube_points() {
        let o = Omega::from_config(&OmegaConfig::ClosedHypercube, 1).unwrap();
        let pts = o.lattice_points(&Surd::one(), false).unwrap();
        assert_eq!(pts, vec![vec![-1], vec![0], vec![1]]);
        let open = Omega::from_config(&OmegaConfig::Hypercube, 2).unwrap();
        assert_eq!(open.lattice_points(&Surd::one(), false).unwrap(), vec![vec![0, 0]]);
        assert_eq!(o.lattice_points(&Surd::zero(), false).unwrap(), vec![vec![0]]);
    }

    #[test]
    fn thm13_region() {
        let o = Omega::from_config(&OmegaConfig::Thm13Region { translate: None }, 2).unwrap();
        let pts = o.lattice_points(&Surd::from_int(4), false).unwrap();
        // x in (0,4]^2 with x_2 + 2 x_1 <= 4
        assert_eq!(pts, vec![vec![1, 1], vec![1, 2]]);
        assert!(!o.inradius_sup().is_positive());
    }

    #[test]
    fn rejects_unbounded_and_thin() {
        let h = |n: Vec<i64>, off: i64| Halfspace {
            normal: n.into_iter().map(rat_int).collect(),
            offset: rat_int(off),
            strict: false,
        };
        assert!(Omega::new(2, vec![h(vec![1, 0], 1), h(vec![-1, 0], 1), h(vec![0, 1], 1)]).is_err());
        assert!(Omega::new(1, vec![h(vec![1], 0), h(vec![-1], 0)]).is_err());
        assert!(Omega::new(1, vec![h(vec![1], 1), h(vec![-1], 1)]).is_ok());
    }
}
