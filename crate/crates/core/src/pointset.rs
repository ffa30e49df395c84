//! Finite portions of the cut-and-project set together with their lattice lifts.

use std::io::Write;

use num_traits::ToPrimitive;

use crate::error::Result;
use crate::scheme::{box_points, Scheme};
use crate::exactnum::Surd;

/// A point `y = pi1(n + s)` of the set, with `y* = star(n + s)` in B-coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedPoint {
    pub n: Vec<i64>,
    pub physical: Vec<Surd>,
    pub internal: Vec<Surd>,
}

impl LiftedPoint {
    pub fn new(scheme: &Scheme, n: Vec<i64>) -> LiftedPoint {
        let physical = scheme.physical(&n);
        let internal =
            scheme.star(&n).iter().zip(scheme.shift_internal()).map(|(a, b)| a + b).collect();
        LiftedPoint { n, physical, internal }
    }

    pub fn n1(&self) -> &[i64] {
        &self.n[..self.physical.len()]
    }

    pub fn sup_norm(&self) -> Surd {
        self.physical.iter().map(|x| x.abs()).max().unwrap_or_else(Surd::zero)
    }
}

/// The integer range of `n_1` that can carry points with `|y| <= radius`.
pub fn covering_box(scheme: &Scheme, radius: &Surd) -> Vec<(i64, i64)> {
    let pad = radius + scheme.spread();
    scheme.shift()[..scheme.d()]
        .iter()
        .map(|s| {
            let lo = (-&pad - s).ceil().to_i64().expect("box fits i64");
            let hi = (&pad - s).floor().to_i64().expect("box fits i64");
            (lo, hi)
        })
        .collect()
}

/// All points with sup-norm at most `radius`, ordered by (norm, lift).
pub fn generate(scheme: &Scheme, radius: &Surd) -> Result<Vec<LiftedPoint>> {
    let guard = scheme.guard();
    let mut out = Vec::new();
    for n1 in box_points(&covering_box(scheme, radius)) {
        for n2 in scheme.lifts(&n1)? {
            let mut n = n1.clone();
            n.extend(n2);
            let p = LiftedPoint::new(scheme, n);
            if guard.cmp(&p.sup_norm(), radius, "ball boundary")?.is_le() {
                out.push(p);
            }
        }
    }
    let mut keyed: Vec<(Surd, LiftedPoint)> = out.into_iter().map(|p| (p.sup_norm(), p)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.n.cmp(&b.1.n)));
    Ok(keyed.into_iter().map(|(_, p)| p).collect())
}

pub fn write_csv<W: Write>(scheme: &Scheme, points: &[LiftedPoint], digits: usize, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (1..=scheme.k()).map(|i| format!("n{i}")).collect();
    header.extend((1..=scheme.d()).map(|i| format!("x{i}")));
    header.extend((1..=scheme.codim()).map(|i| format!("w{i}")));
    w.write_record(&header).map_err(csv_err)?;
    for p in points {
        let mut row: Vec<String> = p.n.iter().map(|v| v.to_string()).collect();
        row.extend(p.physical.iter().map(|x| x.to_decimal(digits)));
        row.extend(p.internal.iter().map(|x| x.to_decimal(digits)));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn csv_err(e: csv::Error) -> crate::error::Error {
    crate::error::Error::Io(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::SchemeConfig;

    #[test]
    fn fibonacci_gaps_take_two_values() {
        let s = Scheme::build(&SchemeConfig::planar("(-1+1*sqrt(5))/2", "1/3")).unwrap();
        let pts = generate(&s, &Surd::from_int(30)).unwrap();
        let mut xs: Vec<Surd> = pts.iter().map(|p| p.physical[0].clone()).collect();
        xs.sort();
        let mut gaps: Vec<Surd> = xs.windows(2).map(|w| &w[1] - &w[0]).collect();
        gaps.sort();
        gaps.dedup();
        assert_eq!(gaps.len(), 2);
        for p in &pts {
            assert!(s.accept(&p.n).unwrap());
            assert!(p.internal.iter().all(|v| v.signum().is_ge() && v < &Surd::one()));
        }
    }

    #[test]
    fn zero_radius() {
        let s = Scheme::build(&SchemeConfig::planar("(-1+1*sqrt(5))/2", "1/3")).unwrap();
        assert!(generate(&s, &Surd::zero()).unwrap().len() <= 1);
    }
}
