//! Points on a circle `R / L Z` with an incrementally maintained gap multiset.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Bound::{Excluded, Unbounded};

use crate::error::{Error, Result};
use crate::exactnum::{Guard, Surd};

#[derive(Clone, Debug)]
pub struct CircleGaps {
    circumference: Surd,
    points: BTreeSet<Surd>,
    gaps: BTreeMap<Surd, usize>,
    guard: Guard,
}

impl CircleGaps {
    pub fn new(circumference: Surd, guard: Guard) -> Self {
        CircleGaps { circumference, points: BTreeSet::new(), gaps: BTreeMap::new(), guard }
    }

    pub fn circumference(&self) -> &Surd {
        &self.circumference
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &Surd> {
        self.points.iter()
    }

    /// Distinct gap lengths with multiplicities, increasing.
    pub fn gaps(&self) -> impl Iterator<Item = (&Surd, usize)> {
        self.gaps.iter().map(|(g, &c)| (g, c))
    }

    pub fn distinct_gap_count(&self) -> usize {
        self.gaps.len()
    }

    /// Counter-clockwise distance from `a` to `b` (the full circle when equal).
    fn arc(&self, a: &Surd, b: &Surd) -> Surd {
        if b > a {
            b - a
        } else {
            &(b - a) + &self.circumference
        }
    }

    fn add_gap(&mut self, g: Surd) -> Result<()> {
        if !self.gaps.contains_key(&g) {
            if let Some((below, _)) = self.gaps.range(..&g).next_back() {
                self.guard.check(below, &g, "gap lengths")?;
            }
            if let Some((above, _)) = self.gaps.range((Excluded(&g), Unbounded)).next() {
                self.guard.check(above, &g, "gap lengths")?;
            }
        }
        *self.gaps.entry(g).or_insert(0) += 1;
        Ok(())
    }

    fn remove_gap(&mut self, g: &Surd) {
        let c = self.gaps.get_mut(g).expect("gap present");
        *c -= 1;
        if *c == 0 {
            self.gaps.remove(g);
        }
    }

    /// Inserts a point of `[0, L)`; returns false if it was already present.
    pub fn insert(&mut self, x: Surd) -> Result<bool> {
        if x.signum().is_lt() || x >= self.circumference {
            return Err(Error::invalid("circle point outside [0, L)"));
        }
        if self.points.contains(&x) {
            return Ok(false);
        }
        if self.points.is_empty() {
            self.gaps.insert(self.circumference.clone(), 1);
            self.points.insert(x);
            return Ok(true);
        }
        let pred = self
            .points
            .range(..&x)
            .next_back()
            .or_else(|| self.points.iter().next_back())
            .cloned()
            .expect("nonempty");
        let succ = self
            .points
            .range((Excluded(&x), Unbounded))
            .next()
            .or_else(|| self.points.iter().next())
            .cloned()
            .expect("nonempty");
        self.guard.check(&pred, &x, "circle points")?;
        self.guard.check(&succ, &x, "circle points")?;
        let old = if pred == succ { self.circumference.clone() } else { self.arc(&pred, &succ) };
        let left = self.arc(&pred, &x);
        let right = self.arc(&x, &succ);
        self.remove_gap(&old);
        self.add_gap(left)?;
        self.add_gap(right)?;
        self.points.insert(x);
        Ok(true)
    }

    /// Gaps in circular order starting at the smallest point.
    pub fn ordered_gaps(&self) -> Vec<Surd> {
        let pts: Vec<&Surd> = self.points.iter().collect();
        match pts.len() {
            0 => Vec::new(),
            1 => vec![self.circumference.clone()],
            n => (0..n).map(|i| self.arc(pts[i], pts[(i + 1) % n])).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_three_gaps() {
        let a = Surd::parse("(-1+1*sqrt(5))/2").unwrap();
        let mut c = CircleGaps::new(Surd::one(), Guard::exact());
        for n in 0..=3 {
            c.insert(a.mul_int(n).fract()).unwrap();
        }
        let gaps: Vec<String> = c.gaps().map(|(g, _)| g.to_decimal(3)).collect();
        assert_eq!(gaps, vec!["0.146", "0.236", "0.382"]);
        assert!(!c.insert(Surd::zero()).unwrap());
        let total = c.ordered_gaps().iter().fold(Surd::zero(), |acc, g| &acc + g);
        assert_eq!(total, Surd::one());
    }

    #[test]
    fn single_point_full_circle() {
        let mut c = CircleGaps::new(Surd::one(), Guard::exact());
        c.insert(Surd::parse("1/3").unwrap()).unwrap();
        assert_eq!(c.gaps().collect::<Vec<_>>(), vec![(&Surd::one(), 1)]);
        assert!(c.insert(Surd::one()).is_err());
    }
}
