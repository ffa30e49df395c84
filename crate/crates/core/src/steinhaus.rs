//! Rotation orbits on the circle: the gap partition, its overlap graph under
//! the rotation, and orbit-count frequency estimates.

use std::fmt;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::circle::CircleGaps;
use crate::diophantine::ser_display;
use crate::error::{Error, Result};
use crate::exactnum::{Guard, Surd};
use crate::pointset::csv_err;

/// Open arc `(start, start + length)` of `R/Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arc {
    #[serde(serialize_with = "ser_display")]
    pub start: Surd,
    #[serde(serialize_with = "ser_display")]
    pub length: Surd,
}

impl Arc {
    /// Whether `x` in `[0, 1)` lies strictly inside.
    pub fn contains(&self, x: &Surd) -> bool {
        let t = (x - &self.start).fract();
        !t.is_zero() && t < self.length
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CirclePartition {
    /// Distinct points `n alpha mod 1`, `1 <= n <= N`, increasing.
    #[serde(serialize_with = "crate::diophantine::ser_display_all")]
    pub points: Vec<Surd>,
    /// `intervals[i]` starts at `points[i]`; the last one wraps through 0.
    pub intervals: Vec<Arc>,
}

impl CirclePartition {
    /// Distinct lengths with multiplicities, increasing.
    pub fn gaps(&self) -> Vec<(Surd, usize)> {
        let mut v: Vec<Surd> = self.intervals.iter().map(|a| a.length.clone()).collect();
        v.sort();
        let mut out: Vec<(Surd, usize)> = Vec::new();
        for g in v {
            match out.last_mut() {
                Some((h, c)) if *h == g => *c += 1,
                _ => out.push((g, 1)),
            }
        }
        out
    }

    /// Index of the interval whose half-open span `[x_i, x_{i+1})` holds `t`.
    fn locate(&self, t: &Surd) -> usize {
        let i = self.points.partition_point(|x| x <= t);
        if i == 0 {
            self.points.len() - 1
        } else {
            i - 1
        }
    }

    /// Indices of points strictly inside `arc`, in the order met along it.
    fn inside(&self, arc: &Arc) -> Vec<usize> {
        let end = &arc.start + &arc.length;
        let one = Surd::one();
        let above = self.points.partition_point(|x| x <= &arc.start);
        if end <= one {
            let stop = self.points.partition_point(|x| x < &end);
            (above..stop).collect()
        } else {
            let wrapped = &end - &one;
            let stop = self.points.partition_point(|x| x < &wrapped);
            (above..self.points.len()).chain(0..stop).collect()
        }
    }
}

/// The intervals cut out of `R/Z` by `{n alpha mod 1 : 1 <= n <= N}`.
pub fn circle_partition(alpha: &Surd, n: u64) -> Result<CirclePartition> {
    if n == 0 {
        return Err(Error::invalid("N must be at least 1"));
    }
    let step = alpha.fract();
    let mut points = Vec::with_capacity(n as usize);
    let mut x = Surd::zero();
    for _ in 0..n {
        x = (&x + &step).fract();
        points.push(x.clone());
    }
    points.sort();
    points.dedup();
    let m = points.len();
    let intervals = (0..m)
        .map(|i| {
            let next = if i + 1 < m { points[i + 1].clone() } else { &points[0] + &Surd::one() };
            Arc { length: &next - &points[i], start: points[i].clone() }
        })
        .collect();
    Ok(CirclePartition { points, intervals })
}

/// Whether the gap lengths obey the three-distance law: at most three, the
/// largest being the sum of the other two when there are three.
pub fn three_distance_law(gaps: &[Surd]) -> bool {
    match gaps {
        [] | [_] | [_, _] => true,
        [a, b, c] => {
            let mut v = [a, b, c];
            v.sort();
            &(v[0] + v[1]) == v[2]
        }
        _ => false,
    }
}

/// First `N <= n_max` whose gaps break [`three_distance_law`], by incremental insertion.
pub fn three_distance_scan(alpha: &Surd, n_max: u64) -> Result<Option<u64>> {
    let step = alpha.fract();
    let mut circle = CircleGaps::new(Surd::one(), Guard::exact());
    let mut x = Surd::zero();
    for n in 1..=n_max {
        x = (&x + &step).fract();
        circle.insert(x.clone())?;
        let gaps: Vec<Surd> = circle.gaps().map(|(g, _)| g.clone()).collect();
        if !three_distance_law(&gaps) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Circle,
    Wedge,
    Theta,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Circle => "circle",
            Shape::Wedge => "wedge",
            Shape::Theta => "theta",
        })
    }
}

/// Vertices are the partition intervals; there is one edge `J -> J'` for each
/// piece of `(J + alpha) ∩ J'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaComplex {
    pub n: u64,
    #[serde(serialize_with = "ser_display")]
    pub alpha: Surd,
    pub partition: CirclePartition,
    pub edges: Vec<(usize, usize)>,
}

impl GammaComplex {
    pub fn vertex_count(&self) -> usize {
        self.partition.intervals.len()
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count()];
        for &(a, _) in &self.edges {
            d[a] += 1;
        }
        d
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count()];
        for &(_, b) in &self.edges {
            d[b] += 1;
        }
        d
    }

    /// The vertex with out-degree 2, if any.
    pub fn branch_vertex(&self) -> Option<usize> {
        self.out_degrees().iter().position(|&d| d == 2)
    }

    /// The vertex with in-degree 2, if any.
    pub fn merge_vertex(&self) -> Option<usize> {
        self.in_degrees().iter().position(|&d| d == 2)
    }

    /// Degrees in `{1, 2}`, at most one vertex of each degree 2, both present or both absent,
    /// and `E - V` equal to the number of branch vertices.
    pub fn check_degrees(&self) -> Result<()> {
        let (outs, ins) = (self.out_degrees(), self.in_degrees());
        if outs.iter().chain(&ins).any(|&d| d == 0 || d > 2) {
            return Err(Error::invalid("vertex degree outside {1, 2}"));
        }
        let branches = outs.iter().filter(|&&d| d == 2).count();
        let merges = ins.iter().filter(|&&d| d == 2).count();
        if branches > 1 || branches != merges {
            return Err(Error::invalid("expected matching single branch and merge vertices"));
        }
        if self.edges.len() != self.vertex_count() + branches {
            return Err(Error::invalid("edge count does not match the homotopy type"));
        }
        let alpha_is_rational = self.alpha.is_rational();
        if !alpha_is_rational && branches != 1 {
            return Err(Error::invalid("irrational rotation without a branch vertex"));
        }
        if let Some(b) = self.branch_vertex() {
            if !self.partition.intervals[b].contains(&Surd::zero()) {
                return Err(Error::invalid("branch vertex does not contain 0"));
            }
        }
        if let Some(m) = self.merge_vertex() {
            let next = self.alpha.mul_int(self.n as i64 + 1).fract();
            if !self.partition.intervals[m].contains(&next) {
                return Err(Error::invalid("merge vertex does not contain (N+1) alpha"));
            }
        }
        Ok(())
    }

    pub fn classify(&self) -> Shape {
        match (self.branch_vertex(), self.merge_vertex()) {
            (None, _) | (_, None) => Shape::Circle,
            (Some(b), Some(m)) if b == m => Shape::Wedge,
            _ => Shape::Theta,
        }
    }

    /// Vertex runs strictly between the branch and merge vertices, following edges.
    /// Empty for a circle.
    pub fn segments(&self) -> Vec<Vec<usize>> {
        let (Some(b), Some(m)) = (self.branch_vertex(), self.merge_vertex()) else {
            return Vec::new();
        };
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); self.vertex_count()];
        for &(a, c) in &self.edges {
            succ[a].push(c);
        }
        let walk = |first: usize| {
            let mut run = Vec::new();
            let mut v = first;
            while v != b && v != m {
                run.push(v);
                v = succ[v][0];
            }
            run
        };
        let mut out: Vec<Vec<usize>> = succ[b].iter().map(|&s| walk(s)).collect();
        if b != m {
            out.push(walk(succ[m][0]));
        }
        out
    }
}

/// Builds the complex for irrational `alpha`.
pub fn gamma(alpha: &Surd, n: u64) -> Result<GammaComplex> {
    if alpha.is_rational() {
        return Err(Error::RationalAlpha);
    }
    gamma_any(alpha, n)
}

/// Like [`gamma`] but also accepts rational `alpha`.
pub fn gamma_any(alpha: &Surd, n: u64) -> Result<GammaComplex> {
    let partition = circle_partition(alpha, n)?;
    let step = alpha.fract();
    let mut edges = Vec::new();
    for (i, arc) in partition.intervals.iter().enumerate() {
        let image = Arc { start: (&arc.start + &step).fract(), length: arc.length.clone() };
        edges.push((i, partition.locate(&image.start)));
        for j in partition.inside(&image) {
            edges.push((i, j));
        }
    }
    Ok(GammaComplex { n, alpha: alpha.clone(), partition, edges })
}

/// Whether `beta` lies in `alpha Z + Z`.
pub fn in_orbit_lattice(beta: &Surd, alpha: &Surd) -> bool {
    let (a0, a1) = alpha.rational_parts();
    let (b0, b1) = beta.rational_parts();
    if a1.is_zero() {
        return false;
    }
    if !b1.is_zero() && beta.field() != alpha.field() {
        return false;
    }
    // beta = u + v alpha
    let v = &b1 / &a1;
    let u = &b0 - &v * &a0;
    v.is_integer() && u.is_integer()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErgodicEstimate {
    pub samples: u64,
    pub counts: Vec<u64>,
}

impl ErgodicEstimate {
    /// `counts[i] / R`.
    pub fn frequencies(&self) -> Vec<BigRational> {
        let r = BigInt::from(self.samples);
        self.counts.iter().map(|&c| BigRational::new(BigInt::from(c), r.clone())).collect()
    }
}

/// Visits of `beta + i alpha mod 1`, `1 <= i <= R`, to each partition interval.
pub fn ergodic_freq(beta: &Surd, alpha: &Surd, n: u64, samples: u64) -> Result<ErgodicEstimate> {
    if alpha.is_rational() {
        return Err(Error::RationalAlpha);
    }
    if samples == 0 {
        return Err(Error::invalid("R must be at least 1"));
    }
    if !beta.is_rational() && beta.field() != alpha.field() {
        return Err(Error::MixedFields(alpha.field(), beta.field()));
    }
    if in_orbit_lattice(beta, alpha) {
        return Err(Error::DegenerateBeta);
    }
    let partition = circle_partition(alpha, n)?;
    let step = alpha.fract();
    let mut counts = vec![0u64; partition.intervals.len()];
    let mut y = beta.fract();
    for _ in 0..samples {
        y = (&y + &step).fract();
        counts[partition.locate(&y)] += 1;
    }
    Ok(ErgodicEstimate { samples, counts })
}

/// One row of the suite table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SteinhausRow {
    pub n: u64,
    pub gaps: Vec<(String, usize)>,
    pub distinct_gap_count: usize,
    pub shape: Shape,
    pub branch_vertex_index: Option<usize>,
    pub merge_vertex_index: Option<usize>,
    #[serde(skip)]
    gap_values: Vec<Surd>,
}

impl SteinhausRow {
    pub fn new(g: &GammaComplex) -> Self {
        let gaps = g.partition.gaps();
        SteinhausRow {
            n: g.n,
            distinct_gap_count: gaps.len(),
            gaps: gaps.iter().map(|(s, c)| (s.to_string(), *c)).collect(),
            shape: g.classify(),
            branch_vertex_index: g.branch_vertex(),
            merge_vertex_index: g.merge_vertex(),
            gap_values: gaps.into_iter().map(|(s, _)| s).collect(),
        }
    }
}

/// Rows for `N` in `1..=n_max`.
pub fn suite(alpha: &Surd, n_max: u64) -> Result<Vec<SteinhausRow>> {
    (1..=n_max).map(|n| Ok(SteinhausRow::new(&gamma_any(alpha, n)?))).collect()
}

pub fn write_csv<W: Write>(rows: &[SteinhausRow], digits: usize, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["N", "distinct_gap_count", "gaps", "shape", "branch_vertex_index", "merge_vertex_index"])
        .map_err(csv_err)?;
    let opt = |v: Option<usize>| v.map_or_else(String::new, |i| i.to_string());
    for row in rows {
        let gaps = row.gap_values.iter().map(|g| format!("{}={}", g, g.to_decimal(digits))).collect::<Vec<_>>().join(";");
        w.write_record([
            row.n.to_string(),
            row.distinct_gap_count.to_string(),
            gaps,
            row.shape.to_string(),
            opt(row.branch_vertex_index),
            opt(row.merge_vertex_index),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests;
