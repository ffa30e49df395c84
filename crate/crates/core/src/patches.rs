//! Patches around points of the set, their equivalence classes and empirical frequencies.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::Surd;
use crate::pointset::{covering_box, LiftedPoint};
use crate::scheme::{box_points, Omega, Scheme};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PatchType {
    /// Neighbours whose physical displacement lies in `r * Omega`.
    #[serde(rename = "1")]
    Type1,
    /// Neighbours whose first `d` lattice coordinates lie in `r * Omega`.
    #[serde(rename = "2")]
    Type2,
}

impl PatchType {
    pub fn from_number(t: u8) -> Result<PatchType> {
        match t {
            1 => Ok(PatchType::Type1),
            2 => Ok(PatchType::Type2),
            _ => Err(Error::config("patch type must be 1 or 2")),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            PatchType::Type1 => 1,
            PatchType::Type2 => 2,
        }
    }
}

impl fmt::Display for PatchType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// A patch up to translation: the sorted lattice displacements to its points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatchClass {
    pub patch_type: PatchType,
    pub displacements: Vec<Vec<i64>>,
}

impl PatchClass {
    pub fn size(&self) -> usize {
        self.displacements.len()
    }

    /// Whether every displacement of `self` also occurs in `other`.
    pub fn is_subset(&self, other: &PatchClass) -> bool {
        self.displacements.iter().all(|n| other.displacements.binary_search(n).is_ok())
    }
}

/// Lifts and physical positions per `n_1`, computed on demand.
pub struct LiftCache<'a> {
    scheme: &'a Scheme,
    lifts: HashMap<Vec<i64>, Vec<(Vec<i64>, Vec<Surd>)>>,
}

impl<'a> LiftCache<'a> {
    pub fn new(scheme: &'a Scheme) -> Self {
        LiftCache { scheme, lifts: HashMap::new() }
    }

    /// Lattice points over `n1` as `(n_2, pi1(n + s))`.
    pub fn get(&mut self, n1: &[i64]) -> Result<&[(Vec<i64>, Vec<Surd>)]> {
        if !self.lifts.contains_key(n1) {
            let mut v = Vec::new();
            for n2 in self.scheme.lifts(n1)? {
                let mut n = n1.to_vec();
                n.extend(&n2);
                v.push((n2, self.scheme.physical(&n)));
            }
            self.lifts.insert(n1.to_vec(), v);
        }
        Ok(&self.lifts[n1])
    }
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// The patch of radius `r` around the point `y`.
pub fn patch(scheme: &Scheme, y: &LiftedPoint, r: &Surd, t: PatchType, omega: &Omega) -> Result<PatchClass> {
    patch_cached(&mut LiftCache::new(scheme), y, r, t, omega)
}

pub fn patch_cached(
    cache: &mut LiftCache<'_>,
    y: &LiftedPoint,
    r: &Surd,
    t: PatchType,
    omega: &Omega,
) -> Result<PatchClass> {
    let scheme = cache.scheme;
    let d = scheme.d();
    let (y1, y2) = y.n.split_at(d);
    let mut displacements = Vec::new();
    let candidates = match t {
        PatchType::Type2 => omega.lattice_points(r, false)?,
        PatchType::Type1 => box_points(&omega.int_box(r, scheme.spread(), false)),
    };
    for m1 in candidates {
        let target = add(y1, &m1);
        for (n2, phys) in cache.get(&target)? {
            if t == PatchType::Type1 {
                let delta: Vec<Surd> = phys.iter().zip(&y.physical).map(|(a, b)| a - b).collect();
                if !omega.contains(&delta, r, scheme.guard())? {
                    continue;
                }
            }
            let mut n = m1.clone();
            n.extend(n2.iter().zip(y2).map(|(a, b)| a - b));
            displacements.push(n);
        }
    }
    displacements.sort();
    Ok(PatchClass { patch_type: t, displacements })
}

#[derive(Clone, Debug)]
pub struct EmpiricalSpectrum {
    pub radius: Surd,
    pub patch_type: PatchType,
    pub counts: Vec<(PatchClass, u64)>,
    pub total: u64,
}

impl EmpiricalSpectrum {
    pub fn frequency(&self, i: usize) -> BigRational {
        BigRational::new(BigInt::from(self.counts[i].1), BigInt::from(self.total))
    }

    pub fn frequency_of(&self, class: &PatchClass) -> BigRational {
        self.counts
            .iter()
            .find(|(c, _)| c == class)
            .map(|(_, n)| BigRational::new(BigInt::from(*n), BigInt::from(self.total)))
            .unwrap_or_default()
    }

    /// Report rows sorted by descending frequency, then class id.
    pub fn report(&self) -> Vec<SpectrumRow> {
        let mut rows: Vec<SpectrumRow> = self
            .counts
            .iter()
            .enumerate()
            .map(|(i, (c, n))| {
                let q = self.frequency(i);
                SpectrumRow {
                    class_id: i,
                    size: c.size(),
                    count: *n,
                    frequency_num: q.numer().to_string(),
                    frequency_den: q.denom().to_string(),
                }
            })
            .collect();
        rows.sort_by(|a, b| b.count.cmp(&a.count).then(a.class_id.cmp(&b.class_id)));
        rows
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub class_id: usize,
    pub size: usize,
    pub count: u64,
    pub frequency_num: String,
    pub frequency_den: String,
}

/// Counts patch classes over all points with `|y| <= ball_radius`.
///
/// Class ids follow the lexicographic order of the displacement lists.
pub fn empirical_spectrum(
    scheme: &Scheme,
    r: &Surd,
    ball_radius: &Surd,
    t: PatchType,
    omega: &Omega,
) -> Result<EmpiricalSpectrum> {
    if !ball_radius.signum().is_gt() {
        return Err(Error::invalid("ball radius must be positive"));
    }
    let guard = scheme.guard();
    let mut cache = LiftCache::new(scheme);
    let mut counts: HashMap<PatchClass, u64> = HashMap::new();
    let mut total = 0u64;
    for n1 in box_points(&covering_box(scheme, ball_radius)) {
        let centers: Vec<(Vec<i64>, Vec<Surd>)> = cache.get(&n1)?.to_vec();
        for (n2, phys) in centers {
            let norm = phys.iter().map(|x| x.abs()).max().unwrap_or_else(Surd::zero);
            if !guard.cmp(&norm, ball_radius, "ball boundary")?.is_le() {
                continue;
            }
            let mut n = n1.clone();
            n.extend(n2);
            let internal = Vec::new();
            let y = LiftedPoint { n, physical: phys, internal };
            let class = patch_cached(&mut cache, &y, r, t, omega)?;
            *counts.entry(class).or_insert(0) += 1;
            total += 1;
        }
    }
    let mut counts: Vec<(PatchClass, u64)> = counts.into_iter().collect();
    counts.sort();
    Ok(EmpiricalSpectrum { radius: r.clone(), patch_type: t, counts, total })
}

/// The sandwich constant with an exact value and a rational upper bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichBound {
    pub exact: Surd,
    pub upper: BigRational,
}

/// `c2` with `P2(y, r - c2) ⊆ P1(y, r) ⊆ P2(y, r + c2)` for every point `y`.
///
/// Physical and lattice displacements differ by `P_F B t` with `t` in the open
/// unit cube, bounded in sup-norm by the scheme's spread `c`; converting to the
/// gauge of `Omega` divides by the largest sup-norm ball radius inside it.
pub fn sandwich_c2(scheme: &Scheme, omega: &Omega) -> Result<SandwichBound> {
    let rho = omega.inradius_sup();
    if !rho.is_positive() {
        return Err(Error::invalid("the region must contain 0 in its interior"));
    }
    let exact = scheme.spread().mul_rational(&rho.recip());
    let scale = BigInt::from(1u64 << 32);
    let num = exact.mul_rational(&BigRational::from_integer(scale.clone())).ceil();
    Ok(SandwichBound { exact, upper: BigRational::new(num, scale) })
}

pub fn report_json(spec: &EmpiricalSpectrum) -> String {
    serde_json::to_string_pretty(&spec.report()).expect("report serializes")
}

pub fn frequency_f64(q: &BigRational) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}
