//! Type-2 frequencies from per-coordinate circle gaps, maintained incrementally in `r`.
//!
//! With an integer-parallelotope window every type-2 component is a box whose
//! side along coordinate `i` is a gap of the points `-beta_i n_1` on the circle of
//! circumference `1/m_i`, and distinct components carry distinct classes. The
//! distinct frequencies are therefore the distinct products of one gap per coordinate.

use std::collections::BTreeSet;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::circle::CircleGaps;
use crate::error::{Error, Result};
use crate::exactnum::Surd;
use crate::patches::PatchType;
use crate::pointset::csv_err;
use crate::scheme::{Omega, Scheme};

struct Pending {
    entry: BigRational,
    strict: bool,
    n1: Vec<i64>,
}

/// Incremental type-2 spectrum over increasing radii.
pub struct TypeTwoScan<'a> {
    scheme: &'a Scheme,
    circles: Vec<CircleGaps>,
    /// Sorted by decreasing entry radius so the next point is at the end.
    pending: Vec<Pending>,
    radius: Surd,
}

impl<'a> TypeTwoScan<'a> {
    /// Prepares every `n_1` of `-r_max * Omega`; `Omega` must contain 0 in its interior.
    pub fn new(scheme: &'a Scheme, omega: &Omega, r_max: &Surd) -> Result<Self> {
        if omega.halfspaces().iter().any(|h| !h.offset.is_positive()) {
            return Err(Error::invalid("the region must contain 0 in its interior"));
        }
        let circles = scheme
            .denominators()
            .iter()
            .map(|&m| {
                let len = BigRational::new(BigInt::one(), BigInt::from(m));
                CircleGaps::new(Surd::from_rational(&len), scheme.guard().clone())
            })
            .collect();
        let mut pending = Vec::new();
        for n1 in omega.lattice_points(r_max, true)? {
            let neg: Vec<i64> = n1.iter().map(|v| -v).collect();
            if let Some((entry, strict)) = omega.entry_radius(&neg) {
                pending.push(Pending { entry, strict, n1 });
            }
        }
        pending.sort_by(|a, b| b.entry.cmp(&a.entry).then(b.strict.cmp(&a.strict)).then(b.n1.cmp(&a.n1)));
        let mut scan = TypeTwoScan { scheme, circles, pending, radius: Surd::zero() };
        scan.insert(&vec![0; scheme.d()])?;
        Ok(scan)
    }

    fn insert(&mut self, n1: &[i64]) -> Result<()> {
        let off = self.scheme.slope_offset(n1);
        for (circle, x) in self.circles.iter_mut().zip(off) {
            let len = circle.circumference().to_rational().expect("rational circumference");
            circle.insert(x.frac_mod(&len)?)?;
        }
        Ok(())
    }

    /// Moves to radius `r`, which must not decrease.
    pub fn advance(&mut self, r: &Surd) -> Result<()> {
        if r < &self.radius {
            return Err(Error::invalid("scan radii must be nondecreasing"));
        }
        self.radius = r.clone();
        if r.is_zero() {
            return Ok(());
        }
        while let Some(p) = self.pending.last() {
            let e = Surd::from_rational(&p.entry);
            let ord = self.scheme.guard().cmp(&e, r, "region boundary")?;
            if ord.is_gt() || (ord.is_eq() && p.strict) {
                break;
            }
            let p = self.pending.pop().expect("nonempty");
            self.insert(&p.n1)?;
        }
        Ok(())
    }

    pub fn radius(&self) -> &Surd {
        &self.radius
    }

    /// Number of components (and of type-2 classes) at the current radius.
    pub fn component_count(&self) -> BigInt {
        self.circles
            .iter()
            .zip(self.scheme.denominators())
            .map(|(c, &m)| BigInt::from(c.len()) * BigInt::from(m))
            .product()
    }

    /// Distinct component volumes, increasing.
    pub fn frequencies(&self) -> Result<Vec<Surd>> {
        let mut products: BTreeSet<Surd> = [Surd::one()].into();
        for c in &self.circles {
            let mut next = BTreeSet::new();
            for p in &products {
                for (g, _) in c.gaps() {
                    next.insert(p * g);
                }
            }
            products = next;
        }
        let out: Vec<Surd> = products.into_iter().collect();
        for pair in out.windows(2) {
            self.scheme.guard().check(&pair[0], &pair[1], "frequencies")?;
        }
        Ok(out)
    }

    pub fn summary(&self) -> Result<SpectrumSummary> {
        let count = self.component_count();
        Ok(SpectrumSummary {
            radius: self.radius.clone(),
            patch_type: PatchType::Type2,
            component_count: count.clone(),
            class_count: count,
            frequencies: self.frequencies()?,
        })
    }
}

/// Distinct type-2 frequencies at a single radius.
pub fn type2_frequencies(scheme: &Scheme, r: &Surd, omega: &Omega) -> Result<SpectrumSummary> {
    let mut scan = TypeTwoScan::new(scheme, omega, r)?;
    scan.advance(r)?;
    scan.summary()
}

/// One row of the spectrum table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumSummary {
    pub radius: Surd,
    pub patch_type: PatchType,
    pub component_count: BigInt,
    pub class_count: BigInt,
    pub frequencies: Vec<Surd>,
}

impl SpectrumSummary {
    pub fn distinct_frequency_count(&self) -> usize {
        self.frequencies.len()
    }

    fn frequency_field(&self, digits: usize) -> String {
        self.frequencies.iter().map(|f| format!("{}={}", f, f.to_decimal(digits))).collect::<Vec<_>>().join(";")
    }
}

pub fn write_table<W: Write>(rows: &[SpectrumSummary], digits: usize, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["r", "type", "component_count", "class_count", "distinct_frequency_count", "frequencies"])
        .map_err(csv_err)?;
    for row in rows {
        w.write_record([
            row.radius.to_string(),
            row.patch_type.to_string(),
            row.component_count.to_string(),
            row.class_count.to_string(),
            row.distinct_frequency_count().to_string(),
            row.frequency_field(digits),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
