//! Singular walls in the window, the connected components of their complement,
//! and the analytic patch frequencies they carry.
//!
//! Everything is expressed in B-coordinates, where the window is `[0,1)^n` and all
//! walls are axis-parallel.

mod scan;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::exactnum::{Guard, Surd};
use crate::patches::{PatchClass, PatchType};
use crate::scheme::{box_points, Omega, Projection, Scheme};

pub use scan::{type2_frequencies, write_table, SpectrumSummary, TypeTwoScan};

/// A piece of the hyperplane `w_coordinate = offset` inside the window.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Wall {
    pub coordinate: usize,
    pub offset: Surd,
    /// `[lo, hi)` per coordinate; the wall's own coordinate holds `[0, 1)`.
    pub extents: Vec<(Surd, Surd)>,
    /// The lattice vector whose translate of the window boundary gives the wall
    /// (only `n_1` for type-2 walls, which do not depend on `n_2`).
    pub source: Vec<i64>,
}

impl Wall {
    pub fn is_full(&self) -> bool {
        self.extents.iter().all(|(lo, hi)| lo.is_zero() && hi == &Surd::one())
    }
}

fn full_extents(n: usize) -> Vec<(Surd, Surd)> {
    vec![(Surd::zero(), Surd::one()); n]
}

fn check_radius(r: &Surd) -> Result<()> {
    if r.signum().is_lt() {
        return Err(Error::invalid("radius must be nonnegative"));
    }
    Ok(())
}

/// The walls of the `r`-singular set of the given type.
pub fn walls(scheme: &Scheme, r: &Surd, t: PatchType, omega: &Omega) -> Result<Vec<Wall>> {
    check_radius(r)?;
    match t {
        PatchType::Type2 => type2_walls(scheme, r, omega),
        PatchType::Type1 => type1_walls(scheme, r, omega),
    }
}

fn type2_walls(scheme: &Scheme, r: &Surd, omega: &Omega) -> Result<Vec<Wall>> {
    let n = scheme.codim();
    let mut seen: Vec<BTreeMap<Surd, Vec<i64>>> = vec![BTreeMap::new(); n];
    for n1 in omega.lattice_points(r, true)? {
        let off = scheme.slope_offset(&n1);
        for (i, m) in scheme.denominators().iter().enumerate() {
            let step = BigRational::new(BigInt::from(1), BigInt::from(*m));
            let base = off[i].frac_mod(&step)?;
            for j in 0..*m {
                let o = base.add_rational(&(&step * BigInt::from(j)));
                seen[i].entry(o).or_insert_with(|| n1.clone());
            }
        }
    }
    let mut out = Vec::new();
    for (i, offsets) in seen.into_iter().enumerate() {
        for (offset, source) in offsets {
            out.push(Wall { coordinate: i, offset, extents: full_extents(n), source });
        }
    }
    Ok(out)
}

fn type1_walls(scheme: &Scheme, r: &Surd, omega: &Omega) -> Result<Vec<Wall>> {
    let n = scheme.codim();
    let k = scheme.k();
    let guard = scheme.guard();
    let b = scheme.window_matrix();
    let mut seen: BTreeMap<(usize, Surd, Vec<(Surd, Surd)>), Vec<i64>> = BTreeMap::new();
    for i in 0..n {
        seen.insert((i, Surd::zero(), full_extents(n)), vec![0; k]);
    }
    for n1 in box_points(&omega.int_box(r, scheme.spread(), true)) {
        let off = scheme.slope_offset(&n1);
        for (c, ci) in scheme.coset_representatives().iter().zip(scheme.coset_internal()) {
            let mut fl = Vec::with_capacity(n);
            let mut fr = Vec::with_capacity(n);
            for i in 0..n {
                let z = off[i].add_rational(&ci[i]);
                let f = guard.floor(&z, "wall position")?;
                fr.push(z.add_rational(&BigRational::from_integer(-f.clone())));
                fl.push(f.to_i64().expect("lift fits i64"));
            }
            // star(n) = fr - delta for each delta in {0,1}^n, so star(n) lies in (-1, 1)^n.
            for delta in box_points(&vec![(0, 1); n]) {
                if (0..n).any(|j| delta[j] == 1 && fr[j].is_zero()) {
                    continue;
                }
                let mut v = n1.clone();
                v.extend((0..n).map(|i| c[i] - (0..n).map(|j| b[i][j] * (fl[j] + delta[j])).sum::<i64>()));
                let image: Vec<Surd> = scheme.project(&v, Projection::Pi1).iter().map(|x| -x).collect();
                if !omega.contains(&image, r, guard)? {
                    continue;
                }
                let extents: Vec<(Surd, Surd)> = (0..n)
                    .map(|j| {
                        if delta[j] == 0 {
                            (fr[j].clone(), Surd::one())
                        } else {
                            (Surd::zero(), fr[j].clone())
                        }
                    })
                    .collect();
                for i in 0..n {
                    if fr[i].is_zero() {
                        continue;
                    }
                    let mut ext = extents.clone();
                    ext[i] = (Surd::zero(), Surd::one());
                    seen.entry((i, fr[i].clone(), ext)).or_insert_with(|| v.clone());
                }
            }
        }
    }
    Ok(seen
        .into_iter()
        .map(|((coordinate, offset, extents), source)| Wall { coordinate, offset, extents, source })
        .collect())
}

/// A connected component of the complement of the walls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Grid-index tuples of the cells, lexicographic.
    pub cells: Vec<Vec<usize>>,
    pub volume: Surd,
    /// Center of the first cell.
    pub representative: Vec<Surd>,
}

#[derive(Clone, Debug)]
pub struct Partition {
    /// Sorted breakpoints per coordinate, from 0 to 1.
    pub grid: Vec<Vec<Surd>>,
    pub components: Vec<Component>,
}

impl Partition {
    pub fn total_volume(&self) -> Surd {
        self.components.iter().fold(Surd::zero(), |acc, c| &acc + &c.volume)
    }

    pub fn cell_count(&self) -> usize {
        self.grid.iter().map(|g| g.len() - 1).product()
    }
}

/// Splits the window along `walls` into connected components.
pub fn components(walls: &[Wall], codim: usize, guard: &Guard) -> Result<Partition> {
    let mut sets: Vec<BTreeSet<Surd>> = (0..codim).map(|_| [Surd::zero(), Surd::one()].into()).collect();
    for w in walls {
        sets[w.coordinate].insert(w.offset.clone());
        for (j, (lo, hi)) in w.extents.iter().enumerate() {
            if j != w.coordinate {
                sets[j].insert(lo.clone());
                sets[j].insert(hi.clone());
            }
        }
    }
    let grid: Vec<Vec<Surd>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
    for g in &grid {
        for pair in g.windows(2) {
            guard.check(&pair[0], &pair[1], "wall positions")?;
        }
    }
    let index = |i: usize, x: &Surd| grid[i].binary_search(x).expect("grid point");

    // Per coordinate and breakpoint: the covered index ranges of each wall there.
    let mut facets: Vec<HashMap<usize, Vec<Vec<(usize, usize)>>>> = vec![HashMap::new(); codim];
    for w in walls {
        let ext: Vec<(usize, usize)> =
            w.extents.iter().enumerate().map(|(j, (lo, hi))| (index(j, lo), index(j, hi))).collect();
        facets[w.coordinate].entry(index(w.coordinate, &w.offset)).or_default().push(ext);
    }

    let dims: Vec<usize> = grid.iter().map(|g| g.len() - 1).collect();
    let total: usize = dims.iter().product();
    let mut strides = vec![1usize; codim];
    for i in (0..codim.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let decode = |mut idx: usize| -> Vec<usize> {
        let mut c = vec![0; codim];
        for i in 0..codim {
            c[i] = idx / strides[i];
            idx %= strides[i];
        }
        c
    };

    let mut uf = UnionFind::<usize>::new(total);
    for idx in 0..total {
        let c = decode(idx);
        for i in 0..codim {
            if c[i] + 1 >= dims[i] {
                continue;
            }
            let covered = facets[i].get(&(c[i] + 1)).is_some_and(|list| {
                list.iter().any(|ext| (0..codim).all(|j| j == i || (ext[j].0 <= c[j] && c[j] < ext[j].1)))
            });
            if !covered {
                uf.union(idx, idx + strides[i]);
            }
        }
    }

    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut by_root: HashMap<usize, usize> = HashMap::new();
    let mut comps: Vec<Component> = Vec::new();
    for idx in 0..total {
        let c = decode(idx);
        let vol = (0..codim).fold(Surd::one(), |acc, i| &acc * &(&grid[i][c[i] + 1] - &grid[i][c[i]]));
        let root = uf.find(idx);
        match by_root.get(&root) {
            Some(&k) => {
                let comp = &mut comps[k];
                comp.volume = &comp.volume + &vol;
                comp.cells.push(c);
            }
            None => {
                by_root.insert(root, comps.len());
                let representative =
                    (0..codim).map(|i| (&grid[i][c[i]] + &grid[i][c[i] + 1]).mul_rational(&half)).collect();
                comps.push(Component { cells: vec![c], volume: vol, representative });
            }
        }
    }
    Ok(Partition { grid, components: comps })
}

/// The patch class of every point whose internal coordinate is `w`.
pub fn patch_at_internal(scheme: &Scheme, w: &[Surd], r: &Surd, t: PatchType, omega: &Omega) -> Result<PatchClass> {
    check_radius(r)?;
    let guard = scheme.guard();
    let mut displacements = Vec::new();
    match t {
        PatchType::Type2 => {
            for m1 in omega.lattice_points(r, false)? {
                for (n2, hit) in scheme.lifts_flagged(&m1, w)? {
                    if let Some(coordinate) = hit {
                        return Err(Error::OnSingularSet { coordinate });
                    }
                    let mut m = m1.clone();
                    m.extend(n2);
                    displacements.push(m);
                }
            }
        }
        PatchType::Type1 => {
            let b = scheme.window_matrix();
            let inside = |m: &[i64]| omega.contains(&scheme.project(m, Projection::Pi1), r, guard);
            for m1 in box_points(&omega.int_box(r, scheme.spread(), false)) {
                for (n2, hit) in scheme.lifts_flagged(&m1, w)? {
                    let mut m = m1.clone();
                    m.extend(&n2);
                    let keep = inside(&m)?;
                    if let Some(coordinate) = hit {
                        // The lift sits on the lower face; its neighbour across it sits on the upper one.
                        let mut other = m.clone();
                        for (j, row) in b.iter().enumerate() {
                            other[scheme.d() + j] += row[coordinate];
                        }
                        if keep || inside(&other)? {
                            return Err(Error::OnSingularSet { coordinate });
                        }
                    }
                    if keep {
                        displacements.push(m);
                    }
                }
            }
        }
    }
    displacements.sort();
    Ok(PatchClass { patch_type: t, displacements })
}

/// A patch class with its analytic frequency and the components carrying it.
#[derive(Clone, Debug)]
pub struct ClassFrequency {
    pub class: PatchClass,
    pub frequency: Surd,
    pub components: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct AnalyticSpectrum {
    pub radius: Surd,
    pub patch_type: PatchType,
    pub partition: Partition,
    /// Sorted by class.
    pub classes: Vec<ClassFrequency>,
    /// Distinct frequencies, increasing.
    pub frequencies: Vec<Surd>,
}

impl AnalyticSpectrum {
    pub fn component_count(&self) -> usize {
        self.partition.components.len()
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn distinct_frequency_count(&self) -> usize {
        self.frequencies.len()
    }

    /// Whether distinct components always carry distinct classes.
    pub fn is_injective(&self) -> bool {
        self.classes.iter().all(|c| c.components.len() == 1)
    }

    pub fn frequency_of(&self, class: &PatchClass) -> Option<&Surd> {
        self.classes.binary_search_by(|c| c.class.cmp(class)).ok().map(|i| &self.classes[i].frequency)
    }

    pub fn total_frequency(&self) -> Surd {
        self.classes.iter().fold(Surd::zero(), |acc, c| &acc + &c.frequency)
    }

    pub fn summary(&self) -> SpectrumSummary {
        SpectrumSummary {
            radius: self.radius.clone(),
            patch_type: self.patch_type,
            component_count: BigInt::from(self.component_count()),
            class_count: BigInt::from(self.class_count()),
            frequencies: self.frequencies.clone(),
        }
    }
}

/// Frequencies of all patch classes of radius `r`, read off component volumes.
pub fn analytic_spectrum(scheme: &Scheme, r: &Surd, t: PatchType, omega: &Omega) -> Result<AnalyticSpectrum> {
    let ws = walls(scheme, r, t, omega)?;
    let partition = components(&ws, scheme.codim(), scheme.guard())?;
    let mut by_class: BTreeMap<PatchClass, (Surd, Vec<usize>)> = BTreeMap::new();
    for (i, comp) in partition.components.iter().enumerate() {
        let class = patch_at_internal(scheme, &comp.representative, r, t, omega)?;
        let entry = by_class.entry(class).or_insert_with(|| (Surd::zero(), Vec::new()));
        entry.0 = &entry.0 + &comp.volume;
        entry.1.push(i);
    }
    let classes: Vec<ClassFrequency> = by_class
        .into_iter()
        .map(|(class, (frequency, components))| ClassFrequency { class, frequency, components })
        .collect();
    let distinct: BTreeSet<Surd> = classes.iter().map(|c| c.frequency.clone()).collect();
    let frequencies: Vec<Surd> = distinct.into_iter().collect();
    for pair in frequencies.windows(2) {
        scheme.guard().check(&pair[0], &pair[1], "frequencies")?;
    }
    Ok(AnalyticSpectrum { radius: r.clone(), patch_type: t, partition, classes, frequencies })
}
