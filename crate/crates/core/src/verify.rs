//! The acceptance suite, runnable from tests and from the command line.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::diophantine::{dirichlet_witness, LinearFormSystem, Thm13Params};
use crate::error::{Error, Result};
use crate::exactnum::{CubicGenerator, Guard, ScalarMode, Surd};
use crate::patches::{empirical_spectrum, frequency_f64, patch, sandwich_c2, PatchType};
use crate::pointset::generate;
use crate::scheme::{Omega, OmegaConfig, Scheme, SchemeConfig};
use crate::steinhaus::{gamma, gamma_any, suite, three_distance_scan, write_csv, Shape};
use crate::windowpartition::{analytic_spectrum, TypeTwoScan};

pub const GOLDEN_RATIO_CONJUGATE: &str = "(-1+1*sqrt(5))/2";

/// Expected shape table for the golden rotation, `N = 1..=50`.
pub const STEINHAUS_GOLDEN: &str = include_str!("../tests/golden/steinhaus_golden.csv");

const SEED: u64 = 0x5eed_0001;
const TOLERANCE: f64 = 0.02;
const SAMPLE_RADIUS: i64 = 10_000;
const SQUAREFREE: [u64; 12] = [2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} {status}: {} ({})", self.id, self.name, self.detail)
    }
}

pub const NAMES: [&str; 10] = [
    "three-distance law",
    "class/component bijection",
    "empirical vs analytic frequencies",
    "sandwich inclusions",
    "bounded spectrum growth",
    "gap growth for perturbed rational slopes",
    "Dirichlet witnesses",
    "partition conservation",
    "shift invariance",
    "rotation graph structure",
];

fn report(id: u8, passed: bool, detail: String) -> CriterionReport {
    CriterionReport { id, name: NAMES[id as usize - 1], passed, detail }
}

/// Runs the selected criteria (all when `ids` is empty); errors count as failures.
pub fn run(ids: &[u8]) -> Vec<CriterionReport> {
    let all: Vec<u8> = if ids.is_empty() { (1..=10).collect() } else { ids.to_vec() };
    all.into_iter()
        .map(|id| {
            let out = match id {
                1 => criterion_1(),
                2 => criterion_2(),
                3 => criterion_3(),
                4 => criterion_4(),
                5 => criterion_5(),
                6 => criterion_6(),
                7 => criterion_7(),
                8 => criterion_8(),
                9 => criterion_9(),
                10 => criterion_10(),
                _ => Err(Error::invalid(format!("no criterion {id}"))),
            };
            out.unwrap_or_else(|e| CriterionReport {
                id,
                name: NAMES.get(id as usize - 1).copied().unwrap_or("unknown"),
                passed: false,
                detail: format!("error: {e}"),
            })
        })
        .collect()
}

pub fn fibonacci_scheme(shift: &str) -> Result<Scheme> {
    Scheme::build(&SchemeConfig::planar(GOLDEN_RATIO_CONJUGATE, shift))
}

/// `d = 1, k = 3` with slopes `((-1+sqrt5)/2, sqrt2 - 1)` and the unit-square window.
pub fn two_slope_scheme() -> Result<Scheme> {
    let mut cfg = SchemeConfig::planar(GOLDEN_RATIO_CONJUGATE, "0");
    cfg.k = 3;
    cfg.alpha = vec![vec![GOLDEN_RATIO_CONJUGATE.into()], vec!["-1+1*sqrt(2)".into()]];
    cfg.shift = vec!["0".into(), "1/3".into(), "1/7".into()];
    cfg.window.generators = vec![vec![1, 0], vec![0, 1]];
    cfg.scalar_mode = ScalarMode::surrogate(256);
    Scheme::build(&cfg)
}

/// Slope `sqrt2 - 1` with a window of length 2.
pub fn silver_scheme() -> Result<Scheme> {
    let mut cfg = SchemeConfig::planar("(-1+1*sqrt(2))/1", "1/5");
    cfg.window.generators = vec![vec![2]];
    Scheme::build(&cfg)
}

/// `d = 2, k = 3` with slopes `(frac(theta), frac(theta^2))`, `theta = 2 cos(2 pi / 7)`.
pub fn heptagonal_scheme(precision_bits: u32) -> Result<Scheme> {
    let cfg = SchemeConfig {
        k: 3,
        d: 2,
        alpha: vec![vec!["t-1".into(), "t^2-1".into()]],
        shift: vec!["0".into(), "0".into(), "1/3".into()],
        window: crate::scheme::WindowConfig { generators: vec![vec![1]] },
        f0: Default::default(),
        scalar_mode: ScalarMode::surrogate(precision_bits),
        generator: Some(CubicGenerator { poly: vec![-1, -2, 1, 1], lo: "6/5".into(), hi: "13/10".into() }),
    };
    Scheme::build(&cfg)
}

pub fn closed_cube(d: usize) -> Result<Omega> {
    Omega::from_config(&OmegaConfig::ClosedHypercube, d)
}

fn random_surd(rng: &mut ChaCha8Rng, field: u64) -> Surd {
    let a = rng.gen_range(-20i64..=20);
    let b = rng.gen_range(1i64..=20) * if rng.gen_bool(0.5) { 1 } else { -1 };
    let c = rng.gen_range(1i64..=30);
    Surd::new(BigInt::from(a), BigInt::from(b), BigInt::from(c), field).expect("nonzero denominator")
}

fn random_field(rng: &mut ChaCha8Rng) -> u64 {
    *SQUAREFREE.choose(rng).expect("nonempty")
}

/// 500 random quadratic slopes, every `N <= 5000`.
pub fn criterion_1() -> Result<CriterionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let alphas: Vec<Surd> = (0..500).map(|_| {
        let f = random_field(&mut rng);
        random_surd(&mut rng, f)
    }).collect();
    let failures: Vec<(String, u64)> = alphas
        .par_iter()
        .map(|a| three_distance_scan(a, 5000).map(|r| r.map(|n| (a.to_string(), n))))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let detail = match failures.first() {
        None => "500 slopes, N <= 5000, no violation".to_string(),
        Some((a, n)) => format!("{} violations, first alpha={a} at N={n}", failures.len()),
    };
    Ok(report(1, failures.is_empty(), detail))
}

fn bijection_holds(scheme: &Scheme, omega: &Omega, r: i64) -> Result<bool> {
    let spec = analytic_spectrum(scheme, &Surd::from_int(r), PatchType::Type2, omega)?;
    if spec.class_count() != spec.component_count() || !spec.is_injective() {
        return Ok(false);
    }
    Ok(spec.classes.iter().all(|c| c.frequency == spec.partition.components[c.components[0]].volume))
}

pub fn criterion_2() -> Result<CriterionReport> {
    let omega = closed_cube(1)?;
    let schemes = [("fibonacci", fibonacci_scheme("1/3")?), ("two-slope", two_slope_scheme()?)];
    let mut bad = Vec::new();
    for (name, s) in &schemes {
        for r in 1..=20 {
            if !bijection_holds(s, &omega, r)? {
                bad.push(format!("{name} r={r}"));
            }
        }
    }
    let detail = if bad.is_empty() { "2 schemes, r=1..20".to_string() } else { bad.join(", ") };
    Ok(report(2, bad.is_empty(), detail))
}

/// Largest classwise difference between empirical and analytic frequencies.
pub fn empirical_gap(scheme: &Scheme, omega: &Omega, r: i64, t: PatchType, ball: i64) -> Result<(f64, u64)> {
    let r = Surd::from_int(r);
    let analytic = analytic_spectrum(scheme, &r, t, omega)?;
    let empirical = empirical_spectrum(scheme, &r, &Surd::from_int(ball), t, omega)?;
    let mut worst: f64 = 0.0;
    let classes: BTreeSet<_> =
        analytic.classes.iter().map(|c| c.class.clone()).chain(empirical.counts.iter().map(|(c, _)| c.clone())).collect();
    for class in &classes {
        let a = analytic.frequency_of(class).map_or(0.0, Surd::to_f64);
        let e = frequency_f64(&empirical.frequency_of(class));
        worst = worst.max((a - e).abs());
    }
    Ok((worst, empirical.total))
}

pub fn criterion_3() -> Result<CriterionReport> {
    let omega = closed_cube(1)?;
    let schemes = [("fibonacci", fibonacci_scheme("1/3")?), ("two-slope", two_slope_scheme()?)];
    let jobs: Vec<(usize, i64)> = (0..2).flat_map(|i| [1, 2, 5, 10].map(|r| (i, r))).collect();
    let results = jobs
        .par_iter()
        .map(|&(i, r)| empirical_gap(&schemes[i].1, &omega, r, PatchType::Type2, SAMPLE_RADIUS).map(|g| (i, r, g)))
        .collect::<Result<Vec<_>>>()?;
    let worst = results.iter().map(|(_, _, (g, _))| *g).fold(0.0, f64::max);
    let samples = results.iter().map(|(_, _, (_, n))| *n).min().unwrap_or(0);
    let passed = worst <= TOLERANCE && samples >= 10_000;
    Ok(report(3, passed, format!("max classwise error {worst:.5} over {} runs, >= {samples} samples each", results.len())))
}

pub fn criterion_4() -> Result<CriterionReport> {
    let omega = closed_cube(1)?;
    let schemes = [fibonacci_scheme("1/3")?, two_slope_scheme()?, silver_scheme()?];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut failures = 0usize;
    let mut checks = 0usize;
    for s in &schemes {
        let c2 = Surd::from_rational(&sandwich_c2(s, &omega)?.upper);
        let pool = generate(s, &Surd::from_int(200))?;
        let centers: Vec<_> = pool.choose_multiple(&mut rng, 100).cloned().collect();
        for r in [5, 10] {
            let r = Surd::from_int(r);
            let inner = &r - &c2;
            let outer = &r + &c2;
            for y in &centers {
                let p1 = patch(s, y, &r, PatchType::Type1, &omega)?;
                let below = if inner.signum().is_gt() {
                    patch(s, y, &inner, PatchType::Type2, &omega)?.is_subset(&p1)
                } else {
                    true
                };
                let above = p1.is_subset(&patch(s, y, &outer, PatchType::Type2, &omega)?);
                checks += 1;
                if !(below && above) {
                    failures += 1;
                }
            }
        }
    }
    Ok(report(4, failures == 0, format!("{checks} centre/radius pairs on 3 schemes, {failures} failures")))
}

/// `max #xi_2` over `(0, 100]` and over `(100, 200]`.
pub fn spectrum_growth(scheme: &Scheme, omega: &Omega) -> Result<(usize, usize)> {
    let mut scan = TypeTwoScan::new(scheme, omega, &Surd::from_int(200))?;
    let mut radii = vec![Surd::from_rational(&BigRational::new(BigInt::from(1), BigInt::from(2)))];
    radii.extend((1..=200).map(Surd::from_int));
    let (mut low, mut high) = (0, 0);
    for r in radii {
        scan.advance(&r)?;
        let n = scan.summary()?.distinct_frequency_count();
        if r <= Surd::from_int(100) {
            low = low.max(n);
        } else {
            high = high.max(n);
        }
    }
    Ok((low, high))
}

pub fn criterion_5() -> Result<CriterionReport> {
    let scheme = heptagonal_scheme(256)?;
    let (low, high) = spectrum_growth(&scheme, &closed_cube(2)?)?;
    Ok(report(5, low == high, format!("max distinct frequencies: {low} on (0,100], {high} on (100,200]")))
}

pub fn thm13_params(q: u64, p: u64) -> Thm13Params {
    Thm13Params {
        d: 2,
        epsilon: "1".into(),
        q,
        p,
        alpha1: GOLDEN_RATIO_CONJUGATE.into(),
        middle: vec![],
        gamma: format!("(-1+1*sqrt(2))/{}", BigInt::from(q).pow(5)),
        precision_bits: 256,
    }
}

pub fn criterion_6() -> Result<CriterionReport> {
    let omega = Omega::from_config(&OmegaConfig::Thm13Region { translate: None }, 2)?;
    let mut parts = Vec::new();
    let mut passed = true;
    for (q, p) in [(13, 5), (21, 8), (34, 13)] {
        let run = thm13_params(q, p).run(&omega)?;
        passed &= run.pass();
        parts.push(format!("q={q}: {} gaps at r*={:.2} (need {:.2}, c={:.4})", run.distinct_gaps, run.r_star, run.bound, run.constant));
    }
    Ok(report(6, passed, parts.join("; ")))
}

fn random_system(rng: &mut ChaCha8Rng) -> Result<LinearFormSystem> {
    let d = rng.gen_range(1..=2);
    let m = rng.gen_range(1..=2);
    let field = random_field(rng);
    let rows = (0..m).map(|_| (0..d).map(|_| random_surd(rng, field)).collect()).collect();
    LinearFormSystem::new(rows, Guard::exact())
}

pub fn criterion_7() -> Result<CriterionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let systems = (0..100).map(|_| random_system(&mut rng)).collect::<Result<Vec<_>>>()?;
    let misses: usize = systems
        .par_iter()
        .map(|s| {
            [10, 100, 1000]
                .iter()
                .filter(|&&n| !matches!(dirichlet_witness(s, n), Ok(_)))
                .count()
        })
        .sum();
    Ok(report(7, misses == 0, format!("300 searches, {misses} without a witness")))
}

pub fn criterion_8() -> Result<CriterionReport> {
    let omega = closed_cube(1)?;
    let schemes = [fibonacci_scheme("1/3")?, two_slope_scheme()?, silver_scheme()?];
    let mut bad = 0;
    let mut runs = 0;
    for s in &schemes {
        for r in [1, 2, 5, 10] {
            for t in [PatchType::Type1, PatchType::Type2] {
                let spec = analytic_spectrum(s, &Surd::from_int(r), t, &omega)?;
                runs += 1;
                if spec.partition.total_volume() != Surd::one() || spec.total_frequency() != Surd::one() {
                    bad += 1;
                }
            }
        }
    }
    Ok(report(8, bad == 0, format!("{runs} spectra, {bad} not summing to 1")))
}

pub fn criterion_9() -> Result<CriterionReport> {
    let omega = closed_cube(1)?;
    let (a, b) = (fibonacci_scheme("1/3")?, fibonacci_scheme("2/7")?);
    let mut exact_ok = true;
    let mut worst: f64 = 0.0;
    for r in [1, 2, 5, 10] {
        for t in [PatchType::Type1, PatchType::Type2] {
            let rs = Surd::from_int(r);
            let (sa, sb) = (analytic_spectrum(&a, &rs, t, &omega)?, analytic_spectrum(&b, &rs, t, &omega)?);
            let pairs = |s: &crate::windowpartition::AnalyticSpectrum| {
                s.classes.iter().map(|c| (c.class.clone(), c.frequency.clone())).collect::<Vec<_>>()
            };
            exact_ok &= pairs(&sa) == pairs(&sb);
            for s in [&a, &b] {
                worst = worst.max(empirical_gap(s, &omega, r, t, SAMPLE_RADIUS)?.0);
            }
        }
    }
    let passed = exact_ok && worst <= TOLERANCE;
    Ok(report(9, passed, format!("analytic spectra identical: {exact_ok}; max empirical error {worst:.5}")))
}

/// The shape table for the golden rotation as CSV.
pub fn golden_shape_table(n_max: u64) -> Result<String> {
    let rows = suite(&Surd::parse(GOLDEN_RATIO_CONJUGATE)?, n_max)?;
    let mut buf = Vec::new();
    write_csv(&rows, 12, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv is utf-8"))
}

pub fn criterion_10() -> Result<CriterionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);
    let mut problems = Vec::new();
    for _ in 0..200 {
        let field = random_field(&mut rng);
        let alpha = random_surd(&mut rng, field);
        let n = rng.gen_range(1..=300);
        let g = gamma(&alpha, n)?;
        if let Err(e) = g.check_degrees() {
            problems.push(format!("alpha={alpha} N={n}: {e}"));
        }
        if g.classify() == Shape::Circle {
            problems.push(format!("alpha={alpha} N={n}: circle"));
        }
    }
    let mut circles = 0;
    for _ in 0..50 {
        let q = rng.gen_range(2i64..=40);
        let p = loop {
            let p = rng.gen_range(1..q);
            if num_integer::Integer::gcd(&p, &q) == 1 {
                break p;
            }
        };
        let alpha = Surd::from_rational(&BigRational::new(BigInt::from(p), BigInt::from(q)));
        let n = rng.gen_range(1..=2 * q as u64);
        let g = gamma_any(&alpha, n)?;
        if let Err(e) = g.check_degrees() {
            problems.push(format!("alpha={alpha} N={n}: {e}"));
        }
        let full = n >= q.to_u64().unwrap_or(u64::MAX);
        if (g.classify() == Shape::Circle) != full {
            problems.push(format!("alpha={alpha} N={n}: shape {}", g.classify()));
        }
        circles += full as usize;
    }
    if golden_shape_table(50)? != STEINHAUS_GOLDEN {
        problems.push("golden shape table differs".into());
    }
    let detail = if problems.is_empty() {
        format!("200 irrational and 50 rational complexes ({circles} full circles), golden table matches")
    } else {
        problems.join("; ")
    };
    Ok(report(10, problems.is_empty(), detail))
}
