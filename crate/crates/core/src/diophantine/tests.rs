use num_bigint::BigInt;
use num_rational::BigRational;

use super::*;
use crate::exactnum::rat;
use crate::scheme::Omega;

const PHI: &str = "(-1+1*sqrt(5))/2";

fn golden() -> LinearFormSystem {
    LinearFormSystem::from_strings(&[vec![PHI]]).unwrap()
}

fn params(q: u64, p: u64, gamma: &str) -> Thm13Params {
    Thm13Params {
        d: 2,
        epsilon: "1".into(),
        q,
        p,
        alpha1: PHI.into(),
        middle: vec![],
        gamma: gamma.into(),
        precision_bits: 256,
    }
}

fn region(cfg: &str, d: usize) -> Omega {
    Omega::from_config(&serde_json::from_str(cfg).unwrap(), d).unwrap()
}

#[test]
fn dirichlet_golden_and_rational() {
    assert_eq!(dirichlet_witness(&golden(), 5).unwrap(), vec![3]);
    let r = LinearFormSystem::from_strings(&[vec!["2/7"]]).unwrap();
    assert_eq!(dirichlet_witness(&r, 10).unwrap(), vec![7]);
    assert!(r.norm(&[7]).is_zero());
    let planar = LinearFormSystem::from_strings(&[vec![PHI, "1/3"], vec!["(-2+1*sqrt(5))/1", PHI]]).unwrap();
    for n in [10, 100] {
        let w = dirichlet_witness(&planar, n).unwrap();
        let v = planar.norm(&w).pow(2).mul_int(n as i64 * n as i64);
        assert!(v <= Surd::one());
    }
}

#[test]
fn canonical_order() {
    let v: Vec<Vec<i64>> = canonical_vectors(2, 1).collect();
    assert_eq!(v, vec![vec![0, 1], vec![1, -1], vec![1, 0], vec![1, 1]]);
}

#[test]
fn golden_badly_approximable() {
    let b = bad_approx_constant(&golden(), 100).unwrap();
    assert!(b.constant >= Surd::parse("(-2+1*sqrt(5))/1").unwrap());
    let one = bad_approx_constant(&golden(), 1).unwrap();
    assert_eq!(one.constant, Surd::parse("(3-1*sqrt(5))/2").unwrap());
    assert_eq!(one.witness, vec![1]);
}

#[test]
fn transference_formulas() {
    let t = transference(&rat(1, 5), &rat(5, 1), 1, 2).unwrap();
    assert_eq!((t.h.clone(), t.c1.clone(), t.x1.clone()), (BigInt::from(1), rat(1, 5), rat(5, 1)));
    let t = transference(&rat(1, 1), &rat(1, 1), 1, 2).unwrap();
    assert_eq!((t.h, t.c1, t.x1), (BigInt::from(1), rat(1, 1), rat(1, 1)));
}

#[test]
fn transference_premise_and_witness() {
    let half = vec![Surd::parse("1/2").unwrap()];
    // ||3 alpha|| = 0.146 <= 1/5, so (1/5, 5) is not a valid premise for the golden slope.
    let bad = check_transference(&golden(), &half, &rat(1, 5), &rat(5, 1)).unwrap();
    assert_eq!(bad.premise_counterexample, Some(vec![3]));
    let good = check_transference(&golden(), &half, &rat(1, 5), &rat(2, 1)).unwrap();
    assert!(good.holds());
    assert_eq!(good.bounds.c1, rat(3, 10));
    assert_eq!(good.witness, Some(vec![-1]));
}

#[test]
fn hypotheses_on_golden_and_perturbed() {
    let c = bad_approx_constant(&golden(), 50).unwrap().constant;
    let psi = Psi::Constant { c: c.to_rational().map_or_else(|| "1/5".to_string(), |q| q.to_string()) };
    let psi = if c.is_rational() { psi } else { Psi::Constant { c: "1/5".into() } };
    let rep = check_hypotheses(&golden(), &psi, 50).unwrap();
    assert!(rep.pass());
    assert_eq!(rep.checked_restricted, 0);

    let alpha = thm13_alpha(&params(13, 5, "(-1+1*sqrt(2))/371293")).unwrap();
    let mode = crate::exactnum::ScalarMode::surrogate(256);
    let row = crate::scheme::working_values(&alpha, &mode).unwrap();
    let sys = LinearFormSystem::new(vec![row], mode.guard().unwrap()).unwrap();
    let rep = check_hypotheses(&sys, &Psi::Logpower { epsilon: 1.0 }, 30).unwrap();
    let v = rep.single_violation.expect("perturbed slope violates the single-form bound");
    assert!(v.n.iter().map(|x| x.abs()).max().unwrap() <= 13);
}

#[test]
fn thm13_construction() {
    let alpha = thm13_alpha(&params(13, 5, "(-1+1*sqrt(2))/371293")).unwrap();
    assert_eq!(alpha.len(), 2);
    let expected = Real::parse(PHI, None)
        .unwrap()
        .scale(&rat(5, 13))
        .checked_add(&Real::parse("(-1+1*sqrt(2))/371293", None).unwrap())
        .unwrap();
    assert_eq!(alpha[1], expected);
    assert!(matches!(
        thm13_alpha(&params(13, 5, "(-1+1*sqrt(5))/742586")),
        Err(Error::RelationFound { .. })
    ));
    assert!(matches!(thm13_alpha(&params(13, 7, "(-1+1*sqrt(2))/371293")), Err(Error::InvalidParameter(_))));
    assert!(matches!(thm13_alpha(&params(13, 5, "0")), Err(Error::InvalidParameter(_))));
    assert!(matches!(thm13_alpha(&params(13, 5, "1/1000")), Err(Error::RelationFound { .. })));
    assert!(matches!(thm13_alpha(&params(13, 5, "(-1+1*sqrt(2))/1000")), Err(Error::InvalidParameter(_))));
}

use crate::exactnum::Real;

#[test]
fn gap_counts_on_segment() {
    let seg = region(r#"{"preset":"halfspaces","halfspaces":[{"normal":["1"],"offset":"1"},{"normal":["-1"],"offset":"0"}]}"#, 1);
    let a = vec![Surd::parse(PHI).unwrap()];
    // n in {0..4}: gaps 0.236 and 0.146 only; n in {0..3} adds 0.382
    assert_eq!(consecutive_gap_count(&a, &Surd::from_int(4), &seg, &Guard::exact()).unwrap(), 2);
    assert_eq!(consecutive_gap_count(&a, &Surd::from_int(3), &seg, &Guard::exact()).unwrap(), 3);
    assert_eq!(consecutive_gap_count(&a, &Surd::parse("1/2").unwrap(), &seg, &Guard::exact()).unwrap(), 1);
    for r in 1..60 {
        assert!(consecutive_gap_count(&a, &Surd::from_int(r), &seg, &Guard::exact()).unwrap() <= 3);
    }
}

#[test]
fn thm13_gap_growth_small_q() {
    let omega = region(r#"{"preset":"thm13-region"}"#, 2);
    let run = params(13, 5, "(-1+1*sqrt(2))/371293").run(&omega).unwrap();
    assert!(run.constant > 0.0);
    assert!(run.pass(), "{run:?}");
}

#[test]
fn cf_of_golden_conjugate() {
    let f = cf(&Surd::parse(PHI).unwrap(), 5);
    let expect: Vec<BigInt> = [0, 1, 1, 1, 1].iter().map(|&x| BigInt::from(x)).collect();
    assert_eq!(f.quotients, expect);
    assert_eq!(f.period_start, Some(1));
    let _ = BigRational::from_integer(BigInt::from(0));
}
