use std::sync::OnceLock;

use num_traits::ToPrimitive;
use proptest::prelude::*;

use quasigap::exactnum::Surd;
use quasigap::patches::{patch, sandwich_c2, PatchType};
use quasigap::pointset::{generate, LiftedPoint};
use quasigap::scheme::{box_points, Projection, Scheme};
use quasigap::verify::{closed_cube, fibonacci_scheme, silver_scheme, two_slope_scheme};

fn schemes() -> Vec<Scheme> {
    vec![fibonacci_scheme("1/3").unwrap(), two_slope_scheme().unwrap(), silver_scheme().unwrap()]
}

fn points(which: usize, radius: i64) -> &'static [LiftedPoint] {
    static CACHE: OnceLock<Vec<Vec<LiftedPoint>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| schemes().iter().map(|s| generate(s, &Surd::from_int(150)).unwrap()).collect());
    let v = &all[which];
    &v[..v.partition_point(|p| p.sup_norm() <= Surd::from_int(radius))]
}

/// Accepted `n` over a box of `n2` around `L(n1)`, by direct membership tests.
fn brute_force(s: &Scheme, n1: &[i64]) -> Vec<Vec<i64>> {
    let ranges: Vec<(i64, i64)> = s
        .alpha()
        .iter()
        .map(|row| {
            let v = row.iter().zip(n1).fold(Surd::zero(), |acc, (a, &x)| &acc + &a.mul_int(x));
            let c = v.floor().to_i64().unwrap();
            (c - 6, c + 6)
        })
        .collect();
    box_points(&ranges)
        .into_iter()
        .map(|n2| {
            let mut n = n1.to_vec();
            n.extend(n2);
            n
        })
        .filter(|n| s.accept(n).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn each_lattice_point_has_index_many_lifts(n1 in -50i64..=50) {
        for s in schemes() {
            let lifts = s.lifts(&[n1]).unwrap();
            prop_assert_eq!(lifts.len() as u64, s.index());
            prop_assert_eq!(brute_force(&s, &[n1]).len(), lifts.len());
        }
    }

    #[test]
    fn star_is_additive(a in prop::collection::vec(-60i64..=60, 3), b in prop::collection::vec(-60i64..=60, 3)) {
        let s = two_slope_scheme().unwrap();
        let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let lhs = s.star(&sum);
        let rhs: Vec<Surd> = s.star(&a).iter().zip(s.star(&b)).map(|(x, y)| x + &y).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn orthogonal_projection_round_trip(n1 in -500i64..=500, n2 in -500i64..=500) {
        let s = fibonacci_scheme("1/3").unwrap();
        let alpha = s.alpha()[0][0].clone();
        let y = s.project(&[n1, n2], Projection::Pi1).remove(0);
        // n - (y, alpha y) lies on the line spanned by (-alpha, 1)
        let e1 = &Surd::from_int(n1) - &y;
        let e2 = &Surd::from_int(n2) - &alpha.checked_mul(&y).unwrap();
        prop_assert_eq!(e1, -alpha.checked_mul(&e2).unwrap());
    }

    #[test]
    fn patches_grow_with_radius(i in 0usize..200, r in 0i64..8, extra in 0i64..5, t in 1u8..=2) {
        let s = fibonacci_scheme("1/3").unwrap();
        let omega = closed_cube(1).unwrap();
        let pts = points(0, 150);
        let y = &pts[i % pts.len()];
        let t = PatchType::from_number(t).unwrap();
        let small = patch(&s, y, &Surd::from_int(r), t, &omega).unwrap();
        let big = patch(&s, y, &Surd::from_int(r + extra), t, &omega).unwrap();
        prop_assert!(small.is_subset(&big));
    }

    #[test]
    fn sandwich_holds(which in 0usize..3, i in 0usize..300, r in 3i64..15) {
        let s = &schemes()[which];
        let omega = closed_cube(1).unwrap();
        let c2 = Surd::from_rational(&sandwich_c2(s, &omega).unwrap().upper);
        let pts = points(which, 100);
        let y = &pts[i % pts.len()];
        let r = Surd::from_int(r);
        let p1 = patch(s, y, &r, PatchType::Type1, &omega).unwrap();
        if (&r - &c2).signum().is_gt() {
            prop_assert!(patch(s, y, &(&r - &c2), PatchType::Type2, &omega).unwrap().is_subset(&p1));
        }
        prop_assert!(p1.is_subset(&patch(s, y, &(&r + &c2), PatchType::Type2, &omega).unwrap()));
    }
}

#[test]
fn generation_is_a_prefix_and_accepted() {
    for s in schemes() {
        let small = generate(&s, &Surd::from_int(20)).unwrap();
        let big = generate(&s, &Surd::from_int(35)).unwrap();
        assert_eq!(&big[..small.len()], &small[..]);
        assert!(big.iter().all(|p| s.accept(&p.n).unwrap()));
        // independent count over a generous range of n1
        let count = (-80..=80)
            .flat_map(|n1| brute_force(&s, &[n1]))
            .filter(|n| LiftedPoint::new(&s, n.clone()).sup_norm() <= Surd::from_int(20))
            .count();
        assert_eq!(count, small.len());
    }
}

#[test]
fn density_stabilises() {
    for s in schemes() {
        let a = generate(&s, &Surd::from_int(200)).unwrap().len() as f64;
        let b = generate(&s, &Surd::from_int(400)).unwrap().len() as f64;
        assert!((b / a - 2.0).abs() <= 0.2, "{a} {b}");
    }
}
