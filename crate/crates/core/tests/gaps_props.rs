use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use quasigap::diophantine::{
    bad_approx_constant, check_transference, consecutive_gap_count, dirichlet_witness, LinearFormSystem,
};
use quasigap::exactnum::{Guard, Surd};
use quasigap::scheme::{Omega, OmegaConfig};
use quasigap::steinhaus::{circle_partition, gamma, three_distance_law, Shape};

const FIELDS: [u64; 6] = [2, 3, 5, 6, 7, 10];

fn irrational() -> impl Strategy<Value = Surd> {
    (prop::sample::select(FIELDS.to_vec()), -30i64..=30, 1i64..=20, any::<bool>(), 1i64..=25).prop_map(|(d, a, b, neg, c)| {
        let b = if neg { -b } else { b };
        Surd::new(BigInt::from(a), BigInt::from(b), BigInt::from(c), d).unwrap()
    })
}

fn golden() -> LinearFormSystem {
    LinearFormSystem::from_strings(&[vec!["(-1+1*sqrt(5))/2"]]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn three_distances(alpha in irrational(), n in 1u64..400) {
        let gaps: Vec<Surd> = circle_partition(&alpha, n).unwrap().gaps().into_iter().map(|(g, _)| g).collect();
        prop_assert!(three_distance_law(&gaps));
    }

    #[test]
    fn rotation_graph_invariants(alpha in irrational(), n in 1u64..300) {
        let g = gamma(&alpha, n).unwrap();
        prop_assert!(g.check_degrees().is_ok());
        prop_assert_ne!(g.classify(), Shape::Circle);
        for seg in g.segments() {
            let lens: Vec<&Surd> = seg.iter().map(|&v| &g.partition.intervals[v].length).collect();
            prop_assert!(lens.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn segment_gap_counts_bounded(alpha in irrational(), r in 1i64..80) {
        let seg = Omega::from_config(&serde_json::from_str::<OmegaConfig>(
            r#"{"preset":"halfspaces","halfspaces":[{"normal":["1"],"offset":"1"},{"normal":["-1"],"offset":"0"}]}"#,
        ).unwrap(), 1).unwrap();
        let n = consecutive_gap_count(&[alpha], &Surd::from_int(r), &seg, &Guard::exact()).unwrap();
        prop_assert!(n <= 3);
    }

    #[test]
    fn golden_constant_stays_above_a_fifth(h in 1u64..2000) {
        let c = bad_approx_constant(&golden(), h).unwrap().constant;
        prop_assert!(c >= Surd::from_rational(&BigRational::new(BigInt::from(1), BigInt::from(5))));
    }
}

#[test]
fn golden_constant_to_ten_thousand() {
    let c = bad_approx_constant(&golden(), 10_000).unwrap().constant;
    assert!(c >= Surd::from_rational(&BigRational::new(BigInt::from(1), BigInt::from(5))));
}

#[test]
fn dirichlet_always_finds_a_witness() {
    let planar = LinearFormSystem::from_strings(&[
        vec!["(0+1*sqrt(2))/1", "(1+1*sqrt(2))/3"],
        vec!["(2-1*sqrt(2))/5", "(0+1*sqrt(2))/7"],
    ])
    .unwrap();
    for n in [10, 100, 1000] {
        dirichlet_witness(&planar, n).unwrap();
        dirichlet_witness(&golden(), n).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    /// With a premise verified by search, the promised inhomogeneous witness exists.
    #[test]
    fn transference_witness_exists(alpha in irrational(), x in 2i64..12, g_num in 0i64..50) {
        let sys = LinearFormSystem::new(vec![vec![alpha]], Guard::exact()).unwrap();
        let min = (1..=x).map(|n| sys.norm(&[n])).min().unwrap();
        prop_assume!(min.signum().is_gt());
        // a rational strictly below the smallest ||n alpha||, |n| <= X
        let scale = BigInt::from(1u64 << 20);
        let below: BigInt = min.mul_rational(&BigRational::from_integer(scale.clone())).ceil() - 1;
        let below = below.max(BigInt::from(1));
        let c = BigRational::new(below, scale);
        prop_assume!(Surd::from_rational(&c) < min);
        let gamma = vec![Surd::from_rational(&BigRational::new(BigInt::from(g_num), BigInt::from(50)))];
        let check = check_transference(&sys, &gamma, &c, &BigRational::from_integer(BigInt::from(x))).unwrap();
        prop_assert!(check.premise_counterexample.is_none());
        prop_assert!(check.witness.is_some(), "{:?}", check);
    }
}
