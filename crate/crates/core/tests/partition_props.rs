use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use quasigap::exactnum::Surd;
use quasigap::patches::PatchType;
use quasigap::verify::{closed_cube, empirical_gap, fibonacci_scheme, two_slope_scheme};
use quasigap::windowpartition::{analytic_spectrum, walls, Partition};

fn radius(num: i64, den: i64) -> Surd {
    Surd::from_rational(&BigRational::new(BigInt::from(num), BigInt::from(den)))
}

fn patch_type(t: u8) -> PatchType {
    PatchType::from_number(t).unwrap()
}

/// Component index of the cell holding the point `x`.
fn locate(p: &Partition, x: &[Surd]) -> usize {
    let cell: Vec<usize> = p.grid.iter().zip(x).map(|(g, v)| g.partition_point(|b| b <= v) - 1).collect();
    let owner: HashMap<&Vec<usize>, usize> =
        p.components.iter().enumerate().flat_map(|(i, c)| c.cells.iter().map(move |cell| (cell, i))).collect();
    owner[&cell]
}

fn center(p: &Partition, cell: &[usize]) -> Vec<Surd> {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    cell.iter().enumerate().map(|(i, &j)| (&p.grid[i][j] + &p.grid[i][j + 1]).mul_rational(&half)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn volumes_sum_to_one(num in 0i64..40, den in 1i64..5, t in 1u8..=2, two in any::<bool>()) {
        let s = if two { two_slope_scheme().unwrap() } else { fibonacci_scheme("1/3").unwrap() };
        let spec = analytic_spectrum(&s, &radius(num, den), patch_type(t), &closed_cube(1).unwrap()).unwrap();
        prop_assert_eq!(spec.partition.total_volume(), Surd::one());
        prop_assert_eq!(spec.total_frequency(), Surd::one());
    }

    #[test]
    fn type_two_classes_match_components(r in 0i64..12, two in any::<bool>()) {
        let s = if two { two_slope_scheme().unwrap() } else { fibonacci_scheme("1/3").unwrap() };
        let spec = analytic_spectrum(&s, &Surd::from_int(r), PatchType::Type2, &closed_cube(1).unwrap()).unwrap();
        prop_assert_eq!(spec.class_count(), spec.component_count());
        prop_assert!(spec.is_injective());
        // full walls only: every component is a single box
        prop_assert!(spec.partition.components.iter().all(|c| c.cells.len() == 1));
    }

    #[test]
    fn partitions_refine(r in 0i64..8, extra in 1i64..4, t in 1u8..=2, two in any::<bool>()) {
        let s = if two { two_slope_scheme().unwrap() } else { fibonacci_scheme("1/3").unwrap() };
        let omega = closed_cube(1).unwrap();
        let (small, big) = (Surd::from_int(r), Surd::from_int(r + extra));
        let ws: Vec<_> = walls(&s, &small, patch_type(t), &omega).unwrap();
        let wb: Vec<_> = walls(&s, &big, patch_type(t), &omega).unwrap();
        for w in &ws {
            prop_assert!(wb.iter().any(|v| v.coordinate == w.coordinate && v.offset == w.offset));
        }
        let coarse = analytic_spectrum(&s, &small, patch_type(t), &omega).unwrap().partition;
        let fine = analytic_spectrum(&s, &big, patch_type(t), &omega).unwrap().partition;
        for comp in &fine.components {
            let owners: Vec<usize> = comp.cells.iter().map(|c| locate(&coarse, &center(&fine, c))).collect();
            prop_assert!(owners.windows(2).all(|w| w[0] == w[1]));
        }
    }
}

#[test]
fn empirical_frequencies_converge() {
    let omega = closed_cube(1).unwrap();
    let ball = 2000;
    for s in [fibonacci_scheme("1/3").unwrap(), two_slope_scheme().unwrap()] {
        for r in [1, 3] {
            let (err, _) = empirical_gap(&s, &omega, r, PatchType::Type2, ball).unwrap();
            assert!(err <= 20.0 / ball as f64, "r={r}: {err}");
        }
    }
}
