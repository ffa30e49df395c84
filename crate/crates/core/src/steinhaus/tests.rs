use super::*;
use crate::exactnum::rat;

const PHI: &str = "(-1+1*sqrt(5))/2";

fn phi() -> Surd {
    Surd::parse(PHI).unwrap()
}

fn s(x: &str) -> Surd {
    Surd::parse(x).unwrap()
}

#[test]
fn golden_partitions() {
    let p = circle_partition(&phi(), 3).unwrap();
    let g: Vec<Surd> = p.gaps().into_iter().map(|(g, _)| g).collect();
    assert_eq!(g.len(), 2);
    assert!((g[0].to_f64() - 0.2360679).abs() < 1e-6);
    assert!((g[1].to_f64() - 0.3819660).abs() < 1e-6);

    let p = circle_partition(&phi(), 4).unwrap();
    let g: Vec<Surd> = p.gaps().into_iter().map(|(g, _)| g).collect();
    assert_eq!(g, vec![s("(7-3*sqrt(5))/2"), s("(-2+1*sqrt(5))/1"), s("(3-1*sqrt(5))/2")]);
    assert_eq!(&g[0] + &g[1], g[2]);
    assert!(three_distance_law(&g));

    let one = circle_partition(&phi(), 1).unwrap();
    assert_eq!(one.intervals.len(), 1);
    assert_eq!(one.intervals[0].length, Surd::one());
}

#[test]
fn lengths_sum_to_one() {
    for n in [1, 2, 7, 30] {
        let p = circle_partition(&s("(0+1*sqrt(2))/1"), n).unwrap();
        let total = p.intervals.iter().fold(Surd::zero(), |acc, a| &acc + &a.length);
        assert_eq!(total, Surd::one());
    }
}

#[test]
fn law_rejects_bad_triples() {
    assert!(!three_distance_law(&[Surd::from_int(1), Surd::from_int(2), Surd::from_int(4)]));
    assert!(three_distance_law(&[Surd::from_int(1), Surd::from_int(2), Surd::from_int(3)]));
    assert!(!three_distance_law(&[Surd::from_int(1), Surd::from_int(2), Surd::from_int(3), Surd::from_int(5)]));
    assert_eq!(three_distance_scan(&phi(), 300).unwrap(), None);
}

#[test]
fn golden_wedge_at_four() {
    let g = gamma(&phi(), 4).unwrap();
    g.check_degrees().unwrap();
    assert_eq!(g.branch_vertex(), Some(3));
    assert_eq!(g.merge_vertex(), Some(3));
    assert_eq!(g.classify(), Shape::Wedge);
    let mut sizes: Vec<usize> = g.segments().iter().map(Vec::len).collect();
    sizes.sort();
    // loops of 2 and 3 edges through the wrap interval
    assert_eq!(sizes, vec![1, 2]);
}

#[test]
fn golden_three_is_pinned() {
    let g = gamma(&phi(), 3).unwrap();
    g.check_degrees().unwrap();
    assert_eq!(g.classify(), Shape::Theta);
}

#[test]
fn single_point_is_a_bouquet() {
    let g = gamma(&phi(), 1).unwrap();
    assert_eq!(g.vertex_count(), 1);
    assert_eq!(g.edges, vec![(0, 0), (0, 0)]);
    g.check_degrees().unwrap();
    assert_eq!(g.classify(), Shape::Wedge);
}

#[test]
fn rational_rig() {
    assert_eq!(gamma(&s("1/5"), 3), Err(Error::RationalAlpha));
    let full = gamma_any(&s("2/5"), 7).unwrap();
    full.check_degrees().unwrap();
    assert_eq!(full.classify(), Shape::Circle);
    assert_eq!(full.vertex_count(), 5);
    let partial = gamma_any(&s("2/5"), 3).unwrap();
    partial.check_degrees().unwrap();
    assert_ne!(partial.classify(), Shape::Circle);
}

#[test]
fn segments_share_lengths() {
    for n in 2..40 {
        let g = gamma(&s("(0+1*sqrt(3))/1"), n).unwrap();
        g.check_degrees().unwrap();
        for seg in g.segments() {
            let lens: Vec<&Surd> = seg.iter().map(|&v| &g.partition.intervals[v].length).collect();
            assert!(lens.windows(2).all(|w| w[0] == w[1]), "N={n}");
        }
    }
}

#[test]
fn ergodic_counts() {
    let beta = s("1/3");
    let e = ergodic_freq(&beta, &phi(), 1, 10_000).unwrap();
    assert_eq!(e.counts, vec![10_000]);
    let e = ergodic_freq(&beta, &phi(), 5, 10_000).unwrap();
    let p = circle_partition(&phi(), 5).unwrap();
    let f = e.frequencies();
    assert_eq!(f.iter().fold(BigRational::zero(), |a, b| a + b), rat(1, 1));
    for (est, arc) in f.iter().zip(&p.intervals) {
        let est = num_traits::ToPrimitive::to_f64(est).unwrap();
        assert!((est - arc.length.to_f64()).abs() <= 0.01);
    }
    assert_eq!(ergodic_freq(&s("(3-2*sqrt(5))/1"), &phi(), 3, 10), Err(Error::DegenerateBeta));
    assert_eq!(ergodic_freq(&s("2"), &phi(), 3, 10), Err(Error::DegenerateBeta));
    assert!(ergodic_freq(&s("(0+1*sqrt(5))/7"), &phi(), 3, 10).is_ok());
    assert_eq!(ergodic_freq(&s("(0+1*sqrt(2))/1"), &phi(), 3, 10), Err(Error::MixedFields(5, 2)));
}

#[test]
fn csv_shape() {
    let rows = suite(&phi(), 4).unwrap();
    let mut buf = Vec::new();
    write_csv(&rows, 6, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,distinct_gap_count,gaps,shape,branch_vertex_index,merge_vertex_index");
    assert!(lines[4].starts_with("4,3,"));
    assert!(lines[4].ends_with(",wedge,3,3"));
}
