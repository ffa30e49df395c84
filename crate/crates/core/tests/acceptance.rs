//! Acceptance criteria, one test each. Every test prints a single status line
//! straight to stdout so it shows up even when output capture is on.

use std::io::Write;
use std::time::Instant;

use quasigap::verify;

fn check(id: u8) {
    let start = Instant::now();
    let report = verify::run(&[id]).remove(0);
    let line = format!("{report} [{:.1}s]\n", start.elapsed().as_secs_f64());
    std::io::stdout().lock().write_all(line.as_bytes()).unwrap();
    assert!(report.passed, "{report}");
}

#[test]
fn criterion_01_three_distance_law() {
    check(1);
}

#[test]
fn criterion_02_class_component_bijection() {
    check(2);
}

#[test]
fn criterion_03_empirical_matches_analytic() {
    check(3);
}

#[test]
fn criterion_04_sandwich_inclusions() {
    check(4);
}

#[test]
fn criterion_05_bounded_spectrum_growth() {
    check(5);
}

#[test]
fn criterion_06_gap_growth() {
    check(6);
}

#[test]
fn criterion_07_dirichlet_witnesses() {
    check(7);
}

#[test]
fn criterion_08_partition_conservation() {
    check(8);
}

#[test]
fn criterion_09_shift_invariance() {
    check(9);
}

#[test]
fn criterion_10_rotation_graph() {
    check(10);
}
