//! One test per acceptance criterion. Each prints a PASS/FAIL line with the
//! failing checks, then asserts.

use ptcycle_core::reproduce::{run_criterion, PaperConstants};
use ptcycle_core::NumericsConfig;

fn criterion(id: u8) {
    let report = run_criterion(id, &PaperConstants::default(), &NumericsConfig::default()).unwrap();
    println!("{}", report.summary());
    assert!(report.passed(), "{}", report.summary());
}

#[test]
fn criterion_01_entropy_at_cycle_temperatures() {
    criterion(1);
}

#[test]
fn criterion_02_corner_energies() {
    criterion(2);
}

#[test]
fn criterion_03_lambda2_and_stirling() {
    criterion(3);
}

#[test]
fn criterion_04_tlambda_table() {
    criterion(4);
}

#[test]
fn criterion_05_carnot_table() {
    criterion(5);
}

#[test]
fn criterion_06_first_law_and_closure() {
    criterion(6);
}

#[test]
fn criterion_07_time_plane_points() {
    criterion(7);
}

#[test]
fn criterion_08_symmetric_structure() {
    criterion(8);
}

#[test]
fn criterion_09_oracle_equivalences() {
    criterion(9);
}

#[test]
fn criterion_10_maxwell_construction() {
    criterion(10);
}

#[test]
fn criterion_11_asymptotics() {
    criterion(11);
}
