//! One test per acceptance criterion; each prints its pass/fail lines.

use ncomplex::verify::{run_criterion, VerifyConfig};

fn criterion(c: u8) {
    let outcomes = run_criterion(c, &VerifyConfig::default());
    assert!(!outcomes.is_empty());
    let passed = outcomes.iter().all(|o| o.passed);
    println!("criterion {c}: {}", if passed { "PASS" } else { "FAIL" });
    for o in &outcomes {
        println!("  {o}");
    }
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed).map(|o| o.to_string()).collect();
    assert!(failed.is_empty(), "criterion {c} failed:\n{}", failed.join("\n"));
}

#[test]
fn criterion_01_arithmetic_oracle() {
    criterion(1);
}

#[test]
fn criterion_02_exponential_oracle() {
    criterion(2);
}

#[test]
fn criterion_03_cosexponential_identities() {
    criterion(3);
}

#[test]
fn criterion_04_two_dimensional_reductions() {
    criterion(4);
}

#[test]
fn criterion_05_elementary_round_trips() {
    criterion(5);
}

#[test]
fn criterion_06_analyticity() {
    criterion(6);
}

#[test]
fn criterion_07_residue_theorem() {
    criterion(7);
}

#[test]
fn criterion_08_factorization() {
    criterion(8);
}

#[test]
fn criterion_09_power_series() {
    criterion(9);
}

#[test]
fn criterion_10_odd_planar_equivalence() {
    criterion(10);
}
