//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! The same runners back the CLI's `all` subcommand, so `qma-forge all`
//! reproduces this suite outside the test harness.

use qma_forge::experiments::criterion_report;

const SEED: u64 = 2024;

fn run(index: usize) {
    let report = criterion_report(index, SEED).expect("criterion runs");
    let verdict = if report.pass { "PASS" } else { "FAIL" };
    println!(
        "criterion {index} ({}): {verdict} [{} checks, {:.2} s]",
        report.subcommand,
        report.results.len(),
        report.wall_time_s
    );
    for check in &report.results {
        if !check.pass {
            println!(
                "  failing check: {} (measured {:.6e}, expected {:.6e}, tolerance {:.1e})",
                check.name, check.measured, check.expected, check.tolerance
            );
        }
    }
    assert!(report.pass, "criterion {index} failed");
}

#[test]
fn criterion_1_swap_test_formula() {
    run(1);
}

#[test]
fn criterion_2_fidelity_lemmas() {
    run(2);
}

#[test]
fn criterion_3_three_to_two_reduction() {
    run(3);
}

#[test]
fn criterion_4_general_reduction_specialization() {
    run(4);
}

#[test]
fn criterion_5_amplification_arithmetic() {
    run(5);
}

#[test]
fn criterion_6_perfect_soundness_and_uniform_proofs() {
    run(6);
}

#[test]
fn criterion_7_indistinguishability() {
    run(7);
}

#[test]
fn criterion_8_optimizer_sanity() {
    run(8);
}
