//! Acceptance suite: each headline property at its pinned instance count
//! and tolerance, one pass/fail line per criterion.

use petrov_core::verification::{self, CheckOutcome, VerifyConfig};

fn assert_outcome(criterion: &str, outcome: CheckOutcome) {
    let status = if outcome.passed { "PASS" } else { "FAIL" };
    println!("[{status}] {criterion}: {}", outcome.detail);
    assert!(outcome.passed, "{criterion}: {}", outcome.detail);
}

fn sizes() -> VerifyConfig {
    VerifyConfig::default()
}

#[test]
fn criterion_01_star_algebra() {
    assert_outcome("star algebra (exact)", verification::check_star_algebra());
}

#[test]
fn criterion_02_block_characterizations() {
    assert_outcome(
        "block characterizations, both directions",
        verification::check_block_characterizations(sizes().block_instances),
    );
}

#[test]
fn criterion_03_almost_einstein_forward() {
    assert_outcome(
        "commuting draws are almost-Einstein with equal Weyl halves",
        verification::check_almost_einstein_forward(sizes().einstein_instances),
    );
}

#[test]
fn criterion_04_adapted_duality() {
    assert_outcome(
        "adapted sectional duality under the Lorentzian star",
        verification::check_adapted_duality(sizes().duality_instances, sizes().duality_planes),
    );
}

#[test]
fn criterion_05_split_trace_equivalence() {
    assert_outcome(
        "split trace proportionality equivalence, both directions",
        verification::check_split_trace_equivalence(sizes().trace_instances),
    );
}

#[test]
fn criterion_06_criticality_finite_difference() {
    assert_outcome(
        "closed-form criticality agrees with finite differences",
        verification::check_criticality_finite_difference(sizes().criticality_instances),
    );
}

#[test]
fn criterion_07_eigenplane_criticality() {
    assert_outcome(
        "adapted eigen-planes are critical planes (and conversely)",
        verification::check_eigenplane_criticality(sizes().eigenplane_instances),
    );
}

#[test]
fn criterion_08_jordan_roundtrip() {
    assert_outcome(
        "synthesized Jordan shapes classify to their type",
        verification::check_jordan_roundtrip(sizes().jordan_per_type),
    );
}

#[test]
fn criterion_09_normal_form_recovery() {
    assert_outcome(
        "normal-form reconstruction and planted recovery",
        verification::check_normal_form_recovery(sizes().normal_form_instances),
    );
}

#[test]
fn criterion_10_s_component_routes() {
    assert_outcome(
        "component route equals operator route for the commuting part",
        verification::check_s_component_routes(sizes().component_instances),
    );
}

#[test]
fn criterion_11_cli_pipeline() {
    assert_outcome(
        "generator to file to classification label round trip",
        verification::check_cli_pipeline(),
    );
}
