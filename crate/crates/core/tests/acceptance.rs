//! The acceptance suite: every check runs its full stated corpus at zero
//! tolerance (exact arithmetic) unless noted, printing one line per
//! criterion. `cargo test --test acceptance -- --nocapture` shows the lines.

use penrose_core::selftest;

fn run(result: selftest::CheckResult) {
    let status = if result.passed { "pass" } else { "FAIL" };
    println!("[{status}] {} ({}): {}", result.name, result.anchor, result.details);
    assert!(result.passed, "{}: {}", result.name, result.details);
}

const SEED: u64 = 20240817;

#[test]
fn criterion_01_edge_identity_suite() {
    run(selftest::check_edge_identities(SEED));
}

#[test]
fn criterion_02_formula_concordance() {
    run(selftest::check_formula_concordance(SEED + 1));
}

#[test]
fn criterion_03_face_point_concurrency() {
    run(selftest::check_face_concurrency(SEED + 2));
}

#[test]
fn criterion_04_face_conic_and_diagonal_identities() {
    run(selftest::check_face_identities(SEED + 3));
}

#[test]
fn criterion_05_completion_round_trip() {
    run(selftest::check_completion_round_trip(SEED + 4));
}

#[test]
fn criterion_06_hypercube_edges() {
    run(selftest::check_hypercube(SEED + 5));
}

#[test]
fn criterion_07_extrude_slice_round_trip() {
    run(selftest::check_extrude_slice_round_trip(SEED + 6));
}

#[test]
fn criterion_08_basis_completion_agreement() {
    run(selftest::check_basis_completion_agreement(SEED + 7));
}

#[test]
fn criterion_09_scenario_suite() {
    run(selftest::check_scenarios(SEED + 8));
}

#[test]
fn criterion_10_two_completion_construction() {
    let started = std::time::Instant::now();
    run(selftest::check_two_completions(SEED + 9));
    assert!(started.elapsed().as_secs_f64() < 1.0, "two-completion check must run in under a second");
}

#[test]
fn criterion_11_degeneracy_classifiers() {
    run(selftest::check_degeneracy_classifiers(SEED + 10));
}

#[test]
fn supplement_dual_side_contacts() {
    run(selftest::check_dual_contacts(SEED + 11));
}

#[test]
fn supplement_polarity_restriction() {
    run(selftest::check_polarity_restriction(SEED + 12));
}

#[test]
fn criterion_01_runtime_budget() {
    let started = std::time::Instant::now();
    run(selftest::check_edge_identities(SEED + 13));
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "edge-identity suite took {elapsed:.2} s, budget is 10 s");
}
