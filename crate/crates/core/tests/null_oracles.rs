//! Empirical nulls against exhaustively enumerated ones.

use posim::emi::{empirical_expected_mi, DagNullSpec};

/// Two labellings of the single link, I ∈ {0, ln 2}.
const EXACT_N2_M1: f64 = std::f64::consts::LN_2 / 2.0;
/// Twelve equally likely labelled outcomes of (root, parent, extra link).
const EXACT_N3_M2: f64 = 0.3040988310811231;

fn check(n: usize, m: usize, exact: f64) {
    let null = empirical_expected_mi(&DagNullSpec {
        n,
        m,
        samples: 20_000,
        seed: 17,
    })
    .unwrap();
    assert!(null.stderr_i > 0.0);
    let z = (null.mean_i - exact).abs() / null.stderr_i;
    assert!(
        z < 3.0,
        "n={n} m={m}: mean {} exact {exact} z {z}",
        null.mean_i
    );
}

#[test]
fn two_candidates_one_link() {
    check(2, 1, EXACT_N2_M1);
}

#[test]
fn three_candidates_two_links() {
    check(3, 2, EXACT_N3_M2);
}
