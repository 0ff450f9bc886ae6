//! Mutual information between the down-set indicator variables of two
//! orders.
//!
//! For a candidate `x`, pick `y` uniformly from `C`. The indicator `i(x)`
//! says whether `y ∈ D_κ(x)`, the indicator `j(x)` whether `y ∈ D_μ(x)`. The
//! mutual information of the pair depends only on `|D_κ(x)|`, `|D_μ(x)|`
//! and the overlap, and the order-level quantities sum it over candidates.
//! All values are in nats; `0·ln 0` is taken as 0.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::PartialOrder;

/// Joint distribution of one indicator pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Joint2x2 {
    pub p11: f64,
    pub p10: f64,
    pub p01: f64,
    pub p00: f64,
}

impl Joint2x2 {
    /// Joint distribution of two subsets of sizes `a` and `b` overlapping in
    /// `c` candidates, drawn from `n`.
    pub fn from_counts(n: usize, a: usize, b: usize, c: usize) -> Self {
        debug_assert!(c <= a.min(b) && a + b <= n + c);
        let n = n as f64;
        let (a, b, c) = (a as f64, b as f64, c as f64);
        Self {
            p11: c / n,
            p10: (a - c) / n,
            p01: (b - c) / n,
            p00: (n - a - b + c) / n,
        }
    }

    /// `P(i = 1)`
    pub fn row(&self) -> f64 {
        self.p11 + self.p10
    }

    /// `P(j = 1)`
    pub fn col(&self) -> f64 {
        self.p11 + self.p01
    }
}

/// Joint distribution of `(i_κ(x), j_μ(x))`.
pub fn joint_dist(kappa: &PartialOrder, mu: &PartialOrder, x: usize) -> Result<Joint2x2> {
    kappa.check_same_domain(mu)?;
    let c = kappa.down_set(x).intersection_count(mu.down_set(x));
    Ok(Joint2x2::from_counts(
        kappa.len(),
        kappa.down_sets().size(x),
        mu.down_sets().size(x),
        c,
    ))
}

#[inline]
fn plogp_ratio(p: f64, q: f64) -> f64 {
    if p > 0.0 {
        p * (p / q).ln()
    } else {
        0.0
    }
}

/// Mutual information of an indicator pair.
pub fn candidate_mi(j: &Joint2x2) -> f64 {
    let (r, s) = (j.row(), j.col());
    // mirror cells first: swapping the two variables is bit-exact
    let mi = (plogp_ratio(j.p11, r * s) + plogp_ratio(j.p00, (1.0 - r) * (1.0 - s)))
        + (plogp_ratio(j.p10, r * (1.0 - s)) + plogp_ratio(j.p01, (1.0 - r) * s));
    debug_assert!(mi > -1e-12, "negative mutual information {mi}");
    mi.max(0.0)
}

/// Entropy of a Bernoulli(p) variable.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |q: f64| if q > 0.0 { -q * q.ln() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// Per-candidate and total mutual information with both order entropies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MiBreakdown {
    pub per_candidate: Vec<f64>,
    pub total: f64,
    pub h_kappa: f64,
    pub h_mu: f64,
}

/// `I(κ, μ) = Σ_x I(i_κ(x), j_μ(x))` together with `H(κ)` and `H(μ)`.
pub fn mutual_information(kappa: &PartialOrder, mu: &PartialOrder) -> Result<MiBreakdown> {
    kappa.check_same_domain(mu)?;
    let per_candidate: Vec<f64> = (0..kappa.len())
        .map(|x| candidate_mi(&joint_dist(kappa, mu, x).expect("same domain")))
        .collect();
    Ok(MiBreakdown {
        total: per_candidate.iter().sum(),
        per_candidate,
        h_kappa: entropy(kappa),
        h_mu: entropy(mu),
    })
}

pub(crate) fn mi_total(kappa: &PartialOrder, mu: &PartialOrder) -> Result<f64> {
    kappa.check_same_domain(mu)?;
    Ok((0..kappa.len())
        .map(|x| candidate_mi(&joint_dist(kappa, mu, x).expect("same domain")))
        .sum())
}

/// `H(κ) = Σ_x h(|D(x)| / |C|)`; depends only on the down-set sizes.
pub fn entropy(order: &PartialOrder) -> f64 {
    let n = order.len() as f64;
    order
        .down_sets()
        .sizes()
        .iter()
        .map(|&s| binary_entropy(s as f64 / n))
        .sum()
}

/// Normalised mutual information, `I / (½(H(κ) + H(μ)))`.
pub fn nmi(kappa: &PartialOrder, mu: &PartialOrder) -> Result<f64> {
    let mi = mutual_information(kappa, mu)?;
    normalised(mi.total, mi.h_kappa, mi.h_mu)
}

pub(crate) fn normalised(i: f64, h_kappa: f64, h_mu: f64) -> Result<f64> {
    let mean = 0.5 * (h_kappa + h_mu);
    if mean <= 0.0 {
        return Err(Error::DegenerateOrder(
            "both orders are antichains and carry no ranking information",
        ));
    }
    Ok(i / mean)
}

/// `(I − E) / (½(H(κ) + H(μ)) − E)` for an expected mutual information `E`.
pub(crate) fn adjusted(i: f64, h_kappa: f64, h_mu: f64, expected: f64) -> Result<f64> {
    let denominator = 0.5 * (h_kappa + h_mu) - expected;
    if denominator <= 1e-12 {
        return Err(Error::DegenerateOrder(
            "mean entropy does not exceed the expected mutual information",
        ));
    }
    Ok((i - expected) / denominator)
}

/// Result of the intersection-count measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NaiveNmi {
    pub value: f64,
    /// `1 − naive(κ, κ)`: how far the measure falls short of 1 on identical
    /// orders.
    pub self_defect: f64,
}

/// Normalised mutual information of the joint distribution
/// `P(i, j) ∝ |D_κ(i) ∩ D_μ(j)|`.
///
/// Kept as a diagnostic: its marginals mix both orders, and it does not
/// reach 1 when the orders coincide.
pub fn naive_nmi(kappa: &PartialOrder, mu: &PartialOrder) -> Result<NaiveNmi> {
    let value = naive_value(kappa, mu)?;
    let self_value = naive_value(kappa, kappa)?;
    Ok(NaiveNmi {
        value,
        self_defect: 1.0 - self_value,
    })
}

fn naive_value(kappa: &PartialOrder, mu: &PartialOrder) -> Result<f64> {
    kappa.check_same_domain(mu)?;
    let n = kappa.len();
    let counts: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| kappa.down_set(i).intersection_count(mu.down_set(j)))
                .collect()
        })
        .collect();
    let row: Vec<usize> = counts.iter().map(|r| r.iter().sum()).collect();
    let col: Vec<usize> = (0..n).map(|j| counts.iter().map(|r| r[j]).sum()).collect();
    let total: usize = row.iter().sum();
    if total == 0 {
        return Err(Error::AllEmptyDownSets);
    }
    let t = total as f64;
    let mut mi = 0.0;
    for (i, r) in counts.iter().enumerate() {
        for (j, &nij) in r.iter().enumerate() {
            if nij > 0 {
                let p = nij as f64 / t;
                mi += p * (nij as f64 * t / (row[i] as f64 * col[j] as f64)).ln();
            }
        }
    }
    let marginal_entropy = |m: &[usize]| -> f64 {
        m.iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / t;
                -p * p.ln()
            })
            .sum()
    };
    let mean = 0.5 * (marginal_entropy(&row) + marginal_entropy(&col));
    if mean <= 0.0 {
        // a single non-empty cell: both marginals are point masses
        return Err(Error::DegenerateOrder("naive marginals are point masses"));
    }
    Ok(mi / mean)
}
