//! Exact expected mutual information under uniform relabelling of the
//! candidates, and the adjusted mutual information built on it.
//!
//! Fix `x` with `|D_κ(x)| = a`. Relabelling μ uniformly sends `x` to a
//! uniform position `y` with `|D_μ(y)| = b`, and the image of `D_μ(y)` is a
//! uniform `b`-subset of the `C − 1` candidates other than `x`. The overlap
//! `c` with `D_κ(x)` is therefore hypergeometric, and the count of
//! relabellings that realise it is
//!
//! ```text
//! N(C, a, b, c) = a! b! (C−1−a)! (C−1−b)! / (c! (a−c)! (b−c)! (C−1−a−b+c)!)
//! ```
//!
//! so that `Σ_c N = (C − 1)!`. The expectation is
//! `(1/C!) Σ_x Σ_y Σ_c N · I(C, a, b, c)`, which only depends on the two
//! multisets of down-set sizes. Terms are grouped by distinct `(a, b)`.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mi::{adjusted, mutual_information};
use crate::order::PartialOrder;

/// `lf[k] = ln(k!)` for `k = 0..=n`, built by cumulative summation.
#[derive(Debug, Clone)]
pub struct LogFactorialTable {
    lf: Vec<f64>,
}

impl LogFactorialTable {
    pub fn new(n: usize) -> Self {
        let mut lf = Vec::with_capacity(n + 1);
        lf.push(0.0);
        let mut acc = 0.0f64;
        for k in 1..=n {
            acc += (k as f64).ln();
            lf.push(acc);
        }
        Self { lf }
    }

    /// Largest `k` covered by the table.
    pub fn max(&self) -> usize {
        self.lf.len() - 1
    }

    #[inline]
    pub fn get(&self, k: usize) -> f64 {
        self.lf[k]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.lf
    }
}

fn check_range(candidates: usize, a: usize, b: usize, c: usize) -> Result<()> {
    let ok = candidates >= 1
        && a < candidates
        && b < candidates
        && c <= a.min(b)
        && a + b < c + candidates;
    if ok {
        Ok(())
    } else {
        Err(Error::RangeViolation {
            candidates,
            a,
            b,
            overlap: c,
        })
    }
}

/// Mutual information of the indicator pair for down sets of sizes `a`
/// and `b` that share `c` candidates out of `candidates`.
pub fn term_mi(candidates: usize, a: usize, b: usize, c: usize) -> Result<f64> {
    check_range(candidates, a, b, c)?;
    Ok(term_mi_unchecked(candidates, a, b, c))
}

#[inline]
fn term_mi_unchecked(candidates: usize, a: usize, b: usize, c: usize) -> f64 {
    let n = candidates as f64;
    let (af, bf, cf) = (a as f64, b as f64, c as f64);
    let cell = |count: f64, row: f64, col: f64| {
        if count > 0.0 {
            count / n * (count * n / (row * col)).ln()
        } else {
            0.0
        }
    };
    // pairs of mirror cells are added first so that swapping a and b gives
    // bit-identical output
    let both = cell(cf, af, bf) + cell(n - af - bf + cf, n - af, n - bf);
    let one_side = cell(af - cf, af, n - bf) + cell(bf - cf, n - af, bf);
    (both + one_side).max(0.0)
}

/// `ln N(C, a, b, c)`.
pub fn log_term_count(
    table: &LogFactorialTable,
    candidates: usize,
    a: usize,
    b: usize,
    c: usize,
) -> Result<f64> {
    check_range(candidates, a, b, c)?;
    if table.max() + 1 < candidates {
        return Err(Error::RangeViolation {
            candidates,
            a,
            b,
            overlap: c,
        });
    }
    Ok(log_term_count_unchecked(table, candidates, a, b, c))
}

#[inline]
fn log_term_count_unchecked(
    lf: &LogFactorialTable,
    candidates: usize,
    a: usize,
    b: usize,
    c: usize,
) -> f64 {
    let rest = candidates - 1;
    (lf.get(a) + lf.get(b)) + (lf.get(rest - a) + lf.get(rest - b))
        - (lf.get(c) + lf.get(rest + c - a - b))
        - (lf.get(a - c) + lf.get(b - c))
}

/// Outcome of an expected-mutual-information evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NullModelReport {
    /// `⟨I(κ, μ)⟩` in nats.
    pub expected_i: f64,
    /// Number of distinct `(a, b, c)` terms evaluated.
    pub term_count: usize,
    /// Wall-clock seconds.
    pub elapsed: f64,
}

/// Candidates per down-set size, skipping size 0 (those contribute
/// nothing).
fn size_histogram(order: &PartialOrder) -> Vec<u64> {
    let mut hist = vec![0u64; order.len()];
    for &s in order.down_sets().sizes() {
        hist[s] += 1;
    }
    hist[0] = 0;
    hist
}

/// Σ_c N(C,a,b,c)/(C−1)! · I(C,a,b,c), summed in ascending `c`.
fn pair_sum(lf: &LogFactorialTable, candidates: usize, a: usize, b: usize) -> (f64, usize) {
    let lo = (a + b).saturating_sub(candidates - 1);
    let hi = a.min(b);
    let norm = lf.get(candidates - 1);
    let mut sum = 0.0;
    for c in lo..=hi {
        let weight = (log_term_count_unchecked(lf, candidates, a, b, c) - norm).exp();
        sum += weight * term_mi_unchecked(candidates, a, b, c);
    }
    (sum, hi + 1 - lo)
}

/// `⟨I(κ, μ)⟩` under independent uniform relabelling.
///
/// Unordered size pairs are visited in ascending order with integer
/// multiplicities, so the result is bit-identical when the arguments are
/// swapped and independent of the thread count.
pub fn expected_mi(kappa: &PartialOrder, mu: &PartialOrder) -> Result<NullModelReport> {
    kappa.check_same_domain(mu)?;
    let start = Instant::now();
    let candidates = kappa.len();
    let (hk, hm) = (size_histogram(kappa), size_histogram(mu));
    let lf = LogFactorialTable::new(candidates);

    let partials: Vec<(f64, usize)> = (1..candidates)
        .into_par_iter()
        .map(|lo| {
            let mut sum = 0.0;
            let mut terms = 0;
            for hi in lo..candidates {
                let weight = if lo == hi {
                    hk[lo] * hm[lo]
                } else {
                    hk[lo] * hm[hi] + hk[hi] * hm[lo]
                };
                if weight == 0 {
                    continue;
                }
                let (s, t) = pair_sum(&lf, candidates, lo, hi);
                sum += weight as f64 * s;
                terms += t;
            }
            (sum, terms)
        })
        .collect();

    let (sum, term_count) = partials
        .iter()
        .fold((0.0, 0), |(s, t), &(ps, pt)| (s + ps, t + pt));
    Ok(NullModelReport {
        expected_i: sum / candidates as f64,
        term_count,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

/// Adjusted mutual information with the exact relabelling null.
pub fn ami(kappa: &PartialOrder, mu: &PartialOrder) -> Result<f64> {
    let mi = mutual_information(kappa, mu)?;
    let null = expected_mi(kappa, mu)?;
    adjusted(mi.total, mi.h_kappa, mi.h_mu, null.expected_i)
}
