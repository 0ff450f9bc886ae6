//! Classical ranking distances: inversion count, footrule, and their
//! nearest-neighbour and Hausdorff forms over linear extensions.
//!
//! The extension-based forms enumerate `Ext(κ) × Ext(μ)` and are meant for
//! small candidate sets only.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::{linear_extensions, PartialOrder, TotalOrderRanking};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Kendall,
    Footrule,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Kendall => "kendall",
            Metric::Footrule => "footrule",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceReport {
    pub value: u64,
    pub metric_id: String,
    /// `|Ext(κ)| + |Ext(μ)|`; 0 for the direct metrics.
    pub extensions_enumerated: usize,
}

/// Number of unordered pairs ranked one way by κ and the opposite way by
/// μ. Pairs incomparable in either order do not count.
pub fn kendall_tau(kappa: &PartialOrder, mu: &PartialOrder) -> Result<u64> {
    kappa.check_same_domain(mu)?;
    let n = mu.len();
    let mut above = vec![FixedBitSet::with_capacity(n); n];
    for y in 0..n {
        for z in mu.down_set(y).ones() {
            above[z].insert(y);
        }
    }
    Ok((0..n)
        .map(|x| kappa.down_set(x).intersection_count(&above[x]) as u64)
        .sum())
}

/// `Σ_x |κ(x) − μ(x)|` over positions.
pub fn spearman_footrule(kappa: &TotalOrderRanking, mu: &TotalOrderRanking) -> Result<u64> {
    if kappa.len() != mu.len() {
        return Err(Error::DomainMismatch {
            left: kappa.len(),
            right: mu.len(),
        });
    }
    Ok(kappa
        .positions()
        .iter()
        .zip(mu.positions())
        .map(|(&a, &b)| a.abs_diff(b) as u64)
        .sum())
}

/// Footrule between two orders that must both be total.
pub fn spearman_footrule_orders(kappa: &PartialOrder, mu: &PartialOrder) -> Result<u64> {
    kappa.check_same_domain(mu)?;
    spearman_footrule(
        &TotalOrderRanking::from_order(kappa)?,
        &TotalOrderRanking::from_order(mu)?,
    )
}

/// Inversions between two total orders.
pub fn ranking_kendall(kappa: &TotalOrderRanking, mu: &TotalOrderRanking) -> Result<u64> {
    if kappa.len() != mu.len() {
        return Err(Error::DomainMismatch {
            left: kappa.len(),
            right: mu.len(),
        });
    }
    let (p, q) = (kappa.positions(), mu.positions());
    let mut count = 0;
    for x in 0..p.len() {
        for y in x + 1..p.len() {
            if (p[x] < p[y]) != (q[x] < q[y]) {
                count += 1;
            }
        }
    }
    Ok(count)
}

fn metric_value(metric: Metric, a: &TotalOrderRanking, b: &TotalOrderRanking) -> u64 {
    match metric {
        Metric::Kendall => ranking_kendall(a, b),
        Metric::Footrule => spearman_footrule(a, b),
    }
    .expect("extensions share the domain")
}

/// Pairwise metric matrix over `Ext(κ) × Ext(μ)`.
fn extension_matrix(
    kappa: &PartialOrder,
    mu: &PartialOrder,
    metric: Metric,
    cap: usize,
) -> Result<(Vec<Vec<u64>>, usize)> {
    kappa.check_same_domain(mu)?;
    let ext_k = linear_extensions(kappa, cap)?;
    let ext_m = linear_extensions(mu, cap)?;
    if ext_k.len().saturating_mul(ext_m.len()) > cap {
        return Err(Error::ExtensionCapExceeded(cap));
    }
    let matrix = ext_k
        .iter()
        .map(|a| ext_m.iter().map(|b| metric_value(metric, a, b)).collect())
        .collect();
    Ok((matrix, ext_k.len() + ext_m.len()))
}

/// Smallest metric value between an extension of κ and one of μ.
pub fn nn_distance(
    kappa: &PartialOrder,
    mu: &PartialOrder,
    metric: Metric,
    cap: usize,
) -> Result<DistanceReport> {
    let (matrix, enumerated) = extension_matrix(kappa, mu, metric, cap)?;
    let value = matrix.iter().flatten().copied().min().expect("non-empty");
    Ok(DistanceReport {
        value,
        metric_id: format!("{metric}-nn"),
        extensions_enumerated: enumerated,
    })
}

/// Hausdorff distance between `Ext(κ)` and `Ext(μ)` under the metric.
pub fn hausdorff_distance(
    kappa: &PartialOrder,
    mu: &PartialOrder,
    metric: Metric,
    cap: usize,
) -> Result<DistanceReport> {
    let (matrix, enumerated) = extension_matrix(kappa, mu, metric, cap)?;
    let rows = matrix
        .iter()
        .map(|row| *row.iter().min().expect("non-empty"))
        .max()
        .expect("non-empty");
    let cols = (0..matrix[0].len())
        .map(|j| matrix.iter().map(|row| row[j]).min().expect("non-empty"))
        .max()
        .expect("non-empty");
    Ok(DistanceReport {
        value: rows.max(cols),
        metric_id: format!("{metric}-hausdorff"),
        extensions_enumerated: enumerated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{gen_regular_tree, gen_total_order, DEFAULT_EXTENSION_CAP};

    fn chain(seq: &[usize]) -> PartialOrder {
        let edges: Vec<_> = seq.windows(2).map(|w| (w[0], w[1])).collect();
        PartialOrder::from_edges(seq.len(), &edges).unwrap()
    }

    fn ranking(seq: &[usize]) -> TotalOrderRanking {
        TotalOrderRanking::from_sequence(seq).unwrap()
    }

    #[test]
    fn kendall_examples() {
        let k = chain(&[0, 1, 2]);
        assert_eq!(kendall_tau(&k, &chain(&[2, 1, 0])).unwrap(), 3);
        assert_eq!(kendall_tau(&k, &k).unwrap(), 0);
        let t = gen_regular_tree(2, 4).unwrap();
        // 3 and 5 are cousins on level 3, 1 and 2 siblings on level 2
        assert_eq!(kendall_tau(&t, &t.swap_candidates(3, 5)).unwrap(), 0);
        assert_eq!(kendall_tau(&t, &t.swap_candidates(1, 2)).unwrap(), 0);
        assert!(kendall_tau(&k, &gen_total_order(4).unwrap()).is_err());
    }

    #[test]
    fn footrule_examples() {
        let a = ranking(&[0, 1, 2]);
        assert_eq!(spearman_footrule(&a, &a).unwrap(), 0);
        assert_eq!(spearman_footrule(&a, &ranking(&[2, 1, 0])).unwrap(), 4);
        let diamond = PartialOrder::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(
            spearman_footrule_orders(&diamond, &gen_total_order(4).unwrap()),
            Err(Error::NotTotalOrder(1, 2))
        );
    }

    #[test]
    fn extension_distances_on_total_orders() {
        let a = chain(&[0, 1, 2, 3]);
        let b = chain(&[1, 3, 0, 2]);
        let k = kendall_tau(&a, &b).unwrap();
        let f = spearman_footrule_orders(&a, &b).unwrap();
        for (metric, plain) in [(Metric::Kendall, k), (Metric::Footrule, f)] {
            assert_eq!(nn_distance(&a, &b, metric, 10).unwrap().value, plain);
            assert_eq!(hausdorff_distance(&a, &b, metric, 10).unwrap().value, plain);
        }
    }

    #[test]
    fn extension_distances_on_partial_orders() {
        let anti = PartialOrder::from_edges(3, &[]).unwrap();
        let c = chain(&[2, 0, 1]);
        let report = nn_distance(&anti, &c, Metric::Kendall, 100).unwrap();
        assert_eq!(report.value, 0);
        assert_eq!(report.extensions_enumerated, 7);
        assert_eq!(report.metric_id, "kendall-nn");

        let d1 = PartialOrder::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let d2 = d1.swap_candidates(1, 2);
        for metric in [Metric::Kendall, Metric::Footrule] {
            assert_eq!(nn_distance(&d1, &d2, metric, 100).unwrap().value, 0);
        }
        // Ext(κ) = Ext(κ): every extension has an exact partner, so the
        // Hausdorff distance of an order to itself is 0 (36 pairs checked)
        for metric in [Metric::Kendall, Metric::Footrule] {
            let h = hausdorff_distance(&anti, &anti, metric, 100).unwrap();
            assert_eq!(h.value, 0);
        }
        // antichain vs a chain: the reversal of the chain is an extension
        // at distance 3 from it
        assert_eq!(
            hausdorff_distance(&anti, &c, Metric::Kendall, 100)
                .unwrap()
                .value,
            3
        );
    }

    #[test]
    fn cap_on_pairs() {
        let anti = PartialOrder::from_edges(4, &[]).unwrap();
        assert_eq!(
            nn_distance(&anti, &anti, Metric::Kendall, 100),
            Err(Error::ExtensionCapExceeded(100))
        );
        assert!(nn_distance(&anti, &anti, Metric::Kendall, DEFAULT_EXTENSION_CAP).is_ok());
    }
}
