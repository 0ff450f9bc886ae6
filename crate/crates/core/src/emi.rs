//! Empirical expected mutual information over random single-rooted DAGs
//! with fixed node and link counts, and the EMI built on it.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mi::{adjusted, mi_total, mutual_information};
use crate::order::PartialOrder;
use crate::rewire::RewireGraph;

pub const DEFAULT_NULL_SAMPLES: usize = 1000;

/// Size of the random-DAG space and how to sample it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DagNullSpec {
    pub n: usize,
    pub m: usize,
    pub samples: usize,
    pub seed: u64,
}

impl DagNullSpec {
    pub fn validate(&self) -> Result<()> {
        let max_links = self.n * self.n.saturating_sub(1) / 2;
        if self.n == 0 {
            return Err(Error::InfeasibleSpec("no nodes".into()));
        }
        if self.m + 1 < self.n || self.m > max_links {
            return Err(Error::InfeasibleSpec(format!(
                "{} links cannot form a single-rooted DAG on {} nodes (need {}..={})",
                self.m,
                self.n,
                self.n - 1,
                max_links
            )));
        }
        if self.samples < 2 {
            return Err(Error::InfeasibleSpec(
                "at least 2 samples are needed".into(),
            ));
        }
        Ok(())
    }
}

/// Mean and standard error of `I(ρ₁, ρ₂)` over sampled pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalNull {
    pub mean_i: f64,
    pub stderr_i: f64,
    pub samples_used: usize,
    pub null_id: &'static str,
}

/// Draws the links of a random single-rooted DAG.
///
/// Positions `0..n` are a uniformly shuffled topological order with the
/// root first. Every later position gets one parent uniform among the
/// earlier ones, and the remaining `m − (n − 1)` links are drawn uniformly
/// without replacement from the unused forward pairs. Approximately, not
/// exactly, uniform over the space.
pub fn sample_dag_links<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    rng: &mut R,
) -> Result<Vec<(usize, usize)>> {
    DagNullSpec {
        n,
        m,
        samples: 2,
        seed: 0,
    }
    .validate()?;
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(rng);

    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(m);
    for child in 1..n {
        pairs.push((rng.random_range(0..child), child));
    }
    let extra = m - (n - 1);
    if extra > 0 {
        let available = n * (n - 1) / 2 - (n - 1);
        if extra * 4 <= available {
            let mut used: HashSet<(usize, usize)> = pairs.iter().copied().collect();
            while pairs.len() < m {
                let i = rng.random_range(1..n);
                let j = rng.random_range(0..i);
                if used.insert((j, i)) {
                    pairs.push((j, i));
                }
            }
        } else {
            let mut tree_parent = vec![usize::MAX; n];
            for &(j, i) in &pairs {
                tree_parent[i] = j;
            }
            let unused: Vec<(usize, usize)> = (1..n)
                .flat_map(|i| (0..i).map(move |j| (j, i)))
                .filter(|&(j, i)| tree_parent[i] != j)
                .collect();
            pairs.extend(
                rand::seq::index::sample(rng, unused.len(), extra)
                    .into_iter()
                    .map(|k| unused[k]),
            );
        }
    }
    Ok(pairs
        .into_iter()
        .map(|(j, i)| (label[j], label[i]))
        .collect())
}

/// A random single-rooted DAG; see [`sample_dag_links`]. Transitively
/// implied links vanish from the Hasse diagram but stay in the closure.
pub fn sample_random_dag<R: Rng + ?Sized>(spec: &DagNullSpec, rng: &mut R) -> Result<PartialOrder> {
    spec.validate()?;
    let links = sample_dag_links(spec.n, spec.m, rng)?;
    PartialOrder::from_edges(spec.n, &links)
}

/// A source of random orders for the empirical null. `slot` is 0 for the
/// first order of a pair and 1 for the second.
pub trait NullSampler: Sync {
    fn id(&self) -> &'static str;
    fn sample(&self, slot: usize, rng: &mut ChaCha8Rng) -> Result<PartialOrder>;
}

/// Independent draws from [`sample_random_dag`].
#[derive(Debug, Clone, Copy)]
pub struct UniformDagNull {
    pub n: usize,
    pub m: usize,
}

impl NullSampler for UniformDagNull {
    fn id(&self) -> &'static str {
        "dag-uniform"
    }

    fn sample(&self, _slot: usize, rng: &mut ChaCha8Rng) -> Result<PartialOrder> {
        let links = sample_dag_links(self.n, self.m, rng)?;
        PartialOrder::from_edges(self.n, &links)
    }
}

/// Starts from an observed DAG, relocates `burn_in` uniformly chosen links
/// and relabels the result uniformly. Slot 0 starts from κ, slot 1 from μ.
#[derive(Debug, Clone)]
pub struct RewireMcmcNull {
    starts: [RewireGraph; 2],
    pub burn_in: usize,
}

impl RewireMcmcNull {
    /// Default burn-in is ten relocations per link.
    pub fn new(kappa: &PartialOrder, mu: &PartialOrder, burn_in: Option<usize>) -> Result<Self> {
        kappa.check_same_domain(mu)?;
        kappa.require_rooted()?;
        mu.require_rooted()?;
        let burn_in = burn_in.unwrap_or(10 * kappa.link_count().max(mu.link_count()));
        Ok(Self {
            starts: [RewireGraph::from_order(kappa), RewireGraph::from_order(mu)],
            burn_in,
        })
    }
}

impl NullSampler for RewireMcmcNull {
    fn id(&self) -> &'static str {
        "rewire-mcmc"
    }

    fn sample(&self, slot: usize, rng: &mut ChaCha8Rng) -> Result<PartialOrder> {
        let mut graph = self.starts[slot].clone();
        let links = graph.edges().len();
        if links > 0 {
            for _ in 0..self.burn_in {
                let index = rng.random_range(0..links);
                graph.relocate(index, rng);
            }
        }
        let mut perm: Vec<usize> = (0..graph.node_count()).collect();
        perm.shuffle(rng);
        Ok(graph.to_order()?.relabel(&perm))
    }
}

/// Per-sample generator: the seed selects the key, the sample index the
/// stream, so results do not depend on scheduling.
pub(crate) fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Mean and standard error of `I(ρ₁, ρ₂)` over `samples` independent pairs.
pub fn empirical_expected_mi_with(
    sampler: &dyn NullSampler,
    samples: usize,
    seed: u64,
) -> Result<EmpiricalNull> {
    if samples < 2 {
        return Err(Error::InfeasibleSpec(
            "at least 2 samples are needed".into(),
        ));
    }
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let a = sampler.sample(0, &mut rng)?;
            let b = sampler.sample(1, &mut rng)?;
            mi_total(&a, &b)
        })
        .collect::<Result<_>>()?;
    let (mean, std) = mean_and_std(&values);
    Ok(EmpiricalNull {
        mean_i: mean,
        stderr_i: std / (samples as f64).sqrt(),
        samples_used: samples,
        null_id: sampler.id(),
    })
}

/// Empirical null over [`UniformDagNull`].
pub fn empirical_expected_mi(spec: &DagNullSpec) -> Result<EmpiricalNull> {
    spec.validate()?;
    empirical_expected_mi_with(
        &UniformDagNull {
            n: spec.n,
            m: spec.m,
        },
        spec.samples,
        spec.seed,
    )
}

/// Sample mean and (n − 1)-normalised standard deviation, summed in index
/// order.
pub(crate) fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Fails with `LinkCountMismatch` unless both orders have the same number
/// of Hasse links.
pub fn check_link_counts(kappa: &PartialOrder, mu: &PartialOrder) -> Result<usize> {
    kappa.check_same_domain(mu)?;
    if kappa.link_count() != mu.link_count() {
        return Err(Error::LinkCountMismatch {
            left: kappa.link_count(),
            right: mu.link_count(),
        });
    }
    Ok(kappa.link_count())
}

/// EMI against a precomputed null.
pub fn emi_with_null(kappa: &PartialOrder, mu: &PartialOrder, null: &EmpiricalNull) -> Result<f64> {
    check_link_counts(kappa, mu)?;
    let mi = mutual_information(kappa, mu)?;
    adjusted(mi.total, mi.h_kappa, mi.h_mu, null.mean_i)
}

/// EMI with a fresh [`UniformDagNull`] estimate over `samples` pairs.
pub fn emi(kappa: &PartialOrder, mu: &PartialOrder, samples: usize, seed: u64) -> Result<f64> {
    let m = check_link_counts(kappa, mu)?;
    let null = empirical_expected_mi(&DagNullSpec {
        n: kappa.len(),
        m,
        samples,
        seed,
    })?;
    emi_with_null(kappa, mu, &null)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{gen_regular_tree, gen_total_order};

    #[test]
    fn infeasible_specs() {
        let spec = |n, m, samples| DagNullSpec {
            n,
            m,
            samples,
            seed: 1,
        };
        assert!(spec(3, 2, 2).validate().is_ok());
        assert!(spec(3, 3, 2).validate().is_ok());
        assert!(matches!(
            spec(3, 1, 2).validate(),
            Err(Error::InfeasibleSpec(_))
        ));
        assert!(matches!(
            spec(3, 4, 2).validate(),
            Err(Error::InfeasibleSpec(_))
        ));
        assert!(matches!(
            spec(3, 2, 1).validate(),
            Err(Error::InfeasibleSpec(_))
        ));
        assert!(matches!(
            spec(0, 0, 2).validate(),
            Err(Error::InfeasibleSpec(_))
        ));
    }

    #[test]
    fn two_nodes_give_a_chain() {
        let spec = DagNullSpec {
            n: 2,
            m: 1,
            samples: 2,
            seed: 5,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let d = sample_random_dag(&spec, &mut rng).unwrap();
            assert_eq!(d.link_count(), 1);
            assert!(d.is_total());
        }
    }

    #[test]
    fn three_nodes_two_links_shapes() {
        let spec = DagNullSpec {
            n: 3,
            m: 2,
            samples: 2,
            seed: 0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (mut chains, mut forks) = (0, 0);
        for _ in 0..1000 {
            let d = sample_random_dag(&spec, &mut rng).unwrap();
            assert!(d.require_rooted().is_ok());
            let mut sizes = d.down_sets().sizes().to_vec();
            sizes.sort();
            match sizes.as_slice() {
                [0, 1, 2] => chains += 1,
                [0, 0, 2] => forks += 1,
                other => panic!("unexpected shape {other:?}"),
            }
        }
        assert!(chains > 0 && forks > 0);
    }

    #[test]
    fn large_tree_sample() {
        let spec = DagNullSpec {
            n: 2047,
            m: 2046,
            samples: 2,
            seed: 0,
        };
        let d = sample_random_dag(&spec, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let root = d.require_rooted().unwrap();
        let mut parents = vec![0; d.len()];
        for &(_, v) in d.hasse_edges() {
            parents[v] += 1;
        }
        assert_eq!(parents[root], 0);
        assert!(parents
            .iter()
            .enumerate()
            .all(|(x, &p)| x == root || p == 1));
    }

    #[test]
    fn dense_samples_keep_link_budget() {
        for (n, m) in [(6, 15), (6, 12), (30, 100), (8, 20)] {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64 * m as u64);
            for _ in 0..50 {
                let links = sample_dag_links(n, m, &mut rng).unwrap();
                let distinct: HashSet<_> = links.iter().collect();
                assert_eq!(distinct.len(), m);
                let d = PartialOrder::from_edges(n, &links).unwrap();
                assert!(d.require_rooted().is_ok());
                assert!(d.link_count() <= m);
                assert!(d.down_sets().comparable_pairs() >= m);
            }
        }
    }

    #[test]
    fn null_is_reproducible() {
        let spec = DagNullSpec {
            n: 40,
            m: 45,
            samples: 64,
            seed: 77,
        };
        let a = empirical_expected_mi(&spec).unwrap();
        let b = empirical_expected_mi(&spec).unwrap();
        assert_eq!(a, b);
        assert!(a.stderr_i > 0.0 && a.mean_i > 0.0);
        let other = empirical_expected_mi(&DagNullSpec { seed: 78, ..spec }).unwrap();
        assert_ne!(a.mean_i, other.mean_i);
    }

    #[test]
    fn identity_and_link_mismatch() {
        let t = gen_regular_tree(2, 5).unwrap();
        assert!((emi(&t, &t, 50, 1).unwrap() - 1.0).abs() < 1e-12);
        let c = gen_total_order(t.len()).unwrap();
        assert!(emi(&t, &c, 50, 1).is_ok());
        let forest = PartialOrder::from_edges(t.len(), &[(0, 1)]).unwrap();
        assert_eq!(
            emi(&t, &forest, 50, 1),
            Err(Error::LinkCountMismatch { left: 30, right: 1 })
        );
    }

    #[test]
    fn rewire_null_samples_are_rooted() {
        let t = gen_regular_tree(2, 5).unwrap();
        let null = RewireMcmcNull::new(&t, &t, None).unwrap();
        assert_eq!(null.burn_in, 300);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for slot in 0..2 {
            let d = null.sample(slot, &mut rng).unwrap();
            assert!(d.require_rooted().is_ok());
            assert_eq!(d.link_count(), t.link_count());
        }
        let report = empirical_expected_mi_with(&null, 20, 4).unwrap();
        assert_eq!(report.null_id, "rewire-mcmc");
        assert!(report.mean_i > 0.0);
    }
}
