use rand::seq::IndexedRandom;
use rand::Rng;
use rayon::prelude::*;

use super::{Evaluator, ExperimentConfig, ExperimentTrace};
use crate::emi::stream_rng;
use crate::error::Result;
use crate::order::PartialOrder;

/// Levels with at most this many unordered pairs have their valid pairs
/// enumerated; larger levels are sampled by rejection.
const ENUMERATION_LIMIT: usize = 50_000;
const REJECTION_ATTEMPTS: usize = 100_000;

/// Whether exchanging the labels of `u` and `v` leaves the order unchanged.
pub fn is_swap_automorphism(order: &PartialOrder, u: usize, v: usize) -> bool {
    if u == v {
        return true;
    }
    if order.comparable(u, v) || order.down_set(u) != order.down_set(v) {
        return false;
    }
    (0..order.len()).all(|w| order.precedes(w, u) == order.precedes(w, v))
}

/// Swaps one random pair of same-level candidates per run and records the
/// measures against the original, level by level. Pairs whose swap is an
/// automorphism are excluded, and levels without a valid pair are skipped.
/// The trace's `x` is the level, the root level being 1. `config.grid` is
/// not used.
pub fn swap_experiment(order: &PartialOrder, config: &ExperimentConfig) -> Result<ExperimentTrace> {
    config.validate()?;
    let eval = Evaluator::new(order, &config.measures, config.null_samples, config.seed)?;
    let levels = order.levels();
    let depth = levels.iter().copied().max().unwrap_or(0);
    let mut rows = Vec::new();
    for level in 1..=depth {
        let members: Vec<usize> = (0..order.len()).filter(|&x| levels[x] == level).collect();
        let pairs = members.len() * members.len().saturating_sub(1) / 2;
        let enumerated: Option<Vec<(usize, usize)>> = (pairs <= ENUMERATION_LIMIT).then(|| {
            let mut valid = Vec::new();
            for (i, &u) in members.iter().enumerate() {
                for &v in &members[i + 1..] {
                    if !is_swap_automorphism(order, u, v) {
                        valid.push((u, v));
                    }
                }
            }
            valid
        });
        if pairs == 0 || enumerated.as_ref().is_some_and(|v| v.is_empty()) {
            log::debug!("level {level}: no swappable pair");
            continue;
        }
        let samples: Vec<Option<Vec<f64>>> = (0..config.runs)
            .into_par_iter()
            .map(|run| {
                let mut rng = stream_rng(config.seed, ((level as u64) << 32) | run as u64);
                let pair = match &enumerated {
                    Some(valid) => Some(*valid.choose(&mut rng).expect("non-empty")),
                    None => (0..REJECTION_ATTEMPTS).find_map(|_| {
                        let u = members[rng.random_range(0..members.len())];
                        let v = members[rng.random_range(0..members.len())];
                        (!is_swap_automorphism(order, u, v)).then_some((u, v))
                    }),
                };
                pair.map(|(u, v)| eval.eval(&order.swap_candidates(u, v), true))
                    .transpose()
            })
            .collect::<Result<_>>()?;
        let samples: Vec<Vec<Vec<f64>>> = samples.into_iter().flatten().map(|s| vec![s]).collect();
        if samples.is_empty() {
            log::debug!("level {level}: rejection sampling found no swappable pair");
            continue;
        }
        let trace = ExperimentTrace::from_samples(&[level as f64], &config.measures, &samples);
        rows.extend(trace.rows);
    }
    Ok(ExperimentTrace { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::Measure;
    use crate::order::gen_regular_tree;

    #[test]
    fn automorphisms_of_a_tree() {
        let t = gen_regular_tree(2, 3).unwrap();
        // leaves under the same parent
        assert!(is_swap_automorphism(&t, 3, 4));
        assert!(!is_swap_automorphism(&t, 3, 5));
        // the two subtrees are isomorphic, but a plain swap of their roots
        // moves the leaves' parents
        assert!(!is_swap_automorphism(&t, 1, 2));
        assert!(!is_swap_automorphism(&t, 0, 1));
    }

    #[test]
    fn deeper_swaps_matter_less() {
        let t = gen_regular_tree(2, 5).unwrap();
        let config = ExperimentConfig {
            runs: 20,
            measures: vec![Measure::Nmi, Measure::Kendall],
            ..Default::default()
        };
        let trace = swap_experiment(&t, &config).unwrap();
        let nmi = trace.curve(Measure::Nmi);
        // the root level has no pair
        assert_eq!(
            nmi.iter().map(|r| r.x).collect::<Vec<_>>(),
            vec![2.0, 3.0, 4.0, 5.0]
        );
        assert!(nmi[1..].windows(2).all(|w| w[0].mean < w[1].mean));
        // level 2 holds a single pair whose down sets are disjoint and
        // nearly complementary; the anti-correlated indicators keep most
        // of the information
        assert!(nmi[0].std < 1e-12);
        assert!(nmi[0].mean > nmi[1].mean);
        assert!(nmi.iter().all(|r| r.mean < 1.0));
        assert!(trace.curve(Measure::Kendall).iter().all(|r| r.mean == 0.0));
        assert_eq!(swap_experiment(&t, &config).unwrap(), trace);
    }
}
