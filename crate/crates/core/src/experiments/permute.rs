use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use super::{grid_steps, Evaluator, ExperimentConfig, ExperimentTrace, Scheme};
use crate::emi::stream_rng;
use crate::error::Result;
use crate::order::PartialOrder;

/// Positions in the order a scheme visits them. Top-down sorts by level,
/// then by id; bottom-up is its reverse.
pub fn visit_order<R: Rng + ?Sized>(
    order: &PartialOrder,
    scheme: Scheme,
    rng: &mut R,
) -> Vec<usize> {
    let levels = order.levels();
    let mut positions: Vec<usize> = (0..order.len()).collect();
    match scheme {
        Scheme::TopDown => positions.sort_by_key(|&x| (levels[x], x)),
        Scheme::BottomUp => {
            positions.sort_by_key(|&x| (levels[x], x));
            positions.reverse();
        }
        Scheme::Random => positions.shuffle(rng),
    }
    positions
}

/// Per-run measure values, laid out as `samples[run][grid point][measure]`.
///
/// Each run walks the positions in scheme order; at step `t` the candidate
/// occupying the `t`-th visited position swaps places with a uniformly
/// drawn candidate. After `round(f·n)` steps the relabelled order is
/// compared with the original.
pub fn permutation_samples(
    order: &PartialOrder,
    scheme: Scheme,
    config: &ExperimentConfig,
) -> Result<Vec<Vec<Vec<f64>>>> {
    config.validate()?;
    let eval = Evaluator::new(order, &config.measures, config.null_samples, config.seed)?;
    let n = order.len();
    let steps = grid_steps(&config.grid, n);
    (0..config.runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = stream_rng(config.seed, run as u64);
            let visit = visit_order(order, scheme, &mut rng);
            // occupant[p] is the candidate now holding position p
            let mut occupant: Vec<usize> = (0..n).collect();
            let mut done = 0;
            let mut values = Vec::with_capacity(steps.len());
            for &target in &steps {
                while done < target {
                    let other = rng.random_range(0..n);
                    occupant.swap(visit[done], other);
                    done += 1;
                }
                values.push(eval.eval(&order.relabel(&occupant), true)?);
            }
            Ok(values)
        })
        .collect()
}

/// Aggregated curves of [`permutation_samples`] over the grid.
pub fn permutation_randomization(
    order: &PartialOrder,
    scheme: Scheme,
    config: &ExperimentConfig,
) -> Result<ExperimentTrace> {
    let samples = permutation_samples(order, scheme, config)?;
    Ok(ExperimentTrace::from_samples(
        &config.grid,
        &config.measures,
        &samples,
    ))
}
