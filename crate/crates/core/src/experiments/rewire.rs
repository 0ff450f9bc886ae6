use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::{grid_steps, Evaluator, ExperimentConfig, ExperimentTrace, Scheme};
use crate::emi::stream_rng;
use crate::error::Result;
use crate::order::PartialOrder;
use crate::rewire::RewireGraph;

/// Relocates the links of a rooted order one by one and records the
/// measures against the original after `round(g·m)` relocations.
///
/// Links are visited by the depth of their lower end: shallow links first
/// for top-down, deep links first for bottom-up. Each relocation draws the
/// new parent uniformly among nodes that keep the graph acyclic.
pub fn rewiring_randomization(
    order: &PartialOrder,
    scheme: Scheme,
    config: &ExperimentConfig,
) -> Result<ExperimentTrace> {
    config.validate()?;
    order.require_rooted()?;
    let eval = Evaluator::new(order, &config.measures, config.null_samples, config.seed)?;
    let levels = order.levels();
    let links = order.hasse_edges();
    let steps = grid_steps(&config.grid, links.len());
    let mut by_depth: Vec<usize> = (0..links.len()).collect();
    by_depth.sort_by_key(|&i| (levels[links[i].1], i));

    let samples: Vec<Vec<Vec<f64>>> = (0..config.runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = stream_rng(config.seed, run as u64);
            let mut visit = by_depth.clone();
            match scheme {
                Scheme::TopDown => {}
                Scheme::BottomUp => visit.reverse(),
                Scheme::Random => visit.shuffle(&mut rng),
            }
            let mut graph = RewireGraph::from_order(order);
            let mut done = 0;
            let mut values = Vec::with_capacity(steps.len());
            for &target in &steps {
                while done < target {
                    graph.relocate(visit[done], &mut rng);
                    done += 1;
                }
                values.push(eval.eval(&graph.to_order()?, false)?);
            }
            Ok(values)
        })
        .collect::<Result<_>>()?;
    Ok(ExperimentTrace::from_samples(
        &config.grid,
        &config.measures,
        &samples,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::experiments::Measure;
    use crate::order::gen_regular_tree;

    #[test]
    fn no_rewiring_is_identity() {
        let t = gen_regular_tree(2, 4).unwrap();
        let config = ExperimentConfig {
            runs: 4,
            grid: vec![0.0, 0.5],
            measures: vec![Measure::Nmi, Measure::Emi],
            null_samples: 50,
            ..Default::default()
        };
        let trace = rewiring_randomization(&t, Scheme::TopDown, &config).unwrap();
        assert_eq!(trace.rows[0].mean, 1.0);
        assert!((trace.rows[1].mean - 1.0).abs() < 1e-12);
        assert!(trace.rows[2].mean < 1.0);
    }

    #[test]
    fn needs_a_root() {
        let forest = PartialOrder::from_edges(3, &[(0, 1)]).unwrap();
        let err = rewiring_randomization(&forest, Scheme::Random, &ExperimentConfig::default());
        assert!(matches!(err, Err(Error::NotRooted(2))));
    }
}
