use std::fmt::Write as _;

use serde::Serialize;

use super::{format_sig, permutation_samples, ExperimentConfig, Measure, Scheme};
use crate::error::{Error, Result};
use crate::order::PartialOrder;

/// Overlap `L(f1, f2) = ∫ p_f1(s) p_f2(s) ds` between the distributions of
/// a measure at two randomisation levels.
///
/// Densities are histograms on a common axis spanning all observed values,
/// rescaled to `[0, 1]` so the threshold on `L` does not depend on the
/// units of the measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapMatrix {
    pub measure: Measure,
    pub grid: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl OverlapMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    /// Number of cells with `L > threshold`.
    pub fn cells_above(&self, threshold: f64) -> usize {
        self.values
            .iter()
            .flatten()
            .filter(|&&l| l > threshold)
            .count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("f1,f2,L\n");
        for (i, row) in self.values.iter().enumerate() {
            for (j, &l) in row.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    format_sig(self.grid[i]),
                    format_sig(self.grid[j]),
                    format_sig(l)
                );
            }
        }
        out
    }
}

/// Builds the overlap matrix of `measure` under random-order permutation.
/// Needs at least 30 runs per grid point and 10 bins.
pub fn overlap_matrix(
    order: &PartialOrder,
    measure: Measure,
    grid: &[f64],
    runs_per_f: usize,
    bins: usize,
    seed: u64,
) -> Result<OverlapMatrix> {
    if runs_per_f < 30 {
        return Err(Error::InfeasibleSpec(format!(
            "{runs_per_f} runs per level, need at least 30"
        )));
    }
    if bins < 10 {
        return Err(Error::InfeasibleSpec(format!(
            "{bins} bins, need at least 10"
        )));
    }
    let config = ExperimentConfig {
        runs: runs_per_f,
        seed,
        measures: vec![measure],
        grid: grid.to_vec(),
        ..Default::default()
    };
    let samples = permutation_samples(order, Scheme::Random, &config)?;
    let columns: Vec<Vec<f64>> = (0..grid.len())
        .map(|p| samples.iter().map(|run| run[p][0]).collect())
        .collect();
    let (lo, hi) = columns
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let span = hi - lo;
    let width = 1.0 / bins as f64;
    let densities: Vec<Vec<f64>> = columns
        .iter()
        .map(|col| {
            let mut counts = vec![0.0; bins];
            for &v in col {
                let t = if span > 0.0 { (v - lo) / span } else { 0.5 };
                counts[((t * bins as f64) as usize).min(bins - 1)] += 1.0;
            }
            counts
                .iter()
                .map(|c| c / (col.len() as f64 * width))
                .collect()
        })
        .collect();
    let values = densities
        .iter()
        .map(|p| {
            densities
                .iter()
                .map(|q| p.iter().zip(q).map(|(a, b)| a * b).sum::<f64>() * width)
                .collect()
        })
        .collect();
    Ok(OverlapMatrix {
        measure,
        grid: grid.to_vec(),
        values,
    })
}
