//! Position-sensitivity experiments on randomised orders.
//!
//! Every experiment is deterministic for a fixed seed: run `r` draws from
//! its own ChaCha stream, runs execute in parallel, and aggregation happens
//! in run order.

mod overlap;
mod permute;
mod rewire;
mod swap;

pub use overlap::{overlap_matrix, OverlapMatrix};
pub use permute::{permutation_randomization, permutation_samples, visit_order};
pub use rewire::rewiring_randomization;
pub use swap::{is_swap_automorphism, swap_experiment};

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;

use crate::ami::expected_mi;
use crate::distance::kendall_tau;
use crate::emi::{
    empirical_expected_mi, mean_and_std, DagNullSpec, EmpiricalNull, DEFAULT_NULL_SAMPLES,
};
use crate::error::{Error, Result};
use crate::mi::{adjusted, mutual_information, normalised};
use crate::order::PartialOrder;

/// A quantity recorded against the original order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Nmi,
    Ami,
    Emi,
    Kendall,
}

impl Measure {
    pub fn id(self) -> &'static str {
        match self {
            Measure::Nmi => "nmi",
            Measure::Ami => "ami",
            Measure::Emi => "emi",
            Measure::Kendall => "kendall",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "nmi" => Ok(Measure::Nmi),
            "ami" => Ok(Measure::Ami),
            "emi" => Ok(Measure::Emi),
            "kendall" => Ok(Measure::Kendall),
            other => Err(format!("unknown measure {other:?}")),
        }
    }
}

/// Order in which positions (or links) are randomised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Scheme {
    /// Highest-ranked first.
    TopDown,
    /// Lowest-ranked first.
    BottomUp,
    /// Uniformly shuffled, independently per run.
    Random,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::TopDown, Scheme::Random, Scheme::BottomUp];

    pub fn id(self) -> &'static str {
        match self {
            Scheme::TopDown => "top_down",
            Scheme::BottomUp => "bottom_up",
            Scheme::Random => "random",
        }
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.replace('-', "_").as_str() {
            "top_down" => Ok(Scheme::TopDown),
            "bottom_up" => Ok(Scheme::BottomUp),
            "random" => Ok(Scheme::Random),
            other => Err(format!("unknown scheme {other:?}")),
        }
    }
}

/// Shared knobs of the randomisation experiments.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub runs: usize,
    pub seed: u64,
    pub measures: Vec<Measure>,
    /// Fractions `f` (or `g`) at which measures are recorded, strictly
    /// increasing within `[0, 1]`.
    pub grid: Vec<f64>,
    /// Pairs used to estimate the EMI null.
    pub null_samples: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            runs: 100,
            seed: 0x5EED,
            measures: vec![Measure::Nmi, Measure::Ami],
            grid: default_grid(0.05),
            null_samples: DEFAULT_NULL_SAMPLES,
        }
    }
}

/// `{step, 2·step, …, 1}`.
pub fn default_grid(step: f64) -> Vec<f64> {
    let points = (1.0 / step).round() as usize;
    (1..=points).map(|k| k as f64 / points as f64).collect()
}

impl ExperimentConfig {
    fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InfeasibleSpec("runs must be at least 1".into()));
        }
        if self.measures.is_empty() {
            return Err(Error::InfeasibleSpec("no measures requested".into()));
        }
        let increasing = self.grid.windows(2).all(|w| w[0] < w[1]);
        let in_range = self.grid.iter().all(|&f| (0.0..=1.0).contains(&f));
        if self.grid.is_empty() || !increasing || !in_range {
            return Err(Error::InfeasibleSpec(
                "grid must be strictly increasing within [0, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// One aggregated point of a curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub x: f64,
    pub measure: Measure,
    pub mean: f64,
    pub std: f64,
    pub runs: usize,
}

impl TraceRow {
    pub fn stderr(&self) -> f64 {
        self.std / (self.runs as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentTrace {
    pub rows: Vec<TraceRow>,
}

impl ExperimentTrace {
    /// Rows of one measure, in `x` order.
    pub fn curve(&self, measure: Measure) -> Vec<&TraceRow> {
        self.rows.iter().filter(|r| r.measure == measure).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,measure,mean,std,runs\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                format_sig(r.x),
                r.measure,
                format_sig(r.mean),
                format_sig(r.std),
                r.runs
            );
        }
        out
    }

    /// Aggregates per-run samples laid out as `samples[run][point][measure]`.
    fn from_samples(xs: &[f64], measures: &[Measure], samples: &[Vec<Vec<f64>>]) -> Self {
        let mut rows = Vec::with_capacity(xs.len() * measures.len());
        for (p, &x) in xs.iter().enumerate() {
            for (m, &measure) in measures.iter().enumerate() {
                let values: Vec<f64> = samples.iter().map(|run| run[p][m]).collect();
                let (mean, std) = mean_and_std(&values);
                rows.push(TraceRow {
                    x,
                    measure,
                    mean,
                    std,
                    runs: values.len(),
                });
            }
        }
        Self { rows }
    }
}

/// Formats with 12 significant digits, trimming trailing zeros.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Evaluates the requested measures of candidates against a fixed base
/// order, with the null-model terms computed once.
struct Evaluator<'a> {
    base: &'a PartialOrder,
    measures: Vec<Measure>,
    /// `⟨I⟩` for relabelled copies of the base.
    relabel_null: Option<f64>,
    emi_null: Option<EmpiricalNull>,
}

impl<'a> Evaluator<'a> {
    fn new(
        base: &'a PartialOrder,
        measures: &[Measure],
        null_samples: usize,
        seed: u64,
    ) -> Result<Self> {
        let relabel_null = if measures.contains(&Measure::Ami) {
            Some(expected_mi(base, base)?.expected_i)
        } else {
            None
        };
        let emi_null = if measures.contains(&Measure::Emi) {
            Some(empirical_expected_mi(&DagNullSpec {
                n: base.len(),
                m: base.link_count(),
                samples: null_samples,
                seed: null_seed(seed),
            })?)
        } else {
            None
        };
        Ok(Self {
            base,
            measures: measures.to_vec(),
            relabel_null,
            emi_null,
        })
    }

    /// `relabelled` tells whether `other` is a relabelling of the base, in
    /// which case the cached relabelling null applies to AMI.
    fn eval(&self, other: &PartialOrder, relabelled: bool) -> Result<Vec<f64>> {
        let mi = mutual_information(self.base, other)?;
        self.measures
            .iter()
            .map(|m| match m {
                Measure::Nmi => normalised(mi.total, mi.h_kappa, mi.h_mu),
                Measure::Ami => {
                    let expected = match (relabelled, self.relabel_null) {
                        (true, Some(e)) => e,
                        _ => expected_mi(self.base, other)?.expected_i,
                    };
                    adjusted(mi.total, mi.h_kappa, mi.h_mu, expected)
                }
                Measure::Emi => {
                    let null = self.emi_null.as_ref().expect("built with EMI");
                    adjusted(mi.total, mi.h_kappa, mi.h_mu, null.mean_i)
                }
                Measure::Kendall => Ok(kendall_tau(self.base, other)? as f64),
            })
            .collect()
    }
}

/// Seed of the EMI null, kept apart from the per-run streams.
fn null_seed(seed: u64) -> u64 {
    seed ^ 0x9E37_79B9_7F4A_7C15
}

/// Step index at which fraction `f` of `total` items has been processed.
fn grid_steps(grid: &[f64], total: usize) -> Vec<usize> {
    grid.iter()
        .map(|&f| ((f * total as f64).round() as usize).min(total))
        .collect()
}
