//! One-call comparison of two orders under a named measure.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;

use crate::ami::expected_mi;
use crate::distance::{
    hausdorff_distance, kendall_tau, nn_distance, spearman_footrule_orders, Metric,
};
use crate::emi::{
    check_link_counts, empirical_expected_mi_with, NullSampler, RewireMcmcNull, UniformDagNull,
    DEFAULT_NULL_SAMPLES,
};
use crate::error::Result;
use crate::mi::{adjusted, mutual_information, naive_nmi, normalised};
use crate::order::{PartialOrder, DEFAULT_EXTENSION_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasureKind {
    Nmi,
    Ami,
    Emi,
    NaiveNmi,
    Kendall,
    Footrule,
    KendallNn,
    FootruleNn,
    KendallHausdorff,
    FootruleHausdorff,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 10] = [
        MeasureKind::Nmi,
        MeasureKind::Ami,
        MeasureKind::Emi,
        MeasureKind::NaiveNmi,
        MeasureKind::Kendall,
        MeasureKind::Footrule,
        MeasureKind::KendallNn,
        MeasureKind::FootruleNn,
        MeasureKind::KendallHausdorff,
        MeasureKind::FootruleHausdorff,
    ];

    pub fn id(self) -> &'static str {
        match self {
            MeasureKind::Nmi => "nmi",
            MeasureKind::Ami => "ami",
            MeasureKind::Emi => "emi",
            MeasureKind::NaiveNmi => "naive-nmi",
            MeasureKind::Kendall => "kendall",
            MeasureKind::Footrule => "footrule",
            MeasureKind::KendallNn => "kendall-nn",
            MeasureKind::FootruleNn => "footrule-nn",
            MeasureKind::KendallHausdorff => "kendall-hausdorff",
            MeasureKind::FootruleHausdorff => "footrule-hausdorff",
        }
    }

    /// Distances take integer values.
    pub fn is_distance(self) -> bool {
        !matches!(
            self,
            MeasureKind::Nmi | MeasureKind::Ami | MeasureKind::Emi | MeasureKind::NaiveNmi
        )
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for MeasureKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        MeasureKind::ALL
            .into_iter()
            .find(|m| m.id() == s)
            .ok_or_else(|| format!("unknown measure {s:?}"))
    }
}

/// Null model behind EMI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NullChoice {
    #[default]
    DagUniform,
    RewireMcmc {
        burn_in: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareOptions {
    pub samples: usize,
    pub seed: u64,
    pub null: NullChoice,
    /// Limit on enumerated linear extensions.
    pub cap: usize,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            samples: DEFAULT_NULL_SAMPLES,
            seed: 0,
            null: NullChoice::DagUniform,
            cap: DEFAULT_EXTENSION_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityReport {
    pub measure: &'static str,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_i: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_i_stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub null_model: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub term_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub self_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extensions_enumerated: Option<usize>,
}

impl SimilarityReport {
    fn new(kind: MeasureKind, value: f64) -> Self {
        Self {
            measure: kind.id(),
            value,
            i: None,
            h_kappa: None,
            h_mu: None,
            expected_i: None,
            expected_i_stderr: None,
            null_model: None,
            samples: None,
            term_count: None,
            self_defect: None,
            extensions_enumerated: None,
        }
    }

    /// `key=value` lines, the measure first. Reals carry 12 decimals.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        let distance = self
            .measure
            .parse::<MeasureKind>()
            .is_ok_and(MeasureKind::is_distance);
        if distance {
            let _ = writeln!(out, "{}={}", self.measure, self.value as u64);
        } else {
            let _ = writeln!(out, "{}={:.12}", self.measure, self.value);
        }
        let reals = [
            ("i", self.i),
            ("h_kappa", self.h_kappa),
            ("h_mu", self.h_mu),
            ("expected_i", self.expected_i),
            ("expected_i_stderr", self.expected_i_stderr),
            ("self_defect", self.self_defect),
        ];
        for (key, v) in reals {
            if let Some(v) = v {
                let _ = writeln!(out, "{key}={v:.12}");
            }
        }
        if let Some(null) = self.null_model {
            let _ = writeln!(out, "null_model={null}");
        }
        let counts = [
            ("samples", self.samples),
            ("term_count", self.term_count),
            ("extensions_enumerated", self.extensions_enumerated),
        ];
        for (key, v) in counts {
            if let Some(v) = v {
                let _ = writeln!(out, "{key}={v}");
            }
        }
        out
    }
}

/// Evaluates `kind` on the pair, with the supporting quantities it uses.
pub fn compare(
    kappa: &PartialOrder,
    mu: &PartialOrder,
    kind: MeasureKind,
    options: &CompareOptions,
) -> Result<SimilarityReport> {
    kappa.check_same_domain(mu)?;
    let with_mi = |value: f64, mi: &crate::mi::MiBreakdown| SimilarityReport {
        i: Some(mi.total),
        h_kappa: Some(mi.h_kappa),
        h_mu: Some(mi.h_mu),
        ..SimilarityReport::new(kind, value)
    };
    let distance = |metric: Metric, hausdorff: bool| -> Result<SimilarityReport> {
        let report = if hausdorff {
            hausdorff_distance(kappa, mu, metric, options.cap)?
        } else {
            nn_distance(kappa, mu, metric, options.cap)?
        };
        Ok(SimilarityReport {
            extensions_enumerated: Some(report.extensions_enumerated),
            ..SimilarityReport::new(kind, report.value as f64)
        })
    };
    match kind {
        MeasureKind::Nmi => {
            let mi = mutual_information(kappa, mu)?;
            Ok(with_mi(normalised(mi.total, mi.h_kappa, mi.h_mu)?, &mi))
        }
        MeasureKind::Ami => {
            let mi = mutual_information(kappa, mu)?;
            let null = expected_mi(kappa, mu)?;
            let value = adjusted(mi.total, mi.h_kappa, mi.h_mu, null.expected_i)?;
            Ok(SimilarityReport {
                expected_i: Some(null.expected_i),
                term_count: Some(null.term_count),
                ..with_mi(value, &mi)
            })
        }
        MeasureKind::Emi => {
            let m = check_link_counts(kappa, mu)?;
            let mi = mutual_information(kappa, mu)?;
            let sampler: Box<dyn NullSampler> = match options.null {
                NullChoice::DagUniform => Box::new(UniformDagNull { n: kappa.len(), m }),
                NullChoice::RewireMcmc { burn_in } => {
                    Box::new(RewireMcmcNull::new(kappa, mu, burn_in)?)
                }
            };
            let null = empirical_expected_mi_with(sampler.as_ref(), options.samples, options.seed)?;
            let value = adjusted(mi.total, mi.h_kappa, mi.h_mu, null.mean_i)?;
            Ok(SimilarityReport {
                expected_i: Some(null.mean_i),
                expected_i_stderr: Some(null.stderr_i),
                null_model: Some(null.null_id),
                samples: Some(null.samples_used),
                ..with_mi(value, &mi)
            })
        }
        MeasureKind::NaiveNmi => {
            let naive = naive_nmi(kappa, mu)?;
            Ok(SimilarityReport {
                self_defect: Some(naive.self_defect),
                ..SimilarityReport::new(kind, naive.value)
            })
        }
        MeasureKind::Kendall => Ok(SimilarityReport::new(kind, kendall_tau(kappa, mu)? as f64)),
        MeasureKind::Footrule => Ok(SimilarityReport::new(
            kind,
            spearman_footrule_orders(kappa, mu)? as f64,
        )),
        MeasureKind::KendallNn => distance(Metric::Kendall, false),
        MeasureKind::FootruleNn => distance(Metric::Footrule, false),
        MeasureKind::KendallHausdorff => distance(Metric::Kendall, true),
        MeasureKind::FootruleHausdorff => distance(Metric::Footrule, true),
    }
}
