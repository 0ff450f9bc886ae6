//! Similarity between partial orders over a common candidate set.
//!
//! An order is stored as the strict down set `D(x)` of every candidate.
//! Comparing κ and μ treats "y lies below x" as a pair of indicator
//! variables, giving a per-candidate mutual information that sums to
//! `I(κ, μ)`. From there:
//!
//! * [`nmi`] normalises by the mean entropy,
//! * [`ami`] subtracts the exact expectation under uniform relabelling,
//! * [`emi()`] subtracts a Monte-Carlo expectation over random DAGs.
//!
//! ```
//! use posim::{gen_regular_tree, nmi};
//!
//! let tree = gen_regular_tree(2, 4)?;
//! let swapped = tree.swap_candidates(1, 2);
//! assert_eq!(nmi(&tree, &tree)?, 1.0);
//! assert!(nmi(&tree, &swapped)? < 1.0);
//! # Ok::<(), posim::Error>(())
//! ```
//!
//! Classical ranking distances live in [`distance`], and the position
//! sensitivity experiments in [`experiments`].

pub mod ami;
pub mod distance;
pub mod emi;
mod error;
pub mod experiments;
pub mod mi;
pub mod order;
pub mod report;
pub mod rewire;

pub use ami::{ami, expected_mi, NullModelReport};
pub use distance::{kendall_tau, spearman_footrule, Metric};
pub use emi::{emi, empirical_expected_mi, DagNullSpec, EmpiricalNull};
pub use error::{Error, Result};
pub use mi::{entropy, mutual_information, naive_nmi, nmi};
pub use order::{
    gen_bucket_order, gen_regular_tree, gen_total_order, parse_order, write_order, PartialOrder,
    TotalOrderRanking,
};
pub use report::{compare, CompareOptions, MeasureKind, NullChoice, SimilarityReport};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/orders.md")]
    struct Orders;
    #[doc = include_str!("../../../book/src/mutual-information.md")]
    struct MutualInformation;
    #[doc = include_str!("../../../book/src/adjustment.md")]
    struct Adjustment;
    #[doc = include_str!("../../../book/src/distances.md")]
    struct Distances;
    #[doc = include_str!("../../../book/src/experiments.md")]
    struct Experiments;
    #[doc = include_str!("../../../README.md")]
    struct Readme;
}
