use thiserror::Error;

/// Every failure the library can report.
///
/// The `Display` output starts with the variant name so command-line users
/// and log readers can match on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("EmptyInput: the document declares no candidates")]
    EmptyInput,
    #[error("Parse: line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("CandidateOutOfRange: id {id} is not below the candidate count {n}")]
    CandidateOutOfRange { id: usize, n: usize },
    #[error("SelfLoop: candidate {0} is related to itself")]
    SelfLoop(usize),
    #[error("CycleDetected: {}", format_cycle(.0))]
    CycleDetected(Vec<usize>),
    #[error("InvalidClosure: {0}")]
    InvalidClosure(String),
    #[error("NotRooted: expected exactly one root, found {0}")]
    NotRooted(usize),
    #[error("Overflow: a tree with branching {branching} and depth {depth} is too large")]
    Overflow { branching: usize, depth: usize },
    #[error("DomainMismatch: orders have {left} and {right} candidates")]
    DomainMismatch { left: usize, right: usize },
    #[error("DegenerateOrder: {0}")]
    DegenerateOrder(&'static str),
    #[error("AllEmptyDownSets: no candidate precedes any other in either order")]
    AllEmptyDownSets,
    #[error("RangeViolation: C={candidates}, a={a}, b={b}, c={overlap}")]
    RangeViolation {
        candidates: usize,
        a: usize,
        b: usize,
        overlap: usize,
    },
    #[error("ExtensionCapExceeded: more than {0} linear extensions")]
    ExtensionCapExceeded(usize),
    #[error("NotTotalOrder: candidates {0} and {1} are incomparable")]
    NotTotalOrder(usize, usize),
    #[error("InfeasibleSpec: {0}")]
    InfeasibleSpec(String),
    #[error("LinkCountMismatch: orders have {left} and {right} Hasse links")]
    LinkCountMismatch { left: usize, right: usize },
}

impl Error {
    /// Name of the variant, as printed at the start of the message.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyInput => "EmptyInput",
            Error::Parse { .. } => "Parse",
            Error::CandidateOutOfRange { .. } => "CandidateOutOfRange",
            Error::SelfLoop(_) => "SelfLoop",
            Error::CycleDetected(_) => "CycleDetected",
            Error::InvalidClosure(_) => "InvalidClosure",
            Error::NotRooted(_) => "NotRooted",
            Error::Overflow { .. } => "Overflow",
            Error::DomainMismatch { .. } => "DomainMismatch",
            Error::DegenerateOrder(_) => "DegenerateOrder",
            Error::AllEmptyDownSets => "AllEmptyDownSets",
            Error::RangeViolation { .. } => "RangeViolation",
            Error::ExtensionCapExceeded(_) => "ExtensionCapExceeded",
            Error::NotTotalOrder(..) => "NotTotalOrder",
            Error::InfeasibleSpec(_) => "InfeasibleSpec",
            Error::LinkCountMismatch { .. } => "LinkCountMismatch",
        }
    }
}

fn format_cycle(cycle: &[usize]) -> String {
    let mut out = String::new();
    for id in cycle {
        out.push_str(&id.to_string());
        out.push_str(" -> ");
    }
    if let Some(first) = cycle.first() {
        out.push_str(&first.to_string());
    }
    out
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
