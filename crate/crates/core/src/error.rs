use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Which groupoid law a raw table breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    DuplicateLabel,
    UnknownUnit,
    UnknownArrow,
    MissingUnitArrow,
    Composability,
    MissingComposite,
    ConflictingComposite,
    Endpoints,
    Inverse,
    UnitLaw,
    Associativity,
}

/// A single failed axiom together with the arrows that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomViolation {
    pub kind: ViolationKind,
    pub arrows: Vec<String>,
    pub detail: String,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {} [{}]", self.kind, self.detail, self.arrows.join(", "))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("groupoid axioms violated ({} violation(s))", .0.len())]
    Axioms(Vec<AxiomViolation>),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("unit subset is not invariant: arrow {arrow} has exactly one endpoint inside")]
    NotInvariant { arrow: String },
    #[error("unknown unit {0}")]
    UnknownUnit(String),
    #[error("unknown arrow {0}")]
    UnknownArrow(String),
    #[error("unknown point {0}")]
    UnknownPoint(String),
    #[error("elements live on different groupoids")]
    GroupoidMismatch,
    #[error("mean family charges arrow {arrow} outside the source fibre of unit {unit}")]
    SupportViolation { unit: String, arrow: String },
    #[error("invalid mean family: {0}")]
    InvalidMean(String),
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
    #[error("power iteration did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("singular fibres at units {0:?}")]
    SingularFibre(Vec<String>),
    #[error("invalid coefficient sequence: {0}")]
    InvalidSequence(String),
    #[error("invalid band operator: {0}")]
    InvalidBand(String),
    #[error("invalid direction: {0}")]
    InvalidDirection(String),
    #[error("diagonal {diagonal} does not converge along the requested direction")]
    NotConvergent {
        diagonal: i64,
        probes: Vec<(i64, Complex64)>,
    },
    #[error("symbol comes within {min_modulus:e} of zero")]
    NearZeroSymbol { min_modulus: f64 },
    #[error("argument jumps by {jump} between samples {step} and {}; raise the sample count", .step + 1)]
    StepTooCoarse { step: usize, jump: f64 },
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
