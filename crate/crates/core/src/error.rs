use thiserror::Error;

use crate::geometry::{Cell, Point};

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty cell collection")]
    EmptyCollection,
    #[error("cells are not edge-connected")]
    NotConnected,
    #[error("interval corners {lower_left} and {upper_right} are not strictly ordered")]
    DegenerateInterval {
        lower_left: Point,
        upper_right: Point,
    },
    #[error("cell interval endpoints {from} and {to} are not oriented lower-left to upper-right")]
    CellIntervalOrder { from: Cell, to: Cell },
    #[error("cell {0} lies outside the bounding interval")]
    NotContained(Cell),
    #[error("binomial has identical terms")]
    TrivialBinomial,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate cell {cell}")]
    DuplicateCell { line: usize, cell: Cell },
    #[error("line {line}: negative coordinate")]
    NegativeCoordinate { line: usize },
    #[error("document declares no cells")]
    EmptyDocument,
    #[error("Groebner basis element of degree {degree} exceeds the degree cap {cap}")]
    DegreeCap { degree: u32, cap: u32 },
    #[error("computation budget exhausted")]
    BudgetExceeded,
    #[error("binomial is not normalized under order {0}")]
    OrderMismatch(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(#[from] HypothesisViolation),
    #[error("max_vertices = {0} cannot label a single minor (need at least 4)")]
    MaxVerticesTooSmall(usize),
    #[error("enumeration of {requested} cells exceeds the cap {cap}")]
    EnumerationCap { requested: usize, cap: usize },
}

/// Reasons an input fails the hypotheses of the convex-hole localization.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypothesisViolation {
    #[error("hole polyomino is not convex")]
    HoleNotConvex,
    #[error("hole is not contained in the bounding interval")]
    HoleNotContained,
    #[error("hole touches the boundary of the bounding interval")]
    HoleTouchesBoundary,
    #[error("complement of the hole is not a polyomino")]
    ComplementDisconnected,
    #[error("two corner triples share the vertex {0}")]
    AmbiguousCorner(Point),
}

pub type Result<T> = std::result::Result<T, Error>;
