use thiserror::Error;

use crate::algebra::{Element, OpSymbol};
use crate::term::Assignment;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which side of a Cayley table failed to be a permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    Row(Element),
    Column(Element),
}

impl std::fmt::Display for Line {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Line::Row(r) => write!(f, "row {r}"),
            Line::Column(c) => write!(f, "column {c}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("algebra carrier must be nonempty")]
    EmptyCarrier,

    #[error("{what}: index {index} out of range for carrier of size {size}")]
    OutOfRange {
        what: &'static str,
        index: usize,
        size: usize,
    },

    #[error("{what}: expected {expected}x{expected} table")]
    BadShape { what: &'static str, expected: usize },

    #[error("{op} is not derivable: {line} of the multiplication table is not a permutation")]
    NotCancellative { op: OpSymbol, line: Line },

    #[error("signature mismatch: {0}")]
    Signature(String),

    #[error("algebra has no {0} table")]
    MissingTable(OpSymbol),

    #[error("the adjoined unit `1` is not allowed here")]
    UnitNotAllowed,

    #[error("cannot generate a subalgebra from no seeds in an unpointed algebra")]
    EmptySeeds,

    #[error("{what} refused: size {size} exceeds the supported bound {max}")]
    TooLarge {
        what: &'static str,
        size: usize,
        max: usize,
    },

    #[error("parse error at offset {pos}: {message}")]
    Parse { pos: usize, message: String },

    #[error("term has no variables")]
    NoVariable,

    #[error("tails differ ({lhs} vs {rhs}); the plain form needs tail(s) = tail(t)")]
    TailMismatch { lhs: String, rhs: String },

    #[error("star operation undefined: xy/y != (x/y)y at x={x}, y={y}")]
    NotStarCompatible { x: Element, y: Element },

    #[error("algebra does not satisfy system A: {label} fails at {counterexample}")]
    NotRpq {
        label: String,
        counterexample: Assignment,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("equation xa = b is inconsistent: (b/a)a = {product} but b = {b}")]
    Inconsistent { product: Element, b: Element },

    #[error("sequence must be nonempty")]
    EmptySequence,

    #[error("bracket shape has {leaves} leaves but the sequence has {len} entries")]
    ShapeMismatch { leaves: usize, len: usize },

    #[error("constants are not supported by the quasigroup word problem")]
    UnsupportedLanguage,

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
