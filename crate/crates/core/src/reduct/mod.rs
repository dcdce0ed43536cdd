//! Formal contexts over model dependencies, exact attribute reducts and
//! verdict-preserving state-vector pruning.

mod context;
mod prune;
mod reducts;

use thiserror::Error;

pub use context::{extract_context, BinaryContext, FormalContext, DEFAULT_LAMBDA};
pub use prune::{live_closure, prune_model, select_keep};
pub use reducts::{
    enumerate_e_reducts, enumerate_e_reducts_bounded, extents, is_e_consistent, ExtentFamily,
    ReductReport, MAX_ATTRIBUTES,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductError {
    #[error("context must have at least one object and one attribute")]
    EmptyContext,
    #[error("relation has {got} entries in row {row}, expected {expected}")]
    Shape {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("relation entry ({row}, {col}) = {value} is outside [0, 1]")]
    OutOfRange { row: usize, col: usize, value: f64 },
    #[error("lambda {0} must lie in (0, 1]")]
    InvalidLambda(f64),
    #[error("{0} objects exceed the limit of 64")]
    TooManyObjects(usize),
    #[error("{got} attributes exceed the reduct search bound of {bound}")]
    TooManyAttributes { got: usize, bound: usize },
    /// Lines and columns are 1-based; 0 means unknown.
    #[error("csv line {line}, column {col}: {msg}")]
    Csv { line: u64, col: usize, msg: String },
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("attribute `{0}` is read by an invariant and cannot be pruned")]
    InvariantAttribute(String),
    #[error("kept attributes are not E-consistent")]
    Inconsistent,
    #[error("`{reader}` reads pruned attribute `{var}`")]
    ReadsPruned { reader: String, var: String },
    #[error("model `{0}` has no E-consistent attribute set to keep")]
    NoKeep(String),
}
