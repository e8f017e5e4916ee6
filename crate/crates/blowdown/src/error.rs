//! Crate-wide error type.
//!
//! Every fallible operation in the library returns [`Error`] so that callers
//! (including the CLI and the C ABI layer) can classify failures uniformly:
//! malformed input, violated mathematical preconditions, and internal
//! search/iteration limits are distinct variants.

use num_bigint::BigInt;
use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All errors produced by the library.
#[derive(Clone, Debug, Error)]
pub enum Error {
    /// A vector's coordinate count does not match the lattice rank.
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A Gram matrix is not square or not symmetric.
    #[error("gram matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    /// The bilinear form is degenerate where a nondegenerate one is required.
    #[error("bilinear form is degenerate (radical of rank {radical})")]
    DegenerateForm { radical: usize },

    /// Vectors required to be linearly independent are not.
    #[error("vectors are linearly dependent (rank {rank}, expected {expected})")]
    DependentVectors { rank: usize, expected: usize },

    /// A class required to be characteristic is not.
    #[error("class is not characteristic: pairing with basis vector {index} has wrong parity")]
    NotCharacteristic { index: usize },

    /// A model does not satisfy the shape this library works with.
    #[error("invalid manifold model: {reason}")]
    InvalidModel { reason: String },

    /// A chamber representative is invalid (non-positive square, wrong
    /// orientation side, or zero pairing where a sign is needed).
    #[error("invalid chamber: {reason}")]
    InvalidChamber { reason: String },

    /// Wall-crossing was invoked outside its domain of definition.
    #[error("wall-crossing precondition violated: {reason}")]
    WallCrossing { reason: String },

    /// A sphere configuration fails the plumbing-chain shape.
    #[error("invalid sphere chain at sphere {index}: {reason}")]
    InvalidChain { index: usize, reason: String },

    /// Gluing a fractional class onto a sublattice failed a precondition.
    #[error("overlattice glue rejected: {reason}")]
    GlueRejected { reason: String },

    /// A basic-class search specification is malformed.
    #[error("invalid search specification: {reason}")]
    InvalidSearch { reason: String },

    /// No splitting class of square -1 was found within the search bound.
    #[error("no splitting class found within coordinate bound {bound}")]
    SplitterNotFound { bound: i64 },

    /// The reflection cascade exceeded its iteration cap.
    #[error("normal-form reduction stalled after {steps} steps (cap {cap})")]
    ReductionStalled { steps: usize, cap: usize },

    /// A lattice expected to be unimodular is not.
    #[error("lattice is not unimodular: determinant {determinant}")]
    NotUnimodular { determinant: BigInt },

    /// A generic precondition violation, tagged with the operation name.
    #[error("{op}: {reason}")]
    Precondition { op: &'static str, reason: String },

    /// A move script failed to parse.
    #[error("script parse error at line {line}: {reason}")]
    ScriptParse { line: usize, reason: String },

    /// A move could not be applied to the current handle ledger.
    #[error("move {step} cannot be applied: {reason}")]
    MoveRejected { step: usize, reason: String },

    /// A manifest failed to parse.
    #[error("manifest parse error at line {line}: {reason}")]
    ManifestParse { line: usize, reason: String },

    /// A name referenced in a manifest or on the command line is not defined.
    #[error("unknown name: {name}")]
    UnknownName { name: String },
}

impl Error {
    /// Shorthand used by operations whose precondition text is built inline.
    pub fn precondition(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Precondition {
            op,
            reason: reason.into(),
        }
    }
}
