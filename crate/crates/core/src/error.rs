//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by curve-level operations.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CurveError {
    /// The crossing data cannot be realized by an embedded curve.
    #[error("not a simple curve: {0}")]
    NotSimple(String),
    /// Reduction emptied the crossing sequence: the input bounds a disk.
    #[error("curve is null-homotopic")]
    NullHomotopic,
    /// A crossing references an edge absent from the model.
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    /// An operation requiring a separating curve was fed a non-separating one.
    #[error("curve is not separating")]
    NotSeparating,
    /// Two consecutive crossings do not share a face.
    #[error("crossing sequence is not a transverse path (positions {0} and {1} share no face)")]
    Disconnected(usize, usize),
    /// The crossing sequence is empty.
    #[error("empty crossing sequence")]
    Empty,
}

/// Errors raised while parsing group words.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("parse error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

/// Errors raised by the complexity-reduction and normal-form pipeline.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GoeritzError {
    /// An intersection count that must be even came out odd.
    #[error("odd intersection triple ({0}, {1}, {2}); input is not a taut separating curve")]
    OddIntersection(u64, u64, u64),
    /// A structural invariant failed; carries a diagnostic.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    /// The curve is separating but certifiably not a reducing curve.
    #[error("not a reducing curve: {diagnostic}")]
    NotReducing { diagnostic: String },
    /// `stabilizer_resolve` was fed a word that moves the standard sphere.
    #[error("word does not stabilize the standard reducing sphere")]
    NotStabilizer,
    /// The stabilizer exponents could not be resolved within bounds.
    #[error("stabilizer resolution failed: {0}")]
    ResolutionFailure(String),
    /// `assemble_normal_form` was fed a word not shaped like a reduction output.
    #[error("malformed reduction word: {0}")]
    MalformedWord(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}
