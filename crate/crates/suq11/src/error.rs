//! Error types shared across modules.

use thiserror::Error;

#[derive(Error, Debug, Clone)]
pub enum QError {
    /// Invalid label or parameter (violated invariant named in the message).
    #[error("domain error: {0}")]
    Domain(String),

    /// A terminating series hit a vanishing lower-parameter q-Pochhammer
    /// while the numerator was still nonzero.
    #[error("pole before termination: lower parameter {parameter} vanishes at index {index}")]
    PoleBeforeTermination { parameter: String, index: usize },

    /// No upper parameter is a nonpositive integer.
    #[error("series does not terminate: no nonpositive-integer upper parameter")]
    NonTerminating,

    /// A raising chain crossed the truncation bound; retry with a larger cut.
    #[error("truncated state: raise mu_cut above {needed}")]
    Truncated { needed: String },

    /// The lowering-operator kernel on the requested weight space is not
    /// one-dimensional; the label lies outside the decomposition range.
    #[error("kernel dimension {dim} != 1 on the weight-{weight} space")]
    KernelDegenerate { dim: usize, weight: String },
}

pub type QResult<T> = Result<T, QError>;
