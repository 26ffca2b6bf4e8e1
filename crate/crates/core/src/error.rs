//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A schedule piece references a job id that is not in the instance.
    #[error("unknown job id {0:?}")]
    UnknownJobId(String),

    /// Speed rescaling requires a factor of at least one.
    #[error("invalid gamma {0}: rescaling factor must be >= 1")]
    InvalidGamma(String),

    /// The instance admits no preemptive schedule (degenerate window or
    /// vanishing execution time).
    #[error("infeasible instance: {0}")]
    InfeasibleInstance(String),

    /// A single-machine routine was handed a multi-machine instance.
    #[error("wrong machine count: expected {expected}, got {got}")]
    WrongMachineCount { expected: usize, got: usize },

    /// An algorithm was invoked on an instance outside its family.
    #[error("wrong instance family: {0}")]
    WrongFamily(String),

    /// Brute-force search limits exceeded.
    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),

    /// A fixed job order admits no feasible timing.
    #[error("no feasible timing for the given job order")]
    InfeasibleOrder,

    /// Window shrinking was anchored outside a job's active interval.
    #[error("bad anchor: {0}")]
    BadAnchor(String),

    /// The generator could not satisfy the requested family.
    #[error("generation failure: {0}")]
    GenerationFailure(String),

    /// Malformed input text.
    #[error("parse error: {0}")]
    Parse(String),

    /// Structurally valid input that violates a domain invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// A numeric argument is outside its admissible range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
