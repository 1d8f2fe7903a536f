//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by mean evaluation, the extension engine, and the
/// matrix kernel.
#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation (for scalars:
    /// non-positive or non-finite values).
    #[error("domain error: {0}")]
    Domain(String),

    /// A malformed configuration value or an inconsistent combination of
    /// options.
    #[error("configuration error: {0}")]
    Config(String),

    /// Two objects that must agree in size do not.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    /// A documented precondition was violated by the caller.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A matrix failed the symmetric positive-definite checks.
    #[error("not symmetric positive-definite: {0}")]
    NotSpd(String),

    /// An iteration did not reach its tolerance within the configured
    /// budget. `depth` is 0 for a top-level run and 1 for the inner
    /// recursion of the variation scheme.
    #[error("convergence failure (recursion depth {depth}): {detail}")]
    Convergence { depth: usize, detail: String },

    /// An n-variable evaluator failed; carries the offending input.
    #[error("evaluator failed on inputs {inputs:?}: {source}")]
    Evaluator {
        inputs: Vec<f64>,
        #[source]
        source: Box<Error>,
    },

    /// Unparseable textual input (mean specification, matrix file).
    #[error("parse error: {0}")]
    Parse(String),
}
