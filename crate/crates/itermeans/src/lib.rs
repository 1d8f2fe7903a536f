//! Extend any two-variable mean to `n` variables by fixed-point iteration.
//!
//! A two-variable mean `M(x, y)` (arithmetic, geometric, harmonic,
//! logarithmic, or a power mean) is turned into an `n`-variable mean by
//! repeatedly replacing every element of a vector with a mean of some of the
//! others until the vector collapses to a single value. Three update schemes
//! are provided:
//!
//! * **variation** — each slot becomes the `(n-1)`-variable mean of all the
//!   other elements;
//! * **neighbor** — the vector is sorted once, then each slot becomes the
//!   two-variable mean of its adjacent (for the ends) or skip-adjacent
//!   (for the interior) elements;
//! * **cycle** — a Hamiltonian cycle on the `n` slots pairs the elements;
//!   each edge's mean is written to a designated output slot.
//!
//! All three schemes converge to the same limit. The engine is generic over
//! an [`engine::ElementDomain`], with implementations for positive reals and
//! for symmetric positive-definite matrices under operator means.
//!
//! Closed forms for the arithmetic, geometric, and harmonic cases live in
//! [`closed_form`] and serve as independent ground truth; [`axioms`] checks
//! the defining mean axioms on randomized samples.

pub mod axioms;
pub mod closed_form;
pub mod cycle;
pub mod engine;
pub mod error;
pub mod mean;
pub mod rate;
pub mod spd;
pub mod trace;

pub use cycle::{neighbor_as_cycle, CycleMapping};
pub use engine::{
    extend_mean, n_var_evaluator, relative_spread, spread, ConvergenceConfig, ElementDomain,
    ExtensionResult, IterationState, ScalarDomain, Scheme,
};
pub use error::Error;
pub use mean::TwoVarMean;
pub use rate::{compare_rates, RateReport};
pub use spd::{eval_operator_mean, loewner_leq, spd_domain, OperatorMean, SpdDomain, SpdMatrix};
