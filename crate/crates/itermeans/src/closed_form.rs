//! Closed-form n-variable means and the explicit extreme-element
//! trajectory of the arithmetic variation iteration.
//!
//! These are independent of the iteration engine and serve as ground truth
//! in tests: the iterated arithmetic, geometric, and harmonic extensions
//! must land on the classical n-variable means.

use serde::Serialize;

use crate::error::Error;

fn check_inputs(inputs: &[f64]) -> Result<(), Error> {
    if inputs.is_empty() {
        return Err(Error::Config("closed forms need at least one input".into()));
    }
    for &v in inputs {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::Domain(format!(
                "closed-form inputs must be strictly positive finite reals, got {v}"
            )));
        }
    }
    Ok(())
}

/// `(x_1 + ... + x_n) / n`.
pub fn arithmetic_n(inputs: &[f64]) -> Result<f64, Error> {
    check_inputs(inputs)?;
    Ok(inputs.iter().sum::<f64>() / inputs.len() as f64)
}

/// `(x_1 * ... * x_n)^(1/n)`, computed through the mean of logarithms so
/// wide products cannot overflow.
pub fn geometric_n(inputs: &[f64]) -> Result<f64, Error> {
    check_inputs(inputs)?;
    let log_mean = inputs.iter().map(|x| x.ln()).sum::<f64>() / inputs.len() as f64;
    Ok(log_mean.exp())
}

/// `n / (1/x_1 + ... + 1/x_n)`.
pub fn harmonic_n(inputs: &[f64]) -> Result<f64, Error> {
    check_inputs(inputs)?;
    Ok(inputs.len() as f64 / inputs.iter().map(|x| x.recip()).sum::<f64>())
}

/// Extreme elements of the arithmetic variation iteration at step `k`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TraceEndpoints {
    /// Smallest element of the step-`k` state.
    pub lower: f64,
    /// Largest element of the step-`k` state.
    pub upper: f64,
    pub step: u32,
}

/// Evaluates the explicit formula for the smallest and largest elements of
/// the arithmetic variation iteration after `k` steps.
///
/// Writing `p = (n-1)^k` and `S` for the input sum, the extremes are
///
/// ```text
/// lower = ((p - 1)/n * S + x_min) / p     (k even)
/// lower = ((p + 1)/n * S - x_max) / p     (k odd)
/// ```
///
/// and symmetrically for `upper` with `x_min` and `x_max` swapped. Both
/// converge to the arithmetic mean from below resp. above. Inputs must be
/// sorted ascending.
///
/// The odd-`k` branch is evaluated as
/// `((p+1)/n * (S - x_opp) + (p+1-n)/n * x_opp) / p`, which is the same
/// quantity with every term nonnegative (`p + 1 >= n` for `k >= 1`); the
/// displayed form subtracts nearly equal quantities at small odd `k` when
/// one input dominates the sum and loses up to five digits there.
pub fn arithmetic_trace_endpoints(sorted_inputs: &[f64], k: u32) -> Result<TraceEndpoints, Error> {
    check_inputs(sorted_inputs)?;
    if sorted_inputs.len() < 2 {
        return Err(Error::Config(
            "trace endpoints need at least two inputs".into(),
        ));
    }
    if sorted_inputs.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Precondition(
            "trace-endpoint inputs must be sorted ascending".into(),
        ));
    }
    let len = sorted_inputs.len();
    let n = len as f64;
    let sum: f64 = sorted_inputs.iter().sum();
    let first = sorted_inputs[0];
    let last = sorted_inputs[len - 1];
    let p = (n - 1.0).powi(k as i32);
    let (lower, upper) = if k % 2 == 0 {
        (
            ((p - 1.0) / n * sum + first) / p,
            ((p - 1.0) / n * sum + last) / p,
        )
    } else {
        let sum_without_last: f64 = sorted_inputs[..len - 1].iter().sum();
        let sum_without_first: f64 = sorted_inputs[1..].iter().sum();
        let tail = (p + 1.0 - n) / n;
        (
            ((p + 1.0) / n * sum_without_last + tail * last) / p,
            ((p + 1.0) / n * sum_without_first + tail * first) / p,
        )
    };
    Ok(TraceEndpoints { lower, upper, step: k })
}
