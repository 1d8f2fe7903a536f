//! Convergence-rate comparison between the sorted-neighbor baseline and
//! cycle mappings.
//!
//! The expectation under test: at every step, the baseline's minimum stays
//! at or below every cycle iteration's minimum and its maximum at or above
//! every cycle iteration's maximum, so no cycle mapping converges slower
//! than the baseline. Violations are recorded as data, not asserted.

use serde::Serialize;

use crate::cycle::CycleMapping;
use crate::engine::{extend_mean, ConvergenceConfig, ExtensionResult, ScalarDomain, Scheme};
use crate::error::Error;
use crate::mean::TwoVarMean;

/// Absolute slack when comparing per-step extrema across schemes.
pub const RATE_SLACK: f64 = 1e-12;

/// Extrema of one state in one run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StepExtrema {
    pub min: f64,
    pub max: f64,
    pub spread: f64,
}

/// Per-step table for a single scheme.
#[derive(Debug, Clone, Serialize)]
pub struct SchemeRate {
    pub label: String,
    pub converged: bool,
    /// Steps needed to reach the tolerance, when reached in budget.
    pub steps_to_tolerance: Option<usize>,
    /// One entry per step, starting at step 0.
    pub extrema: Vec<StepExtrema>,
}

/// One step at which a cycle mapping escaped the baseline envelope.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RateViolation {
    pub mapping: usize,
    pub step: usize,
    pub baseline_min: f64,
    pub baseline_max: f64,
    pub cycle_min: f64,
    pub cycle_max: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RateReport {
    pub slack: f64,
    pub baseline: SchemeRate,
    pub cycles: Vec<SchemeRate>,
    pub violations: Vec<RateViolation>,
}

fn scheme_rate(label: String, run: &ExtensionResult<f64>) -> SchemeRate {
    let trace = run.trace.as_ref().expect("rate runs capture traces");
    let extrema = trace
        .iter()
        .map(|st| {
            let min = st.elements.iter().copied().fold(f64::INFINITY, f64::min);
            let max = st
                .elements
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max);
            StepExtrema {
                min,
                max,
                spread: max - min,
            }
        })
        .collect();
    SchemeRate {
        label,
        converged: run.converged,
        steps_to_tolerance: run.converged.then_some(run.iterations),
        extrema,
    }
}

/// Runs the neighbor baseline and every cycle mapping from the same sorted
/// initial state and tabulates per-step extrema.
///
/// Inputs must already be sorted ascending. A violation is logged whenever
/// `min_baseline > min_cycle + slack` or `max_baseline < max_cycle - slack`
/// at a step both runs recorded.
pub fn compare_rates(
    mean: &TwoVarMean,
    inputs: &[f64],
    mappings: &[CycleMapping],
    config: &ConvergenceConfig,
) -> Result<RateReport, Error> {
    if inputs.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Precondition(
            "rate comparison inputs must be sorted ascending".into(),
        ));
    }
    let domain = ScalarDomain::new(*mean);
    let cfg = config.with_trace(true);
    let base_run = extend_mean(&domain, inputs, &Scheme::Neighbor, &cfg)?;
    let baseline = scheme_rate("neighbor".into(), &base_run);

    let mut cycles = Vec::with_capacity(mappings.len());
    let mut violations = Vec::new();
    for (index, mapping) in mappings.iter().enumerate() {
        if mapping.len() != inputs.len() {
            return Err(Error::Dimension {
                expected: inputs.len(),
                found: mapping.len(),
            });
        }
        let run = extend_mean(&domain, inputs, &Scheme::Cycle(mapping.clone()), &cfg)?;
        let rate = scheme_rate(format!("cycle-{index:03}"), &run);
        let overlap = baseline.extrema.len().min(rate.extrema.len());
        for step in 0..overlap {
            let b = baseline.extrema[step];
            let c = rate.extrema[step];
            if b.min > c.min + RATE_SLACK || b.max < c.max - RATE_SLACK {
                violations.push(RateViolation {
                    mapping: index,
                    step,
                    baseline_min: b.min,
                    baseline_max: b.max,
                    cycle_min: c.min,
                    cycle_max: c.max,
                });
            }
        }
        cycles.push(rate);
    }

    Ok(RateReport {
        slack: RATE_SLACK,
        baseline,
        cycles,
        violations,
    })
}
