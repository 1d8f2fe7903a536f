//! Bracketing verification for equal-norm SPD inputs.
//!
//! When all inputs share the same operator norm, no Loewner comparison
//! orders them, so convergence of the neighbor iteration is checked by
//! bracketing: the first input is scaled up by `a >= 1` and down by
//! `a' <= 1`, both tending to 1 in an index `t`. Monotonicity of the
//! operator means keeps each perturbed run above resp. below the
//! unperturbed one, and the two perturbed limits close in on each other as
//! `t` grows. The verifier runs the three iterations for every `t`, records
//! the Loewner verdicts and the gap between the perturbed limits, and
//! reports rather than assumes.

use serde::Serialize;

use super::{loewner_leq, spd_domain, spd_scale, sym_diff_norm, OperatorMean, SpdMatrix};
use crate::engine::{extend_mean, ConvergenceConfig, Scheme};
use crate::error::Error;

/// Pairwise relative tolerance on the input norms.
const NORM_EQUALITY_TOL: f64 = 1e-10;

/// Produces the pair `(a_t, a'_t)` for an index `t`.
pub type ScheduleFn = fn(u32) -> (f64, f64);

/// Default schedule: `a_t = 1 + 2^-t`, `a'_t = 1 - 2^-(t+1)`.
pub fn default_schedule(t: u32) -> (f64, f64) {
    (
        1.0 + 2.0_f64.powi(-(t as i32)),
        1.0 - 2.0_f64.powi(-(t as i32) - 1),
    )
}

#[derive(Debug, Clone, Copy)]
pub struct SandwichConfig {
    /// Largest perturbation index; the report covers `t = 0..=t_max`.
    pub t_max: u32,
    /// Rule producing `(a_t, a'_t)`; validated at run time: `a_t >= 1`,
    /// `0 < a'_t <= 1`, both monotone toward 1.
    pub schedule: ScheduleFn,
    /// Engine settings for every extension run.
    pub engine: ConvergenceConfig,
    /// Tolerance for the Loewner verdicts, relative to the operator norm;
    /// must absorb the limit-extraction error of the engine (roughly the
    /// engine tolerance per run).
    pub loewner_tol: f64,
}

impl SandwichConfig {
    /// `t_max = 30`, default schedule, verdict tolerance at three times the
    /// engine tolerance.
    pub fn new(engine: ConvergenceConfig) -> Self {
        SandwichConfig {
            t_max: 30,
            schedule: default_schedule,
            engine,
            loewner_tol: 3.0 * engine.tolerance,
        }
    }
}

impl Default for SandwichConfig {
    fn default() -> Self {
        Self::new(ConvergenceConfig::matrix())
    }
}

/// One perturbation index: scales, limits, verdicts, gap.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichStep {
    pub t: u32,
    pub scale_up: f64,
    pub scale_down: f64,
    pub upper_converged: bool,
    pub lower_converged: bool,
    pub upper_iterations: usize,
    pub lower_iterations: usize,
    /// `limit(down-scaled run) <= limit(unperturbed run)` in Loewner order.
    pub lower_leq_base: bool,
    /// `limit(unperturbed run) <= limit(up-scaled run)` in Loewner order.
    pub base_leq_upper: bool,
    /// `|| upper limit - lower limit ||`.
    pub gap: f64,
    /// Gap relative to the common input norm.
    pub rel_gap: f64,
    pub upper_limit: SpdMatrix,
    pub lower_limit: SpdMatrix,
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport {
    /// Common operator norm of the inputs.
    pub input_norm: f64,
    pub loewner_tol: f64,
    pub base_converged: bool,
    pub base_iterations: usize,
    pub base_limit: SpdMatrix,
    /// One entry per `t` in `0..=t_max`.
    pub steps: Vec<SandwichStep>,
}

impl SandwichReport {
    pub fn all_converged(&self) -> bool {
        self.base_converged
            && self
                .steps
                .iter()
                .all(|s| s.upper_converged && s.lower_converged)
    }

    pub fn all_verdicts_hold(&self) -> bool {
        self.steps.iter().all(|s| s.lower_leq_base && s.base_leq_upper)
    }

    pub fn final_rel_gap(&self) -> f64 {
        self.steps.last().map(|s| s.rel_gap).unwrap_or(0.0)
    }
}

/// Runs the neighbor iteration on the inputs and on both perturbed copies
/// for every `t`, recording convergence, Loewner verdicts, and the gap
/// between the perturbed limits.
///
/// All inputs must be SPD of one dimension with pairwise equal operator
/// norms (relative tolerance 1e-10); unequal norms do not need bracketing
/// and are rejected as a precondition violation.
pub fn sandwich_verify(
    mean: OperatorMean,
    inputs: &[SpdMatrix],
    config: &SandwichConfig,
) -> Result<SandwichReport, Error> {
    if inputs.len() < 2 {
        return Err(Error::Config(format!(
            "sandwich verification needs at least 2 inputs, got {}",
            inputs.len()
        )));
    }
    let dim = inputs[0].dim();
    for (i, m) in inputs.iter().enumerate() {
        if m.dim() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: m.dim(),
            });
        }
        let gap = (m.norm() - inputs[0].norm()).abs();
        if gap > NORM_EQUALITY_TOL * inputs[0].norm().max(m.norm()) {
            return Err(Error::Precondition(format!(
                "inputs 0 and {i} have different operator norms ({} vs {}); \
                 unequal norms converge without bracketing",
                inputs[0].norm(),
                m.norm()
            )));
        }
    }
    if !config.loewner_tol.is_finite() || config.loewner_tol < 0.0 {
        return Err(Error::Config(format!(
            "loewner tolerance must be nonnegative, got {}",
            config.loewner_tol
        )));
    }

    let input_norm = inputs[0].norm();
    let domain = spd_domain(mean);
    let base = extend_mean(&domain, inputs, &Scheme::Neighbor, &config.engine)?;

    let mut steps = Vec::with_capacity(config.t_max as usize + 1);
    let mut prev_up = f64::INFINITY;
    let mut prev_down = 0.0_f64;
    for t in 0..=config.t_max {
        let (up, down) = (config.schedule)(t);
        if !(up >= 1.0) || !(down > 0.0 && down <= 1.0) {
            return Err(Error::Config(format!(
                "schedule produced ({up}, {down}) at t = {t}; need a_t >= 1 and 0 < a'_t <= 1"
            )));
        }
        if up > prev_up || down < prev_down {
            return Err(Error::Config(format!(
                "schedule is not monotone toward 1 at t = {t}"
            )));
        }
        prev_up = up;
        prev_down = down;

        let mut upper_inputs = inputs.to_vec();
        upper_inputs[0] = spd_scale(&inputs[0], up)?;
        let mut lower_inputs = inputs.to_vec();
        lower_inputs[0] = spd_scale(&inputs[0], down)?;

        let upper = extend_mean(&domain, &upper_inputs, &Scheme::Neighbor, &config.engine)?;
        let lower = extend_mean(&domain, &lower_inputs, &Scheme::Neighbor, &config.engine)?;

        let gap = sym_diff_norm(&upper.value, &lower.value);
        steps.push(SandwichStep {
            t,
            scale_up: up,
            scale_down: down,
            upper_converged: upper.converged,
            lower_converged: lower.converged,
            upper_iterations: upper.iterations,
            lower_iterations: lower.iterations,
            lower_leq_base: loewner_leq(&lower.value, &base.value, config.loewner_tol)?,
            base_leq_upper: loewner_leq(&base.value, &upper.value, config.loewner_tol)?,
            gap,
            rel_gap: gap / input_norm,
            upper_limit: upper.value,
            lower_limit: lower.value,
        });
    }

    Ok(SandwichReport {
        input_norm,
        loewner_tol: config.loewner_tol,
        base_converged: base.converged,
        base_iterations: base.iterations,
        base_limit: base.value,
        steps,
    })
}
