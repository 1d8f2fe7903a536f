//! Generic fixed-point extension engine.
//!
//! The engine iterates a vector of domain elements under one of three update
//! schemes until the vector's spread (largest pairwise distance) falls below
//! a relative tolerance. Every update reads only the previous state, so the
//! per-step element computations are independent of each other.

use serde::Serialize;

use crate::cycle::CycleMapping;
use crate::error::Error;
use crate::mean::TwoVarMean;

/// Floor for the inner tolerance used by the variation scheme's recursion.
/// Below roughly 4-5 ulps of relative spread the iteration can stall on
/// rounding noise, so the outer-tolerance/10 rule is clamped here.
const INNER_TOLERANCE_FLOOR: f64 = 1e-15;

/// Keeps relative spread finite when every element is at the origin's scale.
const MAGNITUDE_FLOOR: f64 = 1e-300;

/// Slack for the internal sortedness check of the neighbor scheme; covers
/// up to a few ulps of rounding in non-correctly-rounded mean evaluations.
const SORTEDNESS_SLACK: f64 = 1e-13;

/// An element type together with the two-variable mean acting on it.
///
/// The domain owns the mean (a [`TwoVarMean`] for scalars, an operator mean
/// for matrices) so the engine can stay generic over both.
pub trait ElementDomain {
    type Element: Clone + std::fmt::Debug;

    /// Applies the two-variable mean this domain was built around.
    fn mean(&self, a: &Self::Element, b: &Self::Element) -> Result<Self::Element, Error>;

    /// Nonnegative, symmetric, zero on the diagonal.
    fn distance(&self, a: &Self::Element, b: &Self::Element) -> f64;

    /// Scale of an element: the value itself for positive scalars, the
    /// operator norm for matrices. Used to make spread relative.
    fn magnitude(&self, e: &Self::Element) -> f64;

    /// Key inducing a total order, when the domain has one. Scalar domains
    /// return the value; matrix domains return `None` and states keep their
    /// positional order.
    fn sort_key(&self, _e: &Self::Element) -> Option<f64> {
        None
    }

    /// Validates an element before a run starts.
    fn check_element(&self, _e: &Self::Element) -> Result<(), Error> {
        Ok(())
    }

    /// Width of a collection: the largest pairwise distance. Zero for
    /// singletons and constant collections.
    fn spread(&self, items: &[Self::Element]) -> f64 {
        let mut s = 0.0_f64;
        for i in 0..items.len() {
            for j in (i + 1)..items.len() {
                s = s.max(self.distance(&items[i], &items[j]));
            }
        }
        s
    }
}

/// Positive reals under a [`TwoVarMean`].
#[derive(Debug, Clone)]
pub struct ScalarDomain {
    mean: TwoVarMean,
}

impl ScalarDomain {
    pub fn new(mean: TwoVarMean) -> Self {
        ScalarDomain { mean }
    }

    pub fn mean_spec(&self) -> TwoVarMean {
        self.mean
    }
}

impl ElementDomain for ScalarDomain {
    type Element = f64;

    fn mean(&self, a: &f64, b: &f64) -> Result<f64, Error> {
        self.mean.eval(*a, *b)
    }

    fn distance(&self, a: &f64, b: &f64) -> f64 {
        (a - b).abs()
    }

    fn magnitude(&self, e: &f64) -> f64 {
        e.abs()
    }

    fn sort_key(&self, e: &f64) -> Option<f64> {
        Some(*e)
    }

    fn check_element(&self, e: &f64) -> Result<(), Error> {
        if !e.is_finite() || *e <= 0.0 {
            return Err(Error::Domain(format!(
                "scalar inputs must be strictly positive finite reals, got {e}"
            )));
        }
        Ok(())
    }

    fn spread(&self, items: &[f64]) -> f64 {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &v in items {
            min = min.min(v);
            max = max.max(v);
        }
        if items.is_empty() {
            0.0
        } else {
            max - min
        }
    }
}

/// The vector of current elements plus the step counter.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationState<E> {
    pub elements: Vec<E>,
    pub step: usize,
}

impl<E> IterationState<E> {
    /// Step-0 state; requires at least 2 elements.
    pub fn initial(elements: Vec<E>) -> Result<Self, Error> {
        if elements.len() < 2 {
            return Err(Error::Config(format!(
                "an iteration state needs at least 2 elements, got {}",
                elements.len()
            )));
        }
        Ok(IterationState { elements, step: 0 })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Termination control for an extension run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConvergenceConfig {
    /// Relative spread threshold (spread divided by the largest element
    /// magnitude). Must be positive.
    pub tolerance: f64,
    /// Step budget; runs that exceed it return `converged = false`.
    pub max_iterations: usize,
    /// Capture a full per-step state trace in the result.
    pub trace_capture: bool,
}

impl ConvergenceConfig {
    /// Defaults for scalar runs.
    pub fn scalar() -> Self {
        ConvergenceConfig {
            tolerance: 1e-12,
            max_iterations: 10_000,
            trace_capture: false,
        }
    }

    /// Defaults for matrix runs.
    pub fn matrix() -> Self {
        ConvergenceConfig {
            tolerance: 1e-10,
            max_iterations: 10_000,
            trace_capture: false,
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn with_trace(mut self, trace_capture: bool) -> Self {
        self.trace_capture = trace_capture;
        self
    }

    fn validate(&self) -> Result<(), Error> {
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return Err(Error::Config(format!(
                "tolerance must be a positive finite real, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        Ok(())
    }

    /// Configuration for the variation scheme's inner runs: a tenth of the
    /// outer tolerance, clamped at the rounding floor, trace off. The inner
    /// step budget never drops below the scalar default, so capping the
    /// outer step count (e.g. for trace studies) cannot starve the
    /// recursion.
    pub fn inner(&self) -> Self {
        ConvergenceConfig {
            tolerance: (self.tolerance / 10.0).max(INNER_TOLERANCE_FLOOR),
            max_iterations: self.max_iterations.max(10_000),
            trace_capture: false,
        }
    }
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        Self::scalar()
    }
}

/// Update scheme selection.
#[derive(Debug, Clone)]
pub enum Scheme {
    /// Each slot becomes the (n-1)-variable mean of all other elements,
    /// evaluated by an inner neighbor-scheme extension.
    Variation,
    /// Sorted once, then means of adjacent (ends) or skip-adjacent
    /// (interior) pairs.
    Neighbor,
    /// Hamiltonian-cycle edge means written to assigned slots.
    Cycle(CycleMapping),
}

impl Scheme {
    pub fn label(&self) -> &'static str {
        match self {
            Scheme::Variation => "variation",
            Scheme::Neighbor => "neighbor",
            Scheme::Cycle(_) => "cycle",
        }
    }
}

/// Outcome of an extension run.
#[derive(Debug, Clone)]
pub struct ExtensionResult<E> {
    /// First element of the final state; within tolerance of every other.
    pub value: E,
    /// Steps executed.
    pub iterations: usize,
    /// Whether the relative spread reached the tolerance in budget.
    pub converged: bool,
    /// Per-step states (including step 0) when capture was requested.
    pub trace: Option<Vec<IterationState<E>>>,
    /// Absolute spread per step, including step 0; non-increasing for all
    /// builtin schemes.
    pub spread_history: Vec<f64>,
}

impl<E> ExtensionResult<E> {
    pub fn final_spread(&self) -> f64 {
        self.spread_history.last().copied().unwrap_or(0.0)
    }
}

/// Largest pairwise distance of a state; the quantity driven to zero.
pub fn spread<D: ElementDomain>(domain: &D, state: &IterationState<D::Element>) -> f64 {
    domain.spread(&state.elements)
}

/// Spread divided by the largest element magnitude (floored to stay
/// finite); this is the quantity compared against the tolerance.
pub fn relative_spread<D: ElementDomain>(domain: &D, elements: &[D::Element]) -> f64 {
    let scale = elements
        .iter()
        .map(|e| domain.magnitude(e))
        .fold(0.0_f64, f64::max);
    domain.spread(elements) / scale.max(MAGNITUDE_FLOOR)
}

fn rel_spread_of<D: ElementDomain>(domain: &D, elements: &[D::Element], spread: f64) -> f64 {
    let scale = elements
        .iter()
        .map(|e| domain.magnitude(e))
        .fold(0.0_f64, f64::max);
    spread / scale.max(MAGNITUDE_FLOOR)
}

/// One neighbor-scheme step: slot 0 gets `M(x0, x1)`, the last slot gets
/// `M(x[n-2], x[n-1])`, and interior slot `i` gets `M(x[i-1], x[i+1])`.
/// The two boundary rules coincide at `n = 2`, which makes the pair
/// collapse in one step.
pub fn step_neighbor<D: ElementDomain>(
    domain: &D,
    state: &IterationState<D::Element>,
) -> Result<IterationState<D::Element>, Error> {
    let n = state.len();
    let x = &state.elements;
    let mut next = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = if i == 0 {
            (0, 1)
        } else if i == n - 1 {
            (n - 2, n - 1)
        } else {
            (i - 1, i + 1)
        };
        next.push(domain.mean(&x[a], &x[b])?);
    }
    Ok(IterationState {
        elements: next,
        step: state.step + 1,
    })
}

/// One cycle-scheme step: for every edge `{j, l}` with assigned slot `i`,
/// the output slot `i` receives `M(x[j], x[l])`. All reads come from the
/// input state (synchronous update).
pub fn step_cycle<D: ElementDomain>(
    domain: &D,
    mapping: &CycleMapping,
    state: &IterationState<D::Element>,
) -> Result<IterationState<D::Element>, Error> {
    if mapping.len() != state.len() {
        return Err(Error::Dimension {
            expected: mapping.len(),
            found: state.len(),
        });
    }
    // The assignment is a bijection, so every placeholder is overwritten.
    let mut next = state.elements.clone();
    for ((j, l), target) in mapping.edges() {
        next[target] = domain.mean(&state.elements[j], &state.elements[l])?;
    }
    Ok(IterationState {
        elements: next,
        step: state.step + 1,
    })
}

/// One variation-scheme step: slot `i` becomes the `(n-1)`-variable mean of
/// all elements except the `i`-th.
///
/// For `n = 3` the inner mean is the two-variable mean itself; for larger
/// `n` it is evaluated by an inner neighbor-scheme extension run under
/// `sub_config`. Inner non-convergence is an error carrying the recursion
/// depth and the offending sub-input.
pub fn step_variation<D: ElementDomain>(
    domain: &D,
    state: &IterationState<D::Element>,
    sub_config: &ConvergenceConfig,
) -> Result<IterationState<D::Element>, Error> {
    let n = state.len();
    if n < 3 {
        return Err(Error::Config(format!(
            "the variation step needs at least 3 elements, got {n}"
        )));
    }
    let x = &state.elements;
    let mut next = Vec::with_capacity(n);
    for i in 0..n {
        let rest: Vec<D::Element> = x
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, e)| e.clone())
            .collect();
        let value = if n == 3 {
            domain.mean(&rest[0], &rest[1])?
        } else {
            let run = extend_mean(domain, &rest, &Scheme::Neighbor, sub_config)?;
            if !run.converged {
                return Err(Error::Convergence {
                    depth: 1,
                    detail: format!(
                        "inner {}-element extension stalled above tolerance {:e} \
                         after {} iterations on {:?}",
                        n - 1,
                        sub_config.tolerance,
                        run.iterations,
                        rest
                    ),
                });
            }
            run.value
        };
        next.push(value);
    }
    Ok(IterationState {
        elements: next,
        step: state.step + 1,
    })
}

/// Runs the chosen scheme from `inputs` until the relative spread reaches
/// `config.tolerance` or the step budget runs out.
///
/// Non-convergence is reported in the result (`converged = false`), not as
/// an error; the spread history is always complete. With two inputs every
/// scheme degenerates to a single two-variable evaluation. Scalar states
/// are sorted ascending at initialization for the neighbor scheme and stay
/// sorted; the variation and cycle schemes keep the given positional order.
pub fn extend_mean<D: ElementDomain>(
    domain: &D,
    inputs: &[D::Element],
    scheme: &Scheme,
    config: &ConvergenceConfig,
) -> Result<ExtensionResult<D::Element>, Error> {
    config.validate()?;
    if inputs.len() < 2 {
        return Err(Error::Config(format!(
            "extension requires at least 2 inputs, got {}",
            inputs.len()
        )));
    }
    for e in inputs {
        domain.check_element(e)?;
    }
    let n = inputs.len();
    let mut elements = inputs.to_vec();

    let effective = match scheme {
        Scheme::Cycle(m) => {
            if m.len() != n {
                return Err(Error::Dimension {
                    expected: m.len(),
                    found: n,
                });
            }
            scheme.clone()
        }
        Scheme::Variation | Scheme::Neighbor if n == 2 => Scheme::Neighbor,
        other => other.clone(),
    };

    let ordered = matches!(effective, Scheme::Neighbor) && domain.sort_key(&elements[0]).is_some();
    if ordered {
        elements.sort_by(|a, b| {
            let ka = domain.sort_key(a).expect("sort key present");
            let kb = domain.sort_key(b).expect("sort key present");
            ka.partial_cmp(&kb).expect("finite sort keys")
        });
    }

    let sub_config = config.inner();
    let mut state = IterationState { elements, step: 0 };
    let mut spread_history = vec![domain.spread(&state.elements)];
    let mut trace = config.trace_capture.then(|| vec![state.clone()]);
    let mut converged = false;

    loop {
        let current = *spread_history.last().expect("non-empty history");
        if rel_spread_of(domain, &state.elements, current) <= config.tolerance {
            converged = true;
            break;
        }
        if state.step >= config.max_iterations {
            break;
        }
        state = match &effective {
            Scheme::Variation => step_variation(domain, &state, &sub_config)?,
            Scheme::Neighbor => step_neighbor(domain, &state)?,
            Scheme::Cycle(m) => step_cycle(domain, m, &state)?,
        };
        if ordered {
            debug_assert!(
                sorted_within(domain, &state.elements),
                "neighbor scheme lost element ordering at step {}",
                state.step
            );
        }
        spread_history.push(domain.spread(&state.elements));
        if let Some(t) = trace.as_mut() {
            t.push(state.clone());
        }
    }

    Ok(ExtensionResult {
        value: state.elements[0].clone(),
        iterations: state.step,
        converged,
        trace,
        spread_history,
    })
}

fn sorted_within<D: ElementDomain>(domain: &D, elements: &[D::Element]) -> bool {
    elements.windows(2).all(|w| {
        let a = domain.sort_key(&w[0]).expect("sort key present");
        let b = domain.sort_key(&w[1]).expect("sort key present");
        b >= a - SORTEDNESS_SLACK * a.abs().max(b.abs()).max(1.0)
    })
}

/// Packages an extension run as an n-variable mean evaluator, e.g. for the
/// axiom checker. Non-convergence surfaces as an error carrying the inputs.
pub fn n_var_evaluator(
    mean: TwoVarMean,
    scheme: Scheme,
    config: ConvergenceConfig,
) -> impl Fn(&[f64]) -> Result<f64, Error> {
    let domain = ScalarDomain::new(mean);
    move |inputs: &[f64]| {
        let run = extend_mean(&domain, inputs, &scheme, &config)?;
        if !run.converged {
            return Err(Error::Convergence {
                depth: 0,
                detail: format!(
                    "no convergence within {} iterations on {:?}",
                    config.max_iterations, inputs
                ),
            });
        }
        Ok(run.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::neighbor_as_cycle;

    fn scalar(mean: TwoVarMean) -> ScalarDomain {
        ScalarDomain::new(mean)
    }

    fn state(xs: &[f64]) -> IterationState<f64> {
        IterationState::initial(xs.to_vec()).unwrap()
    }

    #[test]
    fn variation_step_arithmetic_123() {
        let d = scalar(TwoVarMean::Arithmetic);
        let next = step_variation(&d, &state(&[1.0, 2.0, 3.0]), &ConvergenceConfig::scalar().inner())
            .unwrap();
        // Slot i holds the mean of the other two, in slot order.
        assert_eq!(next.elements, vec![2.5, 2.0, 1.5]);
        assert_eq!(next.step, 1);
    }

    #[test]
    fn variation_step_constant_is_fixed() {
        let sub = ConvergenceConfig::scalar().inner();
        for mean in [
            TwoVarMean::Arithmetic,
            TwoVarMean::Geometric,
            TwoVarMean::Harmonic,
            TwoVarMean::Logarithmic,
            TwoVarMean::Power(3.0),
        ] {
            let d = scalar(mean);
            let next = step_variation(&d, &state(&[7.25; 4]), &sub).unwrap();
            assert_eq!(next.elements, vec![7.25; 4], "{mean}");
        }
    }

    #[test]
    fn variation_step_geometric_preserves_product() {
        let d = scalar(TwoVarMean::Geometric);
        let next = step_variation(&d, &state(&[1.0, 2.0, 4.0]), &ConvergenceConfig::scalar().inner())
            .unwrap();
        let product: f64 = next.elements.iter().product();
        assert!((product - 8.0).abs() <= 1e-12 * 8.0, "{product}");
    }

    #[test]
    fn variation_step_rejects_pairs() {
        let d = scalar(TwoVarMean::Arithmetic);
        let sub = ConvergenceConfig::scalar().inner();
        assert!(matches!(
            step_variation(&d, &state(&[1.0, 2.0]), &sub),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn neighbor_step_three_and_four() {
        let d = scalar(TwoVarMean::Arithmetic);
        let next3 = step_neighbor(&d, &state(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(next3.elements, vec![1.5, 2.0, 2.5]);
        let next4 = step_neighbor(&d, &state(&[1.0, 2.0, 3.0, 4.0])).unwrap();
        assert_eq!(next4.elements, vec![1.5, 2.0, 3.0, 3.5]);
    }

    #[test]
    fn neighbor_step_constant_unchanged() {
        let d = scalar(TwoVarMean::Logarithmic);
        let next = step_neighbor(&d, &state(&[3.0; 5])).unwrap();
        assert_eq!(next.elements, vec![3.0; 5]);
    }

    #[test]
    fn cycle_step_triangle_matches_neighbor() {
        let d = scalar(TwoVarMean::Arithmetic);
        let mapping = neighbor_as_cycle(3).unwrap();
        let s = state(&[1.0, 2.0, 3.0]);
        let via_cycle = step_cycle(&d, &mapping, &s).unwrap();
        let via_neighbor = step_neighbor(&d, &s).unwrap();
        assert_eq!(via_cycle.elements, via_neighbor.elements);
    }

    #[test]
    fn cycle_step_spec_n4_mapping() {
        // Cycle 0-1-3-2-0 with edges {
        //   {0,1} -> 0, {1,3} -> 2, {3,2} -> 3, {2,0} -> 1
        // } reproduces the neighbor step on (1,2,3,4).
        let mapping = CycleMapping::new(vec![0, 1, 3, 2], vec![0, 2, 3, 1]).unwrap();
        let d = scalar(TwoVarMean::Arithmetic);
        let next = step_cycle(&d, &mapping, &state(&[1.0, 2.0, 3.0, 4.0])).unwrap();
        assert_eq!(next.elements, vec![1.5, 2.0, 3.0, 3.5]);
    }

    #[test]
    fn cycle_step_constant_unchanged_any_mapping() {
        let d = scalar(TwoVarMean::Harmonic);
        for seed in 0..5 {
            let mapping = CycleMapping::from_seed(5, seed).unwrap();
            let next = step_cycle(&d, &mapping, &state(&[2.0; 5])).unwrap();
            assert_eq!(next.elements, vec![2.0; 5]);
        }
    }

    #[test]
    fn neighbor_as_cycle_step_identical_for_all_n() {
        let d = scalar(TwoVarMean::Geometric);
        for n in 3..=8 {
            let xs: Vec<f64> = (1..=n).map(|i| 1.0 + (i as f64).sqrt()).collect();
            let mapping = neighbor_as_cycle(n).unwrap();
            let s = state(&xs);
            let a = step_cycle(&d, &mapping, &s).unwrap();
            let b = step_neighbor(&d, &s).unwrap();
            assert_eq!(a.elements, b.elements, "n={n}");
        }
    }

    #[test]
    fn extend_matches_closed_forms() {
        let cfg = ConvergenceConfig::scalar();
        let cases: [(TwoVarMean, &[f64], f64); 3] = [
            (TwoVarMean::Arithmetic, &[1.0, 2.0, 3.0], 2.0),
            (TwoVarMean::Geometric, &[1.0, 2.0, 4.0], 2.0),
            (TwoVarMean::Harmonic, &[2.0, 6.0, 12.0], 4.0),
        ];
        for (mean, xs, expected) in cases {
            let d = scalar(mean);
            for scheme in [
                Scheme::Variation,
                Scheme::Neighbor,
                Scheme::Cycle(CycleMapping::from_seed(xs.len(), 11).unwrap()),
            ] {
                let r = extend_mean(&d, xs, &scheme, &cfg).unwrap();
                assert!(r.converged);
                assert!(
                    (r.value - expected).abs() <= 1e-10,
                    "{mean} {} -> {} != {expected}",
                    scheme.label(),
                    r.value
                );
            }
        }
    }

    #[test]
    fn extend_constant_converges_at_step_zero() {
        let d = scalar(TwoVarMean::Power(2.0));
        let r = extend_mean(&d, &[5.0; 4], &Scheme::Variation, &ConvergenceConfig::scalar())
            .unwrap();
        assert_eq!(r.value, 5.0);
        assert_eq!(r.iterations, 0);
        assert!(r.converged);
        assert_eq!(r.spread_history, vec![0.0]);
    }

    #[test]
    fn extend_two_inputs_is_direct_evaluation() {
        let d = scalar(TwoVarMean::Geometric);
        let r = extend_mean(&d, &[1.0, 4.0], &Scheme::Variation, &ConvergenceConfig::scalar())
            .unwrap();
        assert_eq!(r.value, 2.0);
        assert_eq!(r.iterations, 1);
        assert!(r.converged);
    }

    #[test]
    fn non_convergence_reports_instead_of_failing() {
        let d = scalar(TwoVarMean::Arithmetic);
        let cfg = ConvergenceConfig::scalar().with_max_iterations(1);
        let r = extend_mean(&d, &[1.0, 100.0, 10_000.0], &Scheme::Neighbor, &cfg).unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 1);
        assert_eq!(r.spread_history.len(), 2);
        assert!(r.spread_history[1] < r.spread_history[0]);
    }

    #[test]
    fn rejects_bad_inputs_and_configs() {
        let d = scalar(TwoVarMean::Arithmetic);
        let cfg = ConvergenceConfig::scalar();
        assert!(matches!(
            extend_mean(&d, &[1.0], &Scheme::Neighbor, &cfg),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            extend_mean(&d, &[1.0, -2.0, 3.0], &Scheme::Neighbor, &cfg),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            extend_mean(&d, &[1.0, 2.0, 3.0], &Scheme::Neighbor, &cfg.with_tolerance(0.0)),
            Err(Error::Config(_))
        ));
        let mapping = CycleMapping::from_seed(4, 0).unwrap();
        assert!(matches!(
            extend_mean(&d, &[1.0, 2.0, 3.0], &Scheme::Cycle(mapping), &cfg),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn spread_examples() {
        let d = scalar(TwoVarMean::Arithmetic);
        assert_eq!(spread(&d, &state(&[1.0, 2.0, 3.0])), 2.0);
        assert_eq!(spread(&d, &state(&[4.0, 4.0, 4.0])), 0.0);
        assert_eq!(spread(&d, &state(&[1.5, 2.0, 2.5])), 1.0);
    }

    #[test]
    fn trace_rows_match_iteration_count() {
        let d = scalar(TwoVarMean::Arithmetic);
        let cfg = ConvergenceConfig::scalar().with_trace(true);
        let r = extend_mean(&d, &[1.0, 2.0, 3.0, 4.0], &Scheme::Neighbor, &cfg).unwrap();
        let trace = r.trace.as_ref().unwrap();
        assert_eq!(trace.len(), r.iterations + 1);
        assert_eq!(r.spread_history.len(), r.iterations + 1);
        for (k, st) in trace.iter().enumerate() {
            assert_eq!(st.step, k);
        }
    }

    #[test]
    fn variation_and_neighbor_coincide_at_n3_as_multisets() {
        let d = scalar(TwoVarMean::Logarithmic);
        let cfg = ConvergenceConfig::scalar().with_trace(true);
        let inputs = [1.0, 2.5, 7.0];
        let a = extend_mean(&d, &inputs, &Scheme::Variation, &cfg).unwrap();
        let b = extend_mean(&d, &inputs, &Scheme::Neighbor, &cfg).unwrap();
        let ta = a.trace.unwrap();
        let tb = b.trace.unwrap();
        for k in 0..ta.len().min(tb.len()) {
            let mut sa = ta[k].elements.clone();
            let mut sb = tb[k].elements.clone();
            sa.sort_by(f64::total_cmp);
            sb.sort_by(f64::total_cmp);
            assert_eq!(sa, sb, "step {k}");
        }
    }

    #[test]
    fn evaluator_attaches_inputs_on_failure() {
        let eval = n_var_evaluator(
            TwoVarMean::Arithmetic,
            Scheme::Neighbor,
            ConvergenceConfig::scalar().with_max_iterations(1),
        );
        match eval(&[1.0, 50.0, 4000.0]) {
            Err(Error::Convergence { depth: 0, detail }) => {
                assert!(detail.contains("4000"), "{detail}");
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }
}
