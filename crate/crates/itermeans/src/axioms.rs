//! Randomized checks of the mean axioms.
//!
//! The two-variable checker probes idempotence, symmetry, strict
//! internality, joint monotonicity, and continuity; the n-variable checker
//! probes the same set stated for n arguments (permutation invariance
//! replaces symmetry, and monotonicity splits into a single-coordinate and
//! a strict all-coordinates form). Samples are drawn log-uniformly from a
//! positive box with a seeded generator, so a report is reproducible from
//! `(samples, box, seed)`.
//!
//! Continuity is probed, not proven: the checker measures `|M(x + h) -
//! M(x)| / h` for `h` spanning `1e-6..1e-3` and records the largest ratio
//! as a Lipschitz estimate. The probe fails only if an evaluation is
//! non-finite.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::mean::TwoVarMean;

/// Absolute slack absorbing rounding in the strict monotonicity checks.
const MONOTONICITY_SLACK: f64 = 1e-12;
/// Relative tolerance for the two-variable equality checks.
const TWO_VAR_EQUALITY_TOL: f64 = 1e-12;
/// Perturbation sizes for the continuity probe.
const CONTINUITY_PROBES: [f64; 4] = [1e-6, 1e-5, 1e-4, 1e-3];
/// Random permutations per sample when n is too large to enumerate.
const SAMPLED_PERMUTATIONS: usize = 20;

/// Sampling region: strictly positive, `low < high`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DomainBox {
    low: f64,
    high: f64,
}

impl DomainBox {
    pub fn new(low: f64, high: f64) -> Result<Self, Error> {
        if !low.is_finite() || !high.is_finite() || low <= 0.0 || low >= high {
            return Err(Error::Config(format!(
                "domain box requires 0 < low < high, got ({low}, {high})"
            )));
        }
        Ok(DomainBox { low, high })
    }

    pub fn low(&self) -> f64 {
        self.low
    }

    pub fn high(&self) -> f64 {
        self.high
    }

    /// Log-uniform sample, so every decade of the box is exercised.
    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        rng.gen_range(self.low.ln()..=self.high.ln()).exp()
    }
}

impl Default for DomainBox {
    fn default() -> Self {
        DomainBox {
            low: 1e-3,
            high: 1e3,
        }
    }
}

/// A concrete violation; re-evaluating the stored inputs reproduces it.
#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    /// Inputs of the primary evaluation.
    pub inputs: Vec<f64>,
    /// Inputs of the comparison evaluation, for two-sided axioms.
    pub comparison_inputs: Option<Vec<f64>>,
    pub value: f64,
    pub comparison_value: Option<f64>,
}

/// Verdict for one axiom.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
    /// Largest `|dM| / h` seen by the continuity probe; recorded, never
    /// asserted against a fixed constant.
    pub lipschitz: Option<f64>,
}

impl AxiomCheck {
    fn pass(axiom: &str) -> Self {
        AxiomCheck {
            axiom: axiom.into(),
            passed: true,
            counterexample: None,
            lipschitz: None,
        }
    }

    fn fail(axiom: &str, cex: Counterexample) -> Self {
        AxiomCheck {
            axiom: axiom.into(),
            passed: false,
            counterexample: Some(cex),
            lipschitz: None,
        }
    }
}

/// Outcome of an axiom-checking run.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub samples: usize,
    pub domain: DomainBox,
    pub seed: u64,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }
}

fn equality_scale(a: f64, b: f64) -> f64 {
    a.abs().max(b.abs()).max(1.0)
}

/// Checks the two-variable axioms for a builtin mean.
pub fn check_two_var_axioms(
    mean: &TwoVarMean,
    samples: usize,
    domain: DomainBox,
    seed: u64,
) -> Result<AxiomReport, Error> {
    check_two_var_fn(|x, y| mean.eval(x, y), samples, domain, seed)
}

/// Checks the two-variable axioms for an arbitrary evaluator (used to
/// inject non-mean test doubles).
pub fn check_two_var_fn(
    f: impl Fn(f64, f64) -> Result<f64, Error>,
    samples: usize,
    domain: DomainBox,
    seed: u64,
) -> Result<AxiomReport, Error> {
    if samples == 0 {
        return Err(Error::Config("axiom checks need at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eval = |x: f64, y: f64| -> Result<f64, Error> {
        f(x, y).map_err(|e| Error::Evaluator {
            inputs: vec![x, y],
            source: Box::new(e),
        })
    };

    // (i) idempotence
    let mut idempotence = AxiomCheck::pass("idempotence");
    for _ in 0..samples {
        let x = domain.sample(&mut rng);
        let v = eval(x, x)?;
        if (v - x).abs() > TWO_VAR_EQUALITY_TOL * equality_scale(v, x) {
            idempotence = AxiomCheck::fail(
                "idempotence",
                Counterexample {
                    inputs: vec![x, x],
                    comparison_inputs: None,
                    value: v,
                    comparison_value: Some(x),
                },
            );
            break;
        }
    }

    // (ii) symmetry
    let mut symmetry = AxiomCheck::pass("symmetry");
    for _ in 0..samples {
        let x = domain.sample(&mut rng);
        let y = domain.sample(&mut rng);
        let a = eval(x, y)?;
        let b = eval(y, x)?;
        if (a - b).abs() > TWO_VAR_EQUALITY_TOL * equality_scale(a, b) {
            symmetry = AxiomCheck::fail(
                "symmetry",
                Counterexample {
                    inputs: vec![x, y],
                    comparison_inputs: Some(vec![y, x]),
                    value: a,
                    comparison_value: Some(b),
                },
            );
            break;
        }
    }

    // (iii) strict internality for x < y
    let mut internality = AxiomCheck::pass("internality");
    for _ in 0..samples {
        let a = domain.sample(&mut rng);
        let b = domain.sample(&mut rng);
        if a == b {
            continue;
        }
        let (x, y) = (a.min(b), a.max(b));
        let v = eval(x, y)?;
        if !(v > x && v < y) {
            internality = AxiomCheck::fail(
                "internality",
                Counterexample {
                    inputs: vec![x, y],
                    comparison_inputs: None,
                    value: v,
                    comparison_value: None,
                },
            );
            break;
        }
    }

    // (iv) strict joint monotonicity, up to rounding slack
    let mut monotonicity = AxiomCheck::pass("monotonicity");
    for _ in 0..samples {
        let x = domain.sample(&mut rng);
        let y = domain.sample(&mut rng);
        let x2 = x * rng.gen_range(1.05..1.5);
        let y2 = y * rng.gen_range(1.05..1.5);
        let v = eval(x, y)?;
        let w = eval(x2, y2)?;
        if w <= v - MONOTONICITY_SLACK {
            monotonicity = AxiomCheck::fail(
                "monotonicity",
                Counterexample {
                    inputs: vec![x, y],
                    comparison_inputs: Some(vec![x2, y2]),
                    value: v,
                    comparison_value: Some(w),
                },
            );
            break;
        }
    }

    // (v) continuity probe
    let mut continuity = AxiomCheck::pass("continuity");
    let mut lipschitz = 0.0_f64;
    'outer: for _ in 0..samples.min(64) {
        let x = domain.sample(&mut rng);
        let y = domain.sample(&mut rng);
        let base = eval(x, y)?;
        for h in CONTINUITY_PROBES {
            let v = eval(x + h, y)?;
            let ratio = (v - base).abs() / h;
            if !ratio.is_finite() {
                continuity = AxiomCheck::fail(
                    "continuity",
                    Counterexample {
                        inputs: vec![x, y],
                        comparison_inputs: Some(vec![x + h, y]),
                        value: base,
                        comparison_value: Some(v),
                    },
                );
                break 'outer;
            }
            lipschitz = lipschitz.max(ratio);
        }
    }
    continuity.lipschitz = Some(lipschitz);

    Ok(AxiomReport {
        samples,
        domain,
        seed,
        checks: vec![idempotence, symmetry, internality, monotonicity, continuity],
    })
}

/// Checks the n-variable axioms for an arbitrary n-variable evaluator
/// (typically an extension run packaged by
/// [`crate::engine::n_var_evaluator`]).
///
/// Permutation invariance enumerates all `n!` orderings for `n <= 5` and
/// falls back to sampled shuffles above that. All equality and
/// monotonicity comparisons use `tolerance`, relative to the larger value.
pub fn check_n_var_axioms(
    eval: impl Fn(&[f64]) -> Result<f64, Error>,
    n: usize,
    samples: usize,
    domain: DomainBox,
    tolerance: f64,
    seed: u64,
) -> Result<AxiomReport, Error> {
    if n < 3 {
        return Err(Error::Config(format!(
            "n-variable axiom checks need n >= 3, got {n}"
        )));
    }
    if samples == 0 {
        return Err(Error::Config("axiom checks need at least one sample".into()));
    }
    if !tolerance.is_finite() || tolerance <= 0.0 {
        return Err(Error::Config(format!(
            "axiom tolerance must be positive, got {tolerance}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eval = |xs: &[f64]| -> Result<f64, Error> {
        eval(xs).map_err(|e| Error::Evaluator {
            inputs: xs.to_vec(),
            source: Box::new(e),
        })
    };
    let sample_vec = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..n).map(|_| domain.sample(rng)).collect()
    };

    // (i') idempotence
    let mut idempotence = AxiomCheck::pass("idempotence");
    for _ in 0..samples {
        let x = domain.sample(&mut rng);
        let xs = vec![x; n];
        let v = eval(&xs)?;
        if (v - x).abs() > tolerance * equality_scale(v, x) {
            idempotence = AxiomCheck::fail(
                "idempotence",
                Counterexample {
                    inputs: xs,
                    comparison_inputs: None,
                    value: v,
                    comparison_value: Some(x),
                },
            );
            break;
        }
    }

    // (ii') permutation invariance
    let mut permutation = AxiomCheck::pass("permutation-invariance");
    'perm: for _ in 0..samples {
        let xs = sample_vec(&mut rng);
        let base = eval(&xs)?;
        let orderings = permutations_to_test(n, &mut rng);
        for order in orderings {
            let permuted: Vec<f64> = order.iter().map(|&i| xs[i]).collect();
            let v = eval(&permuted)?;
            if (v - base).abs() > tolerance * equality_scale(v, base) {
                permutation = AxiomCheck::fail(
                    "permutation-invariance",
                    Counterexample {
                        inputs: xs,
                        comparison_inputs: Some(permuted),
                        value: base,
                        comparison_value: Some(v),
                    },
                );
                break 'perm;
            }
        }
    }

    // (iii') internality
    let mut internality = AxiomCheck::pass("internality");
    for _ in 0..samples {
        let xs = sample_vec(&mut rng);
        let v = eval(&xs)?;
        let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let slack = tolerance * equality_scale(min, max);
        if v < min - slack || v > max + slack {
            internality = AxiomCheck::fail(
                "internality",
                Counterexample {
                    inputs: xs,
                    comparison_inputs: None,
                    value: v,
                    comparison_value: None,
                },
            );
            break;
        }
    }

    // (iv') raising one coordinate cannot lower the mean
    let mut coordinate = AxiomCheck::pass("coordinate-monotonicity");
    for _ in 0..samples {
        let xs = sample_vec(&mut rng);
        let mut ys = xs.clone();
        let j = rng.gen_range(0..n);
        ys[j] *= rng.gen_range(1.05..1.5);
        let v = eval(&xs)?;
        let w = eval(&ys)?;
        if w < v - tolerance * equality_scale(v, w) {
            coordinate = AxiomCheck::fail(
                "coordinate-monotonicity",
                Counterexample {
                    inputs: xs,
                    comparison_inputs: Some(ys),
                    value: v,
                    comparison_value: Some(w),
                },
            );
            break;
        }
    }

    // (v') raising every coordinate strictly raises the mean
    let mut joint = AxiomCheck::pass("joint-monotonicity");
    for _ in 0..samples {
        let xs = sample_vec(&mut rng);
        let ys: Vec<f64> = xs.iter().map(|x| x * rng.gen_range(1.05..1.5)).collect();
        let v = eval(&xs)?;
        let w = eval(&ys)?;
        if w <= v - tolerance * equality_scale(v, w) {
            joint = AxiomCheck::fail(
                "joint-monotonicity",
                Counterexample {
                    inputs: xs,
                    comparison_inputs: Some(ys),
                    value: v,
                    comparison_value: Some(w),
                },
            );
            break;
        }
    }

    // (vi') continuity probe
    let mut continuity = AxiomCheck::pass("continuity");
    let mut lipschitz = 0.0_f64;
    'cont: for _ in 0..samples.min(64) {
        let xs = sample_vec(&mut rng);
        let base = eval(&xs)?;
        let j = rng.gen_range(0..n);
        for h in CONTINUITY_PROBES {
            let mut ys = xs.clone();
            ys[j] += h;
            let v = eval(&ys)?;
            let ratio = (v - base).abs() / h;
            if !ratio.is_finite() {
                continuity = AxiomCheck::fail(
                    "continuity",
                    Counterexample {
                        inputs: xs,
                        comparison_inputs: Some(ys),
                        value: base,
                        comparison_value: Some(v),
                    },
                );
                break 'cont;
            }
            lipschitz = lipschitz.max(ratio);
        }
    }
    continuity.lipschitz = Some(lipschitz);

    Ok(AxiomReport {
        samples,
        domain,
        seed,
        checks: vec![
            idempotence,
            permutation,
            internality,
            coordinate,
            joint,
            continuity,
        ],
    })
}

/// Non-identity orderings to test: all of them for `n <= 5`, otherwise a
/// sampled set of shuffles.
fn permutations_to_test<R: Rng>(n: usize, rng: &mut R) -> Vec<Vec<usize>> {
    if n <= 5 {
        let mut all = Vec::new();
        for_each_permutation(n, |p| {
            if p.iter().enumerate().any(|(i, &v)| i != v) {
                all.push(p.to_vec());
            }
        });
        all
    } else {
        use rand::seq::SliceRandom;
        (0..SAMPLED_PERMUTATIONS)
            .map(|_| {
                let mut p: Vec<usize> = (0..n).collect();
                p.shuffle(rng);
                p
            })
            .collect()
    }
}

/// Heap's algorithm; visits every permutation of `0..n` exactly once,
/// starting with the identity.
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    visit(&idx);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                idx.swap(0, i);
            } else {
                idx.swap(c[i], i);
            }
            visit(&idx);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{n_var_evaluator, ConvergenceConfig, Scheme};

    #[test]
    fn heap_enumerates_factorial_many() {
        for n in 1..=5 {
            let mut count = 0;
            let mut seen = std::collections::HashSet::new();
            for_each_permutation(n, |p| {
                count += 1;
                seen.insert(p.to_vec());
            });
            let fact: usize = (1..=n).product();
            assert_eq!(count, fact);
            assert_eq!(seen.len(), fact);
        }
    }

    #[test]
    fn builtin_means_pass_all_two_var_axioms() {
        for mean in [
            TwoVarMean::Arithmetic,
            TwoVarMean::Geometric,
            TwoVarMean::Harmonic,
            TwoVarMean::Logarithmic,
            TwoVarMean::Power(2.0),
            TwoVarMean::Power(-0.5),
        ] {
            let report =
                check_two_var_axioms(&mean, 1000, DomainBox::default(), 17).unwrap();
            assert!(report.all_passed(), "{mean}: {:?}", report.checks);
        }
    }

    #[test]
    fn first_projection_fails_symmetry_and_internality() {
        let report =
            check_two_var_fn(|x, _| Ok(x), 500, DomainBox::default(), 3).unwrap();
        let symmetry = report.check("symmetry").unwrap();
        let internality = report.check("internality").unwrap();
        assert!(!symmetry.passed);
        assert!(!internality.passed);
        // The stored counterexample must re-evaluate to a violation.
        let cex = symmetry.counterexample.as_ref().unwrap();
        let (x, y) = (cex.inputs[0], cex.inputs[1]);
        assert!((x - y).abs() > 0.0);
        assert_ne!(x, y);
        let ic = internality.counterexample.as_ref().unwrap();
        let (lo, hi) = (ic.inputs[0], ic.inputs[1]);
        assert!(!(ic.value > lo && ic.value < hi));
        assert_eq!(ic.value, lo); // f(x, y) = x sits on the boundary
        let _ = hi;
    }

    #[test]
    fn max_fails_strict_internality() {
        let report =
            check_two_var_fn(|x, y| Ok(x.max(y)), 500, DomainBox::default(), 5).unwrap();
        let internality = report.check("internality").unwrap();
        assert!(!internality.passed);
        let cex = internality.counterexample.as_ref().unwrap();
        assert_eq!(cex.value, cex.inputs[0].max(cex.inputs[1]));
        // max is idempotent, symmetric, and monotone, so those pass.
        assert!(report.check("idempotence").unwrap().passed);
        assert!(report.check("symmetry").unwrap().passed);
        assert!(report.check("monotonicity").unwrap().passed);
    }

    #[test]
    fn reports_are_seed_deterministic() {
        let a = check_two_var_axioms(&TwoVarMean::Logarithmic, 64, DomainBox::default(), 9)
            .unwrap();
        let b = check_two_var_axioms(&TwoVarMean::Logarithmic, 64, DomainBox::default(), 9)
            .unwrap();
        assert_eq!(
            a.check("continuity").unwrap().lipschitz,
            b.check("continuity").unwrap().lipschitz
        );
    }

    #[test]
    fn degenerate_box_is_rejected() {
        assert!(matches!(DomainBox::new(2.0, 2.0), Err(Error::Config(_))));
        assert!(matches!(DomainBox::new(3.0, 1.0), Err(Error::Config(_))));
        assert!(matches!(DomainBox::new(0.0, 1.0), Err(Error::Config(_))));
    }

    #[test]
    fn extended_arithmetic_idempotent_at_n3() {
        let eval = n_var_evaluator(
            TwoVarMean::Arithmetic,
            Scheme::Neighbor,
            ConvergenceConfig::scalar(),
        );
        let v = eval(&[5.0, 5.0, 5.0]).unwrap();
        assert!((v - 5.0).abs() <= 1e-12);
    }

    #[test]
    fn extended_geometric_permutation_invariant_at_n3() {
        let eval = n_var_evaluator(
            TwoVarMean::Geometric,
            Scheme::Neighbor,
            ConvergenceConfig::scalar(),
        );
        let base = eval(&[1.0, 2.0, 4.0]).unwrap();
        for_each_permutation(3, |p| {
            let xs: Vec<f64> = p.iter().map(|&i| [1.0, 2.0, 4.0][i]).collect();
            let v = eval(&xs).unwrap();
            assert!((v - base).abs() <= 1e-9 * base, "{xs:?} -> {v}");
        });
    }

    #[test]
    fn extended_arithmetic_is_coordinate_monotone() {
        let eval = n_var_evaluator(
            TwoVarMean::Arithmetic,
            Scheme::Neighbor,
            ConvergenceConfig::scalar(),
        );
        let lo = eval(&[1.0, 2.0, 3.0]).unwrap();
        let hi = eval(&[1.0, 2.0, 3.1]).unwrap();
        assert!(hi > lo, "{hi} vs {lo}");
    }

    #[test]
    fn n_var_checker_passes_extended_means() {
        for mean in [TwoVarMean::Arithmetic, TwoVarMean::Logarithmic] {
            let eval = n_var_evaluator(mean, Scheme::Neighbor, ConvergenceConfig::scalar());
            let report =
                check_n_var_axioms(eval, 3, 60, DomainBox::default(), 1e-9, 23).unwrap();
            assert!(report.all_passed(), "{mean}: {:?}", report.checks);
        }
    }

    #[test]
    fn n_var_checker_rejects_bad_arguments() {
        let eval = |xs: &[f64]| Ok(xs[0]);
        assert!(matches!(
            check_n_var_axioms(eval, 2, 10, DomainBox::default(), 1e-9, 0),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            check_n_var_axioms(eval, 3, 0, DomainBox::default(), 1e-9, 0),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            check_n_var_axioms(eval, 3, 10, DomainBox::default(), 0.0, 0),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn evaluator_errors_carry_the_offending_input() {
        let eval = |_: &[f64]| -> Result<f64, Error> {
            Err(Error::Domain("boom".into()))
        };
        match check_n_var_axioms(eval, 3, 4, DomainBox::default(), 1e-9, 1) {
            Err(Error::Evaluator { inputs, .. }) => assert_eq!(inputs.len(), 3),
            other => panic!("expected evaluator error, got {other:?}"),
        }
    }
}
