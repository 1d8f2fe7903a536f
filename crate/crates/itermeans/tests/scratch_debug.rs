use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use itermeans::closed_form::arithmetic_trace_endpoints;
use itermeans::cycle::random_mappings;
use itermeans::engine::{extend_mean, ConvergenceConfig, ScalarDomain, Scheme};
use itermeans::mean::TwoVarMean;
use itermeans::rate::compare_rates;

fn sample(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range((1e-3_f64).ln()..(1e3_f64).ln()).exp()
}

#[test]
fn probe_scheme_agreement_scale() {
    let mut rng = ChaCha8Rng::seed_from_u64(301);
    let cfg = ConvergenceConfig::scalar();
    let means = [
        TwoVarMean::Logarithmic,
        TwoVarMean::Power(-2.0),
        TwoVarMean::Power(-0.5),
        TwoVarMean::Power(0.5),
        TwoVarMean::Power(2.0),
        TwoVarMean::Power(3.0),
    ];
    for mean in means {
        let mut worst: f64 = 0.0;
        for n in 3..=6usize {
            for i in 0..6 {
                let xs: Vec<f64> = (0..n).map(|_| sample(&mut rng)).collect();
                let domain = ScalarDomain::new(mean);
                let nb = extend_mean(&domain, &xs, &Scheme::Neighbor, &cfg).unwrap();
                let vr = extend_mean(&domain, &xs, &Scheme::Variation, &cfg).unwrap();
                let mappings = random_mappings(n, 5, 1000 + i).unwrap();
                let mut lo = nb.value.min(vr.value);
                let mut hi = nb.value.max(vr.value);
                for m in &mappings {
                    let cy = extend_mean(&domain, &xs, &Scheme::Cycle(m.clone()), &cfg).unwrap();
                    lo = lo.min(cy.value);
                    hi = hi.max(cy.value);
                }
                worst = worst.max((hi - lo) / hi);
            }
        }
        println!("{mean}: worst scheme disagreement {worst:.3e}");
    }
}

#[test]
fn probe_rate_violations() {
    let mut rng = ChaCha8Rng::seed_from_u64(401);
    let cfg = ConvergenceConfig::scalar();
    let means = [
        TwoVarMean::Arithmetic,
        TwoVarMean::Geometric,
        TwoVarMean::Harmonic,
        TwoVarMean::Logarithmic,
        TwoVarMean::Power(2.0),
        TwoVarMean::Power(-2.0),
    ];
    for mean in means {
        let mut violations = 0usize;
        let mut instances = 0usize;
        let mut worst_excess: f64 = 0.0;
        for i in 0..25 {
            let n = 3 + (i % 6);
            let mut xs: Vec<f64> = (0..n).map(|_| sample(&mut rng)).collect();
            xs.sort_by(f64::total_cmp);
            let mappings = random_mappings(n, 10, 2000 + i as u64).unwrap();
            let report = compare_rates(&mean, &xs, &mappings, &cfg).unwrap();
            if !report.violations.is_empty() {
                instances += 1;
                violations += report.violations.len();
                for v in &report.violations {
                    worst_excess = worst_excess
                        .max(v.baseline_min - v.cycle_min)
                        .max(v.cycle_max - v.baseline_max);
                }
            }
        }
        println!(
            "{mean}: {violations} violating steps across {instances}/25 instances, worst excess {worst_excess:.3e}"
        );
    }
}

#[test]
fn probe_trace_formula_accuracy() {
    let mut rng = ChaCha8Rng::seed_from_u64(201);
    let domain = ScalarDomain::new(TwoVarMean::Arithmetic);
    for n in [3usize, 4, 5] {
        let mut worst: f64 = 0.0;
        for _ in 0..10 {
            let mut xs: Vec<f64> = (0..n).map(|_| sample(&mut rng)).collect();
            xs.sort_by(f64::total_cmp);
            let cfg = ConvergenceConfig {
                tolerance: 1e-300,
                max_iterations: 25,
                trace_capture: true,
            };
            let run = extend_mean(&domain, &xs, &Scheme::Variation, &cfg).unwrap();
            let trace = run.trace.as_ref().unwrap();
            assert_eq!(trace.len(), 26, "expected 25 steps");
            for (k, state) in trace.iter().enumerate() {
                let e = arithmetic_trace_endpoints(&xs, k as u32).unwrap();
                let min = state.elements.iter().copied().fold(f64::INFINITY, f64::min);
                let max = state
                    .elements
                    .iter()
                    .copied()
                    .fold(f64::NEG_INFINITY, f64::max);
                worst = worst.max((min - e.lower).abs() / e.lower.abs().max(1e-300));
                worst = worst.max((max - e.upper).abs() / e.upper.abs().max(1e-300));
            }
        }
        println!("n={n}: worst endpoint mismatch {worst:.3e}");
    }
}
