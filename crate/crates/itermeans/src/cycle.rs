//! Hamiltonian-cycle update mappings.
//!
//! A mapping is a cycle visiting all `n` slots once plus a bijection from
//! the `n` cycle edges onto the `n` output slots. One iteration step writes
//! the two-variable mean of each edge's endpoints into the edge's assigned
//! slot, reading everything from the previous state.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleMapping {
    /// Vertices in cycle order; edge `e` joins `cycle[e]` and
    /// `cycle[(e + 1) % n]`.
    cycle: Vec<usize>,
    /// `assignment[e]` is the output slot fed by edge `e`.
    assignment: Vec<usize>,
}

impl CycleMapping {
    /// Builds a mapping from an explicit cycle order and edge assignment.
    /// Both must be permutations of `0..n` with `n >= 3`.
    pub fn new(cycle: Vec<usize>, assignment: Vec<usize>) -> Result<Self, Error> {
        let n = cycle.len();
        if n < 3 {
            return Err(Error::Config(format!(
                "a cycle mapping needs at least 3 vertices, got {n}"
            )));
        }
        if assignment.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: assignment.len(),
            });
        }
        check_permutation(&cycle, "cycle order")?;
        check_permutation(&assignment, "edge assignment")?;
        Ok(CycleMapping { cycle, assignment })
    }

    /// Number of vertices (= edges = output slots).
    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires n >= 3
    }

    pub fn cycle_order(&self) -> &[usize] {
        &self.cycle
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Iterates `((j, l), target)` over the edges and their output slots.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        let n = self.cycle.len();
        (0..n).map(move |e| {
            (
                (self.cycle[e], self.cycle[(e + 1) % n]),
                self.assignment[e],
            )
        })
    }

    /// Uniformly random cycle order and edge assignment.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Result<Self, Error> {
        if n < 3 {
            return Err(Error::Config(format!(
                "a cycle mapping needs at least 3 vertices, got {n}"
            )));
        }
        let mut cycle: Vec<usize> = (0..n).collect();
        let mut assignment: Vec<usize> = (0..n).collect();
        cycle.shuffle(rng);
        assignment.shuffle(rng);
        Ok(CycleMapping { cycle, assignment })
    }

    /// Deterministic random mapping from a seed.
    pub fn from_seed(n: usize, seed: u64) -> Result<Self, Error> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random(n, &mut rng)
    }

    /// Cycle order rotated to start at vertex 0 and oriented so the second
    /// vertex is the smaller neighbor; two mappings describe the same cycle
    /// graph iff their canonical orders agree.
    pub fn canonical_cycle(&self) -> Vec<usize> {
        let n = self.cycle.len();
        let start = self.cycle.iter().position(|&v| v == 0).expect("permutation");
        let fwd: Vec<usize> = (0..n).map(|i| self.cycle[(start + i) % n]).collect();
        if fwd[1] <= fwd[n - 1] {
            fwd
        } else {
            let mut rev = vec![0];
            rev.extend(fwd[1..].iter().rev());
            rev
        }
    }
}

fn check_permutation(xs: &[usize], what: &str) -> Result<(), Error> {
    let n = xs.len();
    let mut seen = vec![false; n];
    for &x in xs {
        if x >= n || seen[x] {
            return Err(Error::Config(format!(
                "{what} must be a permutation of 0..{n}, got {xs:?}"
            )));
        }
        seen[x] = true;
    }
    Ok(())
}

/// Deterministic batch of seeded random mappings, one stream per seed.
pub fn random_mappings(n: usize, count: usize, seed: u64) -> Result<Vec<CycleMapping>, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| CycleMapping::random(n, &mut rng)).collect()
}

/// The cycle mapping under which the cycle step reproduces the neighbor
/// step exactly.
///
/// The neighbor scheme's edge set `{0,1}, {i-1,i+1}, {n-2,n-1}` is itself a
/// Hamiltonian cycle: `0`, the odd slots ascending, then the even slots
/// descending. Edge `{0,1}` feeds slot 0, edge `{n-2,n-1}` feeds slot
/// `n-1`, and every skip edge `{i-1, i+1}` feeds the slot `i` between its
/// endpoints.
pub fn neighbor_as_cycle(n: usize) -> Result<CycleMapping, Error> {
    if n < 3 {
        return Err(Error::Config(format!(
            "the neighbor scheme needs at least 3 elements to form a cycle, got {n}"
        )));
    }
    let mut cycle = vec![0];
    cycle.extend((1..n).step_by(2));
    let mut evens: Vec<usize> = (2..n).step_by(2).collect();
    evens.reverse();
    cycle.extend(evens);

    let n_items = cycle.len();
    debug_assert_eq!(n_items, n);
    let mut assignment = Vec::with_capacity(n);
    for e in 0..n {
        let a = cycle[e].min(cycle[(e + 1) % n]);
        let b = cycle[e].max(cycle[(e + 1) % n]);
        let target = if (a, b) == (0, 1) {
            0
        } else if (a, b) == (n - 2, n - 1) {
            n - 1
        } else {
            debug_assert_eq!(b - a, 2);
            a + 1
        };
        assignment.push(target);
    }
    CycleMapping::new(cycle, assignment)
}
