//! Seedable random SPD matrices for experiments and tests.

use rand::Rng;

use super::{recompose, SpdMatrix};
use crate::error::Error;

/// Random orthogonal matrix as a product of plane rotations over all index
/// pairs (row-major).
pub fn random_orthogonal<R: Rng>(dim: usize, rng: &mut R) -> Vec<f64> {
    let mut q = vec![0.0; dim * dim];
    for i in 0..dim {
        q[i * dim + i] = 1.0;
    }
    for p in 0..dim {
        for r in (p + 1)..dim {
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let (s, c) = theta.sin_cos();
            for k in 0..dim {
                let qkp = q[k * dim + p];
                let qkr = q[k * dim + r];
                q[k * dim + p] = c * qkp - s * qkr;
                q[k * dim + r] = s * qkp + c * qkr;
            }
        }
    }
    q
}

/// Random SPD matrix with eigenvalues drawn uniformly from `eig_range`.
pub fn random_spd<R: Rng>(
    dim: usize,
    eig_range: (f64, f64),
    rng: &mut R,
) -> Result<SpdMatrix, Error> {
    let (lo, hi) = eig_range;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::Config(format!(
            "eigenvalue range must satisfy 0 < lo < hi, got ({lo}, {hi})"
        )));
    }
    let vals: Vec<f64> = (0..dim).map(|_| rng.gen_range(lo..hi)).collect();
    let q = random_orthogonal(dim, rng);
    SpdMatrix::new(dim, recompose(dim, &vals, &q))
}

/// Random SPD matrix whose operator norm equals `norm`: the top eigenvalue
/// is pinned there and the rest fall in `(0.2 * norm, norm)`.
pub fn random_spd_with_norm<R: Rng>(
    dim: usize,
    norm: f64,
    rng: &mut R,
) -> Result<SpdMatrix, Error> {
    if !norm.is_finite() || norm <= 0.0 {
        return Err(Error::Config(format!(
            "target norm must be strictly positive, got {norm}"
        )));
    }
    let mut vals: Vec<f64> = (0..dim.saturating_sub(1))
        .map(|_| rng.gen_range(0.2 * norm..norm))
        .collect();
    vals.push(norm);
    let q = random_orthogonal(dim, rng);
    SpdMatrix::new(dim, recompose(dim, &vals, &q))
}
