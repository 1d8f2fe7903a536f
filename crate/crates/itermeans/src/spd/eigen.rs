//! Cyclic Jacobi eigendecomposition for small dense symmetric matrices.
//!
//! Plane rotations annihilate one off-diagonal entry at a time; sweeping all
//! pairs repeatedly drives the off-diagonal mass to zero quadratically. At
//! the desk scales handled here (dimension <= 64) this is simple and
//! accurate to a relative residual near machine precision.

use crate::error::Error;

/// Off-diagonal mass threshold, relative to the Frobenius norm.
const EIG_REL_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 64;

/// Eigenvalues sorted ascending plus the matching eigenvectors as columns
/// of a row-major `dim x dim` matrix, so `A = V diag(vals) V^T`.
pub(crate) fn sym_eigen(dim: usize, matrix: &[f64]) -> Result<(Vec<f64>, Vec<f64>), Error> {
    debug_assert_eq!(matrix.len(), dim * dim);
    if dim == 1 {
        return Ok((vec![matrix[0]], vec![1.0]));
    }
    let mut a = matrix.to_vec();
    let mut v = identity(dim);
    let frob = frobenius(&a).max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(dim, &a) <= EIG_REL_TOL * frob {
            return Ok(sorted_pairs(dim, &a, v));
        }
        for p in 0..dim - 1 {
            for q in (p + 1)..dim {
                let apq = a[p * dim + q];
                if apq == 0.0 {
                    continue;
                }
                let tau = (a[q * dim + q] - a[p * dim + p]) / (2.0 * apq);
                let t = if tau.abs() > 1e150 {
                    // Avoid overflow in tau^2; the rotation is tiny anyway.
                    0.5 / tau
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // A <- J^T A J with J the (p, q) rotation.
                for k in 0..dim {
                    let akp = a[p * dim + k];
                    let akq = a[q * dim + k];
                    a[p * dim + k] = c * akp - s * akq;
                    a[q * dim + k] = s * akp + c * akq;
                }
                for k in 0..dim {
                    let akp = a[k * dim + p];
                    let akq = a[k * dim + q];
                    a[k * dim + p] = c * akp - s * akq;
                    a[k * dim + q] = s * akp + c * akq;
                }
                a[p * dim + q] = 0.0;
                a[q * dim + p] = 0.0;

                // Accumulate V <- V J.
                for k in 0..dim {
                    let vkp = v[k * dim + p];
                    let vkq = v[k * dim + q];
                    v[k * dim + p] = c * vkp - s * vkq;
                    v[k * dim + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    // Quadratic convergence makes this unreachable for symmetric input.
    Err(Error::Convergence {
        depth: 0,
        detail: format!("Jacobi eigendecomposition stalled at dimension {dim}"),
    })
}

fn identity(dim: usize) -> Vec<f64> {
    let mut m = vec![0.0; dim * dim];
    for i in 0..dim {
        m[i * dim + i] = 1.0;
    }
    m
}

fn frobenius(m: &[f64]) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn off_diagonal_norm(dim: usize, m: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                s += m[i * dim + j] * m[i * dim + j];
            }
        }
    }
    s.sqrt()
}

fn sorted_pairs(dim: usize, a: &[f64], v: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| a[i * dim + i].total_cmp(&a[j * dim + j]));
    let vals: Vec<f64> = order.iter().map(|&i| a[i * dim + i]).collect();
    let mut vecs = vec![0.0; dim * dim];
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..dim {
            vecs[row * dim + new_col] = v[row * dim + old_col];
        }
    }
    (vals, vecs)
}
