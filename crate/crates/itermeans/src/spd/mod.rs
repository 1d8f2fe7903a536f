//! Symmetric positive-definite matrices under operator means.
//!
//! The element type is a dense validated [`SpdMatrix`]; the operator means
//! are the matrix arithmetic mean `(A + B)/2`, the harmonic mean
//! `2 (A^-1 + B^-1)^-1` (twice the parallel sum), and the geometric mean
//! `A^(1/2) (A^(-1/2) B A^(-1/2))^(1/2) A^(1/2)`. Together with the
//! operator-norm distance they form an [`ElementDomain`], so the generic
//! extension engine runs on matrix tuples unchanged.

mod eigen;
pub mod io;
pub mod random;
mod sandwich;

pub use sandwich::{
    default_schedule, sandwich_verify, SandwichConfig, SandwichReport, SandwichStep, ScheduleFn,
};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::engine::ElementDomain;
use crate::error::Error;
use eigen::sym_eigen;

/// Desk-scale cap on matrix dimension.
pub const MAX_DIMENSION: usize = 64;
/// Entry-wise symmetry tolerance at construction.
const SYMMETRY_TOL: f64 = 1e-12;
/// Positive-definiteness: smallest eigenvalue must exceed this fraction of
/// the largest.
const PD_REL_TOL: f64 = 1e-12;

/// A validated symmetric positive-definite matrix.
///
/// Construction checks symmetry entry-wise, symmetrizes, and verifies the
/// spectrum; the operator norm (largest eigenvalue) and smallest eigenvalue
/// are cached from that decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdMatrix {
    dim: usize,
    data: Vec<f64>,
    norm: f64,
    min_eig: f64,
}

impl SpdMatrix {
    /// Validates and builds a matrix from row-major entries.
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self, Error> {
        if dim == 0 || dim > MAX_DIMENSION {
            return Err(Error::Config(format!(
                "matrix dimension must be in 1..={MAX_DIMENSION}, got {dim}"
            )));
        }
        if data.len() != dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim,
                found: data.len(),
            });
        }
        for (k, &v) in data.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NotSpd(format!(
                    "entry ({}, {}) is not finite: {v}",
                    k / dim,
                    k % dim
                )));
            }
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                let a = data[i * dim + j];
                let b = data[j * dim + i];
                if (a - b).abs() > SYMMETRY_TOL * (1.0 + a.abs()) {
                    return Err(Error::NotSpd(format!(
                        "asymmetric at ({i}, {j}): {a} vs {b}"
                    )));
                }
            }
        }
        Self::from_symmetrized(dim, data)
    }

    /// Symmetrizes and validates the spectrum; entry points that already
    /// produced a near-symmetric product go through here.
    fn from_symmetrized(dim: usize, mut data: Vec<f64>) -> Result<Self, Error> {
        symmetrize(dim, &mut data);
        let (vals, _) = sym_eigen(dim, &data)?;
        let min_eig = vals[0];
        let max_eig = *vals.last().expect("non-empty spectrum");
        if !(max_eig > 0.0) || min_eig <= PD_REL_TOL * max_eig {
            return Err(Error::NotSpd(format!(
                "smallest eigenvalue {min_eig:e} is below the positivity \
                 threshold {:e}",
                PD_REL_TOL * max_eig.max(0.0)
            )));
        }
        Ok(SpdMatrix {
            dim,
            data,
            norm: max_eig,
            min_eig,
        })
    }

    pub fn identity(dim: usize) -> Result<Self, Error> {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        Self::new(dim, data)
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self, Error> {
        let dim = diag.len();
        let mut data = vec![0.0; dim * dim];
        for (i, &v) in diag.iter().enumerate() {
            data[i * dim + i] = v;
        }
        Self::new(dim, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Operator norm: the largest eigenvalue.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eig
    }
}

impl Serialize for SpdMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("SpdMatrix", 2)?;
        s.serialize_field("dimension", &self.dim)?;
        s.serialize_field("data", &self.data)?;
        s.end()
    }
}

fn symmetrize(dim: usize, data: &mut [f64]) {
    for i in 0..dim {
        for j in (i + 1)..dim {
            let avg = 0.5 * (data[i * dim + j] + data[j * dim + i]);
            data[i * dim + j] = avg;
            data[j * dim + i] = avg;
        }
    }
}

fn mat_mul(dim: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i * dim + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..dim {
                out[i * dim + j] += aik * b[k * dim + j];
            }
        }
    }
    out
}

fn check_same_dim(a: &SpdMatrix, b: &SpdMatrix) -> Result<(), Error> {
    if a.dim != b.dim {
        return Err(Error::Dimension {
            expected: a.dim,
            found: b.dim,
        });
    }
    Ok(())
}

/// `A + B`.
pub fn spd_add(a: &SpdMatrix, b: &SpdMatrix) -> Result<SpdMatrix, Error> {
    check_same_dim(a, b)?;
    let data: Vec<f64> = a.data.iter().zip(&b.data).map(|(x, y)| x + y).collect();
    SpdMatrix::from_symmetrized(a.dim, data)
}

/// `c * A` for `c > 0`.
pub fn spd_scale(a: &SpdMatrix, c: f64) -> Result<SpdMatrix, Error> {
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::Config(format!(
            "scale factor must be strictly positive to preserve positivity, got {c}"
        )));
    }
    let data: Vec<f64> = a.data.iter().map(|x| c * x).collect();
    SpdMatrix::from_symmetrized(a.dim, data)
}

/// Spectral function application: `V f(diag) V^T`.
fn spectral_map(a: &SpdMatrix, f: impl Fn(f64) -> f64) -> Result<SpdMatrix, Error> {
    let (vals, vecs) = sym_eigen(a.dim, &a.data)?;
    let mapped: Vec<f64> = vals.iter().map(|&v| f(v)).collect();
    SpdMatrix::from_symmetrized(a.dim, recompose(a.dim, &mapped, &vecs))
}

fn recompose(dim: usize, vals: &[f64], vecs: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut s = 0.0;
            for k in 0..dim {
                s += vecs[i * dim + k] * vals[k] * vecs[j * dim + k];
            }
            out[i * dim + j] = s;
        }
    }
    out
}

/// `A^-1` via the spectral decomposition.
pub fn spd_inverse(a: &SpdMatrix) -> Result<SpdMatrix, Error> {
    spectral_map(a, f64::recip)
}

/// The unique SPD square root.
pub fn spd_sqrt(a: &SpdMatrix) -> Result<SpdMatrix, Error> {
    spectral_map(a, f64::sqrt)
}

/// Operator norm of an SPD matrix.
pub fn spd_norm(a: &SpdMatrix) -> f64 {
    a.norm()
}

/// Operator norm of the (symmetric, possibly indefinite) difference
/// `A - B`: the largest eigenvalue magnitude.
pub(crate) fn sym_diff_norm(a: &SpdMatrix, b: &SpdMatrix) -> f64 {
    debug_assert_eq!(a.dim, b.dim);
    let dim = a.dim;
    let diff: Vec<f64> = a.data.iter().zip(&b.data).map(|(x, y)| x - y).collect();
    let (vals, _) = sym_eigen(dim, &diff).expect("symmetric difference decomposes");
    vals.iter().fold(0.0_f64, |m, &v| m.max(v.abs()))
}

/// Two-variable means on SPD matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorMean {
    Arithmetic,
    Geometric,
    Harmonic,
}

impl OperatorMean {
    pub fn name(&self) -> &'static str {
        match self {
            OperatorMean::Arithmetic => "arithmetic",
            OperatorMean::Geometric => "geometric",
            OperatorMean::Harmonic => "harmonic",
        }
    }
}

impl std::fmt::Display for OperatorMean {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for OperatorMean {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "arithmetic" => Ok(OperatorMean::Arithmetic),
            "geometric" => Ok(OperatorMean::Geometric),
            "harmonic" => Ok(OperatorMean::Harmonic),
            other => Err(Error::Parse(format!(
                "unknown operator mean `{other}`; expected arithmetic | geometric | harmonic"
            ))),
        }
    }
}

impl Serialize for OperatorMean {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Evaluates an operator mean on an SPD pair. The result is re-validated,
/// so every output satisfies the SPD invariants.
pub fn eval_operator_mean(
    mean: OperatorMean,
    a: &SpdMatrix,
    b: &SpdMatrix,
) -> Result<SpdMatrix, Error> {
    check_same_dim(a, b)?;
    match mean {
        OperatorMean::Arithmetic => {
            let data: Vec<f64> = a
                .data
                .iter()
                .zip(&b.data)
                .map(|(x, y)| 0.5 * (x + y))
                .collect();
            SpdMatrix::from_symmetrized(a.dim, data)
        }
        OperatorMean::Harmonic => {
            let sum = spd_add(&spd_inverse(a)?, &spd_inverse(b)?)?;
            spd_scale(&spd_inverse(&sum)?, 2.0)
        }
        OperatorMean::Geometric => geometric_mean(a, b),
    }
}

/// `A # B = A^(1/2) (A^(-1/2) B A^(-1/2))^(1/2) A^(1/2)`.
fn geometric_mean(a: &SpdMatrix, b: &SpdMatrix) -> Result<SpdMatrix, Error> {
    let dim = a.dim;
    let (vals, vecs) = sym_eigen(dim, &a.data)?;
    let sqrt_a = recompose(dim, &vals.iter().map(|v| v.sqrt()).collect::<Vec<_>>(), &vecs);
    let inv_sqrt_a = recompose(
        dim,
        &vals.iter().map(|v| v.sqrt().recip()).collect::<Vec<_>>(),
        &vecs,
    );
    let mut conjugated = mat_mul(dim, &mat_mul(dim, &inv_sqrt_a, &b.data), &inv_sqrt_a);
    symmetrize(dim, &mut conjugated);
    let inner = SpdMatrix::from_symmetrized(dim, conjugated)?;
    let sqrt_inner = spd_sqrt(&inner)?;
    let product = mat_mul(dim, &mat_mul(dim, &sqrt_a, &sqrt_inner.data), &sqrt_a);
    SpdMatrix::from_symmetrized(dim, product)
}

/// `A <= B` in the Loewner order, up to `tol` relative to `||B||`: true iff
/// the smallest eigenvalue of `B - A` is at least `-tol * ||B||`.
pub fn loewner_leq(a: &SpdMatrix, b: &SpdMatrix, tol: f64) -> Result<bool, Error> {
    check_same_dim(a, b)?;
    let dim = a.dim;
    let diff: Vec<f64> = b.data.iter().zip(&a.data).map(|(x, y)| x - y).collect();
    let (vals, _) = sym_eigen(dim, &diff)?;
    Ok(vals[0] >= -tol * b.norm())
}

/// SPD matrices under a fixed operator mean, pluggable into the extension
/// engine.
#[derive(Debug, Clone)]
pub struct SpdDomain {
    mean: OperatorMean,
}

impl SpdDomain {
    pub fn new(mean: OperatorMean) -> Self {
        SpdDomain { mean }
    }

    pub fn operator_mean(&self) -> OperatorMean {
        self.mean
    }
}

/// Domain with mean evaluation, operator-norm distance, and max-pairwise
/// spread.
pub fn spd_domain(mean: OperatorMean) -> SpdDomain {
    SpdDomain::new(mean)
}

impl ElementDomain for SpdDomain {
    type Element = SpdMatrix;

    fn mean(&self, a: &SpdMatrix, b: &SpdMatrix) -> Result<SpdMatrix, Error> {
        eval_operator_mean(self.mean, a, b)
    }

    fn distance(&self, a: &SpdMatrix, b: &SpdMatrix) -> f64 {
        sym_diff_norm(a, b)
    }

    fn magnitude(&self, e: &SpdMatrix) -> f64 {
        e.norm()
    }
}
