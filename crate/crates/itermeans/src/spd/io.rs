//! JSON matrix-file format:
//! `{ "dimension": d, "matrices": [[d*d row-major reals], ...] }`.
//!
//! Validation failures name the offending matrix index and the violated
//! invariant.

use serde::{Deserialize, Serialize};

use super::SpdMatrix;
use crate::error::Error;

#[derive(Debug, Serialize, Deserialize)]
struct MatrixFile {
    dimension: usize,
    matrices: Vec<Vec<f64>>,
}

/// Parses and validates a matrix file.
pub fn parse_matrices(json: &str) -> Result<Vec<SpdMatrix>, Error> {
    let file: MatrixFile =
        serde_json::from_str(json).map_err(|e| Error::Parse(format!("matrix file: {e}")))?;
    if file.matrices.is_empty() {
        return Err(Error::Parse("matrix file: `matrices` is empty".into()));
    }
    file.matrices
        .iter()
        .enumerate()
        .map(|(index, entries)| {
            if entries.len() != file.dimension * file.dimension {
                return Err(Error::Parse(format!(
                    "matrix {index}: expected {} entries for dimension {}, found {}",
                    file.dimension * file.dimension,
                    file.dimension,
                    entries.len()
                )));
            }
            SpdMatrix::new(file.dimension, entries.clone())
                .map_err(|e| Error::Parse(format!("matrix {index}: {e}")))
        })
        .collect()
}

/// Serializes matrices back into the file format. All matrices must share
/// one dimension.
pub fn matrices_to_json(matrices: &[SpdMatrix]) -> Result<String, Error> {
    let dim = matrices
        .first()
        .map(|m| m.dim())
        .ok_or_else(|| Error::Config("matrix file needs at least one matrix".into()))?;
    for m in matrices {
        if m.dim() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: m.dim(),
            });
        }
    }
    let file = MatrixFile {
        dimension: dim,
        matrices: matrices.iter().map(|m| m.entries().to_vec()).collect(),
    };
    serde_json::to_string_pretty(&file).map_err(|e| Error::Parse(e.to_string()))
}
