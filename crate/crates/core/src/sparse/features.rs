use super::SparseMatrix;
use crate::error::{Error, Result};

/// The sensor payload: everything the decision side needs to know about a
/// matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFeatures {
    /// Square dimension.
    pub n: usize,
    /// Stored entry count (explicit zeros included).
    pub nnz: usize,
    /// nnz / (n*n) * 100.
    pub density_percent: f64,
    /// Mean of |i - j| over stored entries, normalized by n; in [0, 1].
    /// Present only when requested.
    pub avg_diag_distance: Option<f64>,
}

/// Percentage of stored entries: nnz / (n*n) * 100.
///
/// n*n is formed in 128-bit integer arithmetic, so dimensions up to 2^26
/// are exact.
pub fn density(matrix: &SparseMatrix) -> Result<f64> {
    let n = matrix.require_square()?;
    if n == 0 {
        return Err(Error::InvalidInput("density of an empty matrix".into()));
    }
    let cells = (n as u128) * (n as u128);
    Ok(matrix.nnz() as f64 / cells as f64 * 100.0)
}

/// Populates [`MatrixFeatures`]; the diagonal-distance statistic is
/// computed only when `with_diag_distance` is set.
pub fn extract_features(matrix: &SparseMatrix, with_diag_distance: bool) -> Result<MatrixFeatures> {
    let n = matrix.require_square()?;
    let density_percent = density(matrix)?;
    let avg_diag_distance = if with_diag_distance {
        Some(avg_diag_distance(matrix, n))
    } else {
        None
    };
    Ok(MatrixFeatures {
        n,
        nnz: matrix.nnz(),
        density_percent,
        avg_diag_distance,
    })
}

fn avg_diag_distance(matrix: &SparseMatrix, n: usize) -> f64 {
    if matrix.nnz() == 0 {
        return 0.0;
    }
    let mut sum: u128 = 0;
    for (i, j, _) in matrix.iter() {
        sum += i.abs_diff(j) as u128;
    }
    sum as f64 / matrix.nnz() as f64 / n as f64
}
