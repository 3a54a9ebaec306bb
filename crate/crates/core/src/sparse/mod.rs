//! Compressed-sparse-column matrices, Matrix Market ingestion, and the
//! feature extraction that feeds the ordering decision.

mod features;
mod market;
mod patterns;

pub use features::{density, extract_features, MatrixFeatures};
pub use market::{parse_matrix_market, read_matrix_market_file, write_matrix_market};
pub use patterns::{at_plus_a_pattern, ata_pattern};

use crate::error::{Error, Result};

/// Square-or-rectangular sparse matrix in compressed-sparse-column form.
///
/// Invariants enforced at construction:
/// - `col_ptr` is non-decreasing with `col_ptr[0] == 0` and
///   `col_ptr[n_cols] == nnz`;
/// - row indices are strictly increasing within each column and lie in
///   `[0, n_rows)`, so there are no duplicate entries.
///
/// Explicitly stored zeros are legal and counted in `nnz`. Instances are
/// immutable after construction and safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n_rows: usize,
    n_cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from raw CSC arrays, validating every invariant.
    pub fn from_parts(
        n_rows: usize,
        n_cols: usize,
        col_ptr: Vec<usize>,
        row_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if col_ptr.len() != n_cols + 1 {
            return Err(Error::InvalidInput(format!(
                "col_ptr length {} does not match n_cols+1 = {}",
                col_ptr.len(),
                n_cols + 1
            )));
        }
        if col_ptr[0] != 0 {
            return Err(Error::InvalidInput("col_ptr[0] must be 0".into()));
        }
        if row_idx.len() != values.len() || row_idx.len() != col_ptr[n_cols] {
            return Err(Error::InvalidInput(format!(
                "nnz mismatch: col_ptr says {}, row_idx has {}, values has {}",
                col_ptr[n_cols],
                row_idx.len(),
                values.len()
            )));
        }
        for j in 0..n_cols {
            if col_ptr[j] > col_ptr[j + 1] {
                return Err(Error::InvalidInput(format!(
                    "col_ptr decreases at column {j}"
                )));
            }
            let col = &row_idx[col_ptr[j]..col_ptr[j + 1]];
            for (k, &r) in col.iter().enumerate() {
                if r >= n_rows {
                    return Err(Error::InvalidInput(format!(
                        "row index {r} out of range in column {j}"
                    )));
                }
                if k > 0 && col[k - 1] >= r {
                    return Err(Error::InvalidInput(format!(
                        "row indices not strictly increasing in column {j}"
                    )));
                }
            }
        }
        Ok(SparseMatrix {
            n_rows,
            n_cols,
            col_ptr,
            row_idx,
            values,
        })
    }

    /// Builds a matrix from (row, col, value) triplets. Duplicate
    /// coordinates are summed.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        for &(r, c, _) in triplets {
            if r >= n_rows || c >= n_cols {
                return Err(Error::InvalidInput(format!(
                    "triplet ({r},{c}) out of range for {n_rows}x{n_cols}"
                )));
            }
        }
        let mut sorted: Vec<(usize, usize, f64)> = triplets.to_vec();
        sorted.sort_by_key(|&(r, c, _)| (c, r));

        // Duplicates are adjacent after sorting; merge them by summing.
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(sorted.len());
        for (r, c, v) in sorted {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }

        let mut col_ptr = vec![0usize; n_cols + 1];
        let mut row_idx = Vec::with_capacity(merged.len());
        let mut values = Vec::with_capacity(merged.len());
        for &(r, c, v) in &merged {
            row_idx.push(r);
            values.push(v);
            col_ptr[c + 1] += 1;
        }
        for j in 0..n_cols {
            col_ptr[j + 1] += col_ptr[j];
        }
        SparseMatrix::from_parts(n_rows, n_cols, col_ptr, row_idx, values)
    }

    /// Builds a square matrix from per-column `(row, value)` lists whose
    /// rows are already strictly increasing.
    pub(crate) fn from_sorted_columns(n_rows: usize, cols: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let n_cols = cols.len();
        let nnz: usize = cols.iter().map(Vec::len).sum();
        let mut col_ptr = Vec::with_capacity(n_cols + 1);
        let mut row_idx = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        col_ptr.push(0);
        for col in cols {
            for (r, v) in col {
                row_idx.push(r);
                values.push(v);
            }
            col_ptr.push(row_idx.len());
        }
        SparseMatrix::from_parts(n_rows, n_cols, col_ptr, row_idx, values)
    }

    /// n x n identity.
    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            n_rows: n,
            n_cols: n,
            col_ptr: (0..=n).collect(),
            row_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                n_rows: self.n_rows,
                n_cols: self.n_cols,
            });
        }
        Ok(self.n_rows)
    }

    /// Row indices and values of column `j`.
    pub fn col(&self, j: usize) -> (&[usize], &[f64]) {
        let range = self.col_ptr[j]..self.col_ptr[j + 1];
        (&self.row_idx[range.clone()], &self.values[range])
    }

    pub fn col_ptr(&self) -> &[usize] {
        &self.col_ptr
    }

    pub fn row_indices(&self) -> &[usize] {
        &self.row_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Entry at (i, j), zero when not stored.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (rows, vals) = self.col(j);
        match rows.binary_search(&i) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    /// Iterates stored entries as (row, col, value) in column-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n_cols).flat_map(move |j| {
            let (rows, vals) = self.col(j);
            rows.iter().zip(vals).map(move |(&r, &v)| (r, j, v))
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut counts = vec![0usize; self.n_rows + 1];
        for &r in &self.row_idx {
            counts[r + 1] += 1;
        }
        for i in 0..self.n_rows {
            counts[i + 1] += counts[i];
        }
        let mut col_ptr = counts.clone();
        let mut row_idx = vec![0usize; self.nnz()];
        let mut values = vec![0.0f64; self.nnz()];
        for j in 0..self.n_cols {
            let (rows, vals) = self.col(j);
            for (&r, &v) in rows.iter().zip(vals) {
                let dst = counts[r];
                row_idx[dst] = j;
                values[dst] = v;
                counts[r] += 1;
            }
        }
        // Columns of the transpose come out sorted because we sweep j upward.
        col_ptr.truncate(self.n_rows + 1);
        SparseMatrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            col_ptr,
            row_idx,
            values,
        }
    }

    /// True when the nonzero pattern equals the pattern of the transpose.
    pub fn is_structurally_symmetric(&self) -> bool {
        self.check_symmetric_pattern().is_ok()
    }

    /// Errors with the first offending coordinate when the pattern is not
    /// symmetric.
    pub fn check_symmetric_pattern(&self) -> Result<()> {
        self.require_square()?;
        let t = self.transpose();
        for j in 0..self.n_cols {
            let (a, _) = self.col(j);
            let (b, _) = t.col(j);
            if a != b {
                // Find one missing mirror for the error message.
                for &r in a {
                    if !b.contains(&r) {
                        return Err(Error::AsymmetricPattern { row: r, col: j });
                    }
                }
                for &r in b {
                    if !a.contains(&r) {
                        return Err(Error::AsymmetricPattern { row: j, col: r });
                    }
                }
            }
        }
        Ok(())
    }

    /// A(:, perm), i.e. new column k is old column `perm.map()[k]`.
    pub fn permute_columns(&self, perm: &Permutation) -> Result<SparseMatrix> {
        if perm.len() != self.n_cols {
            return Err(Error::DimensionMismatch {
                expected: self.n_cols,
                actual: perm.len(),
            });
        }
        let mut cols = Vec::with_capacity(self.n_cols);
        for &j in perm.map() {
            let (rows, vals) = self.col(j);
            cols.push(rows.iter().copied().zip(vals.iter().copied()).collect());
        }
        SparseMatrix::from_sorted_columns(self.n_rows, cols)
    }

    pub fn to_triplets(&self) -> Vec<(usize, usize, f64)> {
        self.iter().collect()
    }
}

/// A bijection on `{0..n-1}`: `map()[k]` is the original index placed at
/// position `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n {
                return Err(Error::InvalidPermutation(format!(
                    "index {v} out of range for length {n}"
                )));
            }
            if seen[v] {
                return Err(Error::InvalidPermutation(format!("index {v} repeated")));
            }
            seen[v] = true;
        }
        Ok(Permutation { map })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(k, &v)| k == v)
    }

    /// `inverse().map()[original] = position`.
    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0usize; self.map.len()];
        for (k, &v) in self.map.iter().enumerate() {
            inv[v] = k;
        }
        Permutation { map: inv }
    }
}
