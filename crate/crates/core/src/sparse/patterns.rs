use super::SparseMatrix;
use crate::error::Result;

/// Boolean pattern of `A' + A` with a full diagonal, values 1.0.
///
/// The output pattern is exactly symmetric. The diagonal is always
/// included so the result can feed an elimination graph directly.
pub fn at_plus_a_pattern(matrix: &SparseMatrix) -> Result<SparseMatrix> {
    let n = matrix.require_square()?;
    let t = matrix.transpose();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let (a, _) = matrix.col(j);
        let (b, _) = t.col(j);
        cols.push(merge_union(a, b, j));
    }
    SparseMatrix::from_sorted_columns(n, cols)
}

/// Boolean pattern of `A' * A` with a full diagonal, values 1.0.
///
/// Columns j and k are adjacent iff some row of A has nonzeros in both.
/// The output is symmetric by construction.
pub fn ata_pattern(matrix: &SparseMatrix) -> Result<SparseMatrix> {
    let n = matrix.require_square()?;
    let t = matrix.transpose();
    let mut mark = vec![usize::MAX; n];
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut out = vec![j];
        mark[j] = j;
        let (rows, _) = matrix.col(j);
        for &i in rows {
            // Columns sharing row i are the entries of row i, i.e. column i
            // of the transpose.
            let (shared, _) = t.col(i);
            for &k in shared {
                if mark[k] != j {
                    mark[k] = j;
                    out.push(k);
                }
            }
        }
        out.sort_unstable();
        cols.push(out.into_iter().map(|r| (r, 1.0)).collect());
    }
    SparseMatrix::from_sorted_columns(n, cols)
}

/// Sorted union of two sorted row lists plus the forced diagonal entry.
fn merge_union(a: &[usize], b: &[usize], diag: usize) -> Vec<(usize, f64)> {
    let mut out = Vec::with_capacity(a.len() + b.len() + 1);
    let (mut ia, mut ib) = (0, 0);
    let mut diag_done = false;
    loop {
        let next = match (a.get(ia), b.get(ib)) {
            (Some(&x), Some(&y)) => {
                if x <= y {
                    ia += 1;
                    if x == y {
                        ib += 1;
                    }
                    x
                } else {
                    ib += 1;
                    y
                }
            }
            (Some(&x), None) => {
                ia += 1;
                x
            }
            (None, Some(&y)) => {
                ib += 1;
                y
            }
            (None, None) => break,
        };
        if !diag_done && next >= diag {
            if next > diag {
                out.push((diag, 1.0));
            }
            diag_done = true;
        }
        out.push((next, 1.0));
    }
    if !diag_done {
        out.push((diag, 1.0));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn at_plus_a_mirrors_single_entry() {
        let m = SparseMatrix::from_triplets(2, 2, &[(0, 1, 7.0)]).unwrap();
        let p = at_plus_a_pattern(&m).unwrap();
        assert_eq!(p.get(0, 1), 1.0);
        assert_eq!(p.get(1, 0), 1.0);
        assert_eq!(p.get(0, 0), 1.0);
        assert_eq!(p.get(1, 1), 1.0);
        assert_eq!(p.nnz(), 4);
    }

    #[test]
    fn at_plus_a_preserves_symmetric_pattern() {
        let m = SparseMatrix::from_triplets(
            3,
            3,
            &[
                (0, 0, 1.0),
                (1, 1, 1.0),
                (2, 2, 1.0),
                (0, 1, 2.0),
                (1, 0, 3.0),
            ],
        )
        .unwrap();
        let p = at_plus_a_pattern(&m).unwrap();
        assert_eq!(p.nnz(), m.nnz());
        assert_eq!(
            p.to_triplets()
                .iter()
                .map(|&(r, c, _)| (r, c))
                .collect::<Vec<_>>(),
            m.to_triplets()
                .iter()
                .map(|&(r, c, _)| (r, c))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn ata_diagonal_matrix_stays_diagonal() {
        let m =
            SparseMatrix::from_triplets(3, 3, &[(0, 0, 2.0), (1, 1, 3.0), (2, 2, 4.0)]).unwrap();
        let p = ata_pattern(&m).unwrap();
        assert_eq!(p.nnz(), 3);
        for j in 0..3 {
            assert_eq!(p.get(j, j), 1.0);
        }
    }

    #[test]
    fn ata_single_full_row_couples_everything() {
        let m =
            SparseMatrix::from_triplets(3, 3, &[(1, 0, 1.0), (1, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let p = ata_pattern(&m).unwrap();
        assert_eq!(p.nnz(), 9);
    }

    #[test]
    fn patterns_are_symmetric() {
        let m = SparseMatrix::from_triplets(
            4,
            4,
            &[(0, 3, 1.0), (2, 1, 1.0), (3, 1, 1.0), (1, 2, 5.0)],
        )
        .unwrap();
        assert!(at_plus_a_pattern(&m).unwrap().is_structurally_symmetric());
        assert!(ata_pattern(&m).unwrap().is_structurally_symmetric());
    }

    #[test]
    fn rejects_rectangular() {
        let m = SparseMatrix::from_triplets(2, 3, &[(0, 0, 1.0)]).unwrap();
        assert!(at_plus_a_pattern(&m).is_err());
        assert!(ata_pattern(&m).is_err());
    }
}
