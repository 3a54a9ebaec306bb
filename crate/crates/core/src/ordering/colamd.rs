use crate::error::Result;
use crate::sparse::{Permutation, SparseMatrix};

/// Approximate minimum degree column ordering.
///
/// Greedy minimum degree on the structure of A'*A, maintained implicitly:
/// rows are kept as hyperedges over the live columns, eliminating a column
/// merges every row it touches into one super-row, and a column's degree
/// is the upper bound `sum over its rows of (row length - 1)` rather than
/// the exact union size. A'*A is never formed. Deterministic: ties go to
/// the smallest column index.
pub fn approx_min_degree_columns(matrix: &SparseMatrix) -> Result<Permutation> {
    let n = matrix.require_square()?;
    let transpose = matrix.transpose();

    // Row hyperedges. Live rows only ever contain live columns: a column
    // dies as the pivot, which kills every row containing it.
    let mut row_alive: Vec<bool> = Vec::with_capacity(n);
    let mut row_cols: Vec<Vec<usize>> = Vec::with_capacity(n);
    for i in 0..n {
        let (cols, _) = transpose.col(i);
        row_alive.push(!cols.is_empty());
        row_cols.push(cols.to_vec());
    }

    let mut col_rows: Vec<Vec<usize>> = (0..n).map(|j| matrix.col(j).0.to_vec()).collect();
    let mut bound: Vec<usize> = (0..n)
        .map(|j| col_rows[j].iter().map(|&i| row_cols[i].len() - 1).sum())
        .collect();

    let mut col_alive = vec![true; n];
    let mut mark = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);

    for step in 0..n {
        // The raw superset sum, not clamped: even past remaining-1 it
        // still separates dense-looking columns from sparse ones, which
        // the tie-break would otherwise destroy.
        let mut best: Option<(usize, usize)> = None;
        for j in 0..n {
            if !col_alive[j] {
                continue;
            }
            match best {
                Some((_, d)) if d <= bound[j] => {}
                _ => best = Some((j, bound[j])),
            }
        }
        let pivot = best.expect("live column must exist").0;
        col_alive[pivot] = false;
        order.push(pivot);

        // Merge the pivot's rows into one super-row over the union of
        // their columns, excluding the pivot itself.
        let mut union_cols: Vec<usize> = Vec::new();
        mark[pivot] = step;
        for &i in &col_rows[pivot] {
            if !row_alive[i] {
                continue;
            }
            for &k in &row_cols[i] {
                if mark[k] != step {
                    mark[k] = step;
                    union_cols.push(k);
                }
            }
            row_alive[i] = false;
            row_cols[i] = Vec::new();
        }
        col_rows[pivot] = Vec::new();

        if union_cols.is_empty() {
            continue;
        }
        union_cols.sort_unstable();
        let super_row = row_cols.len();
        row_alive.push(true);
        row_cols.push(union_cols.clone());
        for &k in &union_cols {
            col_rows[k].retain(|&i| row_alive[i]);
            col_rows[k].push(super_row);
            bound[k] = col_rows[k].iter().map(|&i| row_cols[i].len() - 1).sum();
        }
    }

    Permutation::new(order)
}
