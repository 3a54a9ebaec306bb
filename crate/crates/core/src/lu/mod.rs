//! Left-looking sparse LU with threshold partial pivoting, triangular
//! solves, and the statistics used by the benchmark reports.

mod symbolic;

pub use symbolic::symbolic_fill;

use std::time::Instant;

use crate::error::{Error, Result, SingularKind};
use crate::sparse::{Permutation, SparseMatrix};

/// Result of a factorization: P * A * Q' = L * U.
///
/// `row_perm` is P (pivoting) and `col_perm` is Q (the fill-reducing
/// ordering), both in `map[position] = original index` form. L carries an
/// explicit unit diagonal; the diagonal of U holds the pivots.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lower: SparseMatrix,
    upper: SparseMatrix,
    row_perm: Permutation,
    col_perm: Permutation,
}

impl LuFactors {
    pub fn n(&self) -> usize {
        self.lower.n_rows()
    }

    pub fn lower(&self) -> &SparseMatrix {
        &self.lower
    }

    pub fn upper(&self) -> &SparseMatrix {
        &self.upper
    }

    pub fn row_perm(&self) -> &Permutation {
        &self.row_perm
    }

    pub fn col_perm(&self) -> &Permutation {
        &self.col_perm
    }
}

/// Cost record for one factorization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorStats {
    /// nnz(L without its unit diagonal) + nnz(U) - nnz(A).
    pub fill_in: u64,
    /// One op per scattered input entry, per multiply-add in the sparse
    /// triangular solves, and per pivot division; always >= nnz(A).
    pub flops: u64,
    /// Wall time of the numeric factorization, seconds.
    pub factor_time: f64,
    /// max|U| / max|A|.
    pub max_pivot_growth: f64,
}

/// Left-looking LU of A(:, col_perm) with threshold partial pivoting.
///
/// Column by column: a depth-first traversal of the graph of L determines
/// the nonzero pattern, a sparse triangular solve fills the values, and
/// the pivot row is chosen among the not-yet-pivotal rows. With
/// `pivot_threshold = 1.0` the largest magnitude wins; smaller thresholds
/// prefer the diagonal of A whenever it is within the threshold of the
/// largest candidate. Ties go to the diagonal first, then the smallest
/// original row index.
///
/// Exact cancellations are kept as stored zeros, so fill counts depend
/// only on the pattern and the ordering.
pub fn lu_factorize(
    matrix: &SparseMatrix,
    col_perm: &Permutation,
    pivot_threshold: f64,
) -> Result<(LuFactors, FactorStats)> {
    let n = matrix.require_square()?;
    if col_perm.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: col_perm.len(),
        });
    }
    if !(pivot_threshold > 0.0 && pivot_threshold <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "pivot threshold must be in (0, 1], got {pivot_threshold}"
        )));
    }

    let started = Instant::now();

    const UNASSIGNED: usize = usize::MAX;
    // pinv[original row] = pivot position, once assigned.
    let mut pinv = vec![UNASSIGNED; n];
    let mut row_map = vec![0usize; n];
    // Column k of L, off-pivot entries as (original row, value).
    let mut l_cols: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n);
    // Column k of U as (position, value), pivot included.
    let mut u_cols: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n);

    let mut x = vec![0.0f64; n];
    let mut mark = vec![UNASSIGNED; n];
    let mut topo: Vec<usize> = Vec::with_capacity(n);
    let mut stack: Vec<(usize, usize)> = Vec::new();

    let mut flops: u64 = 0;

    #[allow(clippy::needless_range_loop)] // k is the pivot position, not an index into one array
    for k in 0..n {
        let j = col_perm.map()[k];
        let (a_rows, a_vals) = matrix.col(j);
        if a_rows.is_empty() {
            return Err(Error::Singular {
                column: j,
                kind: SingularKind::Structural,
            });
        }

        // Symbolic step: depth-first reach of the column's pattern through
        // the graph of L. `topo` collects rows in postorder.
        topo.clear();
        for &seed in a_rows {
            if mark[seed] == k {
                continue;
            }
            mark[seed] = k;
            stack.push((seed, 0));
            while let Some(&mut (r, ref mut child)) = stack.last_mut() {
                let deps: &[(usize, f64)] = if pinv[r] == UNASSIGNED {
                    &[]
                } else {
                    &l_cols[pinv[r]]
                };
                if *child < deps.len() {
                    let next = deps[*child].0;
                    *child += 1;
                    if mark[next] != k {
                        mark[next] = k;
                        stack.push((next, 0));
                    }
                } else {
                    topo.push(r);
                    stack.pop();
                }
            }
        }

        // Numeric step: scatter the column, then apply updates in reverse
        // postorder (a topological order of the dependencies).
        for &r in &topo {
            x[r] = 0.0;
        }
        for (&r, &v) in a_rows.iter().zip(a_vals) {
            x[r] = v;
        }
        flops += a_rows.len() as u64;
        for idx in (0..topo.len()).rev() {
            let r = topo[idx];
            let c = pinv[r];
            if c == UNASSIGNED {
                continue;
            }
            let xr = x[r];
            for &(s, lv) in &l_cols[c] {
                x[s] -= lv * xr;
            }
            flops += l_cols[c].len() as u64;
        }

        // Split the pattern into U entries (rows already pivotal) and
        // pivot candidates, clearing the workspace as we go.
        let mut u_col: Vec<(usize, f64)> = Vec::new();
        let mut candidates: Vec<(usize, f64)> = Vec::new();
        for &r in &topo {
            let v = x[r];
            x[r] = 0.0;
            if pinv[r] == UNASSIGNED {
                candidates.push((r, v));
            } else {
                u_col.push((pinv[r], v));
            }
        }
        if candidates.is_empty() {
            return Err(Error::Singular {
                column: j,
                kind: SingularKind::Structural,
            });
        }

        let max_abs = candidates.iter().fold(0.0f64, |m, &(_, v)| m.max(v.abs()));
        if max_abs == 0.0 {
            return Err(Error::Singular {
                column: j,
                kind: SingularKind::Numerical,
            });
        }
        // Prefer the diagonal of A when it passes the threshold test,
        // otherwise take the largest magnitude (smallest row on ties).
        let mut pick = usize::MAX;
        if let Some(pos) = candidates.iter().position(|&(r, _)| r == j) {
            if candidates[pos].1.abs() >= pivot_threshold * max_abs {
                pick = pos;
            }
        }
        if pick == usize::MAX {
            let mut best = 0;
            for (idx, &(r, v)) in candidates.iter().enumerate() {
                let (br, bv) = candidates[best];
                if v.abs() > bv.abs() || (v.abs() == bv.abs() && r < br) {
                    best = idx;
                }
            }
            pick = best;
        }
        let (pivot_row, pivot_val) = candidates.swap_remove(pick);
        pinv[pivot_row] = k;
        row_map[k] = pivot_row;

        u_col.push((k, pivot_val));
        u_col.sort_unstable_by_key(|&(pos, _)| pos);
        u_cols.push(u_col);

        for entry in &mut candidates {
            entry.1 /= pivot_val;
        }
        flops += candidates.len() as u64;
        l_cols.push(candidates);
    }

    // Map L's original row indices to pivot positions and add the unit
    // diagonal; every row is pivotal by now.
    let mut l_final: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n);
    for (k, col) in l_cols.into_iter().enumerate() {
        let mut out: Vec<(usize, f64)> = col.into_iter().map(|(r, v)| (pinv[r], v)).collect();
        out.push((k, 1.0));
        out.sort_unstable_by_key(|&(r, _)| r);
        l_final.push(out);
    }

    let lower = SparseMatrix::from_sorted_columns(n, l_final)?;
    let upper = SparseMatrix::from_sorted_columns(n, u_cols)?;
    let fill_in = (lower.nnz() - n + upper.nnz()) as u64 - matrix.nnz() as u64;
    let max_a = matrix.max_abs();
    let stats = FactorStats {
        fill_in,
        flops,
        factor_time: started.elapsed().as_secs_f64(),
        max_pivot_growth: if max_a > 0.0 {
            upper.max_abs() / max_a
        } else {
            0.0
        },
    };
    let factors = LuFactors {
        lower,
        upper,
        row_perm: Permutation::new(row_map)?,
        col_perm: col_perm.clone(),
    };
    Ok((factors, stats))
}

/// Solves A x = rhs given factors of A: permute, forward-substitute with
/// L, back-substitute with U, un-permute.
pub fn solve(factors: &LuFactors, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = factors.n();
    if rhs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: rhs.len(),
        });
    }

    // b = P * rhs
    let mut b: Vec<f64> = factors.row_perm.map().iter().map(|&r| rhs[r]).collect();

    // L y = b (unit diagonal)
    for k in 0..n {
        let yk = b[k];
        if yk != 0.0 {
            let (rows, vals) = factors.lower.col(k);
            for (&i, &v) in rows.iter().zip(vals) {
                if i > k {
                    b[i] -= v * yk;
                }
            }
        }
    }

    // U z = y
    for k in (0..n).rev() {
        let (rows, vals) = factors.upper.col(k);
        let diag = *vals.last().expect("U column cannot be empty");
        debug_assert_eq!(*rows.last().unwrap(), k);
        if diag == 0.0 {
            return Err(Error::Singular {
                column: factors.col_perm.map()[k],
                kind: SingularKind::Numerical,
            });
        }
        let zk = b[k] / diag;
        b[k] = zk;
        for (&i, &v) in rows.iter().zip(vals).take(rows.len() - 1) {
            b[i] -= v * zk;
        }
    }

    // x = Q' z
    let mut out = vec![0.0f64; n];
    for (pos, &orig) in factors.col_perm.map().iter().enumerate() {
        out[orig] = b[pos];
    }
    Ok(out)
}
