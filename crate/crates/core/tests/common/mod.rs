//! Shared test oracles and generators, independent of the library's own
//! sparse data paths: everything here works on dense arrays.

#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use raotune_core::{LuFactors, Permutation, SparseMatrix};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> SparseMatrix {
    raotune_core::read_matrix_market_file(fixture_path(name)).expect("bundled fixture parses")
}

pub fn manifest_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

// ---------------------------------------------------------------- dense

pub fn dense_from(m: &SparseMatrix) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; m.n_cols()]; m.n_rows()];
    for (r, c, v) in m.iter() {
        out[r][c] += v;
    }
    out
}

/// Dense boolean pattern of A' + A with full diagonal.
pub fn dense_at_plus_a(m: &SparseMatrix) -> Vec<Vec<bool>> {
    let n = m.n_rows();
    let a = dense_from(m);
    let mut out = vec![vec![false; n]; n];
    for i in 0..n {
        out[i][i] = true;
        for j in 0..n {
            if a[i][j] != 0.0 || a[j][i] != 0.0 {
                out[i][j] = true;
                out[j][i] = true;
            }
        }
    }
    out
}

/// Dense boolean pattern of A' * A with full diagonal.
pub fn dense_ata(m: &SparseMatrix) -> Vec<Vec<bool>> {
    let n = m.n_cols();
    let a = dense_from(m);
    let mut out = vec![vec![false; n]; n];
    for j in 0..n {
        out[j][j] = true;
        for k in 0..n {
            if k == j {
                continue;
            }
            for row in a.iter() {
                if row[j] != 0.0 && row[k] != 0.0 {
                    out[j][k] = true;
                    break;
                }
            }
        }
    }
    out
}

pub fn pattern_of(m: &SparseMatrix) -> Vec<Vec<bool>> {
    dense_from(m)
        .into_iter()
        .map(|row| row.into_iter().map(|v| v != 0.0).collect())
        .collect()
}

pub fn bool_to_sparse(p: &[Vec<bool>]) -> SparseMatrix {
    let n = p.len();
    let mut t = Vec::new();
    for (i, row) in p.iter().enumerate() {
        for (j, &set) in row.iter().enumerate() {
            if set {
                t.push((i, j, 1.0));
            }
        }
    }
    SparseMatrix::from_triplets(n, n, &t).unwrap()
}

// ------------------------------------------------- elimination oracles

/// Independent greedy minimum degree on a dense boolean adjacency matrix:
/// smallest index on degree ties, explicit clique fill. Returns the order
/// and the number of fill edges (unordered pairs).
pub fn greedy_min_degree_oracle(adjacency: &[Vec<bool>]) -> (Vec<usize>, u64) {
    let n = adjacency.len();
    let mut adj: Vec<Vec<bool>> = adjacency.to_vec();
    for (i, row) in adj.iter_mut().enumerate() {
        row[i] = false;
    }
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    let mut fill = 0u64;
    for _ in 0..n {
        let mut best: Option<(usize, usize)> = None;
        for v in 0..n {
            if !alive[v] {
                continue;
            }
            let deg = (0..n).filter(|&u| alive[u] && adj[v][u]).count();
            match best {
                Some((_, d)) if d <= deg => {}
                _ => best = Some((v, deg)),
            }
        }
        let v = best.unwrap().0;
        alive[v] = false;
        order.push(v);
        let nbrs: Vec<usize> = (0..n).filter(|&u| alive[u] && adj[v][u]).collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if !adj[a][b] {
                    adj[a][b] = true;
                    adj[b][a] = true;
                    fill += 1;
                }
            }
        }
    }
    (order, fill)
}

/// Fill edges created by eliminating a dense boolean pattern in a fixed
/// order.
pub fn dense_elimination_fill(adjacency: &[Vec<bool>], order: &[usize]) -> u64 {
    let n = adjacency.len();
    let mut adj: Vec<Vec<bool>> = adjacency.to_vec();
    for (i, row) in adj.iter_mut().enumerate() {
        row[i] = false;
    }
    let mut alive = vec![true; n];
    let mut fill = 0u64;
    for &v in order {
        alive[v] = false;
        let nbrs: Vec<usize> = (0..n).filter(|&u| alive[u] && adj[v][u]).collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if !adj[a][b] {
                    adj[a][b] = true;
                    adj[b][a] = true;
                    fill += 1;
                }
            }
        }
    }
    fill
}

// --------------------------------------------------------- LU oracles

/// Dense LU solve with partial pivoting; None when numerically singular.
pub fn dense_lu_solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut x: Vec<f64> = b.to_vec();
    for k in 0..n {
        let (pivot_row, pivot_abs) = (k..n)
            .map(|r| (r, m[r][k].abs()))
            .max_by(|l, r| l.1.total_cmp(&r.1))?;
        if pivot_abs == 0.0 {
            return None;
        }
        m.swap(k, pivot_row);
        x.swap(k, pivot_row);
        for r in k + 1..n {
            let f = m[r][k] / m[k][k];
            if f != 0.0 {
                for c in k..n {
                    m[r][c] -= f * m[k][c];
                }
                x[r] -= f * x[k];
            }
        }
    }
    for k in (0..n).rev() {
        let mut s = x[k];
        for c in k + 1..n {
            s -= m[k][c] * x[c];
        }
        x[k] = s / m[k][k];
    }
    Some(x)
}

/// max |P A Q' - L U| over all entries, computed densely.
pub fn reconstruction_residual(matrix: &SparseMatrix, factors: &LuFactors) -> f64 {
    let n = matrix.n_rows();
    let a = dense_from(matrix);
    let l = dense_from(factors.lower());
    let u = dense_from(factors.upper());
    let pr = factors.row_perm().map();
    let pc = factors.col_perm().map();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let mut lu = 0.0;
            for (k, urow) in u.iter().enumerate() {
                lu += l[i][k] * urow[j];
            }
            worst = worst.max((a[pr[i]][pc[j]] - lu).abs());
        }
    }
    worst
}

pub fn inf_norm(m: &SparseMatrix) -> f64 {
    let mut row_sums = vec![0.0f64; m.n_rows()];
    for (r, _, v) in m.iter() {
        row_sums[r] += v.abs();
    }
    row_sums.into_iter().fold(0.0, f64::max)
}

/// ||A x - b||_inf / (||A||_inf * ||x||_inf)
pub fn solve_residual(matrix: &SparseMatrix, x: &[f64], b: &[f64]) -> f64 {
    let mut ax = vec![0.0f64; matrix.n_rows()];
    for (r, c, v) in matrix.iter() {
        ax[r] += v * x[c];
    }
    let num = ax
        .iter()
        .zip(b)
        .map(|(l, r)| (l - r).abs())
        .fold(0.0, f64::max);
    let xn = x.iter().map(|v| v.abs()).fold(0.0, f64::max);
    num / (inf_norm(matrix) * xn).max(f64::MIN_POSITIVE)
}

// ---------------------------------------------------------- generators

/// Random square matrix, exact nnz control, dominant diagonal when asked.
pub fn random_sparse(n: usize, density_percent: f64, seed: u64, dominant: bool) -> SparseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = (((n * n) as f64) * density_percent / 100.0).round() as usize;
    let off_diag = target.saturating_sub(n);
    let mut entries = std::collections::BTreeMap::new();
    while entries.len() < off_diag {
        let r = rng.random_range(0..n);
        let c = rng.random_range(0..n);
        if r != c {
            entries.entry((r, c)).or_insert_with(|| {
                let v: f64 = rng.random_range(-1.0..1.0);
                if v.abs() < 0.05 {
                    0.05
                } else {
                    v
                }
            });
        }
    }
    let mut row_sum = vec![0.0f64; n];
    for (&(r, _), &v) in &entries {
        row_sum[r] += v.abs();
    }
    let mut triplets: Vec<(usize, usize, f64)> =
        entries.into_iter().map(|((r, c), v)| (r, c, v)).collect();
    for (i, &sum) in row_sum.iter().enumerate() {
        let diag = if dominant {
            sum + 1.0 + rng.random_range(0.0..1.0)
        } else {
            rng.random_range(0.2..1.0)
        };
        triplets.push((i, i, diag));
    }
    SparseMatrix::from_triplets(n, n, &triplets).unwrap()
}

/// Random symmetric pattern with full diagonal: each off-diagonal pair is
/// present with probability `p`.
pub fn random_symmetric_pattern(n: usize, p: f64, seed: u64) -> SparseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t: Vec<(usize, usize, f64)> = (0..n).map(|i| (i, i, 1.0)).collect();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                t.push((i, j, 1.0));
                t.push((j, i, 1.0));
            }
        }
    }
    SparseMatrix::from_triplets(n, n, &t).unwrap()
}

pub fn rhs_for(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(-5.0..5.0)).collect()
}

pub fn identity_perm(n: usize) -> Permutation {
    Permutation::identity(n)
}
