//! Shared matrix generators for the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use raotune_core::SparseMatrix;

/// Random square matrix with a dominant diagonal and roughly
/// `density_percent` stored entries, reproducible from the seed.
pub fn random_dominant(n: usize, density_percent: f64, seed: u64) -> SparseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = ((n * n) as f64 * density_percent / 100.0) as usize;
    let off_diag = target.saturating_sub(n);
    let mut triplets: Vec<(usize, usize, f64)> = Vec::with_capacity(target);
    let mut row_sum = vec![0.0f64; n];
    for _ in 0..off_diag {
        let r = rng.random_range(0..n);
        let c = rng.random_range(0..n);
        if r == c {
            continue;
        }
        let v: f64 = rng.random_range(-1.0..1.0);
        triplets.push((r, c, v));
        row_sum[r] += v.abs();
    }
    for (i, &sum) in row_sum.iter().enumerate() {
        triplets.push((i, i, sum + 1.0 + (i % 3) as f64));
    }
    SparseMatrix::from_triplets(n, n, &triplets).expect("generator produces valid triplets")
}

/// Banded matrix (half-bandwidth `band`), dominant diagonal.
pub fn banded(n: usize, band: usize) -> SparseMatrix {
    let mut triplets = Vec::new();
    for i in 0..n {
        triplets.push((i, i, 2.0 + 2.0 * band as f64));
        for off in 1..=band {
            if i + off < n {
                triplets.push((i, i + off, -1.0));
                triplets.push((i + off, i, -1.0));
            }
        }
    }
    SparseMatrix::from_triplets(n, n, &triplets).expect("valid banded triplets")
}
