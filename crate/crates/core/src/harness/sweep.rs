use std::fmt;

use super::corpus::CorpusEntry;
use crate::lu::lu_factorize;
use crate::ordering::{order, OrderingParam};
use crate::sparse::{density, read_matrix_market_file, SparseMatrix};

/// Whether a (matrix, parameter) run produced factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Ok,
    Singular,
    Failed,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunStatus::Ok => write!(f, "ok"),
            RunStatus::Singular => write!(f, "singular"),
            RunStatus::Failed => write!(f, "failed"),
        }
    }
}

/// One row of a sweep: the cost of factorizing one matrix under one
/// ordering parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub matrix: String,
    pub param: OrderingParam,
    pub density_percent: f64,
    pub fill_in: u64,
    pub flops: u64,
    pub factor_time: f64,
    pub status: RunStatus,
}

/// Factorizes every corpus matrix under every parameter. Singular or
/// failed runs are recorded with their status and never abort the sweep.
///
/// Matrices with factor time under 10 ms are re-run and the median of 5
/// repeats is reported, since a single short timing is mostly noise.
pub fn run_sweep(
    corpus: &[CorpusEntry],
    params: &[OrderingParam],
    pivot_threshold: f64,
) -> Vec<SweepRecord> {
    let mut records = Vec::with_capacity(corpus.len() * params.len());
    for entry in corpus {
        match read_matrix_market_file(&entry.path) {
            Ok(matrix) => {
                for &param in params {
                    records.push(sweep_one(&entry.name, &matrix, param, pivot_threshold));
                }
            }
            Err(e) => {
                log::warn!("skipping {}: {e}", entry.name);
                for &param in params {
                    records.push(SweepRecord {
                        matrix: entry.name.clone(),
                        param,
                        density_percent: 0.0,
                        fill_in: 0,
                        flops: 0,
                        factor_time: 0.0,
                        status: RunStatus::Failed,
                    });
                }
            }
        }
    }
    records
}

pub(crate) fn sweep_one(
    name: &str,
    matrix: &SparseMatrix,
    param: OrderingParam,
    pivot_threshold: f64,
) -> SweepRecord {
    let density_percent = density(matrix).unwrap_or(0.0);
    let mut record = SweepRecord {
        matrix: name.to_string(),
        param,
        density_percent,
        fill_in: 0,
        flops: 0,
        factor_time: 0.0,
        status: RunStatus::Failed,
    };
    let perm = match order(matrix, param) {
        Ok(p) => p,
        Err(e) => {
            log::warn!("{name}/{param}: ordering failed: {e}");
            return record;
        }
    };
    match lu_factorize(matrix, &perm, pivot_threshold) {
        Ok((_, stats)) => {
            let mut times = vec![stats.factor_time];
            if stats.factor_time < 0.010 {
                for _ in 0..4 {
                    if let Ok((_, more)) = lu_factorize(matrix, &perm, pivot_threshold) {
                        times.push(more.factor_time);
                    }
                }
            }
            times.sort_by(f64::total_cmp);
            record.fill_in = stats.fill_in;
            record.flops = stats.flops;
            record.factor_time = times[times.len() / 2];
            record.status = RunStatus::Ok;
        }
        Err(e) if e.is_singular() => {
            log::warn!("{name}/{param}: {e}");
            record.status = RunStatus::Singular;
        }
        Err(e) => {
            log::warn!("{name}/{param}: {e}");
        }
    }
    record
}
