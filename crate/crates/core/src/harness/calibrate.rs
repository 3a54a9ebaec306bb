use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::sweep::{RunStatus, SweepRecord};
use crate::error::{Error, Result};
use crate::ordering::OrderingParam;

/// Derives a suggested rule-base config from a sweep.
///
/// Matrices are bucketed by density (log-spaced edges snapped to
/// geometric midpoints between observed densities, so no matrix sits on
/// an edge), each bucket gets the parameter with the best geometric-mean
/// flops ratio against the default, adjacent buckets with the same winner
/// merge, and each merged run becomes a trapezoid whose transitions
/// extend 20% (log-scale) into the neighboring buckets. When the same
/// parameter would win two separated runs the bucket count is reduced
/// until every run has a distinct winner, so the output is always a valid
/// config. Advisory only: feed it back through the loader and judge it on
/// a fresh sweep.
pub fn calibrate(sweep: &[SweepRecord]) -> Result<String> {
    let ok_rows: Vec<&SweepRecord> = sweep.iter().filter(|r| r.status == RunStatus::Ok).collect();
    if ok_rows.is_empty() {
        return Err(Error::InvalidInput(
            "cannot calibrate from an empty sweep".into(),
        ));
    }

    // flops per (matrix, param), plus each matrix's density.
    let mut flops: BTreeMap<(String, OrderingParam), u64> = BTreeMap::new();
    let mut densities: BTreeMap<String, f64> = BTreeMap::new();
    for r in &ok_rows {
        flops.insert((r.matrix.clone(), r.param), r.flops);
        densities.insert(r.matrix.clone(), r.density_percent);
    }
    // Only matrices with a usable default row can be scored.
    let matrices: Vec<(String, f64)> = densities
        .iter()
        .filter(|(name, _)| flops.contains_key(&((*name).clone(), OrderingParam::DEFAULT)))
        .map(|(name, &d)| (name.clone(), d))
        .collect();
    if matrices.is_empty() {
        return Err(Error::InvalidInput(
            "sweep has no matrix with an ok default-parameter row".into(),
        ));
    }
    for (_, d) in &matrices {
        if d.is_nan() || *d <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "non-positive density {d} in sweep"
            )));
        }
    }

    let mut distinct: Vec<f64> = matrices.iter().map(|(_, d)| *d).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();

    let mut n_buckets = distinct.len().min(6);
    let (edges, winners) = loop {
        let edges = bucket_edges(&distinct, n_buckets);
        match bucket_winners(&matrices, &flops, &edges) {
            Some(winners) if distinct_runs(&winners) => break (edges, winners),
            _ => {
                n_buckets -= 1;
                if n_buckets == 0 {
                    return Err(Error::InvalidInput(
                        "calibration could not find a consistent bucket assignment".into(),
                    ));
                }
            }
        }
    };

    // Merge adjacent buckets with the same winner into runs.
    let mut runs: Vec<(usize, usize, OrderingParam)> = Vec::new();
    for (i, &w) in winners.iter().enumerate() {
        match runs.last_mut() {
            Some((_, end, rw)) if *rw == w => *end = i + 1,
            _ => runs.push((i, i + 1, w)),
        }
    }

    let mut out = String::new();
    out.push_str("# generated by raobench calibrate\n");
    out.push_str("# density buckets (percent): ");
    for (i, e) in edges.iter().enumerate() {
        if i > 0 {
            out.push_str(" | ");
        }
        let _ = write!(out, "{e:.6}");
    }
    out.push('\n');
    for &(start, end, winner) in &runs {
        let b = edges[start];
        let c = edges[end];
        let a = if start == 0 {
            overlap_below(edges[0], edges[1])
        } else {
            overlap_below(edges[start], edges[start - 1])
        };
        let d = if end == edges.len() - 1 {
            overlap_above(edges[end], edges[end - 1])
        } else {
            overlap_above(edges[end], edges[end + 1])
        };
        let _ = writeln!(out, "rule {winner} {a} {b} {c} {d}");
    }
    out.push_str("priority COLAMD NATURAL AT_PLUS_A AT_TIMES_A\n");
    out.push_str("fallback COLAMD\n");
    out.push_str("floor 0.05\n");
    Ok(out)
}

/// Edge shifted 20% of the reference bucket's log-width downward.
fn overlap_below(edge: f64, other: f64) -> f64 {
    let width = (edge.ln() - other.ln()).abs();
    edge * (-0.2 * width).exp()
}

/// Edge shifted 20% of the reference bucket's log-width upward.
fn overlap_above(edge: f64, other: f64) -> f64 {
    let width = (edge.ln() - other.ln()).abs();
    edge * (0.2 * width).exp()
}

/// Log-spaced bucket edges over the density range, with interior edges
/// snapped to geometric midpoints of consecutive distinct densities so
/// no density ever sits on an edge.
fn bucket_edges(distinct: &[f64], n_buckets: usize) -> Vec<f64> {
    let lo = distinct[0] / 1.1;
    let hi = distinct[distinct.len() - 1] * 1.1;
    if n_buckets <= 1 || distinct.len() == 1 {
        return vec![lo, hi];
    }
    let midpoints: Vec<f64> = distinct.windows(2).map(|w| (w[0] * w[1]).sqrt()).collect();
    let mut chosen: Vec<f64> = Vec::new();
    let (log_lo, log_hi) = (lo.ln(), hi.ln());
    for i in 1..n_buckets {
        let target = log_lo + (log_hi - log_lo) * i as f64 / n_buckets as f64;
        let nearest = midpoints
            .iter()
            .copied()
            .filter(|m| !chosen.contains(m))
            .min_by(|a, b| (a.ln() - target).abs().total_cmp(&(b.ln() - target).abs()));
        if let Some(m) = nearest {
            chosen.push(m);
        }
    }
    chosen.sort_by(f64::total_cmp);
    chosen.dedup();
    let mut edges = Vec::with_capacity(chosen.len() + 2);
    edges.push(lo);
    edges.extend(chosen);
    edges.push(hi);
    edges
}

/// Winner per bucket: the parameter with the smallest geometric-mean
/// flops ratio against the default, among parameters that succeeded on
/// every bucket member. Returns None when some bucket is empty.
fn bucket_winners(
    matrices: &[(String, f64)],
    flops: &BTreeMap<(String, OrderingParam), u64>,
    edges: &[f64],
) -> Option<Vec<OrderingParam>> {
    let n_buckets = edges.len() - 1;
    let mut members: Vec<Vec<&(String, f64)>> = vec![Vec::new(); n_buckets];
    for m in matrices {
        let mut b = n_buckets - 1;
        for i in 0..n_buckets {
            if m.1 >= edges[i] && m.1 < edges[i + 1] {
                b = i;
                break;
            }
        }
        members[b].push(m);
    }
    let preference = [
        OrderingParam::Colamd,
        OrderingParam::Natural,
        OrderingParam::AtPlusA,
        OrderingParam::AtTimesA,
    ];
    let mut winners = Vec::with_capacity(n_buckets);
    for bucket in &members {
        if bucket.is_empty() {
            return None;
        }
        let mut best: Option<(OrderingParam, f64)> = None;
        for &p in &preference {
            let mut log_sum = 0.0;
            let mut eligible = true;
            for (name, _) in bucket {
                let Some(&fp) = flops.get(&(name.clone(), p)) else {
                    eligible = false;
                    break;
                };
                let fd = flops[&(name.clone(), OrderingParam::DEFAULT)];
                log_sum += (fp as f64 / fd as f64).ln();
            }
            if !eligible {
                continue;
            }
            let score = log_sum / bucket.len() as f64;
            match best {
                Some((_, s)) if s <= score => {}
                _ => best = Some((p, score)),
            }
        }
        winners.push(best.expect("default param is always eligible").0);
    }
    Some(winners)
}

fn distinct_runs(winners: &[OrderingParam]) -> bool {
    let mut seen = [false; 4];
    let mut prev: Option<OrderingParam> = None;
    for &w in winners {
        if prev == Some(w) {
            continue;
        }
        if seen[w.index()] {
            return false;
        }
        seen[w.index()] = true;
        prev = Some(w);
    }
    true
}
