//! CSV emission with frozen schemas. Header rows are fixed, one record
//! per line, fields never reordered; fill and flops columns are integers
//! and therefore byte-stable across runs.

use std::io::Write;

use super::reports::{OverheadRecord, SpeedupReport};
use super::sweep::SweepRecord;
use super::REFERENCE_SPEEDUPS_NOTE;
use crate::error::Result;
use crate::ordering::OrderingParam;

pub const SWEEP_HEADER: [&str; 7] = [
    "matrix",
    "param",
    "density_percent",
    "fill_in",
    "flops",
    "factor_time_s",
    "status",
];

pub const SPEEDUPS_HEADER: [&str; 5] = [
    "matrix",
    "baseline_param",
    "compared_param",
    "speedup_time",
    "speedup_flops",
];

pub const OVERHEAD_HEADER: [&str; 8] = [
    "matrix",
    "direct_time_s",
    "bus_time_s",
    "round_trip_s",
    "daemon_micros",
    "overhead_ratio",
    "params_match",
    "stats_match",
];

pub fn write_sweep_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in records {
        w.write_record([
            r.matrix.as_str(),
            r.param.name(),
            &r.density_percent.to_string(),
            &r.fill_in.to_string(),
            &r.flops.to_string(),
            &format!("{:.6}", r.factor_time),
            &r.status.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_speedups_csv<W: Write>(report: &SpeedupReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SPEEDUPS_HEADER)?;
    for r in &report.records {
        w.write_record([
            r.matrix.as_str(),
            r.baseline_param.name(),
            r.compared_param.name(),
            &format!("{:.4}", r.speedup_time),
            &r.speedup_flops.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_overhead_csv<W: Write>(records: &[OverheadRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(OVERHEAD_HEADER)?;
    for r in records {
        w.write_record([
            r.matrix.as_str(),
            &format!("{:.6}", r.direct_time),
            &format!("{:.6}", r.bus_time),
            &format!("{:.6}", r.round_trip),
            &r.daemon_micros.to_string(),
            &format!("{:.4}", r.overhead_ratio),
            &(r.params_match as u8).to_string(),
            &(r.stats_match as u8).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Human-readable summary for a speedup report.
pub fn render_speedup_summary(title: &str, report: &SpeedupReport) -> String {
    let s = &report.summary;
    let mut out = String::new();
    out.push_str(&format!("{title}\n"));
    out.push_str(&format!(
        "  matrices: {} measured, {} excluded\n",
        s.count, s.excluded
    ));
    out.push_str(&format!(
        "  flops speedup: arith mean {:.4}, geo mean {:.4}, max {:.4}\n",
        s.arith_mean_flops, s.geo_mean_flops, s.max_flops
    ));
    out.push_str(&format!(
        "  time  speedup: arith mean {:.4}, geo mean {:.4}, max {:.4}\n",
        s.arith_mean_time, s.geo_mean_time, s.max_time
    ));
    out.push_str("  chosen-parameter histogram:");
    for p in OrderingParam::ALL {
        out.push_str(&format!(" {}={}", p.name(), s.param_histogram[p.index()]));
    }
    out.push('\n');
    out.push_str(&format!(
        "  selection accuracy vs sweep best: {:.4}\n",
        report.selection_accuracy
    ));
    out.push_str(&format!("  {REFERENCE_SPEEDUPS_NOTE}\n"));
    out
}

pub fn render_overhead_summary(records: &[OverheadRecord]) -> String {
    let mut out = String::new();
    out.push_str("decision-bus overhead (default parameter on both paths)\n");
    if records.is_empty() {
        out.push_str("  no matrices measured\n");
        return out;
    }
    let max_ratio = records
        .iter()
        .map(|r| r.overhead_ratio)
        .fold(f64::NEG_INFINITY, f64::max);
    let worst_rt = records
        .iter()
        .map(|r| r.round_trip)
        .fold(f64::NEG_INFINITY, f64::max);
    let mismatches = records
        .iter()
        .filter(|r| !r.params_match || !r.stats_match)
        .count();
    out.push_str(&format!("  matrices: {}\n", records.len()));
    out.push_str(&format!("  worst overhead ratio: {max_ratio:.4}\n"));
    out.push_str(&format!("  worst round-trip: {:.3} ms\n", worst_rt * 1e3));
    out.push_str(&format!("  param/stats mismatches: {mismatches}\n"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::reports::{SpeedupRecord, SpeedupSummary};
    use crate::harness::sweep::RunStatus;

    #[test]
    fn sweep_csv_schema_is_stable() {
        let records = vec![SweepRecord {
            matrix: "m1".into(),
            param: OrderingParam::Colamd,
            density_percent: 2.5,
            fill_in: 10,
            flops: 100,
            factor_time: 0.001234,
            status: RunStatus::Ok,
        }];
        let mut buf = Vec::new();
        write_sweep_csv(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "matrix,param,density_percent,fill_in,flops,factor_time_s,status"
        );
        assert_eq!(lines.next().unwrap(), "m1,COLAMD,2.5,10,100,0.001234,ok");
    }

    #[test]
    fn speedups_csv_schema_is_stable() {
        let report = SpeedupReport {
            records: vec![SpeedupRecord {
                matrix: "m1".into(),
                baseline_param: OrderingParam::Colamd,
                compared_param: OrderingParam::Natural,
                speedup_time: 2.0,
                speedup_flops: 2.0,
            }],
            summary: SpeedupSummary {
                count: 1,
                excluded: 0,
                arith_mean_flops: 2.0,
                geo_mean_flops: 2.0,
                max_flops: 2.0,
                arith_mean_time: 2.0,
                geo_mean_time: 2.0,
                max_time: 2.0,
                param_histogram: [0, 1, 0, 0],
            },
            selection_accuracy: 1.0,
        };
        let mut buf = Vec::new();
        write_speedups_csv(&report, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "matrix,baseline_param,compared_param,speedup_time,speedup_flops"
        );
        assert_eq!(lines.next().unwrap(), "m1,COLAMD,NATURAL,2.0000,2");
        let summary = render_speedup_summary("best vs default", &report);
        assert!(summary.contains("geo mean 2.0000"));
    }
}
