//! Benchmark harness: best-parameter sweeps, tuned-vs-default
//! comparisons, decision-overhead measurement, and rule-base calibration,
//! with CSV reports.
//!
//! Flop counts are the primary comparison metric and wall time is
//! secondary: flops and fill are machine-independent proxies for the same
//! ordering-quality signal, while absolute times belong to whatever
//! machine ran the sweep. Reports always carry both.

mod calibrate;
mod corpus;
mod csv_out;
mod reports;
mod sweep;

pub use calibrate::calibrate;
pub use corpus::{load_manifest, CorpusEntry, ExpectedDensity};
pub use csv_out::{
    render_overhead_summary, render_speedup_summary, write_overhead_csv, write_speedups_csv,
    write_sweep_csv,
};
pub use reports::{
    report_best_vs_default, report_overhead, report_tuned_vs_default, OverheadRecord,
    SpeedupRecord, SpeedupReport, SpeedupSummary, TunedRecord,
};
pub use sweep::{run_sweep, RunStatus, SweepRecord};

/// Reference points printed next to measured summaries, from the original
/// study this strategy mirrors (SuperLU 3.0 on 2005-era hardware, a
/// 32-matrix collection corpus). Different solver, different machine:
/// orientation only, never comparison targets.
pub const REFERENCE_SPEEDUPS_NOTE: &str = "reference (original study, SuperLU 3.0, 2005-era \
hardware; orientation only): avg speedup 1.2x, max 3.6x, best-vs-default up to 4151x";
