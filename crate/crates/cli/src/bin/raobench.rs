//! Benchmark harness CLI: best-parameter sweeps, tuned-vs-default
//! comparisons, decision-overhead measurement, and rule-base calibration.

use std::fs::File;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use raotune_core::harness::{
    calibrate, load_manifest, render_overhead_summary, render_speedup_summary,
    report_best_vs_default, report_overhead, report_tuned_vs_default, run_sweep,
    write_overhead_csv, write_speedups_csv, write_sweep_csv, CorpusEntry,
};
use raotune_core::{
    default_rule_base, density, load_rule_base, read_matrix_market_file, Endpoint, OrderingParam,
    RuleBase,
};

#[derive(Parser)]
#[command(
    name = "raobench",
    about = "Sparse LU ordering benchmark harness: sweeps, tuned-vs-default speedups, decision overhead, rule calibration"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Corpus manifest: one `name <tab> path <tab> [expected_density]` per line.
    #[arg(long)]
    corpus: PathBuf,

    /// Rule-base config file; the built-in default strategy when omitted.
    #[arg(long)]
    rules: Option<PathBuf>,

    /// Decision daemon endpoint (host:port or socket path).
    #[arg(long)]
    endpoint: Option<String>,

    /// Pivot threshold in (0, 1]. 1.0 is strict partial pivoting.
    #[arg(long, default_value_t = 1.0)]
    threshold: f64,

    /// Output directory for CSV reports.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Factorize every matrix under every ordering parameter; writes
    /// sweep.csv, speedups.csv (best vs default), and summary.txt.
    Sweep(Common),
    /// Tuned pipeline vs the default parameter; writes speedups.csv and
    /// summary.txt.
    Tuned(Common),
    /// Decision-bus overhead with the default parameter on both paths;
    /// needs a daemon whose rules answer the default everywhere; writes
    /// overhead.csv and summary.txt.
    Overhead(Common),
    /// Derive a rule base from a sweep; writes sweep.csv and
    /// calibrated.rules.
    Calibrate(Common),
}

fn load_rules(common: &Common) -> anyhow::Result<RuleBase> {
    match &common.rules {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading rules from {}", path.display()))?;
            Ok(load_rule_base(&text).with_context(|| format!("loading {}", path.display()))?)
        }
        None => Ok(default_rule_base()),
    }
}

fn load_corpus(common: &Common) -> anyhow::Result<Vec<CorpusEntry>> {
    let corpus = load_manifest(&common.corpus)
        .with_context(|| format!("loading corpus {}", common.corpus.display()))?;
    if corpus.is_empty() {
        bail!("corpus {} has no entries", common.corpus.display());
    }
    verify_expected_densities(&corpus);
    Ok(corpus)
}

/// Warns when a readable corpus matrix disagrees with its manifest
/// density at the printed precision.
fn verify_expected_densities(corpus: &[CorpusEntry]) {
    for entry in corpus {
        let Some(expected) = &entry.expected_density else {
            continue;
        };
        let Ok(matrix) = read_matrix_market_file(&entry.path) else {
            continue;
        };
        match density(&matrix) {
            Ok(d) if expected.matches(d) => {}
            Ok(d) => log::warn!(
                "{}: computed density {d} does not round to the expected {}",
                entry.name,
                expected.printed
            ),
            Err(e) => log::warn!("{}: {e}", entry.name),
        }
    }
}

fn out_file(dir: &Path, name: &str) -> anyhow::Result<File> {
    std::fs::create_dir_all(dir)?;
    File::create(dir.join(name)).with_context(|| format!("creating {name}"))
}

fn endpoint_of(common: &Common) -> anyhow::Result<Option<Endpoint>> {
    common
        .endpoint
        .as_deref()
        .map(|s| s.parse::<Endpoint>().map_err(Into::into))
        .transpose()
}

fn main() -> anyhow::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();

    match cli.cmd {
        Cmd::Sweep(common) => {
            let corpus = load_corpus(&common)?;
            let sweep = run_sweep(&corpus, &OrderingParam::ALL, common.threshold);
            write_sweep_csv(&sweep, out_file(&common.out, "sweep.csv")?)?;
            let report = report_best_vs_default(&sweep)?;
            write_speedups_csv(&report, out_file(&common.out, "speedups.csv")?)?;
            let summary = render_speedup_summary("best parameter vs default", &report);
            std::fs::write(common.out.join("summary.txt"), &summary)?;
            print!("{summary}");
        }
        Cmd::Tuned(common) => {
            let corpus = load_corpus(&common)?;
            let rules = load_rules(&common)?;
            let endpoint = endpoint_of(&common)?;
            let (report, decisions) =
                report_tuned_vs_default(&corpus, &rules, endpoint.as_ref(), common.threshold)?;
            write_speedups_csv(&report, out_file(&common.out, "speedups.csv")?)?;
            let mut summary = render_speedup_summary("tuned pipeline vs default", &report);
            for d in &decisions {
                summary.push_str(&format!(
                    "  {}: chose {} via {:?}{}{}\n",
                    d.matrix,
                    d.chosen,
                    d.path,
                    if d.used_fallback { " (fallback)" } else { "" },
                    match d.best_param {
                        Some(best) if best != d.chosen => format!(", sweep best was {best}"),
                        _ => String::new(),
                    },
                ));
            }
            std::fs::write(common.out.join("summary.txt"), &summary)?;
            print!("{summary}");
        }
        Cmd::Overhead(common) => {
            let corpus = load_corpus(&common)?;
            let Some(endpoint) = endpoint_of(&common)? else {
                bail!("overhead needs --endpoint of a daemon answering the default parameter");
            };
            let records = report_overhead(&corpus, &endpoint, common.threshold)?;
            write_overhead_csv(&records, out_file(&common.out, "overhead.csv")?)?;
            let summary = render_overhead_summary(&records);
            std::fs::write(common.out.join("summary.txt"), &summary)?;
            print!("{summary}");
        }
        Cmd::Calibrate(common) => {
            let corpus = load_corpus(&common)?;
            let sweep = run_sweep(&corpus, &OrderingParam::ALL, common.threshold);
            write_sweep_csv(&sweep, out_file(&common.out, "sweep.csv")?)?;
            let config = calibrate(&sweep)?;
            std::fs::write(common.out.join("calibrated.rules"), &config)?;
            load_rule_base(&config).context("calibrated config must load")?;
            print!("{config}");
        }
    }
    Ok(())
}
