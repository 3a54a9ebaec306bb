//! The decision daemon: answers feature messages with ordering
//! parameters over a local byte-stream connection.

use std::path::PathBuf;
use std::sync::atomic::AtomicBool;
use std::sync::Arc;

use anyhow::Context;
use clap::Parser;
use raotune_core::{default_rule_base, load_rule_base, serve, Endpoint};

#[derive(Parser)]
#[command(
    name = "raotuned",
    about = "Ordering-decision daemon: grades fill-reducing ordering parameters by matrix density and answers over a line protocol",
    after_help = "Wire protocol (one request per line):\n  \
        REQ <id> n=<int> nnz=<int> density=<real> [diag=<real>]\n  \
        OK <id> param=<PARAM> grades=<r>,<r>,<r>,<r> fallback=<0|1> micros=<int>\n  \
        ERR <id-or-dash> <reason>"
)]
struct Args {
    /// Rule-base config file; the built-in default strategy when omitted.
    #[arg(long)]
    rules: Option<PathBuf>,

    /// host:port or a socket path (paths contain a `/`).
    #[arg(long)]
    listen: String,
}

fn main() -> anyhow::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let args = Args::parse();

    let rules = match &args.rules {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading rules from {}", path.display()))?;
            load_rule_base(&text).with_context(|| format!("loading {}", path.display()))?
        }
        None => default_rule_base(),
    };
    let endpoint: Endpoint = args.listen.parse()?;

    log::info!("listening on {endpoint}");
    let shutdown = Arc::new(AtomicBool::new(false));
    serve(&rules, &endpoint, &shutdown)?;
    Ok(())
}
