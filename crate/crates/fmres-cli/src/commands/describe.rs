//! `fmres describe`: per-column moments and unit-root tests.

use fmres_core::Result;

use crate::cli::DescribeArgs;
use crate::commands::{describe_csv, load_input, preprocess};
use crate::config::RunConfig;
use crate::output::write_artifact;

pub const ARTIFACT: &str = "describe.csv";

pub fn run(cfg: &RunConfig, args: &DescribeArgs) -> Result<()> {
    let logdiff = args.logdiff.clone().unwrap_or_else(|| cfg.logdiff.clone());
    let mut cfg = cfg.clone();
    cfg.logdiff = logdiff;

    let (raw, digest) = load_input(&cfg)?;
    let panel = preprocess(&raw, &cfg.logdiff)?;
    let stats = fmres_core::describe_panel(&panel)?;

    let hash = cfg.config_hash(&digest);
    write_artifact(&cfg.out.join(ARTIFACT), &hash, &describe_csv(&stats))?;
    println!("describe: {} series -> {}", stats.len(), cfg.out.join(ARTIFACT).display());
    Ok(())
}
