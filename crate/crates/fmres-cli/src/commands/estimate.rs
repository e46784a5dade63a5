//! `fmres estimate`: fit the time-varying-parameter VAR with stochastic
//! volatility and archive the posterior.

use fmres_core::{Error, McmcConfig, Result, TvpVarPriors, TvpVarSpec};

use crate::cli::EstimateArgs;
use crate::commands::{
    archive_annotations, effective_dates, load_input, panel_rows, preprocess, summary_csv,
};
use crate::config::RunConfig;
use crate::output::write_artifact;

pub const POSTERIOR: &str = "posterior.bin";
pub const SUMMARY: &str = "summary.csv";

/// The model's variable list: explicit flag, then config `columns`, then
/// the configured market/shock roles.
fn resolve_columns(cfg: &RunConfig, args: &EstimateArgs) -> Result<Vec<String>> {
    if let Some(cols) = &args.columns {
        if !cols.is_empty() {
            return Ok(cols.clone());
        }
    }
    if !cfg.columns.is_empty() {
        return Ok(cfg.columns.clone());
    }
    let mut cols = cfg.markets.clone();
    if let Some(shock) = &cfg.shock {
        cols.push(shock.clone());
    }
    if cols.is_empty() {
        return Err(Error::invalid(
            "no model variables: pass --columns or configure markets/shock",
        ));
    }
    Ok(cols)
}

pub fn run(cfg: &RunConfig, args: &EstimateArgs) -> Result<()> {
    let mut cfg = cfg.mcmc_overridden(args.draws, args.burn_in, args.thin, args.lags);
    if let Some(logdiff) = &args.logdiff {
        cfg.logdiff = logdiff.clone();
    }
    let columns = resolve_columns(&cfg, args)?;
    cfg.columns = columns.clone();
    cfg.validate_ranges()?;

    let (raw, digest) = load_input(&cfg)?;
    let panel = preprocess(&raw, &cfg.logdiff)?;
    let names: Vec<&str> = columns.iter().map(String::as_str).collect();
    let y = panel_rows(&panel, &names)?;

    let spec = TvpVarSpec {
        lags: cfg.lags,
        priors: TvpVarPriors::default(),
        mcmc: McmcConfig {
            draws: cfg.draws,
            burn_in: cfg.burn_in,
            thin: cfg.thin,
            seed: cfg.seed,
        },
    };
    let post = fmres_core::estimate(&y, &spec)?;

    let dates = effective_dates(&panel, cfg.lags);
    let notes = archive_annotations(&names, &dates, &cfg);
    fmres_core::save_posterior(&cfg.out.join(POSTERIOR), &post, &notes)?;

    let hash = cfg.config_hash(&digest);
    let rows = fmres_core::posterior_summary(&post, None);
    write_artifact(&cfg.out.join(SUMMARY), &hash, &summary_csv(&rows))?;
    println!(
        "estimate: {} variables, {} retained draws -> {}, {}",
        post.k,
        post.beta.n_draws(),
        cfg.out.join(POSTERIOR).display(),
        cfg.out.join(SUMMARY).display(),
    );
    Ok(())
}
