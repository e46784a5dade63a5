//! `fmres connect`: spillover tables for a panel of series — a constant
//! VAR static table by default, or date-by-date tables from the
//! time-varying model with `--dynamic`.

use fmres_core::{McmcConfig, Result, TvpVarPriors, TvpVarSpec};

use crate::cli::ConnectArgs;
use crate::commands::{
    dynamic_csv, effective_dates, load_input, npdc_csv, panel_rows, preprocess, static_table_csv,
};
use crate::config::RunConfig;
use crate::output::write_artifact;

pub const STATIC_ARTIFACT: &str = "connect_static.csv";
pub const DYNAMIC_ARTIFACT: &str = "connect_dynamic.csv";
pub const NPDC_ARTIFACT: &str = "npdc.csv";

pub fn run(cfg: &RunConfig, args: &ConnectArgs) -> Result<()> {
    let mut cfg = cfg.mcmc_overridden(args.draws, args.burn_in, args.thin, args.lags);
    if let Some(h) = args.gfevd_horizon {
        cfg.gfevd_horizon = h;
    }
    if args.dynamic {
        cfg.dynamic = true;
    }
    if let Some(logdiff) = &args.logdiff {
        cfg.logdiff = logdiff.clone();
    }
    cfg.validate_ranges()?;

    let (raw, digest) = load_input(&cfg)?;
    let panel = preprocess(&raw, &cfg.logdiff)?;
    let columns: Vec<String> = match &args.columns {
        Some(cols) if !cols.is_empty() => cols.clone(),
        _ if !cfg.columns.is_empty() => cfg.columns.clone(),
        _ => panel.columns().to_vec(),
    };
    cfg.columns = columns.clone();
    let names: Vec<&str> = columns.iter().map(String::as_str).collect();
    let y = panel_rows(&panel, &names)?;
    let hash = cfg.config_hash(&digest);

    let static_table = if cfg.dynamic {
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
        let tables = fmres_core::dynamic_connectedness(&post, cfg.gfevd_horizon, &columns)?;
        let dates = effective_dates(&panel, cfg.lags);
        write_artifact(
            &cfg.out.join(DYNAMIC_ARTIFACT),
            &hash,
            &dynamic_csv(&tables, &dates),
        )?;
        write_artifact(&cfg.out.join(NPDC_ARTIFACT), &hash, &npdc_csv(&tables, &dates))?;
        fmres_core::static_connectedness(&tables)?
    } else {
        fmres_core::constant_var_connectedness(&y, cfg.lags, cfg.gfevd_horizon, &columns)?
    };

    write_artifact(
        &cfg.out.join(STATIC_ARTIFACT),
        &hash,
        &static_table_csv(&static_table),
    )?;
    println!(
        "connect: {} variables, TCI {:.2} -> {}",
        columns.len(),
        static_table.tci,
        cfg.out.join(STATIC_ARTIFACT).display(),
    );
    Ok(())
}
