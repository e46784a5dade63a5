//! `fmres resilience`: intensity and duration indices for one market's
//! response to one shock, date by date.

use std::path::PathBuf;

use fmres_core::{Error, Result};

use crate::cli::ResilienceArgs;
use crate::commands::{archive_labels, resilience_csv};
use crate::config::{file_digest, RunConfig};
use crate::output::write_artifact;

pub const ARTIFACT: &str = "resilience.csv";

fn variable_index(variables: &[String], name: &str) -> Result<usize> {
    variables.iter().position(|v| v == name).ok_or_else(|| {
        Error::invalid(format!(
            "variable '{name}' is not in the archived model ({})",
            variables.join(", ")
        ))
    })
}

pub fn run(cfg: &RunConfig, args: &ResilienceArgs) -> Result<()> {
    let mut cfg = cfg.clone();
    if let Some(h) = args.horizon {
        cfg.irf_horizon = h;
    }
    if let Some(m) = args.magnitude {
        cfg.magnitude = m;
    }
    if let Some(s) = args.shock_scale {
        cfg.shock_scale = s.into();
    }
    cfg.validate_ranges()?;

    let path: PathBuf = args
        .posterior
        .clone()
        .unwrap_or_else(|| cfg.out.join(super::estimate::POSTERIOR));
    let digest = file_digest(&path)?;
    let (post, notes) = fmres_core::load_posterior(&path)?;
    let (variables, dates) = archive_labels(&post, &notes);

    let market_name = args
        .market
        .clone()
        .unwrap_or_else(|| variables[0].clone());
    let shock_name = args
        .shock
        .clone()
        .unwrap_or_else(|| variables[variables.len() - 1].clone());
    let market = variable_index(&variables, &market_name)?;
    let shock = variable_index(&variables, &shock_name)?;

    let surface = fmres_core::tv_irf(&post, cfg.irf_horizon, cfg.magnitude, cfg.shock_scale)?;
    let series = fmres_core::resilience_series(&surface, market, shock)?;

    let hash = cfg.config_hash(&digest);
    write_artifact(
        &cfg.out.join(ARTIFACT),
        &hash,
        &resilience_csv(&series, &dates, &market_name, &shock_name),
    )?;
    println!(
        "resilience: {} of {} dates degenerate -> {}",
        series.degenerate.iter().filter(|d| **d).count(),
        dates.len(),
        cfg.out.join(ARTIFACT).display(),
    );
    Ok(())
}
