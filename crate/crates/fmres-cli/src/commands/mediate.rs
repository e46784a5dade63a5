//! `fmres mediate`: two-step mediation regressions — every outcome and
//! every mediator regressed on the treatment column.

use fmres_core::{Error, Result};

use crate::cli::MediateArgs;
use crate::commands::{check_columns, load_input};
use crate::config::RunConfig;
use crate::output::write_artifact;

pub const ARTIFACT: &str = "mediation.csv";

pub fn run(cfg: &RunConfig, args: &MediateArgs) -> Result<()> {
    let cpu = args
        .cpu
        .clone()
        .or_else(|| cfg.cpu.clone())
        .ok_or_else(|| Error::invalid("no treatment column: pass --cpu or set `cpu`"))?;
    let outcomes = match &args.outcomes {
        Some(o) if !o.is_empty() => o.clone(),
        _ if !cfg.markets.is_empty() => cfg.markets.clone(),
        _ => {
            return Err(Error::invalid(
                "no outcome columns: pass --outcomes or configure markets",
            ))
        }
    };
    let mediators = args.mediators.clone().unwrap_or_else(|| cfg.mediators.clone());

    let (panel, digest) = load_input(cfg)?;
    let mut all: Vec<&str> = vec![cpu.as_str()];
    all.extend(outcomes.iter().map(String::as_str));
    all.extend(mediators.iter().map(String::as_str));
    check_columns(&panel, &all)?;

    let cpu_series = panel.column(&cpu)?;
    let outcome_series: Vec<(&str, &[f64])> = outcomes
        .iter()
        .map(|n| Ok((n.as_str(), panel.column(n)?)))
        .collect::<Result<_>>()?;
    let mediator_series: Vec<(&str, &[f64])> = mediators
        .iter()
        .map(|n| Ok((n.as_str(), panel.column(n)?)))
        .collect::<Result<_>>()?;

    let report = fmres_core::mediation_two_step(cpu_series, &outcome_series, &mediator_series)?;
    let mut cfg_for_hash = cfg.clone();
    cfg_for_hash.cpu = Some(cpu.clone());
    cfg_for_hash.mediators = mediators.clone();
    let hash = cfg_for_hash.config_hash(&digest);
    write_artifact(&cfg.out.join(ARTIFACT), &hash, &report.to_csv())?;
    println!(
        "mediate: {} outcome(s), {} mediator(s) -> {}",
        report.n_outcomes,
        mediators.len(),
        cfg.out.join(ARTIFACT).display(),
    );
    Ok(())
}
