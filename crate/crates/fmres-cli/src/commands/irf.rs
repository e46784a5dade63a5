//! `fmres irf`: time-varying impulse responses from an archived posterior.

use std::path::PathBuf;

use fmres_core::Result;

use crate::cli::IrfArgs;
use crate::commands::{archive_labels, irf_csv};
use crate::config::{file_digest, RunConfig};
use crate::output::write_artifact;

pub const ARTIFACT: &str = "irf.csv";

pub fn run(cfg: &RunConfig, args: &IrfArgs) -> Result<()> {
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

    let surface = fmres_core::tv_irf(&post, cfg.irf_horizon, cfg.magnitude, cfg.shock_scale)?;
    let hash = cfg.config_hash(&digest);
    write_artifact(&cfg.out.join(ARTIFACT), &hash, &irf_csv(&surface, &dates, &variables))?;
    println!(
        "irf: {} dates x {} horizons x {}^2 responses -> {}",
        dates.len(),
        surface.horizon,
        post.k,
        cfg.out.join(ARTIFACT).display(),
    );
    Ok(())
}
