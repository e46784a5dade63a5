//! `fmres pipeline`: every stage in order — preprocess, describe,
//! composite, estimate, impulse responses, resilience, connectedness,
//! mediation — with a manifest tying each artifact to its stage and the
//! run's config hash. A failing stage halts the run, keeps whatever was
//! already written, and leaves a `FAILED,<stage>` marker in the manifest.

use fmres_core::{
    Error, IrfSurface, McmcConfig, ResilienceSeries, Result, TimeSeriesPanel, TvpVarPosterior,
    TvpVarPriors, TvpVarSpec,
};
use nalgebra::{DMatrix, DVector};

use crate::cli::PipelineArgs;
use crate::commands::{
    check_columns, describe_csv, dynamic_csv, effective_dates, irf_csv, load_input, npdc_csv,
    panel_rows, preprocess, resilience_csv, static_table_csv, summary_csv,
};
use crate::config::RunConfig;
use crate::manifest::Manifest;
use crate::output::write_artifact;

pub const COMPOSITE_NAME: &str = "total";

const S01: &str = "01-preprocess";
const S02: &str = "02-describe";
const S03: &str = "03-composite";
const S04: &str = "04-estimate";
const S05: &str = "05-irf";
const S06: &str = "06-resilience";
const S07: &str = "07-connect";
const S08: &str = "08-mediate";

struct Ctx<'a> {
    cfg: &'a RunConfig,
    hash: String,
    manifest: Manifest,
}

impl Ctx<'_> {
    fn emit(&mut self, stage: &str, name: &str, body: &str) -> Result<()> {
        write_artifact(&self.cfg.out.join(name), &self.hash, body)?;
        self.manifest.record(stage, &self.cfg.out, name)
    }

    fn emit_posterior(
        &mut self,
        stage: &str,
        name: &str,
        post: &TvpVarPosterior,
        variables: &[&str],
        dates: &[String],
        seed: u64,
    ) -> Result<()> {
        let mut cfg = self.cfg.clone();
        cfg.seed = seed;
        let notes = super::archive_annotations(variables, dates, &cfg);
        fmres_core::save_posterior(&self.cfg.out.join(name), post, &notes)?;
        self.manifest.record(stage, &self.cfg.out, name)
    }
}

/// All configured roles must exist before any estimation starts, and the
/// composite column name must be free for stage 03 to claim.
fn preflight(cfg: &RunConfig, raw: &TimeSeriesPanel) -> Result<()> {
    cfg.validate_ranges()?;
    if cfg.markets.is_empty() {
        return Err(Error::invalid("pipeline needs at least one `markets` column"));
    }
    let shock = cfg
        .shock
        .as_deref()
        .ok_or_else(|| Error::invalid("pipeline needs a `shock` column"))?;
    let cpu = cfg
        .cpu
        .as_deref()
        .ok_or_else(|| Error::invalid("pipeline needs a `cpu` column"))?;
    if cfg.mediators.is_empty() {
        return Err(Error::invalid("pipeline needs at least one `mediators` column"));
    }
    let mut referenced: Vec<&str> = cfg.markets.iter().map(String::as_str).collect();
    referenced.push(shock);
    referenced.push(cpu);
    referenced.extend(cfg.mediators.iter().map(String::as_str));
    referenced.extend(cfg.logdiff.iter().map(String::as_str));
    check_columns(raw, &referenced)?;
    if cfg.markets.len() >= 2 && raw.columns().iter().any(|c| c == COMPOSITE_NAME) {
        return Err(Error::invalid(format!(
            "column name `{COMPOSITE_NAME}` is reserved for the composite stage"
        )));
    }
    Ok(())
}

fn estimate_system(cfg: &RunConfig, y: &[DVector<f64>], seed: u64) -> Result<TvpVarPosterior> {
    let spec = TvpVarSpec {
        lags: cfg.lags,
        priors: TvpVarPriors::default(),
        mcmc: McmcConfig {
            draws: cfg.draws,
            burn_in: cfg.burn_in,
            thin: cfg.thin,
            seed,
        },
    };
    fmres_core::estimate(y, &spec)
}

pub fn run(cfg: &RunConfig, args: &PipelineArgs) -> Result<()> {
    let mut cfg = cfg.mcmc_overridden(args.draws, args.burn_in, args.thin, args.lags);
    if let Some(h) = args.irf_horizon {
        cfg.irf_horizon = h;
    }
    if let Some(h) = args.gfevd_horizon {
        cfg.gfevd_horizon = h;
    }

    let (raw, digest) = load_input(&cfg)?;
    preflight(&cfg, &raw)?;

    let mut ctx = Ctx {
        cfg: &cfg,
        hash: cfg.config_hash(&digest),
        manifest: Manifest::new(),
    };
    match run_stages(&mut ctx, &cfg, &raw) {
        Err((stage, err)) => {
            ctx.manifest.mark_failed(&stage);
            ctx.manifest.write(&cfg.out, &ctx.hash)?;
            eprintln!("pipeline: stage {stage} failed; partial artifacts retained");
            Err(err)
        }
        Ok(()) => {
            ctx.manifest.write(&cfg.out, &ctx.hash)?;
            println!(
                "pipeline: {} artifacts -> {} (manifest.csv)",
                ctx.manifest.artifact_count(),
                cfg.out.display(),
            );
            Ok(())
        }
    }
}

type StageResult<T> = std::result::Result<T, (String, Error)>;

fn at<T>(stage: &str, r: Result<T>) -> StageResult<T> {
    r.map_err(|e| (stage.to_string(), e))
}

fn run_stages(ctx: &mut Ctx, cfg: &RunConfig, raw: &TimeSeriesPanel) -> StageResult<()> {
    // 01: transform the raw panel into the analysis panel.
    let panel = at(S01, preprocess(raw, &cfg.logdiff))?;
    at(S01, ctx.emit(S01, "panel.csv", &panel.to_csv_string()))?;

    // 02: descriptive statistics on the analysis panel.
    let stats = at(S02, fmres_core::describe_panel(&panel))?;
    at(S02, ctx.emit(S02, "describe.csv", &describe_csv(&stats)))?;

    // 03: composite market series by first principal component, only
    // meaningful with two or more markets.
    let (panel, model_names) = if cfg.markets.len() >= 2 {
        let t = panel.len();
        let m = cfg.markets.len();
        let mut data = DMatrix::zeros(t, m);
        for (j, name) in cfg.markets.iter().enumerate() {
            let col = at(S03, panel.column(name))?;
            for i in 0..t {
                data[(i, j)] = col[i];
            }
        }
        let pca = at(S03, fmres_core::pca_composite(&data, true))?;
        let mut loadings = format!("# explained_fraction {}\nseries,loading\n", pca.explained_fraction);
        for (name, l) in cfg.markets.iter().zip(&pca.loadings) {
            loadings.push_str(&format!("{name},{}\n", crate::output::fixed6(*l)));
        }
        at(S03, ctx.emit(S03, "composite_loadings.csv", &loadings))?;

        let mut series: Vec<(String, Vec<f64>)> = panel
            .columns()
            .iter()
            .map(|c| (c.clone(), panel.column(c).expect("existing column").to_vec()))
            .collect();
        series.push((COMPOSITE_NAME.to_string(), pca.scores.clone()));
        let extended = at(
            S03,
            TimeSeriesPanel::from_columns(panel.dates().to_vec(), series),
        )?;
        at(S03, ctx.emit(S03, "panel_composite.csv", &extended.to_csv_string()))?;

        let mut names = cfg.markets.clone();
        names.push(COMPOSITE_NAME.to_string());
        (extended, names)
    } else {
        (panel, cfg.markets.clone())
    };

    // 04: one bivariate model per market (and the composite), each paired
    // with the shock series.
    let shock = cfg.shock.as_deref().expect("preflight checked the shock role");
    let dates = effective_dates(&panel, cfg.lags);
    let mut posteriors: Vec<(String, TvpVarPosterior)> = Vec::new();
    for (idx, name) in model_names.iter().enumerate() {
        let y = at(S04, panel_rows(&panel, &[name.as_str(), shock]))?;
        let seed = cfg.seed.wrapping_add(idx as u64);
        let post = at(S04, estimate_system(cfg, &y, seed))?;
        at(
            S04,
            ctx.emit_posterior(
                S04,
                &format!("posterior_{name}.bin"),
                &post,
                &[name.as_str(), shock],
                &dates,
                seed,
            ),
        )?;
        let rows = fmres_core::posterior_summary(&post, None);
        at(S04, ctx.emit(S04, &format!("summary_{name}.csv"), &summary_csv(&rows)))?;
        posteriors.push((name.clone(), post));
    }

    // 05: impulse-response surfaces from the posterior means.
    let mut surfaces: Vec<(String, IrfSurface)> = Vec::new();
    for (name, post) in &posteriors {
        let surface = at(
            S05,
            fmres_core::tv_irf(post, cfg.irf_horizon, cfg.magnitude, cfg.shock_scale),
        )?;
        let labels = vec![name.clone(), shock.to_string()];
        at(
            S05,
            ctx.emit(S05, &format!("irf_{name}.csv"), &irf_csv(&surface, &dates, &labels)),
        )?;
        surfaces.push((name.clone(), surface));
    }

    // 06: compress each market's response to the shock into the two
    // resilience indices.
    let mut indices: Vec<(String, ResilienceSeries)> = Vec::new();
    for (name, surface) in &surfaces {
        let series = at(S06, fmres_core::resilience_series(surface, 0, 1))?;
        at(
            S06,
            ctx.emit(
                S06,
                &format!("resilience_{name}.csv"),
                &resilience_csv(&series, &dates, name, shock),
            ),
        )?;
        indices.push((name.clone(), series));
    }

    // 07: spillovers between the markets' index series (the composite
    // stays out: it is a weighted copy of the others). Needs two or more
    // markets to be a system.
    if cfg.markets.len() >= 2 {
        let m = cfg.markets.len();
        let t_res = dates.len();
        let measures: [(&str, fn(&ResilienceSeries) -> Vec<f64>); 2] = [
            ("intensity", |s| s.intensity.clone()),
            ("duration", |s| s.duration.clone()),
        ];
        for (measure, pick) in measures {
            let cols: Vec<Vec<f64>> = indices[..m].iter().map(|(_, s)| pick(s)).collect();
            let y: Vec<DVector<f64>> = (0..t_res)
                .map(|t| DVector::from_iterator(m, cols.iter().map(|c| c[t])))
                .collect();
            let seed = cfg
                .seed
                .wrapping_add(1000)
                .wrapping_add(if measure == "intensity" { 0 } else { 1 });
            let post = at(S07, estimate_system(cfg, &y, seed))?;
            let tables = at(
                S07,
                fmres_core::dynamic_connectedness(&post, cfg.gfevd_horizon, &cfg.markets),
            )?;
            let con_dates: Vec<String> = dates[cfg.lags..].to_vec();
            at(
                S07,
                ctx.emit(
                    S07,
                    &format!("connect_dynamic_{measure}.csv"),
                    &dynamic_csv(&tables, &con_dates),
                ),
            )?;
            at(
                S07,
                ctx.emit(S07, &format!("npdc_{measure}.csv"), &npdc_csv(&tables, &con_dates)),
            )?;
            let static_table = at(S07, fmres_core::static_connectedness(&tables))?;
            at(
                S07,
                ctx.emit(
                    S07,
                    &format!("connect_static_{measure}.csv"),
                    &static_table_csv(&static_table),
                ),
            )?;
        }
    }

    // 08: regress every market's intensity index and every mediator on
    // the uncertainty series over the effective sample.
    let cpu_name = cfg.cpu.as_deref().expect("preflight checked the cpu role");
    let cpu = at(S08, panel.column(cpu_name))?[cfg.lags..].to_vec();
    let outcome_series: Vec<(&str, Vec<f64>)> = indices
        .iter()
        .map(|(name, s)| (name.as_str(), s.intensity.clone()))
        .collect();
    let outcomes: Vec<(&str, &[f64])> = outcome_series
        .iter()
        .map(|(n, v)| (*n, v.as_slice()))
        .collect();
    let mediator_series: Vec<(&str, Vec<f64>)> = cfg
        .mediators
        .iter()
        .map(|name| {
            Ok((name.as_str(), at(S08, panel.column(name))?[cfg.lags..].to_vec()))
        })
        .collect::<StageResult<_>>()?;
    let mediators: Vec<(&str, &[f64])> = mediator_series
        .iter()
        .map(|(n, v)| (*n, v.as_slice()))
        .collect();
    let report = at(S08, fmres_core::mediation_two_step(&cpu, &outcomes, &mediators))?;
    at(S08, ctx.emit(S08, "mediation.csv", &report.to_csv()))?;

    Ok(())
}
