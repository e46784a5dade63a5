//! `fmres demo`: generate the bundled synthetic dataset — three market
//! price levels driven by a common volatility proxy, a policy-uncertainty
//! series, and two mediator series — plus a ready-to-run config.

use fmres_core::dates::Month;
use fmres_core::tvpvar::dgp::{simulate_dgp, constant_paths, DgpSpec, PathSpec};
use fmres_core::{Error, Result, TimeSeriesPanel};
use nalgebra::{dmatrix, dvector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::cli::DemoArgs;
use crate::config::RunConfig;
use crate::output::write_artifact;

pub const PANEL: &str = "demo_panel.csv";
pub const CONFIG: &str = "demo.cfg";

/// First demo month; 160 periods then span 2008-01 through 2021-04.
const START_YEAR: i32 = 2008;
const DEFAULT_PERIODS: usize = 160;

pub fn run(cfg: &RunConfig, args: &DemoArgs) -> Result<()> {
    let t = args.periods.unwrap_or(DEFAULT_PERIODS);
    if t < 40 {
        return Err(Error::invalid(format!(
            "demo needs at least 40 periods to be estimable downstream, got {t}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    // Three market return series plus a persistent volatility proxy in one
    // VAR(1); the proxy feeds negatively into every market and the
    // intercepts offset its stationary mean so returns drift gently upward.
    let c = dvector![0.045, 0.030, 0.020, 0.20];
    let b1 = dmatrix![
        0.25, 0.05, 0.00, -0.08;
        0.05, 0.20, 0.05, -0.05;
        0.00, 0.05, 0.15, -0.04;
        0.00, 0.00, 0.00,  0.60
    ];
    let alpha = dvector![0.10, 0.05, 0.10, -0.20, -0.10, 0.05];
    let h0 = dvector![-6.4, -6.6, -6.8, -3.6];
    let (beta, alpha_path, _) = constant_paths(t, &c, &b1, &alpha, &h0);
    let spec = DgpSpec {
        t,
        k: 4,
        lags: 1,
        beta,
        alpha: alpha_path,
        h: PathSpec::RandomWalk { start: h0, sd: 0.08 },
    };
    let sim = simulate_dgp(&spec, &mut rng)?;

    // Returns become price levels so the pipeline's log-difference step has
    // something real to undo.
    let bases = [3000.0, 120.0, 7.0];
    let mut levels: Vec<Vec<f64>> = vec![Vec::with_capacity(t); 3];
    let mut cums = [0.0f64; 3];
    for row in &sim.y {
        for m in 0..3 {
            cums[m] += row[m];
            levels[m].push(bases[m] * cums[m].exp());
        }
    }
    let vol: Vec<f64> = sim.y.iter().map(|row| row[3]).collect();

    // A persistent driver series and two mediators that load on it with
    // opposite signs, so the mediation stage has visible first-stage effects.
    let mut policy = Vec::with_capacity(t);
    let mut credit = Vec::with_capacity(t);
    let mut sentiment = Vec::with_capacity(t);
    let (mut p, mut cr, mut se) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..t {
        let z: f64 = StandardNormal.sample(&mut rng);
        p = 0.7 * p + 0.5 * z;
        let z: f64 = StandardNormal.sample(&mut rng);
        cr = 0.3 * cr + 0.4 * p + 0.3 * z;
        let z: f64 = StandardNormal.sample(&mut rng);
        se = 0.2 * se - 0.3 * p + 0.4 * z;
        policy.push(p);
        credit.push(cr);
        sentiment.push(se);
    }

    let mut dates = Vec::with_capacity(t);
    let mut month = Month::new(START_YEAR, 1)?;
    for _ in 0..t {
        dates.push(month);
        month = month.next();
    }
    let panel = TimeSeriesPanel::from_columns(
        dates,
        vec![
            ("stock".to_string(), levels[0].clone()),
            ("bond".to_string(), levels[1].clone()),
            ("fx".to_string(), levels[2].clone()),
            ("vol".to_string(), vol),
            ("policy".to_string(), policy),
            ("credit".to_string(), credit),
            ("sentiment".to_string(), sentiment),
        ],
    )?;

    let shipped = shipped_config(cfg, &cfg.out.join(PANEL).display().to_string());
    let hash = shipped.config_hash("");
    write_artifact(&cfg.out.join(PANEL), &hash, &panel.to_csv_string())?;
    write_artifact(&cfg.out.join(CONFIG), &hash, &config_text(&shipped))?;
    println!(
        "demo: {t} months x {} series -> {}, {}",
        panel.width(),
        cfg.out.join(PANEL).display(),
        cfg.out.join(CONFIG).display(),
    );
    Ok(())
}

fn shipped_config(cfg: &RunConfig, input: &str) -> RunConfig {
    let mut shipped = RunConfig::default();
    shipped.input = Some(input.into());
    shipped.markets = vec!["stock".into(), "bond".into(), "fx".into()];
    shipped.shock = Some("vol".into());
    shipped.cpu = Some("policy".into());
    shipped.mediators = vec!["credit".into(), "sentiment".into()];
    shipped.logdiff = vec!["stock".into(), "bond".into(), "fx".into()];
    shipped.draws = 2_500;
    shipped.burn_in = 500;
    shipped.seed = cfg.seed;
    shipped
}

fn config_text(cfg: &RunConfig) -> String {
    format!(
        "# configuration for the bundled synthetic dataset\n\
         input = {}\n\
         markets = {}\n\
         shock = {}\n\
         cpu = {}\n\
         mediators = {}\n\
         logdiff = {}\n\
         lags = {}\n\
         draws = {}\n\
         burn_in = {}\n\
         thin = {}\n\
         seed = {}\n\
         irf_horizon = {}\n\
         gfevd_horizon = {}\n\
         shock_scale = averaged\n",
        cfg.input.as_ref().expect("demo config always has an input").display(),
        cfg.markets.join(","),
        cfg.shock.as_deref().unwrap_or(""),
        cfg.cpu.as_deref().unwrap_or(""),
        cfg.mediators.join(","),
        cfg.logdiff.join(","),
        cfg.lags,
        cfg.draws,
        cfg.burn_in,
        cfg.thin,
        cfg.seed,
        cfg.irf_horizon,
        cfg.gfevd_horizon,
    )
}
