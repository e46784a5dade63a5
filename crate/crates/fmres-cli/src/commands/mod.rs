//! Subcommand implementations and the renderers they share.

pub mod connect;
pub mod demo;
pub mod describe;
pub mod estimate;
pub mod irf;
pub mod mediate;
pub mod pipeline;
pub mod plotdata;
pub mod resilience;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use fmres_core::{
    ConnectednessTable, DescriptiveStats, DiagnosticsRow, Error, IrfSurface, ResilienceSeries,
    Result, TimeSeriesPanel, TvpVarPosterior,
};
use nalgebra::DVector;
use sha2::{Digest, Sha256};

use crate::cli::{Cli, Command};
use crate::config::{hex_string, RunConfig};
use crate::lock::OutputLock;
use crate::output::fixed6;

/// Resolve the configuration, claim the output directory, and run the
/// requested subcommand.
pub fn dispatch(cli: Cli) -> Result<()> {
    let cfg = RunConfig::load(&cli.global)?;
    cfg.install_thread_pool();
    let _lock = OutputLock::acquire(&cfg.out)?;
    match cli.command {
        Command::Describe(args) => describe::run(&cfg, &args),
        Command::Estimate(args) => estimate::run(&cfg, &args),
        Command::Irf(args) => irf::run(&cfg, &args),
        Command::Resilience(args) => resilience::run(&cfg, &args),
        Command::Connect(args) => connect::run(&cfg, &args),
        Command::Mediate(args) => mediate::run(&cfg, &args),
        Command::Pipeline(args) => pipeline::run(&cfg, &args),
        Command::Plotdata(args) => plotdata::run(&cfg, &args),
        Command::Demo(args) => demo::run(&cfg, &args),
    }
}

/// Load the input panel and hash its raw bytes in one pass, so the
/// config hash names exactly the content that was parsed.
pub(crate) fn load_input(cfg: &RunConfig) -> Result<(TimeSeriesPanel, String)> {
    let path = cfg.require_input()?;
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let digest = hex_string(&hasher.finalize());
    let text = String::from_utf8(bytes)
        .map_err(|_| Error::invalid(format!("{}: not valid UTF-8", path.display())))?;
    let panel = fmres_core::panel::parse_panel(&text)?;
    Ok((panel, digest))
}

/// Every named column must exist; list all the missing ones at once.
pub(crate) fn check_columns(panel: &TimeSeriesPanel, names: &[&str]) -> Result<()> {
    let missing: Vec<&str> = names
        .iter()
        .filter(|n| !panel.columns().iter().any(|c| c == *n))
        .copied()
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "input is missing configured column(s): {}",
            missing.join(", ")
        )))
    }
}

/// Log-difference the configured columns, if any.
pub(crate) fn preprocess(panel: &TimeSeriesPanel, logdiff: &[String]) -> Result<TimeSeriesPanel> {
    if logdiff.is_empty() {
        return Ok(panel.clone());
    }
    let names: Vec<&str> = logdiff.iter().map(String::as_str).collect();
    check_columns(panel, &names)?;
    panel.apply_log_diff(&names)
}

/// Stack the named columns into one observation vector per date.
pub(crate) fn panel_rows(panel: &TimeSeriesPanel, names: &[&str]) -> Result<Vec<DVector<f64>>> {
    check_columns(panel, names)?;
    let cols: Vec<&[f64]> = names
        .iter()
        .map(|n| panel.column(n))
        .collect::<Result<_>>()?;
    Ok((0..panel.len())
        .map(|t| DVector::from_iterator(cols.len(), cols.iter().map(|c| c[t])))
        .collect())
}

fn stars_for(adf: &fmres_core::AdfSummary) -> &'static str {
    if adf.reject_1pct {
        "***"
    } else if adf.reject_5pct {
        "**"
    } else if adf.reject_10pct {
        "*"
    } else {
        ""
    }
}

/// `series,mean,sd,skewness,kurtosis,adf,lag` rows; the adf cell carries
/// rejection stars, and both test cells stay empty when the test could
/// not run.
pub(crate) fn describe_csv(stats: &[(String, DescriptiveStats)]) -> String {
    let mut out = String::from("series,mean,sd,skewness,kurtosis,adf,lag\n");
    for (name, s) in stats {
        let (adf_cell, lag_cell) = match &s.adf {
            Some(a) => (format!("{}{}", fixed6(a.statistic), stars_for(a)), a.lag.to_string()),
            None => (String::new(), String::new()),
        };
        let _ = writeln!(
            out,
            "{name},{},{},{},{},{adf_cell},{lag_cell}",
            fixed6(s.mean),
            fixed6(s.sd),
            fixed6(s.skewness),
            fixed6(s.kurtosis),
        );
    }
    out
}

/// Posterior summary rows as a fixed-format table.
pub(crate) fn summary_csv(rows: &[DiagnosticsRow]) -> String {
    let mut out = String::from("parameter,mean,sd,lower,upper,cd,inefficiency\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.parameter,
            fixed6(r.mean),
            fixed6(r.sd),
            fixed6(r.lower),
            fixed6(r.upper),
            fixed6(r.geweke_cd),
            fixed6(r.inefficiency),
        );
    }
    out
}

/// Long-format response surface: `date,horizon,response_var,shock_var,value`.
pub(crate) fn irf_csv(surface: &IrfSurface, dates: &[String], names: &[String]) -> String {
    let mut out = String::from("date,horizon,response_var,shock_var,value\n");
    for (t, date) in dates.iter().enumerate() {
        for n in 1..=surface.horizon {
            for (i, resp) in names.iter().enumerate() {
                for (j, shock) in names.iter().enumerate() {
                    let _ = writeln!(out, "{date},{n},{resp},{shock},{}", surface.response(t, n, i, j));
                }
            }
        }
    }
    out
}

/// Resilience index series: `date,market,shock,intensity,duration,degenerate`.
pub(crate) fn resilience_csv(
    series: &ResilienceSeries,
    dates: &[String],
    market: &str,
    shock: &str,
) -> String {
    let mut out = String::from("date,market,shock,intensity,duration,degenerate\n");
    for (t, date) in dates.iter().enumerate() {
        let _ = writeln!(
            out,
            "{date},{market},{shock},{},{},{}",
            series.intensity[t], series.duration[t], series.degenerate[t],
        );
    }
    out
}

/// Square spillover table in percent, bordered by the directional sums:
/// one named row per variable with its `From` total, then a final `To`
/// row whose corner cell is the total connectedness index.
pub(crate) fn static_table_csv(table: &ConnectednessTable) -> String {
    let k = table.variables.len();
    let mut out = String::from("series");
    for v in &table.variables {
        let _ = write!(out, ",{v}");
    }
    out.push_str(",From\n");
    for i in 0..k {
        let _ = write!(out, "{}", table.variables[i]);
        for j in 0..k {
            let _ = write!(out, ",{}", fixed6(100.0 * table.shares[(i, j)]));
        }
        let _ = writeln!(out, ",{}", fixed6(table.from_others[i]));
    }
    out.push_str("To");
    for j in 0..k {
        let _ = write!(out, ",{}", fixed6(table.to_others[j]));
    }
    let _ = writeln!(out, ",{}", fixed6(table.tci));
    out
}

/// Date-by-date aggregates in long form: `date,index_type,market,value`,
/// with the system-wide index carried on market `ALL`.
pub(crate) fn dynamic_csv(tables: &[ConnectednessTable], dates: &[String]) -> String {
    let mut out = String::from("date,index_type,market,value\n");
    for (t, date) in dates.iter().enumerate() {
        let table = &tables[t];
        let _ = writeln!(out, "{date},TCI,ALL,{}", table.tci);
        for (m, name) in table.variables.iter().enumerate() {
            let _ = writeln!(out, "{date},FROM,{name},{}", table.from_others[m]);
        }
        for (m, name) in table.variables.iter().enumerate() {
            let _ = writeln!(out, "{date},TO,{name},{}", table.to_others[m]);
        }
        for (m, name) in table.variables.iter().enumerate() {
            let _ = writeln!(out, "{date},NET,{name},{}", table.net[m]);
        }
    }
    out
}

/// Net pairwise directional rows for every ordered pair: `date,from,to,npdc`.
pub(crate) fn npdc_csv(tables: &[ConnectednessTable], dates: &[String]) -> String {
    let mut out = String::from("date,from,to,npdc\n");
    for (t, date) in dates.iter().enumerate() {
        let table = &tables[t];
        let k = table.variables.len();
        for j in 0..k {
            for l in 0..k {
                if j == l {
                    continue;
                }
                let _ = writeln!(
                    out,
                    "{date},{},{},{}",
                    table.variables[j], table.variables[l], table.npdc[(j, l)],
                );
            }
        }
    }
    out
}

/// Month labels for the posterior's effective sample (the panel dates
/// with the first `lags` presample rows dropped).
pub(crate) fn effective_dates(panel: &TimeSeriesPanel, lags: usize) -> Vec<String> {
    panel.dates()[lags..].iter().map(|d| d.to_string()).collect()
}

/// Annotations stored inside a posterior archive so downstream commands
/// can label outputs without the original panel.
pub(crate) fn archive_annotations(
    variables: &[&str],
    dates: &[String],
    cfg: &RunConfig,
) -> BTreeMap<String, String> {
    let mut notes = BTreeMap::new();
    notes.insert("variables".to_string(), variables.join(","));
    notes.insert("dates".to_string(), dates.join(","));
    notes.insert("lags".to_string(), cfg.lags.to_string());
    notes.insert("draws".to_string(), cfg.draws.to_string());
    notes.insert("burn_in".to_string(), cfg.burn_in.to_string());
    notes.insert("thin".to_string(), cfg.thin.to_string());
    notes.insert("seed".to_string(), cfg.seed.to_string());
    notes
}

/// Pull the variable names and date labels back out of archive
/// annotations, with positional fallbacks when a foreign archive lacks
/// them.
pub(crate) fn archive_labels(
    post: &TvpVarPosterior,
    notes: &BTreeMap<String, String>,
) -> (Vec<String>, Vec<String>) {
    let variables: Vec<String> = match notes.get("variables") {
        Some(v) if v.split(',').count() == post.k => {
            v.split(',').map(str::to_string).collect()
        }
        _ => (1..=post.k).map(|i| format!("var{i}")).collect(),
    };
    let t = post.t_len();
    let dates: Vec<String> = match notes.get("dates") {
        Some(d) if d.split(',').count() == t => d.split(',').map(str::to_string).collect(),
        _ => (1..=t).map(|i| i.to_string()).collect(),
    };
    (variables, dates)
}
