//! Per-series descriptive statistics for the preprocessing stage.

use crate::adf::{adf_test, feasible_max_lag, AdfConfig};
use crate::error::{Error, Result};
use crate::panel::TimeSeriesPanel;
use rayon::prelude::*;

/// Unit-root test fields carried inside [`DescriptiveStats`]. `None` on the
/// parent when the series is constant or too short to run the test at any
/// lag.
#[derive(Clone, Debug, PartialEq)]
pub struct AdfSummary {
    pub statistic: f64,
    pub lag: usize,
    pub reject_1pct: bool,
    pub reject_5pct: bool,
    pub reject_10pct: bool,
}

/// Moments plus a default unit-root test.
///
/// `sd` uses the sample (n-1) divisor. `skewness` and `kurtosis` are the
/// unadjusted standardized third and fourth central moments (n divisor), and
/// `kurtosis` is *excess* kurtosis: a normal sample centers on 0, not 3.
/// A constant series reports skewness and kurtosis of 0.
#[derive(Clone, Debug, PartialEq)]
pub struct DescriptiveStats {
    pub mean: f64,
    pub sd: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub adf: Option<AdfSummary>,
}

pub fn describe(series: &[f64]) -> Result<DescriptiveStats> {
    if series.len() < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 observations to describe, got {}",
            series.len()
        )));
    }
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let m2 = series.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let m3 = series.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / n;
    let m4 = series.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
    let sd = (series.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let (skewness, kurtosis) = if m2 > 0.0 {
        (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
    } else {
        (0.0, 0.0)
    };

    let config = AdfConfig::default();
    // A constant series has no variation to regress on, so the unit-root
    // test is skipped alongside the too-short case.
    let feasible = if m2 > 0.0 {
        feasible_max_lag(series.len(), config.max_lag, config.trend)
    } else {
        None
    };
    let adf = match feasible {
        Some(max_lag) => {
            let r = adf_test(series, &AdfConfig { max_lag, ..config })?;
            Some(AdfSummary {
                statistic: r.statistic,
                lag: r.lag,
                reject_1pct: r.reject[0],
                reject_5pct: r.reject[1],
                reject_10pct: r.reject[2],
            })
        }
        None => None,
    };

    Ok(DescriptiveStats {
        mean,
        sd,
        skewness,
        kurtosis,
        adf,
    })
}

/// Describe every column, in panel column order.
pub fn describe_panel(panel: &TimeSeriesPanel) -> Result<Vec<(String, DescriptiveStats)>> {
    (0..panel.width())
        .into_par_iter()
        .map(|j| {
            let name = panel.columns()[j].clone();
            let stats = describe(panel.column_by_index(j))
                .map_err(|e| Error::invalid(format!("column '{name}': {e}")))?;
            Ok((name, stats))
        })
        .collect()
}
