//! Augmented Dickey-Fuller unit-root test.
//!
//! The test regression is
//!
//! ```text
//! dy[t] = c (+ d*t) + rho * y[t-1] + g1*dy[t-1] + ... + gp*dy[t-p] + e[t]
//! ```
//!
//! with the statistic being the t-ratio on `rho`. The augmentation lag is
//! chosen by minimum AIC over `0..=max_lag` on a common estimation sample
//! (all candidates start at `max_lag`, so their likelihoods are comparable),
//! then the reported regression is refit on the full sample available at the
//! chosen lag. Critical values come from the MacKinnon (2010) response
//! surface for a single series.

use crate::error::{Error, Result};
use crate::linalg::lstsq;
use nalgebra::{DMatrix, DVector};

/// Response-surface coefficients: cv = b0 + b1/T + b2/T^2 + b3/T^3,
/// rows ordered 1%, 5%, 10%. Intercept-only case.
const TAU_C: [[f64; 4]; 3] = [
    [-3.43035, -6.5393, -16.786, -79.433],
    [-2.86154, -2.8903, -4.234, -40.040],
    [-2.56677, -1.5384, -2.809, 0.0],
];

/// Intercept-and-trend case.
const TAU_CT: [[f64; 4]; 3] = [
    [-3.95877, -9.0531, -28.428, -134.392],
    [-3.41049, -4.3904, -9.036, -45.374],
    [-3.12705, -2.5856, -3.925, -22.380],
];

#[derive(Clone, Copy, Debug)]
pub struct AdfConfig {
    /// Include a linear trend in the test regression.
    pub trend: bool,
    /// Largest augmentation lag the AIC search may pick.
    pub max_lag: usize,
}

impl Default for AdfConfig {
    fn default() -> Self {
        AdfConfig {
            trend: false,
            max_lag: 12,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdfResult {
    /// t-ratio on the lagged level.
    pub statistic: f64,
    /// AIC-chosen augmentation lag.
    pub lag: usize,
    /// Observations in the reported regression.
    pub nobs: usize,
    /// Critical values at the 1%, 5% and 10% levels.
    pub critical_values: [f64; 3],
    /// `reject[i]` is `statistic < critical_values[i]`.
    pub reject: [bool; 3],
}

/// Largest usable `max_lag` for a series of length `n`, if any.
///
/// Two constraints: the documented minimum `n > max_lag + 10`, and enough
/// rows in the common AIC sample to fit the widest candidate regression
/// with 10 residual degrees of freedom.
pub fn feasible_max_lag(n: usize, requested: usize, trend: bool) -> Option<usize> {
    let extra = if trend { 1 } else { 0 };
    (0..=requested)
        .rev()
        .find(|&p| n > p + 10 && n - 1 - p >= p + 2 + extra + 10)
}

pub fn adf_test(series: &[f64], config: &AdfConfig) -> Result<AdfResult> {
    let n = series.len();
    if n <= config.max_lag + 10 {
        return Err(Error::invalid(format!(
            "series of length {n} is too short for an ADF test with max_lag {}",
            config.max_lag
        )));
    }
    let extra = if config.trend { 1 } else { 0 };
    if n - 1 - config.max_lag < config.max_lag + 2 + extra + 10 {
        return Err(Error::invalid(format!(
            "series of length {n} leaves too few degrees of freedom for max_lag {}",
            config.max_lag
        )));
    }
    if let Some(bad) = series.iter().find(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("non-finite value {bad} in series")));
    }

    // dy[i] = y[i+1] - y[i]; row i of the regression explains dy[i] with
    // level y[i] and lagged differences dy[i-1..i-p].
    let dy: Vec<f64> = series.windows(2).map(|w| w[1] - w[0]).collect();

    let fit_at = |p: usize, start: usize| -> Result<(crate::linalg::Lstsq, usize, usize)> {
        let rows = dy.len() - start;
        let ncoef = 2 + extra + p;
        let mut x = DMatrix::zeros(rows, ncoef);
        let mut y = DVector::zeros(rows);
        for (r, i) in (start..dy.len()).enumerate() {
            y[r] = dy[i];
            x[(r, 0)] = 1.0;
            if config.trend {
                x[(r, 1)] = (i + 1) as f64;
            }
            x[(r, 1 + extra)] = series[i];
            for l in 1..=p {
                x[(r, 1 + extra + l)] = dy[i - l];
            }
        }
        Ok((lstsq(&x, &y)?, rows, ncoef))
    };

    // Lag selection on the common sample.
    let mut best: Option<(f64, usize)> = None;
    for p in 0..=config.max_lag {
        let (fit, rows, ncoef) = fit_at(p, config.max_lag)?;
        let rows_f = rows as f64;
        let sigma2 = (fit.ssr / rows_f).max(f64::MIN_POSITIVE);
        let aic = rows_f * sigma2.ln() + 2.0 * ncoef as f64;
        if best.map_or(true, |(b, _)| aic < b) {
            best = Some((aic, p));
        }
    }
    let lag = best.expect("at least one candidate lag").1;

    // Reported regression on the full sample available at the chosen lag.
    let (fit, rows, ncoef) = fit_at(lag, lag)?;
    let level_idx = 1 + extra;
    let dof = rows - ncoef;
    if dof == 0 {
        return Err(Error::invalid("no residual degrees of freedom"));
    }
    let s2 = fit.ssr / dof as f64;
    let se = (s2 * fit.xtx_inv[(level_idx, level_idx)]).sqrt();
    if se == 0.0 {
        return Err(Error::numerical("adf", "zero standard error on the level"));
    }
    let statistic = fit.coef[level_idx] / se;

    let critical_values = critical_values(config.trend, rows);
    let reject = [
        statistic < critical_values[0],
        statistic < critical_values[1],
        statistic < critical_values[2],
    ];
    Ok(AdfResult {
        statistic,
        lag,
        nobs: rows,
        critical_values,
        reject,
    })
}

/// MacKinnon (2010) response-surface critical values at 1%, 5%, 10%.
pub fn critical_values(trend: bool, nobs: usize) -> [f64; 3] {
    let table = if trend { &TAU_CT } else { &TAU_C };
    let t = nobs as f64;
    let mut out = [0.0; 3];
    for (i, b) in table.iter().enumerate() {
        out[i] = b[0] + b[1] / t + b[2] / (t * t) + b[3] / (t * t * t);
    }
    out
}
