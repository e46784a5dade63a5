//! Posterior summary rows for the innovation standard deviations: moments,
//! equal-tailed 95% credible intervals, and convergence diagnostics.

use crate::linalg::quantile_sorted;
use crate::tvpvar::diagnostics::{geweke_cd, inefficiency_factor};
use crate::tvpvar::TvpVarPosterior;

/// One summarized chain.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticsRow {
    pub parameter: String,
    pub mean: f64,
    pub sd: f64,
    /// 2.5th percentile of the draws.
    pub lower: f64,
    /// 97.5th percentile of the draws.
    pub upper: f64,
    pub geweke_cd: f64,
    pub inefficiency: f64,
}

/// Summarize one scalar chain.
pub fn summarize_chain(parameter: &str, draws: &[f64]) -> DiagnosticsRow {
    let n = draws.len();
    let mean = if n == 0 {
        0.0
    } else {
        draws.iter().sum::<f64>() / n as f64
    };
    let sd = if n < 2 {
        0.0
    } else {
        (draws.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
    };
    let mut sorted = draws.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let (lower, upper) = if sorted.is_empty() {
        (0.0, 0.0)
    } else {
        (
            quantile_sorted(&sorted, 0.025),
            quantile_sorted(&sorted, 0.975),
        )
    };
    DiagnosticsRow {
        parameter: parameter.to_string(),
        mean,
        sd,
        lower,
        upper,
        geweke_cd: geweke_cd(draws),
        inefficiency: inefficiency_factor(draws),
    }
}

/// Summarize the innovation standard deviations, block by block
/// (coefficients, then impacts, then volatilities; coordinates in ascending
/// order). `per_block` caps how many leading coordinates of each block are
/// reported; `None` reports all of them.
pub fn posterior_summary(
    post: &TvpVarPosterior,
    per_block: Option<usize>,
) -> Vec<DiagnosticsRow> {
    let cap = per_block.unwrap_or(usize::MAX);
    let mut rows = Vec::new();
    let blocks: [(&str, &crate::tvpvar::ChainDraws); 3] = [
        ("sigma_beta", &post.sigma_beta),
        ("sigma_alpha", &post.sigma_alpha),
        ("sigma_h", &post.sigma_h),
    ];
    for (prefix, chain) in blocks {
        for i in 0..chain.dim().min(cap) {
            let draws = chain.chain(i);
            rows.push(summarize_chain(&format!("{prefix}_{}", i + 1), &draws));
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tvpvar::{ChainDraws, PathDraws, TvpVarPosterior};
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;

    fn toy_posterior() -> TvpVarPosterior {
        // k = 1, lags = 1, two retained draws; only the chains matter here.
        let t = 2;
        let beta = PathDraws::from_raw(t, 2, vec![0.0; 8]).unwrap();
        let alpha = PathDraws::from_raw(t, 0, vec![]).unwrap();
        let h = PathDraws::from_raw(t, 1, vec![0.0; 4]).unwrap();
        let sigma_beta = ChainDraws::from_raw(2, vec![1.0, 10.0, 3.0, 20.0]).unwrap();
        let sigma_alpha = ChainDraws::from_raw(0, vec![]).unwrap();
        let sigma_h = ChainDraws::from_raw(1, vec![5.0, 7.0]).unwrap();
        TvpVarPosterior {
            k: 1,
            lags: 1,
            beta,
            alpha,
            h,
            sigma_beta,
            sigma_alpha,
            sigma_h,
            beta_mean: vec![DVector::zeros(2); t],
            alpha_mean: vec![DVector::zeros(0); t],
            h_mean: vec![DVector::zeros(1); t],
        }
    }

    #[test]
    fn chain_moments_and_interval_are_exact() {
        // Draws 1..=5: mean 3, sd sqrt(2.5); percentiles by linear
        // interpolation: 2.5th = 1 + 0.1 * 1 = 1.1, 97.5th = 4.9.
        let row = summarize_chain("x", &[5.0, 3.0, 1.0, 2.0, 4.0]);
        assert_abs_diff_eq!(row.mean, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(row.sd, 2.5f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(row.lower, 1.1, epsilon = 1e-12);
        assert_abs_diff_eq!(row.upper, 4.9, epsilon = 1e-12);
    }

    #[test]
    fn short_or_constant_chains_use_conventions() {
        let row = summarize_chain("x", &[4.0]);
        assert_eq!(row.sd, 0.0);
        assert_eq!(row.lower, 4.0);
        assert_eq!(row.upper, 4.0);
        assert_eq!(row.geweke_cd, 0.0);
        assert_eq!(row.inefficiency, 1.0);
    }

    #[test]
    fn blocks_come_out_in_order_with_stable_names() {
        let post = toy_posterior();
        let rows = posterior_summary(&post, None);
        let names: Vec<&str> = rows.iter().map(|r| r.parameter.as_str()).collect();
        assert_eq!(names, vec!["sigma_beta_1", "sigma_beta_2", "sigma_h_1"]);
        assert_abs_diff_eq!(rows[0].mean, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rows[1].mean, 15.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rows[2].mean, 6.0, epsilon = 1e-12);
    }

    #[test]
    fn per_block_cap_limits_rows() {
        let post = toy_posterior();
        let rows = posterior_summary(&post, Some(1));
        let names: Vec<&str> = rows.iter().map(|r| r.parameter.as_str()).collect();
        assert_eq!(names, vec!["sigma_beta_1", "sigma_h_1"]);
    }
}
