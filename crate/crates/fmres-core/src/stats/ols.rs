//! Ordinary least squares with an automatic intercept.

use crate::error::{Error, Result};
use crate::linalg::lstsq;
use nalgebra::{DMatrix, DVector};

/// A fitted regression. `coefficients[0]` is the intercept, followed by one
/// slope per regressor in input order; `t_values` line up with it.
#[derive(Clone, Debug, PartialEq)]
pub struct OlsFit {
    pub coefficients: Vec<f64>,
    pub t_values: Vec<f64>,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    pub residuals: Vec<f64>,
    pub nobs: usize,
}

/// Regress `y` on the given regressors plus an intercept.
///
/// t-values use the unbiased residual variance `SSR / (n - p)`. R-squared is
/// measured against the intercept-only model; a constant response reports
/// `r_squared = 0` (and `adj_r_squared = 0`) by convention. A t-value is set
/// to 0 where both the coefficient and its standard error vanish.
pub fn ols(y: &[f64], regressors: &[&[f64]]) -> Result<OlsFit> {
    let n = y.len();
    let p = regressors.len() + 1;
    if n < p + 1 {
        return Err(Error::invalid(format!(
            "{n} observations cannot support {p} coefficients with a residual degree of freedom"
        )));
    }
    for (j, x) in regressors.iter().enumerate() {
        if x.len() != n {
            return Err(Error::dimension(format!(
                "regressor {j} has {} observations, response has {n}",
                x.len()
            )));
        }
    }
    let mut design = DMatrix::zeros(n, p);
    for i in 0..n {
        design[(i, 0)] = 1.0;
        for (j, x) in regressors.iter().enumerate() {
            design[(i, j + 1)] = x[i];
        }
    }
    let yv = DVector::from_column_slice(y);
    let fit = lstsq(&design, &yv)?;

    let dof = n - p;
    let s2 = fit.ssr / dof as f64;
    let t_values: Vec<f64> = (0..p)
        .map(|j| {
            let se = (s2 * fit.xtx_inv[(j, j)]).sqrt();
            let c = fit.coef[j];
            if se == 0.0 && c == 0.0 {
                0.0
            } else {
                c / se
            }
        })
        .collect();

    let mean_y = y.iter().sum::<f64>() / n as f64;
    let tss: f64 = y.iter().map(|v| (v - mean_y).powi(2)).sum();
    let (r_squared, adj_r_squared) = if tss > 0.0 {
        let r2 = 1.0 - fit.ssr / tss;
        let adj = 1.0 - (1.0 - r2) * (n as f64 - 1.0) / dof as f64;
        (r2.clamp(0.0, 1.0), adj)
    } else {
        (0.0, 0.0)
    };

    Ok(OlsFit {
        coefficients: fit.coef.iter().cloned().collect(),
        t_values,
        r_squared,
        adj_r_squared,
        residuals: fit.residuals.iter().cloned().collect(),
        nobs: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn exact_line_is_recovered() {
        let x: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let fit = ols(&y, &[&x]).unwrap();
        assert_abs_diff_eq!(fit.coefficients[0], 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(fit.coefficients[1], 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(fit.r_squared, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn constant_response_gives_zero_slope_and_zero_r2() {
        let x: Vec<f64> = (0..15).map(|i| i as f64).collect();
        let y = vec![4.0; 15];
        let fit = ols(&y, &[&x]).unwrap();
        assert_abs_diff_eq!(fit.coefficients[0], 4.0, epsilon = 1e-10);
        assert_abs_diff_eq!(fit.coefficients[1], 0.0, epsilon = 1e-10);
        assert_eq!(fit.r_squared, 0.0);
        assert_eq!(fit.adj_r_squared, 0.0);
    }

    /// Closed-form simple-regression oracle: slope = Sxy/Sxx, plus the
    /// textbook standard errors, computed without any matrix algebra.
    fn simple_regression_oracle(y: &[f64], x: &[f64]) -> (f64, f64, f64, f64) {
        let n = y.len() as f64;
        let mx = x.iter().sum::<f64>() / n;
        let my = y.iter().sum::<f64>() / n;
        let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
        let sxy: f64 = x.iter().zip(y).map(|(u, v)| (u - mx) * (v - my)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let ssr: f64 = y
            .iter()
            .zip(x)
            .map(|(v, u)| {
                let r = v - intercept - slope * u;
                r * r
            })
            .sum();
        let s2 = ssr / (n - 2.0);
        let se_slope = (s2 / sxx).sqrt();
        let se_intercept = (s2 * (1.0 / n + mx * mx / sxx)).sqrt();
        (intercept, slope, intercept / se_intercept, slope / se_slope)
    }

    #[test]
    fn matches_closed_form_simple_regression() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..50 {
            let x: Vec<f64> = (0..40).map(|_| StandardNormal.sample(&mut rng)).collect();
            let y: Vec<f64> = x
                .iter()
                .map(|v| {
                    let e: f64 = StandardNormal.sample(&mut rng);
                    0.7 - 1.3 * v + 0.5 * e
                })
                .collect();
            let fit = ols(&y, &[&x]).unwrap();
            let (b0, b1, t0, t1) = simple_regression_oracle(&y, &x);
            assert_abs_diff_eq!(fit.coefficients[0], b0, epsilon = 1e-10);
            assert_abs_diff_eq!(fit.coefficients[1], b1, epsilon = 1e-10);
            assert_abs_diff_eq!(fit.t_values[0], t0, epsilon = 1e-8);
            assert_abs_diff_eq!(fit.t_values[1], t1, epsilon = 1e-8);
        }
    }

    #[test]
    fn collinear_design_is_an_error() {
        let x1: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let x2: Vec<f64> = x1.iter().map(|v| 2.0 * v).collect();
        let y: Vec<f64> = (0..10).map(|i| (i * i) as f64).collect();
        assert!(ols(&y, &[&x1, &x2]).is_err());
        let constant = vec![5.0; 10];
        assert!(ols(&y, &[&constant]).is_err());
    }

    proptest! {
        #[test]
        fn residuals_are_orthogonal_and_r2_in_range(
            seed in 0u64..500,
            n in 10usize..60,
            k in 1usize..4,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let xs: Vec<Vec<f64>> = (0..k)
                .map(|_| (0..n).map(|_| StandardNormal.sample(&mut rng)).collect())
                .collect();
            let y: Vec<f64> = (0..n)
                .map(|i| {
                    let e: f64 = StandardNormal.sample(&mut rng);
                    xs.iter().map(|x| x[i]).sum::<f64>() + e
                })
                .collect();
            let refs: Vec<&[f64]> = xs.iter().map(|v| v.as_slice()).collect();
            let fit = ols(&y, &refs).unwrap();
            prop_assert!(fit.r_squared >= 0.0 && fit.r_squared <= 1.0);
            prop_assert!(fit.adj_r_squared <= fit.r_squared + 1e-12);
            let rnorm = fit.residuals.iter().map(|v| v * v).sum::<f64>().sqrt();
            for x in &xs {
                let dot: f64 = fit.residuals.iter().zip(x).map(|(r, v)| r * v).sum();
                let xnorm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                prop_assert!(dot.abs() <= 1e-8 * (rnorm * xnorm).max(1e-30));
            }
            let ones_dot: f64 = fit.residuals.iter().sum();
            prop_assert!(ones_dot.abs() <= 1e-8 * (rnorm * (n as f64).sqrt()).max(1e-30));
        }
    }
}
