//! Time-varying impulse responses from the posterior-mean parameter paths.
//!
//! At each date the estimated lag matrices define a moving-average
//! recursion `Psi_0 = I`, `Psi_h = sum_{i<=min(h,p)} B_i Psi_{h-i}`, and the
//! response at horizon `n >= 1` to a structural shock in variable `j` is
//! `Psi_{n-1} A_t^{-1} diag(sigma) e_j` times the shock magnitude. The
//! shock size `sigma` is either the date's own volatility or its average
//! over the sample.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::tvpvar::TvpVarPosterior;

/// Which volatility enters the shock vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShockScale {
    /// The structural standard deviations averaged over the whole sample
    /// (so only coefficient variation moves the responses).
    Averaged,
    /// Each date's own structural standard deviations.
    TimeVarying,
}

/// Responses for every date, horizon, responding variable, and shocked
/// variable, stored flat as `[t][n-1][i][j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct IrfSurface {
    pub k: usize,
    pub t_len: usize,
    /// Number of horizons; responses run `n = 1..=horizon` with `n = 1` the
    /// impact period.
    pub horizon: usize,
    pub magnitude: f64,
    pub scale: ShockScale,
    values: Vec<f64>,
}

impl IrfSurface {
    /// Response of variable `i` to a shock in variable `j`, `n` periods
    /// after impact (`n = 1` is the impact itself).
    pub fn response(&self, t: usize, n: usize, i: usize, j: usize) -> f64 {
        debug_assert!((1..=self.horizon).contains(&n));
        self.values[((t * self.horizon + (n - 1)) * self.k + i) * self.k + j]
    }

    /// The full horizon path of variable `i`'s response to a shock in `j`
    /// at date `t`.
    pub fn path(&self, t: usize, i: usize, j: usize) -> Vec<f64> {
        (1..=self.horizon)
            .map(|n| self.response(t, n, i, j))
            .collect()
    }
}

/// Compute the response surface from a posterior.
pub fn tv_irf(
    post: &TvpVarPosterior,
    horizon: usize,
    magnitude: f64,
    scale: ShockScale,
) -> Result<IrfSurface> {
    if horizon == 0 {
        return Err(Error::invalid("impulse-response horizon must be at least 1"));
    }
    if !magnitude.is_finite() || magnitude == 0.0 {
        return Err(Error::invalid("shock magnitude must be finite and nonzero"));
    }
    let k = post.k;
    let t_len = post.t_len();
    let averaged = post.averaged_sigma();
    let mut values = vec![0.0; t_len * horizon * k * k];
    for t in 0..t_len {
        let a = post.a_matrix_at(t);
        let a_inv = crate::tvpvar::invert_unit_lower(&a);
        let sigma = match scale {
            ShockScale::Averaged => averaged.clone(),
            ShockScale::TimeVarying => post.sigma_at(t),
        };
        // Impact matrix: column j is the period-1 response to shock j.
        let mut impact = a_inv;
        for j in 0..k {
            let s = sigma[j] * magnitude;
            for i in 0..k {
                impact[(i, j)] *= s;
            }
        }
        let (_, b_mats) = post.coeff_at(t);
        // Walk the moving-average recursion, keeping only the last p terms.
        let mut psis: Vec<DMatrix<f64>> = vec![DMatrix::identity(k, k)];
        let mut response = impact.clone();
        for n in 1..=horizon {
            if n > 1 {
                let h = n - 1;
                let mut psi = DMatrix::zeros(k, k);
                for (idx, b) in b_mats.iter().enumerate() {
                    let lag = idx + 1;
                    if lag <= h {
                        psi += b * &psis[h - lag];
                    }
                }
                response = &psi * &impact;
                psis.push(psi);
            }
            let base = (t * horizon + (n - 1)) * k * k;
            for i in 0..k {
                for j in 0..k {
                    values[base + i * k + j] = response[(i, j)];
                }
            }
        }
    }
    Ok(IrfSurface {
        k,
        t_len,
        horizon,
        magnitude,
        scale,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tvpvar::TvpVarPosterior;
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;

    fn univariate_ar(coef: f64, t: usize) -> TvpVarPosterior {
        TvpVarPosterior::from_mean_paths(
            1,
            1,
            vec![DVector::from_vec(vec![0.0, coef]); t],
            vec![DVector::zeros(0); t],
            vec![DVector::from_vec(vec![0.0]); t],
        )
        .unwrap()
    }

    #[test]
    fn univariate_geometric_decay_is_exact() {
        let post = univariate_ar(0.5, 3);
        let surf = tv_irf(&post, 10, 1.0, ShockScale::Averaged).unwrap();
        for t in 0..3 {
            for n in 1..=10 {
                assert_abs_diff_eq!(
                    surf.response(t, n, 0, 0),
                    0.5f64.powi(n as i32 - 1),
                    epsilon = 1e-14
                );
            }
        }
    }

    #[test]
    fn impact_matrix_reflects_contemporaneous_structure() {
        // A = [[1,0],[-0.8,1]], sigma = (1,2), no dynamics: period-1
        // responses are A^{-1} diag(sigma) = [[1,0],[0.8,2]], and nothing
        // survives to period 2.
        let t = 2;
        let post = TvpVarPosterior::from_mean_paths(
            2,
            1,
            vec![DVector::zeros(6); t],
            vec![DVector::from_vec(vec![-0.8]); t],
            vec![DVector::from_vec(vec![0.0, 4.0f64.ln()]); t],
        )
        .unwrap();
        let surf = tv_irf(&post, 4, 1.0, ShockScale::Averaged).unwrap();
        assert_abs_diff_eq!(surf.response(0, 1, 0, 0), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(surf.response(0, 1, 1, 0), 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(surf.response(0, 1, 0, 1), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(surf.response(0, 1, 1, 1), 2.0, epsilon = 1e-12);
        for n in 2..=4 {
            for i in 0..2 {
                for j in 0..2 {
                    assert_abs_diff_eq!(surf.response(0, n, i, j), 0.0, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn two_lag_recursion_matches_hand_values() {
        // y_t = 0.5 y_{t-1} + 0.25 y_{t-2} + e: Psi = 1, 0.5, 0.5, 0.375.
        let t = 1;
        let post = TvpVarPosterior::from_mean_paths(
            1,
            2,
            vec![DVector::from_vec(vec![0.0, 0.5, 0.25]); t],
            vec![DVector::zeros(0); t],
            vec![DVector::from_vec(vec![0.0]); t],
        )
        .unwrap();
        let surf = tv_irf(&post, 4, 1.0, ShockScale::Averaged).unwrap();
        let expect = [1.0, 0.5, 0.5, 0.375];
        for (n, want) in expect.iter().enumerate() {
            assert_abs_diff_eq!(surf.response(0, n + 1, 0, 0), *want, epsilon = 1e-14);
        }
    }

    #[test]
    fn doubling_magnitude_doubles_every_response_exactly() {
        let post = univariate_ar(0.6, 4);
        let one = tv_irf(&post, 12, 1.0, ShockScale::Averaged).unwrap();
        let two = tv_irf(&post, 12, 2.0, ShockScale::Averaged).unwrap();
        for t in 0..4 {
            for n in 1..=12 {
                assert_eq!(two.response(t, n, 0, 0), 2.0 * one.response(t, n, 0, 0));
            }
        }
    }

    #[test]
    fn averaged_scale_freezes_volatility_across_dates() {
        // Volatility rises over the sample; with averaged scaling and
        // constant coefficients every date has the same response, with
        // date-specific scaling the impact follows exp(h/2).
        let h_path = vec![
            DVector::from_vec(vec![0.0]),
            DVector::from_vec(vec![2.0f64.ln() * 2.0]),
        ];
        let post = TvpVarPosterior::from_mean_paths(
            1,
            1,
            vec![DVector::from_vec(vec![0.0, 0.5]); 2],
            vec![DVector::zeros(0); 2],
            h_path,
        )
        .unwrap();
        let avg = tv_irf(&post, 3, 1.0, ShockScale::Averaged).unwrap();
        assert_abs_diff_eq!(avg.response(0, 1, 0, 0), 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(avg.response(1, 1, 0, 0), 1.5, epsilon = 1e-12);
        let tv = tv_irf(&post, 3, 1.0, ShockScale::TimeVarying).unwrap();
        assert_abs_diff_eq!(tv.response(0, 1, 0, 0), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(tv.response(1, 1, 0, 0), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let post = univariate_ar(0.5, 2);
        assert!(tv_irf(&post, 0, 1.0, ShockScale::Averaged).is_err());
        assert!(tv_irf(&post, 5, 0.0, ShockScale::Averaged).is_err());
        assert!(tv_irf(&post, 5, f64::NAN, ShockScale::Averaged).is_err());
    }
}
