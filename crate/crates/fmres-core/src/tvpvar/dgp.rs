//! Synthetic data generation from the time-varying-parameter VAR with
//! stochastic volatility, used by the recovery tests and the demo dataset.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::tvpvar::{alpha_to_a, unstack_beta};

/// How one latent path evolves over the sample.
#[derive(Clone, Debug)]
pub enum PathSpec {
    /// Gaussian random walk started at `start` with per-step innovation
    /// standard deviation `sd` on every coordinate.
    RandomWalk { start: DVector<f64>, sd: f64 },
    /// A fully specified path, one vector per time step.
    Fixed(Vec<DVector<f64>>),
}

impl PathSpec {
    fn realize<R: Rng + ?Sized>(&self, t_len: usize, dim: usize, rng: &mut R) -> Result<Vec<DVector<f64>>> {
        match self {
            PathSpec::RandomWalk { start, sd } => {
                if start.len() != dim {
                    return Err(Error::dimension(format!(
                        "path start has {} entries, expected {dim}",
                        start.len()
                    )));
                }
                let mut path = Vec::with_capacity(t_len);
                let mut cur = start.clone();
                for _ in 0..t_len {
                    path.push(cur.clone());
                    for i in 0..dim {
                        let z: f64 = StandardNormal.sample(rng);
                        cur[i] += sd * z;
                    }
                }
                Ok(path)
            }
            PathSpec::Fixed(path) => {
                if path.len() != t_len {
                    return Err(Error::dimension(format!(
                        "fixed path has {} steps, expected {t_len}",
                        path.len()
                    )));
                }
                for (t, v) in path.iter().enumerate() {
                    if v.len() != dim {
                        return Err(Error::dimension(format!(
                            "fixed path step {t} has {} entries, expected {dim}",
                            v.len()
                        )));
                    }
                }
                Ok(path.clone())
            }
        }
    }
}

/// Full description of a simulated system.
#[derive(Clone, Debug)]
pub struct DgpSpec {
    /// Number of observations to produce.
    pub t: usize,
    /// Number of series.
    pub k: usize,
    /// VAR order.
    pub lags: usize,
    /// Stacked coefficient path (dimension `k * (1 + k * lags)`).
    pub beta: PathSpec,
    /// Contemporaneous-impact path (dimension `k * (k - 1) / 2`).
    pub alpha: PathSpec,
    /// Log-volatility path (dimension `k`).
    pub h: PathSpec,
}

/// A simulated sample together with the latent paths that produced it.
#[derive(Clone, Debug)]
pub struct SimulatedData {
    pub y: Vec<DVector<f64>>,
    pub beta: Vec<DVector<f64>>,
    pub alpha: Vec<DVector<f64>>,
    pub h: Vec<DVector<f64>>,
}

/// Simulate `spec.t` observations. Pre-sample lags are zero vectors.
pub fn simulate_dgp<R: Rng + ?Sized>(spec: &DgpSpec, rng: &mut R) -> Result<SimulatedData> {
    if spec.k == 0 || spec.t == 0 || spec.lags == 0 {
        return Err(Error::invalid(
            "simulation needs at least one series, one observation and one lag",
        ));
    }
    let k = spec.k;
    let dim_beta = k * (1 + k * spec.lags);
    let dim_alpha = k * (k - 1) / 2;
    let beta = spec.beta.realize(spec.t, dim_beta, rng)?;
    let alpha = spec.alpha.realize(spec.t, dim_alpha, rng)?;
    let h = spec.h.realize(spec.t, k, rng)?;

    let mut y: Vec<DVector<f64>> = Vec::with_capacity(spec.t);
    for t in 0..spec.t {
        let (c, b_mats) = unstack_beta(&beta[t], k, spec.lags);
        let mut mean = c;
        for (l, b) in b_mats.iter().enumerate() {
            if t > l {
                mean += b * &y[t - 1 - l];
            }
        }
        // Structural shock: A e = diag(exp(h/2)) eps, solved by forward
        // substitution since A is unit lower triangular.
        let a = alpha_to_a(&alpha[t], k);
        let mut e = DVector::zeros(k);
        for i in 0..k {
            let z: f64 = StandardNormal.sample(rng);
            let mut v = (0.5 * h[t][i]).exp() * z;
            for j in 0..i {
                v -= a[(i, j)] * e[j];
            }
            e[i] = v;
        }
        let obs = mean + e;
        if obs.iter().any(|v| !v.is_finite() || v.abs() > 1e8) {
            return Err(Error::numerical_at(
                "simulate",
                Some(t),
                "simulated series diverged; the coefficient path is explosive",
            ));
        }
        y.push(obs);
    }
    Ok(SimulatedData { y, beta, alpha, h })
}

/// Convenience: a constant coefficient path for a stable VAR(1) plus fixed
/// contemporaneous impacts and log-volatilities.
pub fn constant_paths(
    t: usize,
    c: &DVector<f64>,
    b1: &DMatrix<f64>,
    alpha: &DVector<f64>,
    h: &DVector<f64>,
) -> (PathSpec, PathSpec, PathSpec) {
    let k = c.len();
    let mut beta = DVector::zeros(k * (1 + k));
    let mx = 1 + k;
    for i in 0..k {
        beta[i * mx] = c[i];
        for j in 0..k {
            beta[i * mx + 1 + j] = b1[(i, j)];
        }
    }
    (
        PathSpec::Fixed(vec![beta; t]),
        PathSpec::Fixed(vec![alpha.clone(); t]),
        PathSpec::Fixed(vec![h.clone(); t]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn stable_var_sample_has_matching_moments() {
        // Univariate AR(1): y = 0.5 y_{-1} + e, Var(e) = exp(0) = 1.
        // Stationary variance = 1 / (1 - 0.25) = 4/3.
        let t = 50_000;
        let (beta, alpha, h) = constant_paths(
            t,
            &DVector::zeros(1),
            &DMatrix::from_element(1, 1, 0.5),
            &DVector::zeros(0),
            &DVector::zeros(1),
        );
        let spec = DgpSpec {
            t,
            k: 1,
            lags: 1,
            beta,
            alpha,
            h,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let sim = simulate_dgp(&spec, &mut rng).unwrap();
        let mean: f64 = sim.y.iter().map(|v| v[0]).sum::<f64>() / t as f64;
        let var: f64 = sim.y.iter().map(|v| (v[0] - mean) * (v[0] - mean)).sum::<f64>() / t as f64;
        assert!(mean.abs() < 0.05, "sample mean {mean}");
        assert!((var - 4.0 / 3.0).abs() < 0.05, "sample variance {var}");
        // First-order autocorrelation should be close to 0.5.
        let mut cov = 0.0;
        for tt in 1..t {
            cov += (sim.y[tt][0] - mean) * (sim.y[tt - 1][0] - mean);
        }
        cov /= (t - 1) as f64;
        assert!((cov / var - 0.5).abs() < 0.02, "autocorrelation {}", cov / var);
    }

    #[test]
    fn contemporaneous_impact_propagates_with_expected_sign() {
        // Bivariate white noise with a(2,1) = -0.8: e2 = 0.8 e1 + eps2, so
        // the two series correlate positively.
        let t = 20_000;
        let (beta, alpha, h) = constant_paths(
            t,
            &DVector::zeros(2),
            &DMatrix::zeros(2, 2),
            &DVector::from_vec(vec![-0.8]),
            &DVector::zeros(2),
        );
        let spec = DgpSpec {
            t,
            k: 2,
            lags: 1,
            beta,
            alpha,
            h,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let sim = simulate_dgp(&spec, &mut rng).unwrap();
        let m1: f64 = sim.y.iter().map(|v| v[0]).sum::<f64>() / t as f64;
        let m2: f64 = sim.y.iter().map(|v| v[1]).sum::<f64>() / t as f64;
        let mut c11 = 0.0;
        let mut c22 = 0.0;
        let mut c12 = 0.0;
        for v in &sim.y {
            c11 += (v[0] - m1) * (v[0] - m1);
            c22 += (v[1] - m2) * (v[1] - m2);
            c12 += (v[0] - m1) * (v[1] - m2);
        }
        let corr = c12 / (c11 * c22).sqrt();
        // Theoretical correlation: 0.8 / sqrt(1 + 0.64) = 0.6246.
        assert!((corr - 0.6246).abs() < 0.02, "correlation {corr}");
    }

    #[test]
    fn explosive_path_is_rejected() {
        let t = 400;
        let (beta, alpha, h) = constant_paths(
            t,
            &DVector::zeros(1),
            &DMatrix::from_element(1, 1, 1.2),
            &DVector::zeros(0),
            &DVector::zeros(1),
        );
        let spec = DgpSpec {
            t,
            k: 1,
            lags: 1,
            beta,
            alpha,
            h,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let err = simulate_dgp(&spec, &mut rng).unwrap_err();
        assert!(err.to_string().contains("diverged"), "{err}");
    }

    #[test]
    fn volatility_path_scales_the_innovations() {
        // h = ln(4): innovation standard deviation 2.
        let t = 30_000;
        let (beta, alpha, h) = constant_paths(
            t,
            &DVector::zeros(1),
            &DMatrix::zeros(1, 1),
            &DVector::zeros(0),
            &DVector::from_vec(vec![4.0f64.ln()]),
        );
        let spec = DgpSpec {
            t,
            k: 1,
            lags: 1,
            beta,
            alpha,
            h,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let sim = simulate_dgp(&spec, &mut rng).unwrap();
        let var: f64 = sim.y.iter().map(|v| v[0] * v[0]).sum::<f64>() / t as f64;
        assert!((var - 4.0).abs() < 0.12, "sample variance {var}");
    }
}
