//! The Gibbs sampler behind [`estimate`](crate::tvpvar::estimate).
//!
//! Each iteration draws, in this fixed order:
//!
//! 1. the coefficient path, by FFBS on the system premultiplied by `A_t`
//!    (which makes the observation noise diagonal);
//! 2. the contemporaneous-impact path, by FFBS on the residual regressions;
//! 3. the log-volatility paths, one series at a time, after drawing mixture
//!    indicators for the linearized log squared residuals;
//! 4. the three blocks of innovation variances from their conditional
//!    inverse-gamma posteriors.
//!
//! A single ChaCha8 stream seeded from the configuration drives every draw,
//! so runs are reproducible bit for bit.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::linalg::lstsq;
use crate::tvpvar::ffbs::{ffbs, RandomWalkFfbs};
use crate::tvpvar::mixture::{draw_component, MIXTURE_MEAN, MIXTURE_VAR};
use crate::tvpvar::{ChainDraws, IgPrior, PathDraws, TvpVarPosterior, TvpVarSpec};

pub(crate) fn run_gibbs(y: &[DVector<f64>], spec: &TvpVarSpec) -> Result<TvpVarPosterior> {
    spec.mcmc.validate()?;
    if spec.lags == 0 {
        return Err(Error::invalid("the model needs at least one lag"));
    }
    if y.is_empty() {
        return Err(Error::invalid("no observations supplied"));
    }
    let k = y[0].len();
    if k == 0 {
        return Err(Error::invalid("observations must have at least one series"));
    }
    for (t, v) in y.iter().enumerate() {
        if v.len() != k {
            return Err(Error::dimension(format!(
                "observation {t} has {} entries, expected {k}",
                v.len()
            )));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid(format!(
                "observation {t} contains a non-finite value"
            )));
        }
    }
    let p = spec.lags;
    let mx = 1 + k * p;
    if y.len() <= p {
        return Err(Error::invalid(format!(
            "{} observations cannot support {p} lags",
            y.len()
        )));
    }
    let t_eff = y.len() - p;
    let min_obs = (mx + 2).max(10);
    if t_eff < min_obs {
        return Err(Error::invalid(format!(
            "effective sample of {t_eff} is too short; need at least {min_obs} \
             observations after lagging"
        )));
    }
    let dim_beta = k * mx;
    let dim_alpha = k * (k - 1) / 2;

    // Lagged regressors x_t = [1, y_{t-1}', ..., y_{t-p}'] and targets.
    let x: Vec<DVector<f64>> = (0..t_eff)
        .map(|t| {
            let mut v = DVector::zeros(mx);
            v[0] = 1.0;
            for l in 0..p {
                for j in 0..k {
                    v[1 + l * k + j] = y[p + t - 1 - l][j];
                }
            }
            v
        })
        .collect();
    let yy: Vec<DVector<f64>> = y[p..].to_vec();

    // Constant-coefficient least-squares fit for the starting values.
    let xmat = DMatrix::from_fn(t_eff, mx, |r, c| x[r][c]);
    let mut beta0 = DVector::zeros(dim_beta);
    let mut h0 = DVector::zeros(k);
    for i in 0..k {
        let yi = DVector::from_fn(t_eff, |r, _| yy[r][i]);
        let fit = lstsq(&xmat, &yi)?;
        for s in 0..mx {
            beta0[i * mx + s] = fit.coef[s];
        }
        h0[i] = (fit.ssr / t_eff as f64).max(1e-8).ln();
    }

    // Current states.
    let mut beta_path = vec![beta0; t_eff];
    let mut alpha_path = vec![DVector::zeros(dim_alpha); t_eff];
    let mut h_path = vec![h0; t_eff];
    let mut sig2_beta = DVector::from_element(dim_beta, spec.priors.beta_innovation.mean());
    let mut sig2_alpha = DVector::from_element(dim_alpha, spec.priors.alpha_innovation.mean());
    let mut sig2_h = DVector::from_element(k, spec.priors.h_innovation.mean());

    // Reused buffers.
    let mut a_mats = vec![DMatrix::identity(k, k); t_eff];
    let mut exph = vec![DVector::zeros(k); t_eff];
    let mut beta_obs = vec![DVector::zeros(k); t_eff];
    let mut beta_design = vec![DMatrix::zeros(k, dim_beta); t_eff];
    let mut alpha_design = vec![DMatrix::zeros(k, dim_alpha); t_eff];
    let mut resid = vec![DVector::zeros(k); t_eff];
    let scalar_design = vec![DMatrix::from_element(1, 1, 1.0); t_eff];
    let mut scalar_obs = vec![DVector::zeros(1); t_eff];
    let mut scalar_var = vec![DVector::from_element(1, 1.0); t_eff];
    let mut h_state_var = DVector::from_element(1, 1.0);

    let init_var = spec.priors.init_state_var;
    let beta_init_mean = DVector::zeros(dim_beta);
    let beta_init_var = DVector::from_element(dim_beta, init_var);
    let alpha_init_mean = DVector::zeros(dim_alpha);
    let alpha_init_var = DVector::from_element(dim_alpha, init_var);
    let h_init_mean = DVector::zeros(1);
    let h_init_var = DVector::from_element(1, init_var);

    let retained = spec.mcmc.retained();
    let mut beta_draws = PathDraws::with_capacity(t_eff, dim_beta, retained);
    let mut alpha_draws = PathDraws::with_capacity(t_eff, dim_alpha, retained);
    let mut h_draws = PathDraws::with_capacity(t_eff, k, retained);
    let mut sigma_beta = ChainDraws::with_capacity(dim_beta, retained);
    let mut sigma_alpha = ChainDraws::with_capacity(dim_alpha, retained);
    let mut sigma_h = ChainDraws::with_capacity(k, retained);

    let mut rng = ChaCha8Rng::seed_from_u64(spec.mcmc.seed);

    for iter in 0..spec.mcmc.draws {
        for t in 0..t_eff {
            for i in 0..k {
                exph[t][i] = h_path[t][i].exp();
            }
            write_impact_matrix(&mut a_mats[t], &alpha_path[t], k);
        }

        // 1. Coefficient path.
        for t in 0..t_eff {
            let a = &a_mats[t];
            for i in 0..k {
                let mut v = yy[t][i];
                for j in 0..i {
                    v += a[(i, j)] * yy[t][j];
                }
                beta_obs[t][i] = v;
            }
            let design = &mut beta_design[t];
            design.fill(0.0);
            for i in 0..k {
                for j in 0..=i {
                    let w = if i == j { 1.0 } else { a[(i, j)] };
                    for s in 0..mx {
                        design[(i, j * mx + s)] = w * x[t][s];
                    }
                }
            }
        }
        let model = RandomWalkFfbs {
            obs: &beta_obs,
            design: &beta_design,
            obs_var: &exph,
            state_var: &sig2_beta,
            init_mean: beta_init_mean.clone(),
            init_var: beta_init_var.clone(),
        };
        beta_path = ffbs(&model, &mut rng, "coefficient states", Some(iter))?;

        // Residuals under the new coefficients.
        for t in 0..t_eff {
            for i in 0..k {
                let mut m = 0.0;
                for s in 0..mx {
                    m += beta_path[t][i * mx + s] * x[t][s];
                }
                resid[t][i] = yy[t][i] - m;
            }
        }

        // 2. Contemporaneous-impact path.
        if dim_alpha > 0 {
            for t in 0..t_eff {
                let design = &mut alpha_design[t];
                design.fill(0.0);
                for i in 1..k {
                    for j in 0..i {
                        design[(i, i * (i - 1) / 2 + j)] = -resid[t][j];
                    }
                }
            }
            let model = RandomWalkFfbs {
                obs: &resid,
                design: &alpha_design,
                obs_var: &exph,
                state_var: &sig2_alpha,
                init_mean: alpha_init_mean.clone(),
                init_var: alpha_init_var.clone(),
            };
            alpha_path = ffbs(&model, &mut rng, "impact states", Some(iter))?;
            for t in 0..t_eff {
                write_impact_matrix(&mut a_mats[t], &alpha_path[t], k);
            }
        }

        // 3. Log-volatility paths, one series at a time.
        for i in 0..k {
            for t in 0..t_eff {
                let a = &a_mats[t];
                let mut u = resid[t][i];
                for j in 0..i {
                    u += a[(i, j)] * resid[t][j];
                }
                let ystar = (u * u + 1e-10).ln();
                let comp = draw_component(ystar, h_path[t][i], &mut rng);
                scalar_obs[t][0] = ystar - MIXTURE_MEAN[comp];
                scalar_var[t][0] = MIXTURE_VAR[comp];
            }
            h_state_var[0] = sig2_h[i];
            let model = RandomWalkFfbs {
                obs: &scalar_obs,
                design: &scalar_design,
                obs_var: &scalar_var,
                state_var: &h_state_var,
                init_mean: h_init_mean.clone(),
                init_var: h_init_var.clone(),
            };
            let hp = ffbs(&model, &mut rng, "volatility states", Some(iter))?;
            for t in 0..t_eff {
                h_path[t][i] = hp[t][0];
            }
        }

        // 4. Innovation variances.
        draw_variances(
            &mut sig2_beta,
            &beta_path,
            spec.priors.beta_innovation,
            &mut rng,
            iter,
        )?;
        if dim_alpha > 0 {
            draw_variances(
                &mut sig2_alpha,
                &alpha_path,
                spec.priors.alpha_innovation,
                &mut rng,
                iter,
            )?;
        }
        draw_variances(&mut sig2_h, &h_path, spec.priors.h_innovation, &mut rng, iter)?;

        if iter >= spec.mcmc.burn_in && (iter - spec.mcmc.burn_in) % spec.mcmc.thin == 0 {
            beta_draws.push_path(&beta_path);
            alpha_draws.push_path(&alpha_path);
            h_draws.push_path(&h_path);
            sigma_beta.push(&sig2_beta.map(f64::sqrt));
            sigma_alpha.push(&sig2_alpha.map(f64::sqrt));
            sigma_h.push(&sig2_h.map(f64::sqrt));
        }
    }

    let beta_mean = beta_draws.mean_path();
    let alpha_mean = alpha_draws.mean_path();
    let h_mean = h_draws.mean_path();
    Ok(TvpVarPosterior {
        k,
        lags: p,
        beta: beta_draws,
        alpha: alpha_draws,
        h: h_draws,
        sigma_beta,
        sigma_alpha,
        sigma_h,
        beta_mean,
        alpha_mean,
        h_mean,
    })
}

fn write_impact_matrix(a: &mut DMatrix<f64>, alpha: &DVector<f64>, k: usize) {
    a.fill_with_identity();
    for i in 1..k {
        for j in 0..i {
            a[(i, j)] = alpha[i * (i - 1) / 2 + j];
        }
    }
}

/// Draw each coordinate's innovation variance from its conditional
/// inverse-gamma posterior given the state path increments.
fn draw_variances<R: Rng + ?Sized>(
    sig2: &mut DVector<f64>,
    path: &[DVector<f64>],
    prior: IgPrior,
    rng: &mut R,
    iter: usize,
) -> Result<()> {
    let n_diffs = path.len() - 1;
    let shape = prior.shape + n_diffs as f64 / 2.0;
    for i in 0..sig2.len() {
        let mut ssq = 0.0;
        for t in 0..n_diffs {
            let d = path[t + 1][i] - path[t][i];
            ssq += d * d;
        }
        let scale = prior.scale + 0.5 * ssq;
        let gamma = Gamma::new(shape, 1.0 / scale).map_err(|e| {
            Error::numerical_at("innovation variances", Some(iter), e.to_string())
        })?;
        let g: f64 = gamma.sample(rng);
        let v = 1.0 / g;
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::numerical_at(
                "innovation variances",
                Some(iter),
                format!("drew a degenerate variance {v}"),
            ));
        }
        sig2[i] = v;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tvpvar::dgp::{constant_paths, simulate_dgp, DgpSpec};
    use crate::tvpvar::{estimate, McmcConfig, TvpVarPriors};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn quick_spec(lags: usize, draws: usize, burn_in: usize, seed: u64) -> TvpVarSpec {
        TvpVarSpec {
            lags,
            priors: TvpVarPriors::default(),
            mcmc: McmcConfig {
                draws,
                burn_in,
                thin: 1,
                seed,
            },
        }
    }

    fn simulate_bivariate(t: usize, seed: u64) -> Vec<DVector<f64>> {
        let (beta, alpha, h) = constant_paths(
            t,
            &DVector::from_vec(vec![0.1, -0.1]),
            &DMatrix::from_row_slice(2, 2, &[0.5, 0.1, 0.2, 0.3]),
            &DVector::from_vec(vec![-0.4]),
            &DVector::from_vec(vec![-0.5, -0.5]),
        );
        let spec = DgpSpec {
            t,
            k: 2,
            lags: 1,
            beta,
            alpha,
            h,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        simulate_dgp(&spec, &mut rng).unwrap().y
    }

    #[test]
    fn shapes_and_retention_are_correct() {
        let y = simulate_bivariate(80, 31);
        let spec = quick_spec(1, 40, 10, 7);
        let post = estimate(&y, &spec).unwrap();
        assert_eq!(post.k, 2);
        assert_eq!(post.t_len(), 79);
        assert_eq!(post.beta.n_draws(), 30);
        assert_eq!(post.beta.dim(), 6);
        assert_eq!(post.alpha.dim(), 1);
        assert_eq!(post.h.dim(), 2);
        assert_eq!(post.sigma_beta.n_draws(), 30);
        assert!(post.beta.raw().iter().all(|v| v.is_finite()));
        assert!(post.h.raw().iter().all(|v| v.is_finite()));
        assert!(post.sigma_beta.raw().iter().all(|v| *v > 0.0));
    }

    #[test]
    fn same_seed_reproduces_the_posterior_exactly() {
        let y = simulate_bivariate(60, 32);
        let spec = quick_spec(1, 25, 5, 99);
        let a = estimate(&y, &spec).unwrap();
        let b = estimate(&y, &spec).unwrap();
        assert_eq!(a.beta.raw(), b.beta.raw());
        assert_eq!(a.h.raw(), b.h.raw());
        assert_eq!(a.sigma_h.raw(), b.sigma_h.raw());
        let mut other = spec.clone();
        other.mcmc.seed = 100;
        let c = estimate(&y, &other).unwrap();
        assert_ne!(a.beta.raw(), c.beta.raw());
    }

    #[test]
    fn univariate_model_runs_without_impact_block() {
        let (beta, alpha, h) = constant_paths(
            100,
            &DVector::from_vec(vec![0.0]),
            &DMatrix::from_element(1, 1, 0.5),
            &DVector::zeros(0),
            &DVector::from_vec(vec![0.0]),
        );
        let dgp = DgpSpec {
            t: 100,
            k: 1,
            lags: 1,
            beta,
            alpha,
            h,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let y = simulate_dgp(&dgp, &mut rng).unwrap().y;
        let spec = quick_spec(1, 60, 10, 5);
        let post = estimate(&y, &spec).unwrap();
        assert_eq!(post.alpha.dim(), 0);
        assert_eq!(post.beta.dim(), 2);
        // The autoregressive coefficient should land in a loose band around
        // the truth even with this very short chain.
        let mid = post.t_len() / 2;
        let ar = post.beta_mean[mid][1];
        assert!((ar - 0.5).abs() < 0.35, "posterior mean lag coefficient {ar}");
    }

    #[test]
    fn two_lag_layout_is_respected() {
        let y = simulate_bivariate(90, 34);
        let spec = quick_spec(2, 30, 10, 11);
        let post = estimate(&y, &spec).unwrap();
        assert_eq!(post.t_len(), 88);
        assert_eq!(post.beta.dim(), 2 * (1 + 4));
        let (c, mats) = post.coeff_at(0);
        assert_eq!(c.len(), 2);
        assert_eq!(mats.len(), 2);
    }

    #[test]
    fn short_samples_are_rejected_with_a_clear_error() {
        let y = simulate_bivariate(8, 35);
        let spec = quick_spec(1, 20, 5, 1);
        let err = estimate(&y, &spec).unwrap_err();
        assert!(err.to_string().contains("too short"), "{err}");
    }
}
