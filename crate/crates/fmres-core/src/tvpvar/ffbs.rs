//! Forward-filtering backward-sampling for random-walk state paths with
//! diagonal observation noise.
//!
//! The model is
//!
//! ```text
//! y_t = Z_t s_t + e_t,     e_t ~ N(0, diag(obs_var_t))
//! s_{t+1} = s_t + u_t,     u_t ~ N(0, diag(state_var))
//! s_1 ~ N(init_mean, diag(init_var))
//! ```
//!
//! Because the observation noise is diagonal, the measurement update is run
//! one scalar observation at a time, which avoids factorizing the innovation
//! covariance. The backward pass draws the joint smoothed path.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{chol_with_jitter, symmetrize};

/// Inputs for one smoother run. All per-time slices must share a length.
pub struct RandomWalkFfbs<'a> {
    /// Observation vectors `y_t`; entries may have different lengths only if
    /// the design rows match (they are validated per step).
    pub obs: &'a [DVector<f64>],
    /// Design matrices `Z_t`, each `p_t x m`.
    pub design: &'a [DMatrix<f64>],
    /// Diagonals of the observation covariances, each length `p_t`.
    pub obs_var: &'a [DVector<f64>],
    /// Diagonal of the state innovation covariance (length `m`).
    pub state_var: &'a DVector<f64>,
    /// Prior mean of the first state.
    pub init_mean: DVector<f64>,
    /// Diagonal of the prior covariance of the first state.
    pub init_var: DVector<f64>,
}

/// Draw one state path. `stage` and `iteration` label any numerical failure.
pub fn ffbs<R: Rng + ?Sized>(
    model: &RandomWalkFfbs,
    rng: &mut R,
    stage: &str,
    iteration: Option<usize>,
) -> Result<Vec<DVector<f64>>> {
    let t_len = model.obs.len();
    let m = model.init_mean.len();
    if t_len == 0 {
        return Err(Error::invalid("state smoother needs at least one step"));
    }
    if model.design.len() != t_len || model.obs_var.len() != t_len {
        return Err(Error::dimension(format!(
            "smoother slices disagree: {} observations, {} designs, {} noise diagonals",
            t_len,
            model.design.len(),
            model.obs_var.len()
        )));
    }
    if model.state_var.len() != m || model.init_var.len() != m {
        return Err(Error::dimension(format!(
            "state dimension {m} does not match innovation ({}) or prior ({}) diagonal",
            model.state_var.len(),
            model.init_var.len()
        )));
    }

    // Forward filter.
    let mut means: Vec<DVector<f64>> = Vec::with_capacity(t_len);
    let mut covs: Vec<DMatrix<f64>> = Vec::with_capacity(t_len);
    let mut pred_mean = model.init_mean.clone();
    let mut pred_cov = DMatrix::from_diagonal(&model.init_var);
    for t in 0..t_len {
        let z = &model.design[t];
        let y = &model.obs[t];
        let v = &model.obs_var[t];
        if z.ncols() != m || z.nrows() != y.len() || v.len() != y.len() {
            return Err(Error::dimension(format!(
                "step {t}: design is {}x{}, observation has {} entries, noise diagonal {}",
                z.nrows(),
                z.ncols(),
                y.len(),
                v.len()
            )));
        }
        // Sequential scalar measurement updates.
        let mut mean = pred_mean.clone();
        let mut cov = pred_cov.clone();
        for i in 0..y.len() {
            let zi = z.row(i);
            let pz = &cov * zi.transpose(); // m x 1
            let f = (zi * &pz)[(0, 0)] + v[i];
            if !f.is_finite() || f <= 0.0 {
                return Err(Error::numerical_at(
                    stage,
                    iteration,
                    format!("non-positive innovation variance {f} at step {t}"),
                ));
            }
            let resid = y[i] - (zi * &mean)[(0, 0)];
            mean += &pz * (resid / f);
            cov -= &pz * (pz.transpose() / f);
        }
        cov = symmetrize(&cov);
        means.push(mean.clone());
        covs.push(cov.clone());
        // Predict the next step.
        pred_mean = mean;
        pred_cov = cov;
        for i in 0..m {
            pred_cov[(i, i)] += model.state_var[i];
        }
    }

    // Backward sampler.
    let mut path = vec![DVector::zeros(m); t_len];
    let last = t_len - 1;
    path[last] = draw_gaussian(&means[last], &covs[last], rng, stage, iteration)?;
    for t in (0..last).rev() {
        // s_t | s_{t+1} ~ N(m_t + G (s_{t+1} - m_t), P_t - G P_t) with
        // G = P_t (P_t + W)^{-1}.
        let p = &covs[t];
        let mut p_plus_w = p.clone();
        for i in 0..m {
            p_plus_w[(i, i)] += model.state_var[i];
        }
        let chol = chol_with_jitter(&p_plus_w, stage, iteration)?;
        // G' = (P+W)^{-1} P, so G = (solve(P+W, P))'.
        let gain_t = chol.solve(p);
        let diff = &path[t + 1] - &means[t];
        let cond_mean = &means[t] + gain_t.transpose() * &diff;
        let cond_cov = symmetrize(&(p - gain_t.transpose() * p));
        path[t] = draw_gaussian(&cond_mean, &cond_cov, rng, stage, iteration)?;
    }
    Ok(path)
}

fn draw_gaussian<R: Rng + ?Sized>(
    mean: &DVector<f64>,
    cov: &DMatrix<f64>,
    rng: &mut R,
    stage: &str,
    iteration: Option<usize>,
) -> Result<DVector<f64>> {
    let chol = chol_with_jitter(cov, stage, iteration)?;
    let m = mean.len();
    let z = DVector::from_fn(m, |_, _| StandardNormal.sample(rng));
    Ok(mean + chol.l() * z)
}
