//! Time-varying-parameter vector autoregression with stochastic volatility,
//! estimated by Gibbs sampling.
//!
//! The observation model for `k` series with `p` lags is
//!
//! ```text
//! y_t = c_t + B_{1,t} y_{t-1} + ... + B_{p,t} y_{t-p} + e_t
//! e_t ~ N(0, Omega_t),  Omega_t = A_t^{-1} diag(exp h_t) A_t^{-T}
//! ```
//!
//! where `A_t` is unit lower triangular. The stacked coefficients, the free
//! elements of `A_t`, and the log-volatilities all follow independent
//! Gaussian random walks with diagonal innovation covariances; those
//! innovation variances carry inverse-gamma priors, and the initial states
//! are a priori `N(0, 10 I)`.

mod archive;
mod diagnostics;
pub mod dgp;
mod ffbs;
pub mod mixture;
mod sampler;
mod summary;

pub use self::archive::{load_posterior, save_posterior};
pub use self::diagnostics::{geweke_cd, inefficiency_factor, spectral_zero};
pub use self::ffbs::{ffbs, RandomWalkFfbs};
pub use self::summary::{posterior_summary, DiagnosticsRow};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::symmetrize;

/// Inverse-gamma prior with shape `a` and scale `b` (mean `b / (a - 1)`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IgPrior {
    pub shape: f64,
    pub scale: f64,
}

impl IgPrior {
    pub fn new(shape: f64, scale: f64) -> Self {
        Self { shape, scale }
    }

    /// Prior mean, defined for `shape > 1`.
    pub fn mean(&self) -> f64 {
        self.scale / (self.shape - 1.0)
    }
}

/// Priors for the three blocks of innovation variances plus the initial
/// state variance shared by all state blocks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TvpVarPriors {
    /// Prior on each coefficient-innovation variance.
    pub beta_innovation: IgPrior,
    /// Prior on each contemporaneous-impact innovation variance.
    pub alpha_innovation: IgPrior,
    /// Prior on each log-volatility innovation variance.
    pub h_innovation: IgPrior,
    /// Diagonal of the initial-state prior covariance.
    pub init_state_var: f64,
}

impl Default for TvpVarPriors {
    fn default() -> Self {
        Self {
            beta_innovation: IgPrior::new(20.0, 1e-4),
            alpha_innovation: IgPrior::new(2.0, 1e-4),
            h_innovation: IgPrior::new(2.0, 1e-4),
            init_state_var: 10.0,
        }
    }
}

/// Sampler run lengths. `draws` counts every iteration, including burn-in;
/// the chain keeps `(draws - burn_in) / thin` draws.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McmcConfig {
    pub draws: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
}

impl Default for McmcConfig {
    fn default() -> Self {
        Self {
            draws: 11_000,
            burn_in: 1_000,
            thin: 1,
            seed: 42,
        }
    }
}

impl McmcConfig {
    /// Number of retained draws.
    pub fn retained(&self) -> usize {
        (self.draws - self.burn_in).div_ceil(self.thin)
    }

    pub fn validate(&self) -> Result<()> {
        if self.thin == 0 {
            return Err(Error::invalid("thinning interval must be at least 1"));
        }
        if self.draws <= self.burn_in {
            return Err(Error::invalid(format!(
                "draws ({}) must exceed burn-in ({})",
                self.draws, self.burn_in
            )));
        }
        Ok(())
    }
}

/// Everything the estimator needs besides the data (the number of series
/// comes from the sample itself).
#[derive(Clone, Debug, PartialEq)]
pub struct TvpVarSpec {
    pub lags: usize,
    pub priors: TvpVarPriors,
    pub mcmc: McmcConfig,
}

impl Default for TvpVarSpec {
    fn default() -> Self {
        Self {
            lags: 1,
            priors: TvpVarPriors::default(),
            mcmc: McmcConfig::default(),
        }
    }
}

/// Retained draws of one state path, stored flat as `[draw][time][coord]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PathDraws {
    t: usize,
    dim: usize,
    data: Vec<f64>,
}

impl PathDraws {
    pub fn with_capacity(t: usize, dim: usize, draws: usize) -> Self {
        Self {
            t,
            dim,
            data: Vec::with_capacity(t * dim * draws),
        }
    }

    /// Rebuild from raw parts (used when loading an archive).
    pub fn from_raw(t: usize, dim: usize, data: Vec<f64>) -> Result<Self> {
        if t * dim == 0 {
            if !data.is_empty() {
                return Err(Error::dimension("path draws with zero shape must be empty"));
            }
        } else if data.len() % (t * dim) != 0 {
            return Err(Error::dimension(format!(
                "path payload of {} values is not a multiple of t*dim = {}",
                data.len(),
                t * dim
            )));
        }
        Ok(Self { t, dim, data })
    }

    pub fn push_path(&mut self, path: &[DVector<f64>]) {
        debug_assert_eq!(path.len(), self.t);
        for v in path {
            debug_assert_eq!(v.len(), self.dim);
            self.data.extend(v.iter());
        }
    }

    pub fn n_draws(&self) -> usize {
        if self.t * self.dim == 0 {
            0
        } else {
            self.data.len() / (self.t * self.dim)
        }
    }

    pub fn t_len(&self) -> usize {
        self.t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn raw(&self) -> &[f64] {
        &self.data
    }

    /// The state vector of draw `d` at time `t`.
    pub fn at(&self, d: usize, t: usize) -> &[f64] {
        let start = (d * self.t + t) * self.dim;
        &self.data[start..start + self.dim]
    }

    /// Pointwise posterior mean path.
    pub fn mean_path(&self) -> Vec<DVector<f64>> {
        let n = self.n_draws();
        let mut out = vec![DVector::zeros(self.dim); self.t];
        if n == 0 {
            return out;
        }
        for d in 0..n {
            for (t, acc) in out.iter_mut().enumerate() {
                let s = self.at(d, t);
                for i in 0..self.dim {
                    acc[i] += s[i];
                }
            }
        }
        for acc in &mut out {
            *acc /= n as f64;
        }
        out
    }

    /// The scalar chain of coordinate `i` at time `t` across draws.
    pub fn chain(&self, t: usize, i: usize) -> Vec<f64> {
        (0..self.n_draws()).map(|d| self.at(d, t)[i]).collect()
    }
}

/// Retained draws of a time-invariant parameter vector, `[draw][coord]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainDraws {
    dim: usize,
    data: Vec<f64>,
}

impl ChainDraws {
    pub fn with_capacity(dim: usize, draws: usize) -> Self {
        Self {
            dim,
            data: Vec::with_capacity(dim * draws),
        }
    }

    pub fn from_raw(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            if !data.is_empty() {
                return Err(Error::dimension("zero-dimensional chain must be empty"));
            }
        } else if data.len() % dim != 0 {
            return Err(Error::dimension(format!(
                "chain payload of {} values is not a multiple of dim = {dim}",
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn push(&mut self, values: &DVector<f64>) {
        debug_assert_eq!(values.len(), self.dim);
        self.data.extend(values.iter());
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_draws(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.data.len() / self.dim
        }
    }

    pub fn raw(&self) -> &[f64] {
        &self.data
    }

    /// The chain of coordinate `i` across draws.
    pub fn chain(&self, i: usize) -> Vec<f64> {
        (0..self.n_draws())
            .map(|d| self.data[d * self.dim + i])
            .collect()
    }

    pub fn mean(&self) -> DVector<f64> {
        let n = self.n_draws();
        let mut out = DVector::zeros(self.dim);
        if n == 0 {
            return out;
        }
        for d in 0..n {
            for i in 0..self.dim {
                out[i] += self.data[d * self.dim + i];
            }
        }
        out / n as f64
    }
}

/// Posterior sample of the model: retained state paths, retained innovation
/// standard deviations, and cached posterior-mean paths.
#[derive(Clone, Debug, PartialEq)]
pub struct TvpVarPosterior {
    pub k: usize,
    pub lags: usize,
    /// Stacked coefficient paths, coordinate order equation-major:
    /// `[c_i, B_1 row i, ..., B_p row i]` for each equation `i`.
    pub beta: PathDraws,
    /// Free elements of `A_t`, row-major: entry `(i, j)` at `i(i-1)/2 + j`.
    pub alpha: PathDraws,
    /// Log-volatility paths.
    pub h: PathDraws,
    /// Innovation standard deviations (square roots of the sampled
    /// variances), one chain per state coordinate.
    pub sigma_beta: ChainDraws,
    pub sigma_alpha: ChainDraws,
    pub sigma_h: ChainDraws,
    /// Posterior-mean paths, cached at estimation time.
    pub beta_mean: Vec<DVector<f64>>,
    pub alpha_mean: Vec<DVector<f64>>,
    pub h_mean: Vec<DVector<f64>>,
}

impl TvpVarPosterior {
    /// Length of the effective sample (observations minus lags).
    pub fn t_len(&self) -> usize {
        self.beta_mean.len()
    }

    /// Construct a degenerate posterior that concentrates on the given
    /// paths. Useful for driving the downstream transforms with known
    /// parameter values.
    pub fn from_mean_paths(
        k: usize,
        lags: usize,
        beta: Vec<DVector<f64>>,
        alpha: Vec<DVector<f64>>,
        h: Vec<DVector<f64>>,
    ) -> Result<Self> {
        let t = beta.len();
        if t == 0 || alpha.len() != t || h.len() != t {
            return Err(Error::dimension(
                "paths must be nonempty and share a length",
            ));
        }
        let dim_beta = k * (1 + k * lags);
        let dim_alpha = k * (k - 1) / 2;
        for v in &beta {
            if v.len() != dim_beta {
                return Err(Error::dimension("coefficient path dimension mismatch"));
            }
        }
        for v in &alpha {
            if v.len() != dim_alpha {
                return Err(Error::dimension("impact path dimension mismatch"));
            }
        }
        for v in &h {
            if v.len() != k {
                return Err(Error::dimension("volatility path dimension mismatch"));
            }
        }
        let mut beta_draws = PathDraws::with_capacity(t, dim_beta, 1);
        beta_draws.push_path(&beta);
        let mut alpha_draws = PathDraws::with_capacity(t, dim_alpha, 1);
        alpha_draws.push_path(&alpha);
        let mut h_draws = PathDraws::with_capacity(t, k, 1);
        h_draws.push_path(&h);
        let mut sigma_beta = ChainDraws::with_capacity(dim_beta, 1);
        sigma_beta.push(&DVector::zeros(dim_beta));
        let mut sigma_alpha = ChainDraws::with_capacity(dim_alpha, 1);
        sigma_alpha.push(&DVector::zeros(dim_alpha));
        let mut sigma_h = ChainDraws::with_capacity(k, 1);
        sigma_h.push(&DVector::zeros(k));
        Ok(Self {
            k,
            lags,
            beta: beta_draws,
            alpha: alpha_draws,
            h: h_draws,
            sigma_beta,
            sigma_alpha,
            sigma_h,
            beta_mean: beta,
            alpha_mean: alpha,
            h_mean: h,
        })
    }

    /// Intercept and lag matrices at time `t`, from the posterior means.
    pub fn coeff_at(&self, t: usize) -> (DVector<f64>, Vec<DMatrix<f64>>) {
        unstack_beta(&self.beta_mean[t], self.k, self.lags)
    }

    /// Contemporaneous-impact matrix at time `t`, from the posterior means.
    pub fn a_matrix_at(&self, t: usize) -> DMatrix<f64> {
        alpha_to_a(&self.alpha_mean[t], self.k)
    }

    /// Structural-shock standard deviations at time `t`.
    pub fn sigma_at(&self, t: usize) -> DVector<f64> {
        self.h_mean[t].map(|h| (0.5 * h).exp())
    }

    /// Structural-shock standard deviations averaged over the sample.
    pub fn averaged_sigma(&self) -> DVector<f64> {
        let t_len = self.t_len();
        let mut acc = DVector::zeros(self.k);
        for t in 0..t_len {
            acc += self.sigma_at(t);
        }
        acc / t_len as f64
    }

    /// Reduced-form error covariance at time `t`, from the posterior means.
    pub fn omega_at(&self, t: usize) -> DMatrix<f64> {
        let a = self.a_matrix_at(t);
        let a_inv = invert_unit_lower(&a);
        let mut scaled = a_inv.clone();
        for j in 0..self.k {
            let v = self.h_mean[t][j].exp();
            for i in 0..self.k {
                scaled[(i, j)] *= v;
            }
        }
        symmetrize(&(scaled * a_inv.transpose()))
    }
}

/// Invert a unit lower-triangular matrix by forward substitution.
pub(crate) fn invert_unit_lower(a: &DMatrix<f64>) -> DMatrix<f64> {
    let k = a.nrows();
    let mut inv = DMatrix::identity(k, k);
    for col in 0..k {
        for i in (col + 1)..k {
            let mut v = 0.0;
            for j in col..i {
                v -= a[(i, j)] * inv[(j, col)];
            }
            inv[(i, col)] = v;
        }
    }
    inv
}

/// Split a stacked coefficient vector into the intercept and lag matrices.
///
/// The layout matches the design `I_k (x) x_t'` with
/// `x_t = [1, y_{t-1}', ..., y_{t-p}']`: equation blocks in order, each
/// holding the intercept followed by row `i` of each lag matrix.
pub fn unstack_beta(beta: &DVector<f64>, k: usize, lags: usize) -> (DVector<f64>, Vec<DMatrix<f64>>) {
    let mx = 1 + k * lags;
    debug_assert_eq!(beta.len(), k * mx);
    let mut c = DVector::zeros(k);
    let mut mats = vec![DMatrix::zeros(k, k); lags];
    for i in 0..k {
        c[i] = beta[i * mx];
        for (l, mat) in mats.iter_mut().enumerate() {
            for j in 0..k {
                mat[(i, j)] = beta[i * mx + 1 + l * k + j];
            }
        }
    }
    (c, mats)
}

/// Build the unit lower-triangular impact matrix from its stacked free
/// elements (row-major below the diagonal).
pub fn alpha_to_a(alpha: &DVector<f64>, k: usize) -> DMatrix<f64> {
    debug_assert_eq!(alpha.len(), k * (k - 1) / 2);
    let mut a = DMatrix::identity(k, k);
    for i in 1..k {
        for j in 0..i {
            a[(i, j)] = alpha[i * (i - 1) / 2 + j];
        }
    }
    a
}

/// Estimate the model on `y` (time-ordered observation vectors).
pub fn estimate(y: &[DVector<f64>], spec: &TvpVarSpec) -> Result<TvpVarPosterior> {
    sampler::run_gibbs(y, spec)
}
