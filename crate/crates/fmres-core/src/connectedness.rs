//! Generalized forecast-error-variance decompositions and the
//! Diebold-Yilmaz connectedness table built from them.
//!
//! For a VAR with moving-average matrices `Lambda_h` and error covariance
//! `Omega`, the H-step generalized decomposition attributes to shock `k`
//! the share
//!
//! ```text
//! Phi_jk = sigma_kk^{-1} sum_{h<H} (e_j' Lambda_h Omega e_k)^2
//!          / sum_{h<H} (Lambda_h Omega Lambda_h')_jj
//! ```
//!
//! of variable `j`'s forecast-error variance. Because generalized shocks
//! are not orthogonal the rows need not sum to one, so each row is
//! normalized before any aggregate is formed. Directional aggregates are
//! reported in percent: `from_others[j]` and `to_others[j]` sum the
//! off-diagonal row and column of the normalized table, `net` is their
//! difference, the total index is the average off-diagonal mass, and
//! `npdc[(j,k)]` is the pairwise net share flowing from `j` to `k`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{lstsq, symmetrize};
use crate::tvpvar::TvpVarPosterior;

/// Moving-average matrices `Lambda_0 .. Lambda_{H-1}` of a `k`-variable VAR
/// with lag matrices `b_mats` (`Lambda_0 = I`; an empty lag set is white
/// noise).
pub fn vma_coefficients(k: usize, b_mats: &[DMatrix<f64>], horizon: usize) -> Vec<DMatrix<f64>> {
    let mut lambdas = Vec::with_capacity(horizon);
    lambdas.push(DMatrix::identity(k, k));
    for h in 1..horizon {
        let mut lam = DMatrix::zeros(k, k);
        for (idx, b) in b_mats.iter().enumerate() {
            let lag = idx + 1;
            if lag <= h {
                lam += b * &lambdas[h - lag];
            }
        }
        lambdas.push(lam);
    }
    lambdas
}

/// Unnormalized generalized decomposition matrix `Phi` (rows: forecast
/// variable `j`; columns: shock source `k`).
pub fn gfevd(
    b_mats: &[DMatrix<f64>],
    omega: &DMatrix<f64>,
    horizon: usize,
) -> Result<DMatrix<f64>> {
    if horizon == 0 {
        return Err(Error::invalid("decomposition horizon must be at least 1"));
    }
    let k = omega.nrows();
    if omega.ncols() != k || k == 0 {
        return Err(Error::dimension("error covariance must be square and nonempty"));
    }
    for b in b_mats {
        if b.nrows() != k || b.ncols() != k {
            return Err(Error::dimension("lag matrices must match the covariance size"));
        }
    }
    for j in 0..k {
        if omega[(j, j)] <= 0.0 {
            return Err(Error::invalid(format!(
                "error covariance has non-positive variance for variable {j}"
            )));
        }
    }
    let lambdas = vma_coefficients(k, b_mats, horizon);
    let mut numer = DMatrix::zeros(k, k);
    let mut denom = DVector::<f64>::zeros(k);
    for lam in &lambdas {
        let lo = lam * omega;
        // Numerator term: (Lambda_h Omega)_{jk}^2 / sigma_kk.
        for j in 0..k {
            for kk in 0..k {
                let v = lo[(j, kk)];
                numer[(j, kk)] += v * v / omega[(kk, kk)];
            }
        }
        // Denominator term: (Lambda_h Omega Lambda_h')_{jj}.
        for j in 0..k {
            let mut acc = 0.0;
            for s in 0..k {
                acc += lo[(j, s)] * lam[(j, s)];
            }
            denom[j] += acc;
        }
    }
    for j in 0..k {
        if denom[j] <= 0.0 {
            return Err(Error::numerical(
                "variance decomposition",
                format!("forecast-error variance of variable {j} is not positive"),
            ));
        }
        for kk in 0..k {
            numer[(j, kk)] /= denom[j];
        }
    }
    Ok(numer)
}

/// Scale each row to sum to one.
pub fn normalize_rows(shares: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = shares.clone();
    for j in 0..out.nrows() {
        let sum: f64 = out.row(j).iter().sum();
        if sum > 0.0 {
            for kk in 0..out.ncols() {
                out[(j, kk)] /= sum;
            }
        }
    }
    out
}

/// A full connectedness table. `shares` rows sum to one; the aggregates are
/// in percent.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectednessTable {
    pub variables: Vec<String>,
    pub shares: DMatrix<f64>,
    /// Total connectedness index, percent.
    pub tci: f64,
    /// Percent of each variable's variance received from the others.
    pub from_others: Vec<f64>,
    /// Percent transmitted by each variable to the others.
    pub to_others: Vec<f64>,
    /// `to_others - from_others` per variable.
    pub net: Vec<f64>,
    /// Net pairwise directional connectedness from row to column,
    /// `npdc[(j,k)] = 100 (shares[(k,j)] - shares[(j,k)])`; exactly
    /// antisymmetric.
    pub npdc: DMatrix<f64>,
}

/// Normalize a raw decomposition and assemble the table.
pub fn connectedness_table(
    variables: &[String],
    raw_shares: &DMatrix<f64>,
) -> Result<ConnectednessTable> {
    let k = raw_shares.nrows();
    if raw_shares.ncols() != k || k == 0 {
        return Err(Error::dimension("share matrix must be square and nonempty"));
    }
    if variables.len() != k {
        return Err(Error::dimension(format!(
            "{} variable names for a {k}-variable table",
            variables.len()
        )));
    }
    for v in raw_shares.iter() {
        if !v.is_finite() || *v < 0.0 {
            return Err(Error::invalid("share matrix entries must be finite and nonnegative"));
        }
    }
    for j in 0..k {
        if raw_shares.row(j).iter().sum::<f64>() <= 0.0 {
            return Err(Error::invalid(format!("row {j} of the share matrix is zero")));
        }
    }
    let shares = normalize_rows(raw_shares);
    let mut from_others = vec![0.0; k];
    let mut to_others = vec![0.0; k];
    for j in 0..k {
        for kk in 0..k {
            if j != kk {
                from_others[j] += shares[(j, kk)];
                to_others[kk] += shares[(j, kk)];
            }
        }
    }
    for v in from_others.iter_mut().chain(to_others.iter_mut()) {
        *v *= 100.0;
    }
    let net: Vec<f64> = (0..k).map(|j| to_others[j] - from_others[j]).collect();
    let tci = from_others.iter().sum::<f64>() / k as f64;
    let mut npdc = DMatrix::zeros(k, k);
    for j in 0..k {
        for kk in (j + 1)..k {
            let v = 100.0 * (shares[(kk, j)] - shares[(j, kk)]);
            npdc[(j, kk)] = v;
            npdc[(kk, j)] = -v;
        }
    }
    Ok(ConnectednessTable {
        variables: variables.to_vec(),
        shares,
        tci,
        from_others,
        to_others,
        net,
        npdc,
    })
}

/// One table per date, built from the posterior-mean parameter paths.
pub fn dynamic_connectedness(
    post: &TvpVarPosterior,
    horizon: usize,
    variables: &[String],
) -> Result<Vec<ConnectednessTable>> {
    if variables.len() != post.k {
        return Err(Error::dimension(format!(
            "{} variable names for a {}-variable model",
            variables.len(),
            post.k
        )));
    }
    (0..post.t_len())
        .into_par_iter()
        .map(|t| {
            let (_, b_mats) = post.coeff_at(t);
            let omega = post.omega_at(t);
            let raw = gfevd(&b_mats, &omega, horizon)
                .map_err(|e| Error::invalid(format!("date index {t}: {e}")))?;
            connectedness_table(variables, &raw)
        })
        .collect()
}

/// Collapse a dynamic sequence into one table: average the normalized
/// shares over time, then rebuild the aggregates.
pub fn static_connectedness(tables: &[ConnectednessTable]) -> Result<ConnectednessTable> {
    let first = tables
        .first()
        .ok_or_else(|| Error::invalid("no tables to average"))?;
    let k = first.shares.nrows();
    let mut acc = DMatrix::zeros(k, k);
    for table in tables {
        if table.shares.nrows() != k || table.variables != first.variables {
            return Err(Error::dimension(
                "tables to average must share variables and size",
            ));
        }
        acc += &table.shares;
    }
    acc /= tables.len() as f64;
    connectedness_table(&first.variables, &acc)
}

/// Connectedness from a constant-coefficient VAR fitted by least squares,
/// with the error covariance taken from the residuals.
pub fn constant_var_connectedness(
    y: &[DVector<f64>],
    lags: usize,
    horizon: usize,
    variables: &[String],
) -> Result<ConnectednessTable> {
    if lags == 0 {
        return Err(Error::invalid("the model needs at least one lag"));
    }
    let k = y.first().map_or(0, |v| v.len());
    if k == 0 {
        return Err(Error::invalid("no observations supplied"));
    }
    if variables.len() != k {
        return Err(Error::dimension(format!(
            "{} variable names for {k} series",
            variables.len()
        )));
    }
    let mx = 1 + k * lags;
    if y.len() <= lags + mx + 1 {
        return Err(Error::invalid(format!(
            "{} observations are too few for a {k}-variable model with {lags} lag(s)",
            y.len()
        )));
    }
    let t_eff = y.len() - lags;
    let xmat = DMatrix::from_fn(t_eff, mx, |r, c| {
        if c == 0 {
            1.0
        } else {
            let l = (c - 1) / k;
            let j = (c - 1) % k;
            y[lags + r - 1 - l][j]
        }
    });
    let mut b_mats = vec![DMatrix::zeros(k, k); lags];
    let mut resid = DMatrix::zeros(t_eff, k);
    for i in 0..k {
        let yi = DVector::from_fn(t_eff, |r, _| y[lags + r][i]);
        let fit = lstsq(&xmat, &yi)?;
        for l in 0..lags {
            for j in 0..k {
                b_mats[l][(i, j)] = fit.coef[1 + l * k + j];
            }
        }
        resid.set_column(i, &fit.residuals);
    }
    let dof = (t_eff - mx) as f64;
    let omega = symmetrize(&(resid.transpose() * &resid / dof));
    let raw = gfevd(&b_mats, &omega, horizon)?;
    connectedness_table(variables, &raw)
}
