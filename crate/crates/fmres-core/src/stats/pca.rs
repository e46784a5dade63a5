//! First-principal-component composite index.

use crate::error::{Error, Result};
use crate::panel::standardize;
use nalgebra::DMatrix;

/// Leading principal component of a set of series.
#[derive(Clone, Debug, PartialEq)]
pub struct PcaComposite {
    /// Unit-norm loadings, signed so their sum is nonnegative.
    pub loadings: Vec<f64>,
    /// Component scores, one per row of the input.
    pub scores: Vec<f64>,
    /// Leading eigenvalue divided by the trace.
    pub explained_fraction: f64,
    /// Whether the correlation (vs covariance) matrix was decomposed.
    pub used_correlation: bool,
}

/// Compute the first principal component of the columns of `data` (rows are
/// time, columns are series).
///
/// With `use_correlation` the columns are standardized first, so every series
/// carries equal weight regardless of scale; otherwise columns are only
/// centered. Ties in the leading eigenvalue resolve to the first eigenvalue
/// index the solver reports, which is deterministic for a given input.
pub fn pca_composite(data: &DMatrix<f64>, use_correlation: bool) -> Result<PcaComposite> {
    let t = data.nrows();
    let k = data.ncols();
    if k == 0 {
        return Err(Error::invalid("no series to combine"));
    }
    if t < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 rows for a principal component, got {t}"
        )));
    }
    if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("non-finite value {bad} in input")));
    }

    // Column-prepare: standardize or center.
    let mut z = DMatrix::zeros(t, k);
    for j in 0..k {
        let col: Vec<f64> = data.column(j).iter().cloned().collect();
        if use_correlation {
            let std = standardize(&col)
                .map_err(|e| Error::invalid(format!("column {j}: {e}")))?;
            z.column_mut(j).copy_from_slice(&std);
        } else {
            let mean = col.iter().sum::<f64>() / t as f64;
            for (i, v) in col.iter().enumerate() {
                z[(i, j)] = v - mean;
            }
        }
    }

    let s = crate::linalg::symmetrize(&(z.transpose() * &z / (t as f64 - 1.0)));
    let trace = s.trace();
    if trace <= 0.0 {
        return Err(Error::invalid(
            "all series are constant; no variance to decompose",
        ));
    }
    let eig = s
        .clone()
        .try_symmetric_eigen(1e-12, 0)
        .ok_or_else(|| Error::numerical("pca", "eigen decomposition did not converge"))?;

    let mut lead = 0;
    for i in 1..k {
        if eig.eigenvalues[i] > eig.eigenvalues[lead] {
            lead = i;
        }
    }
    let mut loadings: Vec<f64> = eig.eigenvectors.column(lead).iter().cloned().collect();
    let norm = loadings.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in &mut loadings {
        *v /= norm;
    }
    if loadings.iter().sum::<f64>() < 0.0 {
        for v in &mut loadings {
            *v = -*v;
        }
    }

    let lv = nalgebra::DVector::from_column_slice(&loadings);
    let scores: Vec<f64> = (&z * lv).iter().cloned().collect();
    let explained_fraction = eig.eigenvalues[lead] / trace;

    Ok(PcaComposite {
        loadings,
        scores,
        explained_fraction,
        used_correlation: use_correlation,
    })
}
