//! Small shared numerical helpers: least squares, guarded Cholesky,
//! empirical quantiles.

use crate::error::{Error, Result};
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

/// Force exact symmetry before a factorization; accumulated round-off in
/// `M` is split evenly between the two triangles.
pub(crate) fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    0.5 * (m + m.transpose())
}

/// Cholesky with an escalating diagonal jitter.
///
/// Starts at `1e-10 * I` and multiplies by 10 up to `1e-6 * I`; if the matrix
/// still is not positive definite this is a hard error tagged with `stage`
/// and, when known, the sampler iteration that produced the matrix.
pub(crate) fn chol_with_jitter(
    m: &DMatrix<f64>,
    stage: &str,
    iteration: Option<usize>,
) -> Result<Cholesky<f64, Dyn>> {
    let sym = symmetrize(m);
    if let Some(c) = Cholesky::new(sym.clone()) {
        return Ok(c);
    }
    let n = sym.nrows();
    let mut jitter = 1e-10;
    while jitter <= 1e-6 {
        let jittered = &sym + DMatrix::identity(n, n) * jitter;
        if let Some(c) = Cholesky::new(jittered) {
            return Ok(c);
        }
        jitter *= 10.0;
    }
    Err(Error::Numerical {
        stage: stage.to_string(),
        iteration,
        message: format!("covariance not positive definite after jitter up to 1e-6 ({n}x{n})"),
    })
}

/// Ordinary least squares via QR, no intercept handling of its own.
pub(crate) struct Lstsq {
    pub coef: DVector<f64>,
    /// Unscaled coefficient covariance, `(X'X)^-1`.
    pub xtx_inv: DMatrix<f64>,
    pub residuals: DVector<f64>,
    pub ssr: f64,
}

pub(crate) fn lstsq(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<Lstsq> {
    let n = x.nrows();
    let p = x.ncols();
    if y.len() != n {
        return Err(Error::dimension(format!(
            "design has {n} rows but response has {}",
            y.len()
        )));
    }
    if n < p {
        return Err(Error::dimension(format!(
            "{n} observations cannot identify {p} coefficients"
        )));
    }
    let qr = x.clone().qr();
    let r = qr.r();
    let max_diag = (0..p).map(|i| r[(i, i)].abs()).fold(0.0_f64, f64::max);
    let tol = max_diag * (n.max(p) as f64) * f64::EPSILON;
    if (0..p).any(|i| r[(i, i)].abs() <= tol) {
        return Err(Error::invalid(
            "design matrix is rank deficient (a regressor is collinear or constant)".to_string(),
        ));
    }
    let qty = qr.q().transpose() * y;
    let coef = r
        .view((0, 0), (p, p))
        .solve_upper_triangular(&qty.rows(0, p).into_owned())
        .ok_or_else(|| Error::numerical("least squares", "triangular solve failed"))?;
    let fitted = x * &coef;
    let residuals = y - fitted;
    let ssr = residuals.dot(&residuals);
    // (X'X)^-1 = R^-1 R^-T
    let r_inv = r
        .view((0, 0), (p, p))
        .into_owned()
        .try_inverse()
        .ok_or_else(|| Error::numerical("least squares", "R not invertible"))?;
    let xtx_inv = &r_inv * r_inv.transpose();
    Ok(Lstsq {
        coef,
        xtx_inv,
        residuals,
        ssr,
    })
}

/// Empirical quantile with linear interpolation between order statistics
/// (the `(n-1)p` convention). `sorted` must be ascending and nonempty.
pub(crate) fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    debug_assert!((0.0..=1.0).contains(&p));
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn lstsq_matches_hand_solved_two_by_two() {
        // y = 1 + 2x fitted exactly on three points.
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 1.0, 1.0, 1.0, 2.0]);
        let y = DVector::from_vec(vec![1.0, 3.0, 5.0]);
        let fit = lstsq(&x, &y).unwrap();
        assert_abs_diff_eq!(fit.coef[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.coef[1], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.ssr, 0.0, epsilon = 1e-20);
    }

    #[test]
    fn lstsq_rejects_collinear_design() {
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 1.0, 2.0, 1.0, 2.0]);
        let y = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        assert!(lstsq(&x, &y).is_err());
    }

    #[test]
    fn jittered_cholesky_recovers_semidefinite_matrix() {
        // Rank-1 PSD matrix: plain Cholesky fails, jitter succeeds.
        let v = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let m = &v * v.transpose();
        assert!(Cholesky::new(m.clone()).is_none());
        assert!(chol_with_jitter(&m, "test", None).is_ok());
    }

    #[test]
    fn jittered_cholesky_gives_up_on_indefinite_matrix() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let err = chol_with_jitter(&m, "test", Some(7)).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("iteration 7"), "{msg}");
    }

    #[test]
    fn quantile_interpolates() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_abs_diff_eq!(quantile_sorted(&xs, 0.0), 1.0);
        assert_abs_diff_eq!(quantile_sorted(&xs, 1.0), 4.0);
        assert_abs_diff_eq!(quantile_sorted(&xs, 0.5), 2.5);
        assert_abs_diff_eq!(quantile_sorted(&xs, 0.25), 1.75);
    }
}
