//! Resilience indices computed from an impulse-response path.
//!
//! For a response path `Phi^1..Phi^N` define the per-horizon gap
//! `D^n = max_m |Phi^m| - |Phi^n|`: how far the response at horizon `n`
//! sits below the path's peak absolute response. Two summaries follow:
//!
//! * **intensity** `= sum_n D^n / (N * max_m |Phi^m|)`, in
//!   `[0, (N-1)/N]`: higher values mean the response spends more of the
//!   window far below its peak, i.e. the disturbance is absorbed faster;
//! * **duration** `= sum_n n D^n / sum_n D^n`, in `[1, N]`: the
//!   gap-weighted average horizon, locating when the absorption happens.
//!
//! A path that never moves off its peak (all `|Phi^n|` equal) has no gaps,
//! so duration is undefined; it is reported as 0 with a degenerate flag.

use crate::error::{Error, Result};
use crate::irf::IrfSurface;

fn peak(path: &[f64]) -> Result<f64> {
    if path.is_empty() {
        return Err(Error::invalid("response path is empty"));
    }
    let mut max = 0.0f64;
    for (n, v) in path.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::invalid(format!(
                "response path has a non-finite value at horizon {}",
                n + 1
            )));
        }
        max = max.max(v.abs());
    }
    if max == 0.0 {
        return Err(Error::invalid(
            "response path is identically zero; the indices are undefined",
        ));
    }
    Ok(max)
}

/// Per-horizon gaps `D^n = max |Phi| - |Phi^n|`.
pub fn shock_gap(path: &[f64]) -> Result<Vec<f64>> {
    let max = peak(path)?;
    Ok(path.iter().map(|v| max - v.abs()).collect())
}

/// Normalized total gap, in `[0, (N-1)/N]`.
pub fn intensity(path: &[f64]) -> Result<f64> {
    let max = peak(path)?;
    let total: f64 = path.iter().map(|v| max - v.abs()).sum();
    Ok(total / (path.len() as f64 * max))
}

/// Gap-weighted average horizon (1-based), in `[1, N]`; the flag marks the
/// degenerate flat-path case where the weights vanish and 0 stands in.
pub fn duration(path: &[f64]) -> Result<(f64, bool)> {
    let max = peak(path)?;
    let mut total = 0.0;
    let mut weighted = 0.0;
    for (idx, v) in path.iter().enumerate() {
        let gap = max - v.abs();
        total += gap;
        weighted += (idx + 1) as f64 * gap;
    }
    if total == 0.0 {
        Ok((0.0, true))
    } else {
        Ok((weighted / total, false))
    }
}

/// Both indices at every date of a response surface, for the response of
/// `market` to a shock in `shock`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResilienceSeries {
    pub intensity: Vec<f64>,
    pub duration: Vec<f64>,
    pub degenerate: Vec<bool>,
}

pub fn resilience_series(
    surface: &IrfSurface,
    market: usize,
    shock: usize,
) -> Result<ResilienceSeries> {
    if market >= surface.k || shock >= surface.k {
        return Err(Error::dimension(format!(
            "market {market} / shock {shock} out of range for {} variables",
            surface.k
        )));
    }
    let mut out = ResilienceSeries {
        intensity: Vec::with_capacity(surface.t_len),
        duration: Vec::with_capacity(surface.t_len),
        degenerate: Vec::with_capacity(surface.t_len),
    };
    for t in 0..surface.t_len {
        let path = surface.path(t, market, shock);
        let i = intensity(&path)
            .map_err(|e| Error::invalid(format!("date index {t}: {e}")))?;
        let (d, flag) = duration(&path)
            .map_err(|e| Error::invalid(format!("date index {t}: {e}")))?;
        out.intensity.push(i);
        out.duration.push(d);
        out.degenerate.push(flag);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irf::{tv_irf, ShockScale};
    use crate::tvpvar::TvpVarPosterior;
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;
    use proptest::prelude::*;

    #[test]
    fn monotone_decay_hand_values() {
        // Path (2, 1, 0): peak 2, gaps (0, 1, 2).
        let path = [2.0, 1.0, 0.0];
        assert_eq!(shock_gap(&path).unwrap(), vec![0.0, 1.0, 2.0]);
        assert_abs_diff_eq!(intensity(&path).unwrap(), 0.5, epsilon = 1e-15);
        let (d, flag) = duration(&path).unwrap();
        assert!(!flag);
        // (1*0 + 2*1 + 3*2) / 3 = 8/3.
        assert_abs_diff_eq!(d, 8.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn hump_shaped_path_hand_values() {
        // Path (1, 2, 1): peak 2, gaps (1, 0, 1); intensity 2/6, duration
        // (1 + 0 + 3) / 2 = 2.
        let path = [1.0, 2.0, 1.0];
        assert_abs_diff_eq!(intensity(&path).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(duration(&path).unwrap().0, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn signs_do_not_matter() {
        let a = [1.0, -0.5, 0.25, -0.125];
        let b = [1.0, 0.5, 0.25, 0.125];
        assert_abs_diff_eq!(
            intensity(&a).unwrap(),
            intensity(&b).unwrap(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            duration(&a).unwrap().0,
            duration(&b).unwrap().0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn flat_path_is_degenerate_and_zero_path_errors() {
        let flat = [3.0, 3.0, 3.0];
        assert_abs_diff_eq!(intensity(&flat).unwrap(), 0.0, epsilon = 1e-15);
        let (d, flag) = duration(&flat).unwrap();
        assert!(flag);
        assert_eq!(d, 0.0);
        assert!(intensity(&[0.0, 0.0]).is_err());
        assert!(duration(&[0.0, 0.0]).is_err());
        assert!(intensity(&[]).is_err());
        assert!(intensity(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn series_follows_the_surface() {
        // AR(1) with coefficient 0.5 and unit shock: path 0.5^{n-1} over
        // N = 4 horizons. Peak 1, gaps (0, 1/2, 3/4, 7/8), sum 17/8.
        // Intensity = 17/32; duration = (2*1/2 + 3*3/4 + 4*7/8) / (17/8)
        // = (1 + 9/4 + 7/2) / (17/8) = (27/4) * (8/17) = 54/17.
        let post = TvpVarPosterior::from_mean_paths(
            1,
            1,
            vec![DVector::from_vec(vec![0.0, 0.5]); 3],
            vec![DVector::zeros(0); 3],
            vec![DVector::from_vec(vec![0.0]); 3],
        )
        .unwrap();
        let surf = tv_irf(&post, 4, 1.0, ShockScale::Averaged).unwrap();
        let series = resilience_series(&surf, 0, 0).unwrap();
        assert_eq!(series.intensity.len(), 3);
        for t in 0..3 {
            assert_abs_diff_eq!(series.intensity[t], 17.0 / 32.0, epsilon = 1e-12);
            assert_abs_diff_eq!(series.duration[t], 54.0 / 17.0, epsilon = 1e-12);
            assert!(!series.degenerate[t]);
        }
        assert!(resilience_series(&surf, 1, 0).is_err());
    }

    proptest! {
        /// Bounds: intensity in [0, (N-1)/N], duration in [1, N] whenever
        /// it is defined.
        #[test]
        fn indices_stay_in_their_ranges(
            path in proptest::collection::vec(-1e6f64..1e6, 1..40)
        ) {
            prop_assume!(path.iter().any(|v| v.abs() > 0.0));
            let n = path.len() as f64;
            let i = intensity(&path).unwrap();
            prop_assert!(i >= 0.0 && i <= (n - 1.0) / n + 1e-12);
            let (d, flag) = duration(&path).unwrap();
            if !flag {
                prop_assert!(d >= 1.0 - 1e-12 && d <= n + 1e-12);
            }
        }

        /// Rescaling the path leaves both indices unchanged.
        #[test]
        fn indices_are_scale_invariant(
            path in proptest::collection::vec(-100f64..100.0, 2..30),
            scale in prop_oneof![Just(-3.0f64), Just(0.1), Just(7.0)]
        ) {
            prop_assume!(path.iter().any(|v| v.abs() > 1e-6));
            let scaled: Vec<f64> = path.iter().map(|v| v * scale).collect();
            let i1 = intensity(&path).unwrap();
            let i2 = intensity(&scaled).unwrap();
            prop_assert!((i1 - i2).abs() < 1e-12);
            let (d1, f1) = duration(&path).unwrap();
            let (d2, f2) = duration(&scaled).unwrap();
            prop_assert_eq!(f1, f2);
            if !f1 {
                prop_assert!((d1 - d2).abs() < 1e-9 * d1.abs().max(1.0));
            }
        }
    }
}
