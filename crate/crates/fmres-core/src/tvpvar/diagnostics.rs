//! Chain convergence diagnostics: the Geweke convergence statistic and the
//! inefficiency factor, both built on a Parzen-windowed estimate of the
//! spectral density at frequency zero.

/// Parzen lag window on `z = l / m` in `[0, 1]`.
fn parzen(z: f64) -> f64 {
    if z <= 0.5 {
        1.0 - 6.0 * z * z + 6.0 * z * z * z
    } else if z <= 1.0 {
        2.0 * (1.0 - z).powi(3)
    } else {
        0.0
    }
}

/// Truncation lag for a chain of length `n`.
fn bandwidth(n: usize) -> usize {
    (4.0 * (n as f64 / 100.0).sqrt()).floor() as usize
}

/// Biased autocovariances up to `max_lag` (inclusive), divisor `n`.
fn autocovariances(x: &[f64], max_lag: usize) -> Vec<f64> {
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    let mut out = Vec::with_capacity(max_lag + 1);
    for l in 0..=max_lag {
        let mut acc = 0.0;
        for t in l..n {
            acc += (x[t] - mean) * (x[t - l] - mean);
        }
        out.push(acc / n as f64);
    }
    out
}

/// Parzen-weighted long-run variance with an explicit truncation lag.
fn long_run_variance(x: &[f64], m: usize) -> f64 {
    let gamma = autocovariances(x, m);
    let mut s = gamma[0];
    for l in 1..=m {
        s += 2.0 * parzen(l as f64 / m as f64) * gamma[l];
    }
    s.max(0.0)
}

/// Long-run variance: the spectral density of `x` at frequency zero,
/// estimated with a Parzen window whose truncation lag grows with the
/// square root of the sample size.
pub fn spectral_zero(x: &[f64]) -> f64 {
    let n = x.len();
    if n < 2 {
        return 0.0;
    }
    let m = bandwidth(n).min(n - 1).max(1);
    long_run_variance(x, m)
}

/// Geweke's convergence statistic: the difference between the means of the
/// first 10% and the last 50% of the chain, studentized with long-run
/// variances. Approximately standard normal for a converged chain. A chain
/// that is constant in both windows returns 0 by convention.
///
/// Each window's spectral density uses a truncation lag of sqrt(window
/// length): the windows are short relative to the full chain, and a slowly
/// mixing chain needs the longer lag reach there to avoid understating the
/// variance (which would inflate the statistic and flag converged chains).
pub fn geweke_cd(x: &[f64]) -> f64 {
    let n = x.len();
    if n < 20 {
        return 0.0;
    }
    let n_a = n / 10;
    let n_b = n / 2;
    let a = &x[..n_a];
    let b = &x[n - n_b..];
    let mean_a = a.iter().sum::<f64>() / n_a as f64;
    let mean_b = b.iter().sum::<f64>() / n_b as f64;
    let window_m = |len: usize| ((len as f64).sqrt().floor() as usize).clamp(1, len - 1);
    let s_a = long_run_variance(a, window_m(n_a));
    let s_b = long_run_variance(b, window_m(n_b));
    let denom = (s_a / n_a as f64 + s_b / n_b as f64).sqrt();
    if denom == 0.0 {
        return 0.0;
    }
    (mean_a - mean_b) / denom
}

/// Inefficiency factor: the ratio of the long-run variance of the chain to
/// its i.i.d. variance, `1 + 2 sum_l w(l/m) rho_l`. Values near 1 indicate
/// draws that behave like independent samples. A constant chain returns 1
/// by convention; strong negative correlation can push the estimate below
/// 1, and it is floored at 0.
pub fn inefficiency_factor(x: &[f64]) -> f64 {
    let n = x.len();
    if n < 2 {
        return 1.0;
    }
    let m = bandwidth(n).min(n - 1).max(1);
    let gamma = autocovariances(x, m);
    if gamma[0] <= 0.0 {
        return 1.0;
    }
    let mut f = 1.0;
    for l in 1..=m {
        f += 2.0 * parzen(l as f64 / m as f64) * gamma[l] / gamma[0];
    }
    f.max(0.0)
}
