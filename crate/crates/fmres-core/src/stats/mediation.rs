//! Two-step mediation regressions: each resilience indicator and each
//! mediator variable is regressed on the policy-uncertainty series, and the
//! fits are laid out side by side in one report table.

use crate::error::{Error, Result};
use crate::stats::ols::{ols, OlsFit};

/// Significance stars at the standard normal two-sided thresholds:
/// `***` for |t| > 2.576, `**` for |t| > 1.96, `*` for |t| > 1.645.
pub fn significance_stars(t: f64) -> &'static str {
    let a = t.abs();
    if a > 2.576 {
        "***"
    } else if a > 1.96 {
        "**"
    } else if a > 1.645 {
        "*"
    } else {
        ""
    }
}

/// One column per fitted equation: outcome equations first, then mediator
/// equations, each in input order.
#[derive(Clone, Debug, PartialEq)]
pub struct MediationReport {
    pub equations: Vec<(String, OlsFit)>,
    /// How many leading entries of `equations` are outcome equations.
    pub n_outcomes: usize,
}

impl MediationReport {
    /// Render the report table.
    ///
    /// Rows are `CPU`, `CPU_t`, `Cons`, `Cons_t`, `R2`, `R2_adj`; one column
    /// per equation. Coefficient cells carry significance stars; every number
    /// is fixed to six decimals since this is a presentation table.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("term");
        for (name, _) in &self.equations {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        let cell = |f: &OlsFit, row: usize| -> String {
            match row {
                0 => format!(
                    "{:.6}{}",
                    f.coefficients[1],
                    significance_stars(f.t_values[1])
                ),
                1 => format!("{:.6}", f.t_values[1]),
                2 => format!(
                    "{:.6}{}",
                    f.coefficients[0],
                    significance_stars(f.t_values[0])
                ),
                3 => format!("{:.6}", f.t_values[0]),
                4 => format!("{:.6}", f.r_squared),
                _ => format!("{:.6}", f.adj_r_squared),
            }
        };
        let labels = ["CPU", "CPU_t", "Cons", "Cons_t", "R2", "R2_adj"];
        for (row, label) in labels.iter().enumerate() {
            out.push_str(label);
            for (_, fit) in &self.equations {
                out.push(',');
                out.push_str(&cell(fit, row));
            }
            out.push('\n');
        }
        out
    }
}

/// Fit every outcome and mediator against `cpu`.
pub fn mediation_two_step(
    cpu: &[f64],
    outcomes: &[(&str, &[f64])],
    mediators: &[(&str, &[f64])],
) -> Result<MediationReport> {
    if outcomes.is_empty() {
        return Err(Error::invalid("mediation needs at least one outcome series"));
    }
    let mut equations = Vec::with_capacity(outcomes.len() + mediators.len());
    for (name, series) in outcomes.iter().chain(mediators) {
        if series.len() != cpu.len() {
            return Err(Error::dimension(format!(
                "series '{name}' has {} observations, explanatory series has {}",
                series.len(),
                cpu.len()
            )));
        }
        let fit = ols(series, &[cpu])
            .map_err(|e| Error::invalid(format!("equation '{name}': {e}")))?;
        equations.push((name.to_string(), fit));
    }
    Ok(MediationReport {
        equations,
        n_outcomes: outcomes.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn stars_follow_the_thresholds() {
        assert_eq!(significance_stars(1.0), "");
        assert_eq!(significance_stars(-1.7), "*");
        assert_eq!(significance_stars(2.0), "**");
        assert_eq!(significance_stars(-3.0), "***");
        assert_eq!(significance_stars(1.645), "");
        assert_eq!(significance_stars(1.96), "*");
        assert_eq!(significance_stars(2.576), "**");
    }

    #[test]
    fn planted_effect_is_recovered_with_full_fit() {
        let cpu: Vec<f64> = (0..30).map(|i| i as f64 / 3.0).collect();
        let y: Vec<f64> = cpu.iter().map(|v| 0.5 * v + 2.0).collect();
        let report = mediation_two_step(&cpu, &[("res", &y)], &[]).unwrap();
        let fit = &report.equations[0].1;
        assert_abs_diff_eq!(fit.coefficients[1], 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(fit.r_squared, 1.0, epsilon = 1e-12);
        assert_eq!(significance_stars(fit.t_values[1]), "***");
    }

    #[test]
    fn independent_noise_is_rarely_starred() {
        let mut below = 0;
        for seed in 0..100 {
            let mut rng = ChaCha8Rng::seed_from_u64(7000 + seed);
            let cpu: Vec<f64> = (0..192).map(|_| StandardNormal.sample(&mut rng)).collect();
            let y: Vec<f64> = (0..192).map(|_| StandardNormal.sample(&mut rng)).collect();
            let report = mediation_two_step(&cpu, &[("res", &y)], &[]).unwrap();
            if report.equations[0].1.t_values[1].abs() < 1.645 {
                below += 1;
            }
        }
        // True coverage of |t| < 1.645 is about 90%; allow sampling noise.
        assert!(
            (80..=98).contains(&below),
            "|t| < 1.645 in {below}/100 seeds"
        );
    }

    #[test]
    fn constant_explanatory_series_is_an_error() {
        let cpu = vec![2.0; 20];
        let y: Vec<f64> = (0..20).map(|i| i as f64).collect();
        assert!(mediation_two_step(&cpu, &[("res", &y)], &[]).is_err());
    }

    #[test]
    fn report_layout_matches_golden_table() {
        // Hand-solved fit: x = 1..4, y = [1,2,2,3] gives slope 0.6,
        // intercept 0.5, t-values 0.6/sqrt(0.02) and 0.5/sqrt(0.15),
        // R2 = 0.9, adjusted R2 = 0.85. The other equations are exact
        // rescalings, which shift coefficients but not t-values or fit.
        let cpu = [1.0, 2.0, 3.0, 4.0];
        let y = [1.0, 2.0, 2.0, 3.0];
        let y2: Vec<f64> = y.iter().map(|v| 2.0 * v).collect();
        let y3: Vec<f64> = y.iter().map(|v| -v).collect();
        let report = mediation_two_step(
            &cpu,
            &[("Intensity", &y[..]), ("Duration", &y2[..])],
            &[("ISI", &y3[..])],
        )
        .unwrap();
        assert_eq!(report.n_outcomes, 2);
        let golden = "\
term,Intensity,Duration,ISI
CPU,0.600000***,1.200000***,-0.600000***
CPU_t,4.242641,4.242641,-4.242641
Cons,0.500000,1.000000,-0.500000
Cons_t,1.290994,1.290994,-1.290994
R2,0.900000,0.900000,0.900000
R2_adj,0.850000,0.850000,0.850000
";
        assert_eq!(report.to_csv(), golden);
    }
}
