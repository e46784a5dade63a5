//! Monthly time-series panels and the transforms that produce them.
//!
//! On disk a panel is a plain CSV: a `date` column first (strictly increasing),
//! then one named numeric column per series. Dates are either `YYYY-MM` for
//! data already at monthly frequency, or `YYYY-MM-DD` for raw observations
//! that get averaged into months on load. Lines starting with `#` are skipped.
//! No quoting, no missing cells.

use crate::dates::{Month, ObsDate};
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

/// A complete panel: `len()` months by `width()` series, no gaps, no NaNs.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeriesPanel {
    dates: Vec<Month>,
    columns: Vec<String>,
    /// Row = month, column = series. Column-major storage, so a single
    /// series is a contiguous slice.
    values: DMatrix<f64>,
}

impl TimeSeriesPanel {
    pub fn new(dates: Vec<Month>, columns: Vec<String>, values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() != dates.len() {
            return Err(Error::dimension(format!(
                "{} dates but {} value rows",
                dates.len(),
                values.nrows()
            )));
        }
        if values.ncols() != columns.len() {
            return Err(Error::dimension(format!(
                "{} column names but {} value columns",
                columns.len(),
                values.ncols()
            )));
        }
        if dates.is_empty() {
            return Err(Error::invalid("panel has no rows"));
        }
        for w in dates.windows(2) {
            if w[1].index() <= w[0].index() {
                return Err(Error::invalid(format!(
                    "dates not strictly increasing at {}",
                    w[1]
                )));
            }
            if w[1].index() != w[0].index() + 1 {
                return Err(Error::invalid(format!(
                    "missing month between {} and {}",
                    w[0], w[1]
                )));
            }
        }
        for (i, name) in columns.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::invalid(format!("column {i} has an empty name")));
            }
            if columns[..i].contains(name) {
                return Err(Error::invalid(format!("duplicate column name '{name}'")));
            }
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite value {bad} in panel")));
        }
        Ok(TimeSeriesPanel {
            dates,
            columns,
            values,
        })
    }

    /// Build from per-series vectors sharing one date index.
    pub fn from_columns(dates: Vec<Month>, series: Vec<(String, Vec<f64>)>) -> Result<Self> {
        let t = dates.len();
        let k = series.len();
        let mut values = DMatrix::zeros(t, k);
        let mut names = Vec::with_capacity(k);
        for (j, (name, col)) in series.into_iter().enumerate() {
            if col.len() != t {
                return Err(Error::dimension(format!(
                    "column '{name}' has {} values for {t} dates",
                    col.len()
                )));
            }
            values.column_mut(j).copy_from_slice(&col);
            names.push(name);
        }
        TimeSeriesPanel::new(dates, names, values)
    }

    pub fn dates(&self) -> &[Month] {
        &self.dates
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    /// Number of months.
    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    /// Number of series.
    pub fn width(&self) -> usize {
        self.columns.len()
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::invalid(format!("column '{name}' not found")))
    }

    /// A single series, zero-copy.
    pub fn column(&self, name: &str) -> Result<&[f64]> {
        let j = self.column_index(name)?;
        Ok(self.column_by_index(j))
    }

    pub fn column_by_index(&self, j: usize) -> &[f64] {
        let t = self.len();
        &self.values.as_slice()[j * t..(j + 1) * t]
    }

    /// New panel restricted to `names`, in the given order.
    pub fn select(&self, names: &[&str]) -> Result<TimeSeriesPanel> {
        let series = names
            .iter()
            .map(|n| Ok((n.to_string(), self.column(n)?.to_vec())))
            .collect::<Result<Vec<_>>>()?;
        TimeSeriesPanel::from_columns(self.dates.clone(), series)
    }

    /// Log-difference the named columns; every other column just drops its
    /// first observation so the panel stays rectangular.
    pub fn apply_log_diff(&self, names: &[&str]) -> Result<TimeSeriesPanel> {
        for n in names {
            self.column_index(n)?;
        }
        if self.len() < 2 {
            return Err(Error::invalid("need at least 2 rows to log-difference"));
        }
        let series = self
            .columns
            .iter()
            .map(|c| {
                let col = self.column(c)?;
                let transformed = if names.contains(&c.as_str()) {
                    log_diff(col).map_err(|e| {
                        Error::invalid(format!("column '{c}': {e}"))
                    })?
                } else {
                    col[1..].to_vec()
                };
                Ok((c.clone(), transformed))
            })
            .collect::<Result<Vec<_>>>()?;
        TimeSeriesPanel::from_columns(self.dates[1..].to_vec(), series)
    }

    pub fn write_csv<W: std::io::Write>(&self, w: &mut W) -> std::io::Result<()> {
        let mut line = String::from("date");
        for c in &self.columns {
            line.push(',');
            line.push_str(c);
        }
        line.push('\n');
        w.write_all(line.as_bytes())?;
        for (i, d) in self.dates.iter().enumerate() {
            line.clear();
            let _ = write!(line, "{d}");
            for j in 0..self.width() {
                let _ = write!(line, ",{}", self.values[(i, j)]);
            }
            line.push('\n');
            w.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is UTF-8")
    }
}

/// Load a panel CSV, averaging daily/weekly observations into months when the
/// date column carries days.
pub fn load_panel(path: &Path) -> Result<TimeSeriesPanel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_panel(&text)
}

pub fn save_panel(panel: &TimeSeriesPanel, path: &Path) -> Result<()> {
    let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    panel
        .write_csv(&mut file)
        .map_err(|e| Error::io(path, e))
}

/// Parse the CSV text form. Split out from [`load_panel`] so callers and
/// tests can work with in-memory strings.
pub fn parse_panel(text: &str) -> Result<TimeSeriesPanel> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::invalid("empty input: no header row"))?;
    let cells: Vec<&str> = header.split(',').map(str::trim).collect();
    if cells.first() != Some(&"date") {
        return Err(Error::parse(
            header_line,
            format!("header must start with 'date', got '{}'", cells.first().unwrap_or(&"")),
        ));
    }
    let columns: Vec<String> = cells[1..].iter().map(|s| s.to_string()).collect();
    if columns.is_empty() {
        return Err(Error::parse(header_line, "no data columns in header"));
    }
    for (i, name) in columns.iter().enumerate() {
        if name.is_empty() {
            return Err(Error::parse(header_line, format!("column {} has an empty name", i + 1)));
        }
        if columns[..i].contains(name) {
            return Err(Error::parse(
                header_line,
                format!("duplicate column name '{name}'"),
            ));
        }
    }

    let mut dates: Vec<ObsDate> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in lines {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != columns.len() + 1 {
            return Err(Error::parse(
                lineno,
                format!("expected {} cells, got {}", columns.len() + 1, cells.len()),
            ));
        }
        let date = ObsDate::from_str(cells[0]).map_err(|e| Error::parse(lineno, e.to_string()))?;
        if dates.contains(&date) {
            return Err(Error::parse(lineno, format!("duplicate date {date}")));
        }
        let mut row = Vec::with_capacity(columns.len());
        for (j, cell) in cells[1..].iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| {
                Error::parse(
                    lineno,
                    format!("column '{}': cell '{cell}' is not numeric", columns[j]),
                )
            })?;
            if !v.is_finite() {
                return Err(Error::parse(
                    lineno,
                    format!("column '{}': non-finite value '{cell}'", columns[j]),
                ));
            }
            row.push(v);
        }
        dates.push(date);
        rows.push(row);
    }
    if dates.is_empty() {
        return Err(Error::invalid("no data rows"));
    }

    let monthly = dates.iter().filter(|d| d.is_monthly()).count();
    if monthly != 0 && monthly != dates.len() {
        return Err(Error::invalid(
            "mixed YYYY-MM and YYYY-MM-DD dates; use one granularity per file",
        ));
    }

    if monthly == dates.len() {
        let months: Vec<Month> = dates.iter().map(|d| d.month).collect();
        let k = columns.len();
        let t = months.len();
        let mut values = DMatrix::zeros(t, k);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                values[(i, j)] = *v;
            }
        }
        TimeSeriesPanel::new(months, columns, values)
    } else {
        // Daily or weekly observations: average into calendar months.
        let series = columns
            .iter()
            .enumerate()
            .map(|(j, name)| {
                let col: Vec<f64> = rows.iter().map(|r| r[j]).collect();
                let (_, aligned) = align_monthly(&dates, &col)?;
                Ok((name.clone(), aligned))
            })
            .collect::<Result<Vec<_>>>()?;
        let (months, _) = align_monthly(&dates, &rows.iter().map(|r| r[0]).collect::<Vec<_>>())?;
        TimeSeriesPanel::from_columns(months, series)
    }
}

/// First log-differences: `ln(x[t+1]) - ln(x[t])`. Output is one shorter
/// than the input.
pub fn log_diff(series: &[f64]) -> Result<Vec<f64>> {
    if series.len() < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 observations to log-difference, got {}",
            series.len()
        )));
    }
    if let Some(i) = series.iter().position(|v| *v <= 0.0) {
        return Err(Error::invalid(format!(
            "log-difference needs positive values; index {i} is {}",
            series[i]
        )));
    }
    Ok(series.windows(2).map(|w| w[1].ln() - w[0].ln()).collect())
}

/// Average ordered dated observations into calendar months.
///
/// Input dates must be strictly increasing. Every month between the first and
/// last observation must appear at least once; an empty month in the interior
/// is an error, not a gap to interpolate over.
pub fn align_monthly(dates: &[ObsDate], values: &[f64]) -> Result<(Vec<Month>, Vec<f64>)> {
    if dates.len() != values.len() {
        return Err(Error::dimension(format!(
            "{} dates but {} values",
            dates.len(),
            values.len()
        )));
    }
    if dates.is_empty() {
        return Err(Error::invalid("no observations to align"));
    }
    for w in dates.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::invalid(format!(
                "input dates not strictly increasing at {}",
                w[1]
            )));
        }
    }
    let mut months: Vec<Month> = Vec::new();
    let mut sums: Vec<f64> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for (d, v) in dates.iter().zip(values) {
        if months.last() == Some(&d.month) {
            *sums.last_mut().unwrap() += v;
            *counts.last_mut().unwrap() += 1;
        } else {
            if let Some(prev) = months.last() {
                if d.month.index() != prev.index() + 1 {
                    return Err(Error::invalid(format!(
                        "no observations in {}",
                        prev.next()
                    )));
                }
            }
            months.push(d.month);
            sums.push(*v);
            counts.push(1);
        }
    }
    let means = sums
        .iter()
        .zip(&counts)
        .map(|(s, c)| s / *c as f64)
        .collect();
    Ok((months, means))
}

/// Center and scale to sample standard deviation one.
pub fn standardize(series: &[f64]) -> Result<Vec<f64>> {
    if series.len() < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 observations to standardize, got {}",
            series.len()
        )));
    }
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let var = series.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    if var <= 0.0 {
        return Err(Error::invalid("cannot standardize a constant series"));
    }
    let sd = var.sqrt();
    Ok(series.iter().map(|v| (v - mean) / sd).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn months(start: &str, n: usize) -> Vec<Month> {
        let mut m: Month = start.parse().unwrap();
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(m);
            m = m.next();
        }
        out
    }

    #[test]
    fn parses_minimal_monthly_panel() {
        let p = parse_panel("date,a,b\n2015-01,1,2\n2015-02,3,4\n2015-03,5,6\n").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.width(), 2);
        assert_eq!(p.columns(), ["a", "b"]);
        assert_eq!(p.column("a").unwrap(), &[1.0, 3.0, 5.0]);
        assert_eq!(p.column("b").unwrap(), &[2.0, 4.0, 6.0]);
        assert_eq!(p.dates()[0].to_string(), "2015-01");
    }

    #[test]
    fn skips_comment_and_blank_lines() {
        let p = parse_panel("# generated\ndate,a\n\n2015-01,1\n# note\n2015-02,2\n").unwrap();
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn duplicate_date_is_located() {
        let err = parse_panel("date,a\n2015-01,1\n2015-01,2\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
        assert!(msg.contains("duplicate date 2015-01"), "{msg}");
    }

    #[test]
    fn duplicate_column_is_rejected() {
        let err = parse_panel("date,a,a\n2015-01,1,2\n").unwrap_err();
        assert!(err.to_string().contains("duplicate column name 'a'"));
    }

    #[test]
    fn non_numeric_cell_is_located() {
        let err = parse_panel("date,a,b\n2015-01,1,2\n2015-02,1,oops\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
        assert!(msg.contains("'b'"), "{msg}");
        assert!(msg.contains("oops"), "{msg}");
    }

    #[test]
    fn header_must_start_with_date() {
        assert!(parse_panel("time,a\n2015-01,1\n").is_err());
    }

    #[test]
    fn monthly_gap_is_rejected() {
        let err = parse_panel("date,a\n2015-01,1\n2015-03,2\n").unwrap_err();
        assert!(err.to_string().contains("missing month"), "{err}");
    }

    #[test]
    fn unordered_monthly_dates_are_rejected() {
        assert!(parse_panel("date,a\n2015-02,1\n2015-01,2\n").is_err());
    }

    #[test]
    fn mixed_granularity_is_rejected() {
        let err = parse_panel("date,a\n2015-01,1\n2015-02-03,2\n").unwrap_err();
        assert!(err.to_string().contains("mixed"), "{err}");
    }

    #[test]
    fn daily_input_is_month_averaged() {
        let text = "date,a\n2015-01-05,2\n2015-01-25,4\n2015-02-10,5\n";
        let p = parse_panel(text).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.column("a").unwrap(), &[3.0, 5.0]);
    }

    #[test]
    fn csv_round_trip_is_bit_identical() {
        let p = TimeSeriesPanel::from_columns(
            months("2015-01", 3),
            vec![
                ("a".into(), vec![0.1, -2.5e-7, 3.0]),
                ("b".into(), vec![1.0 / 3.0, 2.0, f64::MIN_POSITIVE]),
            ],
        )
        .unwrap();
        let first = p.to_csv_string();
        let reparsed = parse_panel(&first).unwrap();
        assert_eq!(reparsed, p);
        assert_eq!(reparsed.to_csv_string(), first);
    }

    #[test]
    fn log_diff_matches_hand_value() {
        let d = log_diff(&[100.0, 110.0]).unwrap();
        assert_eq!(d.len(), 1);
        assert_abs_diff_eq!(d[0], 0.0953101798043249, epsilon = 1e-15);
    }

    #[test]
    fn log_diff_rejects_nonpositive_with_index() {
        let err = log_diff(&[1.0, 0.0, 2.0]).unwrap_err();
        assert!(err.to_string().contains("index 1"), "{err}");
        assert!(log_diff(&[5.0]).is_err());
    }

    #[test]
    fn apply_log_diff_keeps_panel_rectangular() {
        let p = TimeSeriesPanel::from_columns(
            months("2015-01", 3),
            vec![
                ("px".into(), vec![100.0, 110.0, 121.0]),
                ("rate".into(), vec![0.5, 0.6, 0.7]),
            ],
        )
        .unwrap();
        let out = p.apply_log_diff(&["px"]).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out.dates()[0].to_string(), "2015-02");
        assert_abs_diff_eq!(out.column("px").unwrap()[0], 0.0953101798043249, epsilon = 1e-15);
        assert_eq!(out.column("rate").unwrap(), &[0.6, 0.7]);
    }

    #[test]
    fn align_monthly_is_idempotent_on_monthly_input() {
        let dates: Vec<ObsDate> = ["2015-01", "2015-02", "2015-03"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let vals = [1.0, 2.0, 3.0];
        let (m, v) = align_monthly(&dates, &vals).unwrap();
        assert_eq!(m, months("2015-01", 3));
        assert_eq!(v, vals);
    }

    #[test]
    fn align_monthly_flags_empty_month() {
        let dates: Vec<ObsDate> = ["2015-01-10", "2015-03-10"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let err = align_monthly(&dates, &[1.0, 2.0]).unwrap_err();
        assert!(err.to_string().contains("2015-02"), "{err}");
    }

    #[test]
    fn align_monthly_rejects_unordered_input() {
        let dates: Vec<ObsDate> = ["2015-01-10", "2015-01-05"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert!(align_monthly(&dates, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn standardize_matches_hand_values() {
        let z = standardize(&[0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(z[0], -std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(z[1], std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        assert!(standardize(&[3.0, 3.0, 3.0]).is_err());
    }

    #[test]
    fn panel_rejects_nan() {
        let bad = DMatrix::from_row_slice(2, 1, &[1.0, f64::NAN]);
        assert!(TimeSeriesPanel::new(months("2015-01", 2), vec!["a".into()], bad).is_err());
    }

    proptest! {
        #[test]
        fn log_diff_then_cumulate_reconstructs_prices(
            start in 1.0e-2_f64..1.0e4,
            rets in proptest::collection::vec(-0.2_f64..0.2, 1..60),
        ) {
            let mut prices = vec![start];
            for r in &rets {
                prices.push(prices.last().unwrap() * r.exp());
            }
            let d = log_diff(&prices).unwrap();
            let mut rebuilt = vec![prices[0]];
            for r in &d {
                rebuilt.push(rebuilt.last().unwrap() * r.exp());
            }
            for (p, q) in prices.iter().zip(&rebuilt) {
                prop_assert!((p - q).abs() <= 1e-9 * p.abs());
            }
        }

        #[test]
        fn standardize_is_affine_invariant(
            xs in proptest::collection::vec(-50.0_f64..50.0, 3..40),
            shift in -100.0_f64..100.0,
            scale in 0.1_f64..10.0,
        ) {
            let spread = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                - xs.iter().cloned().fold(f64::INFINITY, f64::min);
            prop_assume!(spread > 1e-6);
            let shifted: Vec<f64> = xs.iter().map(|v| shift + scale * v).collect();
            let a = standardize(&xs).unwrap();
            let b = standardize(&shifted).unwrap();
            for (u, v) in a.iter().zip(&b) {
                prop_assert!((u - v).abs() < 1e-8);
            }
        }

        #[test]
        fn align_monthly_means_match_naive_grouping(
            start in 0u8..12,
            counts in proptest::collection::vec(1usize..6, 1..12),
            values in proptest::collection::vec(-100.0_f64..100.0, 60),
        ) {
            // Build a contiguous span of months, each holding `counts[i]`
            // daily observations, then compare against a group-by oracle.
            let mut dates = Vec::new();
            let mut vals = Vec::new();
            let mut expected = Vec::new();
            let mut vi = 0usize;
            for (mi, &cnt) in counts.iter().enumerate() {
                let midx = start as usize + mi;
                let mut sum = 0.0;
                for d in 0..cnt {
                    let month =
                        Month::new(2019 + (midx / 12) as i32, (midx % 12 + 1) as u8).unwrap();
                    let v = values[vi % values.len()];
                    vi += 1;
                    dates.push(ObsDate { month, day: Some((d + 1) as u8) });
                    vals.push(v);
                    sum += v;
                }
                expected.push(sum / cnt as f64);
            }
            let (m_out, v_out) = align_monthly(&dates, &vals).unwrap();
            prop_assert_eq!(m_out.len(), counts.len());
            for (i, e) in expected.iter().enumerate() {
                prop_assert!((v_out[i] - e).abs() < 1e-9);
            }
        }
    }
}
