//! `fmres plotdata`: validate an artifact and re-emit it as tidy
//! plot-ready CSV. Kinds map one-to-one to the files the other
//! subcommands write; the `npdc` kind additionally drops the
//! antisymmetric duplicate of every pair.

use std::collections::BTreeSet;

use fmres_core::{Error, Result};

use crate::cli::{PlotKind, PlotdataArgs};
use crate::config::{file_digest, RunConfig};
use crate::output::{read_csv_artifact, write_artifact};

fn schema_error(kind: &str, detail: impl std::fmt::Display) -> Error {
    Error::invalid(format!("{kind} artifact schema mismatch: {detail}"))
}

fn expect_header(kind: &str, header: &[String], expected: &[&str]) -> Result<()> {
    if header != expected {
        return Err(schema_error(
            kind,
            format!("header is '{}', expected '{}'", header.join(","), expected.join(",")),
        ));
    }
    Ok(())
}

fn split_row<'a>(kind: &str, row: &'a str, cells: usize) -> Result<Vec<&'a str>> {
    let parts: Vec<&str> = row.split(',').map(str::trim).collect();
    if parts.len() != cells {
        return Err(schema_error(
            kind,
            format!("row '{row}' has {} cells, expected {cells}", parts.len()),
        ));
    }
    Ok(parts)
}

fn expect_f64(kind: &str, cell: &str, what: &str) -> Result<f64> {
    let v: f64 = cell
        .parse()
        .map_err(|_| schema_error(kind, format!("{what} cell '{cell}' is not numeric")))?;
    if !v.is_finite() {
        return Err(schema_error(kind, format!("{what} cell '{cell}' is not finite")));
    }
    Ok(v)
}

/// The surface must be a complete grid: every date appears with every
/// horizon and every (response, shock) pair.
fn validate_irf(rows: &[String]) -> Result<()> {
    let mut dates = BTreeSet::new();
    let mut horizons = BTreeSet::new();
    let mut responders = BTreeSet::new();
    let mut shocks = BTreeSet::new();
    for row in rows {
        let parts = split_row("irf", row, 5)?;
        dates.insert(parts[0].to_string());
        let h: usize = parts[1]
            .parse()
            .map_err(|_| schema_error("irf", format!("horizon cell '{}' is not an integer", parts[1])))?;
        horizons.insert(h);
        responders.insert(parts[2].to_string());
        shocks.insert(parts[3].to_string());
        expect_f64("irf", parts[4], "value")?;
    }
    let expected = dates.len() * horizons.len() * responders.len() * shocks.len();
    if rows.len() != expected {
        return Err(schema_error(
            "irf",
            format!(
                "{} rows but {} dates x {} horizons x {} responders x {} shocks = {expected}",
                rows.len(),
                dates.len(),
                horizons.len(),
                responders.len(),
                shocks.len(),
            ),
        ));
    }
    Ok(())
}

fn validate_resilience(rows: &[String]) -> Result<()> {
    for row in rows {
        let parts = split_row("resilience", row, 6)?;
        expect_f64("resilience", parts[3], "intensity")?;
        expect_f64("resilience", parts[4], "duration")?;
        if parts[5] != "true" && parts[5] != "false" {
            return Err(schema_error(
                "resilience",
                format!("degenerate cell '{}' is not true/false", parts[5]),
            ));
        }
    }
    Ok(())
}

fn validate_connect(rows: &[String]) -> Result<()> {
    for row in rows {
        let parts = split_row("connect", row, 4)?;
        if !["TCI", "FROM", "TO", "NET"].contains(&parts[1]) {
            return Err(schema_error(
                "connect",
                format!("index_type cell '{}' is not one of TCI/FROM/TO/NET", parts[1]),
            ));
        }
        expect_f64("connect", parts[3], "value")?;
    }
    Ok(())
}

/// Keep one row per unordered pair: the direction whose `from` variable
/// appeared first in the file. Rank is first-appearance order over the
/// from and to cells, so the kept rows read `from < to` in that order.
fn dedupe_npdc(rows: &[String]) -> Result<Vec<String>> {
    let mut rank: Vec<String> = Vec::new();
    let index_of = |name: &str, rank: &mut Vec<String>| -> usize {
        match rank.iter().position(|n| n == name) {
            Some(i) => i,
            None => {
                rank.push(name.to_string());
                rank.len() - 1
            }
        }
    };
    let mut kept = Vec::new();
    for row in rows {
        let parts = split_row("npdc", row, 4)?;
        expect_f64("npdc", parts[3], "npdc")?;
        let from = index_of(parts[1], &mut rank);
        let to = index_of(parts[2], &mut rank);
        if from < to {
            kept.push(row.clone());
        }
    }
    Ok(kept)
}

pub fn run(cfg: &RunConfig, args: &PlotdataArgs) -> Result<()> {
    let digest = file_digest(&args.artifact)?;
    let (header, rows) = read_csv_artifact(&args.artifact)?;
    let hash = cfg.config_hash(&digest);

    let (name, out_header, out_rows) = match args.kind {
        PlotKind::Irf => {
            expect_header("irf", &header, &["date", "horizon", "response_var", "shock_var", "value"])?;
            validate_irf(&rows)?;
            ("plotdata_irf.csv", header, rows)
        }
        PlotKind::Resilience => {
            expect_header(
                "resilience",
                &header,
                &["date", "market", "shock", "intensity", "duration", "degenerate"],
            )?;
            validate_resilience(&rows)?;
            ("plotdata_resilience.csv", header, rows)
        }
        PlotKind::Connect => {
            expect_header("connect", &header, &["date", "index_type", "market", "value"])?;
            validate_connect(&rows)?;
            ("plotdata_connect.csv", header, rows)
        }
        PlotKind::Npdc => {
            expect_header("npdc", &header, &["date", "from", "to", "npdc"])?;
            let kept = dedupe_npdc(&rows)?;
            ("plotdata_npdc.csv", header, kept)
        }
    };

    let mut body = out_header.join(",");
    body.push('\n');
    for row in &out_rows {
        body.push_str(row);
        body.push('\n');
    }
    write_artifact(&cfg.out.join(name), &hash, &body)?;
    println!("plotdata: {} rows -> {}", out_rows.len(), cfg.out.join(name).display());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn npdc_dedupe_keeps_first_direction_only() {
        let rows: Vec<String> = [
            "2020-01,a,b,1.5",
            "2020-01,b,a,-1.5",
            "2020-01,a,c,0.2",
            "2020-01,c,a,-0.2",
            "2020-01,b,c,0.0",
            "2020-01,c,b,-0.0",
            "2020-02,a,b,2.5",
            "2020-02,b,a,-2.5",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        let kept = dedupe_npdc(&rows).unwrap();
        assert_eq!(
            kept,
            vec![
                "2020-01,a,b,1.5".to_string(),
                "2020-01,a,c,0.2".to_string(),
                "2020-01,b,c,0.0".to_string(),
                "2020-02,a,b,2.5".to_string(),
            ]
        );
    }

    #[test]
    fn irf_grid_must_be_complete() {
        let full: Vec<String> = vec![
            "2020-01,1,a,a,0.1".into(),
            "2020-01,1,a,b,0.2".into(),
            "2020-01,1,b,a,0.3".into(),
            "2020-01,1,b,b,0.4".into(),
        ];
        assert!(validate_irf(&full).is_ok());
        let partial = full[..3].to_vec();
        assert!(validate_irf(&partial).is_err());
    }

    #[test]
    fn connect_rows_reject_unknown_index_type() {
        assert!(validate_connect(&["2020-01,TCI,ALL,12.5".into()]).is_ok());
        assert!(validate_connect(&["2020-01,GROSS,a,1.0".into()]).is_err());
    }
}
