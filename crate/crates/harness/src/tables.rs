//! Plot-ready tables pivoted from a [`RunRecord`].
//!
//! | figure | rows | columns |
//! |---|---|---|
//! | `f6`, `f7` | tuned QAOA strategy × SNR | `snr_db, init_strategy, n_problems, mean_normalized_expected_energy, mean_bit_errors, ber` |
//! | `f8` | SNR | temporal mean bit errors and normalized energies, tuned and one-iteration |
//! | `f11` | SNR | `snr_db` then mean expected energy per error rate |
//! | `f9` | sub-block × budget | `subblock, n_v, budget_us, required_gd_ns` |
//!
//! `f6` and `f7` share a layout; by convention `f6` holds LDPC runs and `f7`
//! polar runs.

use std::str::FromStr;

use fdeq_core::textfmt::fmt9;

use crate::config::{MODE_ONE_ITERATION, MODE_TUNED};
use crate::error::{HarnessError, Result};
use crate::record::{Aggregate, RunRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    F6,
    F7,
    F8,
    F11,
    F9,
}

impl FromStr for Figure {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "f6" => Ok(Figure::F6),
            "f7" => Ok(Figure::F7),
            "f8" => Ok(Figure::F8),
            "f11" => Ok(Figure::F11),
            "f9" => Ok(Figure::F9),
            other => Err(HarnessError::Config(format!("unknown figure {other:?}"))),
        }
    }
}

fn missing(cols: &[&str]) -> HarnessError {
    HarnessError::MissingColumns(cols.iter().map(|c| c.to_string()).collect())
}

fn to_csv(header: &[String], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn qaoa_groups<'a>(record: &'a RunRecord, mode: &str) -> Vec<&'a Aggregate> {
    record
        .aggregates
        .iter()
        .filter(|a| a.mode == mode && a.error_rate.is_none())
        .collect()
}

fn strategy_table(record: &RunRecord) -> Result<String> {
    let groups = qaoa_groups(record, MODE_TUNED);
    if groups.is_empty() {
        return Err(missing(&["init_strategy", "mode=tuned"]));
    }
    // Strategy-major order, SNRs ascending within each strategy.
    let mut strategies: Vec<&str> = Vec::new();
    for a in &groups {
        if !strategies.contains(&a.init_strategy.as_str()) {
            strategies.push(&a.init_strategy);
        }
    }
    let mut rows = Vec::new();
    for s in strategies {
        let mut of_s: Vec<&&Aggregate> = groups.iter().filter(|a| a.init_strategy == s).collect();
        of_s.sort_by(|a, b| a.snr_db.total_cmp(&b.snr_db));
        for a in of_s {
            let (Some(energy), Some(errors), Some(ber)) =
                (a.mean_normalized_expected_energy, a.mean_bit_errors, a.ber)
            else {
                return Err(missing(&["normalized_expected_energy", "bit_errors"]));
            };
            rows.push(vec![
                fmt9(a.snr_db),
                a.init_strategy.clone(),
                a.n_problems.to_string(),
                fmt9(energy),
                fmt9(errors),
                fmt9(ber),
            ]);
        }
    }
    let header = [
        "snr_db",
        "init_strategy",
        "n_problems",
        "mean_normalized_expected_energy",
        "mean_bit_errors",
        "ber",
    ]
    .map(String::from);
    to_csv(&header, &rows)
}

fn one_iteration_table(record: &RunRecord) -> Result<String> {
    let tuned: Vec<&Aggregate> = qaoa_groups(record, MODE_TUNED)
        .into_iter()
        .filter(|a| a.init_strategy == "temporal")
        .collect();
    if tuned.is_empty() {
        return Err(missing(&["init_strategy=temporal", "mode=tuned"]));
    }
    let mut snrs: Vec<f64> = tuned.iter().map(|a| a.snr_db).collect();
    snrs.sort_by(f64::total_cmp);
    snrs.dedup();
    let mut rows = Vec::new();
    for snr in snrs {
        let (Some(t), Some(o)) = (
            record.find(snr, "temporal", MODE_TUNED),
            record.find(snr, "temporal", MODE_ONE_ITERATION),
        ) else {
            return Err(missing(&["mode=one-iteration"]));
        };
        let cells = [
            t.mean_bit_errors,
            o.mean_bit_errors,
            t.mean_normalized_expected_energy,
            o.mean_normalized_expected_energy,
        ];
        if cells.iter().any(Option::is_none) {
            return Err(missing(&["bit_errors", "normalized_expected_energy"]));
        }
        let mut row = vec![fmt9(snr)];
        row.extend(cells.iter().map(|c| fmt9(c.unwrap_or_default())));
        rows.push(row);
    }
    let header = [
        "snr_db",
        "tuned_mean_bit_errors",
        "one_iteration_mean_bit_errors",
        "tuned_mean_normalized_expected_energy",
        "one_iteration_mean_normalized_expected_energy",
    ]
    .map(String::from);
    to_csv(&header, &rows)
}

fn noise_table(record: &RunRecord) -> Result<String> {
    let groups: Vec<&Aggregate> = record
        .aggregates
        .iter()
        .filter(|a| a.error_rate.is_some())
        .collect();
    if groups.is_empty() {
        return Err(missing(&["error_rate"]));
    }
    let mut rates: Vec<f64> = Vec::new();
    let mut snrs: Vec<f64> = Vec::new();
    for a in &groups {
        let r = a.error_rate.unwrap_or_default();
        if !rates.contains(&r) {
            rates.push(r);
        }
        if !snrs.contains(&a.snr_db) {
            snrs.push(a.snr_db);
        }
    }
    snrs.sort_by(f64::total_cmp);
    let mut header = vec!["snr_db".to_string()];
    header.extend(rates.iter().map(|r| format!("rate_{}", fmt9(*r))));
    let mut rows = Vec::new();
    for snr in snrs {
        let mut row = vec![fmt9(snr)];
        for &r in &rates {
            let cell = groups
                .iter()
                .find(|a| a.snr_db == snr && a.error_rate == Some(r))
                .map(|a| fmt9(a.mean_expected_energy))
                .unwrap_or_default();
            row.push(cell);
        }
        rows.push(row);
    }
    to_csv(&header, &rows)
}

fn gate_duration_table(record: &RunRecord) -> Result<String> {
    if record.gate_durations.is_empty() {
        return Err(missing(&["subblock", "budget_us", "required_gd_ns"]));
    }
    let header = ["subblock", "n_v", "budget_us", "required_gd_ns"].map(String::from);
    let rows: Vec<Vec<String>> = record
        .gate_durations
        .iter()
        .map(|g| {
            vec![
                g.subblock.to_string(),
                g.n_v.to_string(),
                fmt9(g.budget_us),
                fmt9(g.required_gd_ns),
            ]
        })
        .collect();
    to_csv(&header, &rows)
}

/// The table for `figure`, or [`HarnessError::MissingColumns`] when the
/// record does not hold the data it needs.
pub fn figure_tables(record: &RunRecord, figure: Figure) -> Result<String> {
    match figure {
        Figure::F6 | Figure::F7 => strategy_table(record),
        Figure::F8 => one_iteration_table(record),
        Figure::F11 => noise_table(record),
        Figure::F9 => gate_duration_table(record),
    }
}
