//! Per-problem rows, per-group aggregates and their CSV form.

use fdeq_core::textfmt::fmt9;
use fdeq_core::BitVector;

use crate::error::{HarnessError, Result};

/// One decoded problem under one strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemRow {
    pub block_id: u64,
    pub snr_db: f64,
    /// `temporal`, `random`, `zero`, or a baseline: `BP`, `SCL-<L>`, `ML`.
    pub init_strategy: String,
    /// `tuned`, `one-iteration`, or `classical` for baselines.
    pub mode: String,
    pub p: usize,
    /// Depolarizing probability of a noise sweep.
    pub error_rate: Option<f64>,
    pub iterations_used: usize,
    /// QUBO cost of the extracted assignment.
    pub energy: f64,
    pub normalized_energy: Option<f64>,
    /// `⟨C⟩` of the final state; equals `energy` for classical decoders.
    pub expected_energy: f64,
    pub normalized_expected_energy: Option<f64>,
    /// Data-bit errors, when the transmitted word is known.
    pub bit_errors: Option<usize>,
    pub codeword_bit_errors: Option<usize>,
    pub decoded: BitVector,
    pub wall_time_us: u64,
}

/// Statistics of one `(snr, strategy, mode, error rate)` group.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub snr_db: f64,
    pub init_strategy: String,
    pub mode: String,
    pub error_rate: Option<f64>,
    pub n_problems: usize,
    pub mean_energy: f64,
    /// Sample variance (`n − 1` denominator); 0 for a single problem.
    pub energy_variance: f64,
    pub mean_expected_energy: f64,
    /// Standard error of `mean_expected_energy`.
    pub expected_energy_sem: f64,
    pub mean_normalized_expected_energy: Option<f64>,
    pub mean_bit_errors: Option<f64>,
    /// Total data-bit errors over total data bits transmitted.
    pub ber: Option<f64>,
}

/// Required-gate-duration table row.
#[derive(Debug, Clone, PartialEq)]
pub struct GateDurationEntry {
    pub subblock: usize,
    pub n_v: usize,
    pub budget_us: f64,
    pub required_gd_ns: f64,
}

/// Qubit requirement for one deployment scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitEntry {
    pub bandwidth_mhz: f64,
    pub antennas: usize,
    pub pps: f64,
    pub qubits: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunRecord {
    /// Data bits per block, the BER denominator.
    pub data_bits: usize,
    pub rows: Vec<ProblemRow>,
    pub aggregates: Vec<Aggregate>,
    pub gate_durations: Vec<GateDurationEntry>,
    pub qubits: Vec<QubitEntry>,
    /// Set when the run stopped early; `rows` hold what finished.
    pub failure: Option<String>,
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn sample_variance(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let m = mean(v);
    v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64
}

fn opt_bits(x: Option<f64>) -> Option<u64> {
    x.map(f64::to_bits)
}

impl RunRecord {
    pub fn new(data_bits: usize) -> Self {
        Self {
            data_bits,
            ..Self::default()
        }
    }

    /// Recomputes `aggregates` from `rows`, groups in order of first
    /// appearance.
    pub fn aggregate(&mut self) {
        let mut keys: Vec<(u64, &str, &str, Option<u64>)> = Vec::new();
        let mut groups: Vec<Vec<&ProblemRow>> = Vec::new();
        for r in &self.rows {
            let key = (
                r.snr_db.to_bits(),
                r.init_strategy.as_str(),
                r.mode.as_str(),
                opt_bits(r.error_rate),
            );
            match keys.iter().position(|k| *k == key) {
                Some(i) => groups[i].push(r),
                None => {
                    keys.push(key);
                    groups.push(vec![r]);
                }
            }
        }
        self.aggregates = groups
            .into_iter()
            .map(|g| {
                let n = g.len();
                let energies: Vec<f64> = g.iter().map(|r| r.energy).collect();
                let expected: Vec<f64> = g.iter().map(|r| r.expected_energy).collect();
                let normalized: Option<Vec<f64>> =
                    g.iter().map(|r| r.normalized_expected_energy).collect();
                let errors: Option<Vec<usize>> = g.iter().map(|r| r.bit_errors).collect();
                let (mean_bit_errors, ber) = match errors {
                    Some(e) => {
                        let total: usize = e.iter().sum();
                        let bits = n * self.data_bits;
                        (
                            Some(total as f64 / n as f64),
                            (bits > 0).then(|| total as f64 / bits as f64),
                        )
                    }
                    None => (None, None),
                };
                Aggregate {
                    snr_db: g[0].snr_db,
                    init_strategy: g[0].init_strategy.clone(),
                    mode: g[0].mode.clone(),
                    error_rate: g[0].error_rate,
                    n_problems: n,
                    mean_energy: mean(&energies),
                    energy_variance: sample_variance(&energies),
                    mean_expected_energy: mean(&expected),
                    expected_energy_sem: (sample_variance(&expected) / n as f64).sqrt(),
                    mean_normalized_expected_energy: normalized.map(|v| mean(&v)),
                    mean_bit_errors,
                    ber,
                }
            })
            .collect();
    }

    /// The aggregate of one group, if present.
    pub fn find(&self, snr_db: f64, strategy: &str, mode: &str) -> Option<&Aggregate> {
        self.aggregates.iter().find(|a| {
            a.snr_db == snr_db && a.init_strategy == strategy && a.mode == mode
        })
    }

    /// Problem rows followed by aggregate rows, distinguished by the `kind`
    /// column. Wall time is the last column. A failed run ends with a
    /// `# failed:` line.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(RESULT_COLUMNS)?;
        let opt = |x: Option<f64>| x.map(fmt9).unwrap_or_default();
        let opt_n = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
        for r in &self.rows {
            let decoded: String = r.decoded.iter().map(|b| char::from(b'0' + b)).collect();
            w.write_record([
                "problem".to_string(),
                r.block_id.to_string(),
                fmt9(r.snr_db),
                r.init_strategy.clone(),
                r.mode.clone(),
                r.p.to_string(),
                opt(r.error_rate),
                r.iterations_used.to_string(),
                fmt9(r.energy),
                opt(r.normalized_energy),
                fmt9(r.expected_energy),
                opt(r.normalized_expected_energy),
                opt_n(r.bit_errors),
                opt_n(r.codeword_bit_errors),
                decoded,
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                r.wall_time_us.to_string(),
            ])?;
        }
        for a in &self.aggregates {
            w.write_record([
                "aggregate".to_string(),
                String::new(),
                fmt9(a.snr_db),
                a.init_strategy.clone(),
                a.mode.clone(),
                String::new(),
                opt(a.error_rate),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                a.n_problems.to_string(),
                fmt9(a.mean_energy),
                fmt9(a.energy_variance),
                fmt9(a.mean_expected_energy),
                fmt9(a.expected_energy_sem),
                opt(a.mean_normalized_expected_energy),
                opt(a.mean_bit_errors),
                opt(a.ber),
                String::new(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| HarnessError::Csv(e.into_error().into()))?;
        let mut text = String::from_utf8(bytes).expect("csv output is UTF-8");
        if let Some(msg) = &self.failure {
            text.push_str(&format!("# failed: {}\n", msg.replace('\n', " ")));
        }
        Ok(text)
    }
}

/// Header of `results.csv`.
pub const RESULT_COLUMNS: [&str; 24] = [
    "kind",
    "block_id",
    "snr_db",
    "init_strategy",
    "mode",
    "p",
    "error_rate",
    "iterations_used",
    "energy",
    "normalized_energy",
    "expected_energy",
    "normalized_expected_energy",
    "bit_errors",
    "codeword_bit_errors",
    "decoded",
    "n_problems",
    "mean_energy",
    "energy_variance",
    "mean_expected_energy",
    "expected_energy_sem",
    "mean_normalized_expected_energy",
    "mean_bit_errors",
    "ber",
    "wall_time_us",
];
