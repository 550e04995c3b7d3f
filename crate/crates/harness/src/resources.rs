use fdeq_core::resources::{gate_duration_grid, qubit_count, ResourceParams};
use fdeq_core::textfmt::fmt9;

use crate::config::ResourceSpec;
use crate::error::{HarnessError, Result};
use crate::record::{GateDurationEntry, QubitEntry, RunRecord};

/// Gate-duration grid over every sub-block size and budget, plus the qubit
/// requirement of every scenario.
pub fn resource_tables(spec: &ResourceSpec) -> Result<RunRecord> {
    let c = spec.resolved_depth_coeff()?;
    let base = ResourceParams {
        n_it: spec.n_it,
        n_ly: spec.n_ly,
        n_shots: spec.n_shots,
        depth_coeff: c,
        ..ResourceParams::polar(spec.block_length, 1)
            .map_err(|e| HarnessError::Config(e.to_string()))?
    };
    base.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
    let budgets: Vec<f64> = spec.budgets_us.iter().map(|b| b * 1e-6).collect();
    let grid = gate_duration_grid(spec.block_length, &spec.subblocks, &budgets, &base)
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    let gate_durations = grid
        .into_iter()
        .map(|r| GateDurationEntry {
            subblock: r.subblock,
            n_v: r.n_v,
            budget_us: r.budget_s * 1e6,
            required_gd_ns: r.required_gd_s * 1e9,
        })
        .collect();
    let qubits = spec
        .scenarios
        .iter()
        .map(|s| QubitEntry {
            bandwidth_mhz: s.bandwidth_mhz,
            antennas: s.antennas,
            pps: s.pps,
            qubits: qubit_count(s.pps, s.qubits_per_problem, s.t_run_us * 1e-6),
        })
        .collect();
    Ok(RunRecord {
        gate_durations,
        qubits,
        ..RunRecord::default()
    })
}

/// `bandwidth_mhz,antennas,pps,qubits`.
pub fn qubit_csv(record: &RunRecord) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["bandwidth_mhz", "antennas", "pps", "qubits"])?;
    for q in &record.qubits {
        w.write_record([
            fmt9(q.bandwidth_mhz),
            q.antennas.to_string(),
            fmt9(q.pps),
            q.qubits.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
