//! Runtime and qubit-count arithmetic for QAOA decoding at base-station
//! scale.
//!
//! A block of `N` bits is split into `N_sub` sub-blocks decoded in sequence.
//! One sub-block costs `N_it · N_ly · GD · CD_ly · N_s`, where the per-layer
//! circuit depth is `CD_ly = c · N_v` for a sub-block QUBO of `N_v`
//! variables. Keeping up with `N_PPS` problems per second then needs
//! `N_PPS · N_Q/p · T_run` qubits.

use std::str::FromStr;

use crate::codes::ParityCheckMatrix;
use crate::error::{Error, Result};

/// QUBO variables for one sub-block: `N + N·log₂N` for Polar; for LDPC, the
/// sub-block's bits plus `⌊deg/2⌋` ancillas for every check of `h` whose
/// support lies entirely inside the first `subblock_bits` columns.
pub fn qubo_vars_for_subblock(
    family: &str,
    subblock_bits: usize,
    h: Option<&ParityCheckMatrix>,
) -> Result<usize> {
    match family.to_ascii_lowercase().as_str() {
        "polar" => {
            if subblock_bits == 0 || !subblock_bits.is_power_of_two() {
                return Err(Error::InvalidParameter(format!(
                    "polar sub-block of {subblock_bits} bits is not a power of two"
                )));
            }
            let d = subblock_bits.trailing_zeros() as usize;
            Ok(subblock_bits + subblock_bits * d)
        }
        "ldpc" => {
            let h = h.ok_or_else(|| {
                Error::InvalidParameter("LDPC variable count needs a parity-check matrix".into())
            })?;
            if subblock_bits == 0 || subblock_bits > h.n_bits() {
                return Err(Error::InvalidParameter(format!(
                    "sub-block of {subblock_bits} bits does not fit a code of length {}",
                    h.n_bits()
                )));
            }
            let ancillas: usize = h
                .checks()
                .iter()
                .filter(|row| row.iter().all(|&b| b < subblock_bits))
                .map(|row| row.len() / 2)
                .sum();
            Ok(subblock_bits + ancillas)
        }
        other => Err(Error::UnsupportedFamily(other.to_string())),
    }
}

/// Hardware connectivity presets for the per-layer depth coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    /// `6n`
    HeavyHex,
    /// `5n/2`
    Sycamore,
    /// `n`
    Linear,
}

impl Topology {
    pub fn depth_coeff(self) -> f64 {
        match self {
            Topology::HeavyHex => 6.0,
            Topology::Sycamore => 2.5,
            Topology::Linear => 1.0,
        }
    }
}

impl FromStr for Topology {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "heavy-hex" | "heavyhex" => Ok(Topology::HeavyHex),
            "sycamore" => Ok(Topology::Sycamore),
            "linear" => Ok(Topology::Linear),
            other => Err(Error::InvalidParameter(format!("unknown topology {other:?}"))),
        }
    }
}

/// Per-layer circuit depth for `n_v` variables.
pub fn depth_preset(topology: Topology, n_v: usize) -> f64 {
    topology.depth_coeff() * n_v as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResourceParams {
    pub block_length: usize,
    pub n_sub: usize,
    /// QUBO variables per sub-block.
    pub n_v: usize,
    pub n_it: usize,
    pub n_ly: usize,
    pub n_shots: usize,
    /// Seconds per two-qubit gate layer.
    pub gate_duration: f64,
    pub depth_coeff: f64,
    pub n_pps: f64,
    pub qubits_per_problem: f64,
    /// Seconds available per problem.
    pub t_run_budget: f64,
}

impl ResourceParams {
    /// A Polar block of `block_length` bits split into `n_sub` equal
    /// sub-blocks, with every count 1, `c = 1`, `GD = 1 s` and no budget.
    pub fn polar(block_length: usize, n_sub: usize) -> Result<Self> {
        if n_sub == 0 || !block_length.is_multiple_of(n_sub) {
            return Err(Error::InvalidParameter(format!(
                "{block_length} bits cannot be split into {n_sub} equal sub-blocks"
            )));
        }
        let n_v = qubo_vars_for_subblock("polar", block_length / n_sub, None)?;
        let p = Self {
            block_length,
            n_sub,
            n_v,
            n_it: 1,
            n_ly: 1,
            n_shots: 1,
            gate_duration: 1.0,
            depth_coeff: 1.0,
            n_pps: 0.0,
            qubits_per_problem: 0.0,
            t_run_budget: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("block_length", self.block_length),
            ("n_sub", self.n_sub),
            ("n_v", self.n_v),
            ("n_it", self.n_it),
            ("n_ly", self.n_ly),
            ("n_shots", self.n_shots),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(Error::InvalidParameter(format!("{name} must be at least 1")));
            }
        }
        if !(self.gate_duration > 0.0 && self.gate_duration.is_finite()) {
            return Err(Error::InvalidParameter("gate_duration must be positive".into()));
        }
        if !(self.depth_coeff > 0.0 && self.depth_coeff.is_finite()) {
            return Err(Error::InvalidParameter("depth_coeff must be positive".into()));
        }
        for (name, v) in [
            ("n_pps", self.n_pps),
            ("qubits_per_problem", self.qubits_per_problem),
            ("t_run_budget", self.t_run_budget),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be non-negative")));
            }
        }
        Ok(())
    }

    /// `N_sub · N_it · N_ly · c · N_v · N_s`, the number of gate-duration
    /// slots one problem occupies.
    pub fn gate_slots(&self) -> f64 {
        self.n_sub as f64
            * self.n_it as f64
            * self.n_ly as f64
            * self.depth_coeff
            * self.n_v as f64
            * self.n_shots as f64
    }
}

/// `T_run = N_sub · N_it · N_ly · GD · (c · N_v) · N_s` in seconds.
pub fn runtime(p: &ResourceParams) -> f64 {
    p.gate_slots() * p.gate_duration
}

/// The gate duration at which [`runtime`] equals `t_run_budget`.
pub fn required_gate_duration(p: &ResourceParams) -> f64 {
    p.t_run_budget / p.gate_slots()
}

/// `⌈N_PPS · N_Q/p · T_run⌉`. Products within `1e-9` (relative) of an integer
/// round to it, so floating-point residue does not add a qubit.
pub fn qubit_count(n_pps: f64, qubits_per_problem: f64, t_run: f64) -> u64 {
    let x = n_pps * qubits_per_problem * t_run;
    if !(x > 0.0) {
        return 0;
    }
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}

/// One row of the required-gate-duration grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GateDurationRow {
    pub subblock: usize,
    pub n_v: usize,
    pub budget_s: f64,
    pub required_gd_s: f64,
}

/// Required gate durations for a Polar block of `block_length` bits over
/// every `(sub-block size, budget)` pair, other counts taken from `base`.
pub fn gate_duration_grid(
    block_length: usize,
    subblocks: &[usize],
    budgets_s: &[f64],
    base: &ResourceParams,
) -> Result<Vec<GateDurationRow>> {
    let mut rows = Vec::with_capacity(subblocks.len() * budgets_s.len());
    for &s in subblocks {
        if s == 0 || !block_length.is_multiple_of(s) {
            return Err(Error::InvalidParameter(format!(
                "sub-block size {s} does not divide {block_length}"
            )));
        }
        let template = ResourceParams::polar(block_length, block_length / s)?;
        for &budget in budgets_s {
            let p = ResourceParams {
                t_run_budget: budget,
                n_it: base.n_it,
                n_ly: base.n_ly,
                n_shots: base.n_shots,
                depth_coeff: base.depth_coeff,
                ..template.clone()
            };
            p.validate()?;
            rows.push(GateDurationRow {
                subblock: s,
                n_v: p.n_v,
                budget_s: budget,
                required_gd_s: required_gate_duration(&p),
            });
        }
    }
    Ok(rows)
}
