//! The `fdeq` subcommands, each writing its outputs into one directory.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use fdeq_core::channel::{blocks_from_csv, blocks_to_csv};
use fdeq_core::codes::Code;
use fdeq_core::decoders::{SclConfig, DEFAULT_BP_ITERATIONS};
use fdeq_core::qaoa::{DEFAULT_MAX_ITERATIONS, DEFAULT_TOP_M};
use fdeq_core::BitVector;
use serde::Serialize;

use crate::config::{Config, ExperimentSpec, Mode, NoiseSweepSpec, ResourceSpec};
use crate::error::{HarnessError, Result};
use crate::record::RunRecord;
use crate::resources::{qubit_csv, resource_tables};
use crate::run::{decode_blocks, generate_snr_blocks, noise_sweep, run_experiment};
use crate::tables::{figure_tables, Figure};

fn write(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| HarnessError::io(&path, e))?;
    Ok(path)
}

fn output_dir(spec_dir: Option<&Path>, out: Option<&Path>) -> Result<PathBuf> {
    let dir = out
        .or(spec_dir)
        .ok_or_else(|| HarnessError::Config("no output directory: pass --out".into()))?
        .to_path_buf();
    std::fs::create_dir_all(&dir).map_err(|e| HarnessError::io(&dir, e))?;
    Ok(dir)
}

#[derive(Serialize)]
struct DecoderDefaults {
    bp_max_iterations: usize,
    scl_list_size: Option<usize>,
    qaoa_max_iterations: usize,
    preamble_max_iterations: usize,
    extraction_top_m: usize,
    satisfier_weight: &'static str,
    seed_derivation: &'static str,
}

#[derive(Serialize)]
struct Metadata<'a> {
    experiment: &'a ExperimentSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    noise_sweep: Option<&'a NoiseSweepSpec>,
    defaults: DecoderDefaults,
}

fn metadata(spec: &ExperimentSpec, code: &Code, sweep: Option<&NoiseSweepSpec>) -> Result<String> {
    let m = Metadata {
        experiment: spec,
        noise_sweep: sweep,
        defaults: DecoderDefaults {
            bp_max_iterations: DEFAULT_BP_ITERATIONS,
            scl_list_size: match code {
                Code::Polar(cfg) => Some(SclConfig::exhaustive(cfg).list_size),
                Code::Ldpc(_) => None,
            },
            qaoa_max_iterations: DEFAULT_MAX_ITERATIONS,
            preamble_max_iterations: DEFAULT_MAX_ITERATIONS,
            extraction_top_m: DEFAULT_TOP_M,
            satisfier_weight: "sum of |LLR| plus 1",
            seed_derivation: "mix(mix(master_seed, snr_index), problem_index), \
                              mix(a, b) = splitmix64(a ^ splitmix64(b))",
        },
    };
    toml::to_string(&m).map_err(|e| HarnessError::Config(e.to_string()))
}

fn finish(record: &RunRecord, written: Vec<PathBuf>) -> Result<Vec<PathBuf>> {
    match &record.failure {
        Some(msg) => Err(HarnessError::RunFailed(msg.clone())),
        None => Ok(written),
    }
}

/// `blocks.csv` (preamble truth only) and `truth.csv` (every block).
pub fn encode(cfg: &Config, out: Option<&Path>) -> Result<Vec<PathBuf>> {
    let spec = cfg.experiment()?;
    let code = spec.validate()?;
    let dir = output_dir(spec.output_dir.as_deref(), out)?;
    let mut blocks = Vec::new();
    let mut truth = csv::Writer::from_writer(Vec::new());
    truth.write_record(["block_id", "data_bits"])?;
    for (s, &snr) in spec.snr_list_db.iter().enumerate() {
        for g in generate_snr_blocks(&code, spec.master_seed, s, snr, spec.problems_per_snr)? {
            truth.write_record([g.block.block_id.to_string(), g.data.to_string()])?;
            blocks.push(g.block);
        }
    }
    let truth = truth.into_inner().map_err(|e| HarnessError::Csv(e.into_error().into()))?;
    Ok(vec![
        write(&dir, "blocks.csv", &blocks_to_csv(&blocks)?)?,
        write(&dir, "truth.csv", &String::from_utf8(truth).expect("UTF-8"))?,
    ])
}

fn read_truth(path: &Path) -> Result<HashMap<u64, BitVector>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut map = HashMap::new();
    for rec in r.records() {
        let rec = rec?;
        let id: u64 = rec
            .get(0)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| HarnessError::Config(format!("{}: bad block_id", path.display())))?;
        let bits = BitVector::parse(rec.get(1).unwrap_or(""))?;
        map.insert(id, bits);
    }
    Ok(map)
}

/// Decodes a `blocks.csv` into `results.csv`.
pub fn decode(cfg: &Config, out: Option<&Path>) -> Result<Vec<PathBuf>> {
    let spec = cfg.experiment()?;
    let input = cfg
        .decode
        .as_ref()
        .ok_or_else(|| HarnessError::Config("missing [decode] table".into()))?;
    let code = spec.validate()?;
    let dir = output_dir(spec.output_dir.as_deref(), out)?;
    let text = std::fs::read_to_string(&input.blocks_file)
        .map_err(|e| HarnessError::io(&input.blocks_file, e))?;
    let blocks = blocks_from_csv(&text)?;
    let truth = match &input.truth_file {
        Some(p) => read_truth(p)?,
        None => HashMap::new(),
    };
    let record = decode_blocks(spec, blocks, &truth, input.snr_step_db)?;
    let written = vec![
        write(&dir, "results.csv", &record.to_csv()?)?,
        write(&dir, "metadata.toml", &metadata(spec, &code, None)?)?,
    ];
    finish(&record, written)
}

/// Runs the experiment: `results.csv`, `metadata.toml`, the strategy table
/// (`f6.csv` for LDPC, `f7.csv` for polar) and, in `both` mode, `f8.csv`.
pub fn bench(cfg: &Config, out: Option<&Path>) -> Result<Vec<PathBuf>> {
    let spec = cfg.experiment()?;
    let code = spec.validate()?;
    let dir = output_dir(spec.output_dir.as_deref(), out)?;
    let record = run_experiment(spec)?;
    let mut written = vec![
        write(&dir, "results.csv", &record.to_csv()?)?,
        write(&dir, "metadata.toml", &metadata(spec, &code, None)?)?,
    ];
    if record.failure.is_none() && !spec.init_strategies.is_empty() {
        let (name, fig) = match code {
            Code::Ldpc(_) => ("f6.csv", Figure::F6),
            Code::Polar(_) => ("f7.csv", Figure::F7),
        };
        if spec.mode != Mode::OneIteration {
            written.push(write(&dir, name, &figure_tables(&record, fig)?)?);
        }
        if spec.mode == Mode::Both {
            written.push(write(&dir, "f8.csv", &figure_tables(&record, Figure::F8)?)?);
        }
    }
    finish(&record, written)
}

/// `noise_sweep.csv` with every problem and aggregate, and the `f11.csv`
/// matrix.
pub fn noise_sweep_cmd(cfg: &Config, out: Option<&Path>) -> Result<Vec<PathBuf>> {
    let spec = cfg.experiment()?;
    let code = spec.code.build()?;
    let sweep = cfg.noise_sweep.clone().unwrap_or_default();
    let dir = output_dir(spec.output_dir.as_deref(), out)?;
    let record = noise_sweep(spec, &sweep)?;
    Ok(vec![
        write(&dir, "noise_sweep.csv", &record.to_csv()?)?,
        write(&dir, "f11.csv", &figure_tables(&record, Figure::F11)?)?,
        write(&dir, "metadata.toml", &metadata(spec, &code, Some(&sweep))?)?,
    ])
}

/// `f9.csv` (required gate durations) and `qubits.csv`.
pub fn resources_cmd(cfg: &Config, out: Option<&Path>) -> Result<Vec<PathBuf>> {
    let spec = cfg.resources.clone().unwrap_or_default();
    let dir = output_dir(
        cfg.experiment.as_ref().and_then(|e| e.output_dir.as_deref()),
        out,
    )?;
    let record = resource_tables(&spec)?;
    Ok(vec![
        write(&dir, "f9.csv", &figure_tables(&record, Figure::F9)?)?,
        write(&dir, "qubits.csv", &qubit_csv(&record)?)?,
    ])
}
