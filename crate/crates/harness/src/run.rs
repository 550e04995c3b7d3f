//! Experiment execution: block generation, the per-SNR preamble search, and
//! decoding of every payload block under each strategy and baseline.

use std::collections::HashMap;
use std::time::Instant;

use fdeq_core::channel::{group_by_snr, Frame, ReceivedBlock};
use fdeq_core::codes::Code;
use fdeq_core::decoders::{
    bp_decode_detailed, ml_decode_counted, scl_decode, BpConfig, SclConfig,
};
use fdeq_core::qaoa::{
    decode_qubo, warm_start_from_preamble, AnsatzParams, Backend, DecodeSettings, Extraction,
    InitStrategy, OptimizerConfig, NORMALIZATION_CAP,
};
use fdeq_core::qsim::{NoiseModel, DENSITY_CAP};
use fdeq_core::qubo::{brute_force_max, brute_force_min, build_qubo, Qubo};
use fdeq_core::{BitVector, Error as CoreError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Baseline, ExperimentSpec, NoiseSweepSpec, Strategy, MODE_ONE_ITERATION};
use crate::error::{HarnessError, Result};
use crate::record::{ProblemRow, RunRecord};
use crate::seed::{mix, problem_seed, TAG_RANDOM_INIT, TAG_SAMPLING};

/// Mode label of classical baseline rows.
pub const MODE_CLASSICAL: &str = "classical";

/// A transmitted block together with what was sent.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedBlock {
    /// Truth is set only on the preamble block.
    pub block: ReceivedBlock,
    pub data: BitVector,
    pub codeword: BitVector,
    pub seed: u64,
}

/// Blocks for one SNR: index 0 is the preamble, `1..=problems` the payload.
/// Block `i` draws its data word and noise from
/// `problem_seed(master_seed, snr_index, i)`.
pub fn generate_snr_blocks(
    code: &Code,
    master_seed: u64,
    snr_index: usize,
    snr_db: f64,
    problems: usize,
) -> Result<Vec<GeneratedBlock>> {
    (0..=problems)
        .map(|i| {
            let seed = problem_seed(master_seed, snr_index, i);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let data = BitVector::new((0..code.k()).map(|_| rng.random_range(0..2u8)).collect())?;
            let codeword = code.encode(&data)?;
            let id = (snr_index * (problems + 1) + i) as u64;
            let truth = (i == 0).then(|| data.clone());
            let block = ReceivedBlock::transmit(id, &codeword, snr_db, rng.random(), truth)?;
            Ok(GeneratedBlock {
                block,
                data,
                codeword,
                seed,
            })
        })
        .collect()
}

/// Angles found by the offline search on `preamble`.
pub fn preamble_params(code: &Code, preamble: &ReceivedBlock, p: usize) -> Result<AnsatzParams> {
    let frame = Frame {
        snr_db: preamble.snr_db,
        preamble: vec![preamble.clone()],
        payload: Vec::new(),
    };
    let builder = |b: &ReceivedBlock| build_qubo(code, &b.llrs, None);
    Ok(warm_start_from_preamble(&frame, builder, p, &OptimizerConfig::default())?)
}

/// What is known about the transmitted block.
#[derive(Clone, Copy)]
struct Truth<'a> {
    data: &'a BitVector,
    codeword: &'a BitVector,
}

/// `E_min` and `E_max` of a QUBO small enough to enumerate.
fn energy_span(qubo: &Qubo) -> Result<Option<(f64, f64)>> {
    if qubo.n_vars() > NORMALIZATION_CAP {
        return Ok(None);
    }
    Ok(Some((brute_force_min(qubo)?.1, brute_force_max(qubo)?.1)))
}

fn normalize(e: f64, span: Option<(f64, f64)>) -> Option<f64> {
    span.map(|(lo, hi)| {
        if hi > lo {
            ((e - lo) / (hi - lo)).clamp(0.0, 1.0)
        } else {
            0.0
        }
    })
}

fn elapsed_us(t: Instant) -> u64 {
    t.elapsed().as_micros().try_into().unwrap_or(u64::MAX)
}

/// QUBO assignment of a classical decoder's output.
fn assignment_for(code: &Code, qubo: &Qubo, data: &BitVector, bits: &BitVector) -> Result<BitVector> {
    Ok(match code {
        Code::Ldpc(_) => qubo.assignment_from_codeword(bits.as_slice())?,
        Code::Polar(cfg) => qubo.assignment_from_input(&cfg.input_vector(data)?)?,
    })
}

struct Problem<'a> {
    code: &'a Code,
    block: &'a ReceivedBlock,
    truth: Option<Truth<'a>>,
    seed: u64,
}

impl Problem<'_> {
    fn errors(&self, data: &BitVector, codeword: &BitVector) -> (Option<usize>, Option<usize>) {
        match self.truth {
            Some(t) => (
                Some(data.hamming_distance(t.data)),
                Some(codeword.hamming_distance(t.codeword)),
            ),
            None => (None, None),
        }
    }

    fn qaoa_rows(
        &self,
        qubo: &Qubo,
        spec: &ExperimentSpec,
        temporal: Option<&AnsatzParams>,
        error_rate: Option<f64>,
    ) -> Result<Vec<ProblemRow>> {
        let (backend, extraction) = match error_rate {
            Some(r) => (Backend::Noisy(NoiseModel::new(r, r)?), Extraction::default()),
            None => spec.backend.resolve(mix(self.seed, TAG_SAMPLING))?,
        };
        let modes = match error_rate {
            Some(_) => vec![(MODE_ONE_ITERATION, OptimizerConfig::one_iteration())],
            None => spec.mode.expand(),
        };
        let mut rows = Vec::new();
        for &strategy in &spec.init_strategies {
            let init = match strategy {
                Strategy::Temporal => InitStrategy::Temporal {
                    params: temporal
                        .cloned()
                        .ok_or(HarnessError::Core(CoreError::NoPreamble))?,
                },
                Strategy::Random => InitStrategy::Random {
                    seed: mix(self.seed, TAG_RANDOM_INIT),
                },
                Strategy::Zero => InitStrategy::Zero,
            };
            for (mode, cfg) in &modes {
                let settings = DecodeSettings {
                    p: spec.p_layers,
                    init: init.clone(),
                    optimizer: Some(*cfg),
                    backend,
                    extraction,
                    weight: None,
                };
                let t = Instant::now();
                let r = decode_qubo(qubo, &settings)?;
                let wall = elapsed_us(t);
                let (bit_errors, codeword_bit_errors) = self.errors(&r.data_bits, &r.codeword_bits);
                rows.push(ProblemRow {
                    block_id: self.block.block_id,
                    snr_db: self.block.snr_db,
                    init_strategy: strategy.name().to_string(),
                    mode: mode.to_string(),
                    p: spec.p_layers,
                    error_rate,
                    iterations_used: r.iterations_used,
                    energy: r.energy,
                    normalized_energy: r.normalized_energy,
                    expected_energy: r.expected_energy,
                    normalized_expected_energy: r.normalized_expected_energy,
                    bit_errors,
                    codeword_bit_errors,
                    decoded: r.data_bits,
                    wall_time_us: wall,
                });
            }
        }
        Ok(rows)
    }

    fn baseline_rows(&self, qubo: &Qubo, baselines: &[Baseline]) -> Result<Vec<ProblemRow>> {
        let span = if baselines.is_empty() {
            None
        } else {
            energy_span(qubo)?
        };
        let llrs = &self.block.llrs;
        let mut rows = Vec::new();
        for b in baselines {
            let t = Instant::now();
            let (name, iterations, data, bits) = match (b, self.code) {
                (Baseline::Bp, Code::Ldpc(c)) => {
                    let out = bp_decode_detailed(c.h(), llrs, &BpConfig::default())?;
                    let data = c.extract_data(out.bits.as_slice())?;
                    ("BP".to_string(), out.iterations, data, out.bits)
                }
                (Baseline::Scl, Code::Polar(cfg)) => {
                    let scl = SclConfig::exhaustive(cfg);
                    let data = scl_decode(cfg, llrs, &scl)?;
                    let x = cfg.encode(&data)?;
                    (format!("SCL-{}", scl.list_size), 0, data, x)
                }
                (Baseline::Ml, code) => {
                    let out = ml_decode_counted(code, llrs)?;
                    ("ML".to_string(), 0, out.data, out.codeword)
                }
                (b, code) => {
                    return Err(HarnessError::Config(format!(
                        "baseline {b:?} does not apply to {} codes",
                        code.family()
                    )))
                }
            };
            let energy = qubo.cost(assignment_for(self.code, qubo, &data, &bits)?.as_slice())?;
            let wall = elapsed_us(t);
            let (bit_errors, codeword_bit_errors) = self.errors(&data, &bits);
            rows.push(ProblemRow {
                block_id: self.block.block_id,
                snr_db: self.block.snr_db,
                init_strategy: name,
                mode: MODE_CLASSICAL.to_string(),
                p: 0,
                error_rate: None,
                iterations_used: iterations,
                energy,
                normalized_energy: normalize(energy, span),
                expected_energy: energy,
                normalized_expected_energy: normalize(energy, span),
                bit_errors,
                codeword_bit_errors,
                decoded: data,
                wall_time_us: wall,
            });
        }
        Ok(rows)
    }

    fn all_rows(&self, spec: &ExperimentSpec, temporal: Option<&AnsatzParams>) -> Result<Vec<ProblemRow>> {
        let qubo = build_qubo(self.code, &self.block.llrs, None)?;
        let mut rows = self.qaoa_rows(&qubo, spec, temporal, None)?;
        rows.extend(self.baseline_rows(&qubo, &spec.baselines)?);
        Ok(rows)
    }
}

fn wants_temporal(spec: &ExperimentSpec) -> bool {
    spec.init_strategies.contains(&Strategy::Temporal)
}

fn run_snr(spec: &ExperimentSpec, code: &Code, snr_index: usize, snr_db: f64) -> Result<Vec<ProblemRow>> {
    let blocks = generate_snr_blocks(code, spec.master_seed, snr_index, snr_db, spec.problems_per_snr)?;
    let temporal = if wants_temporal(spec) {
        Some(preamble_params(code, &blocks[0].block, spec.p_layers)?)
    } else {
        None
    };
    let per_problem: Result<Vec<Vec<ProblemRow>>> = blocks[1..]
        .par_iter()
        .map(|g| {
            let problem = Problem {
                code,
                block: &g.block,
                truth: Some(Truth {
                    data: &g.data,
                    codeword: &g.codeword,
                }),
                seed: g.seed,
            };
            problem.all_rows(spec, temporal.as_ref())
        })
        .collect();
    Ok(per_problem?.into_iter().flatten().collect())
}

/// Runs every SNR of `spec`. Configuration errors are returned as errors; a
/// failure while decoding stops the run and is recorded in
/// [`RunRecord::failure`] with the finished SNRs kept.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<RunRecord> {
    let code = spec.validate()?;
    let mut record = RunRecord::new(code.k());
    for (s, &snr) in spec.snr_list_db.iter().enumerate() {
        match run_snr(spec, &code, s, snr) {
            Ok(rows) => record.rows.extend(rows),
            Err(e) => {
                record.failure = Some(format!("at {snr} dB: {e}"));
                break;
            }
        }
    }
    record.aggregate();
    Ok(record)
}

/// One-iteration temporal decoding on the density-matrix backend with
/// `p1 = p2 = rate` for every rate of `sweep`. The preamble search runs once
/// per SNR, noiselessly, and its angles serve every rate.
pub fn noise_sweep(spec: &ExperimentSpec, sweep: &NoiseSweepSpec) -> Result<RunRecord> {
    let code = spec.code.build()?;
    if spec.snr_list_db.is_empty() || sweep.error_rates.is_empty() {
        return Err(HarnessError::Config("noise sweep needs SNRs and error rates".into()));
    }
    if sweep.problems_per_snr == 0 {
        return Err(HarnessError::Config("problems_per_snr must be at least 1".into()));
    }
    if let Some(r) = sweep.error_rates.iter().find(|r| !(0.0..=1.0).contains(*r)) {
        return Err(HarnessError::Config(format!("error rate {r} is outside [0, 1]")));
    }
    let n = build_qubo(&code, &vec![0.0; code.n()], None)?.n_vars();
    if n > DENSITY_CAP {
        return Err(CoreError::SizeLimit {
            what: "density-matrix qubits",
            limit: DENSITY_CAP,
            actual: n,
        }
        .into());
    }
    let temporal_only = ExperimentSpec {
        init_strategies: vec![Strategy::Temporal],
        ..spec.clone()
    };
    let mut record = RunRecord::new(code.k());
    for (s, &snr) in spec.snr_list_db.iter().enumerate() {
        let blocks = generate_snr_blocks(&code, spec.master_seed, s, snr, sweep.problems_per_snr)?;
        let params = preamble_params(&code, &blocks[0].block, spec.p_layers)?;
        for &rate in &sweep.error_rates {
            let rows: Result<Vec<Vec<ProblemRow>>> = blocks[1..]
                .par_iter()
                .map(|g| {
                    let problem = Problem {
                        code: &code,
                        block: &g.block,
                        truth: Some(Truth {
                            data: &g.data,
                            codeword: &g.codeword,
                        }),
                        seed: g.seed,
                    };
                    let qubo = build_qubo(&code, &g.block.llrs, None)?;
                    problem.qaoa_rows(&qubo, &temporal_only, Some(&params), Some(rate))
                })
                .collect();
            record.rows.extend(rows?.into_iter().flatten());
        }
    }
    record.aggregate();
    Ok(record)
}

/// Decodes received blocks grouped into frames by SNR. Each frame needs a
/// preamble block when the temporal strategy is requested. Payload blocks
/// are scored against `truth` (data words by block id) where available.
pub fn decode_blocks(
    spec: &ExperimentSpec,
    blocks: Vec<ReceivedBlock>,
    truth: &HashMap<u64, BitVector>,
    snr_step_db: f64,
) -> Result<RunRecord> {
    let code = spec.validate()?;
    let frames = group_by_snr(blocks, snr_step_db)?;
    let codewords: HashMap<u64, BitVector> = truth
        .iter()
        .map(|(id, u)| Ok((*id, code.encode(u)?)))
        .collect::<Result<_>>()?;
    let mut record = RunRecord::new(code.k());
    for (f, frame) in frames.iter().enumerate() {
        let temporal = if wants_temporal(spec) {
            let pre = frame.preamble.first().ok_or(CoreError::NoPreamble)?;
            Some(preamble_params(&code, pre, spec.p_layers)?)
        } else {
            None
        };
        let rows: Result<Vec<Vec<ProblemRow>>> = frame
            .payload
            .par_iter()
            .enumerate()
            .map(|(i, block)| {
                let t = truth.get(&block.block_id).zip(codewords.get(&block.block_id));
                let problem = Problem {
                    code: &code,
                    block,
                    truth: t.map(|(data, codeword)| Truth { data, codeword }),
                    seed: problem_seed(spec.master_seed, f, i + 1),
                };
                problem.all_rows(spec, temporal.as_ref())
            })
            .collect();
        match rows {
            Ok(r) => record.rows.extend(r.into_iter().flatten()),
            Err(e) => {
                record.failure = Some(format!("at {} dB: {e}", frame.snr_db));
                break;
            }
        }
    }
    record.aggregate();
    Ok(record)
}
