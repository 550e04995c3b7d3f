//! Run configuration, read from TOML.
//!
//! ```toml
//! [experiment]
//! master_seed = 2024
//! snr_list_db = [0.0, 2.0, 4.0, 6.0]
//! problems_per_snr = 500
//! p_layers = 4
//! init_strategies = ["temporal", "random", "zero"]
//! mode = "tuned"
//! baselines = ["ml"]
//!
//! [experiment.code]
//! family = "polar"
//! n = 4
//! k = 2
//!
//! [experiment.backend]
//! kind = "exact"
//! ```
//!
//! `[noise_sweep]`, `[resources]` and `[decode]` tables configure the
//! matching subcommands.

use std::path::{Path, PathBuf};

use fdeq_core::codes::{Code, LdpcCode, ParityCheckMatrix, PolarCodeConfig};
use fdeq_core::qaoa::{Backend, Extraction, OptimizerConfig};
use fdeq_core::qsim::{NoiseModel, DENSITY_CAP};
use fdeq_core::qubo::build_qubo;
use fdeq_core::resources::Topology;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub experiment: Option<ExperimentSpec>,
    pub noise_sweep: Option<NoiseSweepSpec>,
    pub resources: Option<ResourceSpec>,
    pub decode: Option<DecodeInput>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn experiment(&self) -> Result<&ExperimentSpec> {
        self.experiment
            .as_ref()
            .ok_or_else(|| HarnessError::Config("missing [experiment] table".into()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    pub family: String,
    pub n: usize,
    pub k: usize,
    pub h_file: Option<PathBuf>,
}

impl CodeSpec {
    /// Polar codes are built from `(n, k)`. LDPC codes read `h_file`; without
    /// one, `(6, 2)` selects the shipped benchmark code.
    pub fn build(&self) -> Result<Code> {
        self.build_inner().map_err(|e| match e {
            HarnessError::Core(c) => HarnessError::Config(c.to_string()),
            other => other,
        })
    }

    fn build_inner(&self) -> Result<Code> {
        let code = match self.family.to_ascii_lowercase().as_str() {
            "polar" => Code::from(PolarCodeConfig::new(self.n, self.k)?),
            "ldpc" => match &self.h_file {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
                    Code::from(LdpcCode::new(ParityCheckMatrix::parse(&text)?)?)
                }
                None if (self.n, self.k) == (6, 2) => Code::from(LdpcCode::benchmark()),
                None => {
                    return Err(HarnessError::Config(
                        "an LDPC code other than the (6, 2) benchmark needs h_file".into(),
                    ))
                }
            },
            other => return Err(HarnessError::Config(format!("unknown code family {other:?}"))),
        };
        if (code.n(), code.k()) != (self.n, self.k) {
            return Err(HarnessError::Config(format!(
                "code is ({}, {}) but the config says ({}, {})",
                code.n(),
                code.k(),
                self.n,
                self.k
            )));
        }
        Ok(code)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Temporal,
    Random,
    Zero,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Temporal => "temporal",
            Strategy::Random => "random",
            Strategy::Zero => "zero",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Optimize to convergence or the iteration budget.
    Tuned,
    /// At most one optimizer iteration from the initial angles.
    OneIteration,
    /// Both of the above on the same problems.
    Both,
}

/// Names used in the `mode` column.
pub const MODE_TUNED: &str = "tuned";
pub const MODE_ONE_ITERATION: &str = "one-iteration";

impl Mode {
    pub(crate) fn expand(self) -> Vec<(&'static str, OptimizerConfig)> {
        let tuned = (MODE_TUNED, OptimizerConfig::default());
        let one = (MODE_ONE_ITERATION, OptimizerConfig::one_iteration());
        match self {
            Mode::Tuned => vec![tuned],
            Mode::OneIteration => vec![one],
            Mode::Both => vec![tuned, one],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BackendSpec {
    Exact,
    Sampled { n_shots: usize },
    Noisy { p1: f64, p2: f64 },
}

impl BackendSpec {
    /// Simulator backend and solution extraction for one problem; sampling
    /// seeds come from `seed`.
    pub(crate) fn resolve(&self, seed: u64) -> Result<(Backend, Extraction)> {
        Ok(match *self {
            BackendSpec::Exact => (Backend::Exact, Extraction::default()),
            BackendSpec::Sampled { n_shots } => (
                Backend::Sampled { n_shots, seed },
                Extraction::Sampled { n_shots, seed },
            ),
            BackendSpec::Noisy { p1, p2 } => {
                (Backend::Noisy(NoiseModel::new(p1, p2)?), Extraction::default())
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Baseline {
    Bp,
    Scl,
    Ml,
}

fn default_problems() -> usize {
    500
}

fn default_p() -> usize {
    4
}

fn default_strategies() -> Vec<Strategy> {
    vec![Strategy::Temporal, Strategy::Random, Strategy::Zero]
}

fn default_mode() -> Mode {
    Mode::Tuned
}

fn default_backend() -> BackendSpec {
    BackendSpec::Exact
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub code: CodeSpec,
    pub snr_list_db: Vec<f64>,
    /// Payload problems per SNR; one preamble block per SNR comes on top.
    #[serde(default = "default_problems")]
    pub problems_per_snr: usize,
    #[serde(default = "default_p")]
    pub p_layers: usize,
    #[serde(default = "default_strategies")]
    pub init_strategies: Vec<Strategy>,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default = "default_backend")]
    pub backend: BackendSpec,
    #[serde(default)]
    pub baselines: Vec<Baseline>,
    #[serde(default)]
    pub master_seed: u64,
    pub output_dir: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn new(code: CodeSpec, snr_list_db: Vec<f64>) -> Self {
        Self {
            code,
            snr_list_db,
            problems_per_snr: default_problems(),
            p_layers: default_p(),
            init_strategies: default_strategies(),
            mode: default_mode(),
            backend: default_backend(),
            baselines: Vec::new(),
            master_seed: 0,
            output_dir: None,
        }
    }

    /// Checks every field and returns the code.
    pub fn validate(&self) -> Result<Code> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.snr_list_db.is_empty() {
            return bad("snr_list_db is empty".into());
        }
        if let Some(s) = self.snr_list_db.iter().find(|s| !s.is_finite()) {
            return bad(format!("SNR {s} is not finite"));
        }
        if self.problems_per_snr == 0 {
            return bad("problems_per_snr must be at least 1".into());
        }
        if self.p_layers == 0 {
            return bad("p_layers must be at least 1".into());
        }
        if self.init_strategies.is_empty() && self.baselines.is_empty() {
            return bad("nothing to run: no init strategies and no baselines".into());
        }
        let code = self.code.build()?;
        for b in &self.baselines {
            match (b, &code) {
                (Baseline::Bp, Code::Polar(_)) => return bad("BP needs an LDPC code".into()),
                (Baseline::Scl, Code::Ldpc(_)) => return bad("SCL needs a polar code".into()),
                _ => {}
            }
        }
        match self.backend {
            BackendSpec::Sampled { n_shots: 0 } => return bad("n_shots must be at least 1".into()),
            BackendSpec::Noisy { p1, p2 } => {
                NoiseModel::new(p1, p2).map_err(|e| HarnessError::Config(e.to_string()))?;
                let n = build_qubo(&code, &vec![0.0; code.n()], None)?.n_vars();
                if !self.init_strategies.is_empty() && n > DENSITY_CAP {
                    return bad(format!(
                        "noisy backend supports {DENSITY_CAP} qubits, the QUBO has {n}"
                    ));
                }
            }
            _ => {}
        }
        Ok(code)
    }
}

fn default_sweep_problems() -> usize {
    100
}

fn default_rates() -> Vec<f64> {
    vec![1.0, 1e-1, 1e-2, 1e-3, 1e-4]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSweepSpec {
    /// Depolarizing probabilities, applied as `p1 = p2 = rate`.
    #[serde(default = "default_rates")]
    pub error_rates: Vec<f64>,
    #[serde(default = "default_sweep_problems")]
    pub problems_per_snr: usize,
}

impl Default for NoiseSweepSpec {
    fn default() -> Self {
        Self {
            error_rates: default_rates(),
            problems_per_snr: default_sweep_problems(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub bandwidth_mhz: f64,
    pub antennas: usize,
    /// Decoding problems per second.
    pub pps: f64,
    pub qubits_per_problem: f64,
    pub t_run_us: f64,
}

fn one() -> usize {
    1
}

fn default_block() -> usize {
    128
}

fn default_subblocks() -> Vec<usize> {
    vec![8, 16, 32, 64, 128]
}

fn default_budgets() -> Vec<f64> {
    vec![50.0, 40.0, 30.0, 20.0, 10.0, 1.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourceSpec {
    #[serde(default = "default_block")]
    pub block_length: usize,
    #[serde(default = "default_subblocks")]
    pub subblocks: Vec<usize>,
    #[serde(default = "default_budgets")]
    pub budgets_us: Vec<f64>,
    #[serde(default = "one")]
    pub n_it: usize,
    #[serde(default = "one")]
    pub n_ly: usize,
    #[serde(default = "one")]
    pub n_shots: usize,
    /// Overrides `topology` when set.
    pub depth_coeff: Option<f64>,
    pub topology: Option<String>,
    #[serde(default)]
    pub scenarios: Vec<Scenario>,
}

impl Default for ResourceSpec {
    fn default() -> Self {
        Self {
            block_length: default_block(),
            subblocks: default_subblocks(),
            budgets_us: default_budgets(),
            n_it: 1,
            n_ly: 1,
            n_shots: 1,
            depth_coeff: None,
            topology: None,
            scenarios: Vec::new(),
        }
    }
}

impl ResourceSpec {
    /// `depth_coeff`, else the topology preset, else 1.
    pub fn resolved_depth_coeff(&self) -> Result<f64> {
        match (self.depth_coeff, &self.topology) {
            (Some(c), _) => Ok(c),
            (None, Some(t)) => t
                .parse::<Topology>()
                .map(Topology::depth_coeff)
                .map_err(|e| HarnessError::Config(e.to_string())),
            (None, None) => Ok(1.0),
        }
    }
}

fn default_step() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecodeInput {
    /// Blocks as written by `fdeq encode`.
    pub blocks_file: PathBuf,
    /// Optional `block_id,data_bits` file for scoring the payload.
    pub truth_file: Option<PathBuf>,
    #[serde(default = "default_step")]
    pub snr_step_db: f64,
}
