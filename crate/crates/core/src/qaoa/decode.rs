use super::ansatz::{Backend, QaoaEvaluator};
use super::optimize::{optimize_with, OptimizerConfig};
use super::params::{AnsatzParams, InitStrategy};
use crate::bits::BitVector;
use crate::channel::{Frame, ReceivedBlock};
use crate::codes::Code;
use crate::error::{Error, Result};
use crate::qsim::sample_indices;
use crate::qubo::{brute_force_max, brute_force_min, build_qubo, Qubo};

/// Number of most-probable basis states searched by exact extraction.
pub const DEFAULT_TOP_M: usize = 128;

/// Largest QUBO whose energies are normalized against brute-force extrema.
pub const NORMALIZATION_CAP: usize = 16;

/// Seed angles for the temporal schedule before rescaling. With
/// `RX(2β) = exp(−iβX)` and `|+⟩` as the mixer ground state, opposite signs
/// make the ramp a discretized anneal toward low cost.
pub const RAMP_GAMMA0: f64 = 0.5;
pub const RAMP_BETA0: f64 = -0.5;

/// How the decoded bitstring is read off the final state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extraction {
    /// Lowest-cost state among the `top_m` most probable ones.
    Exact { top_m: usize },
    /// Lowest-cost state among `n_shots` samples.
    Sampled { n_shots: usize, seed: u64 },
}

impl Default for Extraction {
    fn default() -> Self {
        Extraction::Exact {
            top_m: DEFAULT_TOP_M,
        }
    }
}

/// Everything `decode_block` needs besides the block and the code.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeSettings {
    pub p: usize,
    pub init: InitStrategy,
    /// `None` runs the initial angles as they are.
    pub optimizer: Option<OptimizerConfig>,
    pub backend: Backend,
    pub extraction: Extraction,
    /// Satisfier weight; `None` uses `Σ|L| + 1`.
    pub weight: Option<f64>,
}

impl DecodeSettings {
    pub fn new(p: usize, init: InitStrategy) -> Self {
        Self {
            p,
            init,
            optimizer: Some(OptimizerConfig::default()),
            backend: Backend::Exact,
            extraction: Extraction::default(),
            weight: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    /// Full QUBO assignment, position `k` holding variable `k`.
    pub solution_bits: BitVector,
    pub data_bits: BitVector,
    pub codeword_bits: BitVector,
    /// Cost of `solution_bits`.
    pub energy: f64,
    /// `(energy − E_min)/(E_max − E_min)`, when the QUBO is small enough.
    pub normalized_energy: Option<f64>,
    /// `⟨C⟩` of the final state.
    pub expected_energy: f64,
    pub normalized_expected_energy: Option<f64>,
    pub iterations_used: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub params_initial: AnsatzParams,
    pub params_final: AnsatzParams,
    pub initial_objective: f64,
    pub final_objective: f64,
}

impl DecodeResult {
    pub fn data_bit_errors(&self, truth: &BitVector) -> Result<usize> {
        if truth.len() != self.data_bits.len() {
            return Err(Error::LengthMismatch {
                expected: self.data_bits.len(),
                actual: truth.len(),
            });
        }
        Ok(self.data_bits.hamming_distance(truth))
    }
}

/// Index of the extracted solution. Candidates with zero probability are
/// never chosen; ties in cost go to the more probable, then lower, index.
pub fn extract_solution(probs: &[f64], costs: &[f64], extraction: &Extraction) -> Result<usize> {
    if probs.len() != costs.len() {
        return Err(Error::DimensionMismatch {
            expected: costs.len(),
            actual: probs.len(),
        });
    }
    let candidates: Vec<usize> = match *extraction {
        Extraction::Exact { top_m } => {
            if top_m == 0 {
                return Err(Error::InvalidParameter("top_m must be at least 1".into()));
            }
            let mut order: Vec<usize> = (0..probs.len()).filter(|&i| probs[i] > 0.0).collect();
            order.sort_by(|&a, &b| probs[b].total_cmp(&probs[a]).then(a.cmp(&b)));
            order.truncate(top_m);
            order
        }
        Extraction::Sampled { n_shots, seed } => {
            let mut s = sample_indices(probs, n_shots, seed)?;
            s.sort_unstable_by(|&a, &b| probs[b].total_cmp(&probs[a]).then(a.cmp(&b)));
            s.dedup();
            s
        }
    };
    let mut best: Option<usize> = None;
    for i in candidates {
        if best.is_none_or(|b| costs[i] < costs[b]) {
            best = Some(i);
        }
    }
    best.ok_or(Error::EmptyInput)
}

/// Linear-ramp seed with every γ divided by `√(Σ_{i≤j}|Q_ij|)`.
pub fn temporal_seed(qubo: &Qubo, p: usize) -> Result<AnsatzParams> {
    let ramp = AnsatzParams::linear_ramp(p, RAMP_GAMMA0, RAMP_BETA0)?;
    let mass = qubo.coefficient_sum();
    if !(mass > 0.0) {
        return Ok(ramp);
    }
    ramp.scale_gammas(1.0 / mass.sqrt())
}

/// Offline search on the first preamble block: the QUBO built by `builder`
/// is optimized from [`temporal_seed`] with `cfg` on the exact backend.
pub fn warm_start_from_preamble<B>(
    frame: &Frame,
    builder: B,
    p: usize,
    cfg: &OptimizerConfig,
) -> Result<AnsatzParams>
where
    B: Fn(&ReceivedBlock) -> Result<Qubo>,
{
    let block = frame.preamble.first().ok_or(Error::NoPreamble)?;
    let qubo = builder(block)?;
    let seed = temporal_seed(&qubo, p)?;
    let ev = QaoaEvaluator::new(&qubo, Backend::Exact)?;
    Ok(optimize_with(&ev, &seed, cfg).params)
}

/// Runs QAOA on a prepared QUBO and extracts the decoded word.
pub fn decode_qubo(qubo: &Qubo, settings: &DecodeSettings) -> Result<DecodeResult> {
    let ev = QaoaEvaluator::new(qubo, settings.backend)?;
    let params_initial = settings.init.initial_params(settings.p)?;
    let (params_final, iterations_used, evaluations, converged, initial_objective, final_objective) =
        match &settings.optimizer {
            Some(cfg) => {
                let r = optimize_with(&ev, &params_initial, cfg);
                (
                    r.params,
                    r.iterations,
                    r.evaluations,
                    r.converged,
                    r.initial_objective,
                    r.objective,
                )
            }
            None => {
                let f = ev.objective(&params_initial);
                (params_initial.clone(), 0, 1, false, f, f)
            }
        };
    let probs = ev.probabilities(&params_final);
    let table = ev.cost_table();
    let expected_energy: f64 = probs.iter().zip(table).map(|(p, c)| p * c).sum();
    let idx = extract_solution(&probs, table, &settings.extraction)?;
    let n = qubo.n_vars();
    let solution_bits = BitVector::from_index_lsb(idx as u64, n);
    let energy = qubo.cost(solution_bits.as_slice())?;
    let (normalized_energy, normalized_expected_energy) = if n <= NORMALIZATION_CAP {
        let (_, lo) = brute_force_min(qubo)?;
        let (_, hi) = brute_force_max(qubo)?;
        let span = hi - lo;
        if span > 0.0 {
            (
                Some(((energy - lo) / span).clamp(0.0, 1.0)),
                Some(((expected_energy - lo) / span).clamp(0.0, 1.0)),
            )
        } else {
            (Some(0.0), Some(0.0))
        }
    } else {
        (None, None)
    };
    Ok(DecodeResult {
        data_bits: qubo.data_bits(solution_bits.as_slice())?,
        codeword_bits: qubo.codeword_bits(solution_bits.as_slice())?,
        solution_bits,
        energy,
        normalized_energy,
        expected_energy,
        normalized_expected_energy,
        iterations_used,
        evaluations,
        converged,
        params_initial,
        params_final,
        initial_objective,
        final_objective,
    })
}

/// Builds the QUBO of `block` for `code` and decodes it.
pub fn decode_block(
    block: &ReceivedBlock,
    code: &Code,
    settings: &DecodeSettings,
) -> Result<DecodeResult> {
    let qubo = build_qubo(code, &block.llrs, settings.weight)?;
    decode_qubo(&qubo, settings)
}
