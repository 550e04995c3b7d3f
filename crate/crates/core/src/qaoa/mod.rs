//! QAOA over decoding QUBOs: ansatz construction, objective evaluation,
//! parameter optimization, initialization strategies and block decoding.

mod ansatz;
mod decode;
mod optimize;
mod params;

pub use ansatz::{build_ansatz_circuit, qaoa_objective, Backend, QaoaEvaluator};
pub use decode::{
    decode_block, decode_qubo, extract_solution, temporal_seed, warm_start_from_preamble,
    DecodeResult, DecodeSettings, Extraction, DEFAULT_TOP_M, NORMALIZATION_CAP, RAMP_BETA0,
    RAMP_GAMMA0,
};
pub use optimize::{
    minimize, optimize_params, optimize_with, MinimizeOutcome, OptimizeResult, OptimizerConfig,
    DEFAULT_MAX_ITERATIONS,
};
pub use params::{AnsatzParams, InitStrategy, ZERO_INIT_ANGLE};
