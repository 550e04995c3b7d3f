//! Classical reference decoders: sum-product belief propagation for LDPC
//! codes, successive-cancellation list decoding for Polar codes, and
//! exhaustive maximum-likelihood decoding for both.
//!
//! All LLRs follow `L = ln P(0)/P(1)`; a bit decides to 1 iff its LLR is
//! negative.

mod bp;
mod ml;
mod scl;

pub use bp::{bp_decode, bp_decode_detailed, BpConfig, BpOutcome, DEFAULT_BP_ITERATIONS};
pub use ml::{ml_decode, ml_decode_counted, MlOutcome, ML_CAP};
pub use scl::{scl_decode, SclConfig};

/// Exact check-node combination `2·atanh(tanh(a/2)·tanh(b/2))` in the
/// overflow-free form
/// `sign(a)·sign(b)·min(|a|,|b|) + ln(1+e^{−|a+b|}) − ln(1+e^{−|a−b|})`.
pub fn boxplus(a: f64, b: f64) -> f64 {
    let s = a.signum() * b.signum();
    s * a.abs().min(b.abs()) + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

/// `ln(1 + e^x)` without overflow.
pub(crate) fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}
