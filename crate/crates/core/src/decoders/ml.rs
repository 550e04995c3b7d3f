use crate::bits::BitVector;
use crate::codes::Code;
use crate::error::{check_len, Error, Result};

/// Largest `K` accepted by exhaustive decoding.
pub const ML_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct MlOutcome {
    pub data: BitVector,
    pub codeword: BitVector,
    /// `Σ_i L_i·x_i` of the chosen codeword.
    pub metric: f64,
    pub candidates_evaluated: u64,
}

/// `argmin_u Σ_i L_i·x_i(u)` over all `2^K` data words, ties to the
/// lexicographically smallest `u`.
pub fn ml_decode(code: &Code, llrs: &[f64]) -> Result<BitVector> {
    Ok(ml_decode_counted(code, llrs)?.data)
}

pub fn ml_decode_counted(code: &Code, llrs: &[f64]) -> Result<MlOutcome> {
    check_len(code.n(), llrs.len())?;
    let k = code.k();
    if k > ML_CAP {
        return Err(Error::SizeLimit {
            what: "ML data bits",
            limit: ML_CAP,
            actual: k,
        });
    }
    let mut best: Option<(f64, BitVector, BitVector)> = None;
    let mut count = 0u64;
    // Counting up with u[0] as the most significant bit visits data words in
    // lexicographic order, so a strict comparison keeps the smallest on ties.
    for m in 0..(1u64 << k) {
        let u = BitVector::from_index_msb(m, k);
        let x = code.encode(&u)?;
        count += 1;
        let metric: f64 = x
            .iter()
            .zip(llrs)
            .filter(|(b, _)| *b == 1)
            .map(|(_, l)| l)
            .sum();
        if best.as_ref().is_none_or(|(bm, _, _)| metric < *bm) {
            best = Some((metric, u, x));
        }
    }
    let (metric, data, codeword) = best.expect("K ≥ 1");
    Ok(MlOutcome {
        data,
        codeword,
        metric,
        candidates_evaluated: count,
    })
}
