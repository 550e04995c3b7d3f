use super::boxplus;
use crate::bits::BitVector;
use crate::codes::ParityCheckMatrix;
use crate::error::{check_len, Error, Result};

/// Default iteration budget.
pub const DEFAULT_BP_ITERATIONS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BpConfig {
    pub max_iterations: usize,
    /// Stop as soon as the hard decision satisfies every check.
    pub early_stop: bool,
}

impl Default for BpConfig {
    fn default() -> Self {
        Self {
            max_iterations: DEFAULT_BP_ITERATIONS,
            early_stop: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BpOutcome {
    pub bits: BitVector,
    pub posteriors: Vec<f64>,
    pub iterations: usize,
    /// The final hard decision is a codeword.
    pub converged: bool,
}

/// Sum-product decoding with a flooding schedule; returns the hard decision
/// of the posterior LLRs.
pub fn bp_decode(h: &ParityCheckMatrix, llrs: &[f64], cfg: &BpConfig) -> Result<BitVector> {
    Ok(bp_decode_detailed(h, llrs, cfg)?.bits)
}

pub fn bp_decode_detailed(
    h: &ParityCheckMatrix,
    llrs: &[f64],
    cfg: &BpConfig,
) -> Result<BpOutcome> {
    check_len(h.n_bits(), llrs.len())?;
    if cfg.max_iterations == 0 {
        return Err(Error::InvalidParameter("max_iterations must be at least 1".into()));
    }
    let checks = h.checks();
    // Bit-to-check messages start at the channel LLRs.
    let mut q: Vec<Vec<f64>> = checks
        .iter()
        .map(|row| row.iter().map(|&b| llrs[b]).collect())
        .collect();
    let mut r: Vec<Vec<f64>> = checks.iter().map(|row| vec![0.0; row.len()]).collect();
    let mut post = llrs.to_vec();
    let mut hard: Vec<u8> = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    for _ in 0..cfg.max_iterations {
        iterations += 1;
        for (c, row) in checks.iter().enumerate() {
            for k in 0..row.len() {
                let mut acc: Option<f64> = None;
                for (j, &m) in q[c].iter().enumerate() {
                    if j != k {
                        acc = Some(acc.map_or(m, |a| boxplus(a, m)));
                    }
                }
                r[c][k] = acc.unwrap_or(0.0);
            }
        }
        post.copy_from_slice(llrs);
        for (c, row) in checks.iter().enumerate() {
            for (k, &b) in row.iter().enumerate() {
                post[b] += r[c][k];
            }
        }
        for (c, row) in checks.iter().enumerate() {
            for (k, &b) in row.iter().enumerate() {
                q[c][k] = post[b] - r[c][k];
            }
        }
        hard = post.iter().map(|&l| u8::from(l < 0.0)).collect();
        converged = h.is_codeword(&hard);
        if converged && cfg.early_stop {
            break;
        }
    }
    Ok(BpOutcome {
        bits: BitVector::new(hard)?,
        posteriors: post,
        iterations,
        converged,
    })
}
