//! Exhaustive minimization, used as the maximum-likelihood oracle.

use super::Qubo;
use crate::bits::BitVector;
use crate::error::{Error, Result};

/// Default variable cap for exhaustive search.
pub const BRUTE_FORCE_CAP: usize = 24;

/// Global minimizer and its cost. Ties (costs equal to within `1e-12`
/// relative to the coefficient mass) go to the numerically smallest bitstring
/// read with variable 0 as the most significant bit.
pub fn brute_force_min(q: &Qubo) -> Result<(BitVector, f64)> {
    brute_force_min_with_cap(q, BRUTE_FORCE_CAP)
}

pub fn brute_force_min_with_cap(q: &Qubo, cap: usize) -> Result<(BitVector, f64)> {
    extremum(q, cap, 1.0)
}

/// Global maximizer, same tie rule.
pub fn brute_force_max(q: &Qubo) -> Result<(BitVector, f64)> {
    extremum(q, BRUTE_FORCE_CAP, -1.0)
}

fn extremum(q: &Qubo, cap: usize, sign: f64) -> Result<(BitVector, f64)> {
    let n = q.n_vars();
    if n > cap || n > 40 {
        return Err(Error::SizeLimit {
            what: "brute-force variables",
            limit: cap.min(40),
            actual: n,
        });
    }
    let scale = 1.0 + q.offset().abs() + (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| q.get(i, j).abs())
        .sum::<f64>();
    let band = 1e-9 * scale;
    let tie = 1e-12 * scale;

    // Gray-code walk with incremental local fields; collect every state within
    // `band` of the running best and settle the winner with exact costs.
    let mut x = vec![0u8; n];
    let mut field = vec![0.0; n]; // Σ_{j≠i} 2·Q_ij·x_j
    let mut cost = sign * q.offset();
    let mut best = cost;
    let mut candidates: Vec<u64> = vec![0];
    let mut mask: u64 = 0;
    let total: u64 = 1 << n;
    for t in 1..total {
        let v = t.trailing_zeros() as usize;
        let up = x[v] == 0;
        let delta = q.get(v, v) + field[v];
        cost += sign * if up { delta } else { -delta };
        x[v] ^= 1;
        mask ^= 1 << v;
        let s = if up { 2.0 } else { -2.0 };
        for j in 0..n {
            if j != v {
                field[j] += s * q.get(j, v);
            }
        }
        if cost < best - band {
            best = cost;
            candidates.clear();
            candidates.push(mask);
        } else if cost <= best + band {
            best = best.min(cost);
            candidates.push(mask);
        }
    }

    let bits_of = |m: u64| -> Vec<u8> { (0..n).map(|v| ((m >> v) & 1) as u8).collect() };
    let key_of = |m: u64| -> u64 { (0..n).fold(0u64, |k, v| (k << 1) | ((m >> v) & 1)) };
    let mut winner: Option<(f64, u64, u64)> = None;
    for m in candidates {
        let c = sign * q.cost_unchecked(&bits_of(m));
        let k = key_of(m);
        winner = match winner {
            None => Some((c, k, m)),
            Some((bc, bk, bm)) => {
                if c < bc - tie || (c <= bc + tie && k < bk) {
                    Some((c.min(bc), k, m))
                } else {
                    Some((bc.min(c), bk, bm))
                }
            }
        };
    }
    let (_, _, m) = winner.expect("at least one candidate");
    let bits = bits_of(m);
    let c = q.cost_unchecked(&bits);
    Ok((BitVector::new(bits)?, c))
}
