use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::density::DensityMatrix;
use super::statevector::StateVector;
use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::qubo::Qubo;

/// Anything with a computational-basis distribution.
pub trait BasisDistribution {
    fn n_qubits(&self) -> usize;
    /// `p(x)` indexed with qubit `k` as bit `k`.
    fn probabilities(&self) -> Vec<f64>;
}

impl BasisDistribution for StateVector {
    fn n_qubits(&self) -> usize {
        StateVector::n_qubits(self)
    }
    fn probabilities(&self) -> Vec<f64> {
        StateVector::probabilities(self)
    }
}

impl BasisDistribution for DensityMatrix {
    fn n_qubits(&self) -> usize {
        DensityMatrix::n_qubits(self)
    }
    fn probabilities(&self) -> Vec<f64> {
        DensityMatrix::probabilities(self)
    }
}

/// `Σ_x p(x)·cost(x)`.
pub fn expectation_diag<S: BasisDistribution + ?Sized>(state: &S, cost: &Qubo) -> Result<f64> {
    if state.n_qubits() != cost.n_vars() {
        return Err(Error::DimensionMismatch {
            expected: cost.n_vars(),
            actual: state.n_qubits(),
        });
    }
    let table = cost.cost_table()?;
    Ok(expectation_with_table(&state.probabilities(), &table))
}

pub fn expectation_with_table(probs: &[f64], table: &[f64]) -> f64 {
    probs.iter().zip(table).map(|(p, c)| p * c).sum()
}

/// Basis indices drawn i.i.d. from `probs` by inverse-CDF lookup.
pub fn sample_indices(probs: &[f64], n_shots: usize, seed: u64) -> Result<Vec<usize>> {
    if n_shots == 0 {
        return Err(Error::InvalidParameter("n_shots must be at least 1".into()));
    }
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        acc += p.max(0.0);
        cdf.push(acc);
    }
    if !(acc > 0.0) {
        return Err(Error::InvalidParameter("distribution has no mass".into()));
    }
    let last_nonzero = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n_shots)
        .map(|_| {
            let r = rng.random::<f64>() * acc;
            cdf.partition_point(|&c| c <= r).min(last_nonzero)
        })
        .collect())
}

/// Shots as bitstrings, position `k` holding qubit `k`.
pub fn sample_bitstrings<S: BasisDistribution + ?Sized>(
    state: &S,
    n_shots: usize,
    seed: u64,
) -> Result<Vec<BitVector>> {
    let n = state.n_qubits();
    if n == 0 {
        return Err(Error::InvalidParameter("cannot sample a 0-qubit state".into()));
    }
    Ok(sample_indices(&state.probabilities(), n_shots, seed)?
        .into_iter()
        .map(|i| BitVector::from_index_lsb(i as u64, n))
        .collect())
}
