//! Exact gate-level simulation over the RX/RZ/CNOT gate set: a statevector
//! backend and a density-matrix backend with depolarizing noise.
//!
//! Basis indices put qubit `k` at bit `k`; qubit 0 is the least significant.

mod circuit;
mod density;
mod measure;
mod statevector;

pub use circuit::{Circuit, Gate, InitialState};
pub use density::{run_density, run_density_from, DensityMatrix, NoiseModel, DENSITY_CAP};
pub use measure::{
    expectation_diag, expectation_with_table, sample_bitstrings, sample_indices,
    BasisDistribution,
};
pub use statevector::{run_circuit, run_statevector, StateVector, STATEVECTOR_CAP};

pub(crate) use statevector::apply_rx;
