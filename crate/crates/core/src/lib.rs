//! Decoding LDPC and Polar codes as QUBO problems solved with a simulated
//! QAOA, alongside classical reference decoders.
//!
//! The pipeline is: encode ([`codes`]) → BPSK/AWGN channel and LLRs
//! ([`channel`]) → decoding QUBO ([`qubo`]) → QAOA ansatz simulated on a
//! statevector or density matrix ([`qsim`], [`qaoa`]). [`decoders`] provides
//! belief propagation, successive-cancellation list and exhaustive ML
//! decoding; [`resources`] holds the runtime and qubit-count arithmetic.

pub mod bits;
pub mod channel;
pub mod codes;
pub mod decoders;
pub mod error;
pub mod gf2;
pub mod qaoa;
pub mod qsim;
pub mod qubo;
pub mod resources;
pub mod textfmt;

pub use bits::BitVector;
pub use error::{Error, Result};
