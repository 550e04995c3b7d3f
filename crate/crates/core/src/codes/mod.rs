//! Forward-error-correction codes.

mod ldpc;
mod polar;

pub use ldpc::{ldpc_encode, ldpc_generator_from_h, GeneratorMatrix, LdpcCode, ParityCheckMatrix};
pub use polar::{
    bhattacharyya, polar_encode, polar_encode_matrix, polar_generator, polar_reliability_order,
    polar_transform, PolarCodeConfig, MAX_POLAR_DEPTH,
};

use crate::bits::BitVector;
use crate::error::Result;

/// Either supported code family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Code {
    Ldpc(LdpcCode),
    Polar(PolarCodeConfig),
}

impl Code {
    pub fn family(&self) -> &'static str {
        match self {
            Code::Ldpc(_) => "ldpc",
            Code::Polar(_) => "polar",
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Code::Ldpc(c) => c.n(),
            Code::Polar(c) => c.n(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            Code::Ldpc(c) => c.k(),
            Code::Polar(c) => c.k(),
        }
    }

    pub fn encode(&self, u: &BitVector) -> Result<BitVector> {
        match self {
            Code::Ldpc(c) => c.encode(u),
            Code::Polar(c) => c.encode(u),
        }
    }
}

impl From<LdpcCode> for Code {
    fn from(c: LdpcCode) -> Self {
        Code::Ldpc(c)
    }
}

impl From<PolarCodeConfig> for Code {
    fn from(c: PolarCodeConfig) -> Self {
        Code::Polar(c)
    }
}
