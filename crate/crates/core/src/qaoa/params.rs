use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Angle assigned to every parameter by [`InitStrategy::Zero`].
pub const ZERO_INIT_ANGLE: f64 = 1e-4;

/// The `2p` QAOA angles `(γ⃗, β⃗)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzParams {
    gammas: Vec<f64>,
    betas: Vec<f64>,
}

impl AnsatzParams {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if gammas.is_empty() {
            return Err(Error::InvalidParameter("at least one layer required".into()));
        }
        if gammas.len() != betas.len() {
            return Err(Error::LengthMismatch {
                expected: gammas.len(),
                actual: betas.len(),
            });
        }
        if gammas.iter().chain(&betas).any(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter("angles must be finite".into()));
        }
        Ok(Self { gammas, betas })
    }

    pub fn constant(p: usize, angle: f64) -> Result<Self> {
        Self::new(vec![angle; p], vec![angle; p])
    }

    /// Linear ramp `γ_ℓ = (ℓ/p)·γ₀`, `β_ℓ = (1 − (ℓ−1)/p)·β₀` for `ℓ = 1..p`.
    pub fn linear_ramp(p: usize, gamma0: f64, beta0: f64) -> Result<Self> {
        let pf = p as f64;
        let gammas = (1..=p).map(|l| l as f64 / pf * gamma0).collect();
        let betas = (1..=p).map(|l| (1.0 - (l as f64 - 1.0) / pf) * beta0).collect();
        Self::new(gammas, betas)
    }

    pub fn p(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// Flat layout `[γ_1..γ_p, β_1..β_p]`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = self.gammas.clone();
        v.extend_from_slice(&self.betas);
        v
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        if !v.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "odd parameter count {}",
                v.len()
            )));
        }
        let p = v.len() / 2;
        Self::new(v[..p].to_vec(), v[p..].to_vec())
    }

    /// Multiplies every γ by `factor`.
    pub fn scale_gammas(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.gammas.iter().map(|g| g * factor).collect(),
            self.betas.clone(),
        )
    }
}

/// Where the optimizer starts.
#[derive(Debug, Clone, PartialEq)]
pub enum InitStrategy {
    /// Angles transferred from an earlier same-structure problem.
    Temporal { params: AnsatzParams },
    /// Every angle uniform on `[0, π]`.
    Random { seed: u64 },
    /// Every angle equal to [`ZERO_INIT_ANGLE`].
    Zero,
}

impl InitStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            InitStrategy::Temporal { .. } => "temporal",
            InitStrategy::Random { .. } => "random",
            InitStrategy::Zero => "zero",
        }
    }

    pub fn initial_params(&self, p: usize) -> Result<AnsatzParams> {
        match self {
            InitStrategy::Temporal { params } => {
                if params.p() != p {
                    return Err(Error::LengthMismatch {
                        expected: p,
                        actual: params.p(),
                    });
                }
                Ok(params.clone())
            }
            InitStrategy::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut draw = || rng.random_range(0.0..=PI);
                let gammas = (0..p).map(|_| draw()).collect();
                let betas = (0..p).map(|_| draw()).collect();
                AnsatzParams::new(gammas, betas)
            }
            InitStrategy::Zero => AnsatzParams::constant(p, ZERO_INIT_ANGLE),
        }
    }
}
