use num_complex::Complex64;

use super::params::AnsatzParams;
use crate::error::{Error, Result};
use crate::qsim::{
    apply_rx, expectation_with_table, run_density, sample_indices, Circuit, DensityMatrix, Gate,
    InitialState, NoiseModel, StateVector, DENSITY_CAP, STATEVECTOR_CAP,
};
use crate::qubo::{IsingModel, Qubo};

/// Gate-level ansatz. Each layer applies `RZ(2γh_i)` for every non-zero
/// field, `CNOT(i,j)·RZ_j(2γJ_ij)·CNOT(i,j)` for every non-zero coupling,
/// then `RX(2β)` on every qubit. With `initial_plus` the circuit declares
/// `|+⟩^n` as its initial state; otherwise it starts from `|0…0⟩`.
pub fn build_ansatz_circuit(
    ising: &IsingModel,
    params: &AnsatzParams,
    initial_plus: bool,
) -> Circuit {
    let n = ising.n();
    let init = if initial_plus {
        InitialState::Plus
    } else {
        InitialState::Zero
    };
    let mut c = Circuit::with_initial(n, init);
    let couplings = ising.couplings();
    let mut add = |g: Gate| {
        c.push(g)
            .expect("ansatz gates are in range by construction")
    };
    for (&gamma, &beta) in params.gammas().iter().zip(params.betas()) {
        for (i, &h) in ising.h().iter().enumerate() {
            if h != 0.0 {
                add(Gate::Rz {
                    qubit: i,
                    angle: 2.0 * gamma * h,
                });
            }
        }
        for &(i, j, v) in &couplings {
            add(Gate::Cnot {
                control: i,
                target: j,
            });
            add(Gate::Rz {
                qubit: j,
                angle: 2.0 * gamma * v,
            });
            add(Gate::Cnot {
                control: i,
                target: j,
            });
        }
        for q in 0..n {
            add(Gate::Rx {
                qubit: q,
                angle: 2.0 * beta,
            });
        }
    }
    c
}

/// How the QAOA objective is estimated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Backend {
    /// Exact expectation from the statevector.
    Exact,
    /// Mean cost of `n_shots` samples of the exact state. The seed is fixed
    /// per evaluator, so repeated evaluations share random numbers.
    Sampled { n_shots: usize, seed: u64 },
    /// Exact expectation from the density matrix of the gate-level circuit
    /// under depolarizing noise.
    Noisy(NoiseModel),
}

/// Evaluates the ansatz for one QUBO. The noiseless path skips gate
/// decomposition: the cost layer multiplies amplitude `x` by
/// `exp(−iγ·c(x))`, which matches the gate-level circuit up to the global
/// phase `exp(−iγ·constant)`.
#[derive(Debug, Clone)]
pub struct QaoaEvaluator {
    n: usize,
    ising: IsingModel,
    table: Vec<f64>,
    backend: Backend,
}

impl QaoaEvaluator {
    pub fn new(qubo: &Qubo, backend: Backend) -> Result<Self> {
        let n = qubo.n_vars();
        let (cap, what) = match backend {
            Backend::Noisy(_) => (DENSITY_CAP, "density-matrix qubits"),
            _ => (STATEVECTOR_CAP, "statevector qubits"),
        };
        if n > cap {
            return Err(Error::SizeLimit {
                what,
                limit: cap,
                actual: n,
            });
        }
        if let Backend::Sampled { n_shots: 0, .. } = backend {
            return Err(Error::InvalidParameter("n_shots must be at least 1".into()));
        }
        Ok(Self {
            n,
            ising: qubo.to_ising(),
            table: qubo.cost_table()?,
            backend,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// Costs of all basis states, qubit `k` at bit `k`.
    pub fn cost_table(&self) -> &[f64] {
        &self.table
    }

    /// Noiseless ansatz state.
    pub fn state(&self, params: &AnsatzParams) -> StateVector {
        let mut s = StateVector::plus(self.n).expect("size checked in constructor");
        let amps = s.amps_mut();
        for (&g, &b) in params.gammas().iter().zip(params.betas()) {
            for (a, &c) in amps.iter_mut().zip(&self.table) {
                let (sin, cos) = (g * c).sin_cos();
                *a *= Complex64::new(cos, -sin);
            }
            for q in 0..self.n {
                apply_rx(amps, q, 2.0 * b);
            }
        }
        s
    }

    pub fn density(&self, params: &AnsatzParams, noise: &NoiseModel) -> Result<DensityMatrix> {
        run_density(&build_ansatz_circuit(&self.ising, params, true), noise)
    }

    /// Basis-state distribution of the final state under this backend.
    pub fn probabilities(&self, params: &AnsatzParams) -> Vec<f64> {
        match self.backend {
            Backend::Noisy(noise) => self
                .density(params, &noise)
                .expect("size checked in constructor")
                .probabilities(),
            _ => self.state(params).probabilities(),
        }
    }

    /// `⟨C⟩` of the final state (exact for the exact and noisy backends).
    pub fn expected_energy(&self, params: &AnsatzParams) -> f64 {
        expectation_with_table(&self.probabilities(params), &self.table)
    }

    pub fn objective(&self, params: &AnsatzParams) -> f64 {
        match self.backend {
            Backend::Sampled { n_shots, seed } => {
                let probs = self.probabilities(params);
                let idx = sample_indices(&probs, n_shots, seed).expect("n_shots checked");
                idx.iter().map(|&i| self.table[i]).sum::<f64>() / n_shots as f64
            }
            _ => self.expected_energy(params),
        }
    }
}

/// The QAOA cost estimate for `params` under `backend`.
pub fn qaoa_objective(qubo: &Qubo, params: &AnsatzParams, backend: Backend) -> Result<f64> {
    Ok(QaoaEvaluator::new(qubo, backend)?.objective(params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::run_circuit;

    fn sample_qubo() -> Qubo {
        Qubo::from_dense(
            vec![
                vec![1.0, -0.5, 0.0],
                vec![-0.5, -2.0, 0.75],
                vec![0.0, 0.75, 0.5],
            ],
            0.3,
        )
        .unwrap()
    }

    #[test]
    fn gate_counts_per_layer() {
        let q = sample_qubo();
        let ising = q.to_ising();
        let nz_h = ising.h().iter().filter(|&&h| h != 0.0).count();
        let nz_j = ising.couplings().len();
        let params = AnsatzParams::new(vec![0.1, 0.2], vec![0.3, 0.4]).unwrap();
        let c = build_ansatz_circuit(&ising, &params, true);
        assert_eq!(c.len(), 2 * (3 + nz_h + 3 * nz_j));
        assert!(matches!(c.gates()[c.len() - 1], Gate::Rx { .. }));
    }

    #[test]
    fn fast_path_matches_circuit_up_to_phase() {
        let q = sample_qubo();
        let params = AnsatzParams::new(vec![0.37, -0.8], vec![1.1, 0.25]).unwrap();
        let ev = QaoaEvaluator::new(&q, Backend::Exact).unwrap();
        let fast = ev.state(&params);
        let slow = run_circuit(&build_ansatz_circuit(&q.to_ising(), &params, true)).unwrap();
        assert!((fast.overlap(&slow) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_angles_give_uniform_mean() {
        let q = sample_qubo();
        let params = AnsatzParams::constant(3, 0.0).unwrap();
        let e = qaoa_objective(&q, &params, Backend::Exact).unwrap();
        let table = q.cost_table().unwrap();
        let mean = table.iter().sum::<f64>() / table.len() as f64;
        assert!((e - mean).abs() < 1e-12);
    }

    #[test]
    fn noisy_backend_without_noise_matches_exact() {
        let q = sample_qubo();
        let params = AnsatzParams::new(vec![0.2], vec![0.9]).unwrap();
        let exact = qaoa_objective(&q, &params, Backend::Exact).unwrap();
        let noisy = qaoa_objective(&q, &params, Backend::Noisy(NoiseModel::noiseless())).unwrap();
        assert!((exact - noisy).abs() < 1e-10);
        let full = NoiseModel::new(1.0, 1.0).unwrap();
        let mixed = qaoa_objective(&q, &params, Backend::Noisy(full)).unwrap();
        let table = q.cost_table().unwrap();
        let mean = table.iter().sum::<f64>() / table.len() as f64;
        assert!((mixed - mean).abs() < 1e-10);
    }

    #[test]
    fn size_limits() {
        let q = Qubo::identity(DENSITY_CAP + 1);
        assert!(QaoaEvaluator::new(&q, Backend::Exact).is_ok());
        assert!(matches!(
            QaoaEvaluator::new(&q, Backend::Noisy(NoiseModel::noiseless())),
            Err(Error::SizeLimit { .. })
        ));
    }
}
