use fdeq_core::qsim::{
    expectation_diag, run_circuit, run_density, run_density_from, run_statevector,
    sample_bitstrings, sample_indices, Circuit, DensityMatrix, Gate, InitialState, NoiseModel,
    StateVector, DENSITY_CAP, STATEVECTOR_CAP,
};
use fdeq_core::qubo::Qubo;
use fdeq_core::Error;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Mat = Vec<Vec<Complex64>>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn kron(a: &Mat, b: &Mat) -> Mat {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![ZERO; ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = vec![vec![ZERO; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] != ZERO {
                for j in 0..n {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    out
}

fn dagger(a: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

fn eye(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { ONE } else { ZERO }).collect())
        .collect()
}

/// `I ⊗ … ⊗ m ⊗ … ⊗ I` with qubit 0 as the rightmost factor.
fn embed_1q(m: &Mat, q: usize, n: usize) -> Mat {
    let id = eye(2);
    let mut out = vec![vec![ONE]];
    for k in (0..n).rev() {
        out = kron(&out, if k == q { m } else { &id });
    }
    out
}

fn gate_matrix(g: &Gate, n: usize) -> Mat {
    match *g {
        Gate::Rx { qubit, angle } => {
            let (s, co) = (angle / 2.0).sin_cos();
            embed_1q(&vec![vec![c(co, 0.0), c(0.0, -s)], vec![c(0.0, -s), c(co, 0.0)]], qubit, n)
        }
        Gate::Rz { qubit, angle } => {
            let h = angle / 2.0;
            embed_1q(
                &vec![vec![c(h.cos(), -h.sin()), ZERO], vec![ZERO, c(h.cos(), h.sin())]],
                qubit,
                n,
            )
        }
        Gate::Cnot { control, target } => {
            // |0⟩⟨0|_c ⊗ I + |1⟩⟨1|_c ⊗ X_t
            let p0 = vec![vec![ONE, ZERO], vec![ZERO, ZERO]];
            let p1 = vec![vec![ZERO, ZERO], vec![ZERO, ONE]];
            let x = vec![vec![ZERO, ONE], vec![ONE, ZERO]];
            let a = embed_1q(&p0, control, n);
            let b = matmul(&embed_1q(&p1, control, n), &embed_1q(&x, target, n));
            a.iter()
                .zip(&b)
                .map(|(r, s)| r.iter().zip(s).map(|(u, v)| u + v).collect())
                .collect()
        }
    }
}

fn mat_vec(m: &Mat, v: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn random_circuit(rng: &mut ChaCha8Rng, n: usize, len: usize, init: InitialState) -> Circuit {
    let mut circ = Circuit::with_initial(n, init);
    for _ in 0..len {
        let kind = if n >= 2 { rng.random_range(0..3) } else { rng.random_range(0..2) };
        let q = rng.random_range(0..n);
        let theta = rng.random_range(-7.0..7.0);
        match kind {
            0 => circ.rx(q, theta).unwrap(),
            1 => circ.rz(q, theta).unwrap(),
            _ => {
                let mut t = rng.random_range(0..n - 1);
                if t >= q {
                    t += 1;
                }
                circ.cnot(q, t).unwrap()
            }
        }
    }
    circ
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> StateVector {
    let mut v: Vec<Complex64> = (0..1 << n)
        .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
    StateVector::from_amplitudes(v).unwrap()
}

/// `tr_q ρ` followed by re-insertion of `I/2` on `q`, computed on dense matrices.
fn depolarize_dense(rho: &Mat, q: usize, p: f64) -> Mat {
    let d = rho.len();
    let bit = 1usize << q;
    let mut out = vec![vec![ZERO; d]; d];
    for r in 0..d {
        for col in 0..d {
            let mixed = if (r & bit) == (col & bit) {
                (rho[r & !bit][col & !bit] + rho[r | bit][col | bit]) * 0.5
            } else {
                ZERO
            };
            out[r][col] = rho[r][col] * (1.0 - p) + mixed * p;
        }
    }
    out
}

fn density_to_mat(rho: &DensityMatrix) -> Mat {
    let d = rho.dim();
    (0..d).map(|r| (0..d).map(|col| rho.get(r, col)).collect()).collect()
}

fn max_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[test]
fn rx_pi_flips_with_phase() {
    let mut circ = Circuit::new(1);
    circ.rx(0, std::f64::consts::PI).unwrap();
    let s = run_circuit(&circ).unwrap();
    assert!((s.amplitudes()[0]).norm() < 1e-15);
    assert!((s.amplitudes()[1] - c(0.0, -1.0)).norm() < 1e-15);
}

#[test]
fn cnot_flips_target_when_control_set() {
    let mut circ = Circuit::new(2);
    circ.cnot(1, 0).unwrap();
    // qubit 1 set, qubit 0 clear: index 2.
    let s = run_statevector(&circ, &StateVector::basis(2, 2).unwrap()).unwrap();
    assert!((s.amplitudes()[3] - ONE).norm() < 1e-15);
    let s = run_statevector(&circ, &StateVector::basis(2, 1).unwrap()).unwrap();
    assert!((s.amplitudes()[1] - ONE).norm() < 1e-15);
}

#[test]
fn empty_circuit_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let s = random_state(&mut rng, 3);
    assert_eq!(run_statevector(&Circuit::new(3), &s).unwrap(), s);
}

#[test]
fn dimension_and_size_checks() {
    let circ = Circuit::new(3);
    assert!(matches!(
        run_statevector(&circ, &StateVector::zero(2).unwrap()),
        Err(Error::DimensionMismatch { .. })
    ));
    assert!(StateVector::zero(STATEVECTOR_CAP + 1).is_err());
    assert!(matches!(
        run_density(&Circuit::new(DENSITY_CAP + 1), &NoiseModel::noiseless()),
        Err(Error::SizeLimit { .. })
    ));
    let mut circ = Circuit::new(2);
    assert!(circ.cnot(1, 1).is_err());
    assert!(circ.rx(2, 0.1).is_err());
    assert!(NoiseModel::new(1.5, 0.0).is_err());
    assert!(NoiseModel::new(0.0, -0.1).is_err());
}

#[test]
fn gates_match_dense_kronecker_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in 1..=4 {
        for _ in 0..10 {
            let circ = random_circuit(&mut rng, n, 30, InitialState::Zero);
            let s0 = random_state(&mut rng, n);
            let mut v = s0.amplitudes().to_vec();
            for g in circ.gates() {
                v = mat_vec(&gate_matrix(g, n), &v);
            }
            let out = run_statevector(&circ, &s0).unwrap();
            for (a, b) in out.amplitudes().iter().zip(&v) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn unitarity_up_to_thirteen_qubits() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in [1, 2, 5, 9, 13] {
        let circ = random_circuit(&mut rng, n, 200, InitialState::Zero);
        let a = random_state(&mut rng, n);
        let b = random_state(&mut rng, n);
        let ua = run_statevector(&circ, &a).unwrap();
        let ub = run_statevector(&circ, &b).unwrap();
        assert!((ua.norm_sqr() - 1.0).abs() < 1e-10, "n={n}");
        // Inner products are preserved, not only norms.
        let before: Complex64 = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x.conj() * y).sum();
        let after: Complex64 = ua.amplitudes().iter().zip(ub.amplitudes()).map(|(x, y)| x.conj() * y).sum();
        assert!((before - after).norm() < 1e-10, "n={n}");
    }
}

#[test]
fn noiseless_density_equals_pure_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in 1..=6 {
        for init in [InitialState::Zero, InitialState::Plus] {
            let circ = random_circuit(&mut rng, n, 60, init);
            let psi = run_circuit(&circ).unwrap();
            let rho = run_density(&circ, &NoiseModel::noiseless()).unwrap();
            let pure = DensityMatrix::from_pure(&psi).unwrap();
            assert!(rho.max_abs_diff(&pure) < 1e-10, "n={n}");
        }
    }
}

#[test]
fn full_depolarization_of_one_qubit() {
    let mut circ = Circuit::new(1);
    circ.rx(0, 0.7).unwrap();
    let rho = run_density(&circ, &NoiseModel::new(1.0, 0.0).unwrap()).unwrap();
    assert!(rho.max_abs_diff(&DensityMatrix::maximally_mixed(1).unwrap()) < 1e-15);
}

#[test]
fn rz_is_noise_free() {
    let mut circ = Circuit::with_initial(2, InitialState::Plus);
    circ.rz(0, 0.4).unwrap();
    circ.rz(1, -1.1).unwrap();
    let noisy = run_density(&circ, &NoiseModel::new(1.0, 1.0).unwrap()).unwrap();
    let clean = run_density(&circ, &NoiseModel::noiseless()).unwrap();
    assert!(noisy.max_abs_diff(&clean) < 1e-15);
}

#[test]
fn noisy_gates_match_dense_channel_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let n = 3;
    let noise = NoiseModel::new(0.13, 0.29).unwrap();
    for _ in 0..10 {
        let circ = random_circuit(&mut rng, n, 25, InitialState::Plus);
        let psi = StateVector::plus(n).unwrap();
        let mut rho: Mat = psi
            .amplitudes()
            .iter()
            .map(|a| psi.amplitudes().iter().map(|b| a * b.conj()).collect())
            .collect();
        for g in circ.gates() {
            let u = gate_matrix(g, n);
            rho = matmul(&matmul(&u, &rho), &dagger(&u));
            match *g {
                Gate::Rx { qubit, .. } => rho = depolarize_dense(&rho, qubit, noise.p1()),
                Gate::Cnot { control, target } => {
                    // The two-qubit channel mixes both qubits at once:
                    // (1−p)ρ + p·(I/4 ⊗ tr_{c,t}ρ).
                    let full = depolarize_dense(&depolarize_dense(&rho, control, 1.0), target, 1.0);
                    rho = rho
                        .iter()
                        .zip(&full)
                        .map(|(r, f)| {
                            r.iter()
                                .zip(f)
                                .map(|(a, b)| a * (1.0 - noise.p2()) + b * noise.p2())
                                .collect()
                        })
                        .collect();
                }
                Gate::Rz { .. } => {}
            }
        }
        let got = run_density(&circ, &noise).unwrap();
        assert!(max_diff(&density_to_mat(&got), &rho) < 1e-12);
    }
}

#[test]
fn trace_and_hermiticity_after_every_gate() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..100 {
        let n = rng.random_range(1..=4);
        let circ = random_circuit(&mut rng, n, 20, InitialState::Plus);
        let noise = NoiseModel::new(rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)).unwrap();
        let mut rho = DensityMatrix::from_pure(&StateVector::plus(n).unwrap()).unwrap();
        for g in circ.gates() {
            rho.apply_noisy(g, &noise);
            assert!((rho.trace() - ONE).norm() < 1e-10);
            assert!(rho.hermiticity_error() < 1e-10);
        }
    }
}

#[test]
fn maximally_mixed_is_a_fixed_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=5 {
        let mut circ = Circuit::new(n);
        for _ in 0..40 {
            let q = rng.random_range(0..n);
            if n >= 2 && rng.random_bool(0.5) {
                circ.cnot(q, (q + 1) % n).unwrap();
            } else {
                circ.rx(q, rng.random_range(-3.0..3.0)).unwrap();
            }
        }
        let mixed = DensityMatrix::maximally_mixed(n).unwrap();
        let out = run_density_from(&circ, &NoiseModel::new(1.0, 1.0).unwrap(), Some(&mixed)).unwrap();
        assert!(out.max_abs_diff(&mixed) < 1e-12);
        let out = run_density_from(&circ, &NoiseModel::noiseless(), Some(&mixed)).unwrap();
        assert!(out.max_abs_diff(&mixed) < 1e-12);
    }
}

#[test]
fn expectation_examples() {
    let q = Qubo::from_dense(
        vec![vec![1.0, -0.5, 0.0], vec![-0.5, 2.0, 1.5], vec![0.0, 1.5, -3.0]],
        0.25,
    )
    .unwrap();
    for idx in 0..8 {
        let s = StateVector::basis(3, idx).unwrap();
        assert!((expectation_diag(&s, &q).unwrap() - q.cost_of_index(idx)).abs() < 1e-12);
    }
    for n in 1..=6 {
        let e = expectation_diag(&StateVector::plus(n).unwrap(), &Qubo::identity(n)).unwrap();
        assert!((e - n as f64 / 2.0).abs() < 1e-12);
    }
    assert!(matches!(
        expectation_diag(&StateVector::plus(2).unwrap(), &q),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn expectation_agrees_with_shot_mean() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let n = 4;
    let s = random_state(&mut rng, n);
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = rng.random_range(-2.0..2.0);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    let q = Qubo::from_dense(m, 0.0).unwrap();
    let exact = expectation_diag(&s, &q).unwrap();
    let shots = 100_000;
    let costs: Vec<f64> = sample_bitstrings(&s, shots, 99)
        .unwrap()
        .iter()
        .map(|x| q.cost(x.as_slice()).unwrap())
        .collect();
    let mean = costs.iter().sum::<f64>() / shots as f64;
    let var = costs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (shots as f64 - 1.0);
    let se = (var / shots as f64).sqrt();
    assert!((mean - exact).abs() < 3.0 * se, "{mean} vs {exact} (se {se})");
}

#[test]
fn sampling_a_basis_state_is_constant() {
    let s = StateVector::basis(3, 5).unwrap();
    let shots = sample_bitstrings(&s, 50, 3).unwrap();
    assert!(shots.iter().all(|b| b.as_slice() == [1, 0, 1]));
    assert!(sample_indices(&s.probabilities(), 0, 1).is_err());
}

#[test]
fn sampling_is_deterministic_per_seed() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let s = random_state(&mut rng, 4);
    assert_eq!(sample_bitstrings(&s, 500, 8).unwrap(), sample_bitstrings(&s, 500, 8).unwrap());
}

#[test]
fn sampled_distribution_passes_chi_square() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let s = random_state(&mut rng, 4);
    let p = s.probabilities();
    let shots = 100_000;
    let mut counts = [0usize; 16];
    for i in sample_indices(&p, shots, 2026).unwrap() {
        counts[i] += 1;
    }
    let chi2: f64 = counts
        .iter()
        .zip(&p)
        .map(|(&o, &pi)| {
            let e = pi * shots as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    // 15 degrees of freedom; 37.70 is the 0.999 quantile.
    assert!(chi2 < 37.70, "chi-square {chi2}");
}

#[test]
fn density_sampling_uses_the_diagonal() {
    let rho = DensityMatrix::maximally_mixed(2).unwrap();
    let shots = sample_bitstrings(&rho, 40_000, 1).unwrap();
    let ones = shots.iter().filter(|b| b.as_slice() == [1, 1]).count();
    assert!((ones as f64 / 40_000.0 - 0.25).abs() < 0.01);
}

#[test]
fn circuit_text_round_trip_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for init in [InitialState::Zero, InitialState::Plus] {
        let circ = random_circuit(&mut rng, 5, 80, init);
        let text = circ.to_text();
        assert!(text.lines().any(|l| l.starts_with("RX ")));
        let back = Circuit::parse(&text).unwrap();
        assert_eq!(back, circ);
    }
    let parsed = Circuit::parse("RX 0 0.5\nCNOT 0 2\nRZ 1 -1e-3\n").unwrap();
    assert_eq!(parsed.n_qubits(), 3);
    assert_eq!(parsed.len(), 3);
    assert!(Circuit::parse("RY 0 1.0\n").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_circuits_preserve_norm(seed in any::<u64>(), n in 1usize..=13, len in 0usize..=200) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let circ = random_circuit(&mut rng, n, len, InitialState::Plus);
        let out = run_circuit(&circ).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn noiseless_density_tracks_statevector(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let circ = random_circuit(&mut rng, n, 40, InitialState::Plus);
        let pure = DensityMatrix::from_pure(&run_circuit(&circ).unwrap()).unwrap();
        let rho = run_density(&circ, &NoiseModel::noiseless()).unwrap();
        prop_assert!(rho.max_abs_diff(&pure) < 1e-10);
    }

    #[test]
    fn noisy_evolution_stays_physical(seed in any::<u64>(), p1 in 0.0f64..=1.0, p2 in 0.0f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let circ = random_circuit(&mut rng, 3, 30, InitialState::Zero);
        let rho = run_density(&circ, &NoiseModel::new(p1, p2).unwrap()).unwrap();
        prop_assert!((rho.trace() - ONE).norm() < 1e-10);
        prop_assert!(rho.hermiticity_error() < 1e-10);
        let probs = rho.probabilities();
        prop_assert!(probs.iter().all(|&p| p >= -1e-12));
    }
}
