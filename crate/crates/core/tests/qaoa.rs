use std::f64::consts::PI;

use fdeq_core::channel::{group_by_snr, ReceivedBlock};
use fdeq_core::codes::{Code, PolarCodeConfig};
use fdeq_core::qaoa::{
    build_ansatz_circuit, decode_block, extract_solution, optimize_params, qaoa_objective,
    temporal_seed, warm_start_from_preamble, AnsatzParams, Backend, DecodeSettings, Extraction,
    InitStrategy, OptimizerConfig, QaoaEvaluator, ZERO_INIT_ANGLE,
};
use fdeq_core::qsim::{run_circuit, Gate, StateVector};
use fdeq_core::qubo::{
    brute_force_max, brute_force_min, build_qubo, default_weight, IsingModel, Qubo,
};
use fdeq_core::{BitVector, Error};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Mat = Vec<Vec<Complex64>>;

fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// `exp(−i·t·M)` for Hermitian `M` by scaling and squaring a Taylor series.
fn expm_i(m: &Mat, t: f64) -> Mat {
    let n = m.len();
    let norm: f64 = m.iter().flatten().map(|v| v.norm()).sum::<f64>() * t.abs();
    let squarings = (norm.max(1.0).log2().ceil() as i32 + 4).max(0);
    let scale = t / 2f64.powi(squarings);
    let a: Mat = m
        .iter()
        .map(|r| r.iter().map(|v| v * Complex64::new(0.0, -scale)).collect())
        .collect();
    let mut result: Mat = (0..n)
        .map(|i| (0..n).map(|j| Complex64::new(f64::from(u8::from(i == j)), 0.0)).collect())
        .collect();
    let mut term = result.clone();
    for k in 1..30 {
        term = matmul(&term, &a);
        term.iter_mut().flatten().for_each(|v| *v /= k as f64);
        for i in 0..n {
            for j in 0..n {
                result[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        result = matmul(&result, &result);
    }
    result
}

/// Dense `B = Σ_i X_i` on `n` qubits.
fn mixer(n: usize) -> Mat {
    let d = 1 << n;
    let mut m = vec![vec![Complex64::new(0.0, 0.0); d]; d];
    for x in 0..d {
        for q in 0..n {
            m[x ^ (1 << q)][x] += Complex64::new(1.0, 0.0);
        }
    }
    m
}

/// The operator product of the QAOA state applied to `|+⟩^n`, with `C`
/// diagonal in the computational basis.
fn oracle_state(diag: &[f64], params: &AnsatzParams) -> Vec<Complex64> {
    let n = diag.len().trailing_zeros() as usize;
    let d = diag.len();
    let b = mixer(n);
    let mut v = vec![Complex64::new((d as f64).powf(-0.5), 0.0); d];
    for (&g, &beta) in params.gammas().iter().zip(params.betas()) {
        for (a, &c) in v.iter_mut().zip(diag) {
            *a *= Complex64::from_polar(1.0, -g * c);
        }
        let u = expm_i(&b, beta);
        v = u.iter().map(|row| row.iter().zip(&v).map(|(x, y)| x * y).sum()).collect();
    }
    v
}

/// Largest amplitude difference after removing the relative global phase.
fn phase_aligned_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let phase = if ip.norm() > 0.0 { ip / ip.norm() } else { Complex64::new(1.0, 0.0) };
    a.iter().zip(b).map(|(x, y)| (x * phase - y).norm()).fold(0.0, f64::max)
}

fn single_qubit_qubo() -> Qubo {
    // c(x) = −2x, i.e. h = (1) and constant −1 in spin form.
    Qubo::from_dense(vec![vec![-2.0]], 0.0).unwrap()
}

fn polar_block(cfg: &PolarCodeConfig, snr: f64, seed: u64, truth: bool) -> (BitVector, ReceivedBlock) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = BitVector::new((0..cfg.k()).map(|_| rng.random_range(0..2u8)).collect()).unwrap();
    let x = cfg.encode(&u).unwrap();
    let b = ReceivedBlock::transmit(seed, &x, snr, rng.random(), truth.then(|| u.clone())).unwrap();
    (u, b)
}

#[test]
fn single_qubit_layer_matches_two_by_two_algebra() {
    let ising = single_qubit_qubo().to_ising();
    assert_eq!(ising.h(), &[1.0]);
    for &(g, b) in &[(0.3, 0.7), (-1.2, 2.5), (PI / 4.0, -PI / 8.0)] {
        let params = AnsatzParams::new(vec![g], vec![b]).unwrap();
        let s = run_circuit(&build_ansatz_circuit(&ising, &params, true)).unwrap();
        // e^{−iγZ}|+⟩ = (e^{−iγ}|0⟩ + e^{iγ}|1⟩)/√2, then e^{−iβX}.
        let r = 0.5f64.sqrt();
        let (p0, p1) = (Complex64::from_polar(r, -g), Complex64::from_polar(r, g));
        let (cb, sb) = (Complex64::new(b.cos(), 0.0), Complex64::new(0.0, -b.sin()));
        let expect = [cb * p0 + sb * p1, sb * p0 + cb * p1];
        assert!(phase_aligned_diff(s.amplitudes(), &expect) < 1e-10);
    }
}

#[test]
fn zero_angles_give_uniform_superposition() {
    let q = build_qubo(&Code::from(PolarCodeConfig::benchmark()), &[1.0, -0.4, 0.3, 2.0], None).unwrap();
    let params = AnsatzParams::constant(3, 0.0).unwrap();
    let s = run_circuit(&build_ansatz_circuit(&q.to_ising(), &params, true)).unwrap();
    let plus = StateVector::plus(q.n_vars()).unwrap();
    assert!((s.overlap(&plus) - 1.0).abs() < 1e-12);
}

#[test]
fn gate_count_per_layer() {
    let ising = IsingModel::new(
        vec![0.5, 0.0, -1.0],
        vec![vec![0.0, 0.3, 0.0], vec![0.3, 0.0, 0.2], vec![0.0, 0.2, 0.0]],
        0.0,
    )
    .unwrap();
    for p in 1..=3 {
        let c = build_ansatz_circuit(&ising, &AnsatzParams::constant(p, 0.1).unwrap(), true);
        assert_eq!(c.len(), p * (3 + 2 + 3 * 2));
        let rx = c.gates().iter().filter(|g| matches!(g, Gate::Rx { .. })).count();
        assert_eq!(rx, 3 * p);
    }
}

#[test]
fn fast_evaluator_matches_gate_circuit() {
    let q = build_qubo(&Code::from(PolarCodeConfig::benchmark()), &[1.3, -0.4, 0.2, 2.1], None).unwrap();
    let ev = QaoaEvaluator::new(&q, Backend::Exact).unwrap();
    let params = AnsatzParams::new(vec![0.05, 0.11, -0.07], vec![-0.4, 0.3, 0.9]).unwrap();
    let gate = run_circuit(&build_ansatz_circuit(&q.to_ising(), &params, true)).unwrap();
    assert!(phase_aligned_diff(ev.state(&params).amplitudes(), gate.amplitudes()) < 1e-10);
}

#[test]
fn uniform_state_objective_is_mean_cost() {
    let q = build_qubo(&Code::from(PolarCodeConfig::benchmark()), &[0.8, -1.5, 0.1, 1.0], None).unwrap();
    let n = q.n_vars();
    let mean: f64 = (0..1usize << n).map(|i| q.cost_of_index(i)).sum::<f64>() / (1u64 << n) as f64;
    let zero = AnsatzParams::constant(4, 0.0).unwrap();
    let f = qaoa_objective(&q, &zero, Backend::Exact).unwrap();
    assert!((f - mean).abs() < 1e-9 * mean.abs().max(1.0));
}

#[test]
fn zero_init_is_close_to_uniform_objective() {
    let cfg = PolarCodeConfig::benchmark();
    let (_, b) = polar_block(&cfg, 2.0, 7, false);
    let q = build_qubo(&Code::from(cfg), &b.llrs, None).unwrap();
    assert_eq!(q.nominal_vars(), 12);
    let f0 = qaoa_objective(&q, &AnsatzParams::constant(4, 0.0).unwrap(), Backend::Exact).unwrap();
    let fz = qaoa_objective(&q, &AnsatzParams::constant(4, ZERO_INIT_ANGLE).unwrap(), Backend::Exact)
        .unwrap();
    assert!(((fz - f0) / f0).abs() < 1e-3, "{fz} vs {f0}");
}

#[test]
fn sampled_objective_is_a_shot_mean() {
    let cfg = PolarCodeConfig::benchmark();
    let (_, b) = polar_block(&cfg, 1.0, 3, false);
    let q = build_qubo(&Code::from(cfg), &b.llrs, None).unwrap();
    let params = AnsatzParams::new(vec![0.02, 0.04], vec![-0.5, -0.25]).unwrap();
    let exact = qaoa_objective(&q, &params, Backend::Exact).unwrap();
    let ev = QaoaEvaluator::new(&q, Backend::Exact).unwrap();
    let probs = ev.probabilities(&params);
    let var: f64 = probs
        .iter()
        .zip(ev.cost_table())
        .map(|(p, c)| p * (c - exact).powi(2))
        .sum();
    let shots = 20_000;
    let est = qaoa_objective(&q, &params, Backend::Sampled { n_shots: shots, seed: 5 }).unwrap();
    assert!((est - exact).abs() < 4.0 * (var / shots as f64).sqrt());
    let again = qaoa_objective(&q, &params, Backend::Sampled { n_shots: shots, seed: 5 }).unwrap();
    assert_eq!(est, again);
    assert!(QaoaEvaluator::new(&q, Backend::Sampled { n_shots: 0, seed: 1 }).is_err());
}

#[test]
fn oversized_qubos_are_rejected() {
    let q = Qubo::identity(21);
    assert!(matches!(
        qaoa_objective(&q, &AnsatzParams::constant(1, 0.1).unwrap(), Backend::Exact),
        Err(Error::SizeLimit { .. })
    ));
    let q = Qubo::identity(9);
    let noise = fdeq_core::qsim::NoiseModel::noiseless();
    assert!(matches!(QaoaEvaluator::new(&q, Backend::Noisy(noise)), Err(Error::SizeLimit { .. })));
}

#[test]
fn noisy_backend_without_noise_matches_exact() {
    let cfg = PolarCodeConfig::tiny();
    let (_, b) = polar_block(&cfg, 3.0, 1, false);
    let q = build_qubo(&Code::from(cfg), &b.llrs, None).unwrap();
    let params = AnsatzParams::new(vec![0.1, 0.2], vec![-0.3, 0.6]).unwrap();
    let exact = qaoa_objective(&q, &params, Backend::Exact).unwrap();
    let noisy = qaoa_objective(&q, &params, Backend::Noisy(fdeq_core::qsim::NoiseModel::noiseless()))
        .unwrap();
    assert!((exact - noisy).abs() < 1e-8);
}

#[test]
fn grid_scan_oracle_for_single_qubit_landscape() {
    let q = single_qubit_qubo();
    // ⟨C⟩ from the 2×2 state; c(0) = 0, c(1) = −2.
    let landscape = |g: f64, b: f64| {
        let r = 0.5f64.sqrt();
        let (p0, p1) = (Complex64::from_polar(r, -g), Complex64::from_polar(r, g));
        let (cb, sb) = (Complex64::new(b.cos(), 0.0), Complex64::new(0.0, -b.sin()));
        -2.0 * (sb * p0 + cb * p1).norm_sqr()
    };
    let steps = 600;
    let mut grid_min = f64::INFINITY;
    for i in 0..steps {
        for j in 0..steps {
            let g = PI * i as f64 / steps as f64;
            let b = PI * j as f64 / steps as f64;
            grid_min = grid_min.min(landscape(g, b));
        }
    }
    for start in [(0.3, 0.3), (1.0, 2.0), (2.5, 0.4)] {
        let init = AnsatzParams::new(vec![start.0], vec![start.1]).unwrap();
        let out = optimize_params(&q, &init, &OptimizerConfig::default()).unwrap();
        assert!((out.objective - grid_min).abs() < 1e-3, "{} vs {grid_min}", out.objective);
    }
}

#[test]
fn one_iteration_mode_takes_a_single_step() {
    let cfg = PolarCodeConfig::benchmark();
    let (_, b) = polar_block(&cfg, 2.0, 11, false);
    let q = build_qubo(&Code::from(cfg), &b.llrs, None).unwrap();
    let init = temporal_seed(&q, 4).unwrap();
    let out = optimize_params(&q, &init, &OptimizerConfig::one_iteration()).unwrap();
    assert_eq!(out.iterations, 1);
    assert_eq!(out.evaluations, 2 * 4 + 2);
    assert!(out.objective <= out.initial_objective);
}

#[test]
fn optimizer_contracts_on_decoding_problems() {
    let cfg = PolarCodeConfig::benchmark();
    let code = Code::from(cfg.clone());
    for seed in 0..6 {
        let (_, b) = polar_block(&cfg, seed as f64, seed, false);
        let q = build_qubo(&code, &b.llrs, None).unwrap();
        let init = InitStrategy::Random { seed }.initial_params(2).unwrap();
        let c = OptimizerConfig::with_max_iterations(80);
        let out = optimize_params(&q, &init, &c).unwrap();
        assert!(out.iterations <= 80);
        assert!(out.objective <= out.initial_objective);
        assert!(out.history.windows(2).all(|w| w[1] <= w[0]));
        let (_, e_min) = brute_force_min(&q).unwrap();
        assert!(out.objective >= e_min - 1e-9);
    }
}

#[test]
fn reoptimizing_a_converged_point_is_idempotent() {
    let cfg = PolarCodeConfig::benchmark();
    let (_, b) = polar_block(&cfg, 4.0, 21, false);
    let q = build_qubo(&Code::from(cfg), &b.llrs, None).unwrap();
    let c = OptimizerConfig::with_max_iterations(5000);
    let first = optimize_params(&q, &temporal_seed(&q, 2).unwrap(), &c).unwrap();
    assert!(first.converged);
    let second = optimize_params(&q, &first.params, &c).unwrap();
    assert!((first.objective - second.objective).abs() < c.convergence_tol);
}

#[test]
fn init_strategies() {
    let r = InitStrategy::Random { seed: 9 }.initial_params(4).unwrap();
    assert!(r.to_vec().iter().all(|&a| (0.0..=PI).contains(&a)));
    assert_eq!(r, InitStrategy::Random { seed: 9 }.initial_params(4).unwrap());
    assert_ne!(r, InitStrategy::Random { seed: 10 }.initial_params(4).unwrap());
    let z = InitStrategy::Zero.initial_params(3).unwrap();
    assert!(z.to_vec().iter().all(|&a| a == 1e-4));
    let t = InitStrategy::Temporal { params: z.clone() };
    assert_eq!(t.initial_params(3).unwrap(), z);
    assert!(t.initial_params(2).is_err());
    assert!(AnsatzParams::new(vec![0.1], vec![]).is_err());
    assert!(AnsatzParams::new(vec![], vec![]).is_err());
}

#[test]
fn temporal_seed_rescaling() {
    // Σ_{i≤j}|Q_ij| = 4 halves every seed γ.
    let q = Qubo::from_dense(vec![vec![2.0, -0.5], vec![-0.5, 1.5]], 0.0).unwrap();
    let ramp = AnsatzParams::linear_ramp(4, 0.5, fdeq_core::qaoa::RAMP_BETA0).unwrap();
    let seed = temporal_seed(&q, 4).unwrap();
    for (a, b) in seed.gammas().iter().zip(ramp.gammas()) {
        assert_eq!(*a, b / 2.0);
    }
    assert_eq!(seed.betas(), ramp.betas());
    assert_eq!(ramp.gammas(), &[0.125, 0.25, 0.375, 0.5]);
}

fn preamble_frame(cfg: &PolarCodeConfig, snr: f64, seed: u64) -> fdeq_core::channel::Frame {
    let (_, pre) = polar_block(cfg, snr, seed, true);
    let (_, pay) = polar_block(cfg, snr, seed + 1, false);
    group_by_snr(vec![pre, pay], 1.0).unwrap().remove(0)
}

#[test]
fn warm_start_needs_a_preamble() {
    let cfg = PolarCodeConfig::benchmark();
    let code = Code::from(cfg.clone());
    let mut frame = preamble_frame(&cfg, 3.0, 1);
    frame.preamble.clear();
    let r = warm_start_from_preamble(&frame, |b| build_qubo(&code, &b.llrs, None), 2, &OptimizerConfig::default());
    assert!(matches!(r, Err(Error::NoPreamble)));
}

#[test]
fn warm_start_is_deterministic_and_beats_random_starts() {
    let cfg = PolarCodeConfig::benchmark();
    let code = Code::from(cfg.clone());
    let frame = preamble_frame(&cfg, 3.0, 40);
    let builder = |b: &ReceivedBlock| build_qubo(&code, &b.llrs, None);
    let c = OptimizerConfig::default();
    let p = 2;
    let warm = warm_start_from_preamble(&frame, builder, p, &c).unwrap();
    assert_eq!(warm, warm_start_from_preamble(&frame, builder, p, &c).unwrap());
    let q = builder(&frame.preamble[0]).unwrap();
    let ev = QaoaEvaluator::new(&q, Backend::Exact).unwrap();
    let warm_f = ev.objective(&warm);
    // Paired comparison: the same budget spent from 50 random starts.
    let mean_random: f64 = (0..50)
        .map(|s| {
            let init = InitStrategy::Random { seed: s }.initial_params(p).unwrap();
            optimize_params(&q, &init, &c).unwrap().objective
        })
        .sum::<f64>()
        / 50.0;
    assert!(warm_f <= mean_random, "{warm_f} vs {mean_random}");
}

#[test]
fn noiseless_channel_decodes_every_message() {
    let cfg = PolarCodeConfig::benchmark();
    let code = Code::from(cfg.clone());
    for m in 0..4u64 {
        let u = BitVector::from_index_msb(m, 2);
        let x = cfg.encode(&u).unwrap();
        // Large finite LLRs stand in for σ → 0.
        let llrs: Vec<f64> = x.iter().map(|b| if b == 0 { 50.0 } else { -50.0 }).collect();
        let block = ReceivedBlock::new(m, 99.0, vec![0.0; 4], llrs.clone(), None).unwrap();
        let q = build_qubo(&code, &llrs, None).unwrap();
        let temporal = InitStrategy::Temporal {
            params: temporal_seed(&q, 2).unwrap(),
        };
        for init in [temporal, InitStrategy::Random { seed: m }] {
            let settings = DecodeSettings::new(2, init);
            let r = decode_block(&block, &code, &settings).unwrap();
            assert_eq!(r.data_bits, u, "message {m}");
            assert_eq!(r.codeword_bits, x);
        }
    }
}

#[test]
fn decode_result_invariants() {
    let cfg = PolarCodeConfig::benchmark();
    let code = Code::from(cfg.clone());
    for seed in 0..5 {
        let (u, b) = polar_block(&cfg, 2.0, 100 + seed, false);
        let q = build_qubo(&code, &b.llrs, None).unwrap();
        let mut settings = DecodeSettings::new(2, InitStrategy::Zero);
        settings.optimizer = Some(OptimizerConfig::with_max_iterations(60));
        let r = decode_block(&b, &code, &settings).unwrap();
        assert_eq!(r.energy, q.cost(r.solution_bits.as_slice()).unwrap());
        let (_, lo) = brute_force_min(&q).unwrap();
        let (_, hi) = brute_force_max(&q).unwrap();
        let norm = r.normalized_energy.unwrap();
        assert!((norm - (r.energy - lo) / (hi - lo)).abs() < 1e-12);
        assert!((0.0..=1.0).contains(&r.normalized_expected_energy.unwrap()));
        assert_eq!(r.data_bits, q.data_bits(r.solution_bits.as_slice()).unwrap());
        assert!(r.iterations_used <= 60);
        assert!(r.data_bit_errors(&u).unwrap() <= 2);
    }
}

#[test]
fn full_extraction_is_brute_force_over_support() {
    let cfg = PolarCodeConfig::benchmark();
    let (_, b) = polar_block(&cfg, 1.0, 8, false);
    let q = build_qubo(&Code::from(cfg), &b.llrs, None).unwrap();
    let ev = QaoaEvaluator::new(&q, Backend::Exact).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let params = AnsatzParams::new(
            vec![rng.random_range(-0.2..0.2), rng.random_range(-0.2..0.2)],
            vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)],
        )
        .unwrap();
        let probs = ev.probabilities(&params);
        let n = 1usize << q.n_vars();
        let got = extract_solution(&probs, ev.cost_table(), &Extraction::Exact { top_m: n }).unwrap();
        let best = (0..n)
            .filter(|&i| probs[i] > 0.0)
            .map(|i| q.cost_of_index(i))
            .fold(f64::INFINITY, f64::min);
        assert_eq!(q.cost_of_index(got), best);
    }
}

#[test]
fn sampled_extraction_decodes() {
    let cfg = PolarCodeConfig::benchmark();
    let code = Code::from(cfg.clone());
    let (u, b) = polar_block(&cfg, 8.0, 5, false);
    let mut settings = DecodeSettings::new(2, InitStrategy::Zero);
    settings.extraction = Extraction::Sampled { n_shots: 4096, seed: 3 };
    let r = decode_block(&b, &code, &settings).unwrap();
    assert_eq!(r.data_bits, u);
}

/// Best `(γ, β)` of the `p = 1` landscape on a grid with `γ ∈ (0, γ_max]`
/// and `β ∈ [−π/2, π/2)`. The `β` range holds one representative of each
/// class `β ~ β + π`, and `γ > 0` removes the `(γ, β) ~ (−γ, −β)` mirror.
fn grid_optimum(ev: &QaoaEvaluator, gamma_max: f64, steps: usize) -> (f64, f64) {
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 1..=steps {
        let g = gamma_max * i as f64 / steps as f64;
        for j in 0..steps {
            let b = -PI / 2.0 + PI * j as f64 / steps as f64;
            let f = ev.objective(&AnsatzParams::new(vec![g], vec![b]).unwrap());
            if f < best.0 {
                best = (f, g, b);
            }
        }
    }
    (best.1, best.2)
}

#[test]
fn optimal_angles_concentrate_across_problems() {
    let cfg = PolarCodeConfig::tiny();
    let code = Code::from(cfg.clone());
    let mut gammas = Vec::new();
    let mut betas = Vec::new();
    for seed in 0..100 {
        let (_, b) = polar_block(&cfg, 4.0, 1000 + seed, false);
        let w = default_weight(&b.llrs);
        let q = build_qubo(&code, &b.llrs, Some(w)).unwrap();
        let ev = QaoaEvaluator::new(&q, Backend::Exact).unwrap();
        // The penalty phase repeats every 2π/w_s in γ; the scan covers the
        // first half period and reports γ in units of 1/w_s.
        let (g, beta) = grid_optimum(&ev, PI / w, 120);
        gammas.push(g * w);
        betas.push(beta);
    }
    let stats = |v: &[f64]| {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        let s = (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() as f64 - 1.0)).sqrt();
        (m, s)
    };
    let (mg, sg) = stats(&gammas);
    let (mb, sb) = stats(&betas);
    assert!(sg < 0.2 * mg.abs(), "γ mean {mg} std {sg}");
    assert!(sb < 0.2 * mb.abs(), "β mean {mb} std {sb}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn ansatz_equals_exponentiated_operators(
        seed in any::<u64>(),
        n in 1usize..=3,
        p in 1usize..=2,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let mut j = vec![vec![0.0; n]; n];
        for a in 0..n {
            for b in a + 1..n {
                let v = if rng.random_bool(0.7) { rng.random_range(-2.0..2.0) } else { 0.0 };
                j[a][b] = v;
                j[b][a] = v;
            }
        }
        let ising = IsingModel::new(h, j, rng.random_range(-1.0..1.0)).unwrap();
        let params = AnsatzParams::new(
            (0..p).map(|_| rng.random_range(-PI..PI)).collect(),
            (0..p).map(|_| rng.random_range(-PI..PI)).collect(),
        ).unwrap();
        let diag: Vec<f64> = (0..1u64 << n)
            .map(|x| {
                let bits: Vec<u8> = (0..n).map(|k| ((x >> k) & 1) as u8).collect();
                ising.energy_of_bits(&bits).unwrap()
            })
            .collect();
        let expect = oracle_state(&diag, &params);
        let got = run_circuit(&build_ansatz_circuit(&ising, &params, true)).unwrap();
        prop_assert!(phase_aligned_diff(got.amplitudes(), &expect) < 1e-8);
    }

    #[test]
    fn objective_is_bounded_by_extrema(
        seed in any::<u64>(),
        angles in proptest::collection::vec(-PI..PI, 4),
    ) {
        let cfg = PolarCodeConfig::benchmark();
        let (_, b) = polar_block(&cfg, 2.0, seed, false);
        let q = build_qubo(&Code::from(cfg), &b.llrs, None).unwrap();
        let params = AnsatzParams::from_slice(&angles).unwrap();
        let f = qaoa_objective(&q, &params, Backend::Exact).unwrap();
        let (_, lo) = brute_force_min(&q).unwrap();
        let (_, hi) = brute_force_max(&q).unwrap();
        prop_assert!(f >= lo - 1e-9 && f <= hi + 1e-9);
    }

    #[test]
    fn optimizer_never_worsens(seed in any::<u64>(), budget in 1usize..40) {
        let cfg = PolarCodeConfig::tiny();
        let (_, b) = polar_block(&cfg, 3.0, seed, false);
        let q = build_qubo(&Code::from(cfg), &b.llrs, None).unwrap();
        let init = InitStrategy::Random { seed }.initial_params(2).unwrap();
        let out = optimize_params(&q, &init, &OptimizerConfig::with_max_iterations(budget)).unwrap();
        prop_assert!(out.objective <= out.initial_objective);
        prop_assert!(out.iterations <= budget);
        prop_assert!(out.history.windows(2).all(|w| w[1] <= w[0]));
    }
}
