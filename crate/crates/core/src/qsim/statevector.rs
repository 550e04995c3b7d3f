use num_complex::Complex64;

use super::circuit::{Circuit, Gate, InitialState};
use crate::error::{Error, Result};

/// Largest register the statevector backend accepts.
pub const STATEVECTOR_CAP: usize = 20;

const NORM_TOL: f64 = 1e-10;

/// Pure state on `n` qubits. Basis index bit `k` is qubit `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

fn check_cap(n: usize, cap: usize, what: &'static str) -> Result<()> {
    if n > cap {
        return Err(Error::SizeLimit {
            what,
            limit: cap,
            actual: n,
        });
    }
    Ok(())
}

impl StateVector {
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_cap(n_qubits, STATEVECTOR_CAP, "statevector qubits")?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn plus(n_qubits: usize) -> Result<Self> {
        check_cap(n_qubits, STATEVECTOR_CAP, "statevector qubits")?;
        let dim = 1usize << n_qubits;
        let a = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        Ok(Self {
            n_qubits,
            amps: vec![a; dim],
        })
    }

    pub fn initial(n_qubits: usize, init: InitialState) -> Result<Self> {
        match init {
            InitialState::Zero => Self::zero(n_qubits),
            InitialState::Plus => Self::plus(n_qubits),
        }
    }

    /// Rejects lengths that are not a power of two and states whose norm is
    /// off by more than `1e-10`.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "amplitude count {dim} is not a power of two"
            )));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_cap(n_qubits, STATEVECTOR_CAP, "statevector qubits")?;
        let s = Self { n_qubits, amps };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParameter(format!(
                "state norm² {norm} differs from 1"
            )));
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `|⟨self|other⟩|`, which is 1 exactly when the states agree up to a
    /// global phase.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm()
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn apply(&mut self, gate: &Gate) {
        apply_gate(&mut self.amps, gate);
    }
}

pub(crate) fn apply_gate(v: &mut [Complex64], gate: &Gate) {
    match *gate {
        Gate::Rx { qubit, angle } => apply_rx(v, qubit, angle),
        Gate::Rz { qubit, angle } => apply_rz(v, qubit, angle),
        Gate::Cnot { control, target } => apply_cnot(v, control, target),
    }
}

pub(crate) fn apply_rx(v: &mut [Complex64], q: usize, theta: f64) {
    let (s, c) = (theta / 2.0).sin_cos();
    let step = 1usize << q;
    let mis = Complex64::new(0.0, -s);
    for base in (0..v.len()).step_by(2 * step) {
        for i in base..base + step {
            let a = v[i];
            let b = v[i + step];
            v[i] = a * c + b * mis;
            v[i + step] = a * mis + b * c;
        }
    }
}

pub(crate) fn apply_rz(v: &mut [Complex64], q: usize, theta: f64) {
    let (s, c) = (theta / 2.0).sin_cos();
    let p0 = Complex64::new(c, -s);
    let p1 = Complex64::new(c, s);
    let step = 1usize << q;
    for base in (0..v.len()).step_by(2 * step) {
        for i in base..base + step {
            v[i] *= p0;
            v[i + step] *= p1;
        }
    }
}

pub(crate) fn apply_cnot(v: &mut [Complex64], control: usize, target: usize) {
    let cm = 1usize << control;
    let tm = 1usize << target;
    for i in 0..v.len() {
        if i & cm != 0 && i & tm == 0 {
            v.swap(i, i | tm);
        }
    }
}

/// Applies the gates of `c` in order to `initial`.
pub fn run_statevector(c: &Circuit, initial: &StateVector) -> Result<StateVector> {
    if c.n_qubits() != initial.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: c.n_qubits(),
            actual: initial.n_qubits(),
        });
    }
    let mut s = initial.clone();
    for g in c.gates() {
        s.apply(g);
    }
    Ok(s)
}

/// Runs `c` from the initial state it declares.
pub fn run_circuit(c: &Circuit) -> Result<StateVector> {
    let init = StateVector::initial(c.n_qubits(), c.initial())?;
    run_statevector(c, &init)
}
