use num_complex::Complex64;

use super::circuit::{Circuit, Gate};
use super::statevector::{apply_cnot, apply_rx, apply_rz, StateVector};
use crate::error::{Error, Result};

/// Largest register the density-matrix backend accepts.
pub const DENSITY_CAP: usize = 8;

/// Depolarizing rates: `p1` after every RX, `p2` after every CNOT. RZ is
/// noiseless.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseModel {
    p1: f64,
    p2: f64,
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        for (name, p) in [("p1", p1), ("p2", p2)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {p} is outside [0, 1]"
                )));
            }
        }
        Ok(Self { p1, p2 })
    }

    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }
}

/// Mixed state stored row-major: entry `(r, c)` sits at `r·2^n + c`, so the
/// flat index carries the column in its low `n` bits and the row in the high
/// `n` bits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    rho: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn from_pure(s: &StateVector) -> Result<Self> {
        let n = s.n_qubits();
        if n > DENSITY_CAP {
            return Err(Error::SizeLimit {
                what: "density-matrix qubits",
                limit: DENSITY_CAP,
                actual: n,
            });
        }
        let a = s.amplitudes();
        let dim = a.len();
        let mut rho = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                rho.push(a[r] * a[c].conj());
            }
        }
        Ok(Self { n_qubits: n, rho })
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        if n_qubits > DENSITY_CAP {
            return Err(Error::SizeLimit {
                what: "density-matrix qubits",
                limit: DENSITY_CAP,
                actual: n_qubits,
            });
        }
        let dim = 1usize << n_qubits;
        let mut rho = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            rho[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Ok(Self { n_qubits, rho })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.rho[row * self.dim() + col]
    }

    pub fn trace(&self) -> Complex64 {
        let d = self.dim();
        (0..d).map(|i| self.rho[i * d + i]).sum()
    }

    /// Largest `|ρ_rc − conj(ρ_cr)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in r..d {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    /// Largest elementwise distance to another density matrix.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.rho
            .iter()
            .zip(&other.rho)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|i| self.rho[i * d + i].re).collect()
    }

    /// `ρ → UρU†`: `U` on the row bits, `conj(U)` on the column bits.
    pub fn apply_unitary(&mut self, gate: &Gate) {
        let n = self.n_qubits;
        match *gate {
            Gate::Rx { qubit, angle } => {
                apply_rx(&mut self.rho, qubit + n, angle);
                apply_rx(&mut self.rho, qubit, -angle);
            }
            Gate::Rz { qubit, angle } => {
                apply_rz(&mut self.rho, qubit + n, angle);
                apply_rz(&mut self.rho, qubit, -angle);
            }
            Gate::Cnot { control, target } => {
                apply_cnot(&mut self.rho, control + n, target + n);
                apply_cnot(&mut self.rho, control, target);
            }
        }
    }

    /// `ρ → (1−p)ρ + p·(I/2 ⊗ tr_q ρ)`.
    pub fn depolarize_1q(&mut self, q: usize, p: f64) {
        if p == 0.0 {
            return;
        }
        let n = self.n_qubits;
        let col = 1usize << q;
        let row = 1usize << (q + n);
        let keep = 1.0 - p;
        for i in 0..self.rho.len() {
            if i & (col | row) != 0 {
                continue;
            }
            let (i00, i11) = (i, i | row | col);
            let avg = (self.rho[i00] + self.rho[i11]) * 0.5;
            self.rho[i00] = self.rho[i00] * keep + avg * p;
            self.rho[i11] = self.rho[i11] * keep + avg * p;
            self.rho[i | col] *= keep;
            self.rho[i | row] *= keep;
        }
    }

    /// `ρ → (1−p)ρ + p·(I/4 ⊗ tr_{a,b} ρ)`.
    pub fn depolarize_2q(&mut self, a: usize, b: usize, p: f64) {
        if p == 0.0 {
            return;
        }
        let n = self.n_qubits;
        let col = [0, 1usize << a, 1usize << b, (1usize << a) | (1usize << b)];
        let row = col.map(|m| m << n);
        let mask = col[3] | row[3];
        let keep = 1.0 - p;
        for i in 0..self.rho.len() {
            if i & mask != 0 {
                continue;
            }
            let mut avg = Complex64::new(0.0, 0.0);
            for k in 0..4 {
                avg += self.rho[i | row[k] | col[k]];
            }
            avg *= 0.25;
            for r in 0..4 {
                for c in 0..4 {
                    let idx = i | row[r] | col[c];
                    self.rho[idx] = if r == c {
                        self.rho[idx] * keep + avg * p
                    } else {
                        self.rho[idx] * keep
                    };
                }
            }
        }
    }

    /// Applies one gate followed by the noise channel attached to it.
    pub fn apply_noisy(&mut self, gate: &Gate, noise: &NoiseModel) {
        self.apply_unitary(gate);
        match *gate {
            Gate::Rx { qubit, .. } => self.depolarize_1q(qubit, noise.p1),
            Gate::Cnot { control, target } => self.depolarize_2q(control, target, noise.p2),
            Gate::Rz { .. } => {}
        }
    }
}

/// Runs `c` from its declared initial state under `noise`.
pub fn run_density(c: &Circuit, noise: &NoiseModel) -> Result<DensityMatrix> {
    run_density_from(c, noise, None)
}

/// As [`run_density`], starting from `initial` when given.
pub fn run_density_from(
    c: &Circuit,
    noise: &NoiseModel,
    initial: Option<&DensityMatrix>,
) -> Result<DensityMatrix> {
    if c.n_qubits() > DENSITY_CAP {
        return Err(Error::SizeLimit {
            what: "density-matrix qubits",
            limit: DENSITY_CAP,
            actual: c.n_qubits(),
        });
    }
    let mut rho = match initial {
        Some(r) if r.n_qubits() != c.n_qubits() => {
            return Err(Error::DimensionMismatch {
                expected: c.n_qubits(),
                actual: r.n_qubits(),
            })
        }
        Some(r) => r.clone(),
        None => DensityMatrix::from_pure(&StateVector::initial(c.n_qubits(), c.initial())?)?,
    };
    for g in c.gates() {
        rho.apply_noisy(g, noise);
    }
    Ok(rho)
}
