//! QUBO and Ising models of the decoding problem.
//!
//! A [`Qubo`] stores a symmetric matrix `Q` and an offset; the cost of a
//! binary assignment `x` is `xᵀQx + offset`. Because `x_i² = x_i`, linear
//! terms live on the diagonal and a product `c·x_i·x_j` is split evenly as
//! `Q_ij = Q_ji = c/2`.

mod brute;
mod build;

pub use brute::{brute_force_max, brute_force_min, brute_force_min_with_cap, BRUTE_FORCE_CAP};
pub use build::{build_ldpc_qubo, build_polar_qubo, build_qubo, default_weight, Structure, XorGadget};

use std::fmt::Write as _;

use crate::bits::BitVector;
use crate::error::{check_len, Error, Result};

/// Role of a QUBO variable in the decoding model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarRole {
    /// A polar encoder input `e_i` (non-frozen).
    InputBit,
    /// A codeword bit that is not also an encoder input.
    CodewordBit,
    /// An internal XOR output of the polar encoding tree.
    Intermediate,
    /// Auxiliary variable of a parity penalty.
    Ancilla,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Qubo {
    n: usize,
    q: Vec<f64>,
    offset: f64,
    roles: Vec<VarRole>,
    codeword_map: Vec<usize>,
    data_map: Vec<usize>,
    structure: Structure,
}

impl Qubo {
    /// A generic QUBO from a dense matrix. The matrix must be symmetric.
    pub fn from_dense(q: Vec<Vec<f64>>, offset: f64) -> Result<Self> {
        let n = q.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &q {
            check_len(n, row.len())?;
            flat.extend_from_slice(row);
        }
        for i in 0..n {
            for j in 0..i {
                if flat[i * n + j] != flat[j * n + i] {
                    return Err(Error::InvalidParameter(format!(
                        "Q is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self::generic(n, flat, offset))
    }

    pub(crate) fn generic(n: usize, q: Vec<f64>, offset: f64) -> Self {
        Self {
            n,
            q,
            offset,
            roles: vec![VarRole::Intermediate; n],
            codeword_map: Vec::new(),
            data_map: Vec::new(),
            structure: Structure::Generic,
        }
    }

    pub(crate) fn with_metadata(
        mut self,
        roles: Vec<VarRole>,
        codeword_map: Vec<usize>,
        data_map: Vec<usize>,
        structure: Structure,
    ) -> Self {
        debug_assert_eq!(roles.len(), self.n);
        self.roles = roles;
        self.codeword_map = codeword_map;
        self.data_map = data_map;
        self.structure = structure;
        self
    }

    pub fn identity(n: usize) -> Self {
        let mut q = vec![0.0; n * n];
        for i in 0..n {
            q[i * n + i] = 1.0;
        }
        Self::generic(n, q, 0.0)
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.q[i * self.n + j]
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.q.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn roles(&self) -> &[VarRole] {
        &self.roles
    }

    /// Variable holding codeword bit `i`.
    pub fn codeword_map(&self) -> &[usize] {
        &self.codeword_map
    }

    /// Variable holding data bit `i`.
    pub fn data_map(&self) -> &[usize] {
        &self.data_map
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    /// Number of variables of the model before frozen polar inputs were
    /// substituted out (equal to [`n_vars`](Self::n_vars) otherwise).
    pub fn nominal_vars(&self) -> usize {
        self.n + self.structure.eliminated()
    }

    /// `Σ_{i≤j} |Q_ij|`, the coefficient mass used to rescale angles.
    pub fn coefficient_sum(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                s += self.get(i, j).abs();
            }
        }
        s
    }

    /// `xᵀQx + offset`.
    pub fn cost(&self, x: &[u8]) -> Result<f64> {
        check_len(self.n, x.len())?;
        Ok(self.cost_unchecked(x))
    }

    pub(crate) fn cost_unchecked(&self, x: &[u8]) -> f64 {
        let mut c = self.offset;
        for i in 0..self.n {
            if x[i] == 0 {
                continue;
            }
            let row = &self.q[i * self.n..(i + 1) * self.n];
            c += row[i];
            for j in (i + 1)..self.n {
                if x[j] == 1 {
                    c += 2.0 * row[j];
                }
            }
        }
        c
    }

    /// Cost of the basis state whose index has bit `k` equal to variable `k`
    /// (variable 0 is the least-significant bit).
    pub fn cost_of_index(&self, index: usize) -> f64 {
        let x: Vec<u8> = (0..self.n).map(|k| ((index >> k) & 1) as u8).collect();
        self.cost_unchecked(&x)
    }

    /// Costs of all `2^n` basis states, indexed like [`cost_of_index`](Self::cost_of_index).
    pub fn cost_table(&self) -> Result<Vec<f64>> {
        if self.n > 30 {
            return Err(Error::SizeLimit {
                what: "cost table qubits",
                limit: 30,
                actual: self.n,
            });
        }
        let dim = 1usize << self.n;
        let mut table = vec![self.offset; dim];
        // table[idx] = table[idx without its top bit] + contribution of that bit.
        for idx in 1..dim {
            let top = usize::BITS as usize - 1 - idx.leading_zeros() as usize;
            let rest = idx & !(1 << top);
            let row = &self.q[top * self.n..(top + 1) * self.n];
            let mut delta = row[top];
            let mut r = rest;
            while r != 0 {
                let j = r.trailing_zeros() as usize;
                delta += 2.0 * row[j];
                r &= r - 1;
            }
            table[idx] = table[rest] + delta;
        }
        Ok(table)
    }

    /// Restricts an assignment to the data bits.
    pub fn data_bits(&self, x: &[u8]) -> Result<BitVector> {
        check_len(self.n, x.len())?;
        if self.data_map.is_empty() {
            return Err(Error::InvalidParameter("QUBO has no data map".into()));
        }
        BitVector::new(self.data_map.iter().map(|&v| x[v]).collect())
    }

    pub fn codeword_bits(&self, x: &[u8]) -> Result<BitVector> {
        check_len(self.n, x.len())?;
        if self.codeword_map.is_empty() {
            return Err(Error::InvalidParameter("QUBO has no codeword map".into()));
        }
        BitVector::new(self.codeword_map.iter().map(|&v| x[v]).collect())
    }

    /// Spin form via `x = (1 − z)/2`.
    pub fn to_ising(&self) -> IsingModel {
        let n = self.n;
        let mut h = vec![0.0; n];
        let mut j = vec![0.0; n * n];
        let mut constant = self.offset;
        for a in 0..n {
            let qaa = self.get(a, a);
            h[a] -= qaa / 2.0;
            constant += qaa / 2.0;
            for b in (a + 1)..n {
                let qab = self.get(a, b);
                if qab == 0.0 {
                    continue;
                }
                // 2·Q_ab·x_a·x_b = Q_ab/2 · (1 − z_a − z_b + z_a z_b)
                constant += qab / 2.0;
                h[a] -= qab / 2.0;
                h[b] -= qab / 2.0;
                j[a * n + b] += qab / 2.0;
                j[b * n + a] += qab / 2.0;
            }
        }
        IsingModel { n, h, j, constant }
    }

    /// Sparse text form: a header `n offset` then `i j value` lines with
    /// `i ≤ j` for every non-zero entry. Values are written in shortest
    /// round-trip form so parsing restores them bit for bit.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.offset);
        for i in 0..self.n {
            for j in i..self.n {
                let v = self.get(i, j);
                if v != 0.0 || (v == 0.0 && v.is_sign_negative()) {
                    let _ = writeln!(s, "{i} {j} {v}");
                }
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let perr = |line: usize, message: String| Error::Parse { line, message };
        let (hl, header) = lines.next().ok_or(Error::EmptyInput)?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .ok_or_else(|| perr(hl, "missing n".into()))?
            .parse()
            .map_err(|e| perr(hl, format!("{e}")))?;
        let offset: f64 = it
            .next()
            .ok_or_else(|| perr(hl, "missing offset".into()))?
            .parse()
            .map_err(|e| perr(hl, format!("{e}")))?;
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        let mut q = vec![0.0; n * n];
        for (ln, l) in lines {
            let f: Vec<&str> = l.split_whitespace().collect();
            if f.len() != 3 {
                return Err(perr(ln, "expected `i j value`".into()));
            }
            let i: usize = f[0].parse().map_err(|e| perr(ln, format!("{e}")))?;
            let j: usize = f[1].parse().map_err(|e| perr(ln, format!("{e}")))?;
            let v: f64 = f[2].parse().map_err(|e| perr(ln, format!("{e}")))?;
            if i > j || j >= n {
                return Err(perr(ln, format!("index ({i},{j}) out of range")));
            }
            q[i * n + j] = v;
            q[j * n + i] = v;
        }
        Ok(Self::generic(n, q, offset))
    }
}

/// `E(z) = Σ h_i z_i + Σ_{i<j} J_ij z_i z_j + constant` over spins `z_i = ±1`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    n: usize,
    h: Vec<f64>,
    j: Vec<f64>,
    constant: f64,
}

impl IsingModel {
    pub fn new(h: Vec<f64>, j: Vec<Vec<f64>>, constant: f64) -> Result<Self> {
        let n = h.len();
        check_len(n, j.len())?;
        let mut flat = Vec::with_capacity(n * n);
        for row in &j {
            check_len(n, row.len())?;
            flat.extend_from_slice(row);
        }
        for a in 0..n {
            if flat[a * n + a] != 0.0 {
                return Err(Error::InvalidParameter("J must have a zero diagonal".into()));
            }
            for b in 0..a {
                if flat[a * n + b] != flat[b * n + a] {
                    return Err(Error::InvalidParameter("J must be symmetric".into()));
                }
            }
        }
        Ok(Self {
            n,
            h,
            j: flat,
            constant,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn j(&self, a: usize, b: usize) -> f64 {
        self.j[a * self.n + b]
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    /// Non-zero couplings `(i, j, J_ij)` with `i < j`.
    pub fn couplings(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in (a + 1)..self.n {
                let v = self.j(a, b);
                if v != 0.0 {
                    out.push((a, b, v));
                }
            }
        }
        out
    }

    pub fn energy(&self, z: &[i8]) -> Result<f64> {
        check_len(self.n, z.len())?;
        let mut e = self.constant;
        for a in 0..self.n {
            e += self.h[a] * f64::from(z[a]);
            for b in (a + 1)..self.n {
                e += self.j(a, b) * f64::from(z[a]) * f64::from(z[b]);
            }
        }
        Ok(e)
    }

    /// Energy of the spin image of the binary assignment `x` (`z = 1 − 2x`).
    pub fn energy_of_bits(&self, x: &[u8]) -> Result<f64> {
        let z: Vec<i8> = x.iter().map(|&b| 1 - 2 * b as i8).collect();
        self.energy(&z)
    }
}
