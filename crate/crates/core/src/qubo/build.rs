//! Decoding QUBO construction: satisfier penalties for the code structure plus
//! a linear LLR distance on the codeword bits.
//!
//! * LDPC check on bits `b_1..b_k` with ancillas `a_1..a_m`, `m = ⌊k/2⌋`:
//!   `w_s·(Σb − 2Σa)²`, zero exactly when the check has even parity and the
//!   ancillas count half of the ones.
//! * Polar XOR node `z = x ⊕ y` with one ancilla: `w_s·(x + y + z − 2a)²`.
//! * Distance: `Σ_i L_i·x_i` over the codeword bits.
//!
//! Any violated constraint costs at least `w_s`, and the distance of two
//! assignments differs by at most `Σ|L_i|`, so `w_s > Σ|L_i|` puts the
//! maximum-likelihood codeword at the global minimum. All channel dependence
//! sits on the diagonal of `Q`.

use super::{Qubo, VarRole};
use crate::bits::BitVector;
use crate::codes::{Code, ParityCheckMatrix, PolarCodeConfig};
use crate::error::{check_len, Error, Result};

/// Default satisfier weight `Σ|L_i| + 1`.
pub fn default_weight(llrs: &[f64]) -> f64 {
    llrs.iter().map(|l| l.abs()).sum::<f64>() + 1.0
}

fn check_weight(llrs: &[f64], w_s: f64) -> Result<()> {
    let required = llrs.iter().map(|l| l.abs()).sum::<f64>();
    if !(w_s > required) || !w_s.is_finite() {
        return Err(Error::WeightTooSmall {
            weight: w_s,
            required,
        });
    }
    Ok(())
}

/// Builds the decoding QUBO for either code family; `w_s = None` uses
/// [`default_weight`].
pub fn build_qubo(code: &Code, llrs: &[f64], w_s: Option<f64>) -> Result<Qubo> {
    let w = w_s.unwrap_or_else(|| default_weight(llrs));
    match code {
        Code::Ldpc(c) => build_ldpc_qubo(c.h(), llrs, w),
        Code::Polar(c) => build_polar_qubo(c, llrs, w),
    }
}

/// A polar XOR node: `output = left ⊕ right` enforced with `ancilla`.
/// `None` operands are frozen inputs fixed to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XorGadget {
    pub left: Option<usize>,
    pub right: Option<usize>,
    pub output: usize,
    pub ancilla: usize,
}

/// How the QUBO variables relate to the code, used to complete assignments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    Generic,
    Ldpc {
        /// Per check: its codeword bits and its ancilla variables.
        checks: Vec<(Vec<usize>, Vec<usize>)>,
    },
    Polar {
        /// Variable for each encoder input, `None` where frozen.
        inputs: Vec<Option<usize>>,
        /// XOR nodes, children before parents.
        gadgets: Vec<XorGadget>,
    },
}

impl Structure {
    /// Number of variables substituted out as constants.
    pub fn eliminated(&self) -> usize {
        match self {
            Structure::Polar { inputs, .. } => inputs.iter().filter(|v| v.is_none()).count(),
            _ => 0,
        }
    }
}

/// Polynomial accumulator over binary variables.
struct Poly {
    n: usize,
    q: Vec<f64>,
    constant: f64,
}

impl Poly {
    fn new(n: usize) -> Self {
        Self {
            n,
            q: vec![0.0; n * n],
            constant: 0.0,
        }
    }

    fn add_linear(&mut self, i: usize, c: f64) {
        self.q[i * self.n + i] += c;
    }

    fn add_product(&mut self, i: usize, j: usize, c: f64) {
        if i == j {
            self.add_linear(i, c);
        } else {
            self.q[i * self.n + j] += c / 2.0;
            self.q[j * self.n + i] += c / 2.0;
        }
    }

    /// Adds `w·(Σ c_k x_k)²` for variable terms `(var, c_k)`.
    fn add_square(&mut self, w: f64, terms: &[(usize, f64)]) {
        for (a, &(i, ci)) in terms.iter().enumerate() {
            self.add_linear(i, w * ci * ci);
            for &(j, cj) in &terms[a + 1..] {
                self.add_product(i, j, 2.0 * w * ci * cj);
            }
        }
    }

    fn into_qubo(self) -> Qubo {
        Qubo::generic(self.n, self.q, self.constant)
    }
}

/// LDPC decoding QUBO. Variables are the `N` codeword bits followed by the
/// ancillas of each check in order.
pub fn build_ldpc_qubo(h: &ParityCheckMatrix, llrs: &[f64], w_s: f64) -> Result<Qubo> {
    check_len(h.n_bits(), llrs.len())?;
    check_weight(llrs, w_s)?;
    let n_bits = h.n_bits();
    let mut next = n_bits;
    let mut checks = Vec::with_capacity(h.n_checks());
    for row in h.checks() {
        let m = row.len() / 2;
        let anc: Vec<usize> = (next..next + m).collect();
        next += m;
        checks.push((row.clone(), anc));
    }
    let n_vars = next;
    let mut poly = Poly::new(n_vars);
    for (bits, anc) in &checks {
        let terms: Vec<(usize, f64)> = bits
            .iter()
            .map(|&b| (b, 1.0))
            .chain(anc.iter().map(|&a| (a, -2.0)))
            .collect();
        poly.add_square(w_s, &terms);
    }
    for (i, &l) in llrs.iter().enumerate() {
        poly.add_linear(i, l);
    }
    let mut roles = vec![VarRole::CodewordBit; n_bits];
    roles.resize(n_vars, VarRole::Ancilla);
    let codeword_map: Vec<usize> = (0..n_bits).collect();
    // Data bits sit at the systematic positions of the generator.
    let g = crate::codes::ldpc_generator_from_h(h)?;
    let data_map = g.info_positions().to_vec();
    Ok(poly
        .into_qubo()
        .with_metadata(roles, codeword_map, data_map, Structure::Ldpc { checks }))
}

/// Polar decoding QUBO following the encoding tree. Variables are the
/// non-frozen inputs in position order, then each XOR node's output and
/// ancilla in depth-first creation order. Frozen inputs are constant zero.
pub fn build_polar_qubo(cfg: &PolarCodeConfig, llrs: &[f64], w_s: f64) -> Result<Qubo> {
    check_len(cfg.n(), llrs.len())?;
    check_weight(llrs, w_s)?;
    let n = cfg.n();
    let mut roles = Vec::new();
    let mut inputs = Vec::with_capacity(n);
    for pos in 0..n {
        if cfg.is_frozen(pos) {
            inputs.push(None);
        } else {
            inputs.push(Some(roles.len()));
            roles.push(VarRole::InputBit);
        }
    }
    let mut gadgets = Vec::new();
    let codeword = build_tree(&inputs, &mut roles, &mut gadgets);

    let n_vars = roles.len();
    let mut codeword_map = Vec::with_capacity(n);
    for (i, node) in codeword.iter().enumerate() {
        let v = node.ok_or_else(|| {
            Error::InvalidCode(format!("codeword bit {i} is a frozen constant"))
        })?;
        if roles[v] == VarRole::Intermediate {
            roles[v] = VarRole::CodewordBit;
        }
        codeword_map.push(v);
    }

    let mut poly = Poly::new(n_vars);
    for g in &gadgets {
        let mut terms: Vec<(usize, f64)> = Vec::with_capacity(4);
        terms.extend(g.left.map(|v| (v, 1.0)));
        terms.extend(g.right.map(|v| (v, 1.0)));
        terms.push((g.output, 1.0));
        terms.push((g.ancilla, -2.0));
        poly.add_square(w_s, &terms);
    }
    for (i, &l) in llrs.iter().enumerate() {
        poly.add_linear(codeword_map[i], l);
    }
    let data_map = cfg
        .info_positions()
        .iter()
        .map(|&p| inputs[p].expect("info position is not frozen"))
        .collect();
    Ok(poly.into_qubo().with_metadata(
        roles,
        codeword_map,
        data_map,
        Structure::Polar { inputs, gadgets },
    ))
}

fn build_tree(
    e: &[Option<usize>],
    roles: &mut Vec<VarRole>,
    gadgets: &mut Vec<XorGadget>,
) -> Vec<Option<usize>> {
    if e.len() == 1 {
        return e.to_vec();
    }
    let half = e.len() / 2;
    let left = build_tree(&e[..half], roles, gadgets);
    let right = build_tree(&e[half..], roles, gadgets);
    let mut out = Vec::with_capacity(e.len());
    for (l, r) in left.iter().zip(&right) {
        let output = roles.len();
        roles.push(VarRole::Intermediate);
        let ancilla = roles.len();
        roles.push(VarRole::Ancilla);
        gadgets.push(XorGadget {
            left: *l,
            right: *r,
            output,
            ancilla,
        });
        out.push(Some(output));
    }
    out.extend(right);
    out
}

impl Qubo {
    /// Fills a full assignment from LDPC codeword bits: each check gets
    /// `⌊(Σb)/2⌋` ancillas set, leading ancillas first.
    pub fn assignment_from_codeword(&self, x: &[u8]) -> Result<BitVector> {
        let Structure::Ldpc { checks } = &self.structure else {
            return Err(Error::UnsupportedFamily("codeword completion needs an LDPC QUBO".into()));
        };
        check_len(self.codeword_map.len(), x.len())?;
        let mut out = vec![0u8; self.n];
        for (i, &v) in self.codeword_map.iter().enumerate() {
            out[v] = x[i];
        }
        for (bits, anc) in checks {
            let ones: usize = bits.iter().map(|&b| x[b] as usize).sum();
            for &a in anc.iter().take(ones / 2) {
                out[a] = 1;
            }
        }
        BitVector::new(out)
    }

    /// Fills a full assignment from the polar encoder input vector `e`
    /// (frozen positions are ignored).
    pub fn assignment_from_input(&self, e: &[u8]) -> Result<BitVector> {
        let Structure::Polar { inputs, gadgets } = &self.structure else {
            return Err(Error::UnsupportedFamily("input completion needs a polar QUBO".into()));
        };
        check_len(inputs.len(), e.len())?;
        let mut out = vec![0u8; self.n];
        for (pos, v) in inputs.iter().enumerate() {
            if let Some(v) = v {
                out[*v] = e[pos];
            }
        }
        for g in gadgets {
            let l = g.left.map_or(0, |v| out[v]);
            let r = g.right.map_or(0, |v| out[v]);
            out[g.output] = l ^ r;
            out[g.ancilla] = (l + r + (l ^ r)) / 2;
        }
        BitVector::new(out)
    }
}
