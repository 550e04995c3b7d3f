//! LDPC codes: parity-check matrices, systematic generator construction and
//! encoding.

use std::fmt::Write as _;

use crate::bits::BitVector;
use crate::error::{check_len, Error, Result};
use crate::gf2::BinaryMatrix;

/// Sparse parity-check matrix stored as the column indices of the ones in
/// each row. Every check touches at least two bits and there are fewer checks
/// than bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    n_bits: usize,
    checks: Vec<Vec<usize>>,
}

impl ParityCheckMatrix {
    pub fn new(n_bits: usize, checks: Vec<Vec<usize>>) -> Result<Self> {
        if checks.len() >= n_bits {
            return Err(Error::InvalidCode(format!(
                "{} checks for {} bits leaves no data bits",
                checks.len(),
                n_bits
            )));
        }
        let mut normalized = Vec::with_capacity(checks.len());
        for (r, mut row) in checks.into_iter().enumerate() {
            row.sort_unstable();
            row.dedup();
            if row.len() < 2 {
                return Err(Error::InvalidCode(format!("check {r} has degree < 2")));
            }
            if let Some(&c) = row.iter().find(|&&c| c >= n_bits) {
                return Err(Error::InvalidCode(format!(
                    "check {r} references bit {c} >= {n_bits}"
                )));
            }
            normalized.push(row);
        }
        Ok(Self {
            n_bits,
            checks: normalized,
        })
    }

    pub fn from_dense(m: &BinaryMatrix) -> Result<Self> {
        let checks = (0..m.rows())
            .map(|r| (0..m.cols()).filter(|&c| m.get(r, c) == 1).collect())
            .collect();
        Self::new(m.cols(), checks)
    }

    /// Parses the plain-text layout: a header line `M N` followed by `M`
    /// lines listing the column indices of the ones in each row. Blank lines
    /// and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::EmptyInput)?;
        let dims = parse_usizes(hline, header)?;
        if dims.len() != 2 {
            return Err(Error::Parse {
                line: hline,
                message: "header must be `M N`".into(),
            });
        }
        let (m, n) = (dims[0], dims[1]);
        let mut checks = Vec::with_capacity(m);
        for _ in 0..m {
            let (ln, l) = lines.next().ok_or(Error::Parse {
                line: hline,
                message: format!("expected {m} check rows"),
            })?;
            checks.push(parse_usizes(ln, l)?);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse {
                line: ln,
                message: "trailing content after check rows".into(),
            });
        }
        Self::new(n, checks)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n_checks(), self.n_bits);
        for row in &self.checks {
            let cols: Vec<String> = row.iter().map(usize::to_string).collect();
            let _ = writeln!(s, "{}", cols.join(" "));
        }
        s
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn n_checks(&self) -> usize {
        self.checks.len()
    }

    pub fn checks(&self) -> &[Vec<usize>] {
        &self.checks
    }

    pub fn to_dense(&self) -> BinaryMatrix {
        let mut m = BinaryMatrix::zeros(self.checks.len(), self.n_bits);
        for (r, row) in self.checks.iter().enumerate() {
            for &c in row {
                m.set(r, c, 1);
            }
        }
        m
    }

    /// Column view: the checks each bit participates in.
    pub fn bit_neighbors(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.n_bits];
        for (r, row) in self.checks.iter().enumerate() {
            for &c in row {
                cols[c].push(r);
            }
        }
        cols
    }

    pub fn syndrome(&self, x: &[u8]) -> Result<Vec<u8>> {
        check_len(self.n_bits, x.len())?;
        Ok(self
            .checks
            .iter()
            .map(|row| row.iter().fold(0u8, |acc, &c| acc ^ x[c]))
            .collect())
    }

    pub fn is_codeword(&self, x: &[u8]) -> bool {
        self.syndrome(x)
            .map(|s| s.iter().all(|&b| b == 0))
            .unwrap_or(false)
    }

    /// True when the Tanner graph has no cycles (it is a forest).
    pub fn is_cycle_free(&self) -> bool {
        // A forest has |E| = |V| - #components.
        let n_nodes = self.n_bits + self.checks.len();
        let mut parent: Vec<usize> = (0..n_nodes).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (r, row) in self.checks.iter().enumerate() {
            for &c in row {
                let a = find(&mut parent, c);
                let b = find(&mut parent, self.n_bits + r);
                if a == b {
                    return false;
                }
                parent[a] = b;
            }
        }
        true
    }
}

fn parse_usizes(line: usize, s: &str) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<usize>().map_err(|e| Error::Parse {
                line,
                message: format!("{t:?}: {e}"),
            })
        })
        .collect()
}

/// Systematic generator matrix `G` (K × N) with `H·Gᵀ = 0`.
///
/// `permutation[j]` is the original column placed at position `j` of the
/// permuted form `[I_K | Aᵀ]`; the data bits therefore appear in the codeword
/// at `permutation[0..K]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    matrix: BinaryMatrix,
    permutation: Vec<usize>,
}

impl GeneratorMatrix {
    pub fn matrix(&self) -> &BinaryMatrix {
        &self.matrix
    }

    pub fn k(&self) -> usize {
        self.matrix.rows()
    }

    pub fn n(&self) -> usize {
        self.matrix.cols()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Codeword positions carrying the data bits, in data-bit order.
    pub fn info_positions(&self) -> &[usize] {
        &self.permutation[..self.k()]
    }
}

/// Builds a systematic generator from `H`.
///
/// `H` is row reduced (lowest-index pivots); the pivot columns are moved to
/// the right to obtain `[A | I_{N-K}]` and `G = [I_K | Aᵀ]` is un-permuted
/// back to the original column order.
pub fn ldpc_generator_from_h(h: &ParityCheckMatrix) -> Result<GeneratorMatrix> {
    let (reduced, pivots) = h.to_dense().rref();
    let m = h.n_checks();
    if pivots.len() < m {
        return Err(Error::RankDeficient {
            rank: pivots.len(),
            rows: m,
        });
    }
    let n = h.n_bits();
    let k = n - m;
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let permutation: Vec<usize> = free.iter().chain(pivots.iter()).copied().collect();

    let mut g = BinaryMatrix::zeros(k, n);
    for (i, &data_col) in free.iter().enumerate() {
        g.set(i, data_col, 1);
        // Row r of the reduced H reads x[pivot_r] = Σ_free A[r][i] x[free_i].
        for (r, &pcol) in pivots.iter().enumerate() {
            g.set(i, pcol, reduced.get(r, data_col));
        }
    }
    Ok(GeneratorMatrix {
        matrix: g,
        permutation,
    })
}

/// `x = u·G` over GF(2).
pub fn ldpc_encode(g: &GeneratorMatrix, u: &BitVector) -> Result<BitVector> {
    let x = g.matrix.left_mul_vec(u.as_slice())?;
    BitVector::new(x)
}

/// An LDPC code with its parity-check and generator matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LdpcCode {
    h: ParityCheckMatrix,
    g: GeneratorMatrix,
}

impl LdpcCode {
    pub fn new(h: ParityCheckMatrix) -> Result<Self> {
        let g = ldpc_generator_from_h(&h)?;
        Ok(Self { h, g })
    }

    /// The fixed (N=6, K=2) benchmark code. Its decoding QUBO has 13
    /// variables: 6 codeword bits plus 1+1+2+3 check ancillas. Minimum
    /// distance is 4.
    pub fn benchmark() -> Self {
        let h = ParityCheckMatrix::new(
            6,
            vec![
                vec![4, 5],
                vec![2, 3, 5],
                vec![1, 3, 4, 5],
                vec![0, 1, 2, 3, 4, 5],
            ],
        )
        .expect("benchmark H is valid");
        Self::new(h).expect("benchmark H has full rank")
    }

    /// Repetition code of length `n` with chain checks `x_i = x_{i+1}`.
    pub fn repetition(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidCode("repetition length must be >= 2".into()));
        }
        let checks = (0..n - 1).map(|i| vec![i, i + 1]).collect();
        Self::new(ParityCheckMatrix::new(n, checks)?)
    }

    pub fn h(&self) -> &ParityCheckMatrix {
        &self.h
    }

    pub fn g(&self) -> &GeneratorMatrix {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.h.n_bits()
    }

    pub fn k(&self) -> usize {
        self.g.k()
    }

    pub fn encode(&self, u: &BitVector) -> Result<BitVector> {
        ldpc_encode(&self.g, u)
    }

    /// Reads the data word out of a codeword (systematic positions).
    pub fn extract_data(&self, x: &[u8]) -> Result<BitVector> {
        check_len(self.n(), x.len())?;
        BitVector::new(self.g.info_positions().iter().map(|&p| x[p]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_parity_bit() {
        let h = ParityCheckMatrix::new(2, vec![vec![0, 1]]).unwrap();
        let g = ldpc_generator_from_h(&h).unwrap();
        assert_eq!(g.matrix().to_rows(), vec![vec![1, 1]]);
    }

    #[test]
    fn three_repetition() {
        let h = ParityCheckMatrix::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let g = ldpc_generator_from_h(&h).unwrap();
        assert_eq!(g.matrix().to_rows(), vec![vec![1, 1, 1]]);
        let x = ldpc_encode(&g, &BitVector::new(vec![1]).unwrap()).unwrap();
        assert_eq!(x.as_slice(), &[1, 1, 1]);
    }

    #[test]
    fn rank_deficient_is_rejected() {
        let h =
            ParityCheckMatrix::new(4, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert!(matches!(
            ldpc_generator_from_h(&h),
            Err(Error::RankDeficient { rank: 2, rows: 3 })
        ));
    }

    #[test]
    fn invariants_enforced() {
        assert!(ParityCheckMatrix::new(3, vec![vec![0]]).is_err());
        assert!(ParityCheckMatrix::new(2, vec![vec![0, 1], vec![0, 1]]).is_err());
        assert!(ParityCheckMatrix::new(3, vec![vec![0, 3]]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let code = LdpcCode::benchmark();
        let text = code.h().to_text();
        assert_eq!(ParityCheckMatrix::parse(&text).unwrap(), *code.h());
        assert!(ParityCheckMatrix::parse("2 4\n0 1\n").is_err());
        assert!(ParityCheckMatrix::parse("1 3\n0 x\n").is_err());
    }

    #[test]
    fn benchmark_code_shape() {
        let code = LdpcCode::benchmark();
        assert_eq!((code.n(), code.k()), (6, 2));
        assert!(code.g().matrix().mul(&code.h().to_dense().transpose()).unwrap().is_zero());
        for v in 0..4u64 {
            let u = BitVector::from_index_msb(v, 2);
            let x = code.encode(&u).unwrap();
            assert!(code.h().is_codeword(x.as_slice()));
            assert_eq!(code.extract_data(x.as_slice()).unwrap(), u);
        }
    }

    #[test]
    fn cycle_detection() {
        assert!(LdpcCode::repetition(5).unwrap().h().is_cycle_free());
        assert!(!LdpcCode::benchmark().h().is_cycle_free());
    }
}
