//! Polar codes: Kronecker generator, Bhattacharyya frozen-set selection and
//! tree encoding.

use crate::bits::BitVector;
use crate::error::{check_len, Error, Result};
use crate::gf2::BinaryMatrix;

/// Largest supported tree depth (block length 1024).
pub const MAX_POLAR_DEPTH: u32 = 10;

/// `G_2^{⊗d}` with `G_2 = [[1,0],[1,1]]`.
pub fn polar_generator(depth: u32) -> Result<BinaryMatrix> {
    if depth == 0 {
        return Err(Error::InvalidCode("polar tree depth must be >= 1".into()));
    }
    if depth > MAX_POLAR_DEPTH {
        return Err(Error::SizeLimit {
            what: "polar tree depth",
            limit: MAX_POLAR_DEPTH as usize,
            actual: depth as usize,
        });
    }
    let g2 = BinaryMatrix::from_rows(&[vec![1, 0], vec![1, 1]]).expect("static matrix");
    let mut g = g2.clone();
    for _ in 1..depth {
        g = g.kron(&g2);
    }
    Ok(g)
}

/// Bhattacharyya parameters of the synthetic channels for block length `n`,
/// using `z_{2i} = 2z_i − z_i²`, `z_{2i+1} = z_i²` from a root value of 0.5.
pub fn bhattacharyya(n: usize) -> Result<Vec<f64>> {
    if !n.is_power_of_two() || n < 2 {
        return Err(Error::InvalidCode(format!(
            "block length {n} is not a power of two >= 2"
        )));
    }
    let mut z = vec![0.5];
    while z.len() < n {
        z = z
            .iter()
            .flat_map(|&zi| [2.0 * zi - zi * zi, zi * zi])
            .collect();
    }
    Ok(z)
}

/// Input positions sorted from least to most reliable (largest Bhattacharyya
/// parameter first, lower index first on ties).
pub fn polar_reliability_order(n: usize) -> Result<Vec<usize>> {
    let z = bhattacharyya(n)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| z[b].total_cmp(&z[a]).then(a.cmp(&b)));
    Ok(order)
}

/// A polar code of block length `N = 2^d` carrying `K` data bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarCodeConfig {
    block_length: usize,
    data_bits: usize,
    reliability_order: Vec<usize>,
    frozen: Vec<bool>,
    info_positions: Vec<usize>,
}

impl PolarCodeConfig {
    pub fn new(block_length: usize, data_bits: usize) -> Result<Self> {
        let order = polar_reliability_order(block_length)?;
        if block_length > 1 << MAX_POLAR_DEPTH {
            return Err(Error::SizeLimit {
                what: "polar block length",
                limit: 1 << MAX_POLAR_DEPTH,
                actual: block_length,
            });
        }
        if data_bits == 0 || data_bits > block_length {
            return Err(Error::InvalidCode(format!(
                "data bits {data_bits} must be in 1..={block_length}"
            )));
        }
        let mut frozen = vec![false; block_length];
        for &p in &order[..block_length - data_bits] {
            frozen[p] = true;
        }
        let info_positions = (0..block_length).filter(|&i| !frozen[i]).collect();
        Ok(Self {
            block_length,
            data_bits,
            reliability_order: order,
            frozen,
            info_positions,
        })
    }

    /// The 12-variable (N=4, K=2) benchmark code.
    pub fn benchmark() -> Self {
        Self::new(4, 2).expect("valid")
    }

    /// The 4-variable (N=2, K=1) code used for density-matrix runs.
    pub fn tiny() -> Self {
        Self::new(2, 1).expect("valid")
    }

    pub fn n(&self) -> usize {
        self.block_length
    }

    pub fn k(&self) -> usize {
        self.data_bits
    }

    pub fn depth(&self) -> u32 {
        self.block_length.trailing_zeros()
    }

    pub fn reliability_order(&self) -> &[usize] {
        &self.reliability_order
    }

    pub fn is_frozen(&self, position: usize) -> bool {
        self.frozen[position]
    }

    pub fn frozen_positions(&self) -> Vec<usize> {
        (0..self.block_length).filter(|&i| self.frozen[i]).collect()
    }

    /// Non-frozen input positions in increasing order; data bit `i` goes to
    /// `info_positions()[i]`.
    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    /// Builds the input vector `e` from the data word.
    pub fn input_vector(&self, u: &BitVector) -> Result<Vec<u8>> {
        check_len(self.data_bits, u.len())?;
        let mut e = vec![0u8; self.block_length];
        for (&pos, bit) in self.info_positions.iter().zip(u.iter()) {
            e[pos] = bit;
        }
        Ok(e)
    }

    pub fn encode(&self, u: &BitVector) -> Result<BitVector> {
        polar_encode(self, u)
    }

    /// Reads the data word out of an input vector `e`.
    pub fn extract_data(&self, e: &[u8]) -> Result<BitVector> {
        check_len(self.block_length, e.len())?;
        BitVector::new(self.info_positions.iter().map(|&p| e[p]).collect())
    }
}

/// Bottom-up tree evaluation: every node maps `[e_L | e_R]` to
/// `[e_L ⊕ e_R, e_R]`.
pub fn polar_transform(e: &[u8]) -> Vec<u8> {
    let n = e.len();
    if n == 1 {
        return e.to_vec();
    }
    let half = n / 2;
    let left = polar_transform(&e[..half]);
    let right = polar_transform(&e[half..]);
    left.iter()
        .zip(&right)
        .map(|(l, r)| l ^ r)
        .chain(right.iter().copied())
        .collect()
}

pub fn polar_encode(cfg: &PolarCodeConfig, u: &BitVector) -> Result<BitVector> {
    let e = cfg.input_vector(u)?;
    BitVector::new(polar_transform(&e))
}

/// Same map as [`polar_encode`] computed as `e·G_N`.
pub fn polar_encode_matrix(cfg: &PolarCodeConfig, u: &BitVector) -> Result<BitVector> {
    let e = cfg.input_vector(u)?;
    let g = polar_generator(cfg.depth())?;
    BitVector::new(g.left_mul_vec(&e)?)
}
