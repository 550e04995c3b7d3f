//! Dense binary matrices and GF(2) arithmetic.

use crate::error::{check_len, Error, Result};

/// Dense row-major binary matrix over GF(2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            check_len(cols, row.len())?;
            if row.iter().any(|&b| b > 1) {
                return Err(Error::InvalidBits("matrix entries must be 0 or 1".into()));
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v & 1;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) == 1 {
                    for c in 0..other.cols {
                        let v = out.get(r, c) ^ other.get(k, c);
                        out.set(r, c, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix, `v · M`.
    pub fn left_mul_vec(&self, v: &[u8]) -> Result<Vec<u8>> {
        check_len(self.rows, v.len())?;
        let mut out = vec![0u8; self.cols];
        for (r, &bit) in v.iter().enumerate() {
            if bit == 1 {
                for (o, &m) in out.iter_mut().zip(self.row(r)) {
                    *o ^= m;
                }
            }
        }
        Ok(out)
    }

    /// Matrix times column vector, `M · vᵀ`.
    pub fn mul_vec(&self, v: &[u8]) -> Result<Vec<u8>> {
        check_len(self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(0u8, |acc, (a, b)| acc ^ (a & b)))
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&b| b == 0)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &BinaryMatrix) -> BinaryMatrix {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                if self.get(r1, c1) == 0 {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        out.set(r1 * other.rows + r2, c1 * other.cols + c2, other.get(r2, c2));
                    }
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        for c in 0..self.cols {
            let v = self.get(dst, c) ^ self.get(src, c);
            self.set(dst, c, v);
        }
    }

    /// Reduced row echelon form. Pivot columns are searched left to right and
    /// the pivot row is the lowest-index candidate. Returns the reduced matrix
    /// and the pivot column of each non-zero row.
    pub fn rref(&self) -> (BinaryMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c) == 1) else {
                continue;
            };
            m.swap_rows(r, p);
            for i in 0..m.rows {
                if i != r && m.get(i, c) == 1 {
                    m.xor_row_into(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }
}
