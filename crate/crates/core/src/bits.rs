//! Binary vectors.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};

/// A non-empty ordered sequence of bits, each stored as `0` or `1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector(Vec<u8>);

impl BitVector {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidBits("bit vector must be non-empty".into()));
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidBits(format!("bit value {b} is not 0 or 1")));
        }
        Ok(Self(bits))
    }

    /// Builds from an iterator of booleans. Panics on an empty iterator.
    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let v: Vec<u8> = bits.into_iter().map(u8::from).collect();
        assert!(!v.is_empty(), "bit vector must be non-empty");
        Self(v)
    }

    pub fn zeros(len: usize) -> Self {
        assert!(len > 0, "bit vector must be non-empty");
        Self(vec![0; len])
    }

    /// Bits of `value` with bit 0 of the vector as the most significant bit.
    pub fn from_index_msb(value: u64, len: usize) -> Self {
        assert!(len > 0 && len <= 64);
        Self((0..len).map(|i| ((value >> (len - 1 - i)) & 1) as u8).collect())
    }

    /// Bits of `value` with bit 0 of the vector as the least significant bit.
    pub fn from_index_lsb(value: u64, len: usize) -> Self {
        assert!(len > 0 && len <= 64);
        Self((0..len).map(|i| ((value >> i) & 1) as u8).collect())
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidBits(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().copied()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    pub fn hamming_distance(&self, other: &BitVector) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

impl Index<usize> for BitVector {
    type Output = u8;

    fn index(&self, i: usize) -> &u8 {
        &self.0[i]
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}
