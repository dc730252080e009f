//! Vectors of the n-dimensional binary space, n <= 64.
//!
//! A vector is an n-bit word. Coordinate `i` (1-based) is stored at bit
//! position `n - i`, so the word equals the integer value of the row
//! notation string: `"110"` for n = 3 means x1 = 1, x2 = 1, x3 = 0.
//! Under this layout the numeric order of words coincides with the
//! lexicographic order of the rendered strings, which is what every
//! deterministic-output path in the crate sorts by.

use crate::error::{Error, Result};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// An element of the binary n-space. Addition is bitwise XOR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    bits: u64,
    n: u8,
}

/// All-ones mask for the low `n` positions.
#[inline]
pub(crate) fn dim_mask(n: usize) -> u64 {
    u64::MAX >> (64 - n)
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > 64 {
        return Err(Error::InvalidDimension(n));
    }
    Ok(())
}

impl BitVec {
    /// Vector from a raw word; rejects bits outside the low n positions.
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        check_dim(n)?;
        if bits & !dim_mask(n) != 0 {
            return Err(Error::Parse(format!(
                "word {bits:#x} has bits above position {n}"
            )));
        }
        Ok(BitVec { bits, n: n as u8 })
    }

    /// The zero vector.
    pub fn zero(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(BitVec { bits: 0, n: n as u8 })
    }

    /// The all-ones vector e_1 + ... + e_n.
    pub fn omega(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(BitVec {
            bits: dim_mask(n),
            n: n as u8,
        })
    }

    /// The i-th standard basis vector, 1 <= i <= n.
    pub fn basis(n: usize, i: usize) -> Result<Self> {
        check_dim(n)?;
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        Ok(BitVec {
            bits: 1 << (n - i),
            n: n as u8,
        })
    }

    /// Vector with exactly the given 1-based coordinates set.
    pub fn from_coords(n: usize, coords: &[usize]) -> Result<Self> {
        check_dim(n)?;
        let mut bits = 0u64;
        for &i in coords {
            if i == 0 || i > n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            bits |= 1 << (n - i);
        }
        Ok(BitVec { bits, n: n as u8 })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Hamming weight: the number of coordinates equal to 1.
    #[inline]
    pub fn wt(&self) -> u32 {
        self.bits.count_ones()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// Coordinate x_i, 1 <= i <= n.
    pub fn coord(&self, i: usize) -> Result<bool> {
        if i == 0 || i > self.n() {
            return Err(Error::IndexOutOfRange { index: i, n: self.n() });
        }
        Ok((self.bits >> (self.n() - i)) & 1 == 1)
    }

    /// Sum (XOR) of two vectors of the same dimension.
    pub fn add(&self, other: &BitVec) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: other.n(),
            });
        }
        Ok(BitVec {
            bits: self.bits ^ other.bits,
            n: self.n,
        })
    }

    /// Binary-string rendering, coordinate 1 leftmost.
    pub fn to_binary_string(&self) -> String {
        (1..=self.n())
            .map(|i| if (self.bits >> (self.n() - i)) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Parse a binary string; the string length fixes the dimension.
    pub fn from_binary_string(s: &str) -> Result<Self> {
        check_dim(s.len())?;
        let mut bits = 0u64;
        for (pos, c) in s.chars().enumerate() {
            bits <<= 1;
            match c {
                '1' => bits |= 1,
                '0' => {}
                other => {
                    return Err(Error::Parse(format!(
                        "bad character '{other}' at position {pos} in vector string"
                    )))
                }
            }
        }
        Ok(BitVec {
            bits,
            n: s.len() as u8,
        })
    }

    /// Hex rendering of the word whose binary expansion (width n) is the
    /// row-notation string.
    pub fn to_hex(&self) -> String {
        format!("{:0width$x}", self.bits, width = self.n().div_ceil(4))
    }

    pub fn from_hex(n: usize, s: &str) -> Result<Self> {
        let bits = u64::from_str_radix(s, 16)
            .map_err(|e| Error::Parse(format!("bad hex vector '{s}': {e}")))?;
        BitVec::new(n, bits)
    }
}

impl std::ops::BitXor for BitVec {
    type Output = BitVec;

    fn bitxor(self, rhs: BitVec) -> BitVec {
        assert_eq!(self.n, rhs.n, "XOR of vectors of different dimension");
        BitVec {
            bits: self.bits ^ rhs.bits,
            n: self.n,
        }
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_binary_string())
    }
}

impl Serialize for BitVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_binary_string())
    }
}

impl<'de> Deserialize<'de> for BitVec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        BitVec::from_binary_string(&s).map_err(D::Error::custom)
    }
}
