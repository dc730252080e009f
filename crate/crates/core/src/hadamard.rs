//! Hadamard matrices and the Hurwitzian sets their rows generate.
//!
//! A matrix of order 4s with s odd yields 2m vectors in dimension m-1:
//! after sign-normalizing so the first column is all +1, drop that column
//! and read each row twice, once mapping -1 to 1 and once mapping +1
//! to 1. Orthogonality pins every pairwise sum to weight 2s, 2s-1, or
//! 4s-1, none of which is divisible by 4.

use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::sets::VecSet;
use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// Largest supported matrix order.
pub const MAX_HADAMARD_ORDER: usize = 2048;

/// A square matrix with entries +-1 satisfying H H^T = mI, stored as
/// packed sign rows (bit set = entry -1). The defining equation and the
/// order constraint (1, 2, or a multiple of 4) are checked exactly on
/// every construction path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HadamardMatrix {
    m: usize,
    rows: Vec<Vec<u64>>,
}

fn row_words(m: usize) -> usize {
    m.div_ceil(64)
}

impl HadamardMatrix {
    fn from_packed(m: usize, rows: Vec<Vec<u64>>) -> Result<Self> {
        let h = HadamardMatrix { m, rows };
        h.validate()?;
        Ok(h)
    }

    fn validate(&self) -> Result<()> {
        let m = self.m;
        if m == 0 || m > MAX_HADAMARD_ORDER {
            return Err(Error::Hadamard(format!(
                "order {m} outside 1..={MAX_HADAMARD_ORDER}"
            )));
        }
        if m > 2 && m % 4 != 0 {
            return Err(Error::Hadamard(format!(
                "order {m} is neither 1, 2, nor a multiple of 4"
            )));
        }
        if self.rows.len() != m {
            return Err(Error::Hadamard(format!(
                "expected {m} rows, got {}",
                self.rows.len()
            )));
        }
        // rows of +-1 entries are orthogonal iff they disagree in exactly
        // half the columns
        for i in 0..m {
            for j in (i + 1)..m {
                let mut diff = 0u32;
                for (wa, wb) in self.rows[i].iter().zip(&self.rows[j]) {
                    diff += (wa ^ wb).count_ones();
                }
                if diff as usize * 2 != m {
                    return Err(Error::Hadamard(format!(
                        "rows {i} and {j} are not orthogonal"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Entry in {+1, -1} at row i, column j.
    pub fn entry(&self, i: usize, j: usize) -> i32 {
        debug_assert!(i < self.m && j < self.m);
        if (self.rows[i][j / 64] >> (j % 64)) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.m
    }

    /// One '+'/'-' string per row.
    pub fn to_pm_lines(&self) -> String {
        (0..self.m)
            .map(|i| {
                (0..self.m)
                    .map(|j| if self.entry(i, j) == 1 { '+' } else { '-' })
                    .collect::<String>()
            })
            .join("\n")
    }

    /// Parse '+'/'-' rows, one per line; `#` starts a comment.
    pub fn parse_pm_lines(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut m = 0usize;
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if rows.is_empty() {
                m = line.len();
                if m == 0 || m > MAX_HADAMARD_ORDER {
                    return Err(Error::Hadamard(format!(
                        "order {m} outside 1..={MAX_HADAMARD_ORDER}"
                    )));
                }
            } else if line.len() != m {
                return Err(Error::Hadamard(format!(
                    "row length {} differs from order {m}",
                    line.len()
                )));
            }
            let mut row = vec![0u64; row_words(m)];
            for (j, c) in line.chars().enumerate() {
                match c {
                    '+' => {}
                    '-' => row[j / 64] |= 1 << (j % 64),
                    _ => {
                        return Err(Error::Hadamard(format!(
                            "unexpected character '{c}' in matrix row"
                        )))
                    }
                }
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Hadamard("no rows".into()));
        }
        HadamardMatrix::from_packed(m, rows)
    }
}

impl fmt::Display for HadamardMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pm_lines())
    }
}

#[derive(Serialize, Deserialize)]
struct HadamardRepr {
    m: usize,
    rows: Vec<String>,
}

impl Serialize for HadamardMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        HadamardRepr {
            m: self.m,
            rows: self.to_pm_lines().lines().map(str::to_owned).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HadamardMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = HadamardRepr::deserialize(deserializer)?;
        let h = HadamardMatrix::parse_pm_lines(&repr.rows.join("\n"))
            .map_err(serde::de::Error::custom)?;
        if h.order() != repr.m {
            return Err(serde::de::Error::custom(format!(
                "declared order {} does not match {} rows",
                repr.m,
                h.order()
            )));
        }
        Ok(h)
    }
}

/// Doubling construction: order 2^k, starting from [1] and iterating
/// [[H, H], [H, -H]].
pub fn hadamard_sylvester(k: u32) -> Result<HadamardMatrix> {
    let m = 1usize
        .checked_shl(k)
        .filter(|&m| m <= MAX_HADAMARD_ORDER)
        .ok_or_else(|| {
            Error::Hadamard(format!("order 2^{k} exceeds cap {MAX_HADAMARD_ORDER}"))
        })?;
    let mut rows: Vec<Vec<u64>> = vec![vec![0u64]];
    let mut size = 1usize;
    while size < m {
        let double = size * 2;
        let words = row_words(double);
        let mut next: Vec<Vec<u64>> = Vec::with_capacity(double);
        for flip in [false, true] {
            for row in &rows {
                let mut wide = vec![0u64; words];
                for (w, &bits) in row.iter().enumerate() {
                    wide[w] |= bits;
                }
                for j in 0..size {
                    let entry_neg = (row[j / 64] >> (j % 64)) & 1 == 1;
                    if entry_neg ^ flip {
                        let col = size + j;
                        wide[col / 64] |= 1 << (col % 64);
                    }
                }
                next.push(wide);
            }
        }
        rows = next;
        size = double;
    }
    HadamardMatrix::from_packed(m, rows)
}

fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    if q % 2 == 0 {
        return q == 2;
    }
    let mut d = 3u64;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

/// Quadratic character of the field with q elements: 0 at 0, +1 on
/// squares, -1 on non-squares.
fn legendre(a: u64, q: u64) -> i32 {
    let a = a % q;
    if a == 0 {
        0
    } else if pow_mod(a, (q - 1) / 2, q) == 1 {
        1
    } else {
        -1
    }
}

/// Order q+1 for a prime q = 3 mod 4: border a skew conference core
/// built from the quadratic character and add the identity.
pub fn hadamard_paley(q: u64) -> Result<HadamardMatrix> {
    if !is_prime(q) {
        return Err(Error::Hadamard(format!("{q} is not prime")));
    }
    if q % 4 != 3 {
        return Err(Error::Hadamard(format!("{q} is not 3 mod 4")));
    }
    let m = q as usize + 1;
    if m > MAX_HADAMARD_ORDER {
        return Err(Error::Hadamard(format!(
            "order {m} exceeds cap {MAX_HADAMARD_ORDER}"
        )));
    }
    let words = row_words(m);
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(m);
    // first row all +1
    rows.push(vec![0u64; words]);
    for i in 0..q {
        let mut row = vec![0u64; words];
        // first column -1 below the corner
        row[0] |= 1;
        for j in 0..q {
            let col = j as usize + 1;
            let sign = if i == j {
                1
            } else {
                legendre((q + i - j) % q, q)
            };
            if sign == -1 {
                row[col / 64] |= 1 << (col % 64);
            }
        }
        rows.push(row);
    }
    HadamardMatrix::from_packed(m, rows)
}

/// Read a Hurwitzian set out of a matrix of order m = 4s, s odd: 2m
/// vectors of dimension m-1. Rows are sign-normalized first, so any
/// representative of the equivalence class works.
pub fn hurwitzian_from_hadamard(h: &HadamardMatrix) -> Result<VecSet> {
    let m = h.order();
    if m % 4 != 0 {
        return Err(Error::Hadamard(format!(
            "order {m} is not a multiple of 4"
        )));
    }
    let s = m / 4;
    if s % 2 == 0 {
        return Err(Error::Hadamard(format!(
            "order {m} = 4*{s} needs odd s for the pairwise-sum weights to avoid multiples of 4"
        )));
    }
    let n = m - 1;
    if n > 64 {
        return Err(Error::InvalidDimension(n));
    }
    let mut bits = Vec::with_capacity(2 * m);
    for i in 0..m {
        let flip = h.entry(i, 0) == -1;
        let mut v = 0u64;
        for c in 1..m {
            let neg = (h.entry(i, c) == -1) != flip;
            if neg {
                v |= 1 << (n - c);
            }
        }
        bits.push(v);
        bits.push(v ^ BitVec::omega(n)?.bits());
    }
    let set = VecSet::from_bits(n, bits)?;
    debug_assert_eq!(set.len(), 2 * m);
    Ok(set)
}
