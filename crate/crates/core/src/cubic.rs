//! Boolean cubic forms in algebraic normal form.
//!
//! A form is a set of monomials, each a strictly increasing index set of
//! size 1..=3. Over the two-element field x_i^2 = x_i, so repeated indices
//! collapse on input, and a monomial appearing twice cancels. Constant
//! terms are rejected: every form vanishes at 0.

use crate::error::{Error, Result};
use crate::gf2::BitVec;
use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeSet;
use std::fmt;

/// A cubic form on the binary n-space, stored as canonical monomial masks.
///
/// A mask holds the monomial's index set in the same bit layout as
/// [`BitVec`]: index i at bit position n - i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicForm {
    n: u8,
    monomials: BTreeSet<u64>,
}

pub(crate) fn mask_to_indices(mask: u64, n: usize) -> Vec<usize> {
    (1..=n).filter(|&i| (mask >> (n - i)) & 1 == 1).collect()
}

pub(crate) fn indices_to_mask(indices: &[usize], n: usize) -> Result<u64> {
    let mut mask = 0u64;
    for &i in indices {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        mask |= 1 << (n - i);
    }
    Ok(mask)
}

/// Render order: degree descending, then index-lexicographic ascending,
/// which for equal degree is numeric mask descending.
fn canonical_order(monomials: &BTreeSet<u64>) -> Vec<u64> {
    let mut v: Vec<u64> = monomials.iter().copied().collect();
    v.sort_by(|a, b| {
        b.count_ones()
            .cmp(&a.count_ones())
            .then_with(|| b.cmp(a))
    });
    v
}

impl CubicForm {
    /// The zero form.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidDimension(n));
        }
        Ok(CubicForm {
            n: n as u8,
            monomials: BTreeSet::new(),
        })
    }

    /// Form from index lists. Repeated indices inside one monomial collapse
    /// (x_i^2 = x_i); a monomial listed twice cancels.
    pub fn new<I, M>(n: usize, monomials: I) -> Result<Self>
    where
        I: IntoIterator<Item = M>,
        M: AsRef<[usize]>,
    {
        let mut form = CubicForm::empty(n)?;
        for m in monomials {
            let mask = indices_to_mask(m.as_ref(), n)?;
            let deg = mask.count_ones() as usize;
            if !(1..=3).contains(&deg) {
                return Err(Error::BadDegree(deg));
            }
            form.toggle(mask);
        }
        Ok(form)
    }

    /// The counting form: all triples, all pairs, all singletons. Its value
    /// depends only on the Hamming weight, vanishing exactly on weights
    /// divisible by 4.
    pub fn alpha_o(n: usize) -> Result<Self> {
        let mut form = CubicForm::empty(n)?;
        for deg in 1..=3usize.min(n) {
            for combo in (1..=n).combinations(deg) {
                form.toggle(indices_to_mask(&combo, n)?);
            }
        }
        Ok(form)
    }

    fn toggle(&mut self, mask: u64) {
        if !self.monomials.remove(&mask) {
            self.monomials.insert(mask);
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn monomial_count(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Largest monomial degree present; 0 for the zero form.
    pub fn degree(&self) -> usize {
        self.monomials
            .iter()
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Monomials as masks, in internal set order.
    pub(crate) fn masks(&self) -> impl Iterator<Item = u64> + '_ {
        self.monomials.iter().copied()
    }

    pub(crate) fn mask_set(&self) -> &BTreeSet<u64> {
        &self.monomials
    }

    /// Monomials as strictly increasing index lists, in render order.
    pub fn monomials(&self) -> Vec<Vec<usize>> {
        canonical_order(&self.monomials)
            .into_iter()
            .map(|m| mask_to_indices(m, self.n()))
            .collect()
    }

    /// Evaluate at a point: XOR over monomials of the AND of indexed bits.
    pub fn eval(&self, x: &BitVec) -> Result<bool> {
        if x.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: x.n(),
            });
        }
        Ok(self.eval_bits(x.bits()))
    }

    #[inline]
    pub(crate) fn eval_bits(&self, bits: u64) -> bool {
        let mut acc = false;
        for &m in &self.monomials {
            acc ^= bits & m == m;
        }
        acc
    }

    /// Parse `"x1x2x3+x1x2+x1"`. `"0"` or the empty string is the zero form.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() || compact == "0" {
            return CubicForm::empty(n);
        }
        let mut lists: Vec<Vec<usize>> = Vec::new();
        for part in compact.split('+') {
            lists.push(parse_factor_indices(part, 'x')?);
        }
        CubicForm::new(n, lists)
    }

    /// Textual form in render order; the zero form renders as `"0"`.
    pub fn to_text(&self) -> String {
        if self.monomials.is_empty() {
            return "0".to_string();
        }
        canonical_order(&self.monomials)
            .iter()
            .map(|&m| {
                mask_to_indices(m, self.n())
                    .iter()
                    .map(|i| format!("x{i}"))
                    .collect::<String>()
            })
            .join("+")
    }
}

/// Split `"x1x2x3"`-style factor strings into indices; `var` is the
/// expected variable letter.
pub(crate) fn parse_factor_indices(part: &str, var: char) -> Result<Vec<usize>> {
    if part.is_empty() {
        return Err(Error::Parse("empty monomial".into()));
    }
    let mut indices = Vec::new();
    let mut chars = part.chars().peekable();
    while let Some(c) = chars.next() {
        if c != var {
            return Err(Error::Parse(format!(
                "expected '{var}' in monomial '{part}', found '{c}'"
            )));
        }
        let mut digits = String::new();
        while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
            digits.push(*d);
            chars.next();
        }
        if digits.is_empty() {
            return Err(Error::Parse(format!("missing index after '{var}' in '{part}'")));
        }
        indices.push(
            digits
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad index in '{part}': {e}")))?,
        );
    }
    Ok(indices)
}

impl fmt::Display for CubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Serialize, Deserialize)]
struct CubicFormRepr {
    n: usize,
    monomials: Vec<Vec<usize>>,
}

impl Serialize for CubicForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CubicFormRepr {
            n: self.n(),
            monomials: self.monomials(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CubicForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = CubicFormRepr::deserialize(deserializer)?;
        CubicForm::new(repr.n, repr.monomials).map_err(serde::de::Error::custom)
    }
}

/// Closed form of the counting function: 0 iff wt(x) is divisible by 4.
pub fn alpha_o_closed(x: &BitVec) -> bool {
    x.wt() % 4 != 0
}
