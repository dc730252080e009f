//! Vector sets, the Hurwitz-Radon function, and the explicit families of
//! sets whose pairwise sums stay on the 1-locus of a cubic form.
//!
//! A set A is Hurwitzian for a form a when a(x + x') = 1 for every pair
//! of distinct elements of A. The constructions here realize the maximum
//! cardinality for each residue of n mod 4.

use crate::cubic::CubicForm;
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeSet, HashMap};
use std::fmt;

/// Largest dimension for which the full space is materialized.
pub const MAX_FULL_SPACE_N: usize = 20;

/// A duplicate-free set of vectors of one dimension, kept sorted by
/// numeric value for deterministic iteration and output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VecSet {
    n: u8,
    elems: Vec<u64>,
}

impl VecSet {
    pub fn new<I>(n: usize, elems: I) -> Result<Self>
    where
        I: IntoIterator<Item = BitVec>,
    {
        let mut bits = Vec::new();
        for v in elems {
            if v.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: v.n(),
                });
            }
            bits.push(v.bits());
        }
        VecSet::from_bits(n, bits)
    }

    pub fn from_bits<I>(n: usize, bits: I) -> Result<Self>
    where
        I: IntoIterator<Item = u64>,
    {
        if n == 0 || n > 64 {
            return Err(Error::InvalidDimension(n));
        }
        let set: BTreeSet<u64> = bits.into_iter().collect();
        if let Some(&max) = set.iter().next_back() {
            // reuse the BitVec range check on the largest element
            BitVec::new(n, max)?;
        }
        Ok(VecSet {
            n: n as u8,
            elems: set.into_iter().collect(),
        })
    }

    pub fn singleton(v: &BitVec) -> Self {
        VecSet {
            n: v.n() as u8,
            elems: vec![v.bits()],
        }
    }

    /// All 2^n vectors.
    pub fn full_space(n: usize) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidDimension(n));
        }
        if n > MAX_FULL_SPACE_N {
            return Err(Error::BudgetExceeded(format!(
                "full space at n={n} exceeds the 2^{MAX_FULL_SPACE_N}-element cap"
            )));
        }
        Ok(VecSet {
            n: n as u8,
            elems: (0..(1u64 << n)).collect(),
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        v.n() == self.n() && self.elems.binary_search(&v.bits()).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = BitVec> + '_ {
        let n = self.n();
        self.elems
            .iter()
            .map(move |&b| BitVec::new(n, b).expect("stored bits are in range"))
    }

    pub(crate) fn bits(&self) -> &[u64] {
        &self.elems
    }

    /// Translate every element by v; pairwise sums are unchanged.
    pub fn translate(&self, v: &BitVec) -> Result<Self> {
        if v.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: v.n(),
            });
        }
        VecSet::from_bits(self.n(), self.elems.iter().map(|&b| b ^ v.bits()))
    }

    /// {a + b : a in self, b in other}.
    pub fn sumset(&self, other: &VecSet) -> Result<Self> {
        if other.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: other.n(),
            });
        }
        let mut sums = BTreeSet::new();
        for &a in &self.elems {
            for &b in &other.elems {
                sums.insert(a ^ b);
            }
        }
        Ok(VecSet {
            n: self.n,
            elems: sums.into_iter().collect(),
        })
    }

    /// Multiplicity of each nonzero value as a sum of an unordered pair
    /// of distinct elements.
    pub(crate) fn pair_sum_multiplicities(&self) -> HashMap<u64, u64> {
        let mut hist = HashMap::new();
        for (i, &a) in self.elems.iter().enumerate() {
            for &b in &self.elems[i + 1..] {
                *hist.entry(a ^ b).or_insert(0) += 1;
            }
        }
        hist
    }

    /// One binary string per line.
    pub fn to_lines(&self) -> String {
        self.iter().map(|v| v.to_binary_string()).join("\n")
    }

    /// Parse a set file: one binary-string vector per line, `#` starts a
    /// comment, blank lines are skipped. The dimension is taken from the
    /// first vector.
    pub fn parse_lines(text: &str) -> Result<Self> {
        let mut vecs: Vec<BitVec> = Vec::new();
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            vecs.push(BitVec::from_binary_string(line)?);
        }
        let n = match vecs.first() {
            Some(v) => v.n(),
            None => return Err(Error::EmptySet),
        };
        VecSet::new(n, vecs)
    }
}

impl fmt::Display for VecSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.iter().map(|v| v.to_binary_string()).join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct VecSetRepr {
    n: usize,
    elems: Vec<String>,
}

impl Serialize for VecSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        VecSetRepr {
            n: self.n(),
            elems: self.iter().map(|v| v.to_binary_string()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VecSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = VecSetRepr::deserialize(deserializer)?;
        let vecs: Vec<BitVec> = repr
            .elems
            .iter()
            .map(|s| BitVec::from_binary_string(s))
            .collect::<Result<_>>()
            .map_err(serde::de::Error::custom)?;
        VecSet::new(repr.n, vecs).map_err(serde::de::Error::custom)
    }
}

/// The Hurwitz-Radon function: write N = 2^k(2m+1); the value depends
/// only on k, stepping through 2k+1, 2k, 2k, 2k+2 as k mod 4 runs
/// through 0, 1, 2, 3.
pub fn rho(n: u64) -> u32 {
    assert!(n >= 1, "rho is defined on positive integers");
    let k = n.trailing_zeros();
    match k % 4 {
        0 => 2 * k + 1,
        1 | 2 => 2 * k,
        _ => 2 * k + 2,
    }
}

/// True iff alpha(x + x') = 1 for every pair of distinct elements of a.
pub fn is_hurwitzian(alpha: &CubicForm, a: &VecSet) -> Result<bool> {
    if alpha.n() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: alpha.n(),
            got: a.n(),
        });
    }
    let elems = a.bits();
    for (i, &x) in elems.iter().enumerate() {
        for &y in &elems[i + 1..] {
            if !alpha.eval_bits(x ^ y) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// {0, e_1, ..., e_n, e_1+e_2, ..., e_1+e_n}: 2n elements, Hurwitzian for
/// the counting form when n = 1 or 2 mod 4 (pairwise sums have weight
/// at most 3, and weight-3 sums only arise with n at least 3).
pub fn construct_mod12(n: usize) -> Result<VecSet> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    if n % 4 != 1 && n % 4 != 2 {
        return Err(Error::WrongResidue {
            n,
            got: n % 4,
            want: "1 or 2 (mod 4)",
        });
    }
    let e1 = BitVec::basis(n, 1)?.bits();
    let mut bits = vec![0u64];
    for i in 1..=n {
        bits.push(BitVec::basis(n, i)?.bits());
    }
    for i in 2..=n {
        bits.push(e1 | BitVec::basis(n, i)?.bits());
    }
    VecSet::from_bits(n, bits)
}

/// {0, w, e_1, ..., e_n, e_1+w, ..., e_n+w} with w the all-ones vector:
/// 2n+2 elements, Hurwitzian for the counting form when n = 3 mod 4
/// (pairwise sums have weight in {1, 2, n-2, n-1, n}, never 0 mod 4).
pub fn construct_mod3(n: usize) -> Result<VecSet> {
    if n % 4 != 3 {
        return Err(Error::WrongResidue {
            n,
            got: n % 4,
            want: "3 (mod 4)",
        });
    }
    let omega = BitVec::omega(n)?.bits();
    let mut bits = vec![0u64, omega];
    for i in 1..=n {
        let e = BitVec::basis(n, i)?.bits();
        bits.push(e);
        bits.push(e ^ omega);
    }
    VecSet::from_bits(n, bits)
}

/// For n = 0 mod 4: embed the (n-1)-dimensional construction with a zero
/// final coordinate, giving 2(n-1)+2 = 2n elements whose pairwise-sum
/// weights are unchanged.
pub fn construct_mod0_embedded(n: usize) -> Result<VecSet> {
    if n % 4 != 0 || n == 0 {
        return Err(Error::WrongResidue {
            n,
            got: n % 4,
            want: "0 (mod 4), n >= 4",
        });
    }
    let inner = construct_mod3(n - 1)?;
    VecSet::from_bits(n, inner.bits().iter().map(|&b| b << 1))
}

/// The largest known Hurwitzian set for the counting form at each n:
/// sizes 2n for n = 0, 1, 2 and 2n+2 for n = 3 (mod 4).
pub fn best_known(n: usize) -> Result<VecSet> {
    if n == 0 || n > 64 {
        return Err(Error::InvalidDimension(n));
    }
    match n % 4 {
        0 => construct_mod0_embedded(n),
        3 => construct_mod3(n),
        _ if n == 1 => VecSet::from_bits(1, [0u64, 1]),
        _ => construct_mod12(n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_values() {
        assert_eq!(rho(1), 1);
        assert_eq!(rho(2), 2);
        assert_eq!(rho(4), 4);
        assert_eq!(rho(8), 8);
        assert_eq!(rho(16), 9);
        assert_eq!(rho(32), 10);
        assert_eq!(rho(64), 12);
        assert_eq!(rho(128), 16);
        assert_eq!(rho(256), 17);
        assert_eq!(rho(48), 9);
        assert_eq!(rho(3), 1);
        assert_eq!(rho(6), 2);
    }

    #[test]
    fn hurwitzian_checks() {
        let a3 = CubicForm::alpha_o(3).unwrap();
        assert!(is_hurwitzian(&a3, &VecSet::full_space(3).unwrap()).unwrap());

        let a4 = CubicForm::alpha_o(4).unwrap();
        let bad = VecSet::from_bits(4, [0u64, 0b1111]).unwrap();
        assert!(!is_hurwitzian(&a4, &bad).unwrap());

        let single = VecSet::singleton(&BitVec::omega(4).unwrap());
        assert!(is_hurwitzian(&a4, &single).unwrap());
    }

    #[test]
    fn construction_sizes_meet_the_bound() {
        for n in [2usize, 3, 5, 6, 7] {
            let set = best_known(n).unwrap();
            assert_eq!(set.len() as u32, rho(1 << n), "n={n}");
            let alpha = CubicForm::alpha_o(n).unwrap();
            assert!(is_hurwitzian(&alpha, &set).unwrap(), "n={n}");
        }
        for n in [1usize, 4, 8, 12] {
            let set = best_known(n).unwrap();
            assert_eq!(set.len(), 2 * n, "n={n}");
            let alpha = CubicForm::alpha_o(n).unwrap();
            assert!(is_hurwitzian(&alpha, &set).unwrap(), "n={n}");
        }
    }

    #[test]
    fn construction_details() {
        let c2 = construct_mod12(2).unwrap();
        assert_eq!(c2, VecSet::full_space(2).unwrap());

        let c5 = construct_mod12(5).unwrap();
        assert_eq!(c5.len(), 10);
        for x in c5.iter() {
            for y in c5.iter() {
                if x != y {
                    assert!(x.add(&y).unwrap().wt() <= 3);
                }
            }
        }

        let c3 = construct_mod3(3).unwrap();
        assert_eq!(c3, VecSet::full_space(3).unwrap());
        assert_eq!(construct_mod3(7).unwrap().len(), 16);
        assert_eq!(construct_mod3(11).unwrap().len(), 24);

        let c7 = construct_mod3(7).unwrap();
        for x in c7.iter() {
            for y in c7.iter() {
                if x != y {
                    let w = x.add(&y).unwrap().wt();
                    assert!([1, 2, 5, 6, 7].contains(&w), "weight {w}");
                    assert_ne!(w % 4, 0);
                }
            }
        }

        assert!(construct_mod12(3).is_err());
        assert!(construct_mod3(5).is_err());
        assert!(construct_mod0_embedded(6).is_err());
    }

    #[test]
    fn translation_preserves_hurwitzian() {
        let alpha = CubicForm::alpha_o(6).unwrap();
        let set = best_known(6).unwrap();
        for shift in [0b101010u64, 0b111111, 0b000001] {
            let v = BitVec::new(6, shift).unwrap();
            let moved = set.translate(&v).unwrap();
            assert!(is_hurwitzian(&alpha, &moved).unwrap());
        }
    }

    #[test]
    fn set_file_round_trip() {
        let set = best_known(5).unwrap();
        let text = set.to_lines();
        assert_eq!(VecSet::parse_lines(&text).unwrap(), set);

        let with_comments = "# header\n000  # zero\n\n011\n";
        let parsed = VecSet::parse_lines(with_comments).unwrap();
        assert_eq!(parsed, VecSet::from_bits(3, [0u64, 0b011]).unwrap());

        assert_eq!(VecSet::parse_lines("# nothing\n"), Err(Error::EmptySet));
    }

    #[test]
    fn sumset_and_histogram() {
        let a = VecSet::from_bits(2, [0u64, 0b10]).unwrap();
        let b = VecSet::from_bits(2, [0u64, 0b01]).unwrap();
        let s = a.sumset(&b).unwrap();
        assert_eq!(s, VecSet::full_space(2).unwrap());

        let full = VecSet::full_space(2).unwrap();
        let hist = full.pair_sum_multiplicities();
        assert_eq!(hist.len(), 3);
        assert!(hist.values().all(|&m| m == 2));
    }

    #[test]
    fn json_round_trip() {
        let set = best_known(7).unwrap();
        let js = serde_json::to_string(&set).unwrap();
        assert_eq!(serde_json::from_str::<VecSet>(&js).unwrap(), set);
    }

    #[test]
    fn duplicate_input_collapses() {
        let set = VecSet::from_bits(3, [1u64, 1, 2, 2, 2]).unwrap();
        assert_eq!(set.len(), 2);
    }
}
