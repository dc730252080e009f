//! The real twisted group algebra: basis elements e_x indexed by vectors,
//! products twisted by a sign (-1)^f(x,y), exact integer coefficients.
//!
//! The norm lemma has two faces. The combinatorial one, `lemma_condition`,
//! asks that every coincidence of pair-sums between the two support sets
//! lands on a 1 of the form. The analytic one, `norm_mult_check`, samples
//! integer elements and tests ||ab||^2 = ||a||^2 ||b||^2 exactly;
//! `find_norm_violation` additionally exhausts sign vectors so a failing
//! condition always yields a concrete counterexample at small sizes.

use crate::cubic::CubicForm;
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::sets::VecSet;
use crate::twist::TwistFn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;

/// Sparse element of the twisted group algebra with exact 64-bit integer
/// coefficients; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    n: u8,
    coeffs: BTreeMap<u64, i64>,
}

impl AlgebraElement {
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidDimension(n));
        }
        Ok(AlgebraElement {
            n: n as u8,
            coeffs: BTreeMap::new(),
        })
    }

    /// The basis element e_x with coefficient 1.
    pub fn basis(x: &BitVec) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(x.bits(), 1);
        AlgebraElement {
            n: x.n() as u8,
            coeffs,
        }
    }

    /// The unit e_0.
    pub fn one(n: usize) -> Result<Self> {
        let mut e = AlgebraElement::zero(n)?;
        e.coeffs.insert(0, 1);
        Ok(e)
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BitVec, i64)>,
    {
        let mut e = AlgebraElement::zero(n)?;
        for (x, c) in terms {
            if x.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: x.n(),
                });
            }
            e.add_to(x.bits(), c)?;
        }
        Ok(e)
    }

    fn add_to(&mut self, basis_bits: u64, c: i64) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        let slot = self.coeffs.entry(basis_bits).or_insert(0);
        *slot = slot
            .checked_add(c)
            .ok_or(Error::CoeffOverflow("coefficient addition"))?;
        if *slot == 0 {
            self.coeffs.remove(&basis_bits);
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, x: &BitVec) -> i64 {
        if x.n() != self.n() {
            return 0;
        }
        self.coeffs.get(&x.bits()).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (BitVec, i64)> + '_ {
        let n = self.n();
        self.coeffs
            .iter()
            .map(move |(&b, &c)| (BitVec::new(n, b).expect("stored bits are in range"), c))
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        if other.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: other.n(),
            });
        }
        let mut out = self.clone();
        for (&b, &c) in &other.coeffs {
            out.add_to(b, c)?;
        }
        Ok(out)
    }

    /// Sum of squared coefficients.
    pub fn norm_sq(&self) -> Result<u128> {
        let mut acc: u128 = 0;
        for &c in self.coeffs.values() {
            let sq = (c as i128 * c as i128) as u128;
            acc = acc
                .checked_add(sq)
                .ok_or(Error::CoeffOverflow("norm accumulation"))?;
        }
        Ok(acc)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    basis: String,
    coeff: i64,
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    n: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for AlgebraElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRepr {
            n: self.n(),
            terms: self
                .terms()
                .map(|(x, c)| TermRepr {
                    basis: x.to_binary_string(),
                    coeff: c,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AlgebraElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ElementRepr::deserialize(deserializer)?;
        let terms: Vec<(BitVec, i64)> = repr
            .terms
            .iter()
            .map(|t| Ok((BitVec::from_binary_string(&t.basis)?, t.coeff)))
            .collect::<Result<_>>()
            .map_err(serde::de::Error::custom)?;
        AlgebraElement::from_terms(repr.n, terms).map_err(serde::de::Error::custom)
    }
}

/// The sign on e_x e_y = (+-1) e_{x+y}: +1 when f(x,y) = 0, else -1.
pub fn basis_sign(f: &TwistFn, x: &BitVec, y: &BitVec) -> Result<i32> {
    if x.n() != f.n() || y.n() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            got: if x.n() != f.n() { x.n() } else { y.n() },
        });
    }
    Ok(if f.eval_bits(x.bits(), y.bits()) { -1 } else { 1 })
}

/// Bilinear product: the coefficient of e_z is the signed sum of
/// a_x b_y over x + y = z, accumulated in 128 bits and checked back
/// into 64.
pub fn product(f: &TwistFn, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
    if a.n() != f.n() || b.n() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            got: if a.n() != f.n() { a.n() } else { b.n() },
        });
    }
    let mut acc: BTreeMap<u64, i128> = BTreeMap::new();
    for (&x, &ca) in &a.coeffs {
        for (&y, &cb) in &b.coeffs {
            let sign: i128 = if f.eval_bits(x, y) { -1 } else { 1 };
            let term = sign * ca as i128 * cb as i128;
            let slot = acc.entry(x ^ y).or_insert(0);
            *slot = slot
                .checked_add(term)
                .ok_or(Error::CoeffOverflow("product accumulation"))?;
        }
    }
    let mut coeffs = BTreeMap::new();
    for (z, c) in acc {
        if c != 0 {
            let c64 =
                i64::try_from(c).map_err(|_| Error::CoeffOverflow("product coefficient"))?;
            coeffs.insert(z, c64);
        }
    }
    Ok(AlgebraElement { n: a.n, coeffs })
}

/// Combinatorial side of the norm lemma: every nonzero value that occurs
/// as a pair-sum in both a and b must satisfy alpha = 1.
pub fn lemma_condition(alpha: &CubicForm, a: &VecSet, b: &VecSet) -> Result<bool> {
    if alpha.n() != a.n() || alpha.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: alpha.n(),
            got: if a.n() != alpha.n() { a.n() } else { b.n() },
        });
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let hist_a = a.pair_sum_multiplicities();
    if hist_a.is_empty() {
        return Ok(true);
    }
    let hist_b = b.pair_sum_multiplicities();
    for s in hist_a.keys() {
        if hist_b.contains_key(s) && !alpha.eval_bits(*s) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn random_element(
    n: usize,
    support: &VecSet,
    rng: &mut ChaCha8Rng,
) -> AlgebraElement {
    let mut coeffs = BTreeMap::new();
    for &b in support.bits() {
        let c: i64 = rng.gen_range(-9..=9);
        if c != 0 {
            coeffs.insert(b, c);
        }
    }
    AlgebraElement { n: n as u8, coeffs }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Sampled side of the norm lemma: draw integer elements supported on a
/// and b and test ||ab||^2 = ||a||^2 ||b||^2 exactly; true iff every
/// trial agrees. Deterministic for a fixed seed regardless of threading.
pub fn norm_mult_check(
    f: &TwistFn,
    a: &VecSet,
    b: &VecSet,
    trials: u64,
    seed: u64,
) -> Result<bool> {
    if a.n() != f.n() || b.n() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            got: if a.n() != f.n() { a.n() } else { b.n() },
        });
    }
    let outcomes: Result<Vec<bool>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let ea = random_element(f.n(), a, &mut rng);
            let eb = random_element(f.n(), b, &mut rng);
            let prod = product(f, &ea, &eb)?;
            Ok(prod.norm_sq()? == ea.norm_sq()?.checked_mul(eb.norm_sq()?).ok_or(
                Error::CoeffOverflow("norm product"),
            )?)
        })
        .collect();
    Ok(outcomes?.into_iter().all(|ok| ok))
}

/// Cap on |a| + |b| for the exhaustive sign-vector sweep below.
pub const MAX_SIGN_SWEEP_SUPPORT: usize = 24;

/// Hunt for a concrete pair violating norm multiplicativity: first by
/// random sampling, then, when the combined support is small enough, by
/// exhausting all +-1 coefficient vectors. Because the defect is a
/// polynomial identity with coefficients in {0, +-2, +-4}, a violation
/// visible anywhere is visible on sign vectors, so the sweep is a
/// decision procedure at small sizes.
pub fn find_norm_violation(
    f: &TwistFn,
    a: &VecSet,
    b: &VecSet,
    trials: u64,
    seed: u64,
) -> Result<Option<(AlgebraElement, AlgebraElement)>> {
    if a.n() != f.n() || b.n() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            got: if a.n() != f.n() { a.n() } else { b.n() },
        });
    }
    let violates = |ea: &AlgebraElement, eb: &AlgebraElement| -> Result<bool> {
        let prod = product(f, ea, eb)?;
        Ok(prod.norm_sq()?
            != ea
                .norm_sq()?
                .checked_mul(eb.norm_sq()?)
                .ok_or(Error::CoeffOverflow("norm product"))?)
    };
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let ea = random_element(f.n(), a, &mut rng);
        let eb = random_element(f.n(), b, &mut rng);
        if violates(&ea, &eb)? {
            return Ok(Some((ea, eb)));
        }
    }
    if a.len() + b.len() <= MAX_SIGN_SWEEP_SUPPORT {
        let sign_element = |support: &VecSet, pattern: u64| {
            let coeffs: BTreeMap<u64, i64> = support
                .bits()
                .iter()
                .enumerate()
                .map(|(k, &bbits)| (bbits, if pattern >> k & 1 == 1 { -1 } else { 1 }))
                .collect();
            AlgebraElement {
                n: f.n() as u8,
                coeffs,
            }
        };
        for pa in 0..(1u64 << a.len()) {
            let ea = sign_element(a, pa);
            for pb in 0..(1u64 << b.len()) {
                let eb = sign_element(b, pb);
                if violates(&ea, &eb)? {
                    return Ok(Some((ea, eb)));
                }
            }
        }
    }
    Ok(None)
}
