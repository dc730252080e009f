//! Formal sum-of-squares identities and their exact verification.
//!
//! An identity here is a family of bilinear forms c_z = sum of signed
//! products a_x b_y, one bucket per output index z, built so that
//! sum_z c_z^2 = (sum_x a_x^2)(sum_y b_y^2) holds as a polynomial
//! identity in the a and b variables. `build_identity` produces the
//! family from a twisting function by routing each product a_x b_y to
//! the bucket z = x + y with sign (-1)^(f(x, y)); `verify_symbolic`
//! expands both sides exactly over the integers and reports whether
//! every monomial cancels.

use crate::cubic::CubicForm;
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::sets::{best_known, VecSet};
use crate::twist::{twist_from_cubic, TwistFn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeMap, HashMap};

/// One signed product a_x b_y inside a bucket: (sign, x, y) with sign
/// either +1 or -1.
pub type SignedTerm = (i8, u64, u64);

/// Default cap on the number of term pairs `verify_symbolic` will expand.
pub const DEFAULT_SYMBOLIC_BUDGET: u64 = 1 << 25;

/// Largest dimension `hurwitz_radon_identity` accepts; the full-space
/// identity doubles in size with every added dimension.
pub const MAX_FULL_IDENTITY_N: usize = 11;

/// A family of bilinear forms indexed by z. Every product a_x b_y over
/// the supports appears in exactly one bucket, with a definite sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    a: VecSet,
    b: VecSet,
    terms: BTreeMap<u64, Vec<SignedTerm>>,
}

impl Identity {
    pub fn a(&self) -> &VecSet {
        &self.a
    }

    pub fn b(&self) -> &VecSet {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    /// The shape [|A|, |B|, number of buckets].
    pub fn size(&self) -> [usize; 3] {
        [self.a.len(), self.b.len(), self.terms.len()]
    }

    pub fn term_count(&self) -> usize {
        self.terms.values().map(Vec::len).sum()
    }

    pub fn buckets(&self) -> impl Iterator<Item = (u64, &[SignedTerm])> {
        self.terms.iter().map(|(&z, v)| (z, v.as_slice()))
    }

    /// Validate bucket contents against the supports: indexes in range,
    /// signs in {-1, +1}, buckets sorted and nonempty, and every pair of
    /// A x B appearing exactly once.
    fn validate(a: VecSet, b: VecSet, terms: BTreeMap<u64, Vec<SignedTerm>>) -> Result<Identity> {
        let n = a.n();
        if b.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.n(),
            });
        }
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptySet);
        }
        let limit = crate::gf2::dim_mask(n);
        let mut seen: HashMap<(u64, u64), u64> = HashMap::new();
        for (&z, bucket) in &terms {
            if z > limit {
                return Err(Error::Parse(format!("bucket index {z} out of range")));
            }
            if bucket.is_empty() {
                return Err(Error::Parse(format!("bucket {z} is empty")));
            }
            for &(s, x, y) in bucket {
                if s != 1 && s != -1 {
                    return Err(Error::Parse(format!("sign {s} is not +1 or -1")));
                }
                if x > limit || y > limit {
                    return Err(Error::Parse(format!(
                        "term a{x}*b{y} out of range for dimension {n}"
                    )));
                }
                if seen.insert((x, y), z).is_some() {
                    return Err(Error::Parse(format!("product a{x}*b{y} appears twice")));
                }
            }
        }
        for x in a.bits() {
            for y in b.bits() {
                if !seen.contains_key(&(*x, *y)) {
                    return Err(Error::Parse(format!("product a{x}*b{y} is missing")));
                }
            }
        }
        if seen.len() != a.len() * b.len() {
            return Err(Error::Parse(
                "terms mention products outside the support sets".into(),
            ));
        }
        let mut terms = terms;
        for bucket in terms.values_mut() {
            bucket.sort_by_key(|&(_, x, y)| (x, y));
        }
        Ok(Identity { a, b, terms })
    }
}

/// Route every product a_x b_y with x in A and y in B to the bucket
/// z = x + y, signed by the twisting function.
pub fn build_identity(f: &TwistFn, a: &VecSet, b: &VecSet) -> Result<Identity> {
    let n = f.n();
    if a.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.n(),
        });
    }
    if b.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.n(),
        });
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut terms: BTreeMap<u64, Vec<SignedTerm>> = BTreeMap::new();
    for &x in a.bits() {
        for &y in b.bits() {
            let s = if f.eval_bits(x, y) { -1 } else { 1 };
            terms.entry(x ^ y).or_default().push((s, x, y));
        }
    }
    Ok(Identity {
        a: a.clone(),
        b: b.clone(),
        terms,
    })
}

/// The classical identity for dimension n: supports are the best known
/// Hurwitzian set for the counting form and the full space, signed by
/// the counting form's twist. The shape is [rho(2^n), 2^n, 2^n].
pub fn hurwitz_radon_identity(n: usize) -> Result<Identity> {
    if n == 0 {
        return Err(Error::InvalidDimension(n));
    }
    if n > MAX_FULL_IDENTITY_N {
        return Err(Error::BudgetExceeded(format!(
            "full-space identity at dimension {n} exceeds the default limit of {MAX_FULL_IDENTITY_N}"
        )));
    }
    let alpha = CubicForm::alpha_o(n)?;
    let f = twist_from_cubic(&alpha);
    let a = best_known(n)?;
    let b = VecSet::full_space(n)?;
    build_identity(&f, &a, &b)
}

/// Expand sum_z c_z^2 minus the product of the two quadratic norms as an
/// exact integer polynomial and test whether it is identically zero.
/// Errors out rather than guessing when the expansion would exceed the
/// default term-pair budget.
pub fn verify_symbolic(id: &Identity) -> Result<bool> {
    verify_symbolic_with_budget(id, DEFAULT_SYMBOLIC_BUDGET)
}

pub fn verify_symbolic_with_budget(id: &Identity, budget: u64) -> Result<bool> {
    let work: u64 = id
        .terms
        .values()
        .map(|t| {
            let k = t.len() as u64;
            k * (k + 1) / 2
        })
        .sum();
    if work > budget {
        return Err(Error::BudgetExceeded(format!(
            "symbolic expansion needs {work} term pairs but the budget allows {budget}"
        )));
    }
    let buckets: Vec<&Vec<SignedTerm>> = id.terms.values().collect();
    let mut coeffs: HashMap<(u64, u64, u64, u64), i64> = buckets
        .par_iter()
        .fold(HashMap::new, |mut map, bucket| {
            for (i, &(si, xi, yi)) in bucket.iter().enumerate() {
                *map.entry((xi, xi, yi, yi)).or_insert(0) += 1;
                for &(sj, xj, yj) in &bucket[i + 1..] {
                    let key = (xi.min(xj), xi.max(xj), yi.min(yj), yi.max(yj));
                    *map.entry(key).or_insert(0) += 2 * i64::from(si) * i64::from(sj);
                }
            }
            map
        })
        .reduce(HashMap::new, |mut big, small| {
            for (k, v) in small {
                *big.entry(k).or_insert(0) += v;
            }
            big
        });
    for &x in id.a.bits() {
        for &y in id.b.bits() {
            *coeffs.entry((x, x, y, y)).or_insert(0) -= 1;
        }
    }
    Ok(coeffs.values().all(|&c| c == 0))
}

/// Flip `k` distinct term signs chosen by the seeded generator. When `k`
/// exceeds the term count, every sign is flipped.
pub fn mutate_signs(id: &Identity, k: usize, seed: u64) -> Identity {
    let mut slots: Vec<(u64, usize)> = id
        .terms
        .iter()
        .flat_map(|(&z, bucket)| (0..bucket.len()).map(move |i| (z, i)))
        .collect();
    let total = slots.len();
    let k = k.min(total);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..k {
        let j = rng.gen_range(i..total);
        slots.swap(i, j);
    }
    let mut out = id.clone();
    for &(z, i) in &slots[..k] {
        let bucket = out.terms.get_mut(&z).expect("slot bucket exists");
        bucket[i].0 = -bucket[i].0;
    }
    out
}

/// Render as one line per bucket, products ordered by x then y:
/// `c0 = a0*b0 - a1*b1`. Indexes are the integer values of the vectors.
pub fn render_text(id: &Identity) -> String {
    let mut out = String::new();
    for (z, bucket) in id.buckets() {
        out.push_str(&format!("c{z} = "));
        for (k, &(s, x, y)) in bucket.iter().enumerate() {
            if k == 0 {
                if s < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if s < 0 { " - " } else { " + " });
            }
            out.push_str(&format!("a{x}*b{y}"));
        }
        out.push('\n');
    }
    out
}

/// Parse the `render_text` format. The supports are recovered as the
/// sets of x and y indexes mentioned, and every pairing must appear
/// exactly once. Blank lines and `#` comments are skipped.
pub fn parse_text(n: usize, s: &str) -> Result<Identity> {
    let mut terms: BTreeMap<u64, Vec<SignedTerm>> = BTreeMap::new();
    let mut xs: Vec<u64> = Vec::new();
    let mut ys: Vec<u64> = Vec::new();
    for raw in s.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (lhs, rhs) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("missing '=' in line: {line}")))?;
        let z = parse_indexed(lhs.trim(), 'c')?;
        if terms.contains_key(&z) {
            return Err(Error::Parse(format!("duplicate definition of c{z}")));
        }
        let mut bucket = Vec::new();
        for (sign, product) in signed_chunks(rhs.trim())? {
            let (ax, by) = product
                .split_once('*')
                .ok_or_else(|| Error::Parse(format!("missing '*' in term: {product}")))?;
            let x = parse_indexed(ax.trim(), 'a')?;
            let y = parse_indexed(by.trim(), 'b')?;
            xs.push(x);
            ys.push(y);
            bucket.push((sign, x, y));
        }
        if bucket.is_empty() {
            return Err(Error::Parse(format!("no terms on line: {line}")));
        }
        terms.insert(z, bucket);
    }
    let a = VecSet::from_bits(n, xs)?;
    let b = VecSet::from_bits(n, ys)?;
    Identity::validate(a, b, terms)
}

/// Split "a0*b0 - a1*b1 + a2*b2" into signed chunks.
fn signed_chunks(rhs: &str) -> Result<Vec<(i8, String)>> {
    let mut out = Vec::new();
    let mut rest = rhs;
    let mut sign: i8 = 1;
    if let Some(tail) = rest.strip_prefix('-') {
        sign = -1;
        rest = tail.trim_start();
    }
    loop {
        let plus = rest.find(" + ");
        let minus = rest.find(" - ");
        let (cut, next_sign) = match (plus, minus) {
            (Some(p), Some(m)) if p < m => (p, 1),
            (Some(p), None) => (p, 1),
            (_, Some(m)) => (m, -1),
            (None, None) => {
                out.push((sign, rest.trim().to_string()));
                return Ok(out);
            }
        };
        out.push((sign, rest[..cut].trim().to_string()));
        rest = &rest[cut + 3..];
        sign = next_sign;
    }
}

fn parse_indexed(token: &str, prefix: char) -> Result<u64> {
    let digits = token
        .strip_prefix(prefix)
        .ok_or_else(|| Error::Parse(format!("expected '{prefix}<index>', got: {token}")))?;
    digits
        .parse::<u64>()
        .map_err(|_| Error::Parse(format!("bad index in token: {token}")))
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    s: i8,
    x: String,
    y: String,
}

#[derive(Serialize, Deserialize)]
struct IdentityRepr {
    size: [usize; 3],
    terms: BTreeMap<String, Vec<TermRepr>>,
}

impl Serialize for Identity {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.n();
        let terms = self
            .terms
            .iter()
            .map(|(&z, bucket)| {
                let key = BitVec::new(n, z).expect("stored index in range").to_string();
                let reprs = bucket
                    .iter()
                    .map(|&(s, x, y)| TermRepr {
                        s,
                        x: BitVec::new(n, x).expect("stored index in range").to_string(),
                        y: BitVec::new(n, y).expect("stored index in range").to_string(),
                    })
                    .collect();
                (key, reprs)
            })
            .collect();
        IdentityRepr {
            size: self.size(),
            terms,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Identity {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = IdentityRepr::deserialize(deserializer)?;
        let n = repr
            .terms
            .keys()
            .next()
            .ok_or_else(|| D::Error::custom("identity has no buckets"))?
            .len();
        let mut terms: BTreeMap<u64, Vec<SignedTerm>> = BTreeMap::new();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (key, bucket) in &repr.terms {
            let z = BitVec::from_binary_string(key).map_err(D::Error::custom)?;
            if z.n() != n {
                return Err(D::Error::custom("bucket keys have mixed lengths"));
            }
            let mut list = Vec::with_capacity(bucket.len());
            for t in bucket {
                let x = BitVec::from_binary_string(&t.x).map_err(D::Error::custom)?;
                let y = BitVec::from_binary_string(&t.y).map_err(D::Error::custom)?;
                if x.n() != n || y.n() != n {
                    return Err(D::Error::custom("term indexes have mixed lengths"));
                }
                xs.push(x.bits());
                ys.push(y.bits());
                list.push((t.s, x.bits(), y.bits()));
            }
            terms.insert(z.bits(), list);
        }
        let a = VecSet::from_bits(n, xs).map_err(D::Error::custom)?;
        let b = VecSet::from_bits(n, ys).map_err(D::Error::custom)?;
        let id = Identity::validate(a, b, terms).map_err(D::Error::custom)?;
        if id.size() != repr.size {
            return Err(D::Error::custom(format!(
                "declared size {:?} does not match terms {:?}",
                repr.size,
                id.size()
            )));
        }
        Ok(id)
    }
}
