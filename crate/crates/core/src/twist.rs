//! Polarization formulas and the twisting function of a cubic form.
//!
//! The monomial substitution turns a cubic form a(x) into a function
//! f(x, y) of two vector arguments: each triple x_ix_jx_k becomes
//! x_ix_jy_k + x_iy_jx_k + y_ix_jx_k, each pair x_ix_j becomes x_iy_j,
//! and each single x_i becomes x_iy_i. The resulting f satisfies four
//! properties tying it back to the source form; `check_properties`
//! decides each one exactly by comparing multilinear expansions, which
//! is valid at every dimension without exhaustive loops.

use crate::cubic::{indices_to_mask, mask_to_indices, parse_factor_indices, CubicForm};
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeSet;
use std::fmt;

/// A function of two vector arguments, stored as monomial pairs (I, J)
/// meaning the product of x_i over I and y_j over J. Every monomial has
/// at least one factor from each argument, so f(0, y) = f(x, 0) = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistFn {
    n: u8,
    monomials: BTreeSet<(u64, u64)>,
}

/// All submasks of `m`, including 0 and `m` itself.
fn submasks(m: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(1 << m.count_ones());
    let mut s = m;
    loop {
        out.push(s);
        if s == 0 {
            return out;
        }
        s = (s - 1) & m;
    }
}

fn pair_order(monomials: &BTreeSet<(u64, u64)>) -> Vec<(u64, u64)> {
    let mut v: Vec<(u64, u64)> = monomials.iter().copied().collect();
    v.sort_by(|a, b| {
        let da = a.0.count_ones() + a.1.count_ones();
        let db = b.0.count_ones() + b.1.count_ones();
        db.cmp(&da).then_with(|| (b.0, b.1).cmp(&(a.0, a.1)))
    });
    v
}

impl TwistFn {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidDimension(n));
        }
        Ok(TwistFn {
            n: n as u8,
            monomials: BTreeSet::new(),
        })
    }

    /// Build from (I, J) index-list pairs; a pair listed twice cancels.
    pub fn new<I>(n: usize, monomials: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Vec<usize>)>,
    {
        let mut f = TwistFn::empty(n)?;
        for (i_list, j_list) in monomials {
            let i_mask = indices_to_mask(&i_list, n)?;
            let j_mask = indices_to_mask(&j_list, n)?;
            f.insert_pair(i_mask, j_mask)?;
        }
        Ok(f)
    }

    fn insert_pair(&mut self, i_mask: u64, j_mask: u64) -> Result<()> {
        let (di, dj) = (i_mask.count_ones() as usize, j_mask.count_ones() as usize);
        if di == 0 || dj == 0 || di + dj > 3 {
            return Err(Error::BadTwistMonomial(di, dj));
        }
        self.toggle(i_mask, j_mask);
        Ok(())
    }

    fn toggle(&mut self, i_mask: u64, j_mask: u64) {
        if !self.monomials.remove(&(i_mask, j_mask)) {
            self.monomials.insert((i_mask, j_mask));
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn monomial_count(&self) -> usize {
        self.monomials.len()
    }

    pub(crate) fn pair_masks(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.monomials.iter().copied()
    }

    /// Monomials as (I, J) index lists, in render order.
    pub fn monomials(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        pair_order(&self.monomials)
            .into_iter()
            .map(|(i, j)| (mask_to_indices(i, self.n()), mask_to_indices(j, self.n())))
            .collect()
    }

    pub fn eval(&self, x: &BitVec, y: &BitVec) -> Result<bool> {
        if x.n() != self.n() || y.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: if x.n() != self.n() { x.n() } else { y.n() },
            });
        }
        Ok(self.eval_bits(x.bits(), y.bits()))
    }

    #[inline]
    pub(crate) fn eval_bits(&self, x: u64, y: u64) -> bool {
        let mut acc = false;
        for &(i, j) in &self.monomials {
            acc ^= x & i == i && y & j == j;
        }
        acc
    }

    /// Parse `"x1x2y3+x1y1"`. `"0"` or the empty string is the zero function.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() || compact == "0" {
            return TwistFn::empty(n);
        }
        let mut pairs = Vec::new();
        for term in compact.split('+') {
            let y_at = term
                .find('y')
                .ok_or_else(|| Error::Parse(format!("no 'y' factor in term '{term}'")))?;
            let (x_part, y_part) = term.split_at(y_at);
            pairs.push((
                parse_factor_indices(x_part, 'x')?,
                parse_factor_indices(y_part, 'y')?,
            ));
        }
        TwistFn::new(n, pairs)
    }

    pub fn to_text(&self) -> String {
        if self.monomials.is_empty() {
            return "0".to_string();
        }
        let n = self.n();
        pair_order(&self.monomials)
            .iter()
            .map(|&(i, j)| {
                let xs: String = mask_to_indices(i, n).iter().map(|k| format!("x{k}")).collect();
                let ys: String = mask_to_indices(j, n).iter().map(|k| format!("y{k}")).collect();
                format!("{xs}{ys}")
            })
            .join("+")
    }
}

impl fmt::Display for TwistFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Serialize, Deserialize)]
struct TwistFnRepr {
    n: usize,
    monomials: Vec<(Vec<usize>, Vec<usize>)>,
}

impl Serialize for TwistFn {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TwistFnRepr {
            n: self.n(),
            monomials: self.monomials(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TwistFn {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = TwistFnRepr::deserialize(deserializer)?;
        TwistFn::new(repr.n, repr.monomials).map_err(serde::de::Error::custom)
    }
}

/// First polarization: a(x+y) + a(x) + a(y).
pub fn beta(alpha: &CubicForm, x: &BitVec, y: &BitVec) -> Result<bool> {
    let sum = x.add(y)?;
    Ok(alpha.eval(&sum)? ^ alpha.eval(x)? ^ alpha.eval(y)?)
}

/// Second polarization: XOR of a over x+y+z, the three pairwise sums,
/// and the three arguments themselves.
pub fn second_polarization(
    alpha: &CubicForm,
    x: &BitVec,
    y: &BitVec,
    z: &BitVec,
) -> Result<bool> {
    let xy = x.add(y)?;
    let xz = x.add(z)?;
    let yz = y.add(z)?;
    let xyz = xy.add(z)?;
    Ok(alpha.eval(&xyz)?
        ^ alpha.eval(&xy)?
        ^ alpha.eval(&xz)?
        ^ alpha.eval(&yz)?
        ^ alpha.eval(x)?
        ^ alpha.eval(y)?
        ^ alpha.eval(z)?)
}

/// Associativity defect of the twisted product:
/// f(y,z) + f(x+y,z) + f(x,y+z) + f(x,y).
pub fn delta_f(f: &TwistFn, x: &BitVec, y: &BitVec, z: &BitVec) -> Result<bool> {
    let xy = x.add(y)?;
    let yz = y.add(z)?;
    Ok(f.eval(y, z)? ^ f.eval(&xy, z)? ^ f.eval(x, &yz)? ^ f.eval(x, y)?)
}

/// Monomial substitution: triples x_ix_jx_k map to the three ways of
/// replacing one factor by a y, pairs x_ix_j map to x_iy_j, and singles
/// x_i map to x_iy_i.
pub fn twist_from_cubic(alpha: &CubicForm) -> TwistFn {
    let mut f = TwistFn::empty(alpha.n()).expect("form dimension is valid");
    for m in alpha.masks() {
        match m.count_ones() {
            3 => {
                let mut rest = m;
                while rest != 0 {
                    let low = rest & rest.wrapping_neg();
                    f.toggle(m & !low, low);
                    rest &= rest - 1;
                }
            }
            2 => {
                // the lower-index factor keeps x; lower index = higher bit
                let low_bit = m & m.wrapping_neg();
                f.toggle(m & !low_bit, low_bit);
            }
            1 => f.toggle(m, m),
            _ => unreachable!("cubic form monomials have degree 1..=3"),
        }
    }
    f
}

/// Verdicts for the four defining properties of a twisting function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    /// (a) f(x,y) + f(y,x) equals the first polarization of the form.
    pub first_polarization: bool,
    /// (b) the associativity defect equals the second polarization.
    pub second_polarization: bool,
    /// (c) f is linear in its second argument.
    pub right_linearity: bool,
    /// (d) f(x,x) reconstructs the form.
    pub reconstruction: bool,
}

impl PropertyReport {
    pub fn all(&self) -> bool {
        self.first_polarization
            && self.second_polarization
            && self.right_linearity
            && self.reconstruction
    }
}

/// Decide properties (a)-(d) for the pair (alpha, f) by exact multilinear
/// expansion. Each side of each identity is expanded into a set of
/// monomials over disjoint variable groups and compared for set equality,
/// so the verdicts cover all points of the space at any dimension.
pub fn check_properties(alpha: &CubicForm, f: &TwistFn) -> Result<PropertyReport> {
    if alpha.n() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: alpha.n(),
            got: f.n(),
        });
    }

    // (a) f(x,y) + f(y,x) vs a(x+y) + a(x) + a(y): the right side expands
    // to all splittings of each monomial M of a into nonempty (I, M\I).
    let mut lhs_a: BTreeSet<(u64, u64)> = BTreeSet::new();
    for (i, j) in f.pair_masks() {
        toggle_pair(&mut lhs_a, (i, j));
        toggle_pair(&mut lhs_a, (j, i));
    }
    let mut rhs_a: BTreeSet<(u64, u64)> = BTreeSet::new();
    for m in alpha.masks() {
        for s in submasks(m) {
            if s != 0 && s != m {
                toggle_pair(&mut rhs_a, (s, m & !s));
            }
        }
    }
    let prop_a = lhs_a == rhs_a;

    // (b) the defect of f vs the second polarization of a, expanded in
    // three variable groups. Only splittings with all three parts
    // nonempty survive on the right, one per ordering of a triple.
    let mut lhs_b: BTreeSet<(u64, u64, u64)> = BTreeSet::new();
    for (i, j) in f.pair_masks() {
        toggle_triple(&mut lhs_b, (0, i, j));
        for s in submasks(i) {
            toggle_triple(&mut lhs_b, (s, i & !s, j));
        }
        for t in submasks(j) {
            toggle_triple(&mut lhs_b, (i, t, j & !t));
        }
        toggle_triple(&mut lhs_b, (i, j, 0));
    }
    let mut rhs_b: BTreeSet<(u64, u64, u64)> = BTreeSet::new();
    for m in alpha.masks() {
        for p in submasks(m) {
            if p == 0 {
                continue;
            }
            let rest = m & !p;
            for q in submasks(rest) {
                let r = rest & !q;
                if q != 0 && r != 0 {
                    toggle_triple(&mut rhs_b, (p, q, r));
                }
            }
        }
    }
    let prop_b = lhs_b == rhs_b;

    // (c) f(x, y+y') + f(x,y) + f(x,y') leaves exactly the mixed terms of
    // monomials with two or more y-factors, and those cannot cancel
    // across monomials, so linearity holds iff every |J| = 1.
    let prop_c = f.pair_masks().all(|(_, j)| j.count_ones() == 1);

    // (d) f(x,x) collapses each (I, J) to the union; XOR-accumulate and
    // compare against the monomial set of a.
    let mut diag: BTreeSet<u64> = BTreeSet::new();
    for (i, j) in f.pair_masks() {
        let u = i | j;
        if !diag.remove(&u) {
            diag.insert(u);
        }
    }
    let prop_d = diag == *alpha.mask_set();

    Ok(PropertyReport {
        first_polarization: prop_a,
        second_polarization: prop_b,
        right_linearity: prop_c,
        reconstruction: prop_d,
    })
}

fn toggle_pair(set: &mut BTreeSet<(u64, u64)>, key: (u64, u64)) {
    if !set.remove(&key) {
        set.insert(key);
    }
}

fn toggle_triple(set: &mut BTreeSet<(u64, u64, u64)>, key: (u64, u64, u64)) {
    if !set.remove(&key) {
        set.insert(key);
    }
}

/// Largest dimension for which a full truth table is materialized.
pub const MAX_TABLE_N: usize = 28;

/// A Boolean function tabulated on all 2^n points, indexed by the integer
/// value of the argument vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    n: u8,
    words: Vec<u64>,
}

impl TruthTable {
    pub fn from_fn<F: Fn(u64) -> bool>(n: usize, f: F) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(n));
        }
        if n > MAX_TABLE_N {
            return Err(Error::TableTooLarge(n, MAX_TABLE_N));
        }
        let size = 1u64 << n;
        let mut words = vec![0u64; size.div_ceil(64) as usize];
        for i in 0..size {
            if f(i) {
                words[(i >> 6) as usize] |= 1 << (i & 63);
            }
        }
        Ok(TruthTable { n: n as u8, words })
    }

    pub fn zero(n: usize) -> Result<Self> {
        TruthTable::from_fn(n, |_| false)
    }

    /// Tabulate a form by seeding its monomial coefficients and running
    /// the subset transform, which is linear in the table size.
    pub fn from_cubic(alpha: &CubicForm) -> Result<Self> {
        let n = alpha.n();
        if n > MAX_TABLE_N {
            return Err(Error::TableTooLarge(n, MAX_TABLE_N));
        }
        let size = 1u64 << n;
        let mut words = vec![0u64; size.div_ceil(64) as usize];
        for m in alpha.masks() {
            words[(m >> 6) as usize] ^= 1 << (m & 63);
        }
        xor_subset_transform(&mut words, n);
        Ok(TruthTable { n: n as u8, words })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn get_index(&self, i: u64) -> bool {
        debug_assert!(i < 1u64 << self.n);
        (self.words[(i >> 6) as usize] >> (i & 63)) & 1 == 1
    }

    pub fn set_index(&mut self, i: u64, v: bool) {
        debug_assert!(i < 1u64 << self.n);
        let (w, b) = ((i >> 6) as usize, i & 63);
        if v {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    pub fn value(&self, x: &BitVec) -> Result<bool> {
        if x.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: x.n(),
            });
        }
        Ok(self.get_index(x.bits()))
    }

    /// Flip the value at one point.
    pub fn flip_index(&mut self, i: u64) {
        let v = self.get_index(i);
        self.set_index(i, !v);
    }

    /// Hex dump: the 2^n bits as one big-endian hex number, fixed width,
    /// bit for vector v at binary position v.
    pub fn to_hex(&self) -> String {
        let digits = (1usize << self.n).div_ceil(4);
        let mut s = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let word = self.words[d / 16];
            let nibble = (word >> ((d % 16) * 4)) & 0xf;
            s.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        s
    }

    pub fn from_hex(n: usize, s: &str) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(n));
        }
        if n > MAX_TABLE_N {
            return Err(Error::TableTooLarge(n, MAX_TABLE_N));
        }
        let digits = (1usize << n).div_ceil(4);
        let trimmed = s.trim();
        if trimmed.len() != digits {
            return Err(Error::Parse(format!(
                "table for n={n} needs exactly {digits} hex digits, got {}",
                trimmed.len()
            )));
        }
        let size = 1u64 << n;
        let mut words = vec![0u64; size.div_ceil(64) as usize];
        for (pos, c) in trimmed.chars().rev().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("bad hex digit '{c}'")))?
                as u64;
            words[pos / 16] |= nibble << ((pos % 16) * 4);
        }
        if let Some(last) = words.last_mut() {
            if size & 63 != 0 {
                let keep = (1u64 << (size & 63)) - 1;
                if *last & !keep != 0 {
                    return Err(Error::Parse(
                        "hex table has bits beyond 2^n entries".into(),
                    ));
                }
                *last &= keep;
            }
        }
        Ok(TruthTable { n: n as u8, words })
    }

    /// Multilinear coefficient table: bit i of the result holds the
    /// coefficient of the variable set encoded by i.
    fn to_anf(mut self) -> Vec<u64> {
        xor_subset_transform(&mut self.words, self.n as usize);
        self.words
    }
}

/// In-place XOR-over-subsets butterfly. Sends a coefficient table to the
/// value table of the corresponding multilinear polynomial and, being an
/// involution, also inverts that map.
pub(crate) fn xor_subset_transform(words: &mut [u64], n: usize) {
    const MASKS: [u64; 6] = [
        0x5555_5555_5555_5555,
        0x3333_3333_3333_3333,
        0x0f0f_0f0f_0f0f_0f0f,
        0x00ff_00ff_00ff_00ff,
        0x0000_ffff_0000_ffff,
        0x0000_0000_ffff_ffff,
    ];
    for (b, mask) in MASKS.iter().enumerate().take(n.min(6)) {
        for w in words.iter_mut() {
            *w ^= (*w & mask) << (1 << b);
        }
    }
    for b in 6..n {
        let stride = 1usize << (b - 6);
        let mut base = 0;
        while base < words.len() {
            for k in 0..stride {
                words[base + stride + k] ^= words[base + k];
            }
            base += 2 * stride;
        }
    }
}

/// The four-variable alternating-sum test: true iff the XOR of g over all
/// 15 nonempty sub-sums of {x, y, z, t} vanishes for every choice of the
/// four vectors. Equivalent to g vanishing at 0 and having multilinear
/// degree at most 3; decided here through the coefficient transform. For
/// n < 4 the test is vacuous and returns true.
pub fn is_degree_le3(g: &TruthTable) -> bool {
    if g.n() < 4 {
        return true;
    }
    if g.get_index(0) {
        return false;
    }
    let anf = g.clone().to_anf();
    for (k, &w) in anf.iter().enumerate() {
        if w == 0 {
            continue;
        }
        let high = (k as u64).count_ones();
        let mut bits = w;
        while bits != 0 {
            let p = bits.trailing_zeros();
            if high + p.count_ones() >= 4 {
                return false;
            }
            bits &= bits - 1;
        }
    }
    true
}
