//! Additive quadruples across two sets.
//!
//! A proper quadruple is a choice of two distinct elements of A and two
//! distinct elements of B with equal sums. Counting goes through the
//! pair-sum histograms of the two sets, so it stays cheap even when the
//! naive four-fold loop would not.

use crate::cubic::CubicForm;
use crate::error::{Error, Result};
use crate::sets::VecSet;
use serde::Serialize;

/// Number of proper quadruples ({x, x'}, {y, y'}) with x + x' = y + y',
/// both pairs unordered.
pub fn count_proper_quadruples(a: &VecSet, b: &VecSet) -> Result<u128> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            got: b.n(),
        });
    }
    let ha = a.pair_sum_multiplicities();
    let hb = b.pair_sum_multiplicities();
    let (small, large) = if ha.len() <= hb.len() {
        (&ha, &hb)
    } else {
        (&hb, &ha)
    };
    Ok(small
        .iter()
        .filter_map(|(s, &m1)| large.get(s).map(|&m2| u128::from(m1) * u128::from(m2)))
        .sum())
}

/// Ordered variant: tuples (x, x', y, y') with x != x' and y != y', so
/// four times the unordered count.
pub fn count_proper_quadruples_ordered(a: &VecSet, b: &VecSet) -> Result<u128> {
    Ok(count_proper_quadruples(a, b)? * 4)
}

/// True when every vector reachable as a pair sum inside A and also as a
/// pair sum inside B lands where alpha is 1. Sets with no pairs satisfy
/// this vacuously, so singletons never fail it.
pub fn hypothesis_check(alpha: &CubicForm, a: &VecSet, b: &VecSet) -> Result<bool> {
    let n = alpha.n();
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
    let ha = a.pair_sum_multiplicities();
    let hb = b.pair_sum_multiplicities();
    let (small, large) = if ha.len() <= hb.len() {
        (&ha, &hb)
    } else {
        (&hb, &ha)
    };
    Ok(small
        .keys()
        .all(|s| !large.contains_key(s) || alpha.eval_bits(*s)))
}

/// Summary of the additive structure of a pair of sets under a form.
/// The ratio relates the sumset size to |A|^(6/5) and is recorded for
/// context only; no claim is made about it.
#[derive(Debug, Clone, Serialize)]
pub struct QuadrupleReport {
    /// [|A|, |B|] with A the smaller set.
    pub size: [usize; 2],
    pub proper_count: u128,
    pub proper_count_ordered: u128,
    pub hypothesis_holds: bool,
    pub sumset_size: usize,
    pub ratio: f64,
    /// True when the inputs arrived with |A| > |B| and were swapped to
    /// put the smaller set first.
    pub swapped: bool,
}

pub fn quadruple_report(alpha: &CubicForm, a: &VecSet, b: &VecSet) -> Result<QuadrupleReport> {
    let swapped = a.len() > b.len();
    let (a, b) = if swapped { (b, a) } else { (a, b) };
    let proper_count = count_proper_quadruples(a, b)?;
    let hypothesis_holds = hypothesis_check(alpha, a, b)?;
    let sumset_size = a.sumset(b)?.len();
    let ratio = sumset_size as f64 / (a.len() as f64).powf(1.2);
    Ok(QuadrupleReport {
        size: [a.len(), b.len()],
        proper_count,
        proper_count_ordered: proper_count * 4,
        hypothesis_holds,
        sumset_size,
        ratio,
        swapped,
    })
}
