use serde::Serialize;

use crate::bits::Bits;
use crate::subset::{product_set, GroupSubset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VosperCase {
    /// `|A| = 1` or `|B| = 1`.
    Singleton,
    /// `|AB| ≥ p − 1`, which includes the complement-type pairs.
    NearlyFull,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VosperError {
    #[error("group order {0} is not prime")]
    NotPrimeOrder(usize),
    #[error("exceptional Vosper case: {0:?}")]
    Exceptional(VosperCase),
    #[error("|AB| = {ab} but |A| + |B| - 1 = {expected}")]
    NotCritical { ab: usize, expected: usize },
    #[error("sets must be nonempty subsets of one group")]
    BadInput,
    /// Would contradict Vosper's theorem.
    #[error("no common difference makes both sets progressions")]
    NoCommonDifference,
}

/// `A = {a, a+d, ..., a+(k-1)d}` and `B = {b, b+d, ..., b+(l-1)d}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VosperStructure {
    /// As a group element.
    pub difference: usize,
    pub start_a: usize,
    pub start_b: usize,
    pub lengths: (usize, usize),
    /// Always false for classified pairs: exceptional pairs are rejected.
    pub exceptional: bool,
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Start of `s` as a progression with difference `d` (given as a group
/// element), if it is one.
fn progression_start(s: &GroupSubset, d: usize) -> Option<usize> {
    let g = s.group();
    let shifted = Bits::from_indices(g.order(), s.iter().map(|x| g.mul(x, d)));
    let new = shifted.difference(s.bits());
    if new.count() != 1 {
        return None;
    }
    // the start is the element whose predecessor is missing
    let di = g.inv(d);
    s.iter().find(|&x| !s.contains(g.mul(x, di)))
}

/// Classifies a critical pair in a group of prime order as progressions
/// with a common difference.
///
/// The difference reported is the least element index that works for both
/// sets (`d` and `-d` both do).
pub fn vosper_classify(a: &GroupSubset, b: &GroupSubset) -> Result<VosperStructure, VosperError> {
    if !a.same_group(b) || a.is_empty() || b.is_empty() {
        return Err(VosperError::BadInput);
    }
    let g = a.group();
    let p = g.order();
    if !is_prime(p) {
        return Err(VosperError::NotPrimeOrder(p));
    }
    if a.len() < 2 || b.len() < 2 {
        return Err(VosperError::Exceptional(VosperCase::Singleton));
    }
    let ab = product_set(a, b).map_err(|_| VosperError::BadInput)?.len();
    if ab + 1 >= p {
        return Err(VosperError::Exceptional(VosperCase::NearlyFull));
    }
    let expected = a.len() + b.len() - 1;
    if ab != expected {
        return Err(VosperError::NotCritical { ab, expected });
    }
    for d in g.elements().filter(|&d| d != g.identity()) {
        if let (Some(sa), Some(sb)) = (progression_start(a, d), progression_start(b, d)) {
            return Ok(VosperStructure {
                difference: d,
                start_a: sa,
                start_b: sb,
                lengths: (a.len(), b.len()),
                exceptional: false,
            });
        }
    }
    Err(VosperError::NoCommonDifference)
}
