//! Stability of pairs: `xJ ⊆ IJ` forces `x ∈ I`, and `Iy ⊆ IJ` forces `y ∈ J`.
//!
//! Both conditions are decided exactly. The set `{x : x + J ⊆ S}` is the
//! erosion of `S` by `J`, a finite union of closed arcs computed from the
//! component endpoints of `S` and the arc endpoints of `J`; the pair is
//! stable when the two erosions come back as `I` and `J` themselves.

use super::arc::{arc_sumset, erosion, ArcSet};
use super::twisted::{twisted_product, TwistedSet};
use super::TorusError;

/// `{x : x + j ⊆ i + j}`.
pub fn left_closure(i: &ArcSet, j: &ArcSet) -> Result<ArcSet, TorusError> {
    erosion(&arc_sumset(i, j)?, j)
}

pub fn is_stable_pair(i: &ArcSet, j: &ArcSet) -> Result<bool, TorusError> {
    i.require_plain()?;
    j.require_plain()?;
    let s = arc_sumset(i, j)?;
    Ok(erosion(&s, j)? == *i && erosion(&s, i)? == *j)
}

/// `{x : xJ ⊆ S}` in the twisted torus.
pub fn twisted_left_closure(s: &TwistedSet, j: &TwistedSet) -> Result<TwistedSet, TorusError> {
    // x = (u,+): u + J⁺ ⊆ S⁺ and u + J⁻ ⊆ S⁻
    let plus = erosion(&s.plus, &j.plus)?.intersection(&erosion(&s.minus, &j.minus)?)?;
    // x = (u,-): u - J⁻ ⊆ S⁺ and u - J⁺ ⊆ S⁻
    let minus = erosion(&s.plus, &j.minus.negate())?.intersection(&erosion(&s.minus, &j.plus.negate())?)?;
    Ok(TwistedSet::new(plus, minus))
}

/// `{y : Iy ⊆ S}` in the twisted torus.
pub fn twisted_right_closure(s: &TwistedSet, i: &TwistedSet) -> Result<TwistedSet, TorusError> {
    // y = (u,+): I⁺ + u ⊆ S⁺ and I⁻ - u ⊆ S⁻
    let plus = erosion(&s.plus, &i.plus)?.intersection(&erosion(&s.minus, &i.minus)?.negate())?;
    // y = (u,-): I⁺ + u ⊆ S⁻ and I⁻ - u ⊆ S⁺
    let minus = erosion(&s.minus, &i.plus)?.intersection(&erosion(&s.plus, &i.minus)?.negate())?;
    Ok(TwistedSet::new(plus, minus))
}

pub fn is_stable_twisted(i: &TwistedSet, j: &TwistedSet) -> Result<bool, TorusError> {
    let s = twisted_product(i, j)?;
    Ok(twisted_left_closure(&s, j)? == *i && twisted_right_closure(&s, i)? == *j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::big;

    fn iv(lo: (i64, i64), hi: (i64, i64)) -> ArcSet {
        ArcSet::interval(big(lo.0, lo.1), big(hi.0, hi.1)).unwrap()
    }

    #[test]
    fn interval_pairs_are_stable() {
        let q = iv((0, 1), (1, 4));
        assert!(is_stable_pair(&q, &q).unwrap());
        assert!(is_stable_pair(&iv((1, 3), (1, 2)), &iv((0, 1), (1, 5))).unwrap());
        let p = ArcSet::point(big(1, 7));
        assert!(is_stable_pair(&p, &q).unwrap());
    }

    #[test]
    fn two_arc_fixture() {
        // left stability holds, but I + 1/2 = I puts 1/2 in the right closure
        let i = iv((0, 1), (1, 8)).union(&iv((1, 2), (5, 8))).unwrap();
        let j = iv((0, 1), (1, 8));
        assert_eq!(left_closure(&i, &j).unwrap(), i);
        assert!(!is_stable_pair(&i, &j).unwrap());
    }

    #[test]
    fn saturated_pairs_are_not_stable() {
        let long = iv((0, 1), (3, 5));
        assert!(!is_stable_pair(&long, &long).unwrap());
    }

    #[test]
    fn corrections_rejected() {
        let holed = iv((0, 1), (1, 2)).with_points([], [big(1, 4)]).unwrap();
        assert_eq!(is_stable_pair(&holed, &holed).unwrap_err(), TorusError::PointCorrections);
    }

    #[test]
    fn twisted_symmetric_pairs_are_stable() {
        let i = TwistedSet::tilde(&ArcSet::symmetric(&big(1, 8)).unwrap());
        let j = TwistedSet::tilde(&ArcSet::symmetric(&big(1, 10)).unwrap());
        assert!(is_stable_twisted(&i, &j).unwrap());
    }
}
