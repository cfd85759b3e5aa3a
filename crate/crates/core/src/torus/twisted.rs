//! The twisted torus `T ⋊ {-1, 1}` with law `(m,p)(n,q) = (m + p n, pq)`.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::arc::{arc_sumset, ArcSet};
use super::TorusError;
use crate::rational::{fmt_big, frac, serde_big, BigQ};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TwistedElem {
    #[serde(with = "serde_big")]
    pub u: BigQ,
    /// `true` for `+1`.
    pub plus: bool,
}

impl TwistedElem {
    pub fn new(u: BigQ, plus: bool) -> Self {
        TwistedElem { u: frac(&u), plus }
    }

    pub fn identity() -> Self {
        TwistedElem::new(BigQ::zero(), true)
    }

    pub fn mul(&self, other: &TwistedElem) -> TwistedElem {
        let v = if self.plus { &self.u + &other.u } else { &self.u - &other.u };
        TwistedElem::new(v, self.plus == other.plus)
    }

    pub fn inv(&self) -> TwistedElem {
        // (u,+)⁻¹ = (-u,+); (u,-) is an involution
        if self.plus {
            TwistedElem::new(-self.u.clone(), true)
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for TwistedElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", fmt_big(&self.u), if self.plus { "+" } else { "-" })
    }
}

/// A subset of the twisted torus, one arc set per sign.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TwistedSet {
    pub plus: ArcSet,
    pub minus: ArcSet,
}

impl TwistedSet {
    pub fn new(plus: ArcSet, minus: ArcSet) -> Self {
        TwistedSet { plus, minus }
    }

    /// `I ⋊ {-1, 1}`.
    pub fn tilde(i: &ArcSet) -> Self {
        TwistedSet::new(i.clone(), i.clone())
    }

    pub fn singleton(x: &TwistedElem) -> Self {
        let p = ArcSet::point(x.u.clone());
        if x.plus {
            TwistedSet::new(p, ArcSet::empty())
        } else {
            TwistedSet::new(ArcSet::empty(), p)
        }
    }

    /// Haar probability: the mean of the two arc measures.
    pub fn measure(&self) -> BigQ {
        (self.plus.measure() + self.minus.measure()) / BigQ::from_integer(2.into())
    }

    pub fn has_corrections(&self) -> bool {
        self.plus.has_corrections() || self.minus.has_corrections()
    }

    pub fn is_regular(&self) -> bool {
        self.plus.is_regular() && self.minus.is_regular()
    }

    pub fn positive_part(&self) -> Self {
        TwistedSet::new(self.plus.positive_part(), self.minus.positive_part())
    }

    pub fn closed_support(&self) -> Self {
        TwistedSet::new(self.plus.closed_support(), self.minus.closed_support())
    }

    pub fn contains(&self, x: &TwistedElem) -> bool {
        if x.plus {
            self.plus.contains(&x.u)
        } else {
            self.minus.contains(&x.u)
        }
    }

    /// `xS`.
    pub fn translate_left(&self, x: &TwistedElem) -> Self {
        if x.plus {
            TwistedSet::new(self.plus.translate(&x.u), self.minus.translate(&x.u))
        } else {
            // (u,-)(n,q) = (u - n, -q)
            TwistedSet::new(self.minus.negate().translate(&x.u), self.plus.negate().translate(&x.u))
        }
    }

    /// `Sx`.
    pub fn translate_right(&self, x: &TwistedElem) -> Self {
        let neg = -x.u.clone();
        if x.plus {
            // (n,p)(u,+) = (n + p u, p)
            TwistedSet::new(self.plus.translate(&x.u), self.minus.translate(&neg))
        } else {
            // (n,p)(u,-) = (n + p u, -p)
            TwistedSet::new(self.minus.translate(&neg), self.plus.translate(&x.u))
        }
    }

    pub fn union(&self, other: &TwistedSet) -> Result<TwistedSet, TorusError> {
        Ok(TwistedSet::new(self.plus.union(&other.plus)?, self.minus.union(&other.minus)?))
    }

    pub fn intersection(&self, other: &TwistedSet) -> Result<TwistedSet, TorusError> {
        Ok(TwistedSet::new(
            self.plus.intersection(&other.plus)?,
            self.minus.intersection(&other.minus)?,
        ))
    }

    /// A point of `self` outside `other`, if any.
    pub fn point_outside(&self, other: &TwistedSet) -> Option<TwistedElem> {
        if let Some(u) = self.plus.point_outside(&other.plus) {
            return Some(TwistedElem::new(u, true));
        }
        self.minus.point_outside(&other.minus).map(|u| TwistedElem::new(u, false))
    }

    pub fn is_subset_of(&self, other: &TwistedSet) -> bool {
        self.point_outside(other).is_none()
    }

    pub fn is_full(&self) -> bool {
        self.plus.is_full() && self.minus.is_full()
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_empty() && self.minus.is_empty()
    }
}

impl fmt::Display for TwistedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "+: {} | -: {}", self.plus, self.minus)
    }
}

/// Product set in the twisted torus, for point-free sets.
pub fn twisted_product(a: &TwistedSet, b: &TwistedSet) -> Result<TwistedSet, TorusError> {
    if a.has_corrections() || b.has_corrections() {
        return Err(TorusError::PointCorrections);
    }
    let plus = arc_sumset(&a.plus, &b.plus)?.union(&arc_sumset(&a.minus, &b.minus.negate())?)?;
    let minus = arc_sumset(&a.plus, &b.minus)?.union(&arc_sumset(&a.minus, &b.plus.negate())?)?;
    Ok(TwistedSet::new(plus, minus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::big;

    fn sym(h: (i64, i64)) -> ArcSet {
        ArcSet::symmetric(&big(h.0, h.1)).unwrap()
    }

    #[test]
    fn product_fixtures() {
        let i = TwistedSet::tilde(&sym((1, 8)));
        let p = twisted_product(&i, &i).unwrap();
        assert_eq!(p, TwistedSet::tilde(&sym((1, 4))));
        assert_eq!(p.measure(), big(1, 2));
        assert_eq!(i.measure() + i.measure(), big(1, 2));

        let e = TwistedSet::singleton(&TwistedElem::identity());
        let a = TwistedSet::new(ArcSet::interval(big(0, 1), big(1, 4)).unwrap(), sym((1, 16)));
        assert_eq!(twisted_product(&e, &a).unwrap(), a);
        assert_eq!(twisted_product(&a, &e).unwrap(), a);

        let plus_only = TwistedSet::new(sym((1, 8)), ArcSet::empty());
        let minus_only = TwistedSet::new(ArcSet::empty(), sym((1, 8)));
        let p = twisted_product(&plus_only, &minus_only).unwrap();
        assert!(p.plus.is_empty());
        assert!(!p.minus.is_empty());
    }

    #[test]
    fn translations_match_the_law() {
        let a = TwistedSet::new(
            ArcSet::interval(big(0, 1), big(1, 4)).unwrap(),
            ArcSet::interval(big(1, 3), big(1, 2)).unwrap(),
        );
        for x in [
            TwistedElem::new(big(1, 5), true),
            TwistedElem::new(big(2, 7), false),
        ] {
            let s = TwistedSet::singleton(&x);
            assert_eq!(a.translate_left(&x), twisted_product(&s, &a).unwrap());
            assert_eq!(a.translate_right(&x), twisted_product(&a, &s).unwrap());
        }
    }

    #[test]
    fn element_law() {
        let x = TwistedElem::new(big(1, 3), false);
        let y = TwistedElem::new(big(1, 4), true);
        assert_eq!(x.mul(&y), TwistedElem::new(big(1, 12), false));
        assert_eq!(x.mul(&x.inv()), TwistedElem::identity());
        assert_eq!(y.mul(&y.inv()), TwistedElem::identity());
    }
}
