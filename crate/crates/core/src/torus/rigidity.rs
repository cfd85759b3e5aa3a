//! Rigidity: a critical pair that agrees almost everywhere with a stable,
//! regular critical pair is contained in it.

use std::fmt::Debug;

use num_traits::One;
use serde::Serialize;

use super::arc::{arc_sumset, ArcSet};
use super::stability::{is_stable_pair, is_stable_twisted};
use super::twisted::{twisted_product, TwistedElem, TwistedSet};
use super::TorusError;
use crate::rational::{fmt_big, BigQ};

/// The operations rigidity needs from a circle model.
pub trait TorusSet: Clone + PartialEq + Debug {
    type Point: Clone + Debug + Serialize;

    fn measure(&self) -> BigQ;
    fn product(&self, other: &Self) -> Result<Self, TorusError>;
    fn intersection(&self, other: &Self) -> Result<Self, TorusError>;
    fn positive_part(&self) -> Self;
    fn closed_support(&self) -> Self;
    fn is_regular(&self) -> bool;
    fn is_stable_with(&self, other: &Self) -> Result<bool, TorusError>;
    fn point_outside(&self, other: &Self) -> Option<Self::Point>;
    fn translate_left(&self, x: &Self::Point) -> Self;
    fn translate_right(&self, x: &Self::Point) -> Self;
}

impl TorusSet for ArcSet {
    type Point = String;

    fn measure(&self) -> BigQ {
        ArcSet::measure(self)
    }
    fn product(&self, other: &Self) -> Result<Self, TorusError> {
        arc_sumset(self, other)
    }
    fn intersection(&self, other: &Self) -> Result<Self, TorusError> {
        ArcSet::intersection(self, other)
    }
    fn positive_part(&self) -> Self {
        ArcSet::positive_part(self)
    }
    fn closed_support(&self) -> Self {
        ArcSet::closed_support(self)
    }
    fn is_regular(&self) -> bool {
        ArcSet::is_regular(self)
    }
    fn is_stable_with(&self, other: &Self) -> Result<bool, TorusError> {
        is_stable_pair(self, other)
    }
    fn point_outside(&self, other: &Self) -> Option<String> {
        ArcSet::point_outside(self, other).map(|x| fmt_big(&x))
    }
    fn translate_left(&self, x: &String) -> Self {
        self.translate(&crate::rational::parse_big(x).expect("points are formatted rationals"))
    }
    fn translate_right(&self, x: &String) -> Self {
        self.translate_left(x)
    }
}

impl TorusSet for TwistedSet {
    type Point = TwistedElem;

    fn measure(&self) -> BigQ {
        TwistedSet::measure(self)
    }
    fn product(&self, other: &Self) -> Result<Self, TorusError> {
        twisted_product(self, other)
    }
    fn intersection(&self, other: &Self) -> Result<Self, TorusError> {
        TwistedSet::intersection(self, other)
    }
    fn positive_part(&self) -> Self {
        TwistedSet::positive_part(self)
    }
    fn closed_support(&self) -> Self {
        TwistedSet::closed_support(self)
    }
    fn is_regular(&self) -> bool {
        TwistedSet::is_regular(self)
    }
    fn is_stable_with(&self, other: &Self) -> Result<bool, TorusError> {
        is_stable_twisted(self, other)
    }
    fn point_outside(&self, other: &Self) -> Option<TwistedElem> {
        TwistedSet::point_outside(self, other)
    }
    fn translate_left(&self, x: &TwistedElem) -> Self {
        TwistedSet::translate_left(self, x)
    }
    fn translate_right(&self, x: &TwistedElem) -> Self {
        TwistedSet::translate_right(self, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairSide {
    A,
    B,
}

/// A point `x ∈ A₁ \ A₂` with `m((x B₂) \ A₂B₂) > 0`, or the mirror image
/// `y ∈ B₁ \ B₂` with `m((A₂ y) \ A₂B₂) > 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RigidityWitness<P> {
    pub side: PairSide,
    pub point: P,
    #[serde(with = "crate::rational::serde_big")]
    pub excess: BigQ,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RigidityOutcome<P> {
    pub contained: bool,
    pub witness: Option<RigidityWitness<P>>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RigidityError {
    #[error("{0:?}1 and {0:?}2 differ on a set of positive measure")]
    NotAlmostEqual(PairSide),
    #[error("{0:?}2 is not regular")]
    NotRegular(PairSide),
    #[error("(A{pair},B{pair}) is not critical: m(AB) = {m_ab}, m(A) + m(B) = {sum}")]
    NotCritical {
        pair: u8,
        m_ab: String,
        sum: String,
        /// For pair 1, a point responsible for the excess if one is found.
        witness: Option<String>,
    },
    #[error("(A2,B2) is not stable")]
    NotStable,
    #[error(transparent)]
    Torus(#[from] TorusError),
}

fn excess<T: TorusSet>(translate: &T, ab: &T) -> Result<BigQ, TorusError> {
    Ok(translate.measure() - translate.intersection(ab)?.measure())
}

fn find_witness<T: TorusSet>(
    a1: &T,
    b1: &T,
    a2: &T,
    b2: &T,
) -> Result<Option<RigidityWitness<T::Point>>, TorusError> {
    let ab2 = a2.product(b2)?;
    if let Some(x) = a1.point_outside(a2) {
        let e = excess(&b2.translate_left(&x), &ab2)?;
        return Ok(Some(RigidityWitness {
            side: PairSide::A,
            point: x,
            excess: e,
        }));
    }
    if let Some(y) = b1.point_outside(b2) {
        let e = excess(&a2.translate_right(&y), &ab2)?;
        return Ok(Some(RigidityWitness {
            side: PairSide::B,
            point: y,
            excess: e,
        }));
    }
    Ok(None)
}

/// Checks the hypotheses one by one, each failure with its own error, and
/// then whether `A₁ ⊆ A₂` and `B₁ ⊆ B₂` pointwise.
///
/// Products of sets carrying point corrections are taken on their closed
/// supports, so an added point `p` contributes `p + B` to `A₁B₁`.
pub fn rigidity_force_containment<T: TorusSet>(
    a1: &T,
    b1: &T,
    a2: &T,
    b2: &T,
) -> Result<RigidityOutcome<T::Point>, RigidityError> {
    if a1.positive_part() != a2.positive_part() {
        return Err(RigidityError::NotAlmostEqual(PairSide::A));
    }
    if b1.positive_part() != b2.positive_part() {
        return Err(RigidityError::NotAlmostEqual(PairSide::B));
    }
    if !a2.is_regular() {
        return Err(RigidityError::NotRegular(PairSide::A));
    }
    if !b2.is_regular() {
        return Err(RigidityError::NotRegular(PairSide::B));
    }
    let critical = |a: &T, b: &T, pair: u8| -> Result<(), RigidityError> {
        let m_ab = a.closed_support().product(&b.closed_support())?.measure();
        let sum = a.measure() + b.measure();
        if m_ab == sum && sum < BigQ::one() {
            return Ok(());
        }
        let witness = if pair == 1 {
            find_witness(a1, b1, a2, b2)?.map(|w| format!("{:?} at {:?}, excess {}", w.side, w.point, fmt_big(&w.excess)))
        } else {
            None
        };
        Err(RigidityError::NotCritical {
            pair,
            m_ab: fmt_big(&m_ab),
            sum: fmt_big(&sum),
            witness,
        })
    };
    critical(a2, b2, 2)?;
    if !a2.is_stable_with(b2)? {
        return Err(RigidityError::NotStable);
    }
    critical(a1, b1, 1)?;
    let witness = find_witness(a1, b1, a2, b2)?;
    Ok(RigidityOutcome {
        contained: witness.is_none(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::big;

    fn q() -> ArcSet {
        ArcSet::interval(big(0, 1), big(1, 4)).unwrap()
    }

    #[test]
    fn removed_point_keeps_containment() {
        let a1 = q().with_points([], [big(1, 8)]).unwrap();
        let out = rigidity_force_containment(&a1, &q(), &q(), &q()).unwrap();
        assert!(out.contained);
        assert!(out.witness.is_none());
    }

    #[test]
    fn added_point_breaks_criticality() {
        let a1 = q().with_points([big(1, 2)], []).unwrap();
        match rigidity_force_containment(&a1, &q(), &q(), &q()) {
            Err(RigidityError::NotCritical { pair: 1, m_ab, sum, witness }) => {
                assert_eq!(m_ab, "3/4");
                assert_eq!(sum, "1/2");
                let w = witness.unwrap();
                assert!(w.contains("1/2") && w.contains("excess 1/4"), "{w}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identical_pairs() {
        let out = rigidity_force_containment(&q(), &q(), &q(), &q()).unwrap();
        assert!(out.contained);
    }

    #[test]
    fn named_preconditions() {
        let other = ArcSet::interval(big(0, 1), big(1, 3)).unwrap();
        assert_eq!(
            rigidity_force_containment(&other, &q(), &q(), &q()).unwrap_err(),
            RigidityError::NotAlmostEqual(PairSide::A)
        );
        let holed = q().with_points([], [big(1, 8)]).unwrap();
        assert_eq!(
            rigidity_force_containment(&q(), &q(), &holed, &q()).unwrap_err(),
            RigidityError::NotRegular(PairSide::A)
        );
        let long = ArcSet::interval(big(0, 1), big(3, 5)).unwrap();
        assert!(matches!(
            rigidity_force_containment(&long, &long, &long, &long).unwrap_err(),
            RigidityError::NotCritical { pair: 2, .. }
        ));
        // m(I + J) = 1/2 but m(I) + m(J) = 3/8
        let two = ArcSet::interval(big(0, 1), big(1, 8))
            .unwrap()
            .union(&ArcSet::interval(big(1, 2), big(5, 8)).unwrap())
            .unwrap();
        let h = ArcSet::interval(big(0, 1), big(1, 8)).unwrap();
        assert!(matches!(
            rigidity_force_containment(&two, &h, &two, &h).unwrap_err(),
            RigidityError::NotCritical { pair: 2, .. }
        ));
        // periodic pairs (I, I) are critical and stable
        assert!(rigidity_force_containment(&two, &two, &two, &two).unwrap().contained);
    }

    #[test]
    fn twisted_rigidity() {
        let i = TwistedSet::tilde(&ArcSet::symmetric(&big(1, 8)).unwrap());
        let holed = TwistedSet::new(i.plus.clone().with_points([], [big(0, 1)]).unwrap(), i.minus.clone());
        let out = rigidity_force_containment(&holed, &i, &i, &i).unwrap();
        assert!(out.contained);
        let extra = TwistedSet::new(i.plus.clone(), i.minus.clone().with_points([big(1, 2)], []).unwrap());
        assert!(matches!(
            rigidity_force_containment(&extra, &i, &i, &i),
            Err(RigidityError::NotCritical { pair: 1, .. })
        ));
    }
}
