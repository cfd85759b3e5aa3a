//! Sturmian pairs on the circle and the twisted torus.

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::arc::ArcSet;
use super::twisted::{TwistedElem, TwistedSet};
use super::TorusError;
use crate::rational::{big, fmt_big, frac, serde_big, BigQ};
use crate::reduction::{DiscreteSturmianSpec, ModelKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SturmianTarget {
    Plain,
    Twisted,
}

/// Symmetric closed arcs `I`, `J` of the given half-lengths and shifts.
/// For the plain target only the `u` coordinates of the shifts are used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SturmianSpec {
    pub target: SturmianTarget,
    #[serde(with = "serde_big")]
    pub half_length_i: BigQ,
    #[serde(with = "serde_big")]
    pub half_length_j: BigQ,
    pub shift_s: TwistedElem,
    pub shift_t: TwistedElem,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SturmianPair {
    Plain(ArcSet, ArcSet),
    Twisted(TwistedSet, TwistedSet),
}

impl SturmianSpec {
    pub fn plain(hi: BigQ, hj: BigQ, s: BigQ, t: BigQ) -> Self {
        SturmianSpec {
            target: SturmianTarget::Plain,
            half_length_i: hi,
            half_length_j: hj,
            shift_s: TwistedElem::new(s, true),
            shift_t: TwistedElem::new(t, true),
        }
    }

    pub fn twisted(hi: BigQ, hj: BigQ, s: TwistedElem, t: TwistedElem) -> Self {
        SturmianSpec {
            target: SturmianTarget::Twisted,
            half_length_i: hi,
            half_length_j: hj,
            shift_s: s,
            shift_t: t,
        }
    }

    fn check(&self) -> Result<(), TorusError> {
        let half = big(1, 2);
        for h in [&self.half_length_i, &self.half_length_j] {
            if *h <= BigQ::zero() || *h > half {
                return Err(TorusError::BadSpec(format!("half-length {} not in (0, 1/2]", fmt_big(h))));
            }
        }
        let total = (&self.half_length_i + &self.half_length_j) * big(2, 1);
        if total >= big(1, 1) {
            return Err(TorusError::MeasureTooLarge(fmt_big(&total)));
        }
        Ok(())
    }
}

pub fn make_sturmian(spec: &SturmianSpec) -> Result<SturmianPair, TorusError> {
    spec.check()?;
    let i = ArcSet::symmetric(&spec.half_length_i)?;
    let j = ArcSet::symmetric(&spec.half_length_j)?;
    Ok(match spec.target {
        SturmianTarget::Plain => SturmianPair::Plain(i.translate(&spec.shift_s.u), j.translate(&spec.shift_t.u)),
        SturmianTarget::Twisted => SturmianPair::Twisted(
            TwistedSet::tilde(&i).translate_left(&spec.shift_s),
            TwistedSet::tilde(&j).translate_right(&spec.shift_t),
        ),
    })
}

fn floor_times(x: &BigQ, m: usize) -> usize {
    let v = x * BigQ::from_integer(m.into());
    v.numer().div_floor(v.denom()).to_usize().unwrap_or(0)
}

/// Rounds a spec down to the `m`-point model: `Z_m` for the plain target,
/// `D_m` for the twisted one.
pub fn discretize(spec: &SturmianSpec, m: usize) -> Result<DiscreteSturmianSpec, TorusError> {
    spec.check()?;
    let (kind, size_i, size_j) = match spec.target {
        SturmianTarget::Plain => (
            ModelKind::Cyclic,
            floor_times(&(&spec.half_length_i * big(2, 1)), m).max(1),
            floor_times(&(&spec.half_length_j * big(2, 1)), m).max(1),
        ),
        SturmianTarget::Twisted => (
            ModelKind::Dihedral,
            floor_times(&spec.half_length_i, m),
            floor_times(&spec.half_length_j, m),
        ),
    };
    let index = |x: &TwistedElem| {
        let k = floor_times(&frac(&x.u), m) % m;
        match spec.target {
            SturmianTarget::Plain => k,
            SturmianTarget::Twisted => 2 * k + usize::from(!x.plus),
        }
    };
    Ok(DiscreteSturmianSpec {
        kind,
        m,
        size_i,
        size_j,
        shift_s: index(&spec.shift_s),
        shift_t: index(&spec.shift_t),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::{arc_sumset, twisted_product};

    #[test]
    fn plain_fixtures() {
        let spec = SturmianSpec::plain(big(1, 8), big(1, 8), big(0, 1), big(0, 1));
        let SturmianPair::Plain(a, b) = make_sturmian(&spec).unwrap() else { panic!() };
        assert_eq!(a, ArcSet::interval(big(-1, 8), big(1, 8)).unwrap());
        assert_eq!(arc_sumset(&a, &b).unwrap().measure(), big(1, 2));

        let spec = SturmianSpec::plain(big(1, 8), big(1, 8), big(1, 3), big(1, 5));
        let SturmianPair::Plain(a, b) = make_sturmian(&spec).unwrap() else { panic!() };
        assert_eq!(arc_sumset(&a, &b).unwrap().measure(), a.measure() + b.measure());
    }

    #[test]
    fn twisted_fixture() {
        let s = TwistedElem::new(big(1, 3), false);
        let t = TwistedElem::new(big(1, 7), true);
        for (s, t) in [(TwistedElem::identity(), TwistedElem::identity()), (s, t)] {
            let spec = SturmianSpec::twisted(big(1, 8), big(1, 8), s, t);
            let SturmianPair::Twisted(a, b) = make_sturmian(&spec).unwrap() else { panic!() };
            assert_eq!(twisted_product(&a, &b).unwrap().measure(), big(1, 2));
            assert_eq!(a.measure() + b.measure(), big(1, 2));
        }
    }

    #[test]
    fn oversized_rejected() {
        let spec = SturmianSpec::plain(big(1, 4), big(1, 4), big(0, 1), big(0, 1));
        assert!(matches!(make_sturmian(&spec), Err(TorusError::MeasureTooLarge(_))));
        let spec = SturmianSpec::plain(big(0, 1), big(1, 4), big(0, 1), big(0, 1));
        assert!(matches!(make_sturmian(&spec), Err(TorusError::BadSpec(_))));
    }

    #[test]
    fn discretize_rounds_down() {
        let spec = SturmianSpec::plain(big(1, 8), big(1, 5), big(1, 3), big(1, 2));
        let d = discretize(&spec, 10).unwrap();
        assert_eq!((d.kind, d.size_i, d.size_j, d.shift_s, d.shift_t), (ModelKind::Cyclic, 2, 4, 3, 5));
        let spec = SturmianSpec::twisted(
            big(1, 8),
            big(1, 5),
            TwistedElem::new(big(1, 3), false),
            TwistedElem::identity(),
        );
        let d = discretize(&spec, 10).unwrap();
        assert_eq!((d.kind, d.size_i, d.size_j, d.shift_s, d.shift_t), (ModelKind::Dihedral, 1, 2, 7, 0));
    }
}
