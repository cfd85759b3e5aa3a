//! Closed rational arcs on the circle `Q/Z` and finite unions of them.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::TorusError;
use crate::rational::{fmt_big, frac, serde_big, BigQ};

/// The closed arc `[start, start + length]` modulo 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Arc {
    #[serde(with = "serde_big")]
    start: BigQ,
    #[serde(with = "serde_big")]
    length: BigQ,
}

impl Arc {
    pub fn new(start: BigQ, length: BigQ) -> Result<Self, TorusError> {
        if length < BigQ::zero() || length > BigQ::one() {
            return Err(TorusError::InvalidArc(format!("length {} outside [0,1]", fmt_big(&length))));
        }
        let start = if length.is_one() { BigQ::zero() } else { frac(&start) };
        Ok(Arc { start, length })
    }

    /// `[lo, hi]` with `0 <= hi - lo <= 1`.
    pub fn between(lo: BigQ, hi: BigQ) -> Result<Self, TorusError> {
        let len = &hi - &lo;
        Arc::new(lo, len)
    }

    pub fn full() -> Self {
        Arc {
            start: BigQ::zero(),
            length: BigQ::one(),
        }
    }

    pub fn start(&self) -> &BigQ {
        &self.start
    }

    pub fn length(&self) -> &BigQ {
        &self.length
    }

    pub fn end(&self) -> BigQ {
        &self.start + &self.length
    }

    pub fn is_full(&self) -> bool {
        self.length.is_one()
    }

    pub fn is_point(&self) -> bool {
        self.length.is_zero()
    }

    pub fn contains(&self, x: &BigQ) -> bool {
        frac(&(x - &self.start)) <= self.length
    }

    pub fn translate(&self, x: &BigQ) -> Arc {
        Arc::new(&self.start + x, self.length.clone()).expect("same length")
    }

    pub fn negate(&self) -> Arc {
        Arc::new(-self.end(), self.length.clone()).expect("same length")
    }

    /// Pieces on `[0, 1]`: one, or two if the arc wraps past 1.
    fn unroll(&self, out: &mut Vec<(BigQ, BigQ)>) {
        let end = self.end();
        if end <= BigQ::one() {
            out.push((self.start.clone(), end));
        } else {
            out.push((self.start.clone(), BigQ::one()));
            out.push((BigQ::zero(), end - BigQ::one()));
        }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_big(&self.start), fmt_big(&self.end()))
    }
}

/// Canonical arcs from closed pieces of `[0, 1]`: merged when overlapping
/// or touching, with the piece ending at 1 joined to the piece starting at 0.
fn canonical(mut pieces: Vec<(BigQ, BigQ)>) -> Vec<Arc> {
    if pieces.is_empty() {
        return Vec::new();
    }
    pieces.sort();
    let mut merged: Vec<(BigQ, BigQ)> = Vec::with_capacity(pieces.len());
    for (lo, hi) in pieces {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => {
                if hi > last.1 {
                    last.1 = hi;
                }
            }
            _ => merged.push((lo, hi)),
        }
    }
    let one = BigQ::one();
    if merged.len() == 1 && merged[0].0.is_zero() && merged[0].1 == one {
        return vec![Arc::full()];
    }
    let mut arcs: Vec<Arc> = Vec::with_capacity(merged.len());
    let wraps = merged.len() > 1 && merged[0].0.is_zero() && merged[merged.len() - 1].1 == one;
    let (first, rest) = if wraps {
        let first = merged.remove(0);
        (Some(first), merged)
    } else {
        (None, merged)
    };
    let n = rest.len();
    for (i, (lo, hi)) in rest.into_iter().enumerate() {
        if i + 1 == n {
            if let Some((_, fhi)) = &first {
                let len = (&one - &lo) + fhi;
                arcs.push(Arc::new(lo, len).expect("joined arc is shorter than the circle"));
                continue;
            }
        }
        let len = &hi - &lo;
        arcs.push(Arc { start: lo, length: len });
    }
    // a joined arc starting near 1 sorts last already; keep starts ascending
    arcs.sort();
    arcs
}

fn pieces_of(arcs: &[Arc]) -> Vec<(BigQ, BigQ)> {
    let mut out = Vec::with_capacity(arcs.len() + 1);
    for a in arcs {
        a.unroll(&mut out);
    }
    out
}

/// A finite union of closed arcs, changed on finitely many points.
///
/// `added` points lie outside the arcs and `removed` points inside; neither
/// affects the measure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ArcSet {
    arcs: Vec<Arc>,
    added: BTreeSet<BigQ>,
    removed: BTreeSet<BigQ>,
}

impl ArcSet {
    pub fn empty() -> Self {
        ArcSet::default()
    }

    pub fn full() -> Self {
        ArcSet::from_arcs(vec![Arc::full()])
    }

    pub fn from_arcs(arcs: Vec<Arc>) -> Self {
        ArcSet {
            arcs: canonical(pieces_of(&arcs)),
            added: BTreeSet::new(),
            removed: BTreeSet::new(),
        }
    }

    pub fn arc(start: BigQ, length: BigQ) -> Result<Self, TorusError> {
        Ok(ArcSet::from_arcs(vec![Arc::new(start, length)?]))
    }

    /// `[lo, hi]`.
    pub fn interval(lo: BigQ, hi: BigQ) -> Result<Self, TorusError> {
        Ok(ArcSet::from_arcs(vec![Arc::between(lo, hi)?]))
    }

    /// `[-h, h]`.
    pub fn symmetric(half: &BigQ) -> Result<Self, TorusError> {
        ArcSet::interval(-half.clone(), half.clone())
    }

    /// A single point as a degenerate arc.
    pub fn point(x: BigQ) -> Self {
        ArcSet::from_arcs(vec![Arc::new(x, BigQ::zero()).expect("zero length")])
    }

    /// Adds point corrections; points are reduced mod 1.
    pub fn with_points<I, J>(mut self, added: I, removed: J) -> Result<Self, TorusError>
    where
        I: IntoIterator<Item = BigQ>,
        J: IntoIterator<Item = BigQ>,
    {
        for p in added {
            let p = frac(&p);
            if self.in_arcs(&p) {
                return Err(TorusError::AddedInsideArc(fmt_big(&p)));
            }
            self.added.insert(p);
        }
        for p in removed {
            let p = frac(&p);
            if !self.in_arcs(&p) {
                return Err(TorusError::RemovedOutsideArc(fmt_big(&p)));
            }
            self.removed.insert(p);
        }
        Ok(self)
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn added(&self) -> &BTreeSet<BigQ> {
        &self.added
    }

    pub fn removed(&self) -> &BTreeSet<BigQ> {
        &self.removed
    }

    pub fn has_corrections(&self) -> bool {
        !self.added.is_empty() || !self.removed.is_empty()
    }

    pub(crate) fn require_plain(&self) -> Result<(), TorusError> {
        if self.has_corrections() {
            Err(TorusError::PointCorrections)
        } else {
            Ok(())
        }
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty() && self.added.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].is_full()
    }

    /// Total arc length; point corrections are null.
    pub fn measure(&self) -> BigQ {
        self.arcs.iter().fold(BigQ::zero(), |acc, a| acc + a.length())
    }

    /// Membership in the closed arcs, ignoring corrections.
    pub fn in_arcs(&self, x: &BigQ) -> bool {
        self.arcs.iter().any(|a| a.contains(x))
    }

    /// Pointwise membership, corrections included.
    pub fn contains(&self, x: &BigQ) -> bool {
        let x = frac(x);
        self.added.contains(&x) || (self.in_arcs(&x) && !self.removed.contains(&x))
    }

    pub fn translate(&self, x: &BigQ) -> ArcSet {
        ArcSet {
            arcs: canonical(pieces_of(&self.arcs.iter().map(|a| a.translate(x)).collect::<Vec<_>>())),
            added: self.added.iter().map(|p| frac(&(p + x))).collect(),
            removed: self.removed.iter().map(|p| frac(&(p + x))).collect(),
        }
    }

    pub fn negate(&self) -> ArcSet {
        ArcSet {
            arcs: canonical(pieces_of(&self.arcs.iter().map(Arc::negate).collect::<Vec<_>>())),
            added: self.added.iter().map(|p| frac(&-p)).collect(),
            removed: self.removed.iter().map(|p| frac(&-p)).collect(),
        }
    }

    /// Union of the arcs of two point-free sets.
    pub fn union(&self, other: &ArcSet) -> Result<ArcSet, TorusError> {
        self.require_plain()?;
        other.require_plain()?;
        let mut arcs = self.arcs.clone();
        arcs.extend(other.arcs.iter().cloned());
        Ok(ArcSet::from_arcs(arcs))
    }

    /// Intersection of the closed arcs of two point-free sets.
    pub fn intersection(&self, other: &ArcSet) -> Result<ArcSet, TorusError> {
        self.require_plain()?;
        other.require_plain()?;
        let (p, q) = (pieces_of(&self.arcs), pieces_of(&other.arcs));
        let mut out = Vec::new();
        for (a, b) in &p {
            for (c, d) in &q {
                let lo = if a > c { a } else { c };
                let hi = if b < d { b } else { d };
                if lo <= hi {
                    out.push((lo.clone(), hi.clone()));
                }
            }
        }
        Ok(ArcSet {
            arcs: canonical(out),
            ..ArcSet::default()
        })
    }

    /// Arcs of positive length only, corrections dropped: the regular part.
    pub fn positive_part(&self) -> ArcSet {
        ArcSet {
            arcs: self.arcs.iter().filter(|a| !a.is_point()).cloned().collect(),
            ..ArcSet::default()
        }
    }

    /// The closure of the set as point-free arcs: positive arcs, degenerate
    /// arcs not removed, and added points as degenerate arcs.
    pub fn closed_support(&self) -> ArcSet {
        let mut arcs: Vec<Arc> = self
            .arcs
            .iter()
            .filter(|a| !a.is_point() || !self.removed.contains(a.start()))
            .cloned()
            .collect();
        arcs.extend(self.added.iter().map(|p| Arc::new(p.clone(), BigQ::zero()).expect("zero length")));
        ArcSet::from_arcs(arcs)
    }

    /// Equal to the closure of its interior: no corrections, no degenerate
    /// arcs.
    pub fn is_regular(&self) -> bool {
        !self.has_corrections() && self.arcs.iter().all(|a| !a.is_point())
    }

    /// Points where pointwise membership in `self` or `other` can change,
    /// plus one point inside each gap between them. Membership is constant
    /// on the open gaps, so these decide any pointwise comparison.
    pub(crate) fn breakpoints(sets: &[&ArcSet]) -> Vec<BigQ> {
        let mut pts: BTreeSet<BigQ> = BTreeSet::new();
        pts.insert(BigQ::zero());
        for s in sets {
            for a in &s.arcs {
                pts.insert(a.start().clone());
                pts.insert(frac(&a.end()));
            }
            pts.extend(s.added.iter().cloned());
            pts.extend(s.removed.iter().cloned());
        }
        let sorted: Vec<BigQ> = pts.into_iter().collect();
        let mut out = sorted.clone();
        let two = BigQ::from_integer(2.into());
        for w in sorted.windows(2) {
            out.push((&w[0] + &w[1]) / &two);
        }
        let last = sorted.last().expect("contains 0");
        out.push((last + BigQ::one()) / &two);
        out
    }

    /// A point of `self` outside `other`, if any.
    pub fn point_outside(&self, other: &ArcSet) -> Option<BigQ> {
        ArcSet::breakpoints(&[self, other])
            .into_iter()
            .find(|x| self.contains(x) && !other.contains(x))
    }

    pub fn is_subset_of(&self, other: &ArcSet) -> bool {
        self.point_outside(other).is_none()
    }
}

impl fmt::Display for ArcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arcs.is_empty() && self.added.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self.arcs.iter().map(|a| a.to_string()).collect();
        f.write_str(&parts.join(" ∪ "))?;
        for p in &self.added {
            write!(f, " +{{{}}}", fmt_big(p))?;
        }
        for p in &self.removed {
            write!(f, " -{{{}}}", fmt_big(p))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct ArcSetJson {
    arcs: Vec<Arc>,
    #[serde(default, with = "crate::rational::serde_big_vec")]
    added: Vec<BigQ>,
    #[serde(default, with = "crate::rational::serde_big_vec")]
    removed: Vec<BigQ>,
}

impl Serialize for ArcSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ArcSetJson {
            arcs: self.arcs.clone(),
            added: self.added.iter().cloned().collect(),
            removed: self.removed.iter().cloned().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ArcSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ArcSetJson::deserialize(d)?;
        let arcs = j
            .arcs
            .into_iter()
            .map(|a| Arc::new(a.start, a.length))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        ArcSet::from_arcs(arcs)
            .with_points(j.added, j.removed)
            .map_err(serde::de::Error::custom)
    }
}

/// `A + B` for point-free sets, canonicalized.
pub fn arc_sumset(a: &ArcSet, b: &ArcSet) -> Result<ArcSet, TorusError> {
    a.require_plain()?;
    b.require_plain()?;
    let mut arcs = Vec::with_capacity(a.arcs.len() * b.arcs.len());
    for x in &a.arcs {
        for y in &b.arcs {
            let len = x.length() + y.length();
            let len = if len > BigQ::one() { BigQ::one() } else { len };
            arcs.push(Arc::new(x.start() + y.start(), len)?);
        }
    }
    Ok(ArcSet::from_arcs(arcs))
}

pub fn arcset_measure(a: &ArcSet) -> BigQ {
    a.measure()
}

/// `{x : x + J ⊆ S}` for point-free sets.
///
/// A translate of a closed arc lies in `S` only if it lies in one component
/// of `S`, so each arc of `J` contributes a union of shorter arcs, one per
/// long enough component, and the results are intersected.
pub fn erosion(s: &ArcSet, j: &ArcSet) -> Result<ArcSet, TorusError> {
    s.require_plain()?;
    j.require_plain()?;
    let mut acc = ArcSet::full();
    for beta in j.arcs() {
        let part = if s.is_full() {
            ArcSet::full()
        } else if beta.is_full() {
            ArcSet::empty()
        } else {
            let arcs = s
                .arcs()
                .iter()
                .filter(|c| c.length() >= beta.length())
                .map(|c| Arc::new(c.start() - beta.start(), c.length() - beta.length()))
                .collect::<Result<Vec<_>, _>>()?;
            ArcSet::from_arcs(arcs)
        };
        acc = acc.intersection(&part)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::big;

    fn iv(lo: (i64, i64), hi: (i64, i64)) -> ArcSet {
        ArcSet::interval(big(lo.0, lo.1), big(hi.0, hi.1)).unwrap()
    }

    #[test]
    fn canonical_forms() {
        let a = ArcSet::from_arcs(vec![
            Arc::between(big(0, 1), big(1, 4)).unwrap(),
            Arc::between(big(1, 4), big(1, 2)).unwrap(),
        ]);
        assert_eq!(a, iv((0, 1), (1, 2)));
        let wrap = iv((3, 4), (5, 4));
        assert_eq!(wrap.arcs().len(), 1);
        assert_eq!(wrap.arcs()[0].start(), &big(3, 4));
        let joined = ArcSet::from_arcs(vec![
            Arc::between(big(0, 1), big(1, 8)).unwrap(),
            Arc::between(big(7, 8), big(1, 1)).unwrap(),
        ]);
        assert_eq!(joined, iv((-1, 8), (1, 8)));
        let full = ArcSet::from_arcs(vec![
            Arc::between(big(0, 1), big(1, 2)).unwrap(),
            Arc::between(big(1, 2), big(1, 1)).unwrap(),
        ]);
        assert!(full.is_full());
        assert_eq!(ArcSet::point(big(0, 1)).union(&iv((1, 2), (1, 1))).unwrap(), iv((1, 2), (1, 1)));
    }

    #[test]
    fn measure_fixtures() {
        let a = iv((0, 1), (1, 4)).union(&iv((1, 2), (3, 4))).unwrap();
        assert_eq!(a.measure(), big(1, 2));
        let punctured = ArcSet::full().with_points([], [big(1, 3)]).unwrap();
        assert_eq!(punctured.measure(), big(1, 1));
        let plus = iv((0, 1), (1, 3)).with_points([big(1, 2)], []).unwrap();
        assert_eq!(plus.measure(), big(1, 3));
    }

    #[test]
    fn sumset_fixtures() {
        let q = iv((0, 1), (1, 4));
        assert_eq!(arc_sumset(&q, &q).unwrap(), iv((0, 1), (1, 2)));
        let s = ArcSet::symmetric(&big(1, 8)).unwrap();
        assert_eq!(arc_sumset(&s, &s).unwrap(), ArcSet::symmetric(&big(1, 4)).unwrap());
        let long = ArcSet::arc(big(0, 1), big(3, 4)).unwrap();
        assert!(arc_sumset(&long, &long).unwrap().is_full());
        let bad = q.clone().with_points([big(1, 2)], []).unwrap();
        assert_eq!(arc_sumset(&bad, &q).unwrap_err(), TorusError::PointCorrections);
    }

    #[test]
    fn corrections_are_validated() {
        let q = iv((0, 1), (1, 4));
        assert!(matches!(q.clone().with_points([big(1, 8)], []), Err(TorusError::AddedInsideArc(_))));
        assert!(matches!(q.with_points([], [big(1, 2)]), Err(TorusError::RemovedOutsideArc(_))));
    }

    #[test]
    fn erosion_fixtures() {
        let s = iv((0, 1), (1, 2));
        let j = iv((0, 1), (1, 4));
        assert_eq!(erosion(&s, &j).unwrap(), iv((0, 1), (1, 4)));
        let two = iv((0, 1), (1, 4)).union(&iv((1, 2), (3, 4))).unwrap();
        let e = erosion(&two, &iv((0, 1), (1, 8))).unwrap();
        assert_eq!(e, iv((0, 1), (1, 8)).union(&iv((1, 2), (5, 8))).unwrap());
        assert!(erosion(&s, &ArcSet::empty()).unwrap().is_full());
    }

    #[test]
    fn pointwise_subset() {
        let q = iv((0, 1), (1, 4));
        let holed = q.clone().with_points([], [big(1, 8)]).unwrap();
        assert!(holed.is_subset_of(&q));
        assert_eq!(q.point_outside(&holed), Some(big(1, 8)));
        let plus = q.clone().with_points([big(1, 2)], []).unwrap();
        assert_eq!(plus.point_outside(&q), Some(big(1, 2)));
    }

    #[test]
    fn json_round_trip() {
        let a = iv((0, 1), (1, 4)).with_points([big(1, 2)], [big(1, 8)]).unwrap();
        let j = serde_json::to_value(&a).unwrap();
        assert_eq!(j["arcs"][0]["length"], "1/4");
        assert_eq!(j["added"][0], "1/2");
        let back: ArcSet = serde_json::from_value(j).unwrap();
        assert_eq!(back, a);
    }
}
