//! Slices along a normal subgroup, criticality with respect to it, and the
//! balanced-set machinery used to pass to a subgroup.
//!
//! The finite model uses counting measure, so every "for almost all" and
//! every conull set is taken to be the full set.

use serde::Serialize;

use crate::bits::Bits;
use crate::group::{GroupError, GroupRef};
use crate::hom::Homomorphism;
use crate::rational::{serde_q, Q};
use crate::subgroup::{quotient, subgroups, Subgroup};
use crate::subset::{classify_pair, product_set, GroupSubset, PairTag, Side, SubsetError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RelativeError {
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroup belongs to a different group")]
    ParentMismatch,
    #[error("{0:?} set does not meet the subgroup")]
    NotBalanced(Side),
    #[error("pair is {0}, expected critical_sum")]
    NotCriticalSum(&'static str),
    #[error("chain is not decreasing at position {0}")]
    NotDecreasing(usize),
    #[error("empty chain")]
    EmptyChain,
    #[error("conclusion fails: {0}")]
    ConclusionFails(String),
    #[error(transparent)]
    Subset(#[from] SubsetError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

fn q(n: usize, d: usize) -> Q {
    Q::new(n as i64, d as i64)
}

fn check_normal(a: &GroupSubset, n: &Subgroup) -> Result<(), RelativeError> {
    if !a.group().same_as(n.parent()) {
        return Err(RelativeError::ParentMismatch);
    }
    if !n.is_normal() {
        return Err(RelativeError::NotNormal);
    }
    Ok(())
}

/// Embeds a subset of `G` contained in `N` into `N` viewed as a group.
fn restrict(set: &Bits, embed: &[usize], group: &GroupRef) -> GroupSubset {
    let bits = Bits::from_indices(embed.len(), (0..embed.len()).filter(|&i| set.contains(embed[i])));
    GroupSubset::new(group.clone(), bits).expect("length matches")
}

/// `x⁻¹A ∩ N` (left) or `Ax⁻¹ ∩ N` (right), as a subset of `N`.
fn slice_bits(a: &GroupSubset, n: &Subgroup, x: usize, side: Side) -> Bits {
    let g = a.group();
    let xi = g.inv(x);
    Bits::from_indices(
        g.order(),
        a.iter()
            .map(|y| match side {
                Side::Left => g.mul(xi, y),
                Side::Right => g.mul(y, xi),
            })
            .filter(|&z| n.contains(z)),
    )
}

pub fn slice(a: &GroupSubset, n: &Subgroup, x: usize, side: Side) -> Result<GroupSubset, RelativeError> {
    check_normal(a, n)?;
    let (ng, embed) = n.to_group();
    Ok(restrict(&slice_bits(a, n, x, side), &embed, &ng))
}

/// Left slices of a set at each coset representative of `N`.
#[derive(Debug, Clone)]
pub struct SliceView {
    pub group: GroupRef,
    pub normal: Subgroup,
    /// `N` as a group, with `embed[i]` its `i`-th element in `G`.
    pub normal_group: GroupRef,
    pub embed: Vec<usize>,
    pub coset_reps: Vec<usize>,
    pub slices: Vec<GroupSubset>,
}

impl SliceView {
    /// `m_N(A_x)` for the `i`-th coset.
    pub fn slice_measure(&self, i: usize) -> Q {
        q(self.slices[i].len(), self.normal.order())
    }

    /// `(1/[G:N]) Σ m_N(A_x)`.
    pub fn integral(&self) -> Q {
        let total: Q = (0..self.slices.len()).map(|i| self.slice_measure(i)).sum();
        total / Q::from_integer(self.slices.len() as i64)
    }
}

pub fn disintegrate(a: &GroupSubset, n: &Subgroup) -> Result<SliceView, RelativeError> {
    check_normal(a, n)?;
    let (ng, embed) = n.to_group();
    let coset_reps = n.coset_representatives();
    let slices = coset_reps
        .iter()
        .map(|&x| restrict(&slice_bits(a, n, x, Side::Left), &embed, &ng))
        .collect();
    Ok(SliceView {
        group: a.group().clone(),
        normal: n.clone(),
        normal_group: ng,
        embed,
        coset_reps,
        slices,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub x: usize,
    pub y: usize,
    #[serde(with = "serde_q")]
    pub m_a_x: Q,
    #[serde(with = "serde_q")]
    pub m_b_y: Q,
    #[serde(with = "serde_q")]
    pub m_ab_xy: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalityWitness {
    pub holds: bool,
    #[serde(with = "serde_q")]
    pub slice_measure_a: Q,
    #[serde(with = "serde_q")]
    pub slice_measure_b: Q,
    pub violating_pair: Option<Violation>,
}

/// Checks `m_N(A_x) = m_G(A)`, `m_N(B^y) = m_G(B)` and
/// `m_N((AB)_{xy}) = m_N(A_x) + m_N(B^y)` over all pairs of cosets.
/// The first failing pair, in coset-representative order, is reported.
pub fn is_critical_wrt(a: &GroupSubset, b: &GroupSubset, n: &Subgroup) -> Result<CriticalityWitness, RelativeError> {
    check_normal(a, n)?;
    check_normal(b, n)?;
    if a.is_empty() || b.is_empty() {
        return Err(SubsetError::Empty.into());
    }
    let g = a.group();
    let ab = product_set(a, b)?;
    let reps = n.coset_representatives();
    let order = n.order();
    let count = |set: &GroupSubset, x: usize| set.bits().count_intersection(&n.right_coset(x));
    let m_a = q(a.len(), g.order());
    let m_b = q(b.len(), g.order());
    let mut violating_pair = None;
    'outer: for &x in &reps {
        let m_a_x = q(count(a, x), order);
        for &y in &reps {
            let m_b_y = q(count(b, y), order);
            let m_ab_xy = q(count(&ab, g.mul(x, y)), order);
            if m_a_x != m_a || m_b_y != m_b || m_ab_xy != m_a_x + m_b_y {
                violating_pair = Some(Violation { x, y, m_a_x, m_b_y, m_ab_xy });
                break 'outer;
            }
        }
    }
    Ok(CriticalityWitness {
        holds: violating_pair.is_none(),
        slice_measure_a: m_a,
        slice_measure_b: m_b,
        violating_pair,
    })
}

/// `A⁺`: the cosets of `U` that meet `A`, inside `G/U`.
#[derive(Debug, Clone)]
pub struct SupportSet {
    pub quotient: GroupRef,
    pub projection: Homomorphism,
    pub elements: GroupSubset,
}

pub fn support(a: &GroupSubset, u: &Subgroup) -> Result<SupportSet, RelativeError> {
    check_normal(a, u)?;
    let (quotient, projection) = quotient(u)?;
    let elements = GroupSubset::new(quotient.clone(), projection.image_of(a.bits()))?;
    Ok(SupportSet {
        quotient,
        projection,
        elements,
    })
}

/// `e ∈ A⁺`. Every nonempty slice has positive counting measure, so the
/// second half of the continuous definition holds automatically.
pub fn is_balanced(a: &GroupSubset, u: &Subgroup) -> Result<bool, RelativeError> {
    check_normal(a, u)?;
    Ok(a.bits().intersects(u.members()))
}

/// A pair of translated slices `(x⁻¹A ∩ U, By⁻¹ ∩ U)` that is sub-critical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalWitness {
    pub subgroup: Subgroup,
    pub x: usize,
    pub y: usize,
    /// The slices as subsets of `G`.
    pub slice_a: Bits,
    pub slice_b: Bits,
    pub product_len: usize,
}

/// Slices are compared with `m_G`: the pair is sub-critical when
/// `|PQ| < min(|G|, |P| + |Q|)`.
fn subcritical_slices(a: &GroupSubset, b: &GroupSubset, u: &Subgroup) -> Option<LocalWitness> {
    let g = a.group();
    // left cosets xU carry the A-slices, right cosets Uy the B-slices
    let right_reps = u.coset_representatives();
    let mut left_reps: Vec<usize> = right_reps.iter().map(|&r| g.inv(r)).collect();
    left_reps.sort_unstable();
    for &x in &left_reps {
        let p = slice_bits(a, u, x, Side::Left);
        if p.is_empty() {
            continue;
        }
        for &y in &right_reps {
            let qb = slice_bits(b, u, y, Side::Right);
            if qb.is_empty() {
                continue;
            }
            let mut pq = Bits::new(g.order());
            for s in p.iter() {
                for t in qb.iter() {
                    pq.insert(g.mul(s, t));
                }
            }
            let len = pq.count();
            if len < g.order().min(p.count() + qb.count()) {
                return Some(LocalWitness {
                    subgroup: u.clone(),
                    x,
                    y,
                    slice_a: p,
                    slice_b: qb,
                    product_len: len,
                });
            }
        }
    }
    None
}

/// First sub-critical slice pair over proper nontrivial subgroups `U`, largest
/// first, then coset representatives ascending. Only normal subgroups are
/// searched unless `widen` is set.
pub fn detect_local_subcritical(a: &GroupSubset, b: &GroupSubset, widen: bool) -> Option<LocalWitness> {
    let mut candidates = subgroups(a.group(), !widen);
    candidates.retain(|u| !u.is_trivial() && !u.is_whole());
    candidates.reverse();
    candidates.iter().find_map(|u| subcritical_slices(a, b, u))
}

#[derive(Debug, Clone)]
pub enum RelativeOutcome {
    LocallySubcritical(LocalWitness),
    CriticalWrtUInL {
        l: Subgroup,
        support: SupportSet,
        /// Criticality of `(A, B)` with respect to `U`, computed inside `L`.
        witness: CriticalityWitness,
    },
}

/// For a `U`-balanced critical pair, either a sub-critical slice pair inside
/// `U`, or `L = π⁻¹(A⁺)` after checking that `A⁺ = B⁺` is a subgroup of
/// `G/U` and all nonempty slices have measure `m_G(A)/|A⁺|`.
pub fn relativize(a: &GroupSubset, b: &GroupSubset, u: &Subgroup) -> Result<RelativeOutcome, RelativeError> {
    check_normal(a, u)?;
    check_normal(b, u)?;
    for (set, side) in [(a, Side::Left), (b, Side::Right)] {
        if !is_balanced(set, u)? {
            return Err(RelativeError::NotBalanced(side));
        }
    }
    let class = classify_pair(a, b)?;
    if class.tag != PairTag::CriticalSum {
        return Err(RelativeError::NotCriticalSum(class.tag.as_str()));
    }
    if let Some(w) = subcritical_slices(a, b, u) {
        return Ok(RelativeOutcome::LocallySubcritical(w));
    }
    let sa = support(a, u)?;
    let sb = support(b, u)?;
    if sa.elements.bits() != sb.elements.bits() {
        return Err(RelativeError::ConclusionFails(format!(
            "A+ = {} but B+ = {}",
            sa.elements.to_literal(),
            sb.elements.to_literal()
        )));
    }
    let l_bits = sa.projection.preimage_of(sa.elements.bits());
    let l = Subgroup::new(a.group().clone(), l_bits)
        .map_err(|_| RelativeError::ConclusionFails(format!("A+ = {} is not a subgroup", sa.elements.to_literal())))?;
    let k = sa.elements.len();
    let g = a.group();
    for (set, name) in [(a, "A"), (b, "B")] {
        let expected = q(set.len(), g.order()) / Q::from_integer(k as i64);
        for x in u.coset_representatives() {
            let c = set.bits().count_intersection(&u.right_coset(x));
            if c > 0 && q(c, g.order()) != expected {
                return Err(RelativeError::ConclusionFails(format!(
                    "m_G({name} ∩ U{}) = {}/{}, expected {}",
                    g.label(x),
                    c,
                    g.order(),
                    expected
                )));
            }
        }
    }
    let (lg, embed) = l.to_group();
    let a_l = restrict(a.bits(), &embed, &lg);
    let b_l = restrict(b.bits(), &embed, &lg);
    let u_l = Subgroup::new(lg.clone(), Bits::from_indices(embed.len(), (0..embed.len()).filter(|&i| u.contains(embed[i]))))?;
    let witness = is_critical_wrt(&a_l, &b_l, &u_l)?;
    Ok(RelativeOutcome::CriticalWrtUInL {
        l,
        support: sa,
        witness,
    })
}

#[derive(Debug, Clone)]
pub struct ChainOutcome {
    pub levels: Vec<CriticalityWitness>,
    pub intersection: Subgroup,
    pub at_intersection: CriticalityWitness,
    /// Criticality at every level.
    pub all_hold: bool,
    /// Criticality at every level implies criticality at the intersection.
    pub implication_holds: bool,
}

/// Finite chains stabilize, so the limit argument is replaced by checking
/// every level and the intersection directly.
pub fn check_chain_criticality(a: &GroupSubset, b: &GroupSubset, chain: &[Subgroup]) -> Result<ChainOutcome, RelativeError> {
    let first = chain.first().ok_or(RelativeError::EmptyChain)?;
    for (i, w) in chain.windows(2).enumerate() {
        if !w[1].is_subgroup_of(&w[0]) {
            return Err(RelativeError::NotDecreasing(i + 1));
        }
    }
    let levels = chain
        .iter()
        .map(|n| is_critical_wrt(a, b, n))
        .collect::<Result<Vec<_>, _>>()?;
    let mut intersection = first.clone();
    for n in &chain[1..] {
        intersection = intersection.intersection(n)?;
    }
    let at_intersection = is_critical_wrt(a, b, &intersection)?;
    let all_hold = levels.iter().all(|w| w.holds);
    Ok(ChainOutcome {
        implication_holds: !all_hold || at_intersection.holds,
        levels,
        intersection,
        at_intersection,
        all_hold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::parse_group;
    use std::sync::Arc;

    fn grp(s: &str) -> GroupRef {
        Arc::new(parse_group(s).unwrap())
    }

    fn set(g: &GroupRef, lit: &str) -> GroupSubset {
        GroupSubset::parse(g.clone(), lit).unwrap()
    }

    fn sub(g: &GroupRef, lit: &str) -> Subgroup {
        Subgroup::new(g.clone(), set(g, lit).into_bits()).unwrap()
    }

    fn z2z6() -> (GroupRef, GroupSubset, GroupSubset, Subgroup) {
        let g = grp("Z2xZ6");
        let a = set(&g, "(0,0),(0,1),(1,3),(1,4)");
        let b = set(&g, "(0,0),(0,3),(1,0),(1,3)");
        let n = sub(&g, "(0,0),(0,1),(0,2),(0,3),(0,4),(0,5)");
        (g, a, b, n)
    }

    #[test]
    fn slice_fixtures() {
        let (g, a, _, n) = z2z6();
        let x = g.element("(1,0)").unwrap();
        assert_eq!(slice(&a, &n, x, Side::Left).unwrap().labels(), ["(0,3)", "(0,4)"]);
        assert_eq!(slice(&a, &n, 0, Side::Left).unwrap().labels(), ["(0,0)", "(0,1)"]);
        let in_n = set(&g, "(0,0)");
        assert!(slice(&in_n, &n, x, Side::Left).unwrap().is_empty());
    }

    #[test]
    fn disintegration_fixtures() {
        let (g, a, _, n) = z2z6();
        let v = disintegrate(&a, &n).unwrap();
        assert_eq!(v.slices.len(), 2);
        assert_eq!(v.slice_measure(0), Q::new(1, 3));
        assert_eq!(v.slice_measure(1), Q::new(1, 3));
        assert_eq!(v.integral(), Q::new(1, 3));
        let v = disintegrate(&GroupSubset::of_subgroup(&n), &n).unwrap();
        assert!(v.slices[0].len() == 6 && v.slices[1].is_empty());
        let v = disintegrate(&GroupSubset::full(g), &n).unwrap();
        assert!(v.slices.iter().all(|s| s.len() == 6));
    }

    #[test]
    fn critical_wrt_fixtures() {
        let (g, a, b, n) = z2z6();
        let w = is_critical_wrt(&a, &b, &n).unwrap();
        assert!(w.holds);
        assert_eq!((w.slice_measure_a, w.slice_measure_b), (Q::new(1, 3), Q::new(1, 3)));
        assert!(!is_critical_wrt(&a, &b, &Subgroup::trivial(g.clone())).unwrap().holds);
        // N = G: the plain measure identity
        assert!(is_critical_wrt(&a, &b, &Subgroup::whole(g.clone())).unwrap().holds);
        let c = set(&g, "(0,0),(0,1)");
        assert!(!is_critical_wrt(&c, &c, &Subgroup::whole(g)).unwrap().holds);
    }

    #[test]
    fn support_and_balance() {
        let g = grp("Z6");
        let u = sub(&g, "0,3");
        let s = support(&set(&g, "0,1"), &u).unwrap();
        assert_eq!(s.elements.len(), 2);
        assert_eq!(s.elements.labels(), ["0", "1"]);
        assert_eq!(support(&set(&g, "0,3"), &u).unwrap().elements.len(), 1);
        assert_eq!(support(&GroupSubset::full(g.clone()), &u).unwrap().elements.len(), 3);
        assert!(is_balanced(&set(&g, "0,1"), &u).unwrap());
        assert!(!is_balanced(&set(&g, "1,4"), &u).unwrap());
        assert!(is_balanced(&set(&g, "0,3"), &u).unwrap());
        let s3 = grp("D3");
        let h = sub(&s3, "(0,0),(0,1)");
        assert_eq!(support(&set(&s3, "(0,0)"), &h).unwrap_err(), RelativeError::NotNormal);
    }

    #[test]
    fn local_subcritical_fixtures() {
        let g = grp("Z4");
        let w = detect_local_subcritical(&set(&g, "0"), &set(&g, "0"), false).unwrap();
        assert_eq!(w.subgroup, sub(&g, "0,2"));
        assert_eq!((w.x, w.y), (0, 0));

        let g = grp("Z6");
        let w = detect_local_subcritical(&set(&g, "0,1"), &set(&g, "0,3"), false).unwrap();
        assert_eq!(w.subgroup, sub(&g, "0,2,4"));
        assert_eq!((w.slice_a.count(), w.slice_b.count(), w.product_len), (1, 1, 1));

        for p in ["Z5", "Z7"] {
            let g = grp(p);
            assert!(detect_local_subcritical(&set(&g, "0,1"), &set(&g, "0,2"), false).is_none());
        }
    }

    #[test]
    fn widen_searches_non_normal_subgroups() {
        let g = grp("D3");
        let a = set(&g, "(0,0)");
        let w = detect_local_subcritical(&a, &a, false).unwrap();
        assert_eq!(w.subgroup.order(), 3);
        let w = detect_local_subcritical(&a, &a, true).unwrap();
        assert_eq!(w.subgroup.order(), 3);
        let a = set(&g, "(0,0),(0,1)");
        let b = set(&g, "(0,0),(2,0)");
        assert!(detect_local_subcritical(&a, &b, true).is_some());
    }

    #[test]
    fn relativize_fixtures() {
        let g = grp("Z6");
        let u = sub(&g, "0,3");
        let out = relativize(&set(&g, "0,1"), &set(&g, "0,3"), &u).unwrap();
        assert!(matches!(out, RelativeOutcome::LocallySubcritical(_)));

        let (g, a, b, n) = z2z6();
        match relativize(&a, &b, &n).unwrap() {
            RelativeOutcome::CriticalWrtUInL { l, witness, support } => {
                assert!(l.is_whole());
                assert!(witness.holds);
                assert_eq!(support.elements.len(), 2);
            }
            other => panic!("{other:?}"),
        }

        let g6 = grp("Z6");
        let u = sub(&g6, "0,2,4");
        let a = set(&g6, "0,2");
        match relativize(&a, &a, &u) {
            Err(RelativeError::NotCriticalSum(_)) => {}
            other => panic!("{other:?}"),
        }
        let _ = g;
    }

    #[test]
    fn relativize_inside_u() {
        // A, B ⊆ U with |AB| = |A| + |B|
        let g = grp("Z2xZ6");
        let u = sub(&g, "(0,0),(0,1),(0,2),(0,3),(0,4),(0,5)");
        let a = set(&g, "(0,0),(0,3)");
        let b = set(&g, "(0,0),(0,1)");
        let out = relativize(&a, &b, &u).unwrap();
        match out {
            RelativeOutcome::CriticalWrtUInL { l, witness, .. } => {
                assert_eq!(l, u);
                assert!(witness.holds);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn chain_fixtures() {
        let (g, a, b, n) = z2z6();
        let whole = Subgroup::whole(g.clone());
        let out = check_chain_criticality(&a, &b, &[whole.clone()]).unwrap();
        assert_eq!(out.levels[0], is_critical_wrt(&a, &b, &whole).unwrap());
        let out = check_chain_criticality(&a, &b, &[whole.clone(), n.clone()]).unwrap();
        assert!(out.all_hold && out.implication_holds);
        assert_eq!(out.intersection, n);
        let out = check_chain_criticality(&a, &b, &[whole.clone(), n.clone(), Subgroup::trivial(g.clone())]).unwrap();
        assert!(!out.all_hold);
        assert_eq!(
            check_chain_criticality(&a, &b, &[n, whole]).unwrap_err(),
            RelativeError::NotDecreasing(1)
        );
    }
}
