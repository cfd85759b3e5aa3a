//! Discrete sturmian pairs: pullbacks of interval pairs in `Z_m` or `D_m`.
//!
//! An interval in `Z_m` is a run `{0, 1, ..., len-1}`. In `D_m = Z_m ⋊ Z_2`
//! it is a symmetric run `{-r, ..., r}` crossed with both signs. Translates
//! `s'I` and `Jt'` give the other positions.

use std::sync::Arc;

use serde::Serialize;

use crate::bits::Bits;
use crate::group::{build_cyclic, build_dihedral, GroupError, GroupRef};
use crate::hom::{homomorphisms, Homomorphism};
use crate::rational::Q;
use crate::subset::{classify_pair, product_set, translate, GroupSubset, PairTag, Side};

pub const DEFAULT_STURMIAN_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SturmianError {
    #[error("pair is {0}, expected CriticalSum")]
    WrongClass(PairTag),
    #[error("search budget of {budget} candidates exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("invalid model: {0}")]
    BadModel(String),
    #[error("interval product fills the model group")]
    TooLarge,
    #[error("could not thin the pullback pair to a critical pair")]
    NotCriticalizable,
    #[error(transparent)]
    Subset(#[from] crate::subset::SubsetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Cyclic,
    Dihedral,
}

impl ModelKind {
    pub fn build(self, m: usize) -> Result<GroupRef, GroupError> {
        Ok(Arc::new(match self {
            ModelKind::Cyclic => build_cyclic(m)?,
            ModelKind::Dihedral => build_dihedral(m)?,
        }))
    }

    /// Interval sizes available in the model of parameter `m`: run lengths
    /// for `Z_m`, half-lengths for `D_m`.
    pub fn sizes(self, m: usize) -> Vec<usize> {
        match self {
            ModelKind::Cyclic => (1..m).collect(),
            ModelKind::Dihedral => (0..).take_while(|r| 2 * r + 1 <= m).collect(),
        }
    }
}

/// The interval at the origin with the given size parameter.
pub fn model_interval(kind: ModelKind, model: &GroupRef, size: usize) -> GroupSubset {
    let n = model.order();
    let bits = match kind {
        ModelKind::Cyclic => Bits::from_indices(n, 0..size.min(n)),
        ModelKind::Dihedral => {
            let m = n / 2;
            let mut bits = Bits::new(n);
            for d in 0..=size {
                for k in [d % m, (m - d % m) % m] {
                    bits.insert(2 * k);
                    bits.insert(2 * k + 1);
                }
            }
            bits
        }
    };
    GroupSubset::new(model.clone(), bits).expect("length matches")
}

#[derive(Debug, Clone)]
pub struct SturmianWitness {
    pub kind: ModelKind,
    pub m: usize,
    pub projection: Homomorphism,
    pub shift_s: usize,
    pub shift_t: usize,
    /// Size parameters of `I` and `J` (run length or half-length).
    pub size_i: usize,
    pub size_j: usize,
    /// `s'I` and `Jt'` in the model.
    pub image_i: GroupSubset,
    pub image_j: GroupSubset,
    pub m_i: Q,
    pub m_j: Q,
    pub m_ij: Q,
}

fn q(count: usize, order: usize) -> Q {
    Q::new(count as i64, order as i64)
}

/// Models searched, finest first: `Z_m` for `m ≥ 2` dividing `|G|` and `D_m`
/// for `m ≥ 3` with `2m` dividing `|G|`, by decreasing model order, cyclic
/// before dihedral.
pub fn candidate_models(order: usize) -> Vec<(ModelKind, usize)> {
    let mut out = Vec::new();
    for size in (2..=order).rev() {
        if order % size != 0 {
            continue;
        }
        out.push((ModelKind::Cyclic, size));
        if size % 2 == 0 && size / 2 >= 3 {
            out.push((ModelKind::Dihedral, size / 2));
        }
    }
    out
}

/// First witness `(π, s', t', I, J)` with `A ⊆ π⁻¹(s'I)`, `B ⊆ π⁻¹(Jt')` and
/// `m_G(AB) = m_M(IJ)`, or `None` when the searched space has none.
///
/// Candidates are homomorphisms in enumeration order, then interval sizes
/// ascending, then shifts by element index. Each interval pair and each shift
/// tried costs one unit of `budget`.
pub fn detect_sturmian_reduction(
    a: &GroupSubset,
    b: &GroupSubset,
    budget: u64,
) -> Result<Option<SturmianWitness>, SturmianError> {
    let class = classify_pair(a, b)?;
    if class.tag != PairTag::CriticalSum {
        return Err(SturmianError::WrongClass(class.tag));
    }
    let g = a.group();
    let target = class.m_ab.value();
    let mut spent = 0u64;
    let mut charge = |n: u64| -> Result<(), SturmianError> {
        spent += n;
        if spent > budget {
            Err(SturmianError::BudgetExceeded { budget })
        } else {
            Ok(())
        }
    };
    for (kind, m) in candidate_models(g.order()) {
        let model = kind.build(m).map_err(|e| SturmianError::BadModel(e.to_string()))?;
        let homs = homomorphisms(g, &model, true).map_err(|e| match e {
            GroupError::BudgetExceeded { .. } => SturmianError::BudgetExceeded { budget },
            other => SturmianError::BadModel(other.to_string()),
        })?;
        let sizes = kind.sizes(m);
        let intervals: Vec<GroupSubset> = sizes.iter().map(|&s| model_interval(kind, &model, s)).collect();
        let mo = model.order();
        for pi in homs {
            let p = GroupSubset::new(model.clone(), pi.image_of(a.bits()))?;
            let qb = GroupSubset::new(model.clone(), pi.image_of(b.bits()))?;
            for (ii, i) in intervals.iter().enumerate() {
                if i.len() < p.len() {
                    continue;
                }
                for (jj, j) in intervals.iter().enumerate() {
                    if j.len() < qb.len() {
                        continue;
                    }
                    charge(1)?;
                    let ij = product_set(i, j)?;
                    if q(ij.len(), mo) != target {
                        continue;
                    }
                    let mut found_s = None;
                    for s in model.elements() {
                        charge(1)?;
                        if p.iter().all(|x| i.contains(model.mul(model.inv(s), x))) {
                            found_s = Some(s);
                            break;
                        }
                    }
                    let Some(s) = found_s else { continue };
                    let mut found_t = None;
                    for t in model.elements() {
                        charge(1)?;
                        if qb.iter().all(|y| j.contains(model.mul(y, model.inv(t)))) {
                            found_t = Some(t);
                            break;
                        }
                    }
                    let Some(t) = found_t else { continue };
                    return Ok(Some(SturmianWitness {
                        kind,
                        m,
                        projection: pi.clone(),
                        shift_s: s,
                        shift_t: t,
                        size_i: sizes[ii],
                        size_j: sizes[jj],
                        image_i: translate(i, s, Side::Left),
                        image_j: translate(j, t, Side::Right),
                        m_i: q(i.len(), mo),
                        m_j: q(j.len(), mo),
                        m_ij: q(ij.len(), mo),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Interval pair in a discrete model, positioned by `s'` and `t'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscreteSturmianSpec {
    pub kind: ModelKind,
    pub m: usize,
    pub size_i: usize,
    pub size_j: usize,
    pub shift_s: usize,
    pub shift_t: usize,
}

#[derive(Debug, Clone)]
pub struct DiscreteSturmianPair {
    pub a: GroupSubset,
    pub b: GroupSubset,
    /// `s'I` and `Jt'` in the model.
    pub model_i: GroupSubset,
    pub model_j: GroupSubset,
}

/// A critical pair inside the pullback of `(s'I, Jt')` along `pi`.
///
/// The full pullbacks overshoot by `|ker π|` elements, since
/// `|IJ| = |I| + |J| - 1` for intervals. Elements are then dropped one at a
/// time (first from `A`, then from `B`, by index) whenever `AB` is unchanged,
/// until `|A| + |B| = |AB|`. If that order gets stuck the other order is
/// tried, and for pullbacks of at most [`EXHAUSTIVE_THIN_LIMIT`] elements in
/// total every sub-pair is searched in mask order.
pub fn make_discrete_sturmian(
    pi: &Homomorphism,
    spec: &DiscreteSturmianSpec,
) -> Result<DiscreteSturmianPair, SturmianError> {
    let model = pi.target();
    let expected = spec.kind.build(spec.m).map_err(|e| SturmianError::BadModel(e.to_string()))?;
    if !model.same_as(&expected) || !pi.is_surjective() {
        return Err(SturmianError::BadModel("projection does not map onto the model".into()));
    }
    if !spec.kind.sizes(spec.m).contains(&spec.size_i) || !spec.kind.sizes(spec.m).contains(&spec.size_j) {
        return Err(SturmianError::BadModel("interval size out of range".into()));
    }
    if spec.shift_s >= model.order() || spec.shift_t >= model.order() {
        return Err(SturmianError::BadModel("shift out of range".into()));
    }
    let i = translate(&model_interval(spec.kind, model, spec.size_i), spec.shift_s, Side::Left);
    let j = translate(&model_interval(spec.kind, model, spec.size_j), spec.shift_t, Side::Right);
    if product_set(&i, &j)?.len() >= model.order() {
        return Err(SturmianError::TooLarge);
    }
    let g = pi.source();
    let a0 = GroupSubset::new(g.clone(), pi.preimage_of(i.bits()))?;
    let b0 = GroupSubset::new(g.clone(), pi.preimage_of(j.bits()))?;
    for a_first in [true, false] {
        if let Some((a, b)) = thin(&a0, &b0, a_first) {
            return Ok(DiscreteSturmianPair {
                a,
                b,
                model_i: i,
                model_j: j,
            });
        }
    }
    if let Some((a, b)) = thin_exhaustive(&a0, &b0) {
        return Ok(DiscreteSturmianPair {
            a,
            b,
            model_i: i,
            model_j: j,
        });
    }
    Err(SturmianError::NotCriticalizable)
}

pub const EXHAUSTIVE_THIN_LIMIT: usize = 16;

/// Greedy removal cannot reach pairs such as `({0,1}, {0,2})` in a `Z_4`
/// kernel, where no single element of the full pullback is redundant at
/// the end.
fn thin_exhaustive(a0: &GroupSubset, b0: &GroupSubset) -> Option<(GroupSubset, GroupSubset)> {
    if a0.len() + b0.len() > EXHAUSTIVE_THIN_LIMIT {
        return None;
    }
    let ab = product_set(a0, b0).ok()?;
    let (ea, eb): (Vec<usize>, Vec<usize>) = (a0.iter().collect(), b0.iter().collect());
    let pick = |set: &GroupSubset, elems: &[usize], mask: u32| {
        let bits = Bits::from_indices(
            set.group().order(),
            elems.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &x)| x),
        );
        set.with_bits(bits)
    };
    for ma in 1..1u32 << ea.len() {
        let ka = ma.count_ones() as usize;
        if ka >= ab.len() {
            continue;
        }
        let a = pick(a0, &ea, ma);
        for mb in 1..1u32 << eb.len() {
            if ka + mb.count_ones() as usize != ab.len() {
                continue;
            }
            let b = pick(b0, &eb, mb);
            if product_set(&a, &b).ok()? == ab {
                return Some((a, b));
            }
        }
    }
    None
}

fn thin(a0: &GroupSubset, b0: &GroupSubset, a_first: bool) -> Option<(GroupSubset, GroupSubset)> {
    let ab = product_set(a0, b0).ok()?;
    let (mut a, mut b) = (a0.clone(), b0.clone());
    let done = |a: &GroupSubset, b: &GroupSubset| a.len() + b.len() == ab.len();
    for pass in 0..2 {
        let thin_a = (pass == 0) == a_first;
        let members: Vec<usize> = if thin_a { a.iter().collect() } else { b.iter().collect() };
        for x in members {
            if done(&a, &b) {
                return Some((a, b));
            }
            let (cur, other) = if thin_a { (&a, &b) } else { (&b, &a) };
            if cur.len() == 1 {
                break;
            }
            let mut bits = cur.bits().clone();
            bits.remove(x);
            let smaller = cur.with_bits(bits);
            let prod = if thin_a {
                product_set(&smaller, other).ok()?
            } else {
                product_set(other, &smaller).ok()?
            };
            if prod == ab {
                if thin_a {
                    a = smaller;
                } else {
                    b = smaller;
                }
            }
        }
    }
    done(&a, &b).then_some((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_product;

    fn z(n: usize) -> GroupRef {
        Arc::new(build_cyclic(n).unwrap())
    }

    #[test]
    fn point_intervals_need_the_exhaustive_search() {
        // Z_4 kernel: ({0,1}, {0,2}) is critical, but no greedy order finds it
        let g = Arc::new(build_product(&build_cyclic(4).unwrap(), &build_cyclic(2).unwrap()).unwrap());
        let model = z(2);
        let pi = homomorphisms(&g, &model, true).unwrap().into_iter().find(|p| p.kernel().order() == 4 && p.kernel().elements().all(|x| x % 2 == 0)).unwrap();
        let spec = DiscreteSturmianSpec { kind: ModelKind::Cyclic, m: 2, size_i: 1, size_j: 1, shift_s: 0, shift_t: 0 };
        let pair = make_discrete_sturmian(&pi, &spec).unwrap();
        assert_eq!(classify_pair(&pair.a, &pair.b).unwrap().tag, PairTag::CriticalSum);
        assert_eq!(pair.a.len() + pair.b.len(), 4);
        // Z_2 kernel: nothing to find
        let g = Arc::new(build_product(&build_cyclic(2).unwrap(), &build_cyclic(2).unwrap()).unwrap());
        let pi = homomorphisms(&g, &model, true).unwrap().into_iter().next().unwrap();
        assert!(matches!(make_discrete_sturmian(&pi, &spec), Err(SturmianError::NotCriticalizable)));
    }

    #[test]
    fn z6_fixture() {
        let z6 = z(6);
        let a = GroupSubset::from_elements(z6.clone(), [0, 1]).unwrap();
        let b = GroupSubset::from_elements(z6.clone(), [0, 3]).unwrap();
        let w = detect_sturmian_reduction(&a, &b, DEFAULT_STURMIAN_BUDGET).unwrap().unwrap();
        assert_eq!((w.kind, w.m), (ModelKind::Cyclic, 3));
        assert_eq!(w.image_i.iter().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(w.image_j.iter().collect::<Vec<_>>(), vec![0]);
        assert_eq!(w.m_ij, Q::new(2, 3));
    }

    #[test]
    fn wrong_class() {
        let z5 = z(5);
        let e = GroupSubset::from_elements(z5, [0]).unwrap();
        assert_eq!(
            detect_sturmian_reduction(&e, &e, DEFAULT_STURMIAN_BUDGET).unwrap_err(),
            SturmianError::WrongClass(PairTag::SubCritical)
        );
    }

    #[test]
    fn budget_is_reported() {
        let z6 = z(6);
        let a = GroupSubset::from_elements(z6.clone(), [0, 1]).unwrap();
        let b = GroupSubset::from_elements(z6, [0, 3]).unwrap();
        assert_eq!(
            detect_sturmian_reduction(&a, &b, 3).unwrap_err(),
            SturmianError::BudgetExceeded { budget: 3 }
        );
    }

    #[test]
    fn dihedral_intervals() {
        let d5 = ModelKind::Dihedral.build(5).unwrap();
        let i = model_interval(ModelKind::Dihedral, &d5, 1);
        assert_eq!(i.len(), 6);
        let ii = product_set(&i, &i).unwrap();
        assert_eq!(ii, model_interval(ModelKind::Dihedral, &d5, 2));
    }

    #[test]
    fn construction_round_trip_cyclic_product() {
        let g = Arc::new(build_product(&z(2), &z(5)).unwrap());
        let z5 = z(5);
        let pi = Homomorphism::new(g.clone(), z5, (0..10).map(|x| x % 5).collect()).unwrap();
        let spec = DiscreteSturmianSpec {
            kind: ModelKind::Cyclic,
            m: 5,
            size_i: 2,
            size_j: 2,
            shift_s: 1,
            shift_t: 0,
        };
        let pair = make_discrete_sturmian(&pi, &spec).unwrap();
        assert_eq!(classify_pair(&pair.a, &pair.b).unwrap().tag, PairTag::CriticalSum);
        let w = detect_sturmian_reduction(&pair.a, &pair.b, DEFAULT_STURMIAN_BUDGET).unwrap().unwrap();
        assert_eq!(w.m_ij, haar_of(&pair));
    }

    fn haar_of(p: &DiscreteSturmianPair) -> Q {
        classify_pair(&p.a, &p.b).unwrap().m_ab.value()
    }

    #[test]
    fn candidate_model_order() {
        let c = candidate_models(12);
        assert_eq!(c[0], (ModelKind::Cyclic, 12));
        assert_eq!(c[1], (ModelKind::Dihedral, 6));
        assert!(c.contains(&(ModelKind::Dihedral, 3)));
        assert!(!c.contains(&(ModelKind::Dihedral, 2)));
    }
}
