use crate::bits::Bits;
use crate::subgroup::Subgroup;
use crate::subset::{classify_pair, product_set, right_stabilizer, stabilizer, GroupSubset, PairTag};

use super::{certificate_for, ReductionCertificate, ReductionError};

/// Kneser reduction for abelian groups: quotient by `H = Stab(AB)`.
pub fn kneser_reduce(a: &GroupSubset, b: &GroupSubset) -> Result<ReductionCertificate, ReductionError> {
    if !a.group().is_abelian() {
        return Err(ReductionError::NonAbelian);
    }
    let class = classify_pair(a, b)?;
    if !matches!(class.tag, PairTag::SubCritical | PairTag::CriticalSum) {
        return Err(ReductionError::WrongClass {
            found: class.tag,
            expected: "SubCritical or CriticalSum",
        });
    }
    let h = stabilizer(&product_set(a, b)?);
    certificate_for(a, b, h)
}

/// Kemperman-style reduction for any finite group.
///
/// The kernel is the largest normal `H` with `ABH = AB`. Every such `H` lies
/// in the right stabilizer `R` of `AB`, and the product of two normal
/// subgroups of `R` is again one, so the largest is the normal core of `R`.
/// That is the same subgroup a scan of normal subgroups in decreasing order
/// stops at first.
pub fn kemperman_reduce(a: &GroupSubset, b: &GroupSubset) -> Result<ReductionCertificate, ReductionError> {
    let class = classify_pair(a, b)?;
    if class.tag != PairTag::SubCritical {
        return Err(ReductionError::WrongClass {
            found: class.tag,
            expected: "SubCritical",
        });
    }
    let r = right_stabilizer(&product_set(a, b)?);
    certificate_for(a, b, normal_core(&r))
}

/// `⋂_g g R g⁻¹`.
pub fn normal_core(r: &Subgroup) -> Subgroup {
    let g = r.parent();
    let mut core = r.members().clone();
    for x in g.elements() {
        let conj = Bits::from_indices(g.order(), r.elements().map(|h| g.conjugate(x, h)));
        core.intersect_with(&conj);
    }
    Subgroup::new(g.clone(), core).expect("intersection of conjugates is a subgroup")
}
