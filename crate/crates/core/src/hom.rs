//! Homomorphisms between finite groups and exhaustive homomorphism search.

use std::fmt;

use crate::bits::Bits;
use crate::group::{FiniteGroup, GroupError, GroupRef};
use crate::subgroup::Subgroup;

/// Largest number of generator-image assignments a search will try.
pub const HOM_SEARCH_BUDGET: u128 = 10_000_000;

#[derive(Clone)]
pub struct Homomorphism {
    source: GroupRef,
    target: GroupRef,
    map: Vec<u32>,
    surjective: bool,
}

impl Homomorphism {
    /// Checks `map[xy] = map[x] map[y]` for all pairs.
    pub fn new(source: GroupRef, target: GroupRef, map: Vec<usize>) -> Result<Self, GroupError> {
        if map.len() != source.order() || map.iter().any(|&y| y >= target.order()) {
            return Err(GroupError::InvalidTable("map has wrong shape".into()));
        }
        for x in source.elements() {
            for y in source.elements() {
                if map[source.mul(x, y)] != target.mul(map[x], map[y]) {
                    return Err(GroupError::NotAHomomorphism { x, y });
                }
            }
        }
        Ok(Self::trusted(source, target, map.into_iter().map(|x| x as u32).collect()))
    }

    fn trusted(source: GroupRef, target: GroupRef, map: Vec<u32>) -> Self {
        let mut image = Bits::new(target.order());
        for &y in &map {
            image.insert(y as usize);
        }
        let surjective = image.is_full();
        Homomorphism {
            source,
            target,
            map,
            surjective,
        }
    }

    pub fn identity(g: GroupRef) -> Self {
        let map = (0..g.order() as u32).collect();
        Self::trusted(g.clone(), g, map)
    }

    pub fn source(&self) -> &GroupRef {
        &self.source
    }

    pub fn target(&self) -> &GroupRef {
        &self.target
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x] as usize
    }

    pub fn table(&self) -> Vec<usize> {
        self.map.iter().map(|&x| x as usize).collect()
    }

    pub fn is_surjective(&self) -> bool {
        self.surjective
    }

    pub fn is_bijective(&self) -> bool {
        self.surjective && self.source.order() == self.target.order()
    }

    pub fn kernel(&self) -> Subgroup {
        let e = self.target.identity();
        let members = Bits::from_indices(
            self.source.order(),
            self.source.elements().filter(|&x| self.apply(x) == e),
        );
        Subgroup::trusted(self.source.clone(), members)
    }

    pub fn image_of(&self, set: &Bits) -> Bits {
        Bits::from_indices(self.target.order(), set.iter().map(|x| self.apply(x)))
    }

    pub fn preimage_of(&self, set: &Bits) -> Bits {
        Bits::from_indices(
            self.source.order(),
            self.source.elements().filter(|&x| set.contains(self.apply(x))),
        )
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Homomorphism) -> Result<Homomorphism, GroupError> {
        if !self.target.same_as(&other.source) {
            return Err(GroupError::ParentMismatch);
        }
        let map = self.map.iter().map(|&x| other.map[x as usize]).collect();
        Ok(Self::trusted(self.source.clone(), other.target.clone(), map))
    }

    /// Inverse of a bijective homomorphism.
    pub fn inverse(&self) -> Option<Homomorphism> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0u32; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Some(Self::trusted(self.target.clone(), self.source.clone(), inv))
    }

    pub fn same_map(&self, other: &Homomorphism) -> bool {
        self.map == other.map
    }
}

impl PartialEq for Homomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.source.same_as(&other.source) && self.target.same_as(&other.target) && self.map == other.map
    }
}

impl Eq for Homomorphism {}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Homomorphism")
            .field("source", &self.source.name())
            .field("target", &self.target.name())
            .field("map", &self.map)
            .finish()
    }
}

/// All homomorphisms `g -> m`, optionally only the surjective ones.
pub fn homomorphisms(
    g: &GroupRef,
    m: &GroupRef,
    surjective_only: bool,
) -> Result<Vec<Homomorphism>, GroupError> {
    homomorphisms_with_budget(g, m, surjective_only, HOM_SEARCH_BUDGET)
}

/// Enumerates images of a generating set of `g`. Each generator may only go
/// to an element whose order divides its own; every complete assignment is
/// extended breadth-first and rejected on the first inconsistency.
///
/// Distinct assignments give distinct maps, so the result has no duplicates.
/// Fails with [`GroupError::BudgetExceeded`] rather than truncating.
pub fn homomorphisms_with_budget(
    g: &GroupRef,
    m: &GroupRef,
    surjective_only: bool,
    budget: u128,
) -> Result<Vec<Homomorphism>, GroupError> {
    let gens = g.generators();
    let target_orders: Vec<usize> = m.elements().map(|y| m.element_order(y)).collect();
    let options: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| {
            let ox = g.element_order(x);
            m.elements().filter(|&y| ox % target_orders[y] == 0).collect()
        })
        .collect();
    let candidates = options
        .iter()
        .try_fold(1u128, |acc, o| acc.checked_mul(o.len() as u128))
        .unwrap_or(u128::MAX);
    if candidates > budget {
        return Err(GroupError::BudgetExceeded { candidates, budget });
    }

    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    let mut map = vec![u32::MAX; g.order()];
    let mut queue = Vec::with_capacity(g.order());
    'outer: loop {
        if let Some(found) = extend(g, m, &gens, &options, &choice, &mut map, &mut queue) {
            let h = Homomorphism::trusted(g.clone(), m.clone(), found);
            if !surjective_only || h.is_surjective() {
                out.push(h);
            }
        }
        // odometer
        for i in (0..choice.len()).rev() {
            choice[i] += 1;
            if choice[i] < options[i].len() {
                continue 'outer;
            }
            choice[i] = 0;
        }
        break;
    }
    Ok(out)
}

fn extend(
    g: &FiniteGroup,
    m: &FiniteGroup,
    gens: &[usize],
    options: &[Vec<usize>],
    choice: &[usize],
    map: &mut [u32],
    queue: &mut Vec<usize>,
) -> Option<Vec<u32>> {
    map.fill(u32::MAX);
    queue.clear();
    map[g.identity()] = m.identity() as u32;
    queue.push(g.identity());
    let images: Vec<usize> = choice.iter().zip(options).map(|(&c, o)| o[c]).collect();
    let mut head = 0;
    while head < queue.len() {
        let y = queue[head];
        head += 1;
        let fy = map[y] as usize;
        for (&x, &fx) in gens.iter().zip(&images) {
            let z = g.mul(y, x);
            let fz = m.mul(fy, fx) as u32;
            if map[z] == u32::MAX {
                map[z] = fz;
                queue.push(z);
            } else if map[z] != fz {
                return None;
            }
        }
    }
    Some(map.to_vec())
}

/// All automorphisms of `m`.
pub fn automorphisms(m: &GroupRef) -> Result<Vec<Homomorphism>, GroupError> {
    Ok(homomorphisms(m, m, true)?
        .into_iter()
        .filter(|h| h.is_bijective())
        .collect())
}

/// An isomorphism `g -> h`, if one exists.
pub fn find_isomorphism(g: &GroupRef, h: &GroupRef) -> Result<Option<Homomorphism>, GroupError> {
    if g.order() != h.order() {
        return Ok(None);
    }
    Ok(homomorphisms(g, h, true)?.into_iter().next())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::*;
    use std::sync::Arc;

    fn z(n: usize) -> GroupRef {
        Arc::new(build_cyclic(n).unwrap())
    }

    #[test]
    fn z4_to_z2() {
        let all = homomorphisms(&z(4), &z(2), false).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all.iter().filter(|h| h.is_surjective()).count(), 1);
    }

    #[test]
    fn into_trivial() {
        let d4 = Arc::new(build_dihedral(4).unwrap());
        assert_eq!(homomorphisms(&d4, &z(1), false).unwrap().len(), 1);
    }

    #[test]
    fn z5_endomorphisms() {
        let all = homomorphisms(&z(5), &z(5), false).unwrap();
        assert_eq!(all.len(), 5);
        assert_eq!(all.iter().filter(|h| h.is_surjective()).count(), 4);
        // each is multiplication by k
        for h in &all {
            let k = h.apply(1);
            assert!((0..5).all(|x| h.apply(x) == x * k % 5));
        }
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&z(5)).unwrap().len(), 4);
        let z2 = automorphisms(&z(2)).unwrap();
        assert_eq!(z2.len(), 1);
        for n in 1..10 {
            let auts = automorphisms(&z(n)).unwrap();
            assert!(auts.iter().any(|a| (0..n).all(|x| a.apply(x) == (n - x) % n)));
        }
        let d4 = Arc::new(build_dihedral(4).unwrap());
        assert_eq!(automorphisms(&d4).unwrap().len(), 8);
    }

    #[test]
    fn z2_times_z3_is_z6() {
        let p = Arc::new(build_product(&z(2), &z(3)).unwrap());
        assert!(find_isomorphism(&p, &z(6)).unwrap().is_some());
        let v = Arc::new(build_product(&z(2), &z(2)).unwrap());
        assert!(find_isomorphism(&v, &z(4)).unwrap().is_none());
    }

    #[test]
    fn trivial_factor_is_identity_up_to_relabel() {
        let d3 = Arc::new(build_dihedral(3).unwrap());
        let p = Arc::new(build_product(&z(1), &d3).unwrap());
        assert!(find_isomorphism(&p, &d3).unwrap().is_some());
    }

    #[test]
    fn trivial_action_gives_direct_product() {
        let spec = SemidirectSpec::trivial(z(4), z(3));
        let sd = build_semidirect(&spec).unwrap().group;
        let dp = Arc::new(build_product(&z(4), &z(3)).unwrap());
        assert!(find_isomorphism(&sd, &dp).unwrap().is_some());
    }

    #[test]
    fn dihedral_matches_polygon_symmetries() {
        for n in 3..=7 {
            let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
            let perm = Arc::new(build_from_permutations(&[rot, refl]).unwrap());
            assert_eq!(perm.order(), 2 * n);
            let d = Arc::new(build_dihedral(n).unwrap());
            let iso = find_isomorphism(&d, &perm).unwrap().expect("isomorphic");
            assert!(Homomorphism::new(d.clone(), perm.clone(), iso.table()).is_ok());
        }
    }

    #[test]
    fn budget_is_explicit() {
        let big = Arc::new(build_cyclic(2).unwrap());
        let mut g = (*big).clone();
        for _ in 0..5 {
            g = build_product(&g, &big).unwrap();
        }
        let g = Arc::new(g);
        let err = homomorphisms_with_budget(&g, &g, false, 1000).unwrap_err();
        assert!(matches!(err, GroupError::BudgetExceeded { .. }));
    }

    #[test]
    fn rejects_non_homomorphism() {
        let err = Homomorphism::new(z(4), z(2), vec![0, 1, 1, 0]).unwrap_err();
        assert!(matches!(err, GroupError::NotAHomomorphism { .. }));
    }
}
