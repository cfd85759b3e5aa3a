//! Subgroups, subgroup enumeration and quotients.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::bits::Bits;
use crate::group::{FiniteGroup, GroupError, GroupRef};
use crate::hom::Homomorphism;

/// The subgroup generated by `gens`.
pub fn closure(g: &FiniteGroup, gens: &[usize]) -> Bits {
    closure_from(g, Bits::from_indices(g.order(), [g.identity()]), gens)
}

/// Smallest subgroup containing `start` and `gens`; `start` must contain the identity.
fn closure_from(g: &FiniteGroup, start: Bits, gens: &[usize]) -> Bits {
    let mut set = start;
    let mut gens: Vec<usize> = gens.to_vec();
    gens.extend(set.iter());
    gens.sort_unstable();
    gens.dedup();
    let mut frontier: Vec<usize> = set.iter().collect();
    for &x in &gens {
        if !set.contains(x) {
            set.insert(x);
            frontier.push(x);
        }
    }
    while let Some(x) = frontier.pop() {
        for &s in &gens {
            let y = g.mul(x, s);
            if !set.contains(y) {
                set.insert(y);
                frontier.push(y);
            }
        }
    }
    set
}

#[derive(Clone)]
pub struct Subgroup {
    parent: GroupRef,
    members: Bits,
    is_normal: bool,
}

impl Subgroup {
    /// Checks closure and computes the normality flag.
    pub fn new(parent: GroupRef, members: Bits) -> Result<Self, GroupError> {
        let g = &parent;
        if members.len() != g.order() {
            return Err(GroupError::NotASubgroup("bitset length differs from group order".into()));
        }
        if !members.contains(g.identity()) {
            return Err(GroupError::NotASubgroup("missing identity".into()));
        }
        for a in members.iter() {
            if !members.contains(g.inv(a)) {
                return Err(GroupError::NotASubgroup(format!("not closed under inverse at {a}")));
            }
            for b in members.iter() {
                if !members.contains(g.mul(a, b)) {
                    return Err(GroupError::NotASubgroup(format!("{a}*{b} escapes")));
                }
            }
        }
        Ok(Self::trusted(parent, members))
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(
        parent: GroupRef,
        elems: I,
    ) -> Result<Self, GroupError> {
        let members = Bits::from_indices(parent.order(), elems);
        Subgroup::new(parent, members)
    }

    /// For member sets already known to be closed.
    pub(crate) fn trusted(parent: GroupRef, members: Bits) -> Self {
        let is_normal = conjugation_closed(&parent, &members);
        Subgroup {
            parent,
            members,
            is_normal,
        }
    }

    pub fn generated(parent: GroupRef, gens: &[usize]) -> Self {
        let members = closure(&parent, gens);
        Self::trusted(parent, members)
    }

    pub fn trivial(parent: GroupRef) -> Self {
        let members = Bits::from_indices(parent.order(), [parent.identity()]);
        Subgroup {
            parent,
            members,
            is_normal: true,
        }
    }

    pub fn whole(parent: GroupRef) -> Self {
        let members = Bits::full(parent.order());
        Subgroup {
            parent,
            members,
            is_normal: true,
        }
    }

    pub fn parent(&self) -> &GroupRef {
        &self.parent
    }

    pub fn members(&self) -> &Bits {
        &self.members
    }

    pub fn is_normal(&self) -> bool {
        self.is_normal
    }

    pub fn order(&self) -> usize {
        self.members.count()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.parent.order()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn intersection(&self, other: &Subgroup) -> Result<Subgroup, GroupError> {
        if !self.parent.same_as(&other.parent) {
            return Err(GroupError::ParentMismatch);
        }
        Ok(Self::trusted(
            self.parent.clone(),
            self.members.intersection(&other.members),
        ))
    }

    /// Left coset `xH` as a bitset.
    pub fn left_coset(&self, x: usize) -> Bits {
        Bits::from_indices(self.parent.order(), self.elements().map(|h| self.parent.mul(x, h)))
    }

    /// Right coset `Hx` as a bitset.
    pub fn right_coset(&self, x: usize) -> Bits {
        Bits::from_indices(self.parent.order(), self.elements().map(|h| self.parent.mul(h, x)))
    }

    /// Least element index in each right coset `Hx`, ascending.
    pub fn coset_representatives(&self) -> Vec<usize> {
        let mut seen = Bits::new(self.parent.order());
        let mut reps = Vec::with_capacity(self.index());
        for x in self.parent.elements() {
            if !seen.contains(x) {
                reps.push(x);
                seen.union_with(&self.right_coset(x));
            }
        }
        reps
    }

    /// The subgroup as a group in its own right, with its elements in
    /// increasing parent order. Returns the group and the embedding
    /// (index in the new group -> parent element).
    pub fn to_group(&self) -> (GroupRef, Vec<usize>) {
        let embed: Vec<usize> = self.elements().collect();
        let mut back = vec![usize::MAX; self.parent.order()];
        for (i, &x) in embed.iter().enumerate() {
            back[x] = i;
        }
        let n = embed.len();
        let mut table = Vec::with_capacity(n * n);
        for &a in &embed {
            for &b in &embed {
                table.push(back[self.parent.mul(a, b)]);
            }
        }
        let labels = embed.iter().map(|&x| self.parent.label(x).to_string()).collect();
        let g = FiniteGroup::from_table(table, labels)
            .expect("subgroup of a valid group is a group")
            .with_name(format!("{}<{}", self.parent.name(), n));
        (Arc::new(g), embed)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent.same_as(&other.parent) && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<&str> = self.elements().map(|x| self.parent.label(x)).collect();
        f.debug_struct("Subgroup")
            .field("members", &labels)
            .field("normal", &self.is_normal)
            .finish()
    }
}

fn conjugation_closed(g: &FiniteGroup, members: &Bits) -> bool {
    g.elements()
        .all(|x| members.iter().all(|h| members.contains(g.conjugate(x, h))))
}

/// Every subgroup (or every normal subgroup) of `g`, sorted by order and then
/// by member set.
///
/// Subgroups are found by closing cyclic subgroups under joins with single
/// elements; each closure is memoized by its member set.
pub fn subgroups(g: &GroupRef, normal_only: bool) -> Vec<Subgroup> {
    let mut found: HashSet<Bits> = HashSet::new();
    let mut frontier: Vec<Bits> = Vec::new();
    for x in g.elements() {
        let c = closure(g, &[x]);
        if found.insert(c.clone()) {
            frontier.push(c);
        }
    }
    // Each subgroup is the join of a smaller subgroup and one element, so
    // extending every found subgroup by every outside element is complete.
    while let Some(h) = frontier.pop() {
        if h.is_full() {
            continue;
        }
        for x in g.elements() {
            if h.contains(x) {
                continue;
            }
            let joined = closure_from(g, h.clone(), &[x]);
            if found.insert(joined.clone()) {
                frontier.push(joined);
            }
        }
    }
    let mut out: Vec<Subgroup> = found
        .into_iter()
        .map(|m| Subgroup::trusted(g.clone(), m))
        .filter(|s| !normal_only || s.is_normal())
        .collect();
    out.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.members.iter().cmp(b.members.iter()))
    });
    out
}

/// `G / N` with the canonical projection. Cosets are indexed in increasing
/// order of their least element, which also labels the coset.
pub fn quotient(n: &Subgroup) -> Result<(GroupRef, Homomorphism), GroupError> {
    if !n.is_normal() {
        return Err(GroupError::NotNormal);
    }
    let g = n.parent();
    let reps = n.coset_representatives();
    let mut proj = vec![0usize; g.order()];
    for (i, &r) in reps.iter().enumerate() {
        for x in n.right_coset(r).iter() {
            proj[x] = i;
        }
    }
    let k = reps.len();
    let mut table = Vec::with_capacity(k * k);
    for &a in &reps {
        for &b in &reps {
            table.push(proj[g.mul(a, b)]);
        }
    }
    let labels = reps.iter().map(|&r| g.label(r).to_string()).collect();
    let q = Arc::new(
        FiniteGroup::from_table(table, labels)?.with_name(format!("{}/{}", g.name(), n.order())),
    );
    let hom = Homomorphism::new(g.clone(), q.clone(), proj)?;
    Ok((q, hom))
}
