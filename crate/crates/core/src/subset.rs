//! Subsets of a finite group, product sets, Haar measure and pair
//! classification.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::group::GroupRef;
use crate::rational::Q;
use crate::subgroup::Subgroup;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubsetError {
    #[error("subsets belong to different groups")]
    ParentMismatch,
    #[error("subset must be nonempty")]
    Empty,
    #[error("bitset of length {found} for a group of order {order}")]
    LengthMismatch { found: usize, order: usize },
    #[error("unknown element {token:?} at byte {pos}")]
    UnknownElement { token: String, pos: usize },
    #[error("index {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A subset of a finite group.
#[derive(Clone)]
pub struct GroupSubset {
    group: GroupRef,
    bits: Bits,
}

impl GroupSubset {
    pub fn new(group: GroupRef, bits: Bits) -> Result<Self, SubsetError> {
        if bits.len() != group.order() {
            return Err(SubsetError::LengthMismatch {
                found: bits.len(),
                order: group.order(),
            });
        }
        Ok(GroupSubset { group, bits })
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(
        group: GroupRef,
        elems: I,
    ) -> Result<Self, SubsetError> {
        let order = group.order();
        let mut bits = Bits::new(order);
        for x in elems {
            if x >= order {
                return Err(SubsetError::IndexOutOfRange { index: x, order });
            }
            bits.insert(x);
        }
        Ok(GroupSubset { group, bits })
    }

    pub fn from_mask(group: GroupRef, mask: u64) -> Self {
        let bits = Bits::from_mask(group.order(), mask);
        GroupSubset { group, bits }
    }

    pub fn empty(group: GroupRef) -> Self {
        let bits = Bits::new(group.order());
        GroupSubset { group, bits }
    }

    pub fn full(group: GroupRef) -> Self {
        let bits = Bits::full(group.order());
        GroupSubset { group, bits }
    }

    pub fn singleton(group: GroupRef, x: usize) -> Self {
        let bits = Bits::from_indices(group.order(), [x]);
        GroupSubset { group, bits }
    }

    pub fn of_subgroup(h: &Subgroup) -> Self {
        GroupSubset {
            group: h.parent().clone(),
            bits: h.members().clone(),
        }
    }

    /// Parses a literal such as `0-3,7` or `(0,1),(1,3)`.
    ///
    /// Tokens are separated by commas outside parentheses and brackets. A
    /// token naming an element label wins; otherwise `a-b` is an inclusive
    /// index range and a bare integer is an index.
    pub fn parse(group: GroupRef, literal: &str) -> Result<Self, SubsetError> {
        let order = group.order();
        let mut bits = Bits::new(order);
        for (pos, token) in split_tokens(literal) {
            if let Some(x) = group.element(token) {
                bits.insert(x);
                continue;
            }
            let unknown = || SubsetError::UnknownElement {
                token: token.to_string(),
                pos,
            };
            let range = match token.split_once('-') {
                Some((a, b)) if !a.is_empty() => {
                    let a: usize = a.trim().parse().map_err(|_| unknown())?;
                    let b: usize = b.trim().parse().map_err(|_| unknown())?;
                    a..=b
                }
                _ => {
                    let a: usize = token.parse().map_err(|_| unknown())?;
                    a..=a
                }
            };
            for x in range {
                if x >= order {
                    return Err(SubsetError::IndexOutOfRange { index: x, order });
                }
                bits.insert(x);
            }
        }
        Ok(GroupSubset { group, bits })
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn bits(&self) -> &Bits {
        &self.bits
    }

    pub fn into_bits(self) -> Bits {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter()
    }

    pub fn to_mask(&self) -> Option<u64> {
        self.bits.to_mask()
    }

    pub fn labels(&self) -> Vec<String> {
        self.iter().map(|x| self.group.label(x).to_string()).collect()
    }

    /// Comma-separated labels; parses back with [`GroupSubset::parse`].
    pub fn to_literal(&self) -> String {
        self.labels().join(",")
    }

    pub fn same_group(&self, other: &GroupSubset) -> bool {
        self.group.same_as(&other.group)
    }

    fn check_same(&self, other: &GroupSubset) -> Result<(), SubsetError> {
        if self.same_group(other) {
            Ok(())
        } else {
            Err(SubsetError::ParentMismatch)
        }
    }

    pub fn union(&self, other: &GroupSubset) -> Result<GroupSubset, SubsetError> {
        self.check_same(other)?;
        Ok(self.with_bits(self.bits.union(&other.bits)))
    }

    pub fn intersection(&self, other: &GroupSubset) -> Result<GroupSubset, SubsetError> {
        self.check_same(other)?;
        Ok(self.with_bits(self.bits.intersection(&other.bits)))
    }

    pub fn is_subset(&self, other: &GroupSubset) -> bool {
        self.same_group(other) && self.bits.is_subset(&other.bits)
    }

    pub(crate) fn with_bits(&self, bits: Bits) -> GroupSubset {
        GroupSubset {
            group: self.group.clone(),
            bits,
        }
    }

    /// `A H` for a subgroup `H`.
    pub fn times_subgroup(&self, h: &Subgroup) -> GroupSubset {
        let g = &self.group;
        let mut out = Bits::new(g.order());
        for a in self.iter() {
            for x in h.elements() {
                out.insert(g.mul(a, x));
            }
        }
        self.with_bits(out)
    }
}

fn split_tokens(literal: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = literal.as_bytes();
    let mut push = |s: usize, e: usize| {
        let raw = &literal[s..e];
        let trimmed = raw.trim();
        if !trimmed.is_empty() {
            let lead = raw.len() - raw.trim_start().len();
            out.push((s + lead, trimmed));
        }
    };
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            b',' if depth == 0 => {
                push(start, i);
                start = i + 1;
            }
            _ => {}
        }
    }
    push(start, literal.len());
    out
}

impl PartialEq for GroupSubset {
    fn eq(&self, other: &Self) -> bool {
        self.same_group(other) && self.bits == other.bits
    }
}

impl Eq for GroupSubset {}

impl fmt::Debug for GroupSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().join(", "))
    }
}

/// Normalized counting measure `|A| / |G|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HaarValue(#[serde(with = "crate::rational::serde_q")] Q);

impl HaarValue {
    pub fn from_counts(count: usize, order: usize) -> Self {
        HaarValue(Q::new(count as i64, order as i64))
    }

    pub fn value(&self) -> Q {
        self.0
    }
}

impl fmt::Display for HaarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::rational::fmt_q(&self.0))
    }
}

pub fn haar(a: &GroupSubset) -> HaarValue {
    HaarValue::from_counts(a.len(), a.group.order())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PairTag {
    /// `m(AB) < min(1, m(A) + m(B))`.
    SubCritical,
    /// `m(AB) = m(A) + m(B) < 1`.
    CriticalSum,
    /// `m(AB) = 1 <= m(A) + m(B)`.
    CriticalFull,
    /// `m(AB) > m(A) + m(B)`.
    SuperCritical,
}

impl PairTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            PairTag::SubCritical => "SubCritical",
            PairTag::CriticalSum => "CriticalSum",
            PairTag::CriticalFull => "CriticalFull",
            PairTag::SuperCritical => "SuperCritical",
        }
    }

    /// Tag from `|A|`, `|B|`, `|AB|` and `|G|`.
    pub fn from_counts(a: usize, b: usize, ab: usize, order: usize) -> PairTag {
        let sum = a + b;
        if ab < sum.min(order) {
            PairTag::SubCritical
        } else if ab == sum && sum < order {
            PairTag::CriticalSum
        } else if ab == order && sum >= order {
            PairTag::CriticalFull
        } else {
            PairTag::SuperCritical
        }
    }
}

impl fmt::Display for PairTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairClass {
    pub tag: PairTag,
    /// `m(A) + m(B) - m(AB)`, exact.
    #[serde(with = "crate::rational::serde_q")]
    pub deficit: Q,
    pub m_a: HaarValue,
    pub m_b: HaarValue,
    pub m_ab: HaarValue,
}

impl PairClass {
    pub fn from_counts(a: usize, b: usize, ab: usize, order: usize) -> Self {
        let tag = PairTag::from_counts(a, b, ab, order);
        let m_a = HaarValue::from_counts(a, order);
        let m_b = HaarValue::from_counts(b, order);
        let m_ab = HaarValue::from_counts(ab, order);
        PairClass {
            tag,
            deficit: m_a.value() + m_b.value() - m_ab.value(),
            m_a,
            m_b,
            m_ab,
        }
    }
}

/// `AB = {ab : a ∈ A, b ∈ B}`, gathered row by row from the Cayley table.
pub fn product_set(a: &GroupSubset, b: &GroupSubset) -> Result<GroupSubset, SubsetError> {
    a.check_same(b)?;
    let g = &a.group;
    let mut out = Bits::new(g.order());
    let bs: Vec<usize> = b.iter().collect();
    for x in a.iter() {
        let row = g.row(x);
        for &y in &bs {
            out.insert(row[y] as usize);
        }
        if out.is_full() {
            break;
        }
    }
    Ok(a.with_bits(out))
}

pub fn classify_pair(a: &GroupSubset, b: &GroupSubset) -> Result<PairClass, SubsetError> {
    a.check_same(b)?;
    if a.is_empty() || b.is_empty() {
        return Err(SubsetError::Empty);
    }
    let ab = product_set(a, b)?;
    Ok(PairClass::from_counts(a.len(), b.len(), ab.len(), a.group.order()))
}

pub fn translate(a: &GroupSubset, x: usize, side: Side) -> GroupSubset {
    let g = &a.group;
    let bits = Bits::from_indices(
        g.order(),
        a.iter().map(|y| match side {
            Side::Left => g.mul(x, y),
            Side::Right => g.mul(y, x),
        }),
    );
    a.with_bits(bits)
}

pub fn invert(a: &GroupSubset) -> GroupSubset {
    let g = &a.group;
    a.with_bits(Bits::from_indices(g.order(), a.iter().map(|y| g.inv(y))))
}

/// `{m : mA = A}`.
pub fn left_stabilizer(a: &GroupSubset) -> Subgroup {
    one_sided_stabilizer(a, Side::Left)
}

/// `{m : Am = A}`.
pub fn right_stabilizer(a: &GroupSubset) -> Subgroup {
    one_sided_stabilizer(a, Side::Right)
}

fn one_sided_stabilizer(a: &GroupSubset, side: Side) -> Subgroup {
    let g = &a.group;
    let mut members = Bits::new(g.order());
    match a.iter().next() {
        None => members = Bits::full(g.order()),
        Some(a0) => {
            let inv0 = g.inv(a0);
            // m a0 ∈ A (resp. a0 m ∈ A) narrows the candidates to |A| elements.
            for y in a.iter() {
                let m = match side {
                    Side::Left => g.mul(y, inv0),
                    Side::Right => g.mul(inv0, y),
                };
                if translate(a, m, side).bits == a.bits {
                    members.insert(m);
                }
            }
        }
    }
    Subgroup::trusted(g.clone(), members)
}

/// The two-sided stabilizer `{m : mA = Am = A}`. Under counting measure this
/// is also the essential stabilizer.
pub fn stabilizer(a: &GroupSubset) -> Subgroup {
    let l = left_stabilizer(a);
    let r = right_stabilizer(a);
    let both = l.members().intersection(r.members());
    Subgroup::trusted(a.group.clone(), both)
}
