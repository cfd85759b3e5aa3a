//! Finite groups as dense Cayley tables, and the standard constructions.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::subgroup::Subgroup;

/// Default largest group order accepted by the constructors.
pub const DEFAULT_ORDER_CAP: usize = 4096;

/// Orders up to this size get an exhaustive associativity check.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 256;

const SAMPLED_TRIPLES: usize = 1_000_000;

static ORDER_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_ORDER_CAP);

pub fn order_cap() -> usize {
    ORDER_CAP.load(Ordering::Relaxed)
}

pub fn set_order_cap(cap: usize) {
    ORDER_CAP.store(cap.max(1), Ordering::Relaxed);
}

pub type GroupRef = Arc<FiniteGroup>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("group order {order} outside 1..={cap}")]
    OrderOutOfRange { order: usize, cap: usize },
    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),
    #[error("table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("operands belong to different groups")]
    ParentMismatch,
    #[error("map is not a homomorphism: f({x}*{y}) != f({x})*f({y})")]
    NotAHomomorphism { x: usize, y: usize },
    #[error("invalid semidirect action: {0}")]
    InvalidAction(String),
    #[error("homomorphism search needs {candidates} candidate maps, budget is {budget}")]
    BudgetExceeded { candidates: u128, budget: u128 },
    #[error("unknown element {0:?}")]
    UnknownElement(String),
}

/// A finite group given by its full multiplication table.
///
/// Elements are the indices `0..order`. The table is stored row-major, so
/// `mul(a, b)` is entry `a * order + b`.
#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    identity: usize,
    inverse: Vec<u32>,
    labels: Vec<String>,
    name: String,
    abelian: bool,
}

impl FiniteGroup {
    /// Validates a row-major table and derives identity and inverses.
    pub fn from_table(table: Vec<usize>, labels: Vec<String>) -> Result<Self, GroupError> {
        let order = labels.len();
        let cap = order_cap();
        if order == 0 || order > cap {
            return Err(GroupError::OrderOutOfRange { order, cap });
        }
        if table.len() != order * order {
            return Err(GroupError::InvalidTable(format!(
                "expected {} entries, found {}",
                order * order,
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&x| x >= order) {
            return Err(GroupError::InvalidTable(format!("entry {bad} out of range")));
        }
        let g = Self::assemble(order, table.into_iter().map(|x| x as u32).collect(), labels)?;
        g.check_associativity()?;
        Ok(g)
    }

    /// Builds without the associativity scan; used by constructions that are
    /// associative by construction.
    fn assemble(order: usize, table: Vec<u32>, labels: Vec<String>) -> Result<Self, GroupError> {
        let mut seen = HashSet::with_capacity(order);
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(GroupError::DuplicateLabel(l.clone()));
            }
        }
        let at = |a: usize, b: usize| table[a * order + b] as usize;
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| GroupError::InvalidTable("no identity element".into()))?;
        // Latin square check: every row and column is a permutation.
        let mut mark = vec![usize::MAX; order];
        for a in 0..order {
            for b in 0..order {
                let v = at(a, b);
                if mark[v] == a {
                    return Err(GroupError::InvalidTable(format!("row {a} repeats {v}")));
                }
                mark[v] = a;
            }
        }
        mark.fill(usize::MAX);
        for b in 0..order {
            for a in 0..order {
                let v = at(a, b);
                if mark[v] == b {
                    return Err(GroupError::InvalidTable(format!("column {b} repeats {v}")));
                }
                mark[v] = b;
            }
        }
        let mut inverse = vec![0u32; order];
        for (x, inv) in inverse.iter_mut().enumerate() {
            let y = (0..order)
                .find(|&y| at(x, y) == identity)
                .expect("latin square has an inverse in every row");
            if at(y, x) != identity {
                return Err(GroupError::InvalidTable(format!("{x} has no two-sided inverse")));
            }
            *inv = y as u32;
        }
        let abelian = (0..order).all(|a| (a + 1..order).all(|b| at(a, b) == at(b, a)));
        Ok(FiniteGroup {
            order,
            table,
            identity,
            inverse,
            name: format!("G{order}"),
            labels,
            abelian,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Exhaustive up to [`EXHAUSTIVE_ASSOCIATIVITY_LIMIT`], a fixed-seed sample of
    /// one million triples above.
    pub fn check_associativity(&self) -> Result<(), GroupError> {
        let n = self.order;
        let check = |a: usize, b: usize, c: usize| {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                Err(GroupError::NotAssociative { a, b, c })
            } else {
                Ok(())
            }
        };
        if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(GroupError::NotAssociative { a, b, c });
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_ca11);
            for _ in 0..SAMPLED_TRIPLES {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Row `a` of the table: the map `x -> a x`.
    pub fn row(&self, a: usize) -> &[u32] {
        &self.table[a * self.order..(a + 1) * self.order]
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Same multiplication table (labels are not compared).
    pub fn same_as(&self, other: &FiniteGroup) -> bool {
        std::ptr::eq(self, other) || (self.order == other.order && self.table == other.table)
    }

    /// A small generating set: greedily adds the least element outside the
    /// subgroup generated so far.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.order];
        span[self.identity] = true;
        let mut covered = 1;
        while covered < self.order {
            let g = (0..self.order).find(|&x| !span[x]).expect("uncovered element");
            gens.push(g);
            let closed = crate::subgroup::closure(self, &gens);
            covered = closed.count();
            for x in closed.iter() {
                span[x] = true;
            }
        }
        gens
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            order: self.order,
            cayley: Cayley::Flat(self.table.iter().map(|&x| x as usize).collect()),
            labels: self.labels.clone(),
        }
    }

    pub fn from_json(json: GroupJson) -> Result<Self, GroupError> {
        let table = match json.cayley {
            Cayley::Flat(v) => v,
            Cayley::Rows(rows) => rows.into_iter().flatten().collect(),
        };
        if json.labels.len() != json.order {
            return Err(GroupError::InvalidTable(format!(
                "order {} but {} labels",
                json.order,
                json.labels.len()
            )));
        }
        FiniteGroup::from_table(table, json.labels)
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("order", &self.order)
            .finish()
    }
}

/// Serialized group: `{order, cayley, labels}` with a row-major table.
/// Nested row arrays are accepted on input.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupJson {
    pub order: usize,
    pub cayley: Cayley,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cayley {
    Flat(Vec<usize>),
    Rows(Vec<Vec<usize>>),
}

fn check_cap(order: usize) -> Result<(), GroupError> {
    let cap = order_cap();
    if order == 0 || order > cap {
        Err(GroupError::OrderOutOfRange { order, cap })
    } else {
        Ok(())
    }
}

/// The cyclic group `Z_n` under addition, labelled `"0".."n-1"`.
pub fn build_cyclic(n: usize) -> Result<FiniteGroup, GroupError> {
    check_cap(n)?;
    let table = (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect();
    let labels = (0..n).map(|i| i.to_string()).collect();
    Ok(FiniteGroup::assemble(n, table, labels)?.with_name(format!("Z{n}")))
}

/// Direct product with lexicographic indexing: `(a, b) -> a * |h| + b`.
pub fn build_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
    let (m, k) = (g.order(), h.order());
    check_cap(m.saturating_mul(k))?;
    let n = m * k;
    let mut table = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let (a, b) = (x / k, x % k);
            let (c, d) = (y / k, y % k);
            table.push((g.mul(a, c) * k + h.mul(b, d)) as u32);
        }
    }
    let labels = (0..n)
        .map(|x| format!("({},{})", g.label(x / k), h.label(x % k)))
        .collect();
    Ok(FiniteGroup::assemble(n, table, labels)?.with_name(format!("{}x{}", g.name(), h.name())))
}

/// Data for `N ⋊ K`: `action[p]` is the automorphism `c_p` of `N` as a table.
#[derive(Debug, Clone)]
pub struct SemidirectSpec {
    pub n_part: GroupRef,
    pub k_part: GroupRef,
    pub action: Vec<Vec<usize>>,
}

impl SemidirectSpec {
    pub fn trivial(n_part: GroupRef, k_part: GroupRef) -> Self {
        let id: Vec<usize> = n_part.elements().collect();
        let action = vec![id; k_part.order()];
        SemidirectSpec {
            n_part,
            k_part,
            action,
        }
    }

    /// `Z_n ⋊ Z_2` with the generator acting by negation.
    pub fn negation(n: usize) -> Result<Self, GroupError> {
        let n_part = Arc::new(build_cyclic(n)?);
        let k_part = Arc::new(build_cyclic(2)?);
        let id: Vec<usize> = (0..n).collect();
        let neg: Vec<usize> = (0..n).map(|x| (n - x) % n).collect();
        Ok(SemidirectSpec {
            n_part,
            k_part,
            action: vec![id, neg],
        })
    }

    /// `Z_n ⋊ Z_m` where the generator of `Z_m` acts by multiplication by `r`.
    pub fn multiplicative(n: usize, m: usize, r: usize) -> Result<Self, GroupError> {
        let n_part = Arc::new(build_cyclic(n)?);
        let k_part = Arc::new(build_cyclic(m)?);
        let mut action = Vec::with_capacity(m);
        let mut factor = 1 % n.max(1);
        for _ in 0..m {
            action.push((0..n).map(|x| (x * factor) % n).collect());
            factor = (factor * r) % n;
        }
        Ok(SemidirectSpec {
            n_part,
            k_part,
            action,
        })
    }

    fn validate(&self) -> Result<(), GroupError> {
        let (n, k) = (&self.n_part, &self.k_part);
        if self.action.len() != k.order() {
            return Err(GroupError::InvalidAction(format!(
                "{} action tables for a group of order {}",
                self.action.len(),
                k.order()
            )));
        }
        for (p, c) in self.action.iter().enumerate() {
            if c.len() != n.order() || c.iter().any(|&x| x >= n.order()) {
                return Err(GroupError::InvalidAction(format!("table {p} malformed")));
            }
            let mut seen = vec![false; n.order()];
            for &x in c {
                if std::mem::replace(&mut seen[x], true) {
                    return Err(GroupError::InvalidAction(format!("c_{p} not bijective")));
                }
            }
            for a in n.elements() {
                for b in n.elements() {
                    if c[n.mul(a, b)] != n.mul(c[a], c[b]) {
                        return Err(GroupError::InvalidAction(format!(
                            "c_{p} is not a homomorphism at ({a},{b})"
                        )));
                    }
                }
            }
        }
        for p in k.elements() {
            for q in k.elements() {
                let pq = k.mul(p, q);
                if n
                    .elements()
                    .any(|x| self.action[pq][x] != self.action[p][self.action[q][x]])
                {
                    return Err(GroupError::InvalidAction(format!(
                        "c_({p}{q}) != c_{p} c_{q}: action is not a homomorphism into Aut(N)"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `N ⋊ K` together with the embeddings of both factors.
#[derive(Debug, Clone)]
pub struct SemidirectProduct {
    pub group: GroupRef,
    /// `N × {e}`, always normal.
    pub normal: Subgroup,
    /// Index of `(e, p)` for each `p` in `K`.
    pub complement: Vec<usize>,
}

/// Elements are pairs `(m, p)` indexed `m * |K| + p`, multiplied by
/// `(m,p)(n,q) = (m c_p(n), pq)`.
pub fn build_semidirect(spec: &SemidirectSpec) -> Result<SemidirectProduct, GroupError> {
    spec.validate()?;
    let (n, k) = (&spec.n_part, &spec.k_part);
    let (a, b) = (n.order(), k.order());
    check_cap(a.saturating_mul(b))?;
    let order = a * b;
    let mut table = Vec::with_capacity(order * order);
    for x in 0..order {
        let (m, p) = (x / b, x % b);
        for y in 0..order {
            let (nn, q) = (y / b, y % b);
            let first = n.mul(m, spec.action[p][nn]);
            table.push((first * b + k.mul(p, q)) as u32);
        }
    }
    let labels = (0..order)
        .map(|x| format!("({},{})", n.label(x / b), k.label(x % b)))
        .collect();
    let group = Arc::new(
        FiniteGroup::assemble(order, table, labels)?
            .with_name(format!("{}:{}", n.name(), k.name())),
    );
    let members = (0..a).map(|m| m * b + k.identity());
    let normal = Subgroup::from_elements(group.clone(), members)?;
    let complement = (0..b).map(|p| n.identity() * b + p).collect();
    Ok(SemidirectProduct {
        group,
        normal,
        complement,
    })
}

/// The dihedral group of order `2n`, as `Z_n ⋊ Z_2` with negation.
pub fn build_dihedral(n: usize) -> Result<FiniteGroup, GroupError> {
    let sp = build_semidirect(&SemidirectSpec::negation(n)?)?;
    let g = Arc::try_unwrap(sp.group).unwrap_or_else(|g| (*g).clone());
    Ok(g.with_name(format!("D{n}")))
}

/// The quaternion group `{±1, ±i, ±j, ±k}`.
pub fn build_quaternion() -> Result<FiniteGroup, GroupError> {
    // basis index: 0 = 1, 1 = i, 2 = j, 3 = k; element = 2 * basis + sign bit.
    const UNIT: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let mut table = Vec::with_capacity(64);
    for x in 0..8usize {
        for y in 0..8usize {
            let (u, neg) = UNIT[x / 2][y / 2];
            let sign = (x % 2 == 1) ^ (y % 2 == 1) ^ neg;
            table.push((2 * u + sign as usize) as u32);
        }
    }
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    Ok(FiniteGroup::assemble(8, table, labels)?.with_name("Q8"))
}

/// The permutation group generated by `gens` (one-line notation on
/// `0..degree`). The identity gets index 0; the rest follow breadth-first
/// discovery order.
pub fn build_from_permutations(gens: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
    let degree = gens.first().map_or(0, |g| g.len());
    for g in gens {
        let mut seen = vec![false; degree];
        if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
            return Err(GroupError::InvalidTable("generator is not a permutation".into()));
        }
    }
    let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { (0..degree).map(|i| q[p[i]]).collect() };
    let id: Vec<usize> = (0..degree).collect();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut elems = vec![id.clone()];
    index.insert(id, 0);
    let mut queue = VecDeque::from([0usize]);
    let cap = order_cap();
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let next = compose(&elems[i], g);
            if !index.contains_key(&next) {
                if elems.len() >= cap {
                    return Err(GroupError::OrderOutOfRange { order: elems.len() + 1, cap });
                }
                index.insert(next.clone(), elems.len());
                queue.push_back(elems.len());
                elems.push(next);
            }
        }
    }
    let n = elems.len();
    let mut table = Vec::with_capacity(n * n);
    for a in &elems {
        for b in &elems {
            table.push(index[&compose(a, b)] as u32);
        }
    }
    let labels = elems
        .iter()
        .map(|p| format!("[{}]", p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")))
        .collect();
    FiniteGroup::assemble(n, table, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_fixtures() {
        let z1 = build_cyclic(1).unwrap();
        assert_eq!(z1.order(), 1);
        assert_eq!(z1.identity(), 0);
        let z5 = build_cyclic(5).unwrap();
        assert_eq!(z5.mul(2, 4), 1);
        let z6 = build_cyclic(6).unwrap();
        assert_eq!(z6.inv(2), 4);
        assert!(matches!(build_cyclic(0), Err(GroupError::OrderOutOfRange { .. })));
        assert!(matches!(
            build_cyclic(DEFAULT_ORDER_CAP + 1),
            Err(GroupError::OrderOutOfRange { .. })
        ));
    }

    #[test]
    fn klein_is_self_inverse() {
        let z2 = build_cyclic(2).unwrap();
        let v = build_product(&z2, &z2).unwrap();
        assert_eq!(v.order(), 4);
        assert!(v.elements().all(|x| v.inv(x) == x));
    }

    #[test]
    fn semidirect_law() {
        let sp = build_semidirect(&SemidirectSpec::negation(8).unwrap()).unwrap();
        let g = &sp.group;
        // (1,-)(1,-) = (1 + (-1), +) = (0, +)
        let x = g.element("(1,1)").unwrap();
        assert_eq!(g.label(g.mul(x, x)), "(0,0)");
        assert!(sp.normal.is_normal());
        assert_eq!(sp.normal.order(), 8);
        assert!(!g.is_abelian());
    }

    #[test]
    fn rejects_bad_action() {
        let n = Arc::new(build_cyclic(5).unwrap());
        let k = Arc::new(build_cyclic(2).unwrap());
        // x -> 2x is an automorphism of Z5 but has order 4, not 2.
        let double: Vec<usize> = (0..5).map(|x| 2 * x % 5).collect();
        let spec = SemidirectSpec {
            n_part: n,
            k_part: k,
            action: vec![(0..5).collect(), double],
        };
        assert!(matches!(build_semidirect(&spec), Err(GroupError::InvalidAction(_))));
    }

    #[test]
    fn rejects_non_group_tables() {
        // Z3 table with one swapped entry breaks the latin square.
        let t = vec![0, 1, 2, 1, 1, 0, 2, 0, 1];
        assert!(FiniteGroup::from_table(t, vec!["a".into(), "b".into(), "c".into()]).is_err());
        let labels = vec!["x".to_string(), "x".to_string()];
        assert!(matches!(
            FiniteGroup::from_table(vec![0, 1, 1, 0], labels),
            Err(GroupError::DuplicateLabel(_))
        ));
    }

    #[test]
    fn latin_square_but_not_associative() {
        // A loop of order 5 that is not a group.
        let t = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 4, 0, 1, 3, //
            3, 2, 4, 0, 1, //
            4, 3, 1, 2, 0,
        ];
        let labels = (0..5).map(|i| i.to_string()).collect();
        assert!(matches!(
            FiniteGroup::from_table(t, labels),
            Err(GroupError::NotAssociative { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let d3 = build_dihedral(3).unwrap();
        let text = serde_json::to_string(&d3.to_json()).unwrap();
        let back = FiniteGroup::from_json(serde_json::from_str(&text).unwrap()).unwrap();
        assert!(back.same_as(&d3));
        let nested = r#"{"order":2,"cayley":[[0,1],[1,0]],"labels":["e","a"]}"#;
        let z2 = FiniteGroup::from_json(serde_json::from_str(nested).unwrap()).unwrap();
        assert_eq!(z2.inv(1), 1);
    }

    #[test]
    fn quaternion_relations() {
        let q = build_quaternion().unwrap();
        let (i, j, k, m1) = (2, 4, 6, 1);
        assert_eq!(q.mul(i, j), k);
        assert_eq!(q.mul(j, i), 7);
        assert_eq!(q.mul(i, i), m1);
        assert_eq!(q.element_order(i), 4);
        assert!(q.check_associativity().is_ok());
    }

    #[test]
    fn generators_span() {
        let z2 = build_cyclic(2).unwrap();
        let z4 = build_cyclic(4).unwrap();
        let g = build_product(&z2, &z4).unwrap();
        let gens = g.generators();
        assert_eq!(crate::subgroup::closure(&g, &gens).count(), 8);
        assert!(gens.len() <= 2);
    }
}
