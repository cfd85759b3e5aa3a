//! The Dyson e-transform with full trace capture.

use serde::Serialize;

use crate::bits::Bits;
use crate::rational::Q;
use crate::subset::{haar, GroupSubset, HaarValue};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DysonError {
    #[error("the transform needs an abelian group (set unsafe_nonabelian to override)")]
    NonAbelian,
    #[error("both sets must be nonempty")]
    Empty,
    #[error("sets belong to different groups")]
    ParentMismatch,
    #[error("pivot {pivot} is not an element of A")]
    PivotNotInA { pivot: usize },
    #[error("pivot {pivot} would leave B empty")]
    EmptyResult { pivot: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PivotRule {
    /// Least `x ∈ A` with `0 < |x⁻¹A ∩ B| < |B|`.
    LeastShrinking,
    /// Greatest such `x`.
    GreatestShrinking,
    /// Exactly these pivots, in order. Stops early if the list runs out.
    Sequence(Vec<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    NoShrinkingPivot,
    BIsTranslateOfSubgroup,
    StepLimit,
}

#[derive(Debug, Clone)]
pub struct DysonOptions {
    /// Defaults to `|B₀| + |G|`.
    pub step_limit: Option<usize>,
    /// Allow non-abelian parents. None of the trace invariants are
    /// guaranteed then.
    pub unsafe_nonabelian: bool,
}

impl Default for DysonOptions {
    fn default() -> Self {
        DysonOptions {
            step_limit: None,
            unsafe_nonabelian: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DysonStep {
    pub pivot: usize,
    pub a: GroupSubset,
    pub b: GroupSubset,
}

#[derive(Debug, Clone)]
pub struct DysonTrace {
    pub initial: (GroupSubset, GroupSubset),
    pub steps: Vec<DysonStep>,
    pub terminated: Termination,
}

impl DysonTrace {
    /// The last pair, or the initial pair for an empty trace.
    pub fn last(&self) -> (&GroupSubset, &GroupSubset) {
        match self.steps.last() {
            Some(s) => (&s.a, &s.b),
            None => (&self.initial.0, &self.initial.1),
        }
    }

    /// All pairs including the initial one.
    pub fn pairs(&self) -> impl Iterator<Item = (&GroupSubset, &GroupSubset)> {
        std::iter::once((&self.initial.0, &self.initial.1))
            .chain(self.steps.iter().map(|s| (&s.a, &s.b)))
    }

    /// Rows `{step, pivot, A, B, measures}`; row 0 is the initial pair.
    pub fn export(&self) -> Vec<TraceRow> {
        let mut rows = vec![TraceRow::new(0, None, &self.initial.0, &self.initial.1)];
        for (i, s) in self.steps.iter().enumerate() {
            rows.push(TraceRow::new(i + 1, Some(s.pivot), &s.a, &s.b));
        }
        rows
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceRow {
    pub step: usize,
    pub pivot: Option<String>,
    #[serde(rename = "A")]
    pub a: Vec<String>,
    #[serde(rename = "B")]
    pub b: Vec<String>,
    pub measures: TraceMeasures,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceMeasures {
    #[serde(rename = "A")]
    pub a: HaarValue,
    #[serde(rename = "B")]
    pub b: HaarValue,
    #[serde(with = "crate::rational::serde_q")]
    pub sum: Q,
}

impl TraceRow {
    fn new(step: usize, pivot: Option<usize>, a: &GroupSubset, b: &GroupSubset) -> Self {
        let (ma, mb) = (haar(a), haar(b));
        TraceRow {
            step,
            pivot: pivot.map(|x| a.group().label(x).to_string()),
            a: a.labels(),
            b: b.labels(),
            measures: TraceMeasures {
                a: ma,
                b: mb,
                sum: ma.value() + mb.value(),
            },
        }
    }
}

fn step_bits(a: &GroupSubset, b: &GroupSubset, x: usize) -> (Bits, Bits) {
    let g = a.group();
    let n = g.order();
    let mut new_a = a.bits().clone();
    for y in b.iter() {
        new_a.insert(g.mul(y, x));
    }
    let new_b = Bits::from_indices(n, b.iter().filter(|&y| a.contains(g.mul(x, y))));
    (new_a, new_b)
}

/// One transform step: `(A ∪ Bx, x⁻¹A ∩ B)`.
pub fn dyson_step(
    a: &GroupSubset,
    b: &GroupSubset,
    x: usize,
) -> Result<(GroupSubset, GroupSubset), DysonError> {
    if !a.same_group(b) {
        return Err(DysonError::ParentMismatch);
    }
    if a.is_empty() || b.is_empty() {
        return Err(DysonError::Empty);
    }
    if x >= a.group().order() || !a.contains(x) {
        return Err(DysonError::PivotNotInA { pivot: x });
    }
    let (na, nb) = step_bits(a, b, x);
    Ok((a.with_bits(na), b.with_bits(nb)))
}

/// Whether `b₀⁻¹B` is a subgroup, i.e. `B` is a left coset.
pub fn is_translate_of_subgroup(b: &GroupSubset) -> bool {
    let g = b.group();
    let Some(b0) = b.iter().next() else {
        return false;
    };
    let inv = g.inv(b0);
    let h = Bits::from_indices(g.order(), b.iter().map(|y| g.mul(inv, y)));
    h.iter().all(|u| h.iter().all(|v| h.contains(g.mul(u, v))))
}

fn shrinking_pivots<'a>(a: &'a GroupSubset, b: &'a GroupSubset) -> impl DoubleEndedIterator<Item = usize> + 'a {
    let g = a.group();
    let nb = b.len();
    let members: Vec<usize> = a.iter().collect();
    members.into_iter().filter(move |&x| {
        let kept = b.iter().filter(|&y| a.contains(g.mul(x, y))).count();
        kept > 0 && kept < nb
    })
}

pub fn dyson_run(a: &GroupSubset, b: &GroupSubset, rule: &PivotRule) -> Result<DysonTrace, DysonError> {
    dyson_run_with(a, b, rule, &DysonOptions::default())
}

pub fn dyson_run_with(
    a: &GroupSubset,
    b: &GroupSubset,
    rule: &PivotRule,
    opts: &DysonOptions,
) -> Result<DysonTrace, DysonError> {
    if !a.same_group(b) {
        return Err(DysonError::ParentMismatch);
    }
    if !a.group().is_abelian() && !opts.unsafe_nonabelian {
        return Err(DysonError::NonAbelian);
    }
    if a.is_empty() || b.is_empty() {
        return Err(DysonError::Empty);
    }
    let limit = opts.step_limit.unwrap_or(b.len() + a.group().order());
    let mut steps: Vec<DysonStep> = Vec::new();
    let mut cur = (a.clone(), b.clone());
    let mut queue = match rule {
        PivotRule::Sequence(v) => v.clone().into_iter(),
        _ => Vec::new().into_iter(),
    };
    loop {
        let pivot = match rule {
            PivotRule::LeastShrinking => shrinking_pivots(&cur.0, &cur.1).next(),
            PivotRule::GreatestShrinking => shrinking_pivots(&cur.0, &cur.1).next_back(),
            PivotRule::Sequence(_) => queue.next(),
        };
        let Some(x) = pivot else {
            let terminated = if is_translate_of_subgroup(&cur.1) {
                Termination::BIsTranslateOfSubgroup
            } else {
                Termination::NoShrinkingPivot
            };
            return Ok(DysonTrace {
                initial: (a.clone(), b.clone()),
                steps,
                terminated,
            });
        };
        if steps.len() == limit {
            return Ok(DysonTrace {
                initial: (a.clone(), b.clone()),
                steps,
                terminated: Termination::StepLimit,
            });
        }
        let (na, nb) = dyson_step(&cur.0, &cur.1, x)?;
        if nb.is_empty() {
            return Err(DysonError::EmptyResult { pivot: x });
        }
        steps.push(DysonStep {
            pivot: x,
            a: na.clone(),
            b: nb.clone(),
        });
        cur = (na, nb);
    }
}
