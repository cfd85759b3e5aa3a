//! Exhaustive pair surveys over families of small groups.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog::{parse_group, small_groups, SpecError};
use crate::group::{FiniteGroup, GroupRef};
use crate::rational::{serde_q, Q};
use crate::reduction::{kemperman_reduce, kneser_reduce, vosper_classify, ReductionError};
use crate::subset::{GroupSubset, PairClass, PairTag};
use crate::sweep::{sweep_pairs, SweepTooLarge};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `Z1 .. Zmax`.
    Cyclic,
    /// `D1 .. Dmax`.
    Dihedral,
    /// `Z2xZ1 .. Z2xZmax`.
    Product,
    /// Every catalog group of order at most `max`.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Filter {
    All,
    Critical,
    Full,
    Subcritical,
    Supercritical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    None,
    Kneser,
    Kemperman,
    Vosper,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown {what} {value:?}, expected one of {options}")]
pub struct ParseOptionError {
    what: &'static str,
    value: String,
    options: &'static str,
}

macro_rules! named {
    ($ty:ty, $what:literal, $($name:literal => $val:expr),+) => {
        impl FromStr for $ty {
            type Err = ParseOptionError;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($name => Ok($val),)+
                    _ => Err(ParseOptionError {
                        what: $what,
                        value: s.to_string(),
                        options: concat!($($name, " "),+),
                    }),
                }
            }
        }
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                $(if *self == $val { return f.write_str($name); })+
                unreachable!()
            }
        }
    };
}

named!(Family, "family", "cyclic" => Family::Cyclic, "dihedral" => Family::Dihedral, "product" => Family::Product, "all" => Family::All);
named!(Filter, "filter", "all" => Filter::All, "critical" => Filter::Critical, "full" => Filter::Full, "subcritical" => Filter::Subcritical, "supercritical" => Filter::Supercritical);
named!(Check, "check", "none" => Check::None, "kneser" => Check::Kneser, "kemperman" => Check::Kemperman, "vosper" => Check::Vosper);

impl Filter {
    pub fn accepts(self, tag: PairTag) -> bool {
        match self {
            Filter::All => true,
            Filter::Critical => tag == PairTag::CriticalSum,
            Filter::Full => tag == PairTag::CriticalFull,
            Filter::Subcritical => tag == PairTag::SubCritical,
            Filter::Supercritical => tag == PairTag::SuperCritical,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurveyError {
    #[error(transparent)]
    TooLarge(#[from] SweepTooLarge),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyOptions {
    pub family: Family,
    pub max: usize,
    pub filter: Filter,
    pub check: Check,
}

/// Groups of the family, in survey order.
pub fn family_groups(family: Family, max: usize) -> Result<Vec<FiniteGroup>, SpecError> {
    let spec = |s: String| parse_group(&s);
    match family {
        Family::Cyclic => (1..=max).map(|n| spec(format!("Z{n}"))).collect(),
        Family::Dihedral => (1..=max).map(|n| spec(format!("D{n}"))).collect(),
        Family::Product => (1..=max).map(|n| spec(format!("Z2xZ{n}"))).collect(),
        Family::All => Ok(small_groups(max)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: Check,
    /// `None` when the check does not apply to the pair.
    pub passed: Option<bool>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub group: String,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    pub class: PairTag,
    #[serde(with = "serde_q")]
    pub deficit: Q,
    #[serde(with = "serde_q")]
    pub m_a: Q,
    #[serde(with = "serde_q")]
    pub m_b: Q,
    #[serde(with = "serde_q")]
    pub m_ab: Q,
    pub check: Option<CheckResult>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub group: String,
    pub order: usize,
    pub pairs: u64,
    pub matched: u64,
    /// Rows whose check failed.
    pub check_failures: u64,
}

fn not_applicable(name: Check, e: impl fmt::Display) -> CheckResult {
    CheckResult {
        name,
        passed: None,
        detail: e.to_string(),
    }
}

fn run_check(check: Check, a: &GroupSubset, b: &GroupSubset) -> Option<CheckResult> {
    let certificate = |r: Result<crate::reduction::ReductionCertificate, ReductionError>, strict: bool| match r {
        Ok(c) => {
            let v = c.validate(a, b);
            let ok = if strict { v.all_hold() } else { v.structurally_valid() };
            CheckResult {
                name: check,
                passed: Some(ok),
                detail: format!("kernel order {}, quotient order {}", c.kernel.order(), c.quotient.order()),
            }
        }
        Err(e) => not_applicable(check, e),
    };
    Some(match check {
        Check::None => return None,
        Check::Kneser => certificate(kneser_reduce(a, b), true),
        Check::Kemperman => certificate(kemperman_reduce(a, b), false),
        Check::Vosper => match vosper_classify(a, b) {
            Ok(s) => CheckResult {
                name: check,
                passed: Some(true),
                detail: format!("difference {}", a.group().label(s.difference)),
            },
            Err(crate::reduction::VosperError::NoCommonDifference) => CheckResult {
                name: check,
                passed: Some(false),
                detail: "no common difference".into(),
            },
            Err(e) => not_applicable(check, e),
        },
    })
}

/// All pairs of nonempty subsets of `g` passing `filter`, in mask order.
pub fn survey_group(g: &FiniteGroup, filter: Filter, check: Check) -> Result<(Vec<SurveyRow>, GroupSummary), SurveyError> {
    let gr: GroupRef = Arc::new(g.clone());
    let n = g.order();
    let rows = sweep_pairs(g, |a, b, ab| {
        let c = PairClass::from_counts(a.count_ones() as usize, b.count_ones() as usize, ab.count_ones() as usize, n);
        if !filter.accepts(c.tag) {
            return None;
        }
        let sa = GroupSubset::from_mask(gr.clone(), a);
        let sb = GroupSubset::from_mask(gr.clone(), b);
        Some(SurveyRow {
            group: g.name().to_string(),
            a: sa.to_literal(),
            b: sb.to_literal(),
            class: c.tag,
            deficit: c.deficit,
            m_a: c.m_a.value(),
            m_b: c.m_b.value(),
            m_ab: c.m_ab.value(),
            check: run_check(check, &sa, &sb),
        })
    })?;
    let all = 1u64 << n;
    let summary = GroupSummary {
        group: g.name().to_string(),
        order: n,
        pairs: (all - 1) * (all - 1),
        matched: rows.len() as u64,
        check_failures: rows
            .iter()
            .filter(|r| r.check.as_ref().is_some_and(|c| c.passed == Some(false)))
            .count() as u64,
    };
    Ok((rows, summary))
}

/// Progress of a survey, saved after each completed group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub options: SurveyOptions,
    pub completed_groups: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_critical(n: usize) -> u64 {
        let mut count = 0;
        for a in 1u64..1 << n {
            for b in 1u64..1 << n {
                let mut ab = 0u64;
                for x in 0..n {
                    for y in 0..n {
                        if a >> x & 1 == 1 && b >> y & 1 == 1 {
                            ab |= 1 << ((x + y) % n);
                        }
                    }
                }
                let (ka, kb, kab) = (a.count_ones(), b.count_ones(), ab.count_ones());
                if kab == ka + kb && ka + kb < n as u32 {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn critical_counts_match_oracle() {
        for g in family_groups(Family::Cyclic, 8).unwrap() {
            let (rows, summary) = survey_group(&g, Filter::Critical, Check::None).unwrap();
            assert_eq!(summary.matched, brute_critical(g.order()), "{}", g.name());
            assert!(rows.iter().all(|r| r.class == PairTag::CriticalSum));
        }
    }

    #[test]
    fn trivial_group_has_one_row() {
        let groups = family_groups(Family::Cyclic, 1).unwrap();
        assert_eq!(groups.len(), 1);
        let (rows, _) = survey_group(&groups[0], Filter::All, Check::None).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].class, PairTag::CriticalFull);
    }

    #[test]
    fn kemperman_rows_validate() {
        for g in family_groups(Family::Dihedral, 4).unwrap() {
            let (rows, summary) = survey_group(&g, Filter::Subcritical, Check::Kemperman).unwrap();
            assert_eq!(summary.check_failures, 0);
            assert!(rows.iter().all(|r| r.check.as_ref().unwrap().passed == Some(true)), "{}", g.name());
        }
    }

    #[test]
    fn options_round_trip() {
        for s in ["cyclic", "dihedral", "product", "all"] {
            assert_eq!(s.parse::<Family>().unwrap().to_string(), s);
        }
        assert!("ring".parse::<Family>().is_err());
        assert!(survey_group(&parse_group("Z17").unwrap(), Filter::All, Check::None).is_err());
    }
}
