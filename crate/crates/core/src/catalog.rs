//! Group spec mini-language and a catalog of small groups.
//!
//! Specs: `Zn`, products `Z2xZ4xZ3`, dihedral `Dn` (order `2n`), `Q8`, `A4`,
//! and semidirect products `sd:N,K,ACTION` where `N` and `K` are cyclic specs
//! and `ACTION` is `trivial`, `neg` (generator of `K` negates) or `mul:r`
//! (generator of `K` multiplies by `r`).

use std::sync::Arc;

use crate::group::*;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("cannot parse group spec {spec:?} at byte {pos}: {reason}")]
    Syntax {
        spec: String,
        pos: usize,
        reason: String,
    },
    #[error(transparent)]
    Group(#[from] GroupError),
}

fn syntax(spec: &str, pos: usize, reason: impl Into<String>) -> SpecError {
    SpecError::Syntax {
        spec: spec.to_string(),
        pos,
        reason: reason.into(),
    }
}

fn parse_num(spec: &str, part: &str, offset: usize) -> Result<usize, SpecError> {
    part.parse::<usize>()
        .map_err(|_| syntax(spec, offset, format!("expected a positive integer, found {part:?}")))
}

fn cyclic_order(spec: &str, part: &str, offset: usize) -> Result<usize, SpecError> {
    match part.strip_prefix('Z') {
        Some(n) => parse_num(spec, n, offset + 1),
        None => Err(syntax(spec, offset, "expected Zn")),
    }
}

pub fn parse_group(spec: &str) -> Result<FiniteGroup, SpecError> {
    let s = spec.trim();
    if let Some(rest) = s.strip_prefix("sd:") {
        return parse_semidirect(spec, rest, spec.len() - rest.len());
    }
    match s {
        "Q8" => return Ok(build_quaternion()?),
        "A4" => return Ok(build_a4()?),
        _ => {}
    }
    if let Some(n) = s.strip_prefix('D') {
        let n = parse_num(spec, n, 1)?;
        return Ok(build_dihedral(n)?);
    }
    let mut offset = 0;
    let mut acc: Option<FiniteGroup> = None;
    for part in s.split('x') {
        let n = cyclic_order(spec, part, offset)?;
        let z = build_cyclic(n)?;
        acc = Some(match acc {
            None => z,
            Some(g) => build_product(&g, &z)?,
        });
        offset += part.len() + 1;
    }
    acc.ok_or_else(|| syntax(spec, 0, "empty spec"))
}

fn parse_semidirect(spec: &str, rest: &str, base: usize) -> Result<FiniteGroup, SpecError> {
    let parts: Vec<&str> = rest.split(',').collect();
    if parts.len() != 3 {
        return Err(syntax(spec, base, "expected sd:N,K,ACTION"));
    }
    let n = cyclic_order(spec, parts[0], base)?;
    let k_off = base + parts[0].len() + 1;
    let k = cyclic_order(spec, parts[1], k_off)?;
    let a_off = k_off + parts[1].len() + 1;
    let sd = match parts[2] {
        "trivial" => SemidirectSpec::trivial(Arc::new(build_cyclic(n)?), Arc::new(build_cyclic(k)?)),
        "neg" => SemidirectSpec::multiplicative(n, k, n.saturating_sub(1))?,
        other => match other.strip_prefix("mul:") {
            Some(r) => SemidirectSpec::multiplicative(n, k, parse_num(spec, r, a_off + 4)?)?,
            None => return Err(syntax(spec, a_off, "action must be trivial, neg or mul:r")),
        },
    };
    let g = build_semidirect(&sd)?.group;
    Ok(Arc::try_unwrap(g)
        .unwrap_or_else(|g| (*g).clone())
        .with_name(spec.trim().to_string()))
}

/// The alternating group on four points.
pub fn build_a4() -> Result<FiniteGroup, GroupError> {
    Ok(build_from_permutations(&[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])?.with_name("A4"))
}

/// One representative of every isomorphism class of groups of order at most
/// `max_order` (supported up to 12), in order of increasing order.
pub fn small_groups(max_order: usize) -> Vec<FiniteGroup> {
    const SPECS: &[&str] = &[
        "Z1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "D3", "Z7", "Z8", "Z2xZ4", "Z2xZ2xZ2", "D4",
        "Q8", "Z9", "Z3xZ3", "Z10", "D5", "Z11", "Z12", "Z2xZ6", "D6", "A4", "sd:Z3,Z4,neg",
    ];
    assert!(max_order <= 12, "catalog only covers orders up to 12");
    SPECS
        .iter()
        .map(|s| parse_group(s).expect("catalog spec parses"))
        .filter(|g| g.order() <= max_order)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::find_isomorphism;

    #[test]
    fn parses_families() {
        assert_eq!(parse_group("Z6").unwrap().order(), 6);
        assert_eq!(parse_group("Z2xZ4").unwrap().order(), 8);
        assert_eq!(parse_group("D4").unwrap().order(), 8);
        let dic = parse_group("sd:Z3,Z4,neg").unwrap();
        assert_eq!(dic.order(), 12);
        assert!(!dic.is_abelian());
        assert_eq!(parse_group("sd:Z7,Z3,mul:2").unwrap().order(), 21);
    }

    #[test]
    fn reports_positions() {
        match parse_group("Z2xY3") {
            Err(SpecError::Syntax { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("{other:?}"),
        }
        assert!(parse_group("sd:Z5,Z2").is_err());
        assert!(matches!(parse_group("sd:Z5,Z2,mul:2"), Err(SpecError::Group(_))));
    }

    #[test]
    fn catalog_is_pairwise_non_isomorphic() {
        let gs: Vec<_> = small_groups(12).into_iter().map(Arc::new).collect();
        assert_eq!(gs.len(), 24);
        for (i, a) in gs.iter().enumerate() {
            for b in &gs[i + 1..] {
                if a.order() == b.order() {
                    assert!(find_isomorphism(a, b).unwrap().is_none(), "{} ~ {}", a.name(), b.name());
                }
            }
        }
    }
}
