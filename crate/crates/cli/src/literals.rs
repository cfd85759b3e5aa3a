//! Text forms of circle sets and twisted elements.

use critlab_core::rational::{parse_big, BigQ};
use critlab_core::torus::{ArcSet, TwistedElem};

use crate::report::{parse_err, CliError};

/// `lo..hi` arcs, `+p` added points and `-p` removed points, separated by
/// commas; `full` and `empty` are accepted on their own.
pub fn parse_arcset(s: &str) -> Result<ArcSet, CliError> {
    let s = s.trim();
    match s {
        "full" => return Ok(ArcSet::full()),
        "empty" | "" => return Ok(ArcSet::empty()),
        _ => {}
    }
    let mut set = ArcSet::empty();
    let (mut added, mut removed): (Vec<BigQ>, Vec<BigQ>) = (Vec::new(), Vec::new());
    for token in s.split(',').map(str::trim) {
        if let Some(p) = token.strip_prefix('+') {
            added.push(parse_big(p).map_err(parse_err)?);
        } else if let Some(p) = token.strip_prefix('-') {
            removed.push(parse_big(p).map_err(parse_err)?);
        } else if let Some((lo, hi)) = token.split_once("..") {
            let arc = ArcSet::interval(parse_big(lo).map_err(parse_err)?, parse_big(hi).map_err(parse_err)?)
                .map_err(parse_err)?;
            set = set.union(&arc).map_err(parse_err)?;
        } else {
            return Err(parse_err(format!("cannot parse arc token {token:?}, expected lo..hi, +p or -p")));
        }
    }
    set.with_points(added, removed).map_err(parse_err)
}

/// `u`, `u,+`, `u,-`, optionally in parentheses.
pub fn parse_twisted(s: &str) -> Result<TwistedElem, CliError> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    let (u, sign) = match inner.split_once(',') {
        Some((u, sign)) => (u, sign.trim()),
        None => (inner, "+"),
    };
    let plus = match sign {
        "+" | "+1" | "1" => true,
        "-" | "-1" => false,
        other => return Err(parse_err(format!("sign must be + or -, found {other:?}"))),
    };
    Ok(TwistedElem::new(parse_big(u).map_err(parse_err)?, plus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use critlab_core::rational::big;

    #[test]
    fn arcs_and_points() {
        let s = parse_arcset("0..1/4, 1/2..5/8, +3/4, -1/8").unwrap();
        assert_eq!(s.measure(), big(3, 8));
        assert!(s.contains(&big(3, 4)) && !s.contains(&big(1, 8)));
        assert!(parse_arcset("0..x").is_err());
        assert!(parse_arcset("1/4").is_err());
    }

    #[test]
    fn twisted_elements() {
        assert_eq!(parse_twisted("(1/4,-)").unwrap(), TwistedElem::new(big(1, 4), false));
        assert_eq!(parse_twisted("5/4").unwrap(), TwistedElem::new(big(1, 4), true));
        assert!(parse_twisted("1/4,*").is_err());
    }
}
