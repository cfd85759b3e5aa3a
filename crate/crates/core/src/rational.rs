//! Exact rational helpers and the `p/q` text form used for all I/O.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

/// Rationals with small denominators, used for counting measures.
pub type Q = Ratio<i64>;

/// Arbitrary-precision rationals, used for circle arithmetic.
pub type BigQ = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse rational {input:?}: {reason}")]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

fn split(s: &str) -> Result<(&str, &str), ParseRationalError> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => Ok((p.trim(), q.trim())),
        None => Ok((s, "1")),
    }
}

pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let err = |reason| ParseRationalError {
        input: s.to_string(),
        reason,
    };
    let (p, q) = split(s)?;
    let p = i64::from_str(p).map_err(|_| err("bad numerator"))?;
    let q = i64::from_str(q).map_err(|_| err("bad denominator"))?;
    if q == 0 {
        return Err(err("zero denominator"));
    }
    Ok(Q::new(p, q))
}

pub fn parse_big(s: &str) -> Result<BigQ, ParseRationalError> {
    let err = |reason| ParseRationalError {
        input: s.to_string(),
        reason,
    };
    let (p, q) = split(s)?;
    let p = BigInt::from_str(p).map_err(|_| err("bad numerator"))?;
    let q = BigInt::from_str(q).map_err(|_| err("bad denominator"))?;
    if q.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(BigQ::new(p, q))
}

/// Always `p/q`, including integers (`1/1`, `0/1`).
pub fn fmt_q(q: &Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn fmt_big(q: &BigQ) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn big(p: i64, q: i64) -> BigQ {
    BigQ::new(BigInt::from(p), BigInt::from(q))
}

pub fn to_big(q: &Q) -> BigQ {
    big(*q.numer(), *q.denom())
}

/// Reduces `x` into `[0, 1)`.
pub fn frac(x: &BigQ) -> BigQ {
    let f = x - x.floor();
    debug_assert!(!f.is_negative() && f < BigQ::one());
    f
}

pub mod serde_q {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_big {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &BigQ, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_big(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigQ, D::Error> {
        let s = String::deserialize(d)?;
        parse_big(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_big_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigQ], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(fmt_big))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigQ>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_big(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("2/6").unwrap(), Q::new(1, 3));
        assert_eq!(fmt_q(&Q::new(2, 1)), "2/1");
        assert_eq!(parse_big(" 3 ").unwrap(), big(3, 1));
        assert!(parse_q("1/0").is_err());
        assert!(parse_big("x/2").is_err());
        assert_eq!(fmt_big(&frac(&big(-1, 4))), "3/4");
    }
}
