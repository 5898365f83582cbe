//! Exact rationals and their canonical string form `"p/q"`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`. The fraction must already be in lowest terms with
/// a positive denominator; `"2/4"` and `"1/-2"` are rejected.
pub fn parse_q(s: &str) -> Result<Q> {
    let bad = |reason: &str| Error::Parse { input: s.to_string(), reason: reason.to_string() };
    let t = s.trim();
    if t.is_empty() || t != s {
        return Err(bad("expected `p/q` without surrounding whitespace"));
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (t, None),
    };
    let parse_int = |x: &str| -> Result<BigInt> {
        let digits = x.strip_prefix('-').unwrap_or(x);
        if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad("not an integer"));
        }
        x.parse::<BigInt>().map_err(|_| bad("not an integer"))
    };
    let p = parse_int(num)?;
    let d = match den {
        None => BigInt::one(),
        Some(b) => {
            if b.starts_with('-') {
                return Err(bad("denominator must be positive"));
            }
            let d = parse_int(b)?;
            if d.is_zero() {
                return Err(bad("zero denominator"));
            }
            d
        }
    };
    if !p.gcd(&d).is_one() && !(p.is_zero() && d.is_one()) {
        return Err(bad("fraction is not reduced"));
    }
    Ok(Q::new_raw(p, d))
}

/// Canonical string form: `"p/q"`, or `"p"` when the denominator is one.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}

/// Serde adapter for a single rational stored as a string.
pub mod serde_q {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for an optional rational.
pub mod serde_opt_q {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&fmt_q(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Q>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|v| parse_q(&v).map_err(serde::de::Error::custom)).transpose()
    }
}
