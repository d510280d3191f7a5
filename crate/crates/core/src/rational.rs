//! Small-rational helpers shared by the exponent-level modules.

use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

/// Exact rational used for exponents and parameters.
pub type Q = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {input:?} as a rational number: {reason}")]
pub struct ParseRationalError {
    pub input: String,
    pub reason: String,
}

/// Parses `"u/v"`, `"u"`, or a terminating decimal such as `"4.5"`.
pub fn parse_rational(input: &str) -> Result<Q, ParseRationalError> {
    let s = input.trim();
    let err = |reason: &str| ParseRationalError {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    if s.is_empty() {
        return Err(err("empty input"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| err("bad numerator"))?;
        let den: i64 = den.trim().parse().map_err(|_| err("bad denominator"))?;
        if den == 0 {
            return Err(err("zero denominator"));
        }
        return Ok(Q::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return Err(err("bad decimal fraction"));
        }
        let negative = int.trim_start().starts_with('-');
        let int: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| err("bad integer part"))?
        };
        let scale = 10i64.pow(frac.len() as u32);
        let frac: i64 = frac.parse().map_err(|_| err("bad decimal fraction"))?;
        let magnitude = int
            .abs()
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(|| err("overflow"))?;
        let num = if negative { -magnitude } else { magnitude };
        return Ok(Q::new(num, scale));
    }
    let v: i64 = s.parse().map_err(|_| err("not an integer or fraction"))?;
    Ok(Q::from_integer(v))
}

/// Formats as `u/v`, or `u` when the denominator is one.
pub fn format_rational(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_f64(q: &Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// Displays a rational exponent in parentheses when it is not an integer.
pub(crate) struct Exponent<'a>(pub &'a Q);

impl fmt::Display for Exponent<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() && !self.0.is_negative() {
            write!(f, "{}", self.0.numer())
        } else if self.0.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "({})", format_rational(self.0))
        }
    }
}

/// Serde adapter writing a [`Q`] as a `"u/v"` string.
pub mod serde_q {
    use super::{format_rational, parse_rational, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}
