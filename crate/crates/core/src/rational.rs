//! Exact rational helpers shared by every analysis path.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed rational {text:?}: {reason}")]
pub struct RationalParseError {
    pub text: String,
    pub reason: &'static str,
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses a signed fraction `"a/b"` or a bare integer.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let err = |reason| RationalParseError {
        text: text.to_string(),
        reason,
    };
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err("numerator is not an integer"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| err("denominator is not an integer"))?;
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Canonical `"a/b"` rendering (always with a denominator, reduced).
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // very large numerators/denominators: go through strings
        let n: f64 = value.numer().to_string().parse().unwrap_or(f64::NAN);
        let d: f64 = value.denom().to_string().parse().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn dot_int(u: &[i64], w: &[Rational]) -> Rational {
    u.iter()
        .zip(w)
        .fold(Rational::zero(), |acc, (a, b)| acc + b * BigInt::from(*a))
}

pub fn dot(u: &[Rational], w: &[Rational]) -> Rational {
    u.iter()
        .zip(w)
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

pub fn ceil_to_i64(value: &Rational) -> Option<i64> {
    value.ceil().to_integer().to_i64()
}

pub fn floor_to_i64(value: &Rational) -> Option<i64> {
    value.floor().to_integer().to_i64()
}

/// Least common multiple of all denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| num_integer::lcm(acc, v.denom().clone()))
}

pub fn abs(value: &Rational) -> Rational {
    value.abs()
}

/// Formats a rational vector as `(a, b, ...)` with reduced fractions, for reports.
pub fn format_vector(values: &[Rational]) -> String {
    let parts: Vec<String> = values
        .iter()
        .map(|v| {
            if v.is_integer() {
                v.numer().to_string()
            } else {
                format!("{}/{}", v.numer(), v.denom())
            }
        })
        .collect();
    format!("({})", parts.join(", "))
}

/// Serde adapter: rationals as `"a/b"` strings.
pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rational_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(values.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}
