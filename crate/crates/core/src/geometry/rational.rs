//! Exact scalars and their textual form.
//!
//! Scalars are [`BigRational`] values, always kept in lowest terms with a
//! positive denominator. The textual form is `"p/q"`, or `"p"` when the
//! denominator is one; this is what every JSON format in the crate uses.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Shorthand for `num / den` from machine integers.
///
/// Panics if `den` is zero.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError {
    input: String,
    reason: &'static str,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational {:?}: {}", self.input, self.reason)
    }
}

impl std::error::Error for ParseRationalError {}

// Longest accepted digit run; keeps hostile inputs from costing quadratic
// time in the bigint parser.
const MAX_DIGITS: usize = 4096;

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || s.len() > MAX_DIGITS || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::parse_bytes(s.as_bytes(), 10)
}

/// Parses `"p"`, `"-p"`, `"p/q"` or `"-p/q"` with decimal digits and `q > 0`.
///
/// Surrounding whitespace is ignored; anything else (exponents, decimal
/// points, a sign on the denominator) is rejected.
pub fn parse_rational(input: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError {
        input: input.chars().take(64).collect(),
        reason,
    };
    let s = input.trim();
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let mut numer = parse_digits(num).ok_or_else(|| err("numerator is not a digit string"))?;
    let denom = match den {
        Some(d) => parse_digits(d).ok_or_else(|| err("denominator is not a digit string"))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(err("zero denominator"));
    }
    if negative {
        numer = -numer;
    }
    Ok(Rational::new(numer, denom))
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Serde adapter for a single [`Rational`] field, stored as a string.
pub mod serde_rational {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = RationalText::deserialize(d)?;
        text.into_rational().map_err(de::Error::custom)
    }

    /// Accepts `"p/q"` strings and, as a convenience, plain JSON integers.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RationalText {
        Text(String),
        Int(i64),
    }

    impl RationalText {
        pub(crate) fn into_rational(self) -> Result<Rational, String> {
            match self {
                RationalText::Text(s) => parse_rational(&s).map_err(|e| e.to_string()),
                RationalText::Int(n) => Ok(super::int(n)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational(" 4/2 ").unwrap(), int(2));
        assert_eq!(parse_rational("+7/3").unwrap(), rat(7, 3));
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "", "1/0", "1/-2", "0.5", "1e3", "--1", "1/", "/2", "a/b", "1/2/3",
        ] {
            assert!(parse_rational(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn formats_lowest_terms() {
        assert_eq!(format_rational(&rat(6, -4)), "-3/2");
        assert_eq!(format_rational(&int(5)), "5");
        assert_eq!(format_rational(&rat(0, 7)), "0");
    }
}
