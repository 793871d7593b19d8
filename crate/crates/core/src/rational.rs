//! Exact rationals and strictly positive lengths.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Builds `p/q`. Panics on `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"n"`; the result is reduced.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((_, den)) = s.split_once('/') {
        if den
            .trim()
            .parse::<BigInt>()
            .map(|d| d.is_zero())
            .unwrap_or(false)
        {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
    }
    Rational::from_str(s).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

/// Serde adapter: rationals travel as lowest-terms strings.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// An object of the reparametrization category: a strictly positive rational.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Length(Rational);

impl Length {
    pub fn new(value: Rational) -> Result<Self> {
        if value.is_positive() {
            Ok(Length(value))
        } else {
            Err(Error::NonPositiveLength(value.to_string()))
        }
    }

    /// Convenience constructor for literals; panics unless `p/q > 0`.
    pub fn of(p: i64, q: i64) -> Self {
        Length::new(ratio(p, q)).expect("literal length must be positive")
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_inner(self) -> Rational {
        self.0
    }

    /// `self - other`, if the difference is still a length.
    pub fn checked_sub(&self, other: &Length) -> Option<Length> {
        Length::new(&self.0 - &other.0).ok()
    }
}

impl Add for &Length {
    type Output = Length;
    fn add(self, rhs: &Length) -> Length {
        Length(&self.0 + &rhs.0)
    }
}

impl Add for Length {
    type Output = Length;
    fn add(self, rhs: Length) -> Length {
        Length(self.0 + rhs.0)
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Length {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Length::new(parse_rational(s)?)
    }
}

impl Serialize for Length {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Length {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Sum of a non-empty list of lengths.
pub fn total(lengths: &[Length]) -> Option<Length> {
    let mut it = lengths.iter();
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, l| &acc + l))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/2").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("4/6").unwrap(), ratio(2, 3));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn display_is_lowest_terms() {
        assert_eq!(ratio(6, 4).to_string(), "3/2");
        assert_eq!(ratio(4, 2).to_string(), "2");
        assert_eq!(ratio(1, -2).to_string(), "-1/2");
    }

    #[test]
    fn lengths_are_positive() {
        assert!(Length::new(int(0)).is_err());
        assert!(Length::new(ratio(-1, 3)).is_err());
        assert!("0".parse::<Length>().is_err());
        assert_eq!("5/10".parse::<Length>().unwrap(), Length::of(1, 2));
        assert_eq!(Length::of(1, 2).checked_sub(&Length::of(1, 2)), None);
    }
}
