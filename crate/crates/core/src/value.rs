//! Exact scalar values: rationals and the extended half-line `[0, ∞]`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number. All times and random-variable values use it.
pub type Rational = num_rational::Rational64;

/// Parses `p/q` or an integer into an exact rational.
pub fn parse_rational(token: &str) -> Result<Rational> {
    let bad = || Error::Instance(format!("malformed rational `{token}`"));
    if token.is_empty() || token.contains(char::is_whitespace) {
        return Err(bad());
    }
    let (num, den) = match token.split_once('/') {
        Some((p, q)) => (p, q),
        None => (token, "1"),
    };
    let num: i64 = num.parse().map_err(|_| bad())?;
    if den.starts_with(['+', '-']) {
        return Err(bad());
    }
    let den: i64 = den.parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// A point of `[0, ∞]` (or of `ℚ ∪ {∞}` before validation).
///
/// `Finite` sorts before `Infinite`, so the derived order is the order of the
/// extended half-line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Time {
    Finite(Rational),
    Infinite,
}

impl Time {
    pub const ZERO: Time = Time::Finite(Rational::ZERO);

    pub fn from_int(n: i64) -> Time {
        Time::Finite(Rational::from_integer(n))
    }

    pub fn finite(&self) -> Option<Rational> {
        match self {
            Time::Finite(q) => Some(*q),
            Time::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Time::Finite(_))
    }

    /// `∞ + x = ∞`.
    pub fn add(self, other: Time) -> Time {
        match (self, other) {
            (Time::Finite(a), Time::Finite(b)) => Time::Finite(a + b),
            _ => Time::Infinite,
        }
    }

    /// Subtraction; `∞ − ∞` is rejected and `x − ∞` has no value in `[0, ∞]`.
    pub fn checked_sub(self, other: Time) -> Result<Time> {
        match (self, other) {
            (Time::Finite(a), Time::Finite(b)) => Ok(Time::Finite(a - b)),
            (Time::Infinite, Time::Finite(_)) => Ok(Time::Infinite),
            (Time::Infinite, Time::Infinite) => {
                Err(Error::UndefinedArithmetic("∞ − ∞".into()))
            }
            (Time::Finite(_), Time::Infinite) => {
                Err(Error::UndefinedArithmetic("finite − ∞".into()))
            }
        }
    }

    /// `λ·∞ = ∞` for `λ > 0`; `0·∞` is rejected.
    pub fn scale(self, lambda: Rational) -> Result<Time> {
        match self {
            Time::Finite(a) => Ok(Time::Finite(a * lambda)),
            Time::Infinite if lambda.is_positive() => Ok(Time::Infinite),
            Time::Infinite => Err(Error::UndefinedArithmetic(format!("{lambda}·∞"))),
        }
    }

    /// Compares a time to a finite level.
    pub fn cmp_level(&self, level: Rational) -> Ordering {
        match self {
            Time::Finite(q) => q.cmp(&level),
            Time::Infinite => Ordering::Greater,
        }
    }

    pub fn le_level(&self, level: Rational) -> bool {
        self.cmp_level(level) != Ordering::Greater
    }

    pub fn lt_level(&self, level: Rational) -> bool {
        self.cmp_level(level) == Ordering::Less
    }

    pub fn is_nonnegative(&self) -> bool {
        match self {
            Time::Finite(q) => !q.is_negative(),
            Time::Infinite => true,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Time::Finite(q) if q.is_zero())
    }
}

impl From<Rational> for Time {
    fn from(q: Rational) -> Self {
        Time::Finite(q)
    }
}

impl fmt::Display for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Time::Finite(q) => write!(f, "{q}"),
            Time::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Time {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "inf" {
            Ok(Time::Infinite)
        } else {
            parse_rational(s).map(Time::Finite)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("3").unwrap(), q(3, 1));
        assert_eq!(parse_rational("-3/6").unwrap(), q(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("").is_err());
        assert_eq!("inf".parse::<Time>().unwrap(), Time::Infinite);
    }

    #[test]
    fn display_is_exact() {
        assert_eq!(Time::Finite(q(6, 4)).to_string(), "3/2");
        assert_eq!(Time::from_int(2).to_string(), "2");
        assert_eq!(Time::Infinite.to_string(), "inf");
    }

    #[test]
    fn infinity_conventions() {
        assert_eq!(Time::Infinite.add(Time::from_int(1)), Time::Infinite);
        assert_eq!(Time::Infinite.scale(q(1, 2)).unwrap(), Time::Infinite);
        assert!(Time::Infinite.scale(q(0, 1)).is_err());
        assert!(Time::Infinite.checked_sub(Time::Infinite).is_err());
        assert!(Time::from_int(1) < Time::Infinite);
    }
}
