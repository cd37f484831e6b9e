use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::times::RandomTime;
use crate::value::{Rational, Time};

/// The value set `{k/q : 0 ≤ k/q ≤ max_value}`, plus `∞` when permitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Grid {
    denominator: i64,
    max_value: Rational,
    allow_infinity: bool,
}

impl Grid {
    pub fn new(denominator: i64, max_value: Rational, allow_infinity: bool) -> Result<Self> {
        if denominator < 1 {
            return Err(Error::Precondition(format!(
                "grid denominator must be at least 1, got {denominator}"
            )));
        }
        if max_value.is_negative() {
            return Err(Error::Precondition(format!("grid maximum {max_value} is negative")));
        }
        Ok(Grid { denominator, max_value, allow_infinity })
    }

    /// Smallest grid with denominator `q` covering every finite value of
    /// `times`, admitting `∞` iff some input takes it.
    pub fn covering<'a>(denominator: i64, times: impl IntoIterator<Item = &'a RandomTime>) -> Result<Self> {
        let mut max = Rational::zero();
        let mut inf = false;
        for t in times {
            if let Some(m) = t.max_finite() {
                max = max.max(m);
            }
            inf |= !t.is_finite();
        }
        Grid::new(denominator, max, inf)
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn max_value(&self) -> Rational {
        self.max_value
    }

    pub fn allows_infinity(&self) -> bool {
        self.allow_infinity
    }

    pub fn with_infinity(self, allow: bool) -> Grid {
        Grid { allow_infinity: allow, ..self }
    }

    /// Number of finite grid values.
    pub fn finite_count(&self) -> usize {
        (self.max_value * Rational::from_integer(self.denominator)).floor().to_integer() as usize + 1
    }

    /// Finite values in ascending order.
    pub fn finite_values(&self) -> Vec<Rational> {
        (0..self.finite_count() as i64).map(|k| Rational::new(k, self.denominator)).collect()
    }

    /// All values in ascending order, `∞` last.
    pub fn values(&self) -> Vec<Time> {
        let mut v: Vec<Time> = self.finite_values().into_iter().map(Time::Finite).collect();
        if self.allow_infinity {
            v.push(Time::Infinite);
        }
        v
    }

    pub fn contains(&self, t: Time) -> bool {
        match t {
            Time::Infinite => self.allow_infinity,
            Time::Finite(v) => {
                !v.is_negative()
                    && v <= self.max_value
                    && (v * Rational::from_integer(self.denominator)).is_integer()
            }
        }
    }

    /// Index `k` of the finite grid value `k/q`.
    pub(crate) fn index_of(&self, v: Rational) -> usize {
        (v * Rational::from_integer(self.denominator)).to_integer() as usize
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} max={}", self.denominator, self.max_value)?;
        if self.allow_infinity {
            f.write_str(" +inf")?;
        }
        Ok(())
    }
}
