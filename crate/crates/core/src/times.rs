//! Random times on `[0, ∞]`, real-valued random variables, the stopping and
//! optional predicates, and the cone and lattice operations on them.
//!
//! Both `t ↦ [T ≤ t]` and `t ↦ F_t` are step functions whose jumps lie in the
//! finite set of check points `C = values(T) ∪ breakpoints(F)`. The predicates
//! evaluate the defining condition on a finite witness set built from `C`:
//! every check point, one interior point of each gap between consecutive check
//! points, and one point beyond the last.
//!
//! The lattice closure of the two-sided space `X` rests on the pointwise
//! identities `(S₁∧S₂)⁺ = S₁⁺∧S₂⁺` and `(S₁∧S₂)⁻ = S₁⁻∨S₂⁻`, so the level
//! sets combine as `[(S₁∧S₂)⁺ ≤ t] = [S₁⁺ ≤ t] ∪ [S₂⁺ ≤ t]` and
//! `[(S₁∧S₂)⁻ ≤ t] = [S₁⁻ ≤ t] ∩ [S₂⁻ ≤ t]`. This is the reverse of the
//! union/intersection pairing sometimes written for that argument; the
//! implementation follows the identities.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::space::{Filtration, OutcomeSet, Partition};
use crate::value::{Rational, Time};

/// Which adaptedness condition a random time must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TimeKind {
    /// `[T ≤ t] ∈ F_t` for every `t ≥ 0`.
    Stopping,
    /// `[T < t] ∈ F_t` for every `t ≥ 0` (stopping time in the wide sense).
    Optional,
}

impl TimeKind {
    pub fn from_optional_flag(optional: bool) -> Self {
        if optional {
            TimeKind::Optional
        } else {
            TimeKind::Stopping
        }
    }

    pub fn is_optional(self) -> bool {
        self == TimeKind::Optional
    }

    pub fn name(self) -> &'static str {
        match self {
            TimeKind::Stopping => "stopping",
            TimeKind::Optional => "optional",
        }
    }

    /// Does `time` satisfy this kind's condition with respect to `filtration`?
    pub fn admits(self, time: &RandomTime, filtration: &Filtration) -> Result<bool> {
        Ok(first_violation(time, filtration, self)?.is_none())
    }

    /// The partition a level set `[T ≤ c]` must be measurable in.
    ///
    /// For optional times this is the right limit `F_{c+}`: a time is optional
    /// exactly when it is a stopping time of the right-continuous
    /// regularisation. Search pruning relies on this; the predicates above do
    /// not.
    pub fn level_partition(self, filtration: &Filtration, level: Rational) -> &Partition {
        match self {
            TimeKind::Stopping => filtration.sigma_at(Time::Finite(level)),
            TimeKind::Optional => filtration.sigma_after(level),
        }
    }
}

/// Pointwise order or the order induced by the cone of stopping times.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Pointwise,
    Cone,
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::SpaceMismatch { expected, found });
    }
    Ok(())
}

/// A map `Ω → [0, ∞]` with exact rational finite values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RandomTime {
    values: Vec<Time>,
}

impl RandomTime {
    pub fn new(values: Vec<Time>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSpace("a random time needs at least one outcome".into()));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_nonnegative()) {
            return Err(Error::Negative { outcome: i, value: v.to_string() });
        }
        Ok(RandomTime { values })
    }

    pub fn from_ints(values: &[i64]) -> Result<Self> {
        RandomTime::new(values.iter().map(|&v| Time::from_int(v)).collect())
    }

    pub fn constant(size: usize, value: Time) -> Result<Self> {
        RandomTime::new(vec![value; size])
    }

    pub fn zero(size: usize) -> Self {
        RandomTime { values: vec![Time::ZERO; size] }
    }

    pub fn values(&self) -> &[Time] {
        &self.values
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, outcome: usize) -> Time {
        self.values[outcome]
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(Time::is_finite)
    }

    /// Largest finite value, if any.
    pub fn max_finite(&self) -> Option<Rational> {
        self.values.iter().filter_map(Time::finite).max()
    }

    /// `[T ≤ level]`.
    pub fn level_le(&self, level: Rational) -> OutcomeSet {
        OutcomeSet::from_indices(
            self.values.iter().enumerate().filter(|(_, v)| v.le_level(level)).map(|(i, _)| i),
        )
    }

    /// `[T < level]`.
    pub fn level_lt(&self, level: Rational) -> OutcomeSet {
        OutcomeSet::from_indices(
            self.values.iter().enumerate().filter(|(_, v)| v.lt_level(level)).map(|(i, _)| i),
        )
    }

    fn zip_with(&self, other: &RandomTime, f: impl Fn(Time, Time) -> Time) -> Result<RandomTime> {
        check_len(self.size(), other.size())?;
        Ok(RandomTime {
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect(),
        })
    }

    /// Pointwise minimum `S ∧ T`.
    pub fn meet(&self, other: &RandomTime) -> Result<RandomTime> {
        self.zip_with(other, Ord::min)
    }

    /// Pointwise maximum `S ∨ T`.
    pub fn join(&self, other: &RandomTime) -> Result<RandomTime> {
        self.zip_with(other, Ord::max)
    }

    /// Pointwise sum with `∞ + x = ∞`.
    pub fn add(&self, other: &RandomTime) -> Result<RandomTime> {
        self.zip_with(other, Time::add)
    }

    /// `λ·T` for `λ > 0`, with `λ·∞ = ∞`. `λ = 0` is accepted only on
    /// finite-valued times and gives the zero time.
    pub fn scale(&self, lambda: Rational) -> Result<RandomTime> {
        if lambda.is_negative() || (lambda.is_zero() && !self.is_finite()) {
            return Err(Error::InvalidScalar(lambda.to_string()));
        }
        let values = self.values.iter().map(|v| v.scale(lambda)).collect::<Result<_>>()?;
        Ok(RandomTime { values })
    }

    /// `Tⁿ = T·1[T ≤ n] + n·1[T > n]`.
    pub fn truncate(&self, n: i64) -> Result<RandomTime> {
        if n <= 0 {
            return Err(Error::InvalidTruncation(n));
        }
        let cap = Time::from_int(n);
        Ok(RandomTime { values: self.values.iter().map(|v| (*v).min(cap)).collect() })
    }

    /// Pointwise `S ≤ T`.
    pub fn le(&self, other: &RandomTime) -> Result<bool> {
        check_len(self.size(), other.size())?;
        Ok(self.values.iter().zip(&other.values).all(|(a, b)| a <= b))
    }

    /// `T − S` as a real random variable; both must be finite-valued.
    pub fn sub(&self, other: &RandomTime) -> Result<RealRv> {
        check_len(self.size(), other.size())?;
        let a = self.to_real()?;
        let b = other.to_real()?;
        a.sub(&b)
    }

    /// Embeds a finite-valued time into the real random variables.
    pub fn to_real(&self) -> Result<RealRv> {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v.finite().ok_or(Error::ConeOnInfinite { outcome: i }))
            .collect::<Result<_>>()?;
        Ok(RealRv { values })
    }
}

impl fmt::Display for RandomTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_values(f, &self.values)
    }
}

impl FromStr for RandomTime {
    type Err = Error;

    /// Whitespace-separated values, `inf` for ∞.
    fn from_str(s: &str) -> Result<Self> {
        RandomTime::new(s.split_whitespace().map(str::parse).collect::<Result<_>>()?)
    }
}

fn write_values<T: fmt::Display>(f: &mut fmt::Formatter<'_>, values: &[T]) -> fmt::Result {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

/// A real-valued random variable `Ω → ℚ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RealRv {
    values: Vec<Rational>,
}

impl RealRv {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSpace(
                "a random variable needs at least one outcome".into(),
            ));
        }
        Ok(RealRv { values })
    }

    pub fn from_ints(values: &[i64]) -> Result<Self> {
        RealRv::new(values.iter().map(|&v| Rational::from_integer(v)).collect())
    }

    pub fn zero(size: usize) -> Self {
        RealRv { values: vec![Rational::zero(); size] }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, outcome: usize) -> Rational {
        self.values[outcome]
    }

    fn map(&self, f: impl Fn(Rational) -> Rational) -> RealRv {
        RealRv { values: self.values.iter().map(|v| f(*v)).collect() }
    }

    fn zip_with(&self, other: &RealRv, f: impl Fn(Rational, Rational) -> Rational) -> Result<RealRv> {
        check_len(self.size(), other.size())?;
        Ok(RealRv {
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect(),
        })
    }

    /// `S⁺ = S ∨ 0`.
    pub fn pos_part(&self) -> RealRv {
        self.map(|v| v.max(Rational::zero()))
    }

    /// `S⁻ = (−S) ∨ 0`.
    pub fn neg_part(&self) -> RealRv {
        self.map(|v| (-v).max(Rational::zero()))
    }

    /// `|S| = S ∨ (−S)`.
    pub fn abs(&self) -> RealRv {
        self.map(|v| v.abs())
    }

    pub fn meet(&self, other: &RealRv) -> Result<RealRv> {
        self.zip_with(other, Ord::min)
    }

    pub fn join(&self, other: &RealRv) -> Result<RealRv> {
        self.zip_with(other, Ord::max)
    }

    pub fn add(&self, other: &RealRv) -> Result<RealRv> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &RealRv) -> Result<RealRv> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, alpha: Rational) -> RealRv {
        self.map(|v| v * alpha)
    }

    pub fn le(&self, other: &RealRv) -> Result<bool> {
        check_len(self.size(), other.size())?;
        Ok(self.values.iter().zip(&other.values).all(|(a, b)| a <= b))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// Views a nonnegative random variable as a finite random time.
    pub fn to_time(&self) -> Result<RandomTime> {
        RandomTime::new(self.values.iter().map(|v| Time::Finite(*v)).collect())
    }
}

impl fmt::Display for RealRv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_values(f, &self.values)
    }
}

/// One evaluation of the defining condition at a witness time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckRecord {
    pub at: Rational,
    pub level_set: OutcomeSet,
    pub measurable: bool,
}

/// Times at which the defining condition is evaluated.
///
/// `interior` adds the midpoint of each gap between consecutive check points
/// and one point past the last; both step functions are constant on each gap,
/// so one witness decides it.
pub fn witness_times(time: &RandomTime, filtration: &Filtration, interior: bool) -> Vec<Rational> {
    let mut points: Vec<Rational> = filtration
        .breakpoints()
        .chain(time.values().iter().filter_map(Time::finite))
        .collect();
    points.sort();
    points.dedup();
    if !interior {
        return points;
    }
    let mut out = Vec::with_capacity(points.len() * 2 + 1);
    for (k, p) in points.iter().enumerate() {
        out.push(*p);
        match points.get(k + 1) {
            Some(next) => out.push((*p + *next) / Rational::from_integer(2)),
            None => out.push(*p + Rational::one()),
        }
    }
    out
}

fn check_at(time: &RandomTime, filtration: &Filtration, kind: TimeKind, at: Rational) -> CheckRecord {
    let level_set = match kind {
        TimeKind::Stopping => time.level_le(at),
        TimeKind::Optional => time.level_lt(at),
    };
    let measurable = filtration.sigma_at(Time::Finite(at)).is_measurable(level_set);
    CheckRecord { at, level_set, measurable }
}

fn witnesses_for(time: &RandomTime, filtration: &Filtration, kind: TimeKind) -> Vec<Rational> {
    // `[T < t]` is left-continuous, so its gaps always need a witness; for
    // `[T ≤ t]` the value at a check point already decides the following gap
    // unless an exclusive boundary splits it.
    let interior = kind == TimeKind::Optional || filtration.has_exclusive();
    witness_times(time, filtration, interior)
}

/// First witness at which the condition fails, if any.
pub fn first_violation(
    time: &RandomTime,
    filtration: &Filtration,
    kind: TimeKind,
) -> Result<Option<CheckRecord>> {
    check_len(filtration.size(), time.size())?;
    Ok(witnesses_for(time, filtration, kind)
        .into_iter()
        .map(|at| check_at(time, filtration, kind, at))
        .find(|r| !r.measurable))
}

/// Full list of evaluations, used as a certificate.
pub fn transcript(time: &RandomTime, filtration: &Filtration, kind: TimeKind) -> Result<Vec<CheckRecord>> {
    check_len(filtration.size(), time.size())?;
    Ok(witnesses_for(time, filtration, kind)
        .into_iter()
        .map(|at| check_at(time, filtration, kind, at))
        .collect())
}

/// `[T ≤ t] ∈ F_t` for every `t ≥ 0`.
pub fn is_stopping_time(time: &RandomTime, filtration: &Filtration) -> Result<bool> {
    TimeKind::Stopping.admits(time, filtration)
}

/// `[T < t] ∈ F_t` for every `t ≥ 0`.
pub fn is_optional_time(time: &RandomTime, filtration: &Filtration) -> Result<bool> {
    TimeKind::Optional.admits(time, filtration)
}

/// Membership in `X = {S : [S⁺ ≤ t] ∈ F_t and [S⁻ ≤ t] ∈ F_t for all t}`
/// (with `<` in place of `≤` for the optional kind).
pub fn is_member_x(rv: &RealRv, filtration: &Filtration, kind: TimeKind) -> Result<bool> {
    check_len(filtration.size(), rv.size())?;
    let pos = rv.pos_part().to_time()?;
    let neg = rv.neg_part().to_time()?;
    Ok(kind.admits(&pos, filtration)? && kind.admits(&neg, filtration)?)
}

/// `S ≤ T` in the given order.
///
/// The cone order holds iff `T − S` is nonnegative and is itself a stopping
/// (or optional) time; it needs finite values on both sides.
pub fn leq(
    lower: &RandomTime,
    upper: &RandomTime,
    order: OrderKind,
    filtration: &Filtration,
    kind: TimeKind,
) -> Result<bool> {
    match order {
        OrderKind::Pointwise => lower.le(upper),
        OrderKind::Cone => {
            let diff = upper.sub(lower)?;
            if !diff.is_nonnegative() {
                return Ok(false);
            }
            kind.admits(&diff.to_time()?, filtration)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Boundary, FiltrationEntry, SampleSpace};

    fn late_split(boundary: Boundary) -> Filtration {
        let space = SampleSpace::new(["a", "b"]).unwrap();
        Filtration::new(
            space,
            vec![
                FiltrationEntry {
                    time: Rational::zero(),
                    partition: Partition::trivial(2),
                    boundary: Boundary::Inclusive,
                },
                FiltrationEntry {
                    time: Rational::one(),
                    partition: Partition::discrete(2),
                    boundary,
                },
            ],
        )
        .unwrap()
    }

    fn t(s: &str) -> RandomTime {
        s.parse().unwrap()
    }

    fn rv(v: &[i64]) -> RealRv {
        RealRv::from_ints(v).unwrap()
    }

    #[test]
    fn stopping_examples() {
        let f = late_split(Boundary::Inclusive);
        assert!(is_stopping_time(&t("1 2"), &f).unwrap());
        assert!(!is_stopping_time(&t("0 1"), &f).unwrap());
        assert!(is_stopping_time(&t("1/3 1/3"), &f).unwrap());
        assert!(is_stopping_time(&t("inf inf"), &f).unwrap());
        assert!(is_stopping_time(&t("1 inf"), &f).unwrap());
        assert!(is_stopping_time(&t("1 2 3"), &f).is_err());
    }

    #[test]
    fn optional_examples() {
        let f = late_split(Boundary::Exclusive);
        assert!(is_optional_time(&t("1 2"), &f).unwrap());
        assert!(!is_stopping_time(&t("1 2"), &f).unwrap());
        assert!(is_optional_time(&t("5/2 5/2"), &f).unwrap());
        // [T < t] = {a} on (0, 1] while F_t is trivial there.
        assert!(!is_optional_time(&t("0 1"), &late_split(Boundary::Inclusive)).unwrap());
    }

    #[test]
    fn transcript_records_failure() {
        let f = late_split(Boundary::Inclusive);
        let tr = transcript(&t("0 1"), &f, TimeKind::Stopping).unwrap();
        let bad = tr.iter().find(|r| !r.measurable).unwrap();
        assert_eq!(bad.at, Rational::zero());
        assert_eq!(bad.level_set, OutcomeSet::singleton(0));
    }

    #[test]
    fn time_operations() {
        assert_eq!(t("1 2").meet(&t("2 1")).unwrap(), t("1 1"));
        assert_eq!(t("1 2").join(&t("2 1")).unwrap(), t("2 2"));
        assert_eq!(t("1 inf").add(&t("1 1")).unwrap(), t("2 inf"));
        assert_eq!(t("2 4").scale(Rational::new(3, 2)).unwrap(), t("3 6"));
        assert_eq!(t("2 4").scale(Rational::zero()).unwrap(), t("0 0"));
        assert!(t("2 inf").scale(Rational::zero()).is_err());
        assert!(t("2 4").scale(Rational::new(-1, 2)).is_err());
        assert!(t("1 2").meet(&t("1")).is_err());
        assert!("1 -2".parse::<RandomTime>().is_err());
    }

    #[test]
    fn truncation_examples() {
        assert_eq!(t("1 2").truncate(1).unwrap(), t("1 1"));
        assert_eq!(t("inf 3").truncate(2).unwrap(), t("2 2"));
        assert_eq!(t("1 1/2").truncate(3).unwrap(), t("1 1/2"));
        assert!(t("1 2").truncate(0).is_err());
    }

    #[test]
    fn parts_examples() {
        let s = rv(&[-1, 2]);
        assert_eq!(s.pos_part(), rv(&[0, 2]));
        assert_eq!(s.neg_part(), rv(&[1, 0]));
        assert_eq!(rv(&[3, 0]).neg_part(), rv(&[0, 0]));
        assert_eq!(RealRv::zero(2).pos_part(), RealRv::zero(2));
        assert_eq!(s.join(&s.scale(-Rational::one())).unwrap(), s.abs());
    }

    #[test]
    fn member_x_examples() {
        let f = late_split(Boundary::Inclusive);
        assert!(is_member_x(&rv(&[1, 2]), &f, TimeKind::Stopping).unwrap());
        let diff = t("1 2").sub(&t("1 1")).unwrap();
        assert_eq!(diff, rv(&[0, 1]));
        assert!(!is_member_x(&diff, &f, TimeKind::Stopping).unwrap());
        assert!(is_member_x(&rv(&[-1, -1]), &f, TimeKind::Stopping).unwrap());
    }

    #[test]
    fn rv_operations() {
        assert_eq!(rv(&[1, 2]).meet(&rv(&[2, 1])).unwrap(), rv(&[1, 1]));
        assert_eq!(rv(&[1, 2]).sub(&rv(&[1, 1])).unwrap(), rv(&[0, 1]));
        assert!(rv(&[1, 2]).add(&rv(&[1])).is_err());
    }

    #[test]
    fn leq_examples() {
        let f = late_split(Boundary::Inclusive);
        let k = TimeKind::Stopping;
        assert!(leq(&t("1 1"), &t("2 2"), OrderKind::Cone, &f, k).unwrap());
        assert!(!leq(&t("1 1"), &t("1 2"), OrderKind::Cone, &f, k).unwrap());
        assert!(leq(&t("1 1"), &t("1 2"), OrderKind::Pointwise, &f, k).unwrap());
        assert!(!leq(&t("2 2"), &t("1 1"), OrderKind::Cone, &f, k).unwrap());
        assert!(matches!(
            leq(&t("1 1"), &t("1 inf"), OrderKind::Cone, &f, k),
            Err(Error::ConeOnInfinite { outcome: 1 })
        ));
    }

    #[test]
    fn scaling_below_one_can_leave_the_stopping_times() {
        // [T/2 ≤ 1/2] = {a} while F_{1/2} is still trivial.
        let f = late_split(Boundary::Inclusive);
        let half = t("1 2").scale(Rational::new(1, 2)).unwrap();
        assert!(is_stopping_time(&t("1 2"), &f).unwrap());
        assert!(!is_stopping_time(&half, &f).unwrap());
        assert!(is_stopping_time(&t("1 2").scale(Rational::new(3, 2)).unwrap(), &f).unwrap());
    }
}
