use crate::error::{Error, Result};
use crate::space::Filtration;
use crate::times::{leq, OrderKind, RandomTime, TimeKind};
use crate::value::{Rational, Time};

use super::decompose::{article, Separation};
use super::{Explorer, Grid, Precondition, PreconditionKind, SearchOutcome};

fn check_sizes(sets: &[&[RandomTime]], filtration: &Filtration) -> Result<()> {
    for t in sets.iter().flat_map(|s| s.iter()) {
        if t.size() != filtration.size() {
            return Err(Error::SpaceMismatch { expected: filtration.size(), found: t.size() });
        }
    }
    Ok(())
}

/// Interpolant `∨A` for finite sets `A ≤ B` (pointwise) of admitted times.
///
/// The pointwise join of finitely many stopping (optional) times is again
/// one, so this never fails once the preconditions hold; the result is still
/// re-checked before it is returned.
pub fn interpolate_pointwise(
    lower: &[RandomTime],
    upper: &[RandomTime],
    filtration: &Filtration,
    kind: TimeKind,
) -> Result<RandomTime> {
    let (first, rest) = lower
        .split_first()
        .ok_or_else(|| Error::Precondition("A must be nonempty".into()))?;
    if upper.is_empty() {
        return Err(Error::Precondition("B must be nonempty".into()));
    }
    check_sizes(&[lower, upper], filtration)?;
    for (name, set) in [("A", lower), ("B", upper)] {
        if let Some(i) = set.iter().position(|t| !kind.admits(t, filtration).unwrap_or(false)) {
            return Err(Error::Precondition(format!(
                "{name}[{i}] is not {} time",
                article(kind)
            )));
        }
    }
    for (ia, a) in lower.iter().enumerate() {
        for (ib, b) in upper.iter().enumerate() {
            if let Some(i) = (0..a.size()).find(|&i| a.get(i) > b.get(i)) {
                return Err(Error::Precondition(format!(
                    "A ≤ B fails: A[{ia}] = {} exceeds B[{ib}] = {} at outcome {i}",
                    a.get(i),
                    b.get(i)
                )));
            }
        }
    }
    let join = rest.iter().try_fold(first.clone(), |acc, a| acc.join(a))?;
    let ok = kind.admits(&join, filtration)?
        && lower.iter().all(|a| a.le(&join).unwrap_or(false))
        && upper.iter().all(|b| join.le(b).unwrap_or(false));
    if !ok {
        return Err(Error::Instance("pointwise interpolant failed its re-check".into()));
    }
    Ok(join)
}

fn cone_preconditions(
    lower: &[RandomTime],
    upper: &[RandomTime],
    filtration: &Filtration,
    grid: &Grid,
    kind: TimeKind,
) -> std::result::Result<(), Precondition> {
    use PreconditionKind::*;
    if lower.is_empty() || upper.is_empty() {
        return Err(Precondition::new(EmptyInput, "A and B must be nonempty"));
    }
    if let Err(e) = check_sizes(&[lower, upper], filtration) {
        return Err(Precondition::new(SpaceMismatch, e.to_string()));
    }
    for (name, set) in [("A", lower), ("B", upper)] {
        for (i, t) in set.iter().enumerate() {
            if !t.is_finite() {
                return Err(Precondition::new(
                    InfiniteValue,
                    format!("{name}[{i}] takes the value ∞; the cone order needs finite times"),
                ));
            }
            if !kind.admits(t, filtration).expect("sizes checked") {
                return Err(Precondition::new(
                    NotAdmissible,
                    format!("{name}[{i}] is not {} time", article(kind)),
                ));
            }
            if let Some(w) = (0..t.size()).find(|&w| !grid.contains(t.get(w))) {
                return Err(Precondition::new(
                    OffGrid,
                    format!("{name}[{i}] takes {} at outcome {w}, outside grid {grid}", t.get(w)),
                ));
            }
        }
    }
    for (ia, a) in lower.iter().enumerate() {
        for (ib, b) in upper.iter().enumerate() {
            if !leq(a, b, OrderKind::Cone, filtration, kind).expect("finite, same size") {
                return Err(Precondition::new(
                    ConeOrderViolated,
                    format!("B[{ib}] − A[{ia}] is not a nonnegative {} time", kind.name()),
                ));
            }
        }
    }
    Ok(())
}

/// Searches the grid for `T` with `A ≤ T ≤ B` in the cone order: every
/// `T − a` and `b − T` must be a nonnegative admitted time.
///
/// The valid set is closed under pointwise `∧`, so its pointwise minimum is
/// returned; outcomes are assigned in order with ascending values, which makes
/// the first hit that minimum.
pub fn interpolate_cone(
    lower: &[RandomTime],
    upper: &[RandomTime],
    filtration: &Filtration,
    grid: &Grid,
    kind: TimeKind,
) -> SearchOutcome<RandomTime> {
    if let Err(p) = cone_preconditions(lower, upper, filtration, grid, kind) {
        return SearchOutcome::PreconditionFailed(p);
    }
    let grid = grid.with_infinity(false);
    let m = filtration.size();
    let fin = |t: &RandomTime| -> Vec<Rational> {
        t.values().iter().map(|v| v.finite().expect("finite")).collect()
    };
    let mut search = ConeSearch {
        lower: lower.iter().map(fin).collect(),
        upper: upper.iter().map(fin).collect(),
        ascending: grid.finite_values(),
        separation: Separation::new(filtration, kind, grid),
        value: vec![Rational::from_integer(0); m],
        m,
        explorer: Explorer::new(),
        filtration,
        kind,
    };
    match search.run(0) {
        Some(t) => SearchOutcome::Found(t),
        None => SearchOutcome::NotFoundOnGrid(search.explorer.finish(grid)),
    }
}

struct ConeSearch<'a> {
    lower: Vec<Vec<Rational>>,
    upper: Vec<Vec<Rational>>,
    ascending: Vec<Rational>,
    separation: Separation<'a>,
    value: Vec<Rational>,
    m: usize,
    explorer: Explorer,
    filtration: &'a Filtration,
    kind: TimeKind,
}

impl ConeSearch<'_> {
    fn separated(&self, outcome: usize, v: Rational) -> bool {
        (0..outcome).all(|o| {
            let w = self.value[o];
            self.lower.iter().all(|a| {
                self.separation.compatible(
                    outcome,
                    Time::Finite(v - a[outcome]),
                    o,
                    Time::Finite(w - a[o]),
                )
            }) && self.upper.iter().all(|b| {
                self.separation.compatible(
                    outcome,
                    Time::Finite(b[outcome] - v),
                    o,
                    Time::Finite(b[o] - w),
                )
            })
        })
    }

    fn run(&mut self, outcome: usize) -> Option<RandomTime> {
        if outcome == self.m {
            let t = RandomTime::new(self.value.iter().map(|v| Time::Finite(*v)).collect())
                .expect("nonnegative");
            let to_time = |v: &Vec<Rational>| {
                RandomTime::new(v.iter().map(|x| Time::Finite(*x)).collect()).expect("nonnegative")
            };
            let ok = self.lower.iter().map(to_time).all(|a| {
                leq(&a, &t, OrderKind::Cone, self.filtration, self.kind).unwrap_or(false)
            }) && self.upper.iter().map(to_time).all(|b| {
                leq(&t, &b, OrderKind::Cone, self.filtration, self.kind).unwrap_or(false)
            });
            return ok.then_some(t);
        }
        let low = self.lower.iter().map(|a| a[outcome]).max().expect("nonempty");
        let high = self.upper.iter().map(|b| b[outcome]).min().expect("nonempty");
        let candidates: Vec<Rational> =
            self.ascending.iter().copied().filter(|v| low <= *v && *v <= high).collect();
        for v in candidates {
            self.explorer.visit(outcome, &Time::Finite(v));
            if !self.separated(outcome, v) {
                continue;
            }
            self.value[outcome] = v;
            if let Some(t) = self.run(outcome + 1) {
                return Some(t);
            }
        }
        None
    }
}
