//! Brute-force oracles. Nothing here shares code with the searches it checks:
//! candidates come from plain enumeration and are tested against the
//! definitions directly.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::space::Filtration;
use crate::times::{leq, OrderKind, RandomTime, TimeKind};
use crate::value::{Rational, Time};

use super::{enumerate_stopping_times, Caps, Grid};

/// Checks the defining condition at every multiple of `1/(2L)` up to one past
/// the largest value, where `L` is the lcm of all denominators in play.
///
/// Every jump of `[T ≤ t]`, `[T < t]` and `F_t` sits at a multiple of `1/L`,
/// so this grid hits every check point and an interior point of every gap.
/// Independent of the witness construction used by the predicates.
pub fn dense_admits(time: &RandomTime, filtration: &Filtration, kind: TimeKind) -> bool {
    let finite: Vec<Rational> = filtration
        .breakpoints()
        .chain(time.values().iter().filter_map(Time::finite))
        .collect();
    let lcm = finite.iter().fold(1i64, |acc, q| acc.lcm(q.denom()));
    let step = Rational::new(1, 2 * lcm);
    let end = finite.iter().copied().max().unwrap_or_else(Rational::zero) + Rational::one();
    let mut t = Rational::zero();
    while t <= end {
        let set = match kind {
            TimeKind::Stopping => time.level_le(t),
            TimeKind::Optional => time.level_lt(t),
        };
        if !filtration.sigma_at(Time::Finite(t)).is_measurable(set) {
            return false;
        }
        t += step;
    }
    true
}

/// Pointwise maximum of every enumerated admitted time below `upper`.
pub fn max_minorant(
    upper: &RandomTime,
    filtration: &Filtration,
    grid: &Grid,
    kind: TimeKind,
    caps: Caps,
) -> Result<RandomTime> {
    let all = enumerate_stopping_times(filtration, grid, kind, caps)?;
    Ok(max_minorant_from(&all, upper))
}

/// As [`max_minorant`], over a precomputed admitted list (which must contain
/// the zero time).
pub fn max_minorant_from(admitted: &[RandomTime], upper: &RandomTime) -> RandomTime {
    admitted
        .iter()
        .filter(|t| RandomTime::le(t, upper).unwrap_or(false))
        .fold(RandomTime::zero(upper.size()), |acc, t| acc.join(t).expect("same size"))
}

/// Every grid-valued decomposition `target = Σ parts`, `parts[i] ≤ bounds[i]`.
pub fn decompositions(
    target: &RandomTime,
    bounds: &[RandomTime],
    filtration: &Filtration,
    grid: &Grid,
    kind: TimeKind,
    caps: Caps,
) -> Result<Vec<Vec<RandomTime>>> {
    let all = enumerate_stopping_times(filtration, grid, kind, caps)?;
    Ok(decompositions_from(&all, target, bounds))
}

/// As [`decompositions`], over a precomputed admitted list.
pub fn decompositions_from(
    admitted: &[RandomTime],
    target: &RandomTime,
    bounds: &[RandomTime],
) -> Vec<Vec<RandomTime>> {
    let options: Vec<Vec<&RandomTime>> = bounds
        .iter()
        .map(|b| admitted.iter().filter(|t| RandomTime::le(t, b).unwrap_or(false)).collect())
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<&RandomTime> = Vec::with_capacity(bounds.len());
    product(&options, target, &mut chosen, &mut out);
    out
}

fn product<'a>(
    options: &[Vec<&'a RandomTime>],
    target: &RandomTime,
    chosen: &mut Vec<&'a RandomTime>,
    out: &mut Vec<Vec<RandomTime>>,
) {
    let k = chosen.len();
    if k == options.len() {
        let sum = chosen
            .iter()
            .fold(RandomTime::zero(target.size()), |acc, t| acc.add(t).expect("same size"));
        if &sum == target {
            out.push(chosen.iter().map(|t| (*t).clone()).collect());
        }
        return;
    }
    for t in &options[k] {
        chosen.push(t);
        product(options, target, chosen, out);
        chosen.pop();
    }
}

/// The lexicographically largest decomposition (by `parts[0]`, then
/// `parts[1]`, …), if any.
pub fn canonical_decomposition(all: &[Vec<RandomTime>]) -> Option<&Vec<RandomTime>> {
    all.iter().max()
}

/// Every finite grid-valued `T` with `A ≤ T ≤ B` in the cone order.
pub fn cone_interpolants(
    lower: &[RandomTime],
    upper: &[RandomTime],
    filtration: &Filtration,
    grid: &Grid,
    kind: TimeKind,
    caps: Caps,
) -> Result<Vec<RandomTime>> {
    let m = filtration.size();
    let grid = grid.with_infinity(false);
    caps.check(m, &grid)?;
    let values = grid.values();
    let mut digits = vec![0usize; m];
    let mut out = Vec::new();
    loop {
        let t = RandomTime::new(digits.iter().map(|&d| values[d]).collect())?;
        let mut ok = true;
        for a in lower {
            ok = ok && leq(a, &t, OrderKind::Cone, filtration, kind)?;
        }
        for b in upper {
            ok = ok && leq(&t, b, OrderKind::Cone, filtration, kind)?;
        }
        if ok {
            out.push(t);
        }
        let mut k = m;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < values.len() {
                break;
            }
            digits[k] = 0;
        }
    }
}

/// Pointwise minimum of a nonempty list.
pub fn pointwise_min(all: &[RandomTime]) -> Option<RandomTime> {
    let (first, rest) = all.split_first()?;
    Some(rest.iter().fold(first.clone(), |acc, t| acc.meet(t).expect("same size")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Boundary, FiltrationEntry, Partition, SampleSpace};
    use crate::times::{is_optional_time, is_stopping_time};

    fn late_split(boundary: Boundary) -> Filtration {
        Filtration::new(
            SampleSpace::new(["a", "b"]).unwrap(),
            vec![
                FiltrationEntry {
                    time: Rational::from_integer(0),
                    partition: Partition::trivial(2),
                    boundary: Boundary::Inclusive,
                },
                FiltrationEntry {
                    time: Rational::from_integer(1),
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

    #[test]
    fn dense_check_agrees_on_known_cases() {
        let inc = late_split(Boundary::Inclusive);
        let exc = late_split(Boundary::Exclusive);
        assert!(dense_admits(&t("1 2"), &inc, TimeKind::Stopping));
        assert!(!dense_admits(&t("0 1"), &inc, TimeKind::Stopping));
        assert!(!dense_admits(&t("0 1"), &inc, TimeKind::Optional));
        assert!(dense_admits(&t("1 2"), &exc, TimeKind::Optional));
        assert!(!dense_admits(&t("1 2"), &exc, TimeKind::Stopping));
        for s in ["1/3 1/2", "2 1", "inf 1", "1 inf", "1/2 1/2"] {
            let x = t(s);
            for f in [&inc, &exc] {
                assert_eq!(dense_admits(&x, f, TimeKind::Stopping), is_stopping_time(&x, f).unwrap());
                assert_eq!(dense_admits(&x, f, TimeKind::Optional), is_optional_time(&x, f).unwrap());
            }
        }
    }

    #[test]
    fn late_split_decompositions_are_empty() {
        let grid = Grid::new(2, Rational::from_integer(2), false).unwrap();
        let all = decompositions(
            &t("1 2"),
            &[t("1 1"), t("1 1")],
            &late_split(Boundary::Inclusive),
            &grid,
            TimeKind::Stopping,
            Caps::default(),
        )
        .unwrap();
        assert!(all.is_empty());
    }

    #[test]
    fn constants_split_canonically() {
        let f = Filtration::constant(SampleSpace::with_size(1).unwrap(), Partition::trivial(1))
            .unwrap();
        let grid = Grid::new(1, Rational::from_integer(3), false).unwrap();
        let all = decompositions(&t("3"), &[t("2"), t("2")], &f, &grid, TimeKind::Stopping, Caps::default())
            .unwrap();
        assert_eq!(all, vec![vec![t("1"), t("2")], vec![t("2"), t("1")]]);
        assert_eq!(canonical_decomposition(&all), Some(&vec![t("2"), t("1")]));
    }

    #[test]
    fn cone_interpolants_on_late_split() {
        let grid = Grid::new(1, Rational::from_integer(2), false).unwrap();
        let all = cone_interpolants(
            &[t("0 0")],
            &[t("2 2")],
            &late_split(Boundary::Inclusive),
            &grid,
            TimeKind::Stopping,
            Caps::default(),
        )
        .unwrap();
        assert_eq!(pointwise_min(&all), Some(t("0 0")));
        // 2 − T must also be a stopping time, which rules out (1,2) and (2,1).
        assert_eq!(all, vec![t("0 0"), t("1 1"), t("2 2")]);
    }
}
