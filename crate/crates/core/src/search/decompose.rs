use crate::space::{Filtration, OutcomeSet};
use crate::times::{RandomTime, TimeKind};
use crate::value::{Rational, Time};

use super::{certify, Certificate, Explorer, Grid, Precondition, PreconditionKind, SearchOutcome};

/// `S = S₁ + … + Sₙ` with each `Sᵢ ≤ Tᵢ` admitted by the filtration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StDecomposition {
    pub parts: Vec<RandomTime>,
    /// Witness evaluations of the stopping (or optional) condition, per part.
    pub certificates: Vec<Certificate>,
}

/// Partition blocks governing each finite grid level, for the pairwise
/// separation test used to prune searches.
///
/// A time `g` is admitted iff no two outcomes with `g(ω) < g(ω')` share a
/// block of the partition governing level `g(ω)`: a violation at any `t` is
/// already a violation at `t = g(ω)` because the partitions only refine.
pub(crate) struct Separation<'a> {
    filtration: &'a Filtration,
    kind: TimeKind,
    grid: Grid,
    blocks: Vec<Vec<OutcomeSet>>,
}

impl<'a> Separation<'a> {
    pub(crate) fn new(filtration: &'a Filtration, kind: TimeKind, grid: Grid) -> Self {
        let blocks = grid
            .finite_values()
            .into_iter()
            .map(|c| {
                let p = kind.level_partition(filtration, c);
                (0..filtration.size()).map(|i| p.block_of(i)).collect()
            })
            .collect();
        Separation { filtration, kind, grid, blocks }
    }

    fn together(&self, level: Rational, a: usize, b: usize) -> bool {
        if self.grid.contains(Time::Finite(level)) {
            self.blocks[self.grid.index_of(level)][a].contains(b)
        } else {
            self.kind.level_partition(self.filtration, level).block_of(a).contains(b)
        }
    }

    /// Can outcomes `a` and `b` carry the values `x` and `y`?
    pub(crate) fn compatible(&self, a: usize, x: Time, b: usize, y: Time) -> bool {
        match x.min(y) {
            _ if x == y => true,
            Time::Finite(low) => !self.together(low, a, b),
            Time::Infinite => true,
        }
    }
}

fn check_preconditions(
    target: &RandomTime,
    bounds: &[RandomTime],
    filtration: &Filtration,
    grid: &Grid,
    kind: TimeKind,
) -> Result<(), Precondition> {
    use PreconditionKind::*;
    if bounds.is_empty() {
        return Err(Precondition::new(EmptyInput, "at least one part bound is required"));
    }
    let m = filtration.size();
    let all = std::iter::once(("S".to_string(), target))
        .chain(bounds.iter().enumerate().map(|(i, t)| (format!("T{}", i + 1), t)));
    let mut sum = RandomTime::zero(m);
    for (k, (name, t)) in all.enumerate() {
        if t.size() != m {
            return Err(Precondition::new(
                SpaceMismatch,
                format!("{name} has {} outcomes, the filtration {m}", t.size()),
            ));
        }
        if !kind.admits(t, filtration).expect("sizes checked") {
            return Err(Precondition::new(
                NotAdmissible,
                format!("{name} is not {} time", article(kind)),
            ));
        }
        if let Some(i) = (0..m).find(|&i| !grid.contains(t.get(i))) {
            return Err(Precondition::new(
                OffGrid,
                format!("{name} takes {} at outcome {i}, outside grid {grid}", t.get(i)),
            ));
        }
        if k > 0 {
            sum = sum.add(t).expect("sizes checked");
        }
    }
    if let Some(i) = (0..m).find(|&i| target.get(i) > sum.get(i)) {
        return Err(Precondition::new(
            NotDominated,
            format!("S exceeds the sum of the bounds at outcome {i}"),
        ));
    }
    Ok(())
}

pub(crate) fn article(kind: TimeKind) -> &'static str {
    match kind {
        TimeKind::Stopping => "a stopping",
        TimeKind::Optional => "an optional",
    }
}

/// Searches for a grid-valued decomposition `S = S₁ + … + Sₙ`, `Sᵢ ≤ Tᵢ`,
/// with every part admitted by `kind`.
///
/// Depth-first over `S₁` at every outcome, then `S₂`, …; the last part is
/// implied by the others wherever `S` is finite. Values are tried in
/// descending order, so the first hit maximises `S₁` lexicographically, then
/// `S₂`, and so on. Branches are cut by interval bounds
/// `max(0, S − Σ_{j≠i} Tⱼ) ≤ Sᵢ ≤ min(S, Tᵢ)` and by the pairwise separation
/// test on each part.
pub fn decompose_stopping(
    target: &RandomTime,
    bounds: &[RandomTime],
    filtration: &Filtration,
    grid: &Grid,
    kind: TimeKind,
) -> SearchOutcome<StDecomposition> {
    if let Err(p) = check_preconditions(target, bounds, filtration, grid, kind) {
        return SearchOutcome::PreconditionFailed(p);
    }
    let m = filtration.size();
    let n = bounds.len();
    let mut descending = grid.values();
    descending.reverse();
    let mut search = Search {
        target: target.values(),
        bounds: bounds.iter().map(RandomTime::values).collect(),
        m,
        n,
        descending,
        separation: Separation::new(filtration, kind, *grid),
        parts: vec![vec![Time::ZERO; m]; n],
        explorer: Explorer::new(),
        filtration,
        kind,
    };
    match search.run(0) {
        Some(parts) => {
            let certificates = parts.iter().map(|p| certify(p, filtration, kind)).collect();
            SearchOutcome::Found(StDecomposition { parts, certificates })
        }
        None => SearchOutcome::NotFoundOnGrid(search.explorer.finish(*grid)),
    }
}

struct Search<'a> {
    target: &'a [Time],
    bounds: Vec<&'a [Time]>,
    m: usize,
    n: usize,
    descending: Vec<Time>,
    separation: Separation<'a>,
    parts: Vec<Vec<Time>>,
    explorer: Explorer,
    filtration: &'a Filtration,
    kind: TimeKind,
}

impl Search<'_> {
    fn candidates(&self, part: usize, outcome: usize) -> Vec<Time> {
        let cap = self.bounds[part][outcome];
        let earlier = (0..part).map(|j| self.parts[j][outcome]);
        match self.target[outcome] {
            Time::Finite(s) => {
                let used: Rational = earlier.map(|v| v.finite().expect("bounded by S")).sum();
                let rem = s - used;
                if part + 1 == self.n {
                    let v = Time::Finite(rem);
                    return if v <= cap { vec![v] } else { vec![] };
                }
                let later = (part + 1..self.n).map(|j| self.bounds[j][outcome]);
                let low = match later.fold(Time::ZERO, Time::add) {
                    Time::Finite(rest) => (rem - rest).max(Rational::from_integer(0)),
                    Time::Infinite => Rational::from_integer(0),
                };
                let high = Time::Finite(rem).min(cap);
                self.descending
                    .iter()
                    .copied()
                    .filter(|v| *v <= high && !v.lt_level(low))
                    .collect()
            }
            Time::Infinite => {
                let inf_before = (0..part).any(|j| !self.parts[j][outcome].is_finite());
                let inf_later = (part + 1..self.n).any(|j| !self.bounds[j][outcome].is_finite());
                if inf_before || inf_later {
                    self.descending.iter().copied().filter(|v| *v <= cap).collect()
                } else if cap == Time::Infinite {
                    vec![Time::Infinite]
                } else {
                    vec![]
                }
            }
        }
    }

    fn separated(&self, part: usize, outcome: usize, value: Time) -> bool {
        (0..outcome).all(|o| {
            self.separation.compatible(outcome, value, o, self.parts[part][o])
        })
    }

    fn leaf_is_valid(&self, parts: &[RandomTime]) -> bool {
        let sum = parts.iter().skip(1).fold(parts[0].clone(), |acc, p| acc.add(p).expect("sizes"));
        sum.values() == self.target
            && parts.iter().zip(&self.bounds).all(|(p, b)| p.values().iter().zip(*b).all(|(x, y)| x <= y))
            && parts.iter().all(|p| self.kind.admits(p, self.filtration).expect("sizes"))
    }

    fn run(&mut self, var: usize) -> Option<Vec<RandomTime>> {
        if var == self.n * self.m {
            let parts: Vec<RandomTime> = self
                .parts
                .iter()
                .map(|p| RandomTime::new(p.clone()).expect("nonnegative grid values"))
                .collect();
            return self.leaf_is_valid(&parts).then_some(parts);
        }
        let (part, outcome) = (var / self.m, var % self.m);
        for value in self.candidates(part, outcome) {
            self.explorer.visit(var, &value);
            if !self.separated(part, outcome, value) {
                continue;
            }
            self.parts[part][outcome] = value;
            if let Some(found) = self.run(var + 1) {
                return Some(found);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Boundary, FiltrationEntry, Partition, SampleSpace};

    fn filtration(first: Partition) -> Filtration {
        Filtration::new(
            SampleSpace::new(["a", "b"]).unwrap(),
            vec![
                FiltrationEntry {
                    time: Rational::from_integer(0),
                    partition: first,
                    boundary: Boundary::Inclusive,
                },
                FiltrationEntry {
                    time: Rational::from_integer(1),
                    partition: Partition::discrete(2),
                    boundary: Boundary::Inclusive,
                },
            ],
        )
        .unwrap()
    }

    fn t(s: &str) -> RandomTime {
        s.parse().unwrap()
    }

    fn grid(q: i64, max: i64) -> Grid {
        Grid::new(q, Rational::from_integer(max), false).unwrap()
    }

    #[test]
    fn late_split_has_no_decomposition_on_any_tested_grid() {
        let f = filtration(Partition::trivial(2));
        for q in [1, 2, 4, 8, 16, 32, 64] {
            let out = decompose_stopping(
                &t("1 2"),
                &[t("1 1"), t("1 1")],
                &f,
                &grid(q, 2),
                TimeKind::Stopping,
            );
            assert!(out.is_not_found(), "q={q}: {out:?}");
        }
    }

    #[test]
    fn discrete_start_accepts_the_pointwise_split() {
        let f = filtration(Partition::discrete(2));
        let out =
            decompose_stopping(&t("1 2"), &[t("1 1"), t("1 1")], &f, &grid(1, 2), TimeKind::Stopping);
        let d = out.found().expect("found");
        assert_eq!(d.parts, vec![t("1 1"), t("0 1")]);
        assert!(d.certificates.iter().flatten().all(|r| r.measurable));
    }

    #[test]
    fn constants_on_trivial_filtration() {
        let f = Filtration::constant(SampleSpace::with_size(1).unwrap(), Partition::trivial(1))
            .unwrap();
        let out = decompose_stopping(&t("3"), &[t("2"), t("2")], &f, &grid(1, 3), TimeKind::Stopping);
        assert_eq!(out.found().unwrap().parts, vec![t("2"), t("1")]);
    }

    #[test]
    fn infinite_target_splits() {
        let f = filtration(Partition::trivial(2));
        let g = grid(1, 2).with_infinity(true);
        let out = decompose_stopping(
            &t("inf inf"),
            &[t("inf inf"), t("2 2")],
            &f,
            &g,
            TimeKind::Stopping,
        );
        assert_eq!(out.found().unwrap().parts, vec![t("inf inf"), t("2 2")]);
        let out =
            decompose_stopping(&t("inf 1"), &[t("1 1"), t("1 1")], &f, &g, TimeKind::Stopping);
        assert!(matches!(out, SearchOutcome::PreconditionFailed(_)));
    }

    #[test]
    fn preconditions_are_reported() {
        let f = filtration(Partition::trivial(2));
        let g = grid(1, 2);
        let kind = |o: SearchOutcome<StDecomposition>| match o {
            SearchOutcome::PreconditionFailed(p) => p.kind,
            other => panic!("expected precondition failure, got {other:?}"),
        };
        use PreconditionKind::*;
        assert_eq!(kind(decompose_stopping(&t("1 2"), &[], &f, &g, TimeKind::Stopping)), EmptyInput);
        assert_eq!(
            kind(decompose_stopping(&t("0 1"), &[t("1 1")], &f, &g, TimeKind::Stopping)),
            NotAdmissible
        );
        assert_eq!(
            kind(decompose_stopping(&t("2 2"), &[t("1 1")], &f, &g, TimeKind::Stopping)),
            NotDominated
        );
        assert_eq!(
            kind(decompose_stopping(&t("1/2 1/2"), &[t("1 1")], &f, &g, TimeKind::Stopping)),
            OffGrid
        );
        assert_eq!(
            kind(decompose_stopping(&t("1"), &[t("1 1")], &f, &g, TimeKind::Stopping)),
            SpaceMismatch
        );
    }

    #[test]
    fn single_part_is_the_target() {
        let f = filtration(Partition::trivial(2));
        let out = decompose_stopping(&t("1 2"), &[t("2 2")], &f, &grid(1, 2), TimeKind::Stopping);
        assert_eq!(out.found().unwrap().parts, vec![t("1 2")]);
    }
}
