use crate::error::{Error, Result};
use crate::space::{Filtration, OutcomeSet};
use crate::times::{RandomTime, TimeKind};
use crate::value::{Rational, Time};

/// The pointwise-largest stopping (or optional) time `T ≤ U`.
///
/// Sweeps the check points `c` (values of `U` and breakpoints) in ascending
/// order, keeping the level set `L = [T ≤ c]`. At each `c` the level set must
/// contain `[U ≤ c]` and the previous level, and be measurable at `c`; the
/// smallest such set is the hull of their union in the partition that governs
/// level `c`. Outcomes entering `L` at `c` get `T = c`. Any admitted `T' ≤ U`
/// has `[T' ≤ c] ⊇ L` at every step, hence `T' ≤ T`.
///
/// Between check points the level set is constant and the filtration only gets
/// finer, so the result is admitted at every `t`. A single sweep already
/// reaches the fixpoint.
pub fn max_stopping_minorant(
    upper: &RandomTime,
    filtration: &Filtration,
    kind: TimeKind,
) -> Result<RandomTime> {
    let m = filtration.size();
    if upper.size() != m {
        return Err(Error::SpaceMismatch { expected: m, found: upper.size() });
    }
    let mut points: Vec<Rational> = filtration
        .breakpoints()
        .chain(upper.values().iter().filter_map(Time::finite))
        .collect();
    points.sort();
    points.dedup();

    let mut values = vec![Time::Infinite; m];
    let mut level = OutcomeSet::EMPTY;
    for c in points {
        let partition = kind.level_partition(filtration, c);
        let grown = partition.hull(level.union(upper.level_le(c)));
        for i in grown.difference(level).iter() {
            values[i] = Time::Finite(c);
        }
        level = grown;
    }
    RandomTime::new(values)
}
