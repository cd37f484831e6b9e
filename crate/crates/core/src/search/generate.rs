//! Seeded random instances and exhaustive sweeps of small filtrations.
//!
//! Each instance draws from its own ChaCha stream selected by its index, so
//! instance `i` of seed `s` is the same no matter which thread builds it or in
//! which order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::space::{Boundary, Filtration, FiltrationEntry, Partition, SampleSpace};
use crate::times::{RandomTime, TimeKind};
use crate::value::{Rational, Time};

use super::{max_stopping_minorant, Grid};

/// The random stream for instance `index` under `seed`.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Outcome labels `a, b, c, …`.
pub fn lettered_space(size: usize) -> SampleSpace {
    let labels = (0..size).map(|i| {
        if i < 26 {
            ((b'a' + i as u8) as char).to_string()
        } else {
            format!("w{i}")
        }
    });
    SampleSpace::new(labels).expect("distinct labels")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiltrationShape {
    pub max_omega: usize,
    /// Maximum number of breakpoints, counting the one at `0`.
    pub max_breakpoints: usize,
    /// Breakpoints are drawn from the positive values of this grid.
    pub grid: Grid,
    pub allow_exclusive: bool,
}

fn random_labels<R: Rng>(rng: &mut R, size: usize) -> Partition {
    let classes = rng.random_range(1..=size);
    let labels: Vec<usize> = (0..size).map(|_| rng.random_range(0..classes)).collect();
    Partition::from_labels(&labels).expect("nonempty")
}

/// A random refining chain of partitions at random grid breakpoints.
pub fn random_filtration<R: Rng>(rng: &mut R, shape: &FiltrationShape) -> Filtration {
    let low = if shape.max_omega >= 2 { 2 } else { 1 };
    let m = rng.random_range(low..=shape.max_omega.max(1));
    let space = lettered_space(m);

    let positive: Vec<Rational> = shape.grid.finite_values().into_iter().skip(1).collect();
    let extra = rng.random_range(0..shape.max_breakpoints.max(1)).min(positive.len());
    let mut times: Vec<Rational> = rand::seq::index::sample(rng, positive.len(), extra)
        .into_iter()
        .map(|i| positive[i])
        .collect();
    times.sort();

    let mut partition = random_labels(rng, m);
    let mut entries = vec![FiltrationEntry {
        time: Rational::from_integer(0),
        partition: partition.clone(),
        boundary: Boundary::Inclusive,
    }];
    for time in times {
        partition = partition.join(&random_labels(rng, m)).expect("same size");
        let boundary = if shape.allow_exclusive && rng.random_bool(0.5) {
            Boundary::Exclusive
        } else {
            Boundary::Inclusive
        };
        entries.push(FiltrationEntry { time, partition: partition.clone(), boundary });
    }
    Filtration::new(space, entries).expect("generated chains are valid")
}

/// Uniform grid values, `∞` with probability `p_infinite` when the grid
/// allows it.
pub fn random_grid_time<R: Rng>(rng: &mut R, size: usize, grid: &Grid, p_infinite: f64) -> RandomTime {
    let finite = grid.finite_values();
    let values = (0..size)
        .map(|_| {
            if grid.allows_infinity() && rng.random_bool(p_infinite) {
                Time::Infinite
            } else {
                Time::Finite(finite[rng.random_range(0..finite.len())])
            }
        })
        .collect();
    RandomTime::new(values).expect("nonnegative")
}

/// Uniform grid values at or below `bound`.
pub fn random_grid_time_below<R: Rng>(rng: &mut R, bound: &RandomTime, grid: &Grid) -> RandomTime {
    let values = grid.values();
    let out = bound
        .values()
        .iter()
        .map(|b| {
            let allowed: Vec<Time> = values.iter().copied().filter(|v| v <= b).collect();
            allowed[rng.random_range(0..allowed.len())]
        })
        .collect();
    RandomTime::new(out).expect("nonnegative")
}

/// A random admitted time: the maximal minorant of a random grid time.
///
/// Its values lie in the values of the random time and the breakpoints, so
/// it stays on the grid whenever the breakpoints do.
pub fn random_admitted<R: Rng>(
    rng: &mut R,
    filtration: &Filtration,
    grid: &Grid,
    kind: TimeKind,
    p_infinite: f64,
) -> RandomTime {
    let u = random_grid_time(rng, filtration.size(), grid, p_infinite);
    max_stopping_minorant(&u, filtration, kind).expect("same size")
}

/// Every filtration with `1..=max_omega` outcomes, `1..=max_breakpoints`
/// entries, strictly refining partitions, breakpoints drawn from the positive
/// members of `times`, and every boundary choice.
pub fn all_filtrations(max_omega: usize, max_breakpoints: usize, times: &[Rational]) -> Vec<Filtration> {
    let mut positive: Vec<Rational> = times.iter().copied().filter(|t| *t > Rational::from_integer(0)).collect();
    positive.sort();
    positive.dedup();
    let mut out = Vec::new();
    for m in 1..=max_omega {
        let partitions = Partition::all(m);
        let space = lettered_space(m);
        for first in &partitions {
            let mut entries = vec![FiltrationEntry {
                time: Rational::from_integer(0),
                partition: first.clone(),
                boundary: Boundary::Inclusive,
            }];
            extend(&space, &partitions, &positive, max_breakpoints, &mut entries, &mut out);
        }
    }
    out
}

fn extend(
    space: &SampleSpace,
    partitions: &[Partition],
    times: &[Rational],
    max_breakpoints: usize,
    entries: &mut Vec<FiltrationEntry>,
    out: &mut Vec<Filtration>,
) {
    out.push(Filtration::new(space.clone(), entries.clone()).expect("valid by construction"));
    if entries.len() >= max_breakpoints {
        return;
    }
    let last = entries.last().expect("nonempty").clone();
    for time in times.iter().filter(|t| **t > last.time) {
        for p in partitions {
            if p == &last.partition || !p.refines(&last.partition).expect("same size") {
                continue;
            }
            for boundary in [Boundary::Inclusive, Boundary::Exclusive] {
                entries.push(FiltrationEntry { time: *time, partition: p.clone(), boundary });
                extend(space, partitions, times, max_breakpoints, entries, out);
                entries.pop();
            }
        }
    }
}
