//! Finite sample spaces, σ-algebras as partitions into atoms, and filtrations
//! as step functions of partitions.
//!
//! On a finite Ω every σ-algebra is determined by its atoms, so a set is
//! measurable iff it is a union of blocks. The global σ-algebra is the
//! discrete one, so every function on Ω is a random variable.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::value::{Rational, Time};

/// Largest supported |Ω|; outcome sets are bitmasks.
pub const MAX_OUTCOMES: usize = 64;

/// A set of outcomes, stored as a bitmask over outcome indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OutcomeSet(pub u64);

impl OutcomeSet {
    pub const EMPTY: OutcomeSet = OutcomeSet(0);

    pub fn full(size: usize) -> OutcomeSet {
        if size >= 64 {
            OutcomeSet(u64::MAX)
        } else {
            OutcomeSet((1u64 << size) - 1)
        }
    }

    pub fn singleton(index: usize) -> OutcomeSet {
        OutcomeSet(1u64 << index)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> OutcomeSet {
        indices.into_iter().fold(OutcomeSet::EMPTY, |acc, i| acc.with(i))
    }

    pub fn with(self, index: usize) -> OutcomeSet {
        OutcomeSet(self.0 | (1u64 << index))
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }

    pub fn union(self, other: OutcomeSet) -> OutcomeSet {
        OutcomeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: OutcomeSet) -> OutcomeSet {
        OutcomeSet(self.0 & other.0)
    }

    pub fn difference(self, other: OutcomeSet) -> OutcomeSet {
        OutcomeSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: OutcomeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Least outcome index, if nonempty.
    pub fn first(self) -> Option<usize> {
        (!self.is_empty()).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

/// The finite outcome set Ω with its labels in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SampleSpace {
    labels: Vec<String>,
}

impl SampleSpace {
    /// Labels must be distinct, nonempty and free of whitespace and the
    /// separators `,`, `;` and `#` used by the instance format.
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidSpace("at least one outcome is required".into()));
        }
        if labels.len() > MAX_OUTCOMES {
            return Err(Error::InvalidSpace(format!(
                "{} outcomes exceeds the limit of {MAX_OUTCOMES}",
                labels.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.chars().any(|c| c.is_whitespace() || ",;#".contains(c)) {
                return Err(Error::InvalidSpace(format!("invalid outcome label `{l}`")));
            }
            if labels[..i].contains(l) {
                return Err(Error::InvalidSpace(format!("duplicate outcome label `{l}`")));
            }
        }
        Ok(SampleSpace { labels })
    }

    /// Ω with labels `w0 .. w{size-1}`.
    pub fn with_size(size: usize) -> Result<Self> {
        SampleSpace::new((0..size).map(|i| format!("w{i}")))
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn full(&self) -> OutcomeSet {
        OutcomeSet::full(self.size())
    }
}

/// A σ-algebra on Ω given by its atoms.
///
/// Blocks are nonempty, disjoint, cover Ω, and are sorted by least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    size: usize,
    blocks: Vec<OutcomeSet>,
}

impl Partition {
    pub fn new(size: usize, mut blocks: Vec<OutcomeSet>) -> Result<Self> {
        if size == 0 || size > MAX_OUTCOMES {
            return Err(Error::InvalidPartition(format!("unsupported size {size}")));
        }
        let full = OutcomeSet::full(size);
        let mut seen = OutcomeSet::EMPTY;
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            if !b.is_subset(full) {
                return Err(Error::InvalidPartition("block outside the sample space".into()));
            }
            if !b.intersection(seen).is_empty() {
                return Err(Error::InvalidPartition("blocks overlap".into()));
            }
            seen = seen.union(*b);
        }
        if seen != full {
            return Err(Error::InvalidPartition("blocks do not cover the sample space".into()));
        }
        blocks.sort_by_key(|b| b.first());
        Ok(Partition { size, blocks })
    }

    /// Partition whose blocks are the classes of equal `labels[ω]`.
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Result<Self> {
        let mut blocks: Vec<(usize, OutcomeSet)> = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            match blocks.iter_mut().find(|(rep, _)| labels[*rep] == *l) {
                Some((_, b)) => *b = b.with(i),
                None => blocks.push((i, OutcomeSet::singleton(i))),
            }
        }
        Partition::new(labels.len(), blocks.into_iter().map(|(_, b)| b).collect())
    }

    /// `{Ω}`.
    pub fn trivial(size: usize) -> Self {
        Partition { size, blocks: vec![OutcomeSet::full(size)] }
    }

    /// All singletons.
    pub fn discrete(size: usize) -> Self {
        Partition { size, blocks: (0..size).map(OutcomeSet::singleton).collect() }
    }

    /// Every partition of a `size`-element set, via restricted growth strings.
    pub fn all(size: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut rgs = vec![0usize; size];
        loop {
            out.push(Partition::from_labels(&rgs).expect("restricted growth string"));
            // Advance to the next restricted growth string.
            let mut i = size;
            loop {
                if i <= 1 {
                    return out;
                }
                i -= 1;
                let max_prefix = rgs[..i].iter().copied().max().unwrap_or(0);
                if rgs[i] <= max_prefix {
                    rgs[i] += 1;
                    rgs[i + 1..].iter_mut().for_each(|x| *x = 0);
                    break;
                }
            }
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn blocks(&self) -> &[OutcomeSet] {
        &self.blocks
    }

    pub fn block_of(&self, index: usize) -> OutcomeSet {
        *self.blocks.iter().find(|b| b.contains(index)).expect("partition covers Ω")
    }

    fn same_space(&self, other: &Partition) -> Result<()> {
        if self.size != other.size {
            return Err(Error::SpaceMismatch { expected: self.size, found: other.size });
        }
        Ok(())
    }

    /// True iff every block of `self` lies inside some block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> Result<bool> {
        self.same_space(coarser)?;
        Ok(self.blocks.iter().all(|b| coarser.blocks.iter().any(|c| b.is_subset(*c))))
    }

    /// True iff `set` is a union of blocks.
    pub fn is_measurable(&self, set: OutcomeSet) -> bool {
        self.blocks.iter().all(|b| {
            let part = b.intersection(set);
            part.is_empty() || part == *b
        })
    }

    /// Smallest measurable superset: the union of blocks meeting `set`.
    pub fn hull(&self, set: OutcomeSet) -> OutcomeSet {
        self.blocks
            .iter()
            .filter(|b| !b.intersection(set).is_empty())
            .fold(OutcomeSet::EMPTY, |acc, b| acc.union(*b))
    }

    /// Common refinement.
    pub fn join(&self, other: &Partition) -> Result<Partition> {
        self.same_space(other)?;
        let blocks = self
            .blocks
            .iter()
            .flat_map(|a| other.blocks.iter().map(move |b| a.intersection(*b)))
            .filter(|b| !b.is_empty())
            .collect();
        Partition::new(self.size, blocks)
    }

    /// Finest common coarsening: connected components of the overlap graph.
    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        self.same_space(other)?;
        let mut components: Vec<OutcomeSet> = Vec::new();
        for b in self.blocks.iter().chain(&other.blocks) {
            let mut merged = *b;
            components.retain(|c| {
                if c.intersection(merged).is_empty() {
                    true
                } else {
                    merged = merged.union(*c);
                    false
                }
            });
            components.push(merged);
        }
        Partition::new(self.size, components)
    }

    /// Atoms of the σ-algebra generated by `sets`: outcomes are equivalent iff
    /// they belong to exactly the same input sets.
    pub fn generated(space: &SampleSpace, sets: &[OutcomeSet]) -> Result<Partition> {
        let full = space.full();
        if let Some(bad) = sets.iter().find(|s| !s.is_subset(full)) {
            return Err(Error::InvalidPartition(format!(
                "set {:#b} is not a subset of the sample space",
                bad.0
            )));
        }
        let fingerprints: Vec<Vec<bool>> = (0..space.size())
            .map(|i| sets.iter().map(|s| s.contains(i)).collect())
            .collect();
        Partition::from_labels(&fingerprints)
    }

    /// Renders blocks as `a,b;c` using the space's labels.
    pub fn display<'a>(&'a self, space: &'a SampleSpace) -> impl fmt::Display + 'a {
        DisplayPartition { partition: self, space }
    }
}

struct DisplayPartition<'a> {
    partition: &'a Partition,
    space: &'a SampleSpace,
}

impl fmt::Display for DisplayPartition<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, b) in self.partition.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str(";")?;
            }
            for (j, i) in b.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                f.write_str(&self.space.labels()[i])?;
            }
        }
        Ok(())
    }
}

/// Whether a breakpoint's partition is already in force at the breakpoint
/// itself (`Inclusive`) or only strictly after it (`Exclusive`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    Inclusive,
    Exclusive,
}

impl Boundary {
    pub fn as_str(self) -> &'static str {
        match self {
            Boundary::Inclusive => "inclusive",
            Boundary::Exclusive => "exclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiltrationEntry {
    pub time: Rational,
    pub partition: Partition,
    pub boundary: Boundary,
}

/// An increasing step function `t ↦ F_t` of partitions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Filtration {
    space: SampleSpace,
    entries: Vec<FiltrationEntry>,
}

impl Filtration {
    /// Entry times must start at `0` (inclusive) and strictly increase; each
    /// partition must refine its predecessor.
    pub fn new(space: SampleSpace, entries: Vec<FiltrationEntry>) -> Result<Self> {
        let first = entries
            .first()
            .ok_or_else(|| Error::InvalidFiltration("no breakpoints".into()))?;
        if !first.time.is_zero() || first.boundary != Boundary::Inclusive {
            return Err(Error::InvalidFiltration(
                "first breakpoint must be `0 inclusive`".into(),
            ));
        }
        for (k, e) in entries.iter().enumerate() {
            if e.partition.size() != space.size() {
                return Err(Error::SpaceMismatch {
                    expected: space.size(),
                    found: e.partition.size(),
                });
            }
            if e.time.is_negative() {
                return Err(Error::InvalidFiltration("negative breakpoint".into()));
            }
            if k > 0 {
                let prev = &entries[k - 1];
                if e.time <= prev.time {
                    return Err(Error::InvalidFiltration("breakpoints not increasing".into()));
                }
                if !e.partition.refines(&prev.partition)? {
                    return Err(Error::InvalidFiltration(format!(
                        "partition at {} does not refine its predecessor",
                        e.time
                    )));
                }
            }
        }
        Ok(Filtration { space, entries })
    }

    /// `F_t = partition` for every `t`.
    pub fn constant(space: SampleSpace, partition: Partition) -> Result<Self> {
        Filtration::new(
            space,
            vec![FiltrationEntry {
                time: Rational::zero(),
                partition,
                boundary: Boundary::Inclusive,
            }],
        )
    }

    pub fn space(&self) -> &SampleSpace {
        &self.space
    }

    pub fn size(&self) -> usize {
        self.space.size()
    }

    pub fn entries(&self) -> &[FiltrationEntry] {
        &self.entries
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = Rational> + '_ {
        self.entries.iter().map(|e| e.time)
    }

    pub fn has_exclusive(&self) -> bool {
        self.entries.iter().any(|e| e.boundary == Boundary::Exclusive)
    }

    /// `F_∞`, the final partition.
    pub fn final_partition(&self) -> &Partition {
        &self.entries.last().expect("nonempty").partition
    }

    /// `F_t`: the partition of the last entry with `u < t`, or `u = t` and an
    /// inclusive boundary.
    pub fn sigma_at(&self, t: Time) -> &Partition {
        let t = match t {
            Time::Infinite => return self.final_partition(),
            Time::Finite(t) => t,
        };
        let mut current = &self.entries[0].partition;
        for e in &self.entries {
            if e.time < t || (e.time == t && e.boundary == Boundary::Inclusive) {
                current = &e.partition;
            } else {
                break;
            }
        }
        current
    }

    /// Right limit `F_{t+} = ∩_{s>t} F_s`: the partition of the last entry
    /// with `u ≤ t`, whatever its boundary.
    pub fn sigma_after(&self, t: Rational) -> &Partition {
        let mut current = &self.entries[0].partition;
        for e in &self.entries {
            if e.time <= t {
                current = &e.partition;
            } else {
                break;
            }
        }
        current
    }

    /// The same filtration with every boundary made inclusive, i.e. its
    /// right-continuous regularisation `(F_{t+})`.
    pub fn right_continuous(&self) -> Filtration {
        Filtration {
            space: self.space.clone(),
            entries: self
                .entries
                .iter()
                .map(|e| FiltrationEntry { boundary: Boundary::Inclusive, ..e.clone() })
                .collect(),
        }
    }
}
