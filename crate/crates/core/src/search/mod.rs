//! Decomposition and interpolation of stopping times as search problems on a
//! finite rational grid, with exhaustive oracles and a seeded counterexample
//! hunter.
//!
//! Every "not found" verdict is relative to the grid it was searched on.

mod decompose;
mod enumerate;
pub mod generate;
mod grid;
pub mod hunt;
mod interpolate;
mod minorant;
pub mod oracle;

use std::fmt;

use sha2::{Digest, Sha256};

use crate::times::{CheckRecord, RandomTime};

pub use decompose::{decompose_stopping, StDecomposition};
pub use enumerate::{enumerate_stopping_times, Caps};
pub use grid::Grid;
pub use hunt::{hunt, HuntConfig, HuntReport, Property};
pub use interpolate::{interpolate_cone, interpolate_pointwise};
pub use minorant::max_stopping_minorant;

/// Why a search refused to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PreconditionKind {
    EmptyInput,
    SpaceMismatch,
    NotAdmissible,
    NotDominated,
    OffGrid,
    InfiniteValue,
    ConeOrderViolated,
}

impl PreconditionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PreconditionKind::EmptyInput => "empty-input",
            PreconditionKind::SpaceMismatch => "space-mismatch",
            PreconditionKind::NotAdmissible => "not-admissible",
            PreconditionKind::NotDominated => "not-dominated",
            PreconditionKind::OffGrid => "off-grid",
            PreconditionKind::InfiniteValue => "infinite-value",
            PreconditionKind::ConeOrderViolated => "cone-order-violated",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Precondition {
    pub kind: PreconditionKind,
    pub message: String,
}

impl Precondition {
    pub(crate) fn new(kind: PreconditionKind, message: impl Into<String>) -> Self {
        Precondition { kind, message: message.into() }
    }
}

impl fmt::Display for Precondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.as_str(), self.message)
    }
}

/// Evidence that the whole grid-restricted search space was exhausted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exhausted {
    pub grid: Grid,
    /// Number of (variable, value) assignments tried.
    pub states_explored: u64,
    /// SHA-256 over the sequence of assignments tried, in order.
    pub digest: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    NotFoundOnGrid(Exhausted),
    PreconditionFailed(Precondition),
}

impl<T> SearchOutcome<T> {
    pub fn found(&self) -> Option<&T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }

    pub fn is_not_found(&self) -> bool {
        matches!(self, SearchOutcome::NotFoundOnGrid(_))
    }

    pub fn verdict(&self) -> &'static str {
        match self {
            SearchOutcome::Found(_) => "found",
            SearchOutcome::NotFoundOnGrid(_) => "notfound",
            SearchOutcome::PreconditionFailed(_) => "precondition",
        }
    }
}

/// Counts and fingerprints the assignments a depth-first search tries.
pub(crate) struct Explorer {
    states: u64,
    hasher: Sha256,
}

impl Explorer {
    pub(crate) fn new() -> Self {
        Explorer { states: 0, hasher: Sha256::new() }
    }

    pub(crate) fn visit(&mut self, var: usize, value: &crate::value::Time) {
        self.states += 1;
        self.hasher.update((var as u64).to_le_bytes());
        self.hasher.update(value.to_string().as_bytes());
        self.hasher.update(b";");
    }

    pub(crate) fn finish(self, grid: Grid) -> Exhausted {
        Exhausted {
            grid,
            states_explored: self.states,
            digest: hex::encode(self.hasher.finalize()),
        }
    }
}

/// Certificate for one admitted time: every witness evaluation.
pub type Certificate = Vec<CheckRecord>;

pub(crate) fn certify(
    time: &RandomTime,
    filtration: &crate::space::Filtration,
    kind: crate::times::TimeKind,
) -> Certificate {
    crate::times::transcript(time, filtration, kind).expect("sizes checked by caller")
}
