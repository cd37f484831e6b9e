//! Order theory of stopping times on finite filtered spaces, with exact
//! rational arithmetic.
//!
//! A sample space has at most 64 outcomes, σ-algebras are partitions, and a
//! filtration is a right-open step function of refining partitions with an
//! inclusive or exclusive flag at each breakpoint. On top of that sit the
//! stopping and optional time predicates, lattice and cone operations,
//! decomposition and interpolation searches with brute-force oracles, and a
//! seeded counterexample hunter.

pub mod error;
pub mod instance;
pub mod rieszcore;
pub mod search;
pub mod selftest;
pub mod space;
pub mod times;
pub mod value;

pub mod cli;

pub use error::{Error, Result};
pub use instance::Instance;
pub use space::{Boundary, Filtration, FiltrationEntry, OutcomeSet, Partition, SampleSpace};
pub use times::{is_optional_time, is_stopping_time, OrderKind, RandomTime, RealRv, TimeKind};
pub use value::{parse_rational, Rational, Time};
