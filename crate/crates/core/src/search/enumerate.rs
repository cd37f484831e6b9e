use crate::error::{Error, Result};
use crate::space::Filtration;
use crate::times::{RandomTime, TimeKind};

use super::Grid;

/// Size limits for brute-force enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_outcomes: usize,
    /// Maximum number of finite grid values (∞ is not counted).
    pub max_values: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_outcomes: 6, max_values: 6 }
    }
}

impl Caps {
    pub fn check(&self, outcomes: usize, grid: &Grid) -> Result<()> {
        if outcomes > self.max_outcomes {
            return Err(Error::CapExceeded(format!(
                "{outcomes} outcomes exceeds the enumeration cap of {}",
                self.max_outcomes
            )));
        }
        if grid.finite_count() > self.max_values {
            return Err(Error::CapExceeded(format!(
                "{} grid values exceeds the enumeration cap of {}",
                grid.finite_count(),
                self.max_values
            )));
        }
        Ok(())
    }
}

/// Every grid-valued random time admitted by `kind`, in lexicographic order
/// of value vectors (first outcome most significant, `∞` largest).
///
/// Plain brute force over all `|grid|^|Ω|` vectors, with no pruning.
pub fn enumerate_stopping_times(
    filtration: &Filtration,
    grid: &Grid,
    kind: TimeKind,
    caps: Caps,
) -> Result<Vec<RandomTime>> {
    let m = filtration.size();
    caps.check(m, grid)?;
    let values = grid.values();
    let mut digits = vec![0usize; m];
    let mut out = Vec::new();
    loop {
        let t = RandomTime::new(digits.iter().map(|&d| values[d]).collect())?;
        if kind.admits(&t, filtration)? {
            out.push(t);
        }
        // Odometer increment, last outcome fastest.
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
