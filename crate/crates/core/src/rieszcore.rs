//! Riesz decomposition and interpolation for plain random variables, where
//! both properties hold unconditionally in the pointwise lattice.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::times::RealRv;

/// `target = Σ parts` with `0 ≤ parts[i] ≤ bounds[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RvDecomposition {
    pub target: RealRv,
    pub bounds: Vec<RealRv>,
    pub parts: Vec<RealRv>,
}

impl RvDecomposition {
    /// Re-checks the sum and the bounds exactly.
    pub fn is_valid(&self) -> bool {
        if self.parts.len() != self.bounds.len() || self.parts.is_empty() {
            return false;
        }
        let mut sum = RealRv::zero(self.target.size());
        for (x, y) in self.parts.iter().zip(&self.bounds) {
            match (x.le(y), sum.add(x)) {
                (Ok(true), Ok(s)) if x.is_nonnegative() => sum = s,
                _ => return false,
            }
        }
        sum == self.target
    }
}

/// Greedy positive Riesz decomposition of `x ≤ y₁ + … + yₙ`:
/// `xₖ = (x − Σ_{j<k} xⱼ) ∧ yₖ` for `k < n`, and `xₙ` takes the remainder.
///
/// The result depends on the order of `bounds`; any order gives a valid
/// decomposition.
pub fn rv_decompose(x: &RealRv, bounds: &[RealRv]) -> Result<RvDecomposition> {
    let last = bounds
        .len()
        .checked_sub(1)
        .ok_or_else(|| Error::Precondition("at least one bound is required".into()))?;
    if let Some(i) = x.values().iter().position(|v| v.is_negative()) {
        return Err(Error::Precondition(format!("x is negative at outcome {i}")));
    }
    let mut total = RealRv::zero(x.size());
    for (k, y) in bounds.iter().enumerate() {
        if let Some(i) = y.values().iter().position(|v| v.is_negative()) {
            return Err(Error::Precondition(format!("bound {} is negative at outcome {i}", k + 1)));
        }
        total = total.add(y)?;
    }
    if let Some(i) = (0..x.size()).find(|&i| x.get(i) > total.get(i)) {
        return Err(Error::Precondition(format!(
            "x exceeds the sum of the bounds at outcome {i} ({} > {})",
            x.get(i),
            total.get(i)
        )));
    }

    let mut remaining = x.clone();
    let mut parts = Vec::with_capacity(bounds.len());
    for y in &bounds[..last] {
        let part = remaining.meet(y)?;
        remaining = remaining.sub(&part)?;
        parts.push(part);
    }
    parts.push(remaining);
    Ok(RvDecomposition { target: x.clone(), bounds: bounds.to_vec(), parts })
}

/// Interpolant `∨A` for finite `A ≤ B`; it is the least `z` with `A ≤ z ≤ B`.
pub fn rv_interpolate(lower: &[RealRv], upper: &[RealRv]) -> Result<RealRv> {
    let (first, rest) = lower
        .split_first()
        .ok_or_else(|| Error::Precondition("A must be nonempty".into()))?;
    if upper.is_empty() {
        return Err(Error::Precondition("B must be nonempty".into()));
    }
    for (ia, a) in lower.iter().enumerate() {
        for (ib, b) in upper.iter().enumerate() {
            if a.size() != b.size() {
                return Err(Error::SpaceMismatch { expected: a.size(), found: b.size() });
            }
            if let Some(i) = (0..a.size()).find(|&i| a.get(i) > b.get(i)) {
                return Err(Error::Precondition(format!(
                    "A[{ia}] exceeds B[{ib}] at outcome {i}"
                )));
            }
        }
    }
    rest.iter().try_fold(first.clone(), |acc, a| acc.join(a))
}
