//! The pair identity behind the reduction step:
//!
//! `L(s − e, τ_a×τ_m)·L(s + e, τ_a×τ_m) = L(s, τ_a×τ_{r₁})·L(s, τ_a×τ_{r₂})`
//!
//! with `e = (r₁−r₂)/4`, `m = (r₁+r₂)/2`, valid when the pair does not
//! straddle `a`. It lets a pair of the support be traded for a GL block.

use serde::{Deserialize, Serialize};

use super::ways::reduction_diagram;
use super::{tensor_factor, AnalysisError};
use crate::lfactor::Affine;
use crate::rep::{segment_pairs, InductionDatum};
use crate::scalar::ratio;
use crate::{LFactorProduct, Rational};

/// Which second shift to use on the left-hand side.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityVariant {
    /// `+(r₁−r₂)/4`, forced by the segment expansion.
    Corrected,
    /// `+(r₁+r₂)/4`, as it is sometimes written; false in general.
    Printed,
}

impl IdentityVariant {
    pub fn describe(self) -> &'static str {
        match self {
            IdentityVariant::Corrected => "+(r1-r2)/4",
            IdentityVariant::Printed => "+(r1+r2)/4",
        }
    }
}

/// Which side of `a` the pair lies on.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityBranch {
    /// `a ≥ r₁ > r₂`
    AGeR1,
    /// `r₁ > r₂ ≥ a`
    R2GeA,
}

/// A multiset comparison: `holds` iff `witness` (left ÷ right) is empty.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub holds: bool,
    pub witness: LFactorProduct,
}

impl IdentityCheck {
    fn compare(lhs: &LFactorProduct, rhs: &LFactorProduct) -> Self {
        let witness = lhs.divide(rhs).canonicalize();
        Self { holds: witness.is_one(), witness }
    }
}

pub fn is_strippable(a: u32, r1: i32, r2: i32) -> bool {
    let a = a as i32;
    a >= r1 || r2 >= a
}

pub fn branch(a: u32, r1: i32, r2: i32) -> Option<IdentityBranch> {
    if a as i32 >= r1 {
        Some(IdentityBranch::AGeR1)
    } else if r2 >= a as i32 {
        Some(IdentityBranch::R2GeA)
    } else {
        None
    }
}

/// Checks the pair identity by expanding both sides into `τ×τ` atoms.
///
/// Admissible triples: `a ≥ 1`, `r₁ > r₂ ≥ −1` of one parity, not straddling
/// `a`. Entries `0` and `−1` follow the `τ₀ ↦ 1`, `τ₋₁ ↦ inverse` conventions.
pub fn verify_identity_a(a: u32, r1: i32, r2: i32, variant: IdentityVariant) -> Result<IdentityCheck, AnalysisError> {
    if a == 0 || r1 <= r2 || r2 < -1 || (r1 - r2) % 2 != 0 {
        return Err(AnalysisError::PreconditionViolated(format!(
            "need a >= 1 and r1 > r2 >= -1 of one parity, got a={a}, r1={r1}, r2={r2}"
        )));
    }
    if !is_strippable(a, r1, r2) {
        return Err(AnalysisError::PreconditionViolated(format!(
            "need a >= r1 > r2 or r1 > r2 >= a, got a={a}, r1={r1}, r2={r2}"
        )));
    }
    let (r1l, r2l) = (i64::from(r1), i64::from(r2));
    let m = ((r1 + r2) / 2) as u32;
    let e: Rational = ratio(r1l - r2l, 4);
    let e2: Rational = match variant {
        IdentityVariant::Corrected => e,
        IdentityVariant::Printed => ratio(r1l + r2l, 4),
    };
    let s = Affine::s();
    let lhs = if m == 0 {
        LFactorProduct::one()
    } else {
        tensor_factor(a, m as i32, &s.plus(&-e))?.multiply(&tensor_factor(a, m as i32, &s.plus(&e2))?)
    };
    let rhs = tensor_factor(a, r1, &s)?.multiply(&tensor_factor(a, r2, &s)?);
    Ok(IdentityCheck::compare(&lhs, &rhs))
}

/// Checks that `α(s, τ_a, σ_r̄)` equals the normalization factor of the
/// reduced decomposition through the pair at `pair_index`.
pub fn verify_pair_strip(d: &InductionDatum, pair_index: usize) -> Result<IdentityCheck, AnalysisError> {
    let pairs = segment_pairs(&d.support);
    let pair = pairs.get(pair_index).ok_or_else(|| {
        AnalysisError::PreconditionViolated(format!("no support pair at index {pair_index}"))
    })?;
    if !is_strippable(d.a, pair.first, pair.second) {
        return Err(AnalysisError::PairNotStrippable { a: d.a, r1: pair.first, r2: pair.second });
    }
    let quotient = reduction_diagram(d, pair_index)?.evaluate(d.sigma_base())?;
    Ok(IdentityCheck { holds: quotient.is_one(), witness: quotient })
}

/// [`verify_pair_strip`] for the leading pair.
pub fn verify_reduction_step(d: &InductionDatum) -> Result<IdentityCheck, AnalysisError> {
    if d.support.is_empty() {
        return Err(AnalysisError::PreconditionViolated("support is empty; nothing to strip".into()));
    }
    verify_pair_strip(d, 0)
}
