//! Normalization factors `α`, `β`, `α_GL` and everything built from them:
//! the decomposition diagrams, their discrepancy factors, the reduction
//! identity that strips support pairs, and the case classifier.

pub mod classify;
pub mod closed_form;
pub mod identity;
pub mod ways;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lfactor::{expand_rho, expand_tensor, Affine, BaseKind, LFactorError};
use crate::rep::{InductionDatum, RepError};
use crate::scalar::{fmt_ratio, ratio};
use crate::{AffineArg, LFactorProduct, Rational};

pub use classify::{classify, classify_gl, HolomorphyReport};
pub use closed_form::{closed_form, gl_closed_form};
pub use identity::{verify_identity_a, verify_pair_strip, verify_reduction_step, IdentityVariant};
pub use ways::{discrepancy, gl_discrepancy, WayId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("{way} does not apply: {reason}")]
    WayNotApplicable { way: WayId, reason: String },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("pair ({r1},{r2}) cannot be stripped against a={a}: it straddles a")]
    PairNotStrippable { a: u32, r1: i32, r2: i32 },
    #[error(transparent)]
    LFactor(#[from] LFactorError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// Exponent `k·s + c` of `|det|` on one GL block of a diagram.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DetExponent {
    pub s_coeff: i64,
    pub constant: Rational,
}

impl DetExponent {
    pub fn new(s_coeff: i64, constant: Rational) -> Self {
        Self { s_coeff, constant }
    }

    /// `s + c`
    pub fn s_plus(constant: Rational) -> Self {
        Self::new(1, constant)
    }

    /// `−s + c`
    pub fn neg_s_plus(constant: Rational) -> Self {
        Self::new(-1, constant)
    }

    /// A constant exponent with no `s`.
    pub fn fixed(constant: Rational) -> Self {
        Self::new(0, constant)
    }
}

impl fmt::Display for DetExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.s_coeff {
            0 => return write!(f, "{}", fmt_ratio(&self.constant)),
            1 => write!(f, "s")?,
            -1 => write!(f, "-s")?,
            k => write!(f, "{k}s")?,
        }
        if self.constant > Rational::from_integer(0) {
            write!(f, "+{}", fmt_ratio(&self.constant))
        } else if self.constant < Rational::from_integer(0) {
            write!(f, "-{}", fmt_ratio(&-self.constant))
        } else {
            Ok(())
        }
    }
}

/// How the trailing `r_t ≤ 0` entry and the `τ×σ` factor are treated.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaConvention {
    /// The full product: `τ₀ ↦ 1`, `τ₋₁ ↦ inverse`, and the `τ×σ` factor always present.
    Literal,
    /// When the last support entry is `≤ 0`, its tensor factor and the `τ×σ`
    /// factor are absorbed, leaving `L(2s, τ_a, ρ)·∏_{i<t} L(s, τ_a×τ_{r_i})`.
    Absorbed,
}

/// `L(arg, τ_a × τ_r)` with the conventions `τ₀ ↦ 1` and `τ₋₁ ↦ (τ₁)⁻¹`.
pub fn tensor_factor(a: u32, r: i32, arg: &AffineArg) -> Result<LFactorProduct, AnalysisError> {
    let a = i64::from(a);
    Ok(match r {
        0 => LFactorProduct::one(),
        -1 => expand_tensor(a, 1, arg)?.inverse(),
        r => expand_tensor(a, i64::from(r), arg)?,
    })
}

/// The `L(2s, τ_a, ρ)` part of `α` at variable `s`.
pub fn rho_part(a: u32) -> Result<LFactorProduct, AnalysisError> {
    Ok(expand_rho(i64::from(a), &Affine::two_s())?)
}

/// The `L(s, τ_a × σ_r̄)` part of `α` at variable `s`, for raw support
/// entries (not necessarily a valid tuple — diagrams produce e.g. `(0, 0)`).
pub fn tensor_part(
    a: u32,
    entries: &[i32],
    sigma: Option<BaseKind>,
    convention: SigmaConvention,
) -> Result<LFactorProduct, AnalysisError> {
    let absorb = convention == SigmaConvention::Absorbed && entries.last().is_some_and(|&r| r <= 0);
    let kept = if absorb { &entries[..entries.len() - 1] } else { entries };
    let s = Affine::s();
    let mut p = LFactorProduct::one();
    for &r in kept {
        p = p.multiply(&tensor_factor(a, r, &s)?);
    }
    if let (Some(base), false) = (sigma, absorb) {
        p = p.multiply(&LFactorProduct::atom(s.plus(&ratio(i64::from(a) - 1, 2)), base));
    }
    Ok(p)
}

/// `α(s, τ_a, σ_r̄)` for raw entries under an explicit convention.
pub fn alpha_raw(
    a: u32,
    entries: &[i32],
    sigma: Option<BaseKind>,
    convention: SigmaConvention,
) -> Result<LFactorProduct, AnalysisError> {
    if a == 0 {
        return Err(AnalysisError::PreconditionViolated("segment length a must be positive".into()));
    }
    Ok(rho_part(a)?.multiply(&tensor_part(a, entries, sigma, convention)?))
}

/// `α(s, τ_a, σ_r̄)` under an explicit convention.
pub fn alpha_with(d: &InductionDatum, convention: SigmaConvention) -> Result<LFactorProduct, AnalysisError> {
    alpha_raw(d.a, d.support.entries(), d.sigma_base(), convention)
}

/// `α(s, τ_a, σ_r̄) = L(2s, τ_a, ρ)·L(s, τ_a × σ_r̄)` with the full tensor product.
pub fn alpha(d: &InductionDatum) -> Result<LFactorProduct, AnalysisError> {
    alpha_with(d, SigmaConvention::Literal)
}

/// `β(s, τ_a, σ_r̄) = L(2s+1, τ_a, ρ)·L(s+1, τ_a × σ_r̄)`.
pub fn beta(d: &InductionDatum) -> Result<LFactorProduct, AnalysisError> {
    let rho = rho_part(d.a)?.shift_s(&ratio(1, 2));
    let tensor = tensor_part(d.a, d.support.entries(), d.sigma_base(), SigmaConvention::Literal)?;
    Ok(rho.multiply(&tensor.shift_s(&ratio(1, 1))))
}

/// Normalization factor of `M_GL` from `|det|^x τ_a × |det|^y τ_b` to the
/// swapped order: `L(x − y, τ_a × τ_b)`.
pub fn alpha_gl(a: u32, b: u32, x: &DetExponent, y: &DetExponent) -> Result<LFactorProduct, AnalysisError> {
    let slope = x.s_coeff - y.s_coeff;
    if slope <= 0 {
        return Err(LFactorError::NonPositiveSlope(format!("({x}) - ({y})")).into());
    }
    let arg = Affine::new(Rational::from_integer(slope), x.constant - y.constant)?;
    Ok(expand_tensor(i64::from(a), i64::from(b), &arg)?)
}
