//! The discrepancy factors in closed form, one branch per parity of `a` and
//! sign of `r₂`. These are written out directly, independently of the
//! diagram machinery, and serve as the oracle the diagram quotients are
//! checked against.

use super::ways::{diagram, gl_diagram, WayId};
use super::AnalysisError;
use crate::lfactor::{Affine, BaseKind};
use crate::rep::InductionDatum;
use crate::scalar::{int, ratio};
use crate::{LFactorProduct, Rational};

/// `L(2s + c, ·)`
fn l2(c: Rational, base: BaseKind) -> LFactorProduct {
    LFactorProduct::atom(Affine::two_s().plus(&c), base)
}

/// `L(s + c, ·)`
fn l1(c: Rational, base: BaseKind) -> LFactorProduct {
    LFactorProduct::atom(Affine::s().plus(&c), base)
}

/// `L(s + c, τ×σ)`, or its replacement when `σ` is trivial.
fn sigma(d: &InductionDatum, c: Rational) -> LFactorProduct {
    d.sigma_base().map_or_else(LFactorProduct::one, |base| l1(c, base))
}

/// `ρ⁻` for odd `a`, `ρ` for even `a`.
fn alternating(a: i64) -> BaseKind {
    if a % 2 == 1 {
        BaseKind::TauRhoMinus
    } else {
        BaseKind::TauRho
    }
}

/// Closed form of a classical way's discrepancy.
pub fn closed_form(way: WayId, d: &InductionDatum) -> Result<LFactorProduct, AnalysisError> {
    diagram(way, d)?;
    let a = i64::from(d.a);
    let (r1, r2) = match d.support.entries() {
        &[r1, r2] => (i64::from(r1), i64::from(r2)),
        _ => (0, 0),
    };
    let tt = BaseKind::TauTau;
    let rho = BaseKind::TauRho;
    let p = match way {
        // L(2s−1, ρ^±) L(2s+a−2, ρ) L(s+(a−3)/2, τ×σ)
        WayId::Step2AWay1 => l2(int(-1), alternating(a)) * l2(int(a - 2), rho) * sigma(d, ratio(a - 3, 2)),
        // L(2s, ρ^±) L(2s−(a−1), ρ) L(s−(a−1)/2, τ×σ)
        WayId::Step2AWay2 => l2(int(0), alternating(a)) * l2(int(1 - a), rho) * sigma(d, ratio(1 - a, 2)),
        // L(s−(r₁−1)/2, τ×τ) L(s+(r₁'−1)/2, τ×τ), r₁' = r₁−2, the second factor read as 1 when r₁' = 0
        WayId::Step2BWay3 => {
            let second = if r1 - 2 >= 1 { l1(ratio(r1 - 3, 2), tt) } else { LFactorProduct::one() };
            l1(ratio(1 - r1, 2), tt) * second
        }
        // L(s, τ×σ) L(s+(r₂−1)/2, τ×τ)
        WayId::Step2BWay4 => sigma(d, int(0)) * l1(ratio(r2 - 1, 2), tt),
        WayId::Step3Way1 => {
            let base = l2(int(-1), alternating(a)) * l2(int(a - 2), rho);
            if r2 > 0 {
                base * l1(ratio(a - r2, 2) - int(1), tt) * sigma(d, ratio(a - 3, 2))
            } else {
                base
            }
        }
        WayId::Step3Way2 => {
            let base = l2(int(0), alternating(a)) * l2(int(1 - a), rho);
            if r2 > 0 {
                base * l1(-ratio(a - r2, 2), tt) * sigma(d, ratio(1 - a, 2))
            } else {
                base
            }
        }
        WayId::Step3Way3 => {
            if a <= r1 - 2 {
                l1(-ratio(r1 - a, 2), tt) * l1(ratio(r1 - a, 2) - int(1), tt)
            } else {
                l1(ratio(-1, 2), tt)
            }
        }
        WayId::Step1Reduction => LFactorProduct::one(),
        gl => return Err(AnalysisError::WayNotApplicable { way: gl, reason: "a GL way needs gl_closed_form".into() }),
    };
    Ok(p.canonicalize())
}

/// Closed form of a GL way's discrepancy for `M_GL(s, τ_a, τ_b)`.
pub fn gl_closed_form(way: WayId, a: u32, b: u32) -> Result<LFactorProduct, AnalysisError> {
    gl_diagram(way, a, b)?;
    let (a, b) = (i64::from(a), i64::from(b));
    let c = match way {
        WayId::GlWay1 => ratio(a - 3, 2),
        WayId::GlWay2 => ratio(1 - a, 2),
        WayId::GlWay3 => ratio(1 - b, 2),
        WayId::GlWay4 => ratio(b - 3, 2),
        other => unreachable!("{other} passed gl_diagram"),
    };
    Ok(l2(c, BaseKind::TauTau).canonicalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::GroupType;

    #[test]
    fn printed_examples() {
        // Step2A_Way2, a = 3: L(2s, ρ⁻) L(2s−2, ρ) L(s−1, τ×σ)
        let d = InductionDatum::new(GroupType::Sp, 3, &[], true).unwrap();
        let expected = l2(int(0), BaseKind::TauRhoMinus) * l2(int(-2), BaseKind::TauRho) * l1(int(-1), BaseKind::TauSigma);
        assert_eq!(closed_form(WayId::Step2AWay2, &d).unwrap(), expected);
        // Step3_Way1, a = 3, r₂ ≤ 0: L(2s−1, ρ⁻) L(2s+1, ρ)
        let d = InductionDatum::new(GroupType::Sp, 3, &[5, -1], true).unwrap();
        let expected = l2(int(-1), BaseKind::TauRhoMinus) * l2(int(1), BaseKind::TauRho);
        assert_eq!(closed_form(WayId::Step3Way1, &d).unwrap(), expected);
        assert_eq!(gl_closed_form(WayId::GlWay2, 5, 1).unwrap(), l2(int(-2), BaseKind::TauTau).canonicalize());
    }

    #[test]
    fn rejects_inapplicable() {
        let d = InductionDatum::new(GroupType::Sp, 1, &[], true).unwrap();
        assert!(closed_form(WayId::Step2AWay1, &d).is_err());
        assert!(gl_closed_form(WayId::GlWay4, 2, 1).is_err());
    }
}
