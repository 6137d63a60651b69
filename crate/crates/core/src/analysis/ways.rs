//! The decomposition diagrams, encoded as data.
//!
//! Each diagram is a list of constituent normalization factors (classical `α`
//! at a substituted argument, or `α_GL` between two GL blocks) divided by the
//! normalization factor of the operator being decomposed. Its discrepancy is
//! the canonicalized quotient.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{alpha_gl, alpha_raw, AnalysisError, DetExponent, SigmaConvention};
use crate::lfactor::BaseKind;
use crate::rep::{segment_pairs, InductionDatum};
use crate::scalar::{int, ratio};
use crate::{LFactorProduct, Rational};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum WayId {
    #[serde(rename = "GL_Way1")]
    GlWay1,
    #[serde(rename = "GL_Way2")]
    GlWay2,
    #[serde(rename = "GL_Way3")]
    GlWay3,
    #[serde(rename = "GL_Way4")]
    GlWay4,
    #[serde(rename = "Step2A_Way1")]
    Step2AWay1,
    #[serde(rename = "Step2A_Way2")]
    Step2AWay2,
    #[serde(rename = "Step2B_Way3")]
    Step2BWay3,
    #[serde(rename = "Step2B_Way4")]
    Step2BWay4,
    #[serde(rename = "Step3_Way1")]
    Step3Way1,
    #[serde(rename = "Step3_Way2")]
    Step3Way2,
    #[serde(rename = "Step3_Way3")]
    Step3Way3,
    #[serde(rename = "Step1_Reduction")]
    Step1Reduction,
}

impl WayId {
    pub const ALL: [WayId; 12] = [
        WayId::GlWay1,
        WayId::GlWay2,
        WayId::GlWay3,
        WayId::GlWay4,
        WayId::Step2AWay1,
        WayId::Step2AWay2,
        WayId::Step2BWay3,
        WayId::Step2BWay4,
        WayId::Step3Way1,
        WayId::Step3Way2,
        WayId::Step3Way3,
        WayId::Step1Reduction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WayId::GlWay1 => "GL_Way1",
            WayId::GlWay2 => "GL_Way2",
            WayId::GlWay3 => "GL_Way3",
            WayId::GlWay4 => "GL_Way4",
            WayId::Step2AWay1 => "Step2A_Way1",
            WayId::Step2AWay2 => "Step2A_Way2",
            WayId::Step2BWay3 => "Step2B_Way3",
            WayId::Step2BWay4 => "Step2B_Way4",
            WayId::Step3Way1 => "Step3_Way1",
            WayId::Step3Way2 => "Step3_Way2",
            WayId::Step3Way3 => "Step3_Way3",
            WayId::Step1Reduction => "Step1_Reduction",
        }
    }

    pub fn is_gl(self) -> bool {
        matches!(self, WayId::GlWay1 | WayId::GlWay2 | WayId::GlWay3 | WayId::GlWay4)
    }
}

impl fmt::Display for WayId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One arrow of a decomposition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Constituent {
    /// `α(s + shift, τ_a, σ_entries)`
    Normalization { a: u32, entries: Vec<i32>, shift: Rational },
    /// `α_GL` from `|det|^x τ_a × |det|^y τ_b`
    Gl { a: u32, b: u32, x: DetExponent, y: DetExponent },
}

impl Constituent {
    fn normalization(a: u32, entries: &[i32], shift: Rational) -> Self {
        Constituent::Normalization { a, entries: entries.to_vec(), shift }
    }

    fn gl(a: u32, b: u32, x: DetExponent, y: DetExponent) -> Self {
        Constituent::Gl { a, b, x, y }
    }

    pub fn evaluate(&self, sigma: Option<BaseKind>, convention: SigmaConvention) -> Result<LFactorProduct, AnalysisError> {
        match self {
            Constituent::Normalization { a, entries, shift } => {
                Ok(alpha_raw(*a, entries, sigma, convention)?.shift_s(shift))
            }
            Constituent::Gl { a, b, x, y } => alpha_gl(*a, *b, x, y),
        }
    }
}

impl fmt::Display for Constituent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constituent::Normalization { a, entries, shift } => {
                let e: Vec<String> = entries.iter().map(|r| r.to_string()).collect();
                write!(f, "alpha(s{}, tau_{a}, sigma({}))", signed(shift), e.join(","))
            }
            Constituent::Gl { a, b, x, y } => write!(f, "alpha_GL(|det|^({x}) tau_{a}, |det|^({y}) tau_{b})"),
        }
    }
}

fn signed(r: &Rational) -> String {
    if *r == int(0) {
        String::new()
    } else if *r > int(0) {
        format!("+{}", crate::scalar::fmt_ratio(r))
    } else {
        format!("-{}", crate::scalar::fmt_ratio(&-r))
    }
}

/// A decomposition: `∏ numerator / ∏ denominator`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diagram {
    pub way: WayId,
    pub numerator: Vec<Constituent>,
    pub denominator: Vec<Constituent>,
    pub convention: SigmaConvention,
}

impl Diagram {
    /// The canonicalized quotient.
    pub fn evaluate(&self, sigma: Option<BaseKind>) -> Result<LFactorProduct, AnalysisError> {
        let mut p = LFactorProduct::one();
        for c in &self.numerator {
            p = p.multiply(&c.evaluate(sigma, self.convention)?);
        }
        for c in &self.denominator {
            p = p.divide(&c.evaluate(sigma, self.convention)?);
        }
        Ok(p.canonicalize())
    }
}

fn not_applicable(way: WayId, reason: impl Into<String>) -> AnalysisError {
    AnalysisError::WayNotApplicable { way, reason: reason.into() }
}

fn s_plus(c: Rational) -> DetExponent {
    DetExponent::s_plus(c)
}

fn neg_s_plus(c: Rational) -> DetExponent {
    DetExponent::neg_s_plus(c)
}

/// Diagram of a GL way for `M_GL(s, τ_a, τ_b)`, the operator
/// `|det|^s τ_a × |det|^{−s} τ_b → |det|^{−s} τ_b × |det|^s τ_a`.
pub fn gl_diagram(way: WayId, a: u32, b: u32) -> Result<Diagram, AnalysisError> {
    let (ai, bi) = (i64::from(a), i64::from(b));
    let whole = Constituent::gl(a, b, s_plus(int(0)), neg_s_plus(int(0)));
    let numerator = match way {
        WayId::GlWay1 | WayId::GlWay2 => {
            if a < 2 || b != 1 {
                return Err(not_applicable(way, format!("needs a >= 2 against b = 1, got ({a}, {b})")));
            }
            if way == WayId::GlWay1 {
                // τ_a ↪ |det|^{(a−1)/2} τ × |det|^{−1/2} τ_{a−1}
                vec![
                    Constituent::gl(a - 1, 1, s_plus(ratio(-1, 2)), neg_s_plus(int(0))),
                    Constituent::gl(1, 1, s_plus(ratio(ai - 1, 2)), neg_s_plus(int(0))),
                ]
            } else {
                // τ_a ↪ |det|^{1/2} τ_{a−1} × |det|^{−(a−1)/2} τ
                vec![
                    Constituent::gl(1, 1, s_plus(ratio(1 - ai, 2)), neg_s_plus(int(0))),
                    Constituent::gl(a - 1, 1, s_plus(ratio(1, 2)), neg_s_plus(int(0))),
                ]
            }
        }
        WayId::GlWay3 | WayId::GlWay4 => {
            if a != 1 || b < 2 {
                return Err(not_applicable(way, format!("needs a = 1 against b >= 2, got ({a}, {b})")));
            }
            if way == WayId::GlWay3 {
                // τ_b ↪ |det|^{(b−1)/2} τ × |det|^{−1/2} τ_{b−1}
                vec![
                    Constituent::gl(1, 1, s_plus(int(0)), neg_s_plus(ratio(bi - 1, 2))),
                    Constituent::gl(1, b - 1, s_plus(int(0)), neg_s_plus(ratio(-1, 2))),
                ]
            } else {
                // τ_b ↪ |det|^{1/2} τ_{b−1} × |det|^{−(b−1)/2} τ
                vec![
                    Constituent::gl(1, b - 1, s_plus(int(0)), neg_s_plus(ratio(1, 2))),
                    Constituent::gl(1, 1, s_plus(int(0)), neg_s_plus(ratio(1 - bi, 2))),
                ]
            }
        }
        other => return Err(not_applicable(other, "not a GL decomposition")),
    };
    Ok(Diagram { way, numerator, denominator: vec![whole], convention: SigmaConvention::Literal })
}

/// The matching decomposition that lowers `(a, b)` towards `(a, 1)` when
/// `a ≥ b` (splitting `τ_b`), or towards `(1, b)` when `a < b` (splitting
/// `τ_a`). Its quotient is 1 whenever it applies.
pub fn gl_matching_diagram(a: u32, b: u32) -> Result<Diagram, AnalysisError> {
    let (ai, bi) = (i64::from(a), i64::from(b));
    let whole = Constituent::gl(a, b, s_plus(int(0)), neg_s_plus(int(0)));
    let numerator = if a >= b {
        if b < 2 {
            return Err(AnalysisError::PreconditionViolated(format!("({a}, {b}) is already a base case")));
        }
        vec![
            Constituent::gl(a, 1, s_plus(int(0)), neg_s_plus(ratio(bi - 1, 2))),
            Constituent::gl(a, b - 1, s_plus(int(0)), neg_s_plus(ratio(-1, 2))),
        ]
    } else {
        if a < 2 {
            return Err(AnalysisError::PreconditionViolated(format!("({a}, {b}) is already a base case")));
        }
        vec![
            Constituent::gl(1, b, s_plus(ratio(1 - ai, 2)), neg_s_plus(int(0))),
            Constituent::gl(a - 1, b, s_plus(ratio(1, 2)), neg_s_plus(int(0))),
        ]
    };
    let way = if a >= b { WayId::GlWay3 } else { WayId::GlWay2 };
    Ok(Diagram { way, numerator, denominator: vec![whole], convention: SigmaConvention::Literal })
}

/// The single straddling pair `(r₁, r₂)` of a terminal datum.
fn terminal_pair(way: WayId, d: &InductionDatum) -> Result<(i32, i32), AnalysisError> {
    match d.support.entries() {
        &[r1, r2] => Ok((r1, r2)),
        other => Err(not_applicable(way, format!("needs exactly one support pair, got {} entries", other.len()))),
    }
}

/// Diagram of a classical way for `M(s, τ_a, σ_r̄)`.
pub fn diagram(way: WayId, d: &InductionDatum) -> Result<Diagram, AnalysisError> {
    let a = d.a;
    let ai = i64::from(a);
    let entries = d.support.entries();
    let whole = vec![Constituent::normalization(a, entries, int(0))];
    let absorbed = SigmaConvention::Absorbed;
    let numerator = match way {
        WayId::Step2AWay1 | WayId::Step2AWay2 | WayId::Step3Way1 | WayId::Step3Way2 => {
            if a < 2 {
                return Err(not_applicable(way, "needs a >= 2"));
            }
            let step2 = matches!(way, WayId::Step2AWay1 | WayId::Step2AWay2);
            if step2 && !entries.is_empty() {
                return Err(not_applicable(way, "needs a supercuspidal sigma (empty support)"));
            }
            if !step2 {
                let (r1, r2) = terminal_pair(way, d)?;
                if !(r1 > d.a as i32 && (d.a as i32) > r2) {
                    return Err(not_applicable(way, format!("needs r1 > a > r2, got a={a}, r=({r1},{r2})")));
                }
            }
            if matches!(way, WayId::Step2AWay1 | WayId::Step3Way1) {
                // τ_a ↪ |det|^{(a−1)/2} τ × |det|^{−1/2} τ_{a−1}
                vec![
                    Constituent::normalization(a - 1, entries, ratio(-1, 2)),
                    Constituent::gl(1, a - 1, s_plus(ratio(ai - 1, 2)), neg_s_plus(ratio(1, 2))),
                    Constituent::normalization(1, entries, ratio(ai - 1, 2)),
                ]
            } else {
                // τ_a ↪ |det|^{1/2} τ_{a−1} × |det|^{−(a−1)/2} τ
                vec![
                    Constituent::normalization(1, entries, ratio(1 - ai, 2)),
                    Constituent::gl(a - 1, 1, s_plus(ratio(1, 2)), neg_s_plus(ratio(ai - 1, 2))),
                    Constituent::normalization(a - 1, entries, ratio(1, 2)),
                ]
            }
        }
        WayId::Step2BWay3 | WayId::Step2BWay4 => {
            if a != 1 {
                return Err(not_applicable(way, format!("needs a = 1, got {a}")));
            }
            let (r1, r2) = terminal_pair(way, d)?;
            if !(r1 > 1 && r2 < 1) {
                return Err(not_applicable(way, format!("needs r1 > 1 > r2, got ({r1},{r2})")));
            }
            if way == WayId::Step2BWay3 {
                // σ_r ↪ |det|^{(r₁−1)/2} τ ⋊ σ_{r'}, r' = (r₁−2, r₂)
                let e = ratio(i64::from(r1) - 1, 2);
                vec![
                    Constituent::gl(1, 1, s_plus(int(0)), DetExponent::fixed(e)),
                    Constituent::normalization(1, &[r1 - 2, r2], int(0)),
                    Constituent::gl(1, 1, DetExponent::fixed(e), neg_s_plus(int(0))),
                ]
            } else {
                // σ_r ↪ |det|^{(r₁−r₂)/4} τ_{(r₁+r₂)/2} ⋊ σ
                let pair = segment_pairs(&d.support)[0];
                let (m, e) = (pair.size(), pair.exponent());
                vec![
                    Constituent::gl(1, m, s_plus(int(0)), DetExponent::fixed(e)),
                    Constituent::normalization(1, &[], int(0)),
                    Constituent::gl(m, 1, DetExponent::fixed(e), neg_s_plus(int(0))),
                ]
            }
        }
        WayId::Step3Way3 => {
            let (r1, r2) = terminal_pair(way, d)?;
            if !(a >= 2 && r1 > a as i32 && (a as i32) > r2) {
                return Err(not_applicable(way, format!("needs r1 > a > r2 and a >= 2, got a={a}, r=({r1},{r2})")));
            }
            // σ_r ↪ |det|^{(r₁−1)/2} τ ⋊ σ_{r'}, r' = (r₁−2, r₂)
            let e = ratio(i64::from(r1) - 1, 2);
            vec![
                Constituent::gl(a, 1, s_plus(int(0)), DetExponent::fixed(e)),
                Constituent::normalization(a, &[r1 - 2, r2], int(0)),
                Constituent::gl(1, a, DetExponent::fixed(e), neg_s_plus(int(0))),
            ]
        }
        WayId::Step1Reduction => {
            let index = segment_pairs(&d.support)
                .iter()
                .position(|p| super::identity::is_strippable(a, p.first, p.second))
                .ok_or_else(|| not_applicable(way, "no support pair can be stripped"))?;
            return reduction_diagram(d, index);
        }
        gl => return Err(not_applicable(gl, "a GL way needs gl_discrepancy")),
    };
    Ok(Diagram { way, numerator, denominator: whole, convention: absorbed })
}

/// Step 1: `σ_r̄ ↪ |det|^{e} τ_m ⋊ σ_{r̄'}` for the pair at `pair_index`
/// (`e = (r−r')/4`, `m = (r+r')/2`), evaluated with the full tensor product.
pub fn reduction_diagram(d: &InductionDatum, pair_index: usize) -> Result<Diagram, AnalysisError> {
    let pairs = segment_pairs(&d.support);
    let pair = *pairs.get(pair_index).ok_or_else(|| {
        AnalysisError::PreconditionViolated(format!("no support pair at index {pair_index}"))
    })?;
    let a = d.a;
    let (m, e) = (pair.size(), pair.exponent());
    let rest = d.support.without_pair(pair_index);
    let mut numerator = Vec::new();
    if m > 0 {
        numerator.push(Constituent::gl(a, m, s_plus(int(0)), DetExponent::fixed(e)));
    }
    numerator.push(Constituent::normalization(a, rest.entries(), int(0)));
    if m > 0 {
        numerator.push(Constituent::gl(m, a, DetExponent::fixed(e), neg_s_plus(int(0))));
    }
    Ok(Diagram {
        way: WayId::Step1Reduction,
        numerator,
        denominator: vec![Constituent::normalization(a, d.support.entries(), int(0))],
        convention: SigmaConvention::Literal,
    })
}

/// Discrepancy of a classical way: canonicalized quotient of its diagram.
pub fn discrepancy(way: WayId, d: &InductionDatum) -> Result<LFactorProduct, AnalysisError> {
    diagram(way, d)?.evaluate(d.sigma_base())
}

/// Discrepancy of a GL way for `M_GL(s, τ_a, τ_b)`.
pub fn gl_discrepancy(way: WayId, a: u32, b: u32) -> Result<LFactorProduct, AnalysisError> {
    gl_diagram(way, a, b)?.evaluate(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lfactor::Affine;
    use crate::rep::GroupType;

    fn tt(slope: i64, c: Rational) -> LFactorProduct {
        LFactorProduct::atom(Affine::new(int(slope), c).unwrap(), BaseKind::TauTau).canonicalize()
    }

    #[test]
    fn gl_way1_and_way2() {
        for a in 2..=6u32 {
            let ai = i64::from(a);
            assert_eq!(gl_discrepancy(WayId::GlWay1, a, 1).unwrap(), tt(2, ratio(ai - 3, 2)));
            assert_eq!(gl_discrepancy(WayId::GlWay2, a, 1).unwrap(), tt(2, ratio(1 - ai, 2)));
        }
        assert!(matches!(gl_discrepancy(WayId::GlWay1, 1, 1), Err(AnalysisError::WayNotApplicable { .. })));
        assert!(gl_discrepancy(WayId::GlWay3, 2, 1).is_err());
    }

    #[test]
    fn gl_matching_is_trivial() {
        for a in 1..=6u32 {
            for b in 1..=6u32 {
                if let Ok(dg) = gl_matching_diagram(a, b) {
                    assert!(dg.evaluate(None).unwrap().is_one(), "({a},{b})");
                }
            }
        }
    }

    #[test]
    fn step3_way3_example() {
        let d = InductionDatum::new(GroupType::Sp, 4, &[7, 1], true).unwrap();
        let p = discrepancy(WayId::Step3Way3, &d).unwrap();
        assert_eq!(p, tt(1, ratio(-3, 2)).multiply(&tt(1, ratio(1, 2))));
    }

    #[test]
    fn step2b_way3_example() {
        // r₁ = 5: L(s−2, τ×τ)·L(s+1, τ×τ)
        let d = InductionDatum::new(GroupType::Sp, 1, &[5, -1], true).unwrap();
        let p = discrepancy(WayId::Step2BWay3, &d).unwrap();
        assert_eq!(p, tt(1, int(-2)).multiply(&tt(1, int(1))));
    }

    #[test]
    fn applicability() {
        let d = InductionDatum::new(GroupType::Sp, 4, &[3, 1], true).unwrap();
        assert!(matches!(discrepancy(WayId::Step3Way1, &d), Err(AnalysisError::WayNotApplicable { .. })));
        assert!(discrepancy(WayId::Step2AWay1, &d).is_err());
        assert!(discrepancy(WayId::GlWay1, &d).is_err());
        assert!(discrepancy(WayId::Step1Reduction, &d).unwrap().is_one());
        let straddle = InductionDatum::new(GroupType::Sp, 4, &[7, 1], true).unwrap();
        assert!(discrepancy(WayId::Step1Reduction, &straddle).is_err());
    }

    #[test]
    fn diagrams_render() {
        let dg = diagram(WayId::Step3Way3, &InductionDatum::new(GroupType::Sp, 2, &[3, -1], true).unwrap()).unwrap();
        assert_eq!(dg.numerator[1].to_string(), "alpha(s, tau_2, sigma(1,-1))");
        assert_eq!(dg.numerator[0].to_string(), "alpha_GL(|det|^(s) tau_2, |det|^(1) tau_1)");
    }

    #[test]
    fn way_names_round_trip() {
        for w in WayId::ALL {
            let json = serde_json::to_string(&w).unwrap();
            assert_eq!(json, format!("\"{}\"", w.name()));
            assert_eq!(serde_json::from_str::<WayId>(&json).unwrap(), w);
        }
    }
}
