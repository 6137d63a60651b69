//! Inducing data: group type, segment length `a`, and the support tuple
//! `r̄ = (r₁, …, r_t)` of a generic discrete series.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lfactor::BaseKind;
use crate::scalar::ratio;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("support entries must share one parity (violated at {0}, {1})")]
    ParityMixed(i32, i32),
    #[error("support must be strictly decreasing (violated at {0}, {1})")]
    NotDecreasing(i32, i32),
    #[error("support length must be even, got {0}")]
    OddLength(usize),
    #[error("support entries must be at least -1, got {0}")]
    EntryBelowMinusOne(i32),
    #[error("segment length a must be positive, got {0}")]
    NonPositiveSegment(i64),
    #[error("unknown group type `{0}` (expected B, C, D, U-even, U-odd, D-star, O-even)")]
    UnknownGroup(String),
    #[error("cannot parse support entry `{0}`")]
    BadEntry(String),
}

/// Classical group `G_n` carrying the induced representation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum GroupType {
    /// `SO_{2n+1}`, type B
    #[serde(rename = "B")]
    SoOdd,
    /// `Sp_{2n}`, type C
    #[serde(rename = "C")]
    Sp,
    /// `SO_{2n}`, type D
    #[serde(rename = "D")]
    SoEven,
    #[serde(rename = "U-even")]
    UEven,
    #[serde(rename = "U-odd")]
    UOdd,
    /// quasi-split `SO*_{2n}`
    #[serde(rename = "D-star")]
    SoStarEven,
    /// non-connected `O_{2n}`
    #[serde(rename = "O-even")]
    OEven,
}

impl GroupType {
    pub const ALL: [GroupType; 7] = [
        GroupType::SoOdd,
        GroupType::Sp,
        GroupType::SoEven,
        GroupType::UEven,
        GroupType::UOdd,
        GroupType::SoStarEven,
        GroupType::OEven,
    ];

    pub fn code(self) -> &'static str {
        match self {
            GroupType::SoOdd => "B",
            GroupType::Sp => "C",
            GroupType::SoEven => "D",
            GroupType::UEven => "U-even",
            GroupType::UOdd => "U-odd",
            GroupType::SoStarEven => "D-star",
            GroupType::OEven => "O-even",
        }
    }

    /// Split types with an integral matrix model.
    pub fn is_split(self) -> bool {
        matches!(self, GroupType::SoOdd | GroupType::Sp | GroupType::SoEven)
    }

    /// Base replacing `τ×σ` when `σ` sits on the trivial group: `L(s, τ)` for
    /// `Sp_{2n}` and `U_{2n+1}`, nothing otherwise.
    pub fn trivial_sigma_base(self) -> Option<BaseKind> {
        match self {
            GroupType::Sp | GroupType::UOdd => Some(BaseKind::TauStd),
            _ => None,
        }
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for GroupType {
    type Err = RepError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GroupType::ALL
            .into_iter()
            .find(|g| g.code().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| RepError::UnknownGroup(s.to_string()))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum RhoLabel {
    Sym2,
    Lambda2,
    Asai,
    AsaiTwisted,
}

pub fn rho_of(g: GroupType) -> RhoLabel {
    match g {
        GroupType::SoOdd => RhoLabel::Sym2,
        GroupType::Sp | GroupType::SoEven | GroupType::SoStarEven | GroupType::OEven => RhoLabel::Lambda2,
        GroupType::UEven => RhoLabel::Asai,
        GroupType::UOdd => RhoLabel::AsaiTwisted,
    }
}

pub fn rho_minus_of(g: GroupType) -> RhoLabel {
    match g {
        GroupType::SoOdd => RhoLabel::Lambda2,
        GroupType::Sp | GroupType::SoEven | GroupType::SoStarEven | GroupType::OEven => RhoLabel::Sym2,
        GroupType::UEven => RhoLabel::AsaiTwisted,
        GroupType::UOdd => RhoLabel::Asai,
    }
}

/// Validated support `r₁ > r₂ > ⋯ > r_t ≥ −1`, one parity, `t` even.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize)]
#[serde(transparent)]
pub struct SupportTuple(Vec<i32>);

impl SupportTuple {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn entries(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The tuple with the pair at `pair_index` (entries `2i`, `2i+1`) removed.
    pub fn without_pair(&self, pair_index: usize) -> Self {
        let mut v = self.0.clone();
        v.drain(2 * pair_index..2 * pair_index + 2);
        Self(v)
    }
}

impl<'de> Deserialize<'de> for SupportTuple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<i32>::deserialize(d)?;
        validate_support(&v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for SupportTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn validate_support(entries: &[i32]) -> Result<SupportTuple, RepError> {
    if let Some(&r) = entries.iter().find(|&&r| r < -1) {
        return Err(RepError::EntryBelowMinusOne(r));
    }
    for w in entries.windows(2) {
        if w[0] <= w[1] {
            return Err(RepError::NotDecreasing(w[0], w[1]));
        }
    }
    for w in entries.windows(2) {
        if (w[0] - w[1]) % 2 != 0 {
            return Err(RepError::ParityMixed(w[0], w[1]));
        }
    }
    if !entries.len().is_multiple_of(2) {
        return Err(RepError::OddLength(entries.len()));
    }
    Ok(SupportTuple(entries.to_vec()))
}

/// Parses `"7,1"` (or `""` for the empty tuple) and validates it.
pub fn parse_support(text: &str) -> Result<SupportTuple, RepError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(SupportTuple::empty());
    }
    let entries = trimmed
        .split(',')
        .map(|p| p.trim().parse::<i32>().map_err(|_| RepError::BadEntry(p.trim().to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    validate_support(&entries)
}

/// A consecutive pair `(r_{2i−1}, r_{2i})`, seen as `|det|^{exponent} τ_{size}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct SegmentPair {
    pub first: i32,
    pub second: i32,
}

impl SegmentPair {
    /// `(r_{2i−1} − r_{2i})/4`
    pub fn exponent(&self) -> Rational {
        ratio(i64::from(self.first - self.second), 4)
    }

    /// `(r_{2i−1} + r_{2i})/2`; zero only for the pair `(1, −1)`.
    pub fn size(&self) -> u32 {
        ((self.first + self.second) / 2) as u32
    }

    /// The `(1, −1)` pair, contributing `φ_τ⊗S₁ − φ_τ⊗S₁ = 0`.
    pub fn is_degenerate(&self) -> bool {
        self.size() == 0
    }

    /// Rebuilds `(r_{2i−1}, r_{2i})` from `exponent` and `size` alone.
    pub fn reconstruct(exponent: &Rational, size: u32) -> (i32, i32) {
        let twice_exp = exponent * Rational::from_integer(2);
        let size = Rational::from_integer(i64::from(size));
        let first = size + twice_exp;
        let second = size - twice_exp;
        (*first.numer() as i32, *second.numer() as i32)
    }
}

pub fn segment_pairs(support: &SupportTuple) -> Vec<SegmentPair> {
    support.0.chunks_exact(2).map(|c| SegmentPair { first: c[0], second: c[1] }).collect()
}

/// Inducing data of `|det|^s τ_a ⋊ σ_r̄`. The supercuspidal `τ` is always
/// taken self-dual.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct InductionDatum {
    pub group: GroupType,
    pub a: u32,
    pub support: SupportTuple,
    /// Whether the partial cuspidal support `σ` lives on a nontrivial group.
    pub has_sigma: bool,
}

impl InductionDatum {
    pub fn new(group: GroupType, a: i64, support: &[i32], has_sigma: bool) -> Result<Self, RepError> {
        if a <= 0 {
            return Err(RepError::NonPositiveSegment(a));
        }
        Ok(Self { group, a: a as u32, support: validate_support(support)?, has_sigma })
    }

    /// The base of the `L(s + (a−1)/2, ·)` factor coming from `σ`, after the
    /// trivial-group convention.
    pub fn sigma_base(&self) -> Option<BaseKind> {
        if self.has_sigma {
            Some(BaseKind::TauSigma)
        } else {
            self.group.trivial_sigma_base()
        }
    }

    pub fn with_support(&self, support: SupportTuple) -> Self {
        Self { support, ..self.clone() }
    }
}

impl fmt::Display for InductionDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} a={} r={}", self.group, self.a, self.support)?;
        if !self.has_sigma {
            write!(f, " (no sigma)")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_validation() {
        assert_eq!(validate_support(&[7, 1]).unwrap().entries(), &[7, 1]);
        assert_eq!(validate_support(&[4, 4]), Err(RepError::NotDecreasing(4, 4)));
        assert_eq!(validate_support(&[3, 0]), Err(RepError::ParityMixed(3, 0)));
        assert_eq!(validate_support(&[5, 3, 1]), Err(RepError::OddLength(3)));
        assert_eq!(validate_support(&[1, -3]), Err(RepError::EntryBelowMinusOne(-3)));
        assert!(validate_support(&[]).unwrap().is_empty());
        assert!(validate_support(&[1, -1]).is_ok());
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_support(" 3, -1 ").unwrap().entries(), &[3, -1]);
        assert!(parse_support("").unwrap().is_empty());
        assert!(matches!(parse_support("3,x"), Err(RepError::BadEntry(_))));
        assert_eq!("U-even".parse::<GroupType>().unwrap(), GroupType::UEven);
        assert_eq!("c".parse::<GroupType>().unwrap(), GroupType::Sp);
        assert!("E8".parse::<GroupType>().is_err());
        for g in GroupType::ALL {
            assert_eq!(g.code().parse::<GroupType>().unwrap(), g);
        }
    }

    #[test]
    fn pairs() {
        let p = segment_pairs(&validate_support(&[7, 1]).unwrap());
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].exponent(), ratio(3, 2));
        assert_eq!(p[0].size(), 4);
        let q = segment_pairs(&validate_support(&[3, -1]).unwrap());
        assert_eq!((q[0].exponent(), q[0].size()), (ratio(1, 1), 1));
        assert!(segment_pairs(&SupportTuple::empty()).is_empty());
        let d = segment_pairs(&validate_support(&[1, -1]).unwrap());
        assert!(d[0].is_degenerate());
    }

    #[test]
    fn rho_tables() {
        assert_eq!((rho_of(GroupType::SoOdd), rho_minus_of(GroupType::SoOdd)), (RhoLabel::Sym2, RhoLabel::Lambda2));
        assert_eq!((rho_of(GroupType::Sp), rho_minus_of(GroupType::Sp)), (RhoLabel::Lambda2, RhoLabel::Sym2));
        assert_eq!((rho_of(GroupType::UEven), rho_minus_of(GroupType::UEven)), (RhoLabel::Asai, RhoLabel::AsaiTwisted));
        for g in GroupType::ALL {
            let pair = [rho_of(g), rho_minus_of(g)];
            assert_ne!(pair[0], pair[1]);
            let split = pair.contains(&RhoLabel::Sym2) && pair.contains(&RhoLabel::Lambda2);
            let asai = pair.contains(&RhoLabel::Asai) && pair.contains(&RhoLabel::AsaiTwisted);
            assert!(split ^ asai, "{g}");
        }
    }

    #[test]
    fn datum_rules() {
        assert!(matches!(InductionDatum::new(GroupType::Sp, 0, &[], true), Err(RepError::NonPositiveSegment(0))));
        let d = InductionDatum::new(GroupType::Sp, 2, &[3, -1], false).unwrap();
        assert_eq!(d.sigma_base(), Some(BaseKind::TauStd));
        let b = InductionDatum::new(GroupType::SoOdd, 2, &[], false).unwrap();
        assert_eq!(b.sigma_base(), None);
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(json, r#"{"group":"C","a":2,"support":[3,-1],"has_sigma":false}"#);
        assert_eq!(serde_json::from_str::<InductionDatum>(&json).unwrap(), d);
        assert!(serde_json::from_str::<InductionDatum>(r#"{"group":"C","a":2,"support":[3,0],"has_sigma":true}"#).is_err());
    }
}
