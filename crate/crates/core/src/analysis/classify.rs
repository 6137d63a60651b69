//! Case classification: strip every pair that can be traded for a GL block,
//! land in a terminal case, compute the discrepancies of all applicable
//! decompositions and intersect their possible poles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::identity::{branch, is_strippable, verify_pair_strip, IdentityBranch, IdentityVariant};
use super::ways::{discrepancy, gl_diagram, gl_discrepancy, gl_matching_diagram, WayId};
use super::{AnalysisError, SigmaConvention};
use crate::rep::{rho_minus_of, rho_of, segment_pairs, GroupType, InductionDatum, RhoLabel};
use crate::scalar::{fmt_ratio, int, ratio};
use crate::{LFactorProduct, Rational};

/// A sorted set of possible poles, serialized as a list of `{num, den}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PoleSet(#[serde(with = "crate::scalar::rational_vec")] pub Vec<Rational>);

impl PoleSet {
    pub fn from_unsorted(values: impl IntoIterator<Item = Rational>) -> Self {
        let set: BTreeSet<Rational> = values.into_iter().collect();
        Self(set.into_iter().collect())
    }

    pub fn contains(&self, r: &Rational) -> bool {
        self.0.binary_search(r).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn intersect(&self, other: &PoleSet) -> PoleSet {
        PoleSet(self.0.iter().filter(|r| other.contains(r)).cloned().collect())
    }
}

impl fmt::Display for PoleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_ratio).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum TerminalCase {
    GLLemma,
    Step2Supercuspidal,
    Step2SegmentVsSigmaR,
    Step3,
    CorankOneBase,
}

/// How holomorphy at a common possible pole (or its absence) is settled.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum ResolutionTag {
    /// `M*(0)² = id` on a multiplicity-free induced representation.
    MultiplicityFreeInvolution,
    /// A decomposition whose first arrows kill the offending subrepresentation.
    KernelDiagram,
    /// The discrepancies are coprime, so holomorphy follows by induction.
    CoprimeInduction,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ExceptionalPoint {
    #[serde(with = "crate::scalar::rational")]
    pub s: Rational,
    pub condition: String,
    pub resolution: ResolutionTag,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// No common possible pole: holomorphic by induction.
    CoprimeInduction,
    /// Common possible poles exist and each is settled directly.
    ExceptionalPointsResolved,
    /// Nothing to decompose.
    CorankOneBase,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CoprimeInduction => "holomorphic: the discrepancies share no possible pole",
            Verdict::ExceptionalPointsResolved => "holomorphic: every common possible pole is resolved directly",
            Verdict::CorankOneBase => "holomorphic: corank-one base case, no decomposition to compare",
        })
    }
}

/// One reduction applied before reaching the terminal case.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StripEntry {
    /// A support pair traded for `|det|^{exponent} τ_size`.
    Pair {
        pair: [i32; 2],
        branch: IdentityBranch,
        #[serde(with = "crate::scalar::rational")]
        exponent: Rational,
        size: u32,
        degenerate: bool,
        verified: bool,
    },
    /// A GL block split that lowers `(a, b)` by one.
    GlMatching { from: [u32; 2], to: [u32; 2], verified: bool },
}

impl StripEntry {
    pub fn verified(&self) -> bool {
        match self {
            StripEntry::Pair { verified, .. } | StripEntry::GlMatching { verified, .. } => *verified,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportInput {
    Classical(InductionDatum),
    Gl { a: u32, b: u32 },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Conventions {
    /// Treatment of a trailing `r_t ≤ 0` in the terminal diagrams.
    pub sigma_convention: SigmaConvention,
    /// Second shift used in the pair identity.
    pub identity_a_shift: String,
    /// Bilinear form used by the matrix layer.
    pub form: String,
    /// Every base factor is taken to have at most a simple pole at argument 0.
    pub possible_pole_rule: String,
    pub tau_self_dual: bool,
    pub rho: Option<RhoLabel>,
    pub rho_minus: Option<RhoLabel>,
    /// Set when the `ρ` table is borrowed from another type.
    pub rho_table_note: Option<String>,
    /// The variable the poles are expressed in.
    pub pole_variable: String,
    /// Plain intersection of the pole sets.
    pub raw_common_poles: PoleSet,
    /// Whether `s = 0` is kept as a common pole regardless of the intersection.
    pub s_zero_always_common: bool,
}

/// A derived pole set that differs from the commonly printed list.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PoleDivergence {
    pub way: WayId,
    pub printed: PoleSet,
    pub derived: PoleSet,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HolomorphyReport {
    pub input: ReportInput,
    pub strip_log: Vec<StripEntry>,
    pub terminal_case: TerminalCase,
    pub discrepancies: BTreeMap<WayId, LFactorProduct>,
    pub pole_sets: BTreeMap<WayId, PoleSet>,
    pub common_poles: PoleSet,
    pub exceptional: Vec<ExceptionalPoint>,
    pub verdict: Verdict,
    pub conventions: Conventions,
    pub printed_pole_divergences: Vec<PoleDivergence>,
}

impl HolomorphyReport {
    /// Whether any common pole other than `s = 0` was found.
    pub fn has_exceptional_beyond_zero(&self) -> bool {
        self.exceptional.iter().any(|e| e.s != int(0))
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let input = match &self.input {
            ReportInput::Classical(d) => format!("M(s, tau_{}, sigma{}) on {}", d.a, d.support, d.group),
            ReportInput::Gl { a, b } => format!("M_GL(s, tau_{a}, tau_{b})"),
        };
        out.push_str(&format!("input:         {input}\n"));
        for entry in &self.strip_log {
            let line = match entry {
                StripEntry::Pair { pair, exponent, size, verified, .. } => format!(
                    "strip pair ({},{}) -> |det|^{} tau_{} [{}]",
                    pair[0],
                    pair[1],
                    fmt_ratio(exponent),
                    size,
                    if *verified { "factors match" } else { "MISMATCH" }
                ),
                StripEntry::GlMatching { from, to, verified } => format!(
                    "split ({},{}) -> ({},{}) [{}]",
                    from[0],
                    from[1],
                    to[0],
                    to[1],
                    if *verified { "factors match" } else { "MISMATCH" }
                ),
            };
            out.push_str(&format!("  {line}\n"));
        }
        out.push_str(&format!("terminal case: {:?}\n", self.terminal_case));
        for (way, p) in &self.discrepancies {
            out.push_str(&format!("  {way}: {p}\n"));
            out.push_str(&format!("    possible poles {}\n", self.pole_sets[way]));
        }
        out.push_str(&format!("common poles:  {}\n", self.common_poles));
        for e in &self.exceptional {
            out.push_str(&format!("  s = {}: {} ({:?})\n", fmt_ratio(&e.s), e.condition, e.resolution));
        }
        for div in &self.printed_pole_divergences {
            out.push_str(&format!("  note: {} poles {} (commonly listed as {})\n", div.way, div.derived, div.printed));
        }
        out.push_str(&format!("verdict:       {}\n", self.verdict));
        out
    }
}

fn conventions(group: Option<GroupType>, sigma_convention: SigmaConvention, pole_variable: String) -> Conventions {
    Conventions {
        sigma_convention,
        identity_a_shift: IdentityVariant::Corrected.describe().to_string(),
        form: "antidiagonal".to_string(),
        possible_pole_rule: "simple pole at argument 0 for every base".to_string(),
        tau_self_dual: true,
        rho: group.map(rho_of),
        rho_minus: group.map(rho_minus_of),
        rho_table_note: (group == Some(GroupType::OEven))
            .then(|| "O-even uses the D (SO_2n) table".to_string()),
        pole_variable,
        raw_common_poles: PoleSet::default(),
        s_zero_always_common: false,
    }
}

fn resolution_for(s: &Rational) -> ResolutionTag {
    if *s == int(0) {
        ResolutionTag::MultiplicityFreeInvolution
    } else {
        ResolutionTag::KernelDiagram
    }
}

/// Possible poles as commonly listed for the terminal decompositions.
fn printed_poles(way: WayId, a: i64, r1: i64, r2: i64) -> Option<PoleSet> {
    let h = |n: i64| ratio(n, 2);
    let list = match way {
        WayId::Step2AWay1 => vec![h(1), h(2 - a), h(3 - a)],
        WayId::Step2AWay2 => vec![int(0), h(a - 1)],
        WayId::Step2BWay3 => vec![h(r1 - 1), h(3 - r1)],
        WayId::Step2BWay4 => vec![int(0), h(1 - r2)],
        WayId::Step3Way1 => vec![h(1), h(2 - a), h(r2 + 2 - a), h(3 - a)],
        WayId::Step3Way2 => vec![int(0), h(a - 1), h(a - r2)],
        WayId::Step3Way3 if a == r1 - 1 => vec![h(1)],
        WayId::Step3Way3 => vec![h(r1 - a), h(a + 2 - r1)],
        _ => return None,
    };
    Some(PoleSet::from_unsorted(list))
}

fn condition_text(case: TerminalCase, s: &Rational, a: i64, r1: i64, r2: i64) -> String {
    match case {
        TerminalCase::Step2Supercuspidal => format!("a = {a}"),
        TerminalCase::Step2SegmentVsSigmaR => format!("r1 = {r1}"),
        TerminalCase::Step3 if *s == int(0) => "always retained at s = 0".to_string(),
        TerminalCase::Step3 => {
            let mut conds = Vec::new();
            if a == r1 - 1 && a == r2 + 1 {
                conds.push("a = r1-1 = r2+1");
            }
            if a == r1 - 1 && a == 2 {
                conds.push("a = r1-1 = 2");
            }
            if conds.is_empty() {
                "derived common pole".to_string()
            } else {
                conds.join(" and ")
            }
        }
        TerminalCase::GLLemma => {
            if a >= r1 {
                "a = 2 against b = 1".to_string()
            } else {
                "a = 1 against b = 2".to_string()
            }
        }
        TerminalCase::CorankOneBase => "derived common pole".to_string(),
    }
}

fn intersect_all(pole_sets: &BTreeMap<WayId, PoleSet>) -> PoleSet {
    let mut it = pole_sets.values();
    match it.next() {
        None => PoleSet::default(),
        Some(first) => it.fold(first.clone(), |acc, p| acc.intersect(p)),
    }
}

fn finish_verdict(case: TerminalCase, exceptional: &[ExceptionalPoint]) -> Verdict {
    if case == TerminalCase::CorankOneBase {
        Verdict::CorankOneBase
    } else if exceptional.is_empty() {
        Verdict::CoprimeInduction
    } else {
        Verdict::ExceptionalPointsResolved
    }
}

/// Full classification of `M(s, τ_a, σ_r̄)`.
pub fn classify(d: &InductionDatum) -> Result<HolomorphyReport, AnalysisError> {
    let mut current = d.clone();
    let mut strip_log = Vec::new();
    while let Some(index) =
        segment_pairs(&current.support).iter().position(|p| is_strippable(current.a, p.first, p.second))
    {
        let pair = segment_pairs(&current.support)[index];
        let check = verify_pair_strip(&current, index)?;
        strip_log.push(StripEntry::Pair {
            pair: [pair.first, pair.second],
            branch: branch(current.a, pair.first, pair.second).expect("strippable pair has a branch"),
            exponent: pair.exponent(),
            size: pair.size(),
            degenerate: pair.is_degenerate(),
            verified: check.holds,
        });
        current = current.with_support(current.support.without_pair(index));
    }

    let (r1, r2) = match current.support.entries() {
        [] => (0, 0),
        &[r1, r2] => (i64::from(r1), i64::from(r2)),
        more => {
            return Err(AnalysisError::PreconditionViolated(format!(
                "{} pairs straddle a={} after stripping",
                more.len() / 2,
                current.a
            )))
        }
    };
    let a = i64::from(current.a);
    let (case, ways): (TerminalCase, &[WayId]) = match (current.support.is_empty(), current.a == 1) {
        (true, true) => (TerminalCase::CorankOneBase, &[]),
        (true, false) => (TerminalCase::Step2Supercuspidal, &[WayId::Step2AWay1, WayId::Step2AWay2]),
        (false, true) => (TerminalCase::Step2SegmentVsSigmaR, &[WayId::Step2BWay3, WayId::Step2BWay4]),
        (false, false) => (TerminalCase::Step3, &[WayId::Step3Way1, WayId::Step3Way2, WayId::Step3Way3]),
    };

    let mut discrepancies = BTreeMap::new();
    let mut pole_sets = BTreeMap::new();
    let mut printed_pole_divergences = Vec::new();
    for &way in ways {
        let p = discrepancy(way, &current)?;
        let poles = PoleSet(p.possible_poles());
        if let Some(printed) = printed_poles(way, a, r1, r2) {
            if printed != poles {
                printed_pole_divergences.push(PoleDivergence { way, printed, derived: poles.clone() });
            }
        }
        discrepancies.insert(way, p);
        pole_sets.insert(way, poles);
    }

    let raw = intersect_all(&pole_sets);
    let mut common = raw.clone();
    let s_zero_always_common = case == TerminalCase::Step3;
    if s_zero_always_common && !common.contains(&int(0)) {
        common = PoleSet::from_unsorted(common.0.iter().cloned().chain([int(0)]));
    }
    let exceptional: Vec<ExceptionalPoint> = common
        .0
        .iter()
        .map(|s| ExceptionalPoint {
            s: *s,
            condition: condition_text(case, s, a, r1, r2),
            resolution: resolution_for(s),
        })
        .collect();

    let mut conv = conventions(Some(d.group), SigmaConvention::Absorbed, "s".to_string());
    conv.raw_common_poles = raw;
    conv.s_zero_always_common = s_zero_always_common;
    Ok(HolomorphyReport {
        input: ReportInput::Classical(d.clone()),
        strip_log,
        terminal_case: case,
        discrepancies,
        pole_sets,
        common_poles: common,
        verdict: finish_verdict(case, &exceptional),
        exceptional,
        conventions: conv,
        printed_pole_divergences,
    })
}

/// Classification of `M_GL(s, τ_a, τ_b)`: split blocks until one side is a
/// single `τ`, then compare the two decompositions of the base operator.
pub fn classify_gl(a: u32, b: u32) -> Result<HolomorphyReport, AnalysisError> {
    if a == 0 || b == 0 {
        return Err(AnalysisError::PreconditionViolated(format!("segment lengths must be positive, got ({a}, {b})")));
    }
    let mut strip_log = Vec::new();
    let (mut x, mut y) = (a, b);
    while x >= 2 && y >= 2 {
        let holds = gl_matching_diagram(x, y)?.evaluate(None)?.is_one();
        let to = if x >= y { [x, y - 1] } else { [x - 1, y] };
        strip_log.push(StripEntry::GlMatching { from: [x, y], to, verified: holds });
        (x, y) = (to[0], to[1]);
    }

    let (case, ways): (TerminalCase, &[WayId]) = match (x, y) {
        (1, 1) => (TerminalCase::CorankOneBase, &[]),
        (_, 1) => (TerminalCase::GLLemma, &[WayId::GlWay1, WayId::GlWay2]),
        _ => (TerminalCase::GLLemma, &[WayId::GlWay3, WayId::GlWay4]),
    };
    let mut discrepancies = BTreeMap::new();
    let mut pole_sets = BTreeMap::new();
    for &way in ways {
        gl_diagram(way, x, y)?;
        let p = gl_discrepancy(way, x, y)?;
        pole_sets.insert(way, PoleSet(p.possible_poles()));
        discrepancies.insert(way, p);
    }
    let common = intersect_all(&pole_sets);
    let exceptional: Vec<ExceptionalPoint> = common
        .0
        .iter()
        .map(|s| ExceptionalPoint {
            s: *s,
            condition: condition_text(TerminalCase::GLLemma, s, i64::from(x), i64::from(y), 0),
            resolution: ResolutionTag::KernelDiagram,
        })
        .collect();
    let mut conv = conventions(None, SigmaConvention::Literal, format!("s of M_GL(s, tau_{x}, tau_{y})"));
    conv.raw_common_poles = common.clone();
    Ok(HolomorphyReport {
        input: ReportInput::Gl { a, b },
        strip_log,
        terminal_case: case,
        discrepancies,
        pole_sets,
        common_poles: common,
        verdict: finish_verdict(case, &exceptional),
        exceptional,
        conventions: conv,
        printed_pole_divergences: Vec::new(),
    })
}
