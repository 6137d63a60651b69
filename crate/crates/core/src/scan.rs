//! Grid scans over `(a, r₁, r₂)`: one JSON report per line, in input order,
//! followed by a summary line.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::classify::{TerminalCase, Verdict};
use crate::analysis::{classify, AnalysisError};
use crate::rep::{validate_support, GroupType, InductionDatum, RepError};
use crate::Rational;

/// Points classified per parallel batch; output order never depends on it.
const BATCH: usize = 512;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityFilter {
    #[default]
    Any,
    Odd,
    Even,
}

impl ParityFilter {
    fn admits(self, r1: i64) -> bool {
        match self {
            ParityFilter::Any => true,
            ParityFilter::Odd => r1.rem_euclid(2) == 1,
            ParityFilter::Even => r1.rem_euclid(2) == 0,
        }
    }
}

fn default_true() -> bool {
    true
}

/// A scan request, read from JSON. Ranges are inclusive `[min, max]` pairs.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSpec {
    pub group: GroupType,
    pub a_range: [i64; 2],
    pub r1_range: [i64; 2],
    pub r2_range: [i64; 2],
    /// Filter on the parity of `r₁`.
    #[serde(default)]
    pub parity: ParityFilter,
    #[serde(default = "default_true")]
    pub has_sigma: bool,
    /// Keep only `r₂ < a < r₁`, the points that reach the Step 3 terminal.
    #[serde(default)]
    pub straddling_only: bool,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum ScanError {
    #[error("invalid scan spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl ScanSpec {
    pub fn from_json(text: &str) -> Result<Self, ScanError> {
        let spec: ScanSpec = serde_json::from_str(text).map_err(|e| ScanError::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), ScanError> {
        for (name, [lo, hi]) in [("a_range", self.a_range), ("r1_range", self.r1_range), ("r2_range", self.r2_range)] {
            if lo > hi {
                return Err(ScanError::InvalidSpec(format!("{name} is empty: [{lo}, {hi}]")));
            }
        }
        if self.a_range[0] < 1 {
            return Err(ScanError::InvalidSpec(format!("a_range must start at 1 or above, got {}", self.a_range[0])));
        }
        let bound = i64::from(i32::MAX);
        if [self.r1_range, self.r2_range].iter().flatten().any(|v| v.abs() > bound) || self.a_range[1] > bound {
            return Err(ScanError::InvalidSpec("range bounds exceed the supported magnitude".into()));
        }
        Ok(())
    }

    /// Grid points in lexicographic `(a, r₁, r₂)` order.
    pub fn points(&self) -> impl Iterator<Item = (i64, i64, i64)> + '_ {
        let [a0, a1] = self.a_range;
        let [p0, p1] = self.r1_range;
        let [q0, q1] = self.r2_range;
        (a0..=a1).flat_map(move |a| (p0..=p1).flat_map(move |r1| (q0..=q1).map(move |r2| (a, r1, r2))))
    }
}

/// Why a grid point produced no report.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    ParityFilter,
    NotStraddling,
    EntryBelowMinusOne,
    NotDecreasing,
    ParityMixed,
}

/// A grid point with an exceptional point other than `s = 0`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ExceptionalInput {
    pub a: i64,
    pub r1: i64,
    pub r2: i64,
    #[serde(with = "crate::scalar::rational_vec")]
    pub exceptional: Vec<Rational>,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct ScanSummary {
    pub points: u64,
    pub reports: u64,
    pub skipped: BTreeMap<SkipReason, u64>,
    pub verdicts: BTreeMap<Verdict, u64>,
    pub terminal_cases: BTreeMap<TerminalCase, u64>,
    pub exceptional_beyond_zero: Vec<ExceptionalInput>,
}

fn skip_reason(spec: &ScanSpec, a: i64, r1: i64, r2: i64) -> Option<SkipReason> {
    if !spec.parity.admits(r1) {
        return Some(SkipReason::ParityFilter);
    }
    match validate_support(&[r1 as i32, r2 as i32]) {
        Err(RepError::EntryBelowMinusOne(_)) => return Some(SkipReason::EntryBelowMinusOne),
        Err(RepError::NotDecreasing(..)) => return Some(SkipReason::NotDecreasing),
        Err(_) => return Some(SkipReason::ParityMixed),
        Ok(_) => {}
    }
    if spec.straddling_only && !(r2 < a && a < r1) {
        return Some(SkipReason::NotStraddling);
    }
    None
}

/// Runs the scan, writing one report per line to `out` and then a final
/// `{"summary": …}` line. Output bytes depend only on `spec`.
pub fn run_scan<W: Write>(spec: &ScanSpec, out: &mut W) -> Result<ScanSummary, ScanError> {
    spec.validate()?;
    let mut summary = ScanSummary::default();
    let points: Vec<(i64, i64, i64)> = spec.points().collect();
    for batch in points.chunks(BATCH) {
        let results: Vec<Result<Option<(String, _)>, ScanError>> = batch
            .par_iter()
            .map(|&(a, r1, r2)| {
                if skip_reason(spec, a, r1, r2).is_some() {
                    return Ok(None);
                }
                let datum = InductionDatum::new(spec.group, a, &[r1 as i32, r2 as i32], spec.has_sigma)
                    .map_err(AnalysisError::from)?;
                let report = classify(&datum)?;
                let line = serde_json::to_string(&report).map_err(io::Error::from)?;
                Ok(Some((line, report)))
            })
            .collect();
        for (&(a, r1, r2), result) in batch.iter().zip(results) {
            summary.points += 1;
            match result? {
                None => {
                    let reason = skip_reason(spec, a, r1, r2).expect("skipped points have a reason");
                    *summary.skipped.entry(reason).or_default() += 1;
                }
                Some((line, report)) => {
                    writeln!(out, "{line}")?;
                    summary.reports += 1;
                    *summary.verdicts.entry(report.verdict).or_default() += 1;
                    *summary.terminal_cases.entry(report.terminal_case).or_default() += 1;
                    if report.has_exceptional_beyond_zero() {
                        summary.exceptional_beyond_zero.push(ExceptionalInput {
                            a,
                            r1,
                            r2,
                            exceptional: report.exceptional.iter().map(|e| e.s).collect(),
                        });
                    }
                }
            }
        }
    }
    #[derive(Serialize)]
    struct Wrapped<'a> {
        summary: &'a ScanSummary,
    }
    let line = serde_json::to_string(&Wrapped { summary: &summary }).map_err(io::Error::from)?;
    writeln!(out, "{line}")?;
    out.flush()?;
    Ok(summary)
}
