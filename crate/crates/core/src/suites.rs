//! Exhaustive verification suites over the parameter grids, each reporting
//! per-check counts and the first failure witness.

use std::fmt;

use serde::Serialize;

use crate::analysis::classify::{PoleSet, TerminalCase};
use crate::analysis::identity::is_strippable;
use crate::analysis::ways::gl_matching_diagram;
use crate::analysis::{
    classify, classify_gl, closed_form, discrepancy, gl_closed_form, gl_discrepancy, verify_identity_a,
    verify_pair_strip, IdentityVariant, WayId,
};
use crate::lfactor::{expand_rho, expand_tensor, Affine, BaseKind, LAtom};
use crate::rep::{segment_pairs, validate_support, GroupType, InductionDatum};
use crate::scalar::{int, ratio};
use crate::weyl::{build_c, build_form, build_wk, check_decomposition, corrected_so_even_wk, Way};
use crate::{LFactorProduct, Rational};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Identities,
    Gl,
    Step2,
    Step3,
    Reduction,
    Weyl,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Identities, Suite::Gl, Suite::Step2, Suite::Step3, Suite::Reduction, Suite::Weyl];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Gl => "gl",
            Suite::Step2 => "step2",
            Suite::Step3 => "step3",
            Suite::Reduction => "reduction",
            Suite::Weyl => "weyl",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    pub fn run(self) -> SuiteReport {
        match self {
            Suite::Identities => identities(),
            Suite::Gl => gl(),
            Suite::Step2 => step2(),
            Suite::Step3 => step3(),
            Suite::Reduction => reduction(),
            Suite::Weyl => weyl(),
        }
    }
}

/// Counts for one assertion family.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: u64,
    pub total: u64,
    pub first_failure: Option<String>,
    pub note: Option<String>,
}

impl Check {
    fn new(name: &str) -> Self {
        Self { name: name.to_string(), passed: 0, total: 0, first_failure: None, note: None }
    }

    /// Records one assertion; `witness` is only rendered on failure.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.first_failure.is_none() {
            self.first_failure = Some(witness());
        }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.total && self.total > 0
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::ok)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.ok() { "ok  " } else { "FAIL" };
            write!(f, "[{status}] {}/{}: passed {}/{}", self.suite.name(), c.name, c.passed, c.total)?;
            if let Some(note) = &c.note {
                write!(f, " ({note})")?;
            }
            writeln!(f)?;
            if let Some(w) = &c.first_failure {
                writeln!(f, "       first failure: {w}")?;
            }
        }
        Ok(())
    }
}

fn rho_atom(c: i64, base: BaseKind) -> (LAtom, i64) {
    (LAtom::new(Affine::two_s().plus(&int(c)), base), 1)
}

/// Lines 2 and 3 of the segment expansion of `L(2s, τ_a, ρ)`, written out
/// term by term: `L(2(s∓1/2), τ_{a−1}, ρ)`.
fn rho_line(a: i64, lower: bool) -> LFactorProduct {
    let (start, rho_end, minus_end) = if lower {
        (2, (a + 2) / 2, (a + 1) / 2)
    } else {
        (1, a / 2, (a - 1) / 2)
    };
    let rho = (start..=rho_end).map(|i| rho_atom(a + 1 - 2 * i, BaseKind::TauRho));
    let minus = (start..=minus_end).map(|i| rho_atom(a - 2 * i, BaseKind::TauRhoMinus));
    LFactorProduct::from_atoms(rho.chain(minus))
}

fn identities() -> SuiteReport {
    let mut line2 = Check::new("rho_expansion_line2");
    let mut line3 = Check::new("rho_expansion_line3");
    for a in 2..=20i64 {
        let prev = expand_rho(a - 1, &crate::AffineArg::two_s()).expect("a-1 >= 1");
        let lower = prev.shift_s(&ratio(-1, 2));
        let upper = prev.shift_s(&ratio(1, 2));
        line2.record(lower == rho_line(a, true), || format!("a={a}: {lower} vs {}", rho_line(a, true)));
        line3.record(upper == rho_line(a, false), || format!("a={a}: {upper} vs {}", rho_line(a, false)));
    }

    let mut sym = Check::new("tensor_symmetry");
    for a in 1..=20 {
        for r in 1..=20 {
            let x = expand_tensor(a, r, &crate::AffineArg::s()).expect("positive");
            let y = expand_tensor(r, a, &crate::AffineArg::s()).expect("positive");
            sym.record(x == y, || format!("a={a}, r={r}"));
        }
    }

    let mut corrected = Check::new("pair_identity_corrected");
    let mut printed_failures = Vec::new();
    for (a, r1, r2) in admissible_identity_triples(15) {
        let c = verify_identity_a(a, r1, r2, IdentityVariant::Corrected).expect("admissible");
        corrected.record(c.holds, || format!("a={a}, r=({r1},{r2}): {}", c.witness));
        if !verify_identity_a(a, r1, r2, IdentityVariant::Printed).expect("admissible").holds {
            printed_failures.push((a, r1, r2));
        }
    }
    let mut printed = Check::new("pair_identity_printed_variant_fails");
    printed.record(!printed_failures.is_empty(), || "the +(r1+r2)/4 variant held everywhere".to_string());
    if let Some((a, r1, r2)) = printed_failures.first() {
        printed.note = Some(format!(
            "+(r1+r2)/4 fails on {} triples, e.g. a={a}, r=({r1},{r2})",
            printed_failures.len()
        ));
    }
    SuiteReport { suite: Suite::Identities, checks: vec![line2, line3, sym, corrected, printed] }
}

/// `(a, r₁, r₂)` with `1 ≤ a ≤ max`, `max ≥ r₁ > r₂ ≥ −1` of one parity, not straddling `a`.
pub fn admissible_identity_triples(max: i32) -> Vec<(u32, i32, i32)> {
    let mut out = Vec::new();
    for a in 1..=max as u32 {
        for r1 in -1..=max {
            for r2 in -1..r1 {
                if (r1 - r2) % 2 == 0 && is_strippable(a, r1, r2) {
                    out.push((a, r1, r2));
                }
            }
        }
    }
    out
}

fn gl() -> SuiteReport {
    let mut forms = Check::new("closed_forms");
    for a in 2..=20u32 {
        for way in [WayId::GlWay1, WayId::GlWay2] {
            let p = gl_discrepancy(way, a, 1).expect("applicable");
            let q = gl_closed_form(way, a, 1).expect("applicable");
            forms.record(p == q, || format!("{way}, a={a}: {p} vs {q}"));
        }
    }
    for b in 2..=20u32 {
        for way in [WayId::GlWay3, WayId::GlWay4] {
            let p = gl_discrepancy(way, 1, b).expect("applicable");
            let q = gl_closed_form(way, 1, b).expect("applicable");
            forms.record(p == q, || format!("{way}, b={b}: {p} vs {q}"));
        }
    }
    let mut matching = Check::new("matching_reductions");
    let mut common = Check::new("common_pole_rule");
    for a in 1..=20u32 {
        for b in 1..=20u32 {
            if let Ok(dg) = gl_matching_diagram(a, b) {
                let q = dg.evaluate(None).expect("diagram evaluates");
                matching.record(q.is_one(), || format!("({a},{b}): {q}"));
            }
            let report = classify_gl(a, b).expect("positive");
            let expect_pole = matches!(gl_base(a, b), (2, 1) | (1, 2));
            let expected = if expect_pole { PoleSet(vec![ratio(1, 4)]) } else { PoleSet::default() };
            common.record(report.common_poles == expected, || {
                format!("({a},{b}): got {}, expected {expected}", report.common_poles)
            });
        }
    }
    SuiteReport { suite: Suite::Gl, checks: vec![forms, matching, common] }
}

/// Where repeatedly splitting the longer block lands: `(x, 1)` or `(1, y)`.
fn gl_base(mut a: u32, mut b: u32) -> (u32, u32) {
    while a > 1 && b > 1 {
        if a >= b {
            b -= 1;
        } else {
            a -= 1;
        }
    }
    (a, b)
}

fn poles(values: &[Rational]) -> PoleSet {
    PoleSet::from_unsorted(values.iter().cloned())
}

fn step2() -> SuiteReport {
    let mut forms1 = Check::new("supercuspidal_closed_forms");
    let mut common1 = Check::new("supercuspidal_common_poles");
    let mut invariance = Check::new("group_invariance");
    for a in 2..=20i64 {
        let d = InductionDatum::new(GroupType::Sp, a, &[], true).expect("valid");
        for way in [WayId::Step2AWay1, WayId::Step2AWay2] {
            let p = discrepancy(way, &d).expect("applicable");
            let q = closed_form(way, &d).expect("applicable");
            forms1.record(p == q, || format!("{way}, a={a}: {p} vs {q}"));
        }
        let expected = match a {
            2 => poles(&[int(0), ratio(1, 2)]),
            3 => poles(&[int(0)]),
            _ => PoleSet::default(),
        };
        let got = classify(&d).expect("valid").common_poles;
        common1.record(got == expected, || format!("a={a}: got {got}, expected {expected}"));
        record_invariance(&mut invariance, a, &[]);
    }

    let mut forms2 = Check::new("segment_closed_forms");
    let mut common2 = Check::new("segment_common_poles");
    for r1 in 2..=41i32 {
        let r2 = if r1 % 2 == 0 { 0 } else { -1 };
        let d = InductionDatum::new(GroupType::Sp, 1, &[r1, r2], true).expect("valid");
        for way in [WayId::Step2BWay3, WayId::Step2BWay4] {
            let p = discrepancy(way, &d).expect("applicable");
            let q = closed_form(way, &d).expect("applicable");
            forms2.record(p == q, || format!("{way}, r=({r1},{r2}): {p} vs {q}"));
        }
        let expected = match r1 {
            2 => poles(&[ratio(1, 2)]),
            3 => poles(&[int(0), int(1)]),
            _ => PoleSet::default(),
        };
        let report = classify(&d).expect("valid");
        let ok = report.common_poles == expected && report.terminal_case == TerminalCase::Step2SegmentVsSigmaR;
        common2.record(ok, || format!("r=({r1},{r2}): got {}, expected {expected}", report.common_poles));
        record_invariance(&mut invariance, 1, &[r1, r2]);
    }
    SuiteReport { suite: Suite::Step2, checks: vec![forms1, common1, forms2, common2, invariance] }
}

/// Pole sets agree between types B and C, with `ρ` and `ρ⁻` exchanged on one side.
fn record_invariance(check: &mut Check, a: i64, support: &[i32]) {
    let b = classify(&InductionDatum::new(GroupType::SoOdd, a, support, true).expect("valid")).expect("valid");
    let c = classify(&InductionDatum::new(GroupType::Sp, a, support, true).expect("valid")).expect("valid");
    let swapped_same = b
        .discrepancies
        .iter()
        .all(|(way, p)| PoleSet(p.swap_rho().possible_poles()) == c.pole_sets[way]);
    check.record(b.pole_sets == c.pole_sets && b.common_poles == c.common_poles && swapped_same, || {
        format!("a={a}, r={support:?}")
    });
}

/// Valid Step 3 data: `2 ≤ a ≤ a_max`, `a < r₁ ≤ r1_max`, `−1 ≤ r₂ < a`, one parity.
pub fn step3_grid(a_max: i32, r1_max: i32) -> Vec<(i32, i32, i32)> {
    let mut out = Vec::new();
    for a in 2..=a_max {
        for r1 in a + 1..=r1_max {
            for r2 in -1..a {
                if (r1 - r2) % 2 == 0 {
                    out.push((a, r1, r2));
                }
            }
        }
    }
    out
}

fn step3() -> SuiteReport {
    let mut forms = Check::new("closed_forms");
    let mut common = Check::new("common_poles");
    let mut invariance = Check::new("group_invariance");
    for (a, r1, r2) in step3_grid(20, 41) {
        let d = InductionDatum::new(GroupType::Sp, i64::from(a), &[r1, r2], true).expect("valid");
        for way in [WayId::Step3Way1, WayId::Step3Way2, WayId::Step3Way3] {
            let p = discrepancy(way, &d).expect("applicable");
            let q = closed_form(way, &d).expect("applicable");
            forms.record(p == q, || format!("{way}, a={a}, r=({r1},{r2}): {p} vs {q}"));
        }
        let half = a == r1 - 1 && (a == r2 + 1 || a == 2);
        let expected = if half { poles(&[int(0), ratio(1, 2)]) } else { poles(&[int(0)]) };
        let got = classify(&d).expect("valid").common_poles;
        common.record(got == expected, || format!("a={a}, r=({r1},{r2}): got {got}, expected {expected}"));
        if r1 <= 21 {
            record_invariance(&mut invariance, i64::from(a), &[r1, r2]);
        }
    }
    SuiteReport { suite: Suite::Step3, checks: vec![forms, common, invariance] }
}

/// Every valid support tuple with entries in `[−1, max_entry]` and at most `max_len` entries.
pub fn supports_up_to(max_entry: i32, max_len: usize) -> Vec<Vec<i32>> {
    let mut out = vec![Vec::new()];
    for parity in [1, 0] {
        let values: Vec<i32> = (-1..=max_entry).rev().filter(|v| (v - parity) % 2 == 0).collect();
        let mut stack: Vec<(usize, Vec<i32>)> = vec![(0, Vec::new())];
        while let Some((start, current)) = stack.pop() {
            for (i, &v) in values.iter().enumerate().skip(start) {
                let mut next = current.clone();
                next.push(v);
                if next.len() % 2 == 0 {
                    out.push(next.clone());
                }
                if next.len() < max_len {
                    stack.push((i + 1, next));
                }
            }
        }
    }
    out.sort();
    out
}

fn reduction() -> SuiteReport {
    let mut strips = Check::new("pair_strips");
    let mut terminal = Check::new("terminal_after_stripping");
    let supports = supports_up_to(15, 6);
    for a in 1..=12i64 {
        for support in &supports {
            let mut d = InductionDatum::new(GroupType::Sp, a, support, true).expect("generated tuples are valid");
            loop {
                let pairs = segment_pairs(&d.support);
                let Some(index) = pairs.iter().position(|p| is_strippable(d.a, p.first, p.second)) else { break };
                let check = verify_pair_strip(&d, index).expect("strippable");
                strips.record(check.holds, || format!("a={a}, r={}, pair {index}: {}", d.support, check.witness));
                d = d.with_support(d.support.without_pair(index));
            }
            let left = d.support.len();
            let straddles = segment_pairs(&d.support).iter().all(|p| p.first > d.a as i32 && (d.a as i32) > p.second);
            terminal.record(left <= 2 && straddles, || format!("a={a}, r={support:?}: left {}", d.support));
        }
    }
    debug_assert!(supports.iter().all(|s| validate_support(s).is_ok()));
    SuiteReport { suite: Suite::Reduction, checks: vec![strips, terminal] }
}

fn weyl() -> SuiteReport {
    let mut wk = Check::new("w_k_preserves_form");
    let mut decomp = Check::new("decompositions");
    let mut c_checks = Check::new("so_even_c");
    for group in [GroupType::SoOdd, GroupType::Sp, GroupType::SoEven] {
        for n in 1..=6usize {
            let form = build_form(group, n).expect("split");
            for k in 1..=n {
                let ok = build_wk(group, n, k).is_ok_and(|w| form.preserves(&w.matrix));
                wk.record(ok, || format!("{group} n={n} k={k}"));
                for (way, max_d) in [(Way::Way12, k), (Way::Way34, n - k)] {
                    for d in 0..=max_d {
                        match check_decomposition(way, group, n, k, d) {
                            Ok(c) => decomp.record(c.passed(), || format!("{group} n={n} k={k} d={d} {way:?}: {:?}", c.outcome)),
                            Err(e) => decomp.record(false, || format!("{group} n={n} k={k} d={d} {way:?}: {e}")),
                        }
                    }
                }
            }
        }
    }
    for n in 1..=6usize {
        let c = build_c(n).expect("n >= 1");
        let form = build_form(GroupType::SoEven, n).expect("split");
        c_checks.record(&c * &c == crate::IntMatrix::identity(2 * n) && c.determinant() == -1, || format!("n={n}"));
        for k in 1..=n {
            let m = corrected_so_even_wk(n, k).expect("valid");
            c_checks.record(form.preserves(&m) && m.determinant() == 1, || format!("c^k w_k, n={n} k={k}"));
        }
    }
    SuiteReport { suite: Suite::Weyl, checks: vec![wk, decomp, c_checks] }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_lines_small() {
        // a = 3: line 2 is L(2s, ρ) L(2s−1, ρ⁻), line 3 is L(2s+2, ρ) L(2s+1, ρ⁻)
        assert_eq!(
            rho_line(3, true),
            LFactorProduct::from_atoms([rho_atom(0, BaseKind::TauRho), rho_atom(-1, BaseKind::TauRhoMinus)])
        );
        assert_eq!(
            rho_line(3, false),
            LFactorProduct::from_atoms([rho_atom(2, BaseKind::TauRho), rho_atom(1, BaseKind::TauRhoMinus)])
        );
    }

    #[test]
    fn grids() {
        assert!(admissible_identity_triples(15).contains(&(5, 3, 1)));
        assert!(!admissible_identity_triples(15).contains(&(4, 7, 1)));
        let s = supports_up_to(3, 4);
        assert!(s.contains(&vec![]));
        assert!(s.contains(&vec![3, 1]));
        assert!(!s.contains(&vec![3, 1, -1]));
        assert!(s.contains(&vec![2, 0]));
        assert!(s.contains(&vec![3, 1]));
        assert!(s.iter().all(|t| validate_support(t).is_ok()));
        assert_eq!(step3_grid(2, 3), vec![(2, 3, -1), (2, 3, 1)]);
    }

    #[test]
    fn suite_names() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()), Some(s));
        }
        assert_eq!(Suite::parse("all"), None);
    }
}
