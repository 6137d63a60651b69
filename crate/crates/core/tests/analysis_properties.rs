//! Classifier invariants on random inducing data.

use normcalc::analysis::classify::{PoleSet, ReportInput, StripEntry, TerminalCase, Verdict};
use normcalc::analysis::identity::is_strippable;
use normcalc::analysis::{
    classify, classify_gl, closed_form, discrepancy, verify_identity_a, verify_pair_strip, IdentityVariant,
    WayId,
};
use normcalc::rep::{segment_pairs, validate_support, GroupType, InductionDatum, SegmentPair};
use normcalc::scalar::{int, ratio};
use normcalc::Rational;
use proptest::prelude::*;

/// `(a, r₁, r₂)` with `r₂ < a < r₁`, one parity.
fn step3_point() -> impl Strategy<Value = (i64, i32, i32)> {
    (2i64..=20)
        .prop_flat_map(|a| (Just(a), (a as i32 + 1)..=41))
        .prop_flat_map(|(a, r1)| (Just(a), Just(r1), -1..a as i32))
        .prop_filter("same parity", |(_, r1, r2)| (r1 - r2) % 2 == 0)
}

/// Any valid support of up to six entries below 24.
fn support() -> impl Strategy<Value = Vec<i32>> {
    (any::<bool>(), prop::collection::btree_set(0i32..=12, 0..=6)).prop_filter_map("even length", |(odd, set)| {
        if set.len() % 2 != 0 {
            return None;
        }
        let mut v: Vec<i32> = set.into_iter().map(|k| if odd { 2 * k - 1 } else { 2 * k }).collect();
        v.reverse();
        Some(v)
    })
}

fn step3_expected(a: i64, r1: i32, r2: i32) -> Vec<Rational> {
    let (a, r1, r2) = (a as i32, r1, r2);
    if a == r1 - 1 && (a == r2 + 1 || a == 2) {
        vec![int(0), ratio(1, 2)]
    } else {
        vec![int(0)]
    }
}

fn datum(g: GroupType, a: i64, support: &[i32]) -> InductionDatum {
    InductionDatum::new(g, a, support, true).unwrap()
}

proptest! {
    #[test]
    fn segment_pairs_round_trip(s in support()) {
        let t = validate_support(&s).unwrap();
        let rebuilt: Vec<i32> = segment_pairs(&t)
            .iter()
            .flat_map(|p| {
                let (x, y) = SegmentPair::reconstruct(&p.exponent(), p.size());
                [x, y]
            })
            .collect();
        prop_assert_eq!(rebuilt, s);
    }

    #[test]
    fn step3_discrepancies_match_closed_forms((a, r1, r2) in step3_point()) {
        let d = datum(GroupType::Sp, a, &[r1, r2]);
        for way in [WayId::Step3Way1, WayId::Step3Way2, WayId::Step3Way3] {
            prop_assert_eq!(discrepancy(way, &d).unwrap(), closed_form(way, &d).unwrap(), "{}", way);
        }
    }

    #[test]
    fn step3_common_pole_rule((a, r1, r2) in step3_point()) {
        let report = classify(&datum(GroupType::Sp, a, &[r1, r2])).unwrap();
        prop_assert_eq!(report.terminal_case, TerminalCase::Step3);
        prop_assert_eq!(&report.common_poles.0, &step3_expected(a, r1, r2));
        prop_assert!(report.conventions.s_zero_always_common);
        prop_assert_eq!(report.verdict, Verdict::ExceptionalPointsResolved);
    }

    #[test]
    fn gl_common_pole_rule(a in 1u32..=20, b in 1u32..=20) {
        let report = classify_gl(a, b).unwrap();
        let lands_on_two_one = (a == 2 && b <= 2) || (a == 1 && b == 2);
        let expected = if lands_on_two_one { vec![ratio(1, 4)] } else { vec![] };
        prop_assert_eq!(&report.common_poles.0, &expected);
        prop_assert!(report.strip_log.iter().all(StripEntry::verified));
        prop_assert_eq!(report.input, ReportInput::Gl { a, b });
    }

    #[test]
    fn corrected_pair_identity_holds(a in 1u32..=30, r2 in -1i32..=30, gap in 1i32..=15) {
        let r1 = r2 + 2 * gap;
        prop_assume!(is_strippable(a, r1, r2));
        prop_assert!(verify_identity_a(a, r1, r2, IdentityVariant::Corrected).unwrap().holds);
    }

    #[test]
    fn every_strippable_pair_strips(a in 1i64..=12, s in support()) {
        let d = datum(GroupType::Sp, a, &s);
        for (i, p) in segment_pairs(&d.support).iter().enumerate() {
            if is_strippable(d.a, p.first, p.second) {
                let check = verify_pair_strip(&d, i).unwrap();
                prop_assert!(check.holds, "pair {} witness {}", i, check.witness);
            } else {
                prop_assert!(verify_pair_strip(&d, i).is_err());
            }
        }
    }

    #[test]
    fn classification_strips_to_a_terminal(a in 1i64..=12, s in support()) {
        let report = classify(&datum(GroupType::Sp, a, &s)).unwrap();
        prop_assert!(report.strip_log.iter().all(StripEntry::verified));
        let left = s.len() / 2 - report.strip_log.len();
        prop_assert!(left <= 1);
        let expected_case = match (left, a) {
            (0, 1) => TerminalCase::CorankOneBase,
            (0, _) => TerminalCase::Step2Supercuspidal,
            (_, 1) => TerminalCase::Step2SegmentVsSigmaR,
            _ => TerminalCase::Step3,
        };
        prop_assert_eq!(report.terminal_case, expected_case);
        prop_assert_eq!(report.common_poles.is_empty(), report.verdict == Verdict::CoprimeInduction
            || report.verdict == Verdict::CorankOneBase);
    }

    #[test]
    fn pole_sets_agree_between_b_and_c(a in 1i64..=12, s in support()) {
        let b = classify(&datum(GroupType::SoOdd, a, &s)).unwrap();
        let c = classify(&datum(GroupType::Sp, a, &s)).unwrap();
        prop_assert_eq!(&b.pole_sets, &c.pole_sets);
        prop_assert_eq!(&b.common_poles, &c.common_poles);
        for (way, p) in &b.discrepancies {
            prop_assert_eq!(&PoleSet(p.swap_rho().possible_poles()), &c.pole_sets[way]);
        }
    }

    #[test]
    fn classification_is_deterministic_and_round_trips(a in 1i64..=12, s in support(), sigma in any::<bool>()) {
        let d = InductionDatum::new(GroupType::Sp, a, &s, sigma).unwrap();
        let first = classify(&d).unwrap();
        prop_assert_eq!(&classify(&d).unwrap(), &first);
        let text = serde_json::to_string(&first).unwrap();
        let back: normcalc::analysis::HolomorphyReport = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &first);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn step2_segment_rule(r1 in 2i32..=41) {
        let r2 = if r1 % 2 == 0 { 0 } else { -1 };
        let d = datum(GroupType::Sp, 1, &[r1, r2]);
        for way in [WayId::Step2BWay3, WayId::Step2BWay4] {
            prop_assert_eq!(discrepancy(way, &d).unwrap(), closed_form(way, &d).unwrap());
        }
        let expected = match r1 {
            2 => vec![ratio(1, 2)],
            3 => vec![int(0), int(1)],
            _ => vec![],
        };
        prop_assert_eq!(classify(&d).unwrap().common_poles.0, expected);
    }
}

#[test]
fn step2_supercuspidal_rule() {
    for a in 2..=20 {
        let d = datum(GroupType::Sp, a, &[]);
        for way in [WayId::Step2AWay1, WayId::Step2AWay2] {
            assert_eq!(discrepancy(way, &d).unwrap(), closed_form(way, &d).unwrap(), "{way} a={a}");
        }
        let expected = match a {
            2 => vec![int(0), ratio(1, 2)],
            3 => vec![int(0)],
            _ => vec![],
        };
        assert_eq!(classify(&d).unwrap().common_poles.0, expected, "a={a}");
    }
}

#[test]
fn corank_one_base_has_no_discrepancies() {
    let report = classify(&InductionDatum::new(GroupType::SoOdd, 1, &[], false).unwrap()).unwrap();
    assert_eq!(report.terminal_case, TerminalCase::CorankOneBase);
    assert_eq!(report.verdict, Verdict::CorankOneBase);
    assert!(report.discrepancies.is_empty());
}

#[test]
fn printed_identity_variant_is_not_an_identity() {
    assert!(!verify_identity_a(5, 3, 1, IdentityVariant::Printed).unwrap().holds);
    assert!(verify_identity_a(5, 3, 1, IdentityVariant::Corrected).unwrap().holds);
}
