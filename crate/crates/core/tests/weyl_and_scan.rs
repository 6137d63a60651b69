//! Matrix-level Weyl checks and end-to-end scan behaviour.

use normcalc::rep::GroupType;
use normcalc::scan::{run_scan, ScanSpec};
use normcalc::weyl::{
    build_c, build_form, build_wk, check_decomposition, corrected_so_even_wk, decompose, power,
    DecompositionOutcome, Way,
};
use normcalc::IntMatrix;
use proptest::prelude::*;

fn split_group() -> impl Strategy<Value = GroupType> {
    prop::sample::select(vec![GroupType::SoOdd, GroupType::Sp, GroupType::SoEven])
}

/// `(group, n, k, d, way)` with `d ≤ k` for way 12 and `d ≤ n − k` for way 34.
fn decomposition_case() -> impl Strategy<Value = (GroupType, usize, usize, usize, Way)> {
    (split_group(), 1usize..=6)
        .prop_flat_map(|(g, n)| (Just(g), Just(n), 1..=n, prop::sample::select(vec![Way::Way12, Way::Way34])))
        .prop_flat_map(|(g, n, k, way)| {
            let max_d = if way == Way::Way12 { k } else { n - k };
            (Just(g), Just(n), Just(k), 0..=max_d, Just(way))
        })
}

proptest! {
    #[test]
    fn w_k_preserves_the_form(g in split_group(), n in 1usize..=8, k in 0usize..=8) {
        prop_assume!(k <= n);
        let form = build_form(g, n).unwrap();
        let w = build_wk(g, n, k).unwrap();
        prop_assert!(form.preserves(&w.matrix));
        // J is ±-antidiagonal, so M^T J M = J is the isometry condition spelled out
        let lhs = &(&w.matrix.transpose() * &form.j) * &w.matrix;
        prop_assert_eq!(lhs, form.j.clone());
        prop_assert!(w.epsilon == 1 || w.epsilon == -1);
    }

    #[test]
    fn decompositions_land_on_w_k((g, n, k, d, way) in decomposition_case()) {
        let check = check_decomposition(way, g, n, k, d).unwrap();
        prop_assert!(check.factors_preserve_form.iter().all(|&b| b));
        prop_assert!(check.product_preserves_form);
        let form = build_form(g, n).unwrap();
        let wk = build_wk(g, n, k).unwrap().matrix;
        let [f1, f2, f3] = decompose(way, g, n, k, d).unwrap();
        let product = &(&f1 * &f2) * &f3;
        match &check.outcome {
            DecompositionOutcome::Exact => prop_assert_eq!(product, wk),
            DecompositionOutcome::TorusCorrected { diagonal } => {
                prop_assert!(diagonal.iter().all(|&x| x == 1 || x == -1));
                let t = IntMatrix::diagonal(diagonal);
                prop_assert!(form.preserves(&t));
                prop_assert_eq!(&t * &wk, product);
            }
            DecompositionOutcome::Fail { .. } => prop_assert!(false, "decomposition failed: {:?}", check),
        }
    }
}

#[test]
fn so_even_c_corrects_determinants() {
    for n in 1..=6 {
        let form = build_form(GroupType::SoEven, n).unwrap();
        let c = build_c(n).unwrap();
        assert!(form.preserves(&c));
        assert_eq!(c.determinant(), -1);
        assert_eq!(power(&c, 2), IntMatrix::identity(2 * n));
        for k in 1..=n {
            let wk = build_wk(GroupType::SoEven, n, k).unwrap().matrix;
            let expected_det = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(wk.determinant(), expected_det, "n={n} k={k}");
            let m = corrected_so_even_wk(n, k).unwrap();
            assert!(form.preserves(&m));
            assert_eq!(m.determinant(), 1);
        }
    }
}

#[test]
fn non_split_groups_are_rejected() {
    assert!(build_form(GroupType::UEven, 2).is_err());
    assert!(build_wk(GroupType::Sp, 2, 3).is_err());
}

fn step3_spec() -> ScanSpec {
    ScanSpec::from_json(
        r#"{"group":"C","a_range":[2,20],"r1_range":[3,41],"r2_range":[-1,19],"straddling_only":true}"#,
    )
    .unwrap()
}

#[test]
fn step3_scan_flags_exactly_the_rule() {
    let mut out = Vec::new();
    let summary = run_scan(&step3_spec(), &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().count() as u64, summary.reports + 1);
    let mut expected = Vec::new();
    for a in 2..=20i64 {
        for r1 in a + 1..=41 {
            for r2 in -1..a.min(20) {
                if (r1 - r2) % 2 == 0 && a == r1 - 1 && (a == 2 || a == r2 + 1) {
                    expected.push((a, r1, r2));
                }
            }
        }
    }
    let flagged: Vec<(i64, i64, i64)> = summary.exceptional_beyond_zero.iter().map(|e| (e.a, e.r1, e.r2)).collect();
    assert_eq!(flagged, expected);
    // every Step 3 point keeps s = 0 as a common pole
    assert!(text.lines().take(summary.reports as usize).all(|l| l.contains(r#""verdict":"exceptional_points_resolved""#)));
}

#[test]
fn scan_output_is_byte_identical_across_runs() {
    let spec = ScanSpec::from_json(r#"{"group":"B","a_range":[1,6],"r1_range":[-1,9],"r2_range":[-1,9]}"#).unwrap();
    let mut first = Vec::new();
    let mut second = Vec::new();
    run_scan(&spec, &mut first).unwrap();
    run_scan(&spec, &mut second).unwrap();
    assert!(!first.is_empty());
    assert_eq!(first, second);
}

#[test]
fn scan_reports_appear_in_lexicographic_order() {
    let spec = ScanSpec::from_json(r#"{"group":"C","a_range":[1,4],"r1_range":[-1,7],"r2_range":[-1,7]}"#).unwrap();
    let mut out = Vec::new();
    let summary = run_scan(&spec, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let keys: Vec<(i64, Vec<i64>)> = text
        .lines()
        .take(summary.reports as usize)
        .map(|l| {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            let input = &v["input"];
            let support = input["support"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
            (input["a"].as_i64().unwrap(), support)
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(summary.points, 4 * 9 * 9);
}
