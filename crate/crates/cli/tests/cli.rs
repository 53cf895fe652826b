use std::process::{Command, Output};

use mzv_cli::expr;
use mzv_core::poly::rat;
use mzv_core::{Letter, NCPoly, Word};
use proptest::prelude::*;

fn mzv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mzv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn expand_prints_canonical_form() {
    let o = mzv(&["expand", "sh(xy,y)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2*xyy + yxy\n");

    let o = mzv(&["--json", "expand", "dn(1, xy)"]);
    assert_eq!(stdout(&o), "\"-xxy + xyy\"\n");
}

#[test]
fn expand_reports_syntax_errors() {
    let o = mzv(&["expand", "sh(x,"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1, column 6"), "{}", stderr(&o));

    let o = mzv(&["expand", "foo(x)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown function"));

    let o = mzv(&["expand", "st(x, y)"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn decompose_weight_three() {
    let o = mzv(&["decompose", "--a", "0", "--b", "1", "--k", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "weight: 3\ntarget: -xxy + xyy\nterms:\n  1 * dn(1, xy)\n");

    let o = mzv(&["--json", "decompose", "--a", "0", "--b", "1", "--k", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        v,
        serde_json::json!({
            "weight": 3,
            "target": "-xxy + xyy",
            "terms": [{"n": 1, "word": "xy", "coeff": "1"}]
        })
    );
}

#[test]
fn decompose_rejects_bad_parameters() {
    let o = mzv(&["decompose", "--a", "3", "--b", "3", "--k", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eval_paths() {
    let o = mzv(&["eval", "--index", "(1,2)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("diverges"), "{}", stderr(&o));

    let o = mzv(&["eval", "--word", "y"]);
    assert_eq!(o.status.code(), Some(2));

    let o = mzv(&["--json", "eval", "--index", "(2)", "--M", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["M", "tail_bound", "value"]);
    assert_eq!(v["M"], 1000);
    let value = v["value"].as_f64().unwrap();
    let bound = v["tail_bound"].as_f64().unwrap();
    assert!((value - std::f64::consts::PI.powi(2) / 6.0).abs() <= bound);

    let o = mzv(&["eval"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_all_small_exits_zero() {
    let o = mzv(&["verify", "--suite", "all", "--cap", "5", "--max-weight", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(!out.contains("FAIL"));
    assert!(out.trim_end().ends_with("0 failed"));
}

#[test]
fn verify_rejects_unknown_suite() {
    let o = mzv(&["verify", "--suite", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    for args in [
        &["--json", "verify", "--suite", "theorem", "--max-weight", "6"][..],
        &["--json", "verify", "--suite", "prop2"][..],
        &["--json", "decompose", "--a", "1", "--b", "2", "--k", "7"][..],
        &["--json", "eval", "--index", "(3,1,1)", "--M", "20000"][..],
    ] {
        let first = mzv(args);
        let second = mzv(args);
        assert_eq!(first.status.code(), Some(0));
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn report_json_shape() {
    let o = mzv(&["--json", "verify", "--suite", "eq4", "--max-weight", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let first = &v.as_array().unwrap()[0];
    assert_eq!(first["identity"], "eq4");
    assert_eq!(first["params"]["w"], 2);
    assert_eq!(first["pass"], true);
    assert!(first["discrepancy"].is_null());
}

fn arb_poly() -> impl Strategy<Value = NCPoly> {
    let word = prop::collection::vec(any::<bool>(), 0..=8).prop_map(|bits| {
        Word::from_letters(bits.into_iter().map(|b| if b { Letter::Y } else { Letter::X }))
    });
    prop::collection::vec((word, -20i64..=20, 1i64..=6), 0..6).prop_map(|terms| {
        NCPoly::from_terms(terms.into_iter().map(|(w, n, d)| (w, rat(n) / rat(d))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 256,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn parse_print_round_trip(p in arb_poly()) {
        let text = p.to_string();
        prop_assert_eq!(expr::evaluate(&text).unwrap(), p);
    }
}
