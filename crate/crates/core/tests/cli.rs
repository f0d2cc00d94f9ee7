use redsig::cli::run;
use redsig::trace::{star_from_json, validate_star, StarTraceJson};
use redsig::{corpus, translate};

const DOUBLE: &str = "(app (app (abs (bind 1 (var 1))) (var 0)) (app (abs (bind 1 (var 1))) (var 0)))";
const UNDER: &str = "(abs (bind 1 (app (abs (bind 1 (var 2))) (var 0))))";

fn redsig(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("redsig").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let p = std::env::temp_dir().join(format!("redsig-{}-{name}", std::process::id()));
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn check_accepts_every_corpus_entry() {
    for n in corpus::names() {
        let (code, out, _) = redsig(&["check", "--sig", &format!("corpus:{n}")]);
        assert_eq!(code, 0, "{n}: {out}");
    }
}

#[test]
fn check_reports_parse_positions() {
    let p = temp_file("bad.sig", "(signature bad\n  (ops (app 0 0)\n");
    let (code, _, err) = redsig(&["check", "--sig", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("2:3"), "{err}");
}

#[test]
fn check_names_rules_with_substitution_patterns() {
    let p = temp_file(
        "subst.sig",
        "(signature s (ops (app 0 0) (abs 1))
           (rule weird (metavars (T 1) (U 0)) (concl 0 (msubst (meta T 0) (meta U)) (meta U))))",
    );
    let (code, out, _) = redsig(&["check", "--sig", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("weird"), "{out}");
}

#[test]
fn reduce_counts_traces() {
    for (sig, count) in [("congbeta", 2), ("whbeta", 1), ("parbeta", 1)] {
        let (code, out, _) = redsig(&["reduce", "--sig", &format!("corpus:{sig}"), "--ctx", "1", "--term", DOUBLE, "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v.as_array().unwrap().len(), count, "{sig}");
    }
    let (code, out, _) = redsig(&["reduce", "--sig", "corpus:congbeta", "--ctx", "1", "--term", "(var 0)"]);
    assert_eq!(code, 0);
    assert!(out.contains("0 trace(s)"));
}

#[test]
fn reduce_signals_truncation() {
    let (code, _, _) = redsig(&["reduce", "--sig", "corpus:congbeta", "--ctx", "1", "--term", DOUBLE, "--max", "1"]);
    assert_eq!(code, 3);
}

#[test]
fn scope_errors_are_input_errors() {
    let (code, _, err) = redsig(&["reduce", "--sig", "corpus:congbeta", "--term", "(var 0)"]);
    assert_eq!(code, 1);
    assert!(err.contains("scope"));
}

#[test]
fn trace_search() {
    let (code, out, _) = redsig(&[
        "trace", "--sig", "corpus:congbeta", "--ctx", "1", "--term", "(app (abs (bind 1 (var 1))) (var 0))", "--goal", "(var 0)",
        "--depth", "1", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let s = star_from_json(&out).unwrap();
    assert_eq!(s.len(), 1);
    assert!(validate_star(&corpus::load("congbeta").unwrap(), &s).is_empty());

    let goal = "(abs (bind 1 (var 0)))";
    let (code, out, _) = redsig(&["trace", "--sig", "corpus:whbeta", "--ctx", "1", "--term", UNDER, "--goal", goal]);
    assert_eq!(code, 0);
    assert!(out.starts_with("not found"), "{out}");
    let (code, out, _) = redsig(&["trace", "--sig", "corpus:congbeta", "--ctx", "1", "--term", UNDER, "--goal", goal]);
    assert_eq!(code, 0);
    assert!(out.contains("1 step"), "{out}");
}

#[test]
fn translate_a_golden_trace() {
    let (code, out, _) = redsig(&["translate", "fix-to-beta-star", "--trace", "golden:fix-exp", "--format", "json"]);
    assert_eq!(code, 0);
    let j: StarTraceJson = serde_json::from_str(&out).unwrap();
    let s = redsig::trace::StarTrace::try_from(&j).unwrap();
    assert!(validate_star(&corpus::load("congbeta").unwrap(), &s).is_empty());
    assert_eq!(s.source.to_string(), format!("(app {} (abs (bind 1 (abs (bind 1 (var 0))))))", translate::turing_y(0)));
}

#[test]
fn translate_a_trace_file() {
    let g = corpus::golden("ex-identity").unwrap();
    let corpus::GoldenCheck::Trace { trace } = g.check else { panic!() };
    let p = temp_file("ex-identity.json", &serde_json::to_string(&trace).unwrap());
    let (code, out, _) = redsig(&["translate", "composed-ex-to-beta-star", "--trace", p.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(star_from_json(&out).unwrap().target.to_string(), "(var 0)");
}

#[test]
fn translate_a_term() {
    let (code, out, _) = redsig(&["translate", "ex-to-onecong", "--ctx", "1", "--term", "(esubst (bind 1 (var 1)) (var 0))"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "(var 0)");
}

#[test]
fn unknown_translations_are_input_errors() {
    let (code, _, _) = redsig(&["translate", "nope", "--term", "(var 0)", "--ctx", "1"]);
    assert_eq!(code, 1);
}

#[test]
fn laws_pass_and_self_test_fails() {
    assert_eq!(redsig(&["laws", "--sig", "corpus:lc", "--ctx", "2", "--depth", "3"]).0, 0);
    assert_eq!(redsig(&["laws", "--sig", "corpus:lc", "--self-test"]).0, 2);
    assert_eq!(redsig(&["laws", "--translation", "fix-to-beta-star", "--max", "30"]).0, 0);
    assert_eq!(redsig(&["laws", "--translation", "fix-to-beta-star", "--max", "30", "--self-test"]).0, 2);
}

#[test]
fn output_is_deterministic() {
    let args = ["laws", "--sig", "corpus:congbeta", "--ctx", "1", "--seed", "5", "--format", "json"];
    let (a, b) = (redsig(&args), redsig(&args));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a.1).unwrap();
    assert!(v.as_array().unwrap().iter().all(|r| r["seed"] == 5));
}

#[test]
fn bounds_must_be_positive() {
    assert_eq!(redsig(&["reduce", "--sig", "corpus:lc", "--term", "(var 0)", "--ctx", "1", "--fuel", "0"]).0, 1);
}
