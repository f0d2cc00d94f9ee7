mod common;

use common::{cong, from_term, parallel, redex_count, to_term, weak_head, Lam};
use redsig::corpus;
use redsig::enumerate::{enumerate_steps, enumerate_terms};
use redsig::signature::ReductionSignature;
use redsig::term::{parse_term, Term};
use redsig::trace::target;

fn targets(sig: &ReductionSignature, ctx: usize, t: &Term) -> Vec<Term> {
    let steps = enumerate_steps(sig, ctx, t, 3).unwrap();
    assert!(!steps.truncated);
    let mut v: Vec<Term> = steps.traces.iter().map(|tr| target(sig, tr).unwrap()).collect();
    v.sort();
    v
}

fn oracle(f: fn(&Lam) -> Vec<Lam>, ctx: usize, t: &Term) -> Vec<Term> {
    let mut v: Vec<Term> = f(&from_term(t, ctx)).iter().map(|l| to_term(l, ctx)).collect();
    v.sort();
    v
}

#[test]
fn index_conversion_round_trips() {
    let lc = corpus::load("lc").unwrap();
    for n in 0..=2 {
        for t in enumerate_terms(&lc, n, 3) {
            assert_eq!(to_term(&from_term(&t, n), n), t);
        }
    }
}

#[test]
fn double_redex() {
    let t = parse_term("(app (app (abs (bind 1 (var 1))) (var 0)) (app (abs (bind 1 (var 1))) (var 0)))").unwrap();
    assert_eq!(redex_count(&from_term(&t, 1)), 2);
    for (name, f, count) in [
        ("congbeta", cong as fn(&Lam) -> Vec<Lam>, 2),
        ("whbeta", weak_head, 1),
        ("parbeta", parallel, 1),
    ] {
        let sig = corpus::load(name).unwrap();
        let got = targets(&sig, 1, &t);
        assert_eq!(got.len(), count, "{name}");
        assert_eq!(got, oracle(f, 1, &t), "{name}");
    }
}

#[test]
fn enumeration_matches_the_oracles_up_to_depth_3() {
    let lc = corpus::load("lc").unwrap();
    for (name, f) in [
        ("congbeta", cong as fn(&Lam) -> Vec<Lam>),
        ("whbeta", weak_head),
        ("parbeta", parallel),
    ] {
        let sig = corpus::load(name).unwrap();
        for n in 0..=2 {
            for t in enumerate_terms(&lc, n, 3) {
                assert_eq!(targets(&sig, n, &t), oracle(f, n, &t), "{name} on {t}");
            }
        }
    }
}

#[test]
fn normal_forms_have_no_steps() {
    let sig = corpus::load("congbeta").unwrap();
    let t = parse_term("(abs (bind 1 (app (var 0) (var 1))))").unwrap();
    assert!(targets(&sig, 1, &t).is_empty());
}
