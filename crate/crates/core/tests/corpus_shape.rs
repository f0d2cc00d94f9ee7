//! The corpus rules compared against hand-built transcriptions.

use redsig::corpus;
use redsig::dsl::{parse_signature, print_signature};
use redsig::signature::{MetaVarDecl, ReductionRule, Template, TermPair};
use redsig::term::name;

fn m(n: &str, map: &[usize]) -> Template {
    Template::meta(n, map)
}

fn bind(t: Template) -> (usize, Template) {
    (1, t)
}

fn rule(n: &str, metavars: Vec<MetaVarDecl>, hyps: Vec<TermPair>, concl: TermPair) -> ReductionRule {
    ReductionRule {
        name: name(n),
        metavars,
        hypotheses: hyps,
        conclusion: concl,
    }
}

fn beta() -> ReductionRule {
    rule(
        "beta",
        vec![MetaVarDecl::new("T", 1), MetaVarDecl::new("U", 0)],
        vec![],
        TermPair::new(
            0,
            Template::op("app", vec![(0, Template::op("abs", vec![bind(m("T", &[0]))])), (0, m("U", &[]))]),
            Template::Subst(Box::new(m("T", &[0])), vec![m("U", &[])]),
        ),
    )
}

fn abs_cong(u: &str) -> ReductionRule {
    rule(
        "abs-cong",
        vec![MetaVarDecl::new("T", 1), MetaVarDecl::new(u, 1)],
        vec![TermPair::new(1, m("T", &[0]), m(u, &[0]))],
        TermPair::new(
            0,
            Template::op("abs", vec![bind(m("T", &[0]))]),
            Template::op("abs", vec![bind(m(u, &[0]))]),
        ),
    )
}

#[test]
fn congruent_beta_is_transcribed() {
    let sig = corpus::load("congbeta").unwrap();
    let names: Vec<&str> = sig.rules.iter().map(|r| r.name.as_ref()).collect();
    assert_eq!(names, ["beta", "abs-cong", "appl-cong", "appr-cong"]);
    assert_eq!(sig.rule("beta").unwrap(), &beta());
    assert_eq!(sig.rule("abs-cong").unwrap(), &abs_cong("U"));
}

#[test]
fn gallery_rules_are_transcribed() {
    let sig = corpus::load("gallery").unwrap();
    let eta_exp = rule(
        "eta-exp",
        vec![MetaVarDecl::new("T", 0)],
        vec![],
        TermPair::new(
            0,
            m("T", &[]),
            Template::op("abs", vec![bind(Template::op("app", vec![(0, m("T", &[])), (0, Template::Var(0))]))]),
        ),
    );
    let eta_contr = rule(
        "eta-contr",
        vec![MetaVarDecl::new("T", 0)],
        vec![],
        TermPair::new(0, eta_exp.conclusion.rhs.clone(), m("T", &[])),
    );
    let fix_body = Template::op("fix", vec![bind(m("T", &[0]))]);
    let fix_exp = rule(
        "fix-exp",
        vec![MetaVarDecl::new("T", 1)],
        vec![],
        TermPair::new(0, fix_body.clone(), Template::Subst(Box::new(m("T", &[0])), vec![fix_body])),
    );
    let trans = rule(
        "trans",
        vec![MetaVarDecl::new("T", 0), MetaVarDecl::new("U", 0), MetaVarDecl::new("W", 0)],
        vec![
            TermPair::new(0, m("T", &[]), m("U", &[])),
            TermPair::new(0, m("U", &[]), m("W", &[])),
        ],
        TermPair::new(0, m("T", &[]), m("W", &[])),
    );
    for r in [beta(), abs_cong("U"), eta_exp, eta_contr, fix_exp, trans] {
        assert_eq!(sig.rule(&r.name).unwrap(), &r, "{}", r.name);
    }
    assert_eq!(sig.monad.ops.len(), 3);
}

#[test]
fn explicit_substitution_rules_are_transcribed() {
    let sig = corpus::load("lcex").unwrap();
    assert_eq!(sig.monad.ops.len(), 3);
    assert_eq!(sig.rules.len(), 11);
    assert!(!sig.equations.is_empty());
    assert_eq!(sig.rule("abs-cong").unwrap(), &abs_cong("T'"));

    let es = |body: Template, arg: Template| Template::op("esubst", vec![bind(body), (0, arg)]);
    let comp = rule(
        "esubst-esubst",
        vec![MetaVarDecl::new("T", 2), MetaVarDecl::one_hole("U"), MetaVarDecl::new("V", 0)],
        vec![],
        TermPair::new(
            0,
            es(es(m("T", &[0, 1]), m("U", &[0])), m("V", &[])),
            es(es(m("T", &[1, 0]), m("V", &[])), es(m("U", &[0]), m("V", &[]))),
        ),
    );
    assert_eq!(sig.rule("esubst-esubst").unwrap(), &comp);

    let gc = rule(
        "gc",
        vec![MetaVarDecl::new("T", 0), MetaVarDecl::new("U", 0)],
        vec![],
        TermPair::new(0, es(m("T", &[]), m("U", &[])), m("T", &[])),
    );
    assert_eq!(sig.rule("gc").unwrap(), &gc);
}

#[test]
fn printed_signatures_parse_back() {
    for n in corpus::names() {
        let sig = corpus::load(n).unwrap();
        let again = parse_signature(&print_signature(&sig)).unwrap();
        assert_eq!(again, sig, "{n}");
    }
}
