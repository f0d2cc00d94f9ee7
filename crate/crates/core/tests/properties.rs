use std::cmp::Ordering;

use proptest::prelude::*;

use redsig::corpus;
use redsig::term::{parse_term, strengthen, subst, swap_top2, term_order, weaken, Arg, SubstEnv, Term};

/// Shapes are scope-free; `realize` turns them into terms of a context by
/// reducing variable choices modulo the number of variables in scope.
#[derive(Debug, Clone)]
enum Shape {
    Leaf(usize),
    App(Box<Shape>, Box<Shape>),
    Abs(Box<Shape>),
    ESubst(Box<Shape>, Box<Shape>),
}

fn shape(explicit: bool) -> impl Strategy<Value = Shape> {
    let leaf = (0usize..8).prop_map(Shape::Leaf);
    leaf.prop_recursive(5, 32, 2, move |inner| {
        let app = (inner.clone(), inner.clone()).prop_map(|(a, b)| Shape::App(Box::new(a), Box::new(b)));
        let abs = inner.clone().prop_map(|b| Shape::Abs(Box::new(b)));
        let es = (inner.clone(), inner).prop_map(|(a, b)| Shape::ESubst(Box::new(a), Box::new(b)));
        if explicit {
            prop_oneof![app, abs, es].boxed()
        } else {
            prop_oneof![app, abs].boxed()
        }
    })
}

fn realize(s: &Shape, ctx: usize) -> Term {
    match s {
        Shape::Leaf(i) if ctx > 0 => Term::Var(i % ctx),
        Shape::Leaf(_) => Term::op("abs", vec![Arg::new(1, Term::Var(0))]),
        Shape::App(a, b) => Term::app("app", vec![realize(a, ctx), realize(b, ctx)]),
        Shape::Abs(b) => Term::op("abs", vec![Arg::new(1, realize(b, ctx + 1))]),
        Shape::ESubst(b, a) => Term::op("esubst", vec![Arg::new(1, realize(b, ctx + 1)), Arg::new(0, realize(a, ctx))]),
    }
}

fn env(shapes: &[Shape], source: usize, target: usize) -> SubstEnv {
    let images = (0..source).map(|i| realize(&shapes[i % shapes.len()], target)).collect();
    SubstEnv::new(target, images).unwrap()
}

proptest! {
    #[test]
    fn identity_substitution_is_neutral(s in shape(true), n in 0usize..4) {
        let t = realize(&s, n);
        prop_assert_eq!(subst(&t, &SubstEnv::identity(n)).unwrap(), t);
    }

    #[test]
    fn substitution_composes(
        s in shape(false),
        e1 in prop::collection::vec(shape(false), 1..4),
        e2 in prop::collection::vec(shape(false), 1..4),
        (a, b, c) in (0usize..3, 0usize..3, 0usize..3),
    ) {
        let t = realize(&s, a);
        let f = env(&e1, a, b);
        let g = env(&e2, b, c);
        let stepwise = subst(&subst(&t, &f).unwrap(), &g).unwrap();
        prop_assert_eq!(stepwise, subst(&t, &f.compose(&g).unwrap()).unwrap());
    }

    #[test]
    fn weakening_is_undone_by_strengthening(s in shape(true), n in 0usize..4) {
        let t = realize(&s, n);
        prop_assert_eq!(strengthen(&weaken(&t, n), n), Some(t));
    }

    #[test]
    fn swapping_twice_is_identity(s in shape(true), n in 2usize..5) {
        let t = realize(&s, n);
        prop_assert_eq!(swap_top2(&swap_top2(&t, n).unwrap(), n).unwrap(), t);
    }

    #[test]
    fn term_order_is_a_total_order(x in shape(true), y in shape(true), n in 0usize..3) {
        let (a, b) = (realize(&x, n), realize(&y, n));
        let o = term_order(&a, &b);
        prop_assert_eq!(o, term_order(&b, &a).reverse());
        prop_assert_eq!(o == Ordering::Equal, a == b);
    }

    #[test]
    fn printed_terms_parse_back(s in shape(true), n in 0usize..3) {
        let t = realize(&s, n);
        prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn canonical_forms_are_stable(s in shape(true), n in 0usize..3) {
        let sig = corpus::load("lcex").unwrap();
        let t = realize(&s, n);
        let c = sig.canonicalize(&t, n);
        prop_assert_eq!(sig.canonicalize(&c, n), c.clone());
        prop_assert!(sig.eq_modulo(&t, &c, n));
    }

    #[test]
    fn canonicalization_commutes_with_substitution(s in shape(true), e in prop::collection::vec(shape(true), 1..3), n in 0usize..3, m in 0usize..3) {
        let sig = corpus::load("lcex").unwrap();
        let t = realize(&s, n);
        let f = env(&e, n, m);
        let a = sig.canonicalize(&sig.subst(&t, &f).unwrap(), m);
        let b = sig.canonicalize(&sig.subst(&sig.canonicalize(&t, n), &f).unwrap(), m);
        prop_assert_eq!(a, b);
    }
}
