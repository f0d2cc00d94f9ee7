//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use redsig::term::{Arg, Term};

/// Lambda terms with de Bruijn *indices* (0 = innermost binder), kept
/// separate from the library's level-based representation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Lam {
    V(usize),
    App(Box<Lam>, Box<Lam>),
    Abs(Box<Lam>),
}

pub fn from_term(t: &Term, depth: usize) -> Lam {
    match t {
        Term::Var(l) => Lam::V(depth - 1 - l),
        Term::Op(o, args) => match (o.as_ref(), args.as_slice()) {
            ("app", [f, x]) => Lam::App(Box::new(from_term(&f.body, depth)), Box::new(from_term(&x.body, depth))),
            ("abs", [b]) => Lam::Abs(Box::new(from_term(&b.body, depth + 1))),
            _ => panic!("not a lambda term: {t}"),
        },
    }
}

pub fn to_term(l: &Lam, depth: usize) -> Term {
    match l {
        Lam::V(i) => Term::Var(depth - 1 - i),
        Lam::App(f, x) => Term::app("app", vec![to_term(f, depth), to_term(x, depth)]),
        Lam::Abs(b) => Term::op("abs", vec![Arg::new(1, to_term(b, depth + 1))]),
    }
}

fn shift(t: &Lam, cutoff: usize, up: bool) -> Lam {
    match t {
        Lam::V(k) if *k >= cutoff => Lam::V(if up { k + 1 } else { k - 1 }),
        Lam::V(k) => Lam::V(*k),
        Lam::App(f, x) => Lam::App(Box::new(shift(f, cutoff, up)), Box::new(shift(x, cutoff, up))),
        Lam::Abs(b) => Lam::Abs(Box::new(shift(b, cutoff + 1, up))),
    }
}

fn replace(t: &Lam, j: usize, s: &Lam) -> Lam {
    match t {
        Lam::V(k) if *k == j => s.clone(),
        Lam::V(k) => Lam::V(*k),
        Lam::App(f, x) => Lam::App(Box::new(replace(f, j, s)), Box::new(replace(x, j, s))),
        Lam::Abs(b) => Lam::Abs(Box::new(replace(b, j + 1, &shift(s, 0, true)))),
    }
}

/// `(λ. body) arg` contracted.
pub fn contract(body: &Lam, arg: &Lam) -> Lam {
    shift(&replace(body, 0, &shift(arg, 0, true)), 0, false)
}

/// One-step reducts at every redex position.
pub fn cong(t: &Lam) -> Vec<Lam> {
    let mut out = Vec::new();
    match t {
        Lam::V(_) => {}
        Lam::Abs(b) => out.extend(cong(b).into_iter().map(|b| Lam::Abs(Box::new(b)))),
        Lam::App(f, x) => {
            if let Lam::Abs(b) = f.as_ref() {
                out.push(contract(b, x));
            }
            out.extend(cong(f).into_iter().map(|f| Lam::App(Box::new(f), x.clone())));
            out.extend(cong(x).into_iter().map(|x| Lam::App(f.clone(), Box::new(x))));
        }
    }
    out
}

/// Reducts along the left spine of applications only.
pub fn weak_head(t: &Lam) -> Vec<Lam> {
    let mut out = Vec::new();
    if let Lam::App(f, x) = t {
        if let Lam::Abs(b) = f.as_ref() {
            out.push(contract(b, x));
        }
        out.extend(weak_head(f).into_iter().map(|f| Lam::App(Box::new(f), x.clone())));
    }
    out
}

/// Parallel steps: a root contraction of the original subterms, or
/// simultaneous steps in both sides of an application, or a step under a
/// binder. Variables do not step.
pub fn parallel(t: &Lam) -> Vec<Lam> {
    let mut out = Vec::new();
    match t {
        Lam::V(_) => {}
        Lam::Abs(b) => out.extend(parallel(b).into_iter().map(|b| Lam::Abs(Box::new(b)))),
        Lam::App(f, x) => {
            if let Lam::Abs(b) = f.as_ref() {
                out.push(contract(b, x));
            }
            let xs = parallel(x);
            for f2 in parallel(f) {
                for x2 in &xs {
                    out.push(Lam::App(Box::new(f2.clone()), Box::new(x2.clone())));
                }
            }
        }
    }
    out
}

/// Number of β-redexes anywhere in the term.
pub fn redex_count(t: &Lam) -> usize {
    match t {
        Lam::V(_) => 0,
        Lam::Abs(b) => redex_count(b),
        Lam::App(f, x) => usize::from(matches!(f.as_ref(), Lam::Abs(_))) + redex_count(f) + redex_count(x),
    }
}
