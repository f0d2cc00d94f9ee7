//! Canonical forms modulo layer-commutation equations.
//!
//! For a commuting operation `op` (arities `[1, 0]`), a *chain* is a maximal
//! nest `op(op(...op(body, a_k)..., a_2), a_1)` along body positions. Reading
//! the chain outside-in, layer `p` binds level `ctx + p` and its argument
//! lives in context `ctx + p`. Adjacent layers may be exchanged exactly when
//! the inner argument ignores the outer layer's variable, so the reachable
//! orderings are the linear extensions of the "argument uses binder"
//! dependency order. The canonical form picks, outermost first, the layer
//! whose relocated canonical argument is least in `term_order`; ties are
//! resolved by comparing the completed terms.

use std::collections::BTreeSet;

use crate::signature::Equation;
use crate::term::{Arg, Name, Term};

/// Reorderings of a chain larger than this are not enumerated for matching.
pub const MAX_CLUSTER: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Equations {
    commuting: Vec<Name>,
}

#[derive(Debug, Clone)]
struct Chain {
    op: Name,
    ctx: usize,
    /// Arguments, outermost first; `args[p]` lives in `ctx + p`.
    args: Vec<Term>,
    /// Innermost body, in `ctx + args.len()`.
    body: Term,
    /// `deps[p]`: outer layers whose variable `args[p]` mentions.
    deps: Vec<Vec<usize>>,
}

impl Equations {
    pub fn new(eqs: Vec<Equation>) -> Self {
        let mut commuting = Vec::new();
        for Equation::LayerCommutation(op) in eqs {
            if !commuting.contains(&op) {
                commuting.push(op);
            }
        }
        Equations { commuting }
    }

    pub fn is_empty(&self) -> bool {
        self.commuting.is_empty()
    }

    pub fn list(&self) -> Vec<Equation> {
        self.commuting.iter().cloned().map(Equation::LayerCommutation).collect()
    }

    pub fn commutes(&self, op: &str) -> bool {
        self.commuting.iter().any(|o| &**o == op)
    }

    fn chain(&self, t: &Term, ctx: usize) -> Option<Chain> {
        let op = match t {
            Term::Op(o, _) if self.commutes(o) => o.clone(),
            _ => return None,
        };
        let mut args = Vec::new();
        let mut cur = t;
        loop {
            match cur {
                Term::Op(o, xs)
                    if *o == op && xs.len() == 2 && xs[0].bound == 1 && xs[1].bound == 0 =>
                {
                    args.push(xs[1].body.clone());
                    cur = &xs[0].body;
                }
                _ => break,
            }
        }
        if args.is_empty() {
            return None;
        }
        let deps = args
            .iter()
            .enumerate()
            .map(|(p, a)| (0..p).filter(|&q| a.uses_level(ctx + q)).collect())
            .collect();
        Some(Chain {
            op,
            ctx,
            args,
            body: cur.clone(),
            deps,
        })
    }

    pub fn canonicalize(&self, t: &Term, ctx: usize) -> Term {
        if self.is_empty() {
            return t.clone();
        }
        self.canon(t, ctx)
    }

    fn canon(&self, t: &Term, ctx: usize) -> Term {
        match t {
            Term::Var(_) => t.clone(),
            Term::Op(o, args) => {
                if let Some(ch) = self.chain(t, ctx) {
                    return self.canon_chain(&ch);
                }
                Term::Op(
                    o.clone(),
                    args.iter()
                        .map(|a| Arg::new(a.bound, self.canon(&a.body, ctx + a.bound)))
                        .collect(),
                )
            }
        }
    }

    fn canon_chain(&self, ch: &Chain) -> Term {
        let k = ch.args.len();
        let mut pos = vec![usize::MAX; k];
        let mut placed = Vec::with_capacity(k);
        self.best_completion(ch, &mut placed, &mut pos, Vec::new())
    }

    /// Greedy choice of the next (outermost remaining) layer; explores every
    /// tied candidate.
    fn best_completion(&self, ch: &Chain, placed: &mut Vec<usize>, pos: &mut Vec<usize>, canon_args: Vec<Term>) -> Term {
        let k = ch.args.len();
        let p = placed.len();
        if p == k {
            let body = relocate_body(ch, pos);
            let body = self.canon(&body, ch.ctx + k);
            return build(&ch.op, body, canon_args);
        }
        let mut best: Option<Term> = None;
        let mut cands: Vec<(usize, Term)> = Vec::new();
        for q in 0..k {
            if pos[q] != usize::MAX || !ch.deps[q].iter().all(|&d| pos[d] != usize::MAX) {
                continue;
            }
            let a = self.canon(&relocate_arg(ch, q, p, pos), ch.ctx + p);
            match cands.first() {
                Some((_, m)) if a > *m => {}
                Some((_, m)) if a == *m => cands.push((q, a)),
                _ => cands = vec![(q, a)],
            }
        }
        for (q, a) in cands {
            pos[q] = p;
            placed.push(q);
            let mut args = canon_args.clone();
            args.push(a);
            let t = self.best_completion(ch, placed, pos, args);
            placed.pop();
            pos[q] = usize::MAX;
            if best.as_ref().is_none_or(|b| t < *b) {
                best = Some(t);
            }
        }
        best.expect("dependency order always has an available layer")
    }

    pub fn eq_modulo(&self, a: &Term, b: &Term, ctx: usize) -> bool {
        a == b || self.canonicalize(a, ctx) == self.canonicalize(b, ctx)
    }

    /// All reorderings of the chain at the root of `t` (including `t`
    /// itself), without canonicalizing subterms. Returns `None` when the
    /// root chain exceeds [`MAX_CLUSTER`] layers.
    pub fn root_variants(&self, t: &Term, ctx: usize) -> Option<Vec<Term>> {
        let Some(ch) = self.chain(t, ctx) else {
            return Some(vec![t.clone()]);
        };
        let k = ch.args.len();
        if k > MAX_CLUSTER {
            return None;
        }
        let mut out = BTreeSet::new();
        let mut pos = vec![usize::MAX; k];
        let mut order = Vec::with_capacity(k);
        linear_extensions(&ch, &mut order, &mut pos, &mut |order, pos| {
            let args = order
                .iter()
                .enumerate()
                .map(|(p, &q)| relocate_arg(&ch, q, p, pos))
                .collect();
            out.insert(build(&ch.op, relocate_body(&ch, pos), args));
        });
        Some(out.into_iter().collect())
    }
}

fn linear_extensions(ch: &Chain, order: &mut Vec<usize>, pos: &mut Vec<usize>, emit: &mut impl FnMut(&[usize], &[usize])) {
    let k = ch.args.len();
    if order.len() == k {
        emit(order, pos);
        return;
    }
    for q in 0..k {
        if pos[q] == usize::MAX && ch.deps[q].iter().all(|&d| pos[d] != usize::MAX) {
            pos[q] = order.len();
            order.push(q);
            linear_extensions(ch, order, pos, emit);
            order.pop();
            pos[q] = usize::MAX;
        }
    }
}

/// Moves layer `q`'s argument to position `p`, given the new positions of
/// (at least) the layers it depends on.
fn relocate_arg(ch: &Chain, q: usize, p: usize, pos: &[usize]) -> Term {
    relocate(&ch.args[q], ch.ctx, ch.ctx + q, ch.ctx + p, pos)
}

fn relocate_body(ch: &Chain, pos: &[usize]) -> Term {
    let k = ch.args.len();
    relocate(&ch.body, ch.ctx, ch.ctx + k, ch.ctx + k, pos)
}

fn relocate(t: &Term, base: usize, src: usize, tgt: usize, pos: &[usize]) -> Term {
    crate::term::rename_partial(t, src, tgt, |l| {
        if l < base {
            Some(l)
        } else {
            pos.get(l - base).copied().filter(|&p| p != usize::MAX).map(|p| base + p)
        }
    })
    .expect("chain relocation stays in scope")
}

fn build(op: &Name, body: Term, args: Vec<Term>) -> Term {
    let mut t = body;
    for a in args.into_iter().rev() {
        t = Term::Op(op.clone(), vec![Arg::new(1, t), Arg::new(0, a)]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{name, parse_term, swap_top2, weaken};

    fn eqs() -> Equations {
        Equations::new(vec![Equation::LayerCommutation(name("esubst"))])
    }

    fn es(body: Term, arg: Term) -> Term {
        Term::op("esubst", vec![Arg::new(1, body), Arg::new(0, arg)])
    }

    #[test]
    fn both_orientations_have_one_canonical_form() {
        // ctx 1: t in ctx 3, u and v in ctx 1
        let t = parse_term("(app (var 1) (app (var 2) (var 0)))").unwrap();
        let u = parse_term("(app (var 0) (var 0))").unwrap();
        let v = Term::Var(0);
        let lhs = es(es(t.clone(), weaken(&u, 1)), v.clone());
        let rhs = es(es(swap_top2(&t, 3).unwrap(), weaken(&v, 1)), u);
        let e = eqs();
        assert_ne!(lhs, rhs);
        assert_eq!(e.canonicalize(&lhs, 1), e.canonicalize(&rhs, 1));
        assert!(e.eq_modulo(&lhs, &rhs, 1));
    }

    #[test]
    fn dependent_layers_do_not_commute() {
        // inner argument uses the outer variable (level 1)
        let t = parse_term("(app (var 1) (var 2))").unwrap();
        let a = es(es(t.clone(), Term::Var(1)), Term::Var(0));
        let e = eqs();
        assert_eq!(e.canonicalize(&a, 1), a);
        assert_eq!(e.root_variants(&a, 1).unwrap(), vec![a]);
    }

    #[test]
    fn canonical_form_is_idempotent_and_listed_among_variants() {
        let t = parse_term("(app (var 2) (app (var 1) (var 3)))").unwrap();
        let a = es(es(es(t, Term::Var(0)), Term::Var(0)), Term::Var(1));
        let e = eqs();
        let c = e.canonicalize(&a, 2);
        assert_eq!(e.canonicalize(&c, 2), c);
        let vs = e.root_variants(&a, 2).unwrap();
        assert_eq!(vs.len(), 6);
        assert!(vs.contains(&c));
        for v in &vs {
            assert_eq!(e.canonicalize(v, 2), c);
        }
    }

    #[test]
    fn no_equations_is_identity() {
        let t = es(Term::Var(1), Term::Var(0));
        assert_eq!(Equations::default().canonicalize(&t, 1), t);
    }
}
