//! Template evaluation (instantiating term-pairs) and matching modulo the
//! signature's equations.

use crate::error::{Error, Result};
use crate::signature::{Assignment, Constraint, ReductionRule, ReductionSignature, Template, TermPair};
use crate::term::{self, Arg, Name, SubstEnv, Term};

/// Where templates are evaluated: how operation nodes are built and how
/// results are normalized. The syntax of a signature is one instance; a
/// target model interprets operations in its own carrier.
pub trait TermAlgebra {
    fn build_op(&self, op: &Name, ctx: usize, args: Vec<Arg>) -> Result<Term>;
    fn normalize(&self, t: Term, ctx: usize) -> Term;
}

impl TermAlgebra for ReductionSignature {
    fn build_op(&self, op: &Name, ctx: usize, args: Vec<Arg>) -> Result<Term> {
        let spec = self.monad.op(op).ok_or_else(|| Error::UnknownOp(op.clone()))?;
        if spec.binding_arities.len() != args.len()
            || spec.binding_arities.iter().zip(&args).any(|(&b, a)| a.bound != b)
        {
            return Err(Error::Scope(format!("arguments of `{op}` do not match its binding arities")));
        }
        Ok(self.mk_op(op, args, ctx))
    }

    fn normalize(&self, t: Term, ctx: usize) -> Term {
        self.canonicalize(&t, ctx)
    }
}

/// Evaluates `tpl` at ambient depth `depth`; the result lives in context
/// `a.context + depth`.
pub fn eval_template(alg: &dyn TermAlgebra, tpl: &Template, a: &Assignment, depth: usize) -> Result<Term> {
    let n = a.context;
    let ctx = n + depth;
    match tpl {
        Template::Var(i) => {
            if *i < depth {
                Ok(Term::Var(n + i))
            } else {
                Err(Error::Scope(format!("template variable {i} at depth {depth}")))
            }
        }
        Template::Op(o, args) => {
            let mut out = Vec::with_capacity(args.len());
            for (b, x) in args {
                out.push(Arg::new(*b, eval_template(alg, x, a, depth + b)?));
            }
            alg.build_op(o, ctx, out)
        }
        Template::Meta(m, map) => {
            let b = a.get(m)?;
            if let Some(bad) = map.iter().find(|&&j| j >= depth) {
                return Err(Error::Scope(format!(
                    "metavariable `{m}` sends a fresh slot to {bad} at depth {depth}"
                )));
            }
            let ctx_map: Vec<usize> = (0..n).chain(map.iter().map(|j| n + j)).collect();
            Ok(alg.normalize(term::rename(b, &ctx_map, ctx)?, ctx))
        }
        Template::Subst(body, args) => {
            let j = args.len();
            let body = eval_template(alg, body, a, depth + j)?;
            let args = args
                .iter()
                .map(|x| eval_template(alg, x, a, depth))
                .collect::<Result<Vec<_>>>()?;
            Ok(alg.normalize(term::subst(&body, &SubstEnv::top(ctx, args))?, ctx))
        }
    }
}

pub fn instantiate_pair(alg: &dyn TermAlgebra, p: &TermPair, a: &Assignment) -> Result<(Term, Term)> {
    Ok((
        eval_template(alg, &p.lhs, a, p.depth)?,
        eval_template(alg, &p.rhs, a, p.depth)?,
    ))
}

/// Matching state shared across one enumeration.
pub struct Matcher<'a> {
    pub sig: &'a ReductionSignature,
    pub rule: &'a ReductionRule,
    /// Set when a commuting cluster was too large to explore fully.
    pub truncated: bool,
}

impl<'a> Matcher<'a> {
    pub fn new(sig: &'a ReductionSignature, rule: &'a ReductionRule) -> Self {
        Matcher {
            sig,
            rule,
            truncated: false,
        }
    }

    /// All extensions of `a` under which `tpl` (at `depth`) evaluates to a
    /// term equal to `t` modulo equations. `t` must be canonical.
    pub fn match_template(&mut self, tpl: &Template, t: &Term, depth: usize, a: &Assignment) -> Result<Vec<Assignment>> {
        let mut out = Vec::new();
        self.go(tpl, t, depth, a.clone(), &mut out)?;
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn go(&mut self, tpl: &Template, t: &Term, depth: usize, a: Assignment, out: &mut Vec<Assignment>) -> Result<()> {
        let n = a.context;
        match tpl {
            Template::Var(i) => {
                if *t == Term::Var(n + i) {
                    out.push(a);
                }
                Ok(())
            }
            Template::Op(o, targs) => {
                let candidates = if self.sig.equations.commutes(o) {
                    match self.sig.equations.root_variants(t, n + depth) {
                        Some(vs) => vs,
                        None => {
                            self.truncated = true;
                            vec![t.clone()]
                        }
                    }
                } else {
                    vec![t.clone()]
                };
                for cand in candidates {
                    let Term::Op(f, args) = &cand else { continue };
                    if f != o || args.len() != targs.len() {
                        continue;
                    }
                    if targs.iter().zip(args).any(|((b, _), x)| *b != x.bound) {
                        continue;
                    }
                    let mut partial = vec![a.clone()];
                    for ((b, sub), x) in targs.iter().zip(args) {
                        let mut next = Vec::new();
                        for p in partial {
                            self.go(sub, &x.body, depth + b, p, &mut next)?;
                        }
                        partial = next;
                        if partial.is_empty() {
                            break;
                        }
                    }
                    out.extend(partial);
                }
                Ok(())
            }
            Template::Meta(m, map) => {
                let Some(b) = self.invert_meta(m, map, t, n, depth)? else {
                    return Ok(());
                };
                match a.bindings.get(m) {
                    Some(prev) if *prev != b => {}
                    Some(_) => out.push(a),
                    None => {
                        let mut a = a;
                        a.insert(m.clone(), b);
                        out.push(a);
                    }
                }
                Ok(())
            }
            Template::Subst(..) => Err(Error::NotAPattern(format!(
                "rule `{}` uses a meta-level substitution in a pattern",
                self.rule.name
            ))),
        }
    }

    /// The unique binding `b` of metavariable `m` with `rename(b, map) = t`,
    /// canonicalized and checked against the declared constraint.
    fn invert_meta(&self, m: &Name, map: &[usize], t: &Term, n: usize, depth: usize) -> Result<Option<Term>> {
        let decl = self
            .rule
            .metavar(m)
            .ok_or_else(|| Error::UnboundMeta(m.clone()))?;
        let k = map.len();
        if decl.depth != k {
            return Err(Error::Scope(format!(
                "metavariable `{m}` has depth {} but is used with {k} slots",
                decl.depth
            )));
        }
        let mut inverse = vec![None; depth];
        for (j, &s) in map.iter().enumerate() {
            if s >= depth || inverse[s].is_some() {
                return Err(Error::NotAPattern(format!(
                    "metavariable `{m}` in rule `{}` has a non-injective slot map",
                    self.rule.name
                )));
            }
            inverse[s] = Some(j);
        }
        let b = term::rename_partial(t, n + depth, n + k, |l| {
            if l < n {
                Some(l)
            } else {
                inverse[l - n].map(|j| n + j)
            }
        });
        let Some(b) = b else { return Ok(None) };
        let b = self.sig.canonicalize(&b, n + k);
        if decl.constraint == Constraint::OneHole && !term::depends_on_top(&b, n) {
            return Ok(None);
        }
        Ok(Some(b))
    }
}

/// Template variables (fresh slots) and metavariables are well-formed for
/// `depth`: returns the first problem found.
pub fn check_template(rule: &ReductionRule, sig: &ReductionSignature, tpl: &Template, depth: usize) -> std::result::Result<(), String> {
    match tpl {
        Template::Var(i) => {
            if *i < depth {
                Ok(())
            } else {
                Err(format!("template variable {i} at depth {depth}"))
            }
        }
        Template::Op(o, args) => {
            let spec = sig.monad.op(o).ok_or_else(|| format!("unknown operation `{o}`"))?;
            if spec.binding_arities.len() != args.len() {
                return Err(format!(
                    "`{o}` expects {} arguments, found {}",
                    spec.binding_arities.len(),
                    args.len()
                ));
            }
            for ((b, x), &want) in args.iter().zip(&spec.binding_arities) {
                if *b != want {
                    return Err(format!("argument of `{o}` binds {b} variables, expected {want}"));
                }
                check_template(rule, sig, x, depth + b)?;
            }
            Ok(())
        }
        Template::Meta(m, map) => {
            let decl = rule
                .metavar(m)
                .ok_or_else(|| format!("undeclared metavariable `{m}`"))?;
            if decl.depth != map.len() {
                return Err(format!(
                    "metavariable `{m}` has depth {} but is used with {} slots",
                    decl.depth,
                    map.len()
                ));
            }
            if let Some(bad) = map.iter().find(|&&j| j >= depth) {
                return Err(format!(
                    "metavariable `{m}` sends a fresh slot to {bad}, ambient depth is {depth}"
                ));
            }
            Ok(())
        }
        Template::Subst(body, args) => {
            check_template(rule, sig, body, depth + args.len())?;
            args.iter().try_for_each(|x| check_template(rule, sig, x, depth))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::{MetaVarDecl, MonadSignature};
    use crate::term::{parse_term, OpSpec};

    fn lc() -> ReductionSignature {
        ReductionSignature::new(
            "lc",
            MonadSignature::new(vec![OpSpec::new("app", &[0, 0]), OpSpec::new("abs", &[1])]),
            vec![],
            vec![],
        )
    }

    fn beta() -> ReductionRule {
        ReductionRule {
            name: crate::term::name("beta"),
            metavars: vec![MetaVarDecl::new("T", 1), MetaVarDecl::new("U", 0)],
            hypotheses: vec![],
            conclusion: TermPair::new(
                0,
                Template::op(
                    "app",
                    vec![(0, Template::op("abs", vec![(1, Template::meta("T", &[0]))])), (0, Template::meta("U", &[]))],
                ),
                Template::Subst(Box::new(Template::meta("T", &[0])), vec![Template::meta("U", &[])]),
            ),
        }
    }

    #[test]
    fn beta_conclusion_instantiates_to_redex_and_contractum() {
        let sig = lc();
        // ctx 1, T = the fresh variable, U = y (level 0)
        let a = Assignment::new(1).with("T", Term::Var(1)).with("U", Term::Var(0));
        let (s, t) = instantiate_pair(&sig, &beta().conclusion, &a).unwrap();
        assert_eq!(s, parse_term("(app (abs (bind 1 (var 1))) (var 0))").unwrap());
        assert_eq!(t, Term::Var(0));
    }

    #[test]
    fn eta_expansion_weakens_its_argument() {
        let sig = lc();
        let rhs = Template::op(
            "abs",
            vec![(1, Template::op("app", vec![(0, Template::meta("T", &[])), (0, Template::Var(0))]))],
        );
        let x = parse_term("(abs (bind 1 (var 1)))").unwrap();
        let a = Assignment::new(1).with("T", x.clone());
        let got = eval_template(&sig, &rhs, &a, 0).unwrap();
        let want = Term::op(
            "abs",
            vec![Arg::new(1, Term::app("app", vec![term::weaken(&x, 1), Term::Var(1)]))],
        );
        assert_eq!(got, want);
    }

    #[test]
    fn matching_inverts_evaluation() {
        let sig = lc();
        let r = beta();
        let t = parse_term("(app (abs (bind 1 (app (var 1) (var 0)))) (var 0))").unwrap();
        let mut m = Matcher::new(&sig, &r);
        let got = m.match_template(&r.conclusion.lhs, &t, 0, &Assignment::new(1)).unwrap();
        assert_eq!(got.len(), 1);
        let (s, _) = instantiate_pair(&sig, &r.conclusion, &got[0]).unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn weakening_pattern_rejects_terms_using_the_fresh_slot() {
        let sig = lc();
        let r = beta();
        let pat = Template::op("abs", vec![(1, Template::meta("U", &[]))]);
        let mut m = Matcher::new(&sig, &r);
        let uses = parse_term("(abs (bind 1 (var 1)))").unwrap();
        assert!(m.match_template(&pat, &uses, 0, &Assignment::new(1)).unwrap().is_empty());
        let ignores = parse_term("(abs (bind 1 (var 0)))").unwrap();
        let got = m.match_template(&pat, &ignores, 0, &Assignment::new(1)).unwrap();
        assert_eq!(got[0].get("U").unwrap(), &Term::Var(0));
    }
}
