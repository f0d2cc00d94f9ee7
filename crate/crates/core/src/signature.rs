//! Declarations: operations, equations, metavariables, templates and rules.

use std::collections::BTreeMap;

use crate::equations::Equations;
use crate::error::{Error, Result};
use crate::term::{name, Name, OpSpec, Term};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MonadSignature {
    pub ops: Vec<OpSpec>,
}

impl MonadSignature {
    pub fn new(ops: Vec<OpSpec>) -> Self {
        MonadSignature { ops }
    }

    pub fn op(&self, op: &str) -> Option<&OpSpec> {
        self.ops.iter().find(|o| &*o.name == op)
    }
}

/// The supported class of equations.
///
/// `LayerCommutation(op)` requires `op` to have binding arities `[1, 0]`
/// (body under one binder, argument) and identifies
/// `op(op(t, ι u), v)` with `op(op(swap t, ι v), u)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Equation {
    LayerCommutation(Name),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    None,
    /// Depth-1 metavariable whose instances must use the fresh variable.
    OneHole,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MetaVarDecl {
    pub name: Name,
    pub depth: usize,
    pub constraint: Constraint,
}

impl MetaVarDecl {
    pub fn new(n: &str, depth: usize) -> Self {
        MetaVarDecl {
            name: name(n),
            depth,
            constraint: Constraint::None,
        }
    }

    pub fn one_hole(n: &str) -> Self {
        MetaVarDecl {
            name: name(n),
            depth: 1,
            constraint: Constraint::OneHole,
        }
    }
}

/// Term pattern over metavariables. A template is always read at some
/// ambient depth `d`: its scope is the rule's context plus `d` fresh slots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Template {
    /// Fresh slot `i < d`.
    Var(usize),
    Op(Name, Vec<(usize, Template)>),
    /// Metavariable instance; slot `j` of the metavariable is sent to
    /// ambient slot `fresh_map[j]`.
    Meta(Name, Vec<usize>),
    /// `body` (at depth `d + args.len()`) with its innermost slots replaced
    /// by `args` (each at depth `d`).
    Subst(Box<Template>, Vec<Template>),
}

impl Template {
    pub fn meta(n: &str, fresh_map: &[usize]) -> Self {
        Template::Meta(name(n), fresh_map.to_vec())
    }

    pub fn op(op: &str, args: Vec<(usize, Template)>) -> Self {
        Template::Op(name(op), args)
    }

    pub fn contains_subst(&self) -> bool {
        match self {
            Template::Var(_) | Template::Meta(..) => false,
            Template::Op(_, args) => args.iter().any(|(_, a)| a.contains_subst()),
            Template::Subst(..) => true,
        }
    }

    pub fn metavars(&self, out: &mut Vec<Name>) {
        match self {
            Template::Var(_) => {}
            Template::Op(_, args) => args.iter().for_each(|(_, a)| a.metavars(out)),
            Template::Meta(m, _) => {
                if !out.contains(m) {
                    out.push(m.clone())
                }
            }
            Template::Subst(body, args) => {
                body.metavars(out);
                args.iter().for_each(|a| a.metavars(out));
            }
        }
    }

    /// Renames metavariables according to `f`.
    pub fn map_metas(&self, f: &impl Fn(&Name) -> Name) -> Template {
        match self {
            Template::Var(i) => Template::Var(*i),
            Template::Op(o, args) => Template::Op(
                o.clone(),
                args.iter().map(|(b, a)| (*b, a.map_metas(f))).collect(),
            ),
            Template::Meta(m, map) => Template::Meta(f(m), map.clone()),
            Template::Subst(body, args) => Template::Subst(
                Box::new(body.map_metas(f)),
                args.iter().map(|a| a.map_metas(f)).collect(),
            ),
        }
    }

    pub fn as_bare_meta(&self) -> Option<(&Name, &[usize])> {
        match self {
            Template::Meta(m, map) => Some((m, map)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TermPair {
    pub depth: usize,
    pub lhs: Template,
    pub rhs: Template,
}

impl TermPair {
    pub fn new(depth: usize, lhs: Template, rhs: Template) -> Self {
        TermPair { depth, lhs, rhs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReductionRule {
    pub name: Name,
    pub metavars: Vec<MetaVarDecl>,
    pub hypotheses: Vec<TermPair>,
    pub conclusion: TermPair,
}

impl ReductionRule {
    pub fn metavar(&self, m: &str) -> Option<&MetaVarDecl> {
        self.metavars.iter().find(|d| &*d.name == m)
    }

    pub fn is_normalized(&self) -> bool {
        self.conclusion.depth == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionSignature {
    pub name: Name,
    pub monad: MonadSignature,
    pub equations: Equations,
    pub rules: Vec<ReductionRule>,
}

impl ReductionSignature {
    pub fn new(n: &str, monad: MonadSignature, equations: Vec<Equation>, rules: Vec<ReductionRule>) -> Self {
        ReductionSignature {
            name: name(n),
            monad,
            equations: Equations::new(equations),
            rules,
        }
    }

    pub fn rule(&self, r: &str) -> Result<&ReductionRule> {
        self.rules
            .iter()
            .find(|x| &*x.name == r)
            .ok_or_else(|| Error::UnknownRule(name(r)))
    }

    /// Syntactic term well-formedness: scoping plus operation arities.
    pub fn check_term(&self, t: &Term, ctx: usize) -> Result<()> {
        match t {
            Term::Var(i) => {
                if *i < ctx {
                    Ok(())
                } else {
                    Err(Error::Scope(format!("variable {i} in a context of size {ctx}")))
                }
            }
            Term::Op(o, args) => {
                let spec = self.monad.op(o).ok_or_else(|| Error::UnknownOp(o.clone()))?;
                if spec.binding_arities.len() != args.len() {
                    return Err(Error::Scope(format!(
                        "`{o}` expects {} arguments, found {}",
                        spec.binding_arities.len(),
                        args.len()
                    )));
                }
                for (a, &b) in args.iter().zip(&spec.binding_arities) {
                    if a.bound != b {
                        return Err(Error::Scope(format!(
                            "argument of `{o}` binds {} variables, expected {b}",
                            a.bound
                        )));
                    }
                    self.check_term(&a.body, ctx + b)?;
                }
                Ok(())
            }
        }
    }

    /// Parses term text and checks it against this signature.
    pub fn parse_term(&self, src: &str, ctx: usize) -> Result<Term> {
        let t = crate::term::parse_term(src)?;
        self.check_term(&t, ctx)?;
        Ok(self.canonicalize(&t, ctx))
    }

    pub fn canonicalize(&self, t: &Term, ctx: usize) -> Term {
        self.equations.canonicalize(t, ctx)
    }

    pub fn eq_modulo(&self, a: &Term, b: &Term, ctx: usize) -> bool {
        self.equations.eq_modulo(a, b, ctx)
    }

    /// Substitution followed by canonicalization.
    pub fn subst(&self, t: &Term, env: &crate::term::SubstEnv) -> Result<Term> {
        Ok(self.canonicalize(&crate::term::subst(t, env)?, env.target))
    }

    /// Builds an operation node and canonicalizes it.
    pub fn mk_op(&self, op: &Name, args: Vec<crate::term::Arg>, ctx: usize) -> Term {
        self.canonicalize(&Term::Op(op.clone(), args), ctx)
    }

    /// A copy of the signature with an extra rule appended.
    pub fn with_rule(&self, rule: ReductionRule) -> Self {
        let mut s = self.clone();
        s.rules.push(rule);
        s
    }
}

/// Instances of a rule's metavariables in context `context`: the term bound
/// to metavariable `m` lives in `context + depth(m)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    pub context: usize,
    pub bindings: BTreeMap<Name, Term>,
}

impl Assignment {
    pub fn new(context: usize) -> Self {
        Assignment {
            context,
            bindings: BTreeMap::new(),
        }
    }

    pub fn with(mut self, m: &str, t: Term) -> Self {
        self.bindings.insert(name(m), t);
        self
    }

    pub fn get(&self, m: &str) -> Result<&Term> {
        self.bindings.get(m).ok_or_else(|| Error::UnboundMeta(name(m)))
    }

    pub fn insert(&mut self, m: Name, t: Term) {
        self.bindings.insert(m, t);
    }
}
