//! Models of reduction signatures and checkers for the laws they must obey.
//!
//! A model is given operationally: how each operation builds a carrier term
//! and how each rule turns an assignment and premise reductions into a
//! carrier reduction. The checkers evaluate the required equations
//! pointwise, exhaustively below a bound and on seeded samples above it.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::{enumerate_steps, enumerate_terms};
use crate::error::{Error, Result};
use crate::sample::{random_env, rng_for, Rng64};
use crate::signature::{Assignment, ReductionRule, ReductionSignature};
use crate::template::{eval_template, instantiate_pair, TermAlgebra};
use crate::term::{self, rename, shift, strengthen, weaken, Arg, Name, SubstEnv, Term};
use crate::trace::{endpoints, star_single, subst_trace, validate_star, validate_trace, StarTrace, Trace};
use crate::translate::Translation;

/// An action of a reduction signature in the (star closure of the) initial
/// model of a carrier signature.
pub trait TargetModel: Send + Sync {
    fn name(&self) -> &str;

    fn carrier(&self) -> &ReductionSignature;

    /// Whether interpreted reductions may be sequences of carrier steps
    /// rather than single steps.
    fn is_star(&self) -> bool;

    fn interpret_op(&self, op: &Name, ctx: usize, args: Vec<Arg>) -> Result<Term>;

    /// `rule` is the normalized source rule; `a` binds its metavariables to
    /// carrier terms and `premises` are the interpreted premises.
    fn interpret_rule(&self, rule: &ReductionRule, a: &Assignment, premises: Vec<StarTrace>) -> Result<StarTrace>;
}

/// Evaluates templates with a model's operations.
pub struct ModelAlgebra<'a>(pub &'a dyn TargetModel);

impl TermAlgebra for ModelAlgebra<'_> {
    fn build_op(&self, op: &Name, ctx: usize, args: Vec<Arg>) -> Result<Term> {
        self.0.interpret_op(op, ctx, args)
    }

    fn normalize(&self, t: Term, ctx: usize) -> Term {
        self.0.carrier().canonicalize(&t, ctx)
    }
}

/// The syntax of a signature with its one-step traces.
pub struct InitialModel {
    sig: ReductionSignature,
}

impl TargetModel for InitialModel {
    fn name(&self) -> &str {
        &self.sig.name
    }

    fn carrier(&self) -> &ReductionSignature {
        &self.sig
    }

    fn is_star(&self) -> bool {
        false
    }

    fn interpret_op(&self, op: &Name, ctx: usize, args: Vec<Arg>) -> Result<Term> {
        self.sig.build_op(op, ctx, args)
    }

    fn interpret_rule(&self, rule: &ReductionRule, a: &Assignment, premises: Vec<StarTrace>) -> Result<StarTrace> {
        let premises = premises
            .into_iter()
            .map(|p| match <[Trace; 1]>::try_from(p.steps) {
                Ok([t]) => Ok(t),
                Err(steps) => Err(Error::InvalidTrace(format!(
                    "a premise of `{}` has {} steps instead of one",
                    rule.name,
                    steps.len()
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        star_single(
            &self.sig,
            Trace {
                rule: rule.name.clone(),
                assignment: a.clone(),
                premises,
            },
        )
    }
}

pub fn initial_model(sig: &ReductionSignature) -> Arc<dyn TargetModel> {
    Arc::new(InitialModel { sig: sig.clone() })
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub inputs: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub law: String,
    pub instances: usize,
    pub violations: Vec<Violation>,
    pub seed: u64,
    pub bounds: String,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LawBounds {
    /// Contexts `0..=max_ctx` are covered.
    pub max_ctx: usize,
    /// Terms of depth at most this are enumerated exhaustively.
    pub max_depth: usize,
    /// Depth of the terms whose one-step traces feed the module laws.
    pub trace_depth: usize,
    /// Random substitutions drawn per term or trace.
    pub envs_per_item: usize,
    /// Depth of the images of random substitutions.
    pub image_depth: usize,
    pub fuel: usize,
    pub seed: u64,
}

impl Default for LawBounds {
    fn default() -> Self {
        LawBounds {
            max_ctx: 2,
            max_depth: 3,
            trace_depth: 3,
            envs_per_item: 3,
            image_depth: 2,
            fuel: 2,
            seed: 0,
        }
    }
}

impl LawBounds {
    fn describe(&self) -> String {
        format!(
            "ctx<={} depth<={} trace-depth<={} envs={} image-depth<={} fuel={}",
            self.max_ctx, self.max_depth, self.trace_depth, self.envs_per_item, self.image_depth, self.fuel
        )
    }
}

/// One law evaluated over a list of items; each item yields a number of
/// instances and the violations among them. Items run in parallel and are
/// reported in item order.
fn run_law<I: Sync>(law: &str, bounds: &LawBounds, items: &[I], f: impl Fn(usize, &I) -> (usize, Vec<Violation>) + Sync) -> LawReport {
    let results: Vec<_> = items.par_iter().enumerate().map(|(i, x)| f(i, x)).collect();
    LawReport {
        law: law.to_string(),
        instances: results.iter().map(|r| r.0).sum(),
        violations: results.into_iter().flat_map(|r| r.1).collect(),
        seed: bounds.seed,
        bounds: bounds.describe(),
    }
}

fn check(out: &mut Vec<Violation>, inputs: impl FnOnce() -> String, lhs: Result<String>, rhs: Result<String>) {
    match (lhs, rhs) {
        (Ok(l), Ok(r)) if l == r => {}
        (l, r) => out.push(Violation {
            inputs: inputs(),
            lhs: l.unwrap_or_else(|e| format!("error: {e}")),
            rhs: r.unwrap_or_else(|e| format!("error: {e}")),
        }),
    }
}

fn show_env(g: &SubstEnv) -> String {
    let images: Vec<String> = g.images.iter().map(Term::to_string).collect();
    format!("[{}] : {} -> {}", images.join(", "), g.source, g.target)
}

// ---------------------------------------------------------------------------
// Monad and module laws

/// Substitution as used by the law checker; replaceable to test the checker.
pub type SubstFn = fn(&ReductionSignature, &Term, &SubstEnv) -> Result<Term>;

fn real_subst(sig: &ReductionSignature, t: &Term, g: &SubstEnv) -> Result<Term> {
    sig.subst(t, g)
}

/// A broken substitution that forgets to relocate bound variables when the
/// context size changes.
pub fn mutant_subst(sig: &ReductionSignature, t: &Term, g: &SubstEnv) -> Result<Term> {
    fn go(t: &Term, g: &SubstEnv, crossed: usize) -> Term {
        match t {
            Term::Var(l) if *l < g.source => shift(&g.images[*l], g.target, crossed),
            Term::Var(l) => Term::Var(*l),
            Term::Op(o, args) => Term::Op(
                o.clone(),
                args.iter().map(|a| Arg::new(a.bound, go(&a.body, g, crossed + a.bound))).collect(),
            ),
        }
    }
    term::check_scope(t, g.source)?;
    Ok(sig.canonicalize(&go(t, g, 0), g.target))
}

pub fn check_monad_laws(sig: &ReductionSignature, bounds: &LawBounds) -> Vec<LawReport> {
    check_monad_laws_with(sig, bounds, real_subst)
}

/// Monad laws of the term syntax and module laws of its one-step traces.
///
/// Terms are enumerated exhaustively (in the order of
/// [`enumerate_terms`], context by context); substitutions are drawn from
/// a stream seeded per law and per term.
pub fn check_monad_laws_with(sig: &ReductionSignature, bounds: &LawBounds, subst: SubstFn) -> Vec<LawReport> {
    let b = bounds;
    let terms: Vec<(usize, Term)> = (0..=b.max_ctx)
        .flat_map(|n| enumerate_terms(sig, n, b.max_depth).into_iter().map(move |t| (n, t)))
        .collect();
    let envs = |law: &str, i: usize, n: usize| -> Vec<(SubstEnv, Rng64)> {
        let mut r = rng_for(b.seed, law, i as u64);
        let mut out = Vec::new();
        for k in 0..b.envs_per_item {
            let m = (k + i) % (b.max_ctx + 1);
            if let Some(g) = random_env(sig, n, m, b.image_depth, &mut r) {
                out.push((g, r.clone()));
            }
        }
        out
    };
    let show = |t: &Result<Term>| t.as_ref().map(Term::to_string).map_err(Clone::clone);
    let mut reports = Vec::new();

    reports.push(run_law("unit-right", b, &terms, |_, (n, t)| {
        let mut v = Vec::new();
        check(&mut v, || format!("{t} in {n}"), show(&subst(sig, t, &SubstEnv::identity(*n))), Ok(t.to_string()));
        (1, v)
    }));

    reports.push(run_law("unit-left", b, &terms, |i, (n, _)| {
        let mut v = Vec::new();
        let mut count = 0;
        for (g, _) in envs("unit-left", i, *n) {
            for x in 0..*n {
                count += 1;
                check(
                    &mut v,
                    || format!("var {x} under {}", show_env(&g)),
                    show(&subst(sig, &Term::Var(x), &g)),
                    Ok(sig.canonicalize(&g.images[x], g.target).to_string()),
                );
            }
        }
        (count, v)
    }));

    reports.push(run_law("associativity", b, &terms, |i, (n, t)| {
        let mut v = Vec::new();
        let mut count = 0;
        for (g, mut r) in envs("associativity", i, *n) {
            let m = (g.target + 1) % (b.max_ctx + 1);
            let Some(h) = random_env(sig, g.target, m, b.image_depth, &mut r) else {
                continue;
            };
            count += 1;
            let lhs = subst(sig, t, &g).and_then(|u| subst(sig, &u, &h));
            let rhs = g.compose(&h).and_then(|gh| subst(sig, t, &gh));
            check(&mut v, || format!("{t} under {} then {}", show_env(&g), show_env(&h)), show(&lhs), show(&rhs));
        }
        (count, v)
    }));

    reports.push(run_law("renaming-coherence", b, &terms, |i, (n, t)| {
        let mut v = Vec::new();
        let mut r = rng_for(b.seed, "renaming-coherence", i as u64);
        let mut count = 0;
        for _ in 0..b.envs_per_item {
            let m = rand::Rng::gen_range(&mut r, 1..=b.max_ctx + 1);
            let map: Vec<usize> = (0..*n).map(|_| rand::Rng::gen_range(&mut r, 0..m)).collect();
            count += 1;
            let lhs = rename(t, &map, m).map(|u| sig.canonicalize(&u, m));
            let rhs = SubstEnv::from_renaming(&map, m).and_then(|g| subst(sig, t, &g));
            check(&mut v, || format!("{t} renamed by {map:?}"), show(&lhs), show(&rhs));
        }
        (count, v)
    }));

    reports.push(run_law("weakening", b, &terms, |_, (n, t)| {
        let mut v = Vec::new();
        let w = weaken(t, *n);
        check(
            &mut v,
            || format!("{t} in {n}"),
            Ok(strengthen(&w, *n).map_or("none".into(), |u| u.to_string())),
            Ok(t.to_string()),
        );
        let via_subst = SubstEnv::from_renaming(&(0..*n).collect::<Vec<_>>(), n + 1).and_then(|g| subst(sig, t, &g));
        check(&mut v, || format!("weakening {t} in {n}"), show(&via_subst), Ok(sig.canonicalize(&w, n + 1).to_string()));
        (2, v)
    }));

    if !sig.equations.is_empty() {
        reports.push(run_law("equations-respected", b, &terms, |i, (n, t)| {
            let mut v = Vec::new();
            let variants = sig.equations.root_variants(t, *n).unwrap_or_default();
            let gs = envs("equations-respected", i, *n);
            let mut count = 0;
            for u in &variants {
                count += 1;
                check(&mut v, || format!("{u} ~ {t}"), Ok(sig.canonicalize(u, *n).to_string()), Ok(t.to_string()));
                for (g, _) in &gs {
                    count += 1;
                    check(
                        &mut v,
                        || format!("{u} ~ {t} under {}", show_env(g)),
                        show(&subst(sig, u, g)),
                        show(&subst(sig, t, g)),
                    );
                }
            }
            (count, v)
        }));
    }

    if sig.rules.is_empty() {
        return reports;
    }
    let trace_terms: Vec<(usize, Term)> = (0..=b.max_ctx)
        .flat_map(|n| enumerate_terms(sig, n, b.trace_depth).into_iter().map(move |t| (n, t)))
        .collect();
    let traces: Vec<(usize, Trace)> = trace_terms
        .par_iter()
        .map(|(n, t)| {
            enumerate_steps(sig, *n, t, b.fuel)
                .map(|s| s.traces.into_iter().map(|tr| (*n, tr)).collect::<Vec<_>>())
                .unwrap_or_default()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let show_tr = |t: &Result<Trace>| t.as_ref().map(|t| format!("{t:?}")).map_err(Clone::clone);

    reports.push(run_law("module-unit", b, &traces, |_, (n, tr)| {
        let mut v = Vec::new();
        check(
            &mut v,
            || tr.to_string(),
            show_tr(&subst_trace(sig, tr, &SubstEnv::identity(*n))),
            Ok(format!("{tr:?}")),
        );
        (1, v)
    }));

    reports.push(run_law("module-associativity", b, &traces, |i, (n, tr)| {
        let mut v = Vec::new();
        let mut count = 0;
        for (g, mut r) in envs("module-associativity", i, *n) {
            let m = (g.target + 1) % (b.max_ctx + 1);
            let Some(h) = random_env(sig, g.target, m, b.image_depth, &mut r) else {
                continue;
            };
            count += 1;
            let lhs = subst_trace(sig, tr, &g).and_then(|u| subst_trace(sig, &u, &h));
            let rhs = g.compose(&h).and_then(|gh| subst_trace(sig, tr, &gh));
            check(&mut v, || format!("{tr} under {} then {}", show_env(&g), show_env(&h)), show_tr(&lhs), show_tr(&rhs));
        }
        (count, v)
    }));

    reports.push(run_law("source-target-naturality", b, &traces, |i, (n, tr)| {
        let mut v = Vec::new();
        let mut count = 0;
        for (g, _) in envs("source-target-naturality", i, *n) {
            count += 1;
            let lhs = subst_trace(sig, tr, &g).and_then(|u| endpoints(sig, &u)).map(|(s, t)| format!("{s} ~> {t}"));
            let rhs = endpoints(sig, tr)
                .and_then(|(s, t)| Ok(format!("{} ~> {}", sig.subst(&s, &g)?, sig.subst(&t, &g)?)));
            check(&mut v, || format!("{tr} under {}", show_env(&g)), lhs, rhs);
        }
        (count, v)
    }));

    reports.push(run_law("substituted-traces-valid", b, &traces, |i, (n, tr)| {
        let mut v = Vec::new();
        let mut count = 0;
        for (g, _) in envs("substituted-traces-valid", i, *n) {
            count += 1;
            let errs = subst_trace(sig, tr, &g).map(|u| validate_trace(sig, &u).join("; "));
            check(&mut v, || format!("{tr} under {}", show_env(&g)), errs, Ok(String::new()));
        }
        (count, v)
    }));

    reports
}

// ---------------------------------------------------------------------------
// Actions and morphisms

/// The action triangle for one rule: interpreting a sampled instance gives
/// a valid carrier reduction whose endpoints are the conclusion evaluated
/// with the model's operations.
///
/// Samples are traces of the initial model of `source`; their assignments
/// and premises are carried into the model by the fold, so the inputs
/// satisfy the rule's hypotheses by construction.
pub fn check_action_diagram(model: Arc<dyn TargetModel>, source: &ReductionSignature, rule: &str, samples: &[Trace], seed: u64) -> LawReport {
    let tr = Translation::from_model("action-check", source.clone(), model.clone());
    let samples: Vec<&Trace> = samples.iter().filter(|t| t.rule.as_ref() == rule).collect();
    let bounds = format!("{} samples of `{rule}`", samples.len());
    let results: Vec<Option<Violation>> = samples
        .par_iter()
        .map(|t| {
            let outcome = (|| -> Result<(String, String)> {
                let r = crate::trace::normalized_rule(source, &t.rule)?;
                let a = tr.fold_assignment(&r, &t.assignment)?;
                let premises = t.premises.iter().map(|p| tr.fold_trace(p)).collect::<Result<Vec<_>>>()?;
                let out = model.interpret_rule(&r, &a, premises)?;
                let (s, e) = instantiate_pair(&ModelAlgebra(model.as_ref()), &r.conclusion, &a)?;
                let errs = validate_star(model.carrier(), &out);
                Ok((
                    format!("{} ~> {}{}", out.source, out.target, if errs.is_empty() { String::new() } else { format!(" invalid: {}", errs.join("; ")) }),
                    format!("{s} ~> {e}"),
                ))
            })();
            let mut v = Vec::new();
            check(&mut v, || t.to_string(), outcome.as_ref().map(|o| o.0.clone()).map_err(Clone::clone), outcome.map(|o| o.1));
            v.pop()
        })
        .collect();
    LawReport {
        law: format!("action:{}:{rule}", model.name()),
        instances: samples.len(),
        violations: results.into_iter().flatten().collect(),
        seed,
        bounds,
    }
}

/// The morphism conditions of a translation on sampled traces: the fold
/// commutes with substitution on terms and on traces, and preserves
/// sources, targets and validity.
pub fn check_morphism_laws(tr: &Translation, samples: &[Trace], envs_per_trace: usize, image_depth: usize, seed: u64) -> Vec<LawReport> {
    let src = &tr.source;
    let tgt = tr.target();
    let bounds = LawBounds {
        max_ctx: samples.iter().map(Trace::context).max().unwrap_or(0),
        max_depth: image_depth,
        trace_depth: 0,
        envs_per_item: envs_per_trace,
        image_depth,
        fuel: 0,
        seed,
    };
    let envs = |law: &str, i: usize, n: usize| -> Vec<SubstEnv> {
        let mut r = rng_for(seed, law, i as u64);
        (0..envs_per_trace)
            .filter_map(|k| random_env(src, n, (n + k) % (bounds.max_ctx + 1), image_depth, &mut r))
            .collect()
    };
    let fold_env = |g: &SubstEnv| -> Result<SubstEnv> {
        SubstEnv::new(g.target, g.images.iter().map(|t| tr.fold_term(t, g.target)).collect::<Result<_>>()?)
    };
    let show = |t: Result<Term>| t.map(|t| t.to_string());
    let star_endpoints = |s: Result<StarTrace>| s.map(|s| format!("{} ~> {}", s.source, s.target));
    let mut reports = Vec::new();

    reports.push(run_law("preserves-endpoints", &bounds, samples, |_, t| {
        let mut v = Vec::new();
        let lhs = tr.fold_trace(t).map(|s| {
            let errs = validate_star(tgt, &s);
            format!("{} ~> {}{}", s.source, s.target, if errs.is_empty() { String::new() } else { format!(" invalid: {}", errs.join("; ")) })
        });
        let rhs = endpoints(src, t).and_then(|(s, e)| {
            Ok(format!("{} ~> {}", tr.fold_term(&s, t.context())?, tr.fold_term(&e, t.context())?))
        });
        check(&mut v, || t.to_string(), lhs, rhs);
        (1, v)
    }));

    reports.push(run_law("term-substitution", &bounds, samples, |i, t| {
        let mut v = Vec::new();
        let n = t.context();
        let Ok(s) = crate::trace::source(src, t) else {
            return (0, v);
        };
        let gs = envs("term-substitution", i, n);
        for g in &gs {
            let lhs = src.subst(&s, g).and_then(|u| tr.fold_term(&u, g.target));
            let rhs = fold_env(g).and_then(|fg| tgt.subst(&tr.fold_term(&s, n)?, &fg));
            check(&mut v, || format!("{s} under {}", show_env(g)), show(lhs), show(rhs));
        }
        (gs.len(), v)
    }));

    reports.push(run_law("trace-substitution", &bounds, samples, |i, t| {
        let mut v = Vec::new();
        let gs = envs("trace-substitution", i, t.context());
        for g in &gs {
            let lhs = subst_trace(src, t, g).and_then(|u| tr.fold_trace(&u));
            let rhs = fold_env(g).and_then(|fg| crate::trace::star_subst(tgt, &tr.fold_trace(t)?, &fg));
            check(
                &mut v,
                || format!("{t} under {}", show_env(g)),
                lhs.clone().map(|s| format!("{s:?}")),
                rhs.clone().map(|s| format!("{s:?}")),
            );
            if v.is_empty() {
                check(&mut v, || format!("endpoints of {t} under {}", show_env(g)), star_endpoints(lhs), star_endpoints(rhs));
            }
        }
        (gs.len(), v)
    }));

    reports
}

/// Evaluates the conclusion source of `rule` with the model's operations.
pub fn interpreted_source(model: &dyn TargetModel, rule: &ReductionRule, a: &Assignment) -> Result<Term> {
    eval_template(&ModelAlgebra(model), &rule.conclusion.lhs, a, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn small() -> LawBounds {
        LawBounds {
            max_ctx: 1,
            max_depth: 2,
            trace_depth: 3,
            ..LawBounds::default()
        }
    }

    #[test]
    fn syntax_satisfies_the_laws() {
        for name in ["congbeta", "lcex"] {
            let sig = corpus::load(name).unwrap();
            for r in check_monad_laws(&sig, &small()) {
                assert!(r.passed(), "{name} {}: {:?}", r.law, r.violations.first());
                assert!(r.instances > 0 || r.law == "unit-left", "{name} {}", r.law);
            }
        }
    }

    #[test]
    fn the_mutant_substitution_is_caught() {
        let sig = corpus::load("lc").unwrap();
        let reports = check_monad_laws_with(&sig, &small(), mutant_subst);
        assert!(reports.iter().any(|r| !r.passed()));
    }

    #[test]
    fn reports_are_deterministic() {
        let sig = corpus::load("whbeta").unwrap();
        assert_eq!(check_monad_laws(&sig, &small()), check_monad_laws(&sig, &small()));
    }
}
