//! Translations by recursion: folding the terms and traces of a source
//! signature's initial model into a target model, and the built-in
//! translations between the corpus calculi.

use std::sync::Arc;

use crate::corpus;
use crate::error::{Error, Result};
use crate::model::{initial_model, interpreted_source, TargetModel};
use crate::signature::{Assignment, ReductionRule, ReductionSignature};
use crate::star_action::{cong_all, lift_action_to_star, subst_cong_star};
use crate::template::TermAlgebra;
use crate::term::{check_scope, weaken, Arg, Name, SubstEnv, Term};
use crate::trace::{normalized_rule, star_compose, star_refl, star_single, star_subst, subst_trace, StarTrace, Trace};

pub struct Translation {
    pub name: String,
    pub source: ReductionSignature,
    kind: Kind,
}

enum Kind {
    Model(Arc<dyn TargetModel>),
    Composed(Box<Translation>, Box<Translation>),
}

impl Translation {
    pub fn from_model(name: &str, source: ReductionSignature, model: Arc<dyn TargetModel>) -> Self {
        Translation {
            name: name.to_string(),
            source,
            kind: Kind::Model(model),
        }
    }

    /// The identity translation of a signature into its own initial model.
    pub fn identity(sig: &ReductionSignature) -> Self {
        Translation::from_model("identity", sig.clone(), initial_model(sig))
    }

    /// `first` followed by `second`; the target of `first` must be the
    /// source of `second`.
    pub fn compose(name: &str, first: Translation, second: Translation) -> Result<Self> {
        if first.target() != &second.source {
            return Err(Error::Invalid(format!(
                "cannot compose `{}` (into `{}`) with `{}` (from `{}`)",
                first.name,
                first.target().name,
                second.name,
                second.source.name
            )));
        }
        Ok(Translation {
            name: name.to_string(),
            source: first.source.clone(),
            kind: Kind::Composed(Box::new(first), Box::new(second)),
        })
    }

    /// The target model, unless the translation is a composite.
    pub fn model(&self) -> Option<Arc<dyn TargetModel>> {
        match &self.kind {
            Kind::Model(m) => Some(m.clone()),
            Kind::Composed(..) => None,
        }
    }

    pub fn target(&self) -> &ReductionSignature {
        match &self.kind {
            Kind::Model(m) => m.carrier(),
            Kind::Composed(_, second) => second.target(),
        }
    }

    /// The homomorphic image of `t` (in context `ctx`).
    pub fn fold_term(&self, t: &Term, ctx: usize) -> Result<Term> {
        match &self.kind {
            Kind::Model(m) => {
                check_scope(t, ctx)?;
                fold_with(m.as_ref(), t, ctx)
            }
            Kind::Composed(first, second) => second.fold_term(&first.fold_term(t, ctx)?, ctx),
        }
    }

    /// Folds every binding of an assignment for `rule` (normalized).
    pub fn fold_assignment(&self, rule: &ReductionRule, a: &Assignment) -> Result<Assignment> {
        let mut out = Assignment::new(a.context);
        for (m, t) in &a.bindings {
            let d = rule.metavar(m).ok_or_else(|| Error::UnboundMeta(m.clone()))?;
            out.insert(m.clone(), self.fold_term(t, a.context + d.depth)?);
        }
        Ok(out)
    }

    /// Routes every rule instance of the derivation through the target's
    /// interpretation, premises first.
    pub fn fold_trace(&self, t: &Trace) -> Result<StarTrace> {
        match &self.kind {
            Kind::Model(m) => {
                let rule = normalized_rule(&self.source, &t.rule)?;
                let a = self.fold_assignment(&rule, &t.assignment)?;
                let premises = t.premises.iter().map(|p| self.fold_trace(p)).collect::<Result<Vec<_>>>()?;
                m.interpret_rule(&rule, &a, premises)
            }
            Kind::Composed(first, second) => second.fold_star(&first.fold_trace(t)?),
        }
    }

    pub fn fold_star(&self, s: &StarTrace) -> Result<StarTrace> {
        let mut acc = star_refl(s.context, self.fold_term(&s.source, s.context)?);
        for step in &s.steps {
            acc = star_compose(self.target(), &acc, &self.fold_trace(step)?)?;
        }
        let end = self.fold_term(&s.target, s.context)?;
        if !self.target().eq_modulo(&acc.target, &end, s.context) {
            return Err(Error::Composability(format!("folded steps end at {}, expected {end}", acc.target)));
        }
        Ok(acc)
    }
}

fn fold_with(m: &dyn TargetModel, t: &Term, ctx: usize) -> Result<Term> {
    match t {
        Term::Var(i) => Ok(Term::Var(*i)),
        Term::Op(o, args) => {
            let args = args
                .iter()
                .map(|a| Ok(Arg::new(a.bound, fold_with(m, &a.body, ctx + a.bound)?)))
                .collect::<Result<Vec<_>>>()?;
            m.interpret_op(o, ctx, args)
        }
    }
}

fn single_step(p: StarTrace, rule: &Name) -> Result<Trace> {
    match <[Trace; 1]>::try_from(p.steps) {
        Ok([t]) => Ok(t),
        Err(steps) => Err(Error::InvalidTrace(format!(
            "a premise of `{rule}` has {} steps instead of one",
            steps.len()
        ))),
    }
}

fn lambda_carrier(model: &str, carrier: &ReductionSignature, ops: &[&str]) -> Result<()> {
    for op in ops {
        if carrier.monad.op(op).is_none() {
            return Err(Error::Invalid(format!("`{model}` needs `{op}` in `{}`", carrier.name)));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Fixpoints as β-reduction sequences

/// Turing's fixpoint combinator `A A` with `A = λx.λf. f (x x f)`, in
/// context `n`.
pub fn turing_y(n: usize) -> Term {
    let (x, f) = (Term::Var(n), Term::Var(n + 1));
    let xxf = Term::app("app", vec![Term::app("app", vec![x.clone(), x]), f.clone()]);
    let body = Term::app("app", vec![f, xxf]);
    let a = Term::op("abs", vec![Arg::new(1, Term::op("abs", vec![Arg::new(1, body)]))]);
    Term::app("app", vec![a.clone(), a])
}

/// The two β-steps from `Y *` to `* (Y *)` in context 1, in the
/// congruent β signature.
pub fn turing_unfolding(congbeta: &ReductionSignature) -> Result<StarTrace> {
    let y = turing_y(1);
    let Term::Op(_, ys) = &y else { unreachable!() };
    let a = ys[0].body.clone();
    let Term::Op(_, a_args) = &a else { unreachable!() };
    let inner = star_single(
        congbeta,
        Trace::new("beta", Assignment::new(1).with("T", a_args[0].body.clone()).with("U", a.clone()), vec![]),
    )?;
    let first = Trace::new(
        "appl-cong",
        Assignment::new(1)
            .with("T", y.clone())
            .with("T'", inner.target.clone())
            .with("U", Term::Var(0)),
        vec![inner.steps[0].clone()],
    );
    let Term::Op(_, lam) = &inner.target else { unreachable!() };
    let second = Trace::new(
        "beta",
        Assignment::new(1).with("T", lam[0].body.clone()).with("U", Term::Var(0)),
        vec![],
    );
    star_compose(congbeta, &star_single(congbeta, first)?, &star_single(congbeta, second)?)
}

struct FixModel {
    carrier: ReductionSignature,
    unfolding: StarTrace,
    /// Uses the closed combinator in every context instead of weakening it.
    mutant: bool,
}

impl FixModel {
    fn y(&self, n: usize) -> Term {
        turing_y(if self.mutant { 0 } else { n })
    }
}

impl TargetModel for FixModel {
    fn name(&self) -> &str {
        if self.mutant {
            "fix-to-beta-star-mutant"
        } else {
            "fix-to-beta-star"
        }
    }

    fn carrier(&self) -> &ReductionSignature {
        &self.carrier
    }

    fn is_star(&self) -> bool {
        true
    }

    fn interpret_op(&self, op: &Name, ctx: usize, mut args: Vec<Arg>) -> Result<Term> {
        if op.as_ref() == "fix" {
            let t = args.pop().filter(|a| a.bound == 1 && args.is_empty());
            let t = t.ok_or_else(|| Error::Scope("`fix` takes one argument binding one variable".into()))?;
            let abs = Term::op("abs", vec![t]);
            return Ok(Term::app("app", vec![self.y(ctx), abs]));
        }
        self.carrier.build_op(op, ctx, args)
    }

    fn interpret_rule(&self, rule: &ReductionRule, a: &Assignment, premises: Vec<StarTrace>) -> Result<StarTrace> {
        let n = a.context;
        match rule.name.as_ref() {
            "fix-exp" => {
                let t = a.get("T")?.clone();
                let f = Term::op("abs", vec![Arg::new(1, t.clone())]);
                let unfold = star_subst(&self.carrier, &self.unfolding, &SubstEnv::new(n, vec![f.clone()])?)?;
                let beta = Trace::new(
                    "beta",
                    Assignment::new(n).with("T", t).with("U", Term::app("app", vec![self.y(n), f])),
                    vec![],
                );
                star_compose(&self.carrier, &unfold, &star_single(&self.carrier, beta)?)
            }
            "fix-cong" => {
                let [m] = <[StarTrace; 1]>::try_from(premises)
                    .map_err(|_| Error::InvalidTrace("`fix-cong` takes one premise".into()))?;
                let (t, t2) = (a.get("T")?.clone(), a.get("T'")?.clone());
                let under = lift_action_to_star(
                    &self.carrier,
                    &cong_all("abs", &[1]),
                    &Assignment::new(n).with("A0", t).with("B0", t2),
                    &[m],
                )?;
                let y = self.y(n);
                lift_action_to_star(
                    &self.carrier,
                    &cong_all("app", &[0, 0]),
                    &Assignment::new(n)
                        .with("A0", y.clone())
                        .with("B0", y.clone())
                        .with("A1", under.source.clone())
                        .with("B1", under.target.clone()),
                    &[star_refl(n, y), under],
                )
            }
            _ => lift_action_to_star(&self.carrier, rule, a, &premises),
        }
    }
}

fn fix_model(mutant: bool) -> Result<Translation> {
    let source = corpus::load("lcfix")?;
    let carrier = corpus::load("congbeta")?;
    lambda_carrier("fix-to-beta-star", &carrier, &["app", "abs"])?;
    let unfolding = turing_unfolding(&carrier)?;
    let model = FixModel {
        carrier,
        unfolding,
        mutant,
    };
    let name = model.name().to_string();
    Ok(Translation::from_model(&name, source, Arc::new(model)))
}

/// `fix(t) ↦ Y (λ t)`; the fixpoint step becomes the unfolding of `Y`
/// followed by one β-step.
pub fn fix_to_beta_star() -> Result<Translation> {
    fix_model(false)
}

/// A deliberately wrong variant of [`fix_to_beta_star`] that does not
/// weaken the combinator into the ambient context.
pub fn mutant_fix_to_beta_star() -> Result<Translation> {
    fix_model(true)
}

// ---------------------------------------------------------------------------
// Explicit substitutions into congruent unary substitution

/// `λx.x` in context `n`.
fn identity_fn(n: usize) -> Term {
    Term::op("abs", vec![Arg::new(1, Term::Var(n))])
}

struct ExModel {
    carrier: ReductionSignature,
}

impl ExModel {
    fn subst_cong(&self, n: usize, u: Term, t: Term, t2: Term, premise: Trace) -> Result<StarTrace> {
        let a = Assignment::new(n).with("U", u).with("T", t).with("T'", t2);
        star_single(&self.carrier, Trace::new("subst-cong", a, vec![premise]))
    }

    /// A reduction from `s` to itself: the substitution congruence on the
    /// weakening of `s`, with any reduction as premise (here `I I ~> I`).
    fn reflexivity(&self, n: usize, s: Term) -> Result<StarTrace> {
        let i = identity_fn(n);
        let ii = Term::app("app", vec![i.clone(), i.clone()]);
        let beta = Trace::new("beta", Assignment::new(n).with("T", Term::Var(n)).with("U", i.clone()), vec![]);
        self.subst_cong(n, weaken(&s, n), ii, i, beta)
    }
}

impl TargetModel for ExModel {
    fn name(&self) -> &str {
        "ex-to-onecong"
    }

    fn carrier(&self) -> &ReductionSignature {
        &self.carrier
    }

    fn is_star(&self) -> bool {
        false
    }

    fn interpret_op(&self, op: &Name, ctx: usize, args: Vec<Arg>) -> Result<Term> {
        if op.as_ref() == "esubst" {
            return match <[Arg; 2]>::try_from(args) {
                Ok([t, u]) if t.bound == 1 && u.bound == 0 => self.carrier.subst(&t.body, &SubstEnv::single(ctx, u.body)),
                _ => Err(Error::Scope("`esubst` takes a body binding one variable and an argument".into())),
            };
        }
        self.carrier.build_op(op, ctx, args)
    }

    fn interpret_rule(&self, rule: &ReductionRule, a: &Assignment, premises: Vec<StarTrace>) -> Result<StarTrace> {
        let n = a.context;
        let get = |m: &str| a.get(m).cloned();
        let app = |x: Term, y: Term| Term::app("app", vec![x, y]);
        let mut premises = premises.into_iter().map(|p| single_step(p, &rule.name));
        let mut premise = || premises.next().unwrap_or_else(|| Err(Error::InvalidTrace(format!("`{}` lacks a premise", rule.name))));
        match rule.name.as_ref() {
            "beta" => star_single(
                &self.carrier,
                Trace::new("beta", Assignment::new(n).with("T", get("T")?).with("U", get("U")?), vec![]),
            ),
            "abs-cong" => {
                let p = premise()?;
                lift_action_to_star(&self.carrier, rule, a, &[star_single(&self.carrier, p)?])
            }
            "appl-cong" => self.subst_cong(n, app(Term::Var(n), weaken(&get("U")?, n)), get("T")?, get("T'")?, premise()?),
            "appr-cong" => self.subst_cong(n, app(weaken(&get("T")?, n), Term::Var(n)), get("U")?, get("U'")?, premise()?),
            "esubstl-cong" => {
                let p = subst_trace(&self.carrier, &premise()?, &SubstEnv::single(n, get("U")?))?;
                star_single(&self.carrier, p)
            }
            "esubstr-cong" => self.subst_cong(n, get("T")?, get("U")?, get("U'")?, premise()?),
            _ if rule.hypotheses.is_empty() => self.reflexivity(n, interpreted_source(self, rule, a)?),
            _ => Err(Error::NoRealization {
                target: self.carrier.name.clone(),
                what: format!("`{}`", rule.name),
            }),
        }
    }
}

/// Explicit substitution becomes monadic substitution; β and the
/// congruences survive (application congruences and the right
/// substitution congruence through the unary substitution congruence,
/// the left one through the substitution of premises), and every other
/// rule becomes a reflexivity.
pub fn ex_to_onecong() -> Result<Translation> {
    let carrier = corpus::load("onecong")?;
    lambda_carrier("ex-to-onecong", &carrier, &["app", "abs"])?;
    carrier.rule("subst-cong")?;
    Ok(Translation::from_model("ex-to-onecong", corpus::load("lcex")?, Arc::new(ExModel { carrier })))
}

// ---------------------------------------------------------------------------
// Congruent unary substitution into β-sequences

struct OneCongModel {
    carrier: ReductionSignature,
}

impl TargetModel for OneCongModel {
    fn name(&self) -> &str {
        "onecong-to-beta-star"
    }

    fn carrier(&self) -> &ReductionSignature {
        &self.carrier
    }

    fn is_star(&self) -> bool {
        true
    }

    fn interpret_op(&self, op: &Name, ctx: usize, args: Vec<Arg>) -> Result<Term> {
        self.carrier.build_op(op, ctx, args)
    }

    fn interpret_rule(&self, rule: &ReductionRule, a: &Assignment, premises: Vec<StarTrace>) -> Result<StarTrace> {
        if rule.name.as_ref() == "subst-cong" {
            let [m] = <[StarTrace; 1]>::try_from(premises)
                .map_err(|_| Error::InvalidTrace("`subst-cong` takes one premise".into()))?;
            return subst_cong_star(&self.carrier, a.get("U")?, a.context, &m);
        }
        lift_action_to_star(&self.carrier, rule, a, &premises)
    }
}

pub fn onecong_to_beta_star() -> Result<Translation> {
    let carrier = corpus::load("congbeta")?;
    Ok(Translation::from_model(
        "onecong-to-beta-star",
        corpus::load("onecong")?,
        Arc::new(OneCongModel { carrier }),
    ))
}

pub fn composed_ex_to_beta_star() -> Result<Translation> {
    Translation::compose("composed-ex-to-beta-star", ex_to_onecong()?, onecong_to_beta_star()?)
}

pub const BUILTIN: &[&str] = &[
    "fix-to-beta-star",
    "ex-to-onecong",
    "onecong-to-beta-star",
    "composed-ex-to-beta-star",
];

pub fn builtin(name: &str) -> Result<Translation> {
    match name {
        "fix-to-beta-star" => fix_to_beta_star(),
        "ex-to-onecong" => ex_to_onecong(),
        "onecong-to-beta-star" => onecong_to_beta_star(),
        "composed-ex-to-beta-star" => composed_ex_to_beta_star(),
        "fix-to-beta-star-mutant" => mutant_fix_to_beta_star(),
        _ => Err(Error::UnknownTranslation(name.to_string())),
    }
}
