//! Proof-relevant reduction traces of the initial model and their star
//! closure.
//!
//! A [`Trace`] is a derivation tree: a rule, an assignment of its
//! metavariables, and one premise per hypothesis. Traces always refer to the
//! *normalized* form of their rule (conclusion at depth 0), so the
//! assignment also binds the metavariables that normalization introduces.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signature::{Assignment, Constraint, ReductionRule, ReductionSignature};
use crate::template::instantiate_pair;
use crate::term::{self, name, Name, SubstEnv, Term};
use crate::validate::normalize_rule;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trace {
    pub rule: Name,
    pub assignment: Assignment,
    pub premises: Vec<Trace>,
}

impl Trace {
    pub fn new(rule: &str, assignment: Assignment, premises: Vec<Trace>) -> Self {
        Trace {
            rule: name(rule),
            assignment,
            premises,
        }
    }

    pub fn context(&self) -> usize {
        self.assignment.context
    }

    /// Height of the derivation tree; axioms have height 1.
    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Trace::height).max().unwrap_or(0)
    }
}

pub fn normalized_rule(sig: &ReductionSignature, rule: &str) -> Result<ReductionRule> {
    Ok(normalize_rule(sig.rule(rule)?))
}

/// `(source, target)` of a trace: the instantiated conclusion.
pub fn endpoints(sig: &ReductionSignature, tr: &Trace) -> Result<(Term, Term)> {
    let r = normalized_rule(sig, &tr.rule)?;
    instantiate_pair(sig, &r.conclusion, &tr.assignment)
}

pub fn source(sig: &ReductionSignature, tr: &Trace) -> Result<Term> {
    endpoints(sig, tr).map(|e| e.0)
}

pub fn target(sig: &ReductionSignature, tr: &Trace) -> Result<Term> {
    endpoints(sig, tr).map(|e| e.1)
}

/// Every violated trace invariant, recursively; empty iff valid.
pub fn validate_trace(sig: &ReductionSignature, tr: &Trace) -> Vec<String> {
    let mut out = Vec::new();
    check_trace(sig, tr, "root", &mut out);
    out
}

fn check_trace(sig: &ReductionSignature, tr: &Trace, at: &str, out: &mut Vec<String>) {
    let r = match normalized_rule(sig, &tr.rule) {
        Ok(r) => r,
        Err(e) => {
            out.push(format!("{at}: {e}"));
            return;
        }
    };
    let a = &tr.assignment;
    let n = a.context;
    let mut ok = true;
    for d in &r.metavars {
        match a.bindings.get(&d.name) {
            None => {
                out.push(format!("{at}: `{}` has no binding for `{}`", r.name, d.name));
                ok = false;
            }
            Some(b) => {
                if let Err(e) = sig.check_term(b, n + d.depth) {
                    out.push(format!("{at}: binding of `{}`: {e}", d.name));
                    ok = false;
                } else if sig.canonicalize(b, n + d.depth) != *b {
                    out.push(format!("{at}: binding of `{}` is not in canonical form", d.name));
                }
                if d.constraint == Constraint::OneHole && ok && !term::depends_on_top(b, n) {
                    out.push(format!("{at}: {}", Error::OneHole(d.name.clone())));
                }
            }
        }
    }
    for m in a.bindings.keys() {
        if r.metavar(m).is_none() {
            out.push(format!("{at}: `{}` has no metavariable `{m}`", r.name));
        }
    }
    if tr.premises.len() != r.hypotheses.len() {
        out.push(format!(
            "{at}: `{}` has {} hypotheses but the trace has {} premises",
            r.name,
            r.hypotheses.len(),
            tr.premises.len()
        ));
        return;
    }
    if !ok {
        return;
    }
    for (i, (h, p)) in r.hypotheses.iter().zip(&tr.premises).enumerate() {
        let here = format!("{at}/{}", i + 1);
        let ctx = n + h.depth;
        if p.context() != ctx {
            out.push(format!("{here}: premise lives in context {} instead of {ctx}", p.context()));
            continue;
        }
        let before = out.len();
        check_trace(sig, p, &here, out);
        if out.len() > before {
            continue;
        }
        match (instantiate_pair(sig, h, a), endpoints(sig, p)) {
            (Ok((hs, ht)), Ok((ps, pt))) => {
                if !sig.eq_modulo(&hs, &ps, ctx) {
                    out.push(format!("{here}: premise source {ps} differs from hypothesis source {hs}"));
                }
                if !sig.eq_modulo(&ht, &pt, ctx) {
                    out.push(format!("{here}: premise target {pt} differs from hypothesis target {ht}"));
                }
            }
            (Err(e), _) | (_, Err(e)) => out.push(format!("{here}: {e}")),
        }
    }
    if let Err(e) = endpoints(sig, tr) {
        out.push(format!("{at}: {e}"));
    }
}

/// The module action `tr⟨env⟩`: bindings are substituted under their own
/// fresh slots, premises under their hypothesis depth.
pub fn subst_trace(sig: &ReductionSignature, tr: &Trace, env: &SubstEnv) -> Result<Trace> {
    if tr.context() != env.source {
        return Err(Error::Scope(format!(
            "trace in context {} substituted by an environment from {}",
            tr.context(),
            env.source
        )));
    }
    let r = normalized_rule(sig, &tr.rule)?;
    let mut assignment = Assignment::new(env.target);
    for (m, b) in &tr.assignment.bindings {
        let k = r.metavar(m).ok_or_else(|| Error::UnboundMeta(m.clone()))?.depth;
        assignment.insert(m.clone(), sig.subst(b, &env.lift(k))?);
    }
    let premises = tr
        .premises
        .iter()
        .zip(&r.hypotheses)
        .map(|(p, h)| subst_trace(sig, p, &env.lift(h.depth)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Trace {
        rule: tr.rule.clone(),
        assignment,
        premises,
    })
}

/// A sequence of composable one-step traces (the star closure).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StarTrace {
    pub context: usize,
    pub source: Term,
    pub target: Term,
    pub steps: Vec<Trace>,
}

impl StarTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

pub fn star_refl(ctx: usize, t: Term) -> StarTrace {
    StarTrace {
        context: ctx,
        source: t.clone(),
        target: t,
        steps: Vec::new(),
    }
}

pub fn star_single(sig: &ReductionSignature, tr: Trace) -> Result<StarTrace> {
    let (source, target) = endpoints(sig, &tr)?;
    Ok(StarTrace {
        context: tr.context(),
        source,
        target,
        steps: vec![tr],
    })
}

pub fn star_compose(sig: &ReductionSignature, a: &StarTrace, b: &StarTrace) -> Result<StarTrace> {
    if a.context != b.context {
        return Err(Error::Composability(format!(
            "contexts {} and {} differ",
            a.context, b.context
        )));
    }
    if !sig.eq_modulo(&a.target, &b.source, a.context) {
        return Err(Error::Composability(format!("{} does not meet {}", a.target, b.source)));
    }
    let mut steps = a.steps.clone();
    steps.extend(b.steps.iter().cloned());
    Ok(StarTrace {
        context: a.context,
        source: a.source.clone(),
        target: b.target.clone(),
        steps,
    })
}

pub fn star_subst(sig: &ReductionSignature, s: &StarTrace, env: &SubstEnv) -> Result<StarTrace> {
    if s.context != env.source {
        return Err(Error::Scope(format!(
            "star trace in context {} substituted by an environment from {}",
            s.context, env.source
        )));
    }
    Ok(StarTrace {
        context: env.target,
        source: sig.subst(&s.source, env)?,
        target: sig.subst(&s.target, env)?,
        steps: s
            .steps
            .iter()
            .map(|t| subst_trace(sig, t, env))
            .collect::<Result<_>>()?,
    })
}

/// Checks every step, the composability of consecutive steps, and that the
/// recorded endpoints match the step boundaries.
pub fn validate_star(sig: &ReductionSignature, s: &StarTrace) -> Vec<String> {
    let mut out = Vec::new();
    let n = s.context;
    for (what, t) in [("source", &s.source), ("target", &s.target)] {
        if let Err(e) = sig.check_term(t, n) {
            out.push(format!("{what}: {e}"));
        }
    }
    if s.steps.is_empty() {
        if !sig.eq_modulo(&s.source, &s.target, n) {
            out.push("empty star trace with distinct endpoints".into());
        }
        return out;
    }
    let mut cur = s.source.clone();
    for (i, st) in s.steps.iter().enumerate() {
        if st.context() != n {
            out.push(format!("step {}: context {} instead of {n}", i + 1, st.context()));
            return out;
        }
        let errs = validate_trace(sig, st);
        if !errs.is_empty() {
            out.extend(errs.into_iter().map(|e| format!("step {}: {e}", i + 1)));
            return out;
        }
        let (a, b) = endpoints(sig, st).expect("validated");
        if !sig.eq_modulo(&cur, &a, n) {
            out.push(format!("step {}: starts at {a}, expected {cur}", i + 1));
        }
        cur = b;
    }
    if !sig.eq_modulo(&cur, &s.target, n) {
        out.push(format!("last step ends at {cur}, expected {}", s.target));
    }
    out
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceJson {
    pub rule: String,
    pub assignment: BTreeMap<String, String>,
    pub premises: Vec<TraceJson>,
    pub context: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarTraceJson {
    pub context: usize,
    pub source: String,
    pub target: String,
    pub steps: Vec<TraceJson>,
}

impl From<&Trace> for TraceJson {
    fn from(t: &Trace) -> Self {
        TraceJson {
            rule: t.rule.to_string(),
            assignment: t
                .assignment
                .bindings
                .iter()
                .map(|(m, b)| (m.to_string(), b.to_string()))
                .collect(),
            premises: t.premises.iter().map(TraceJson::from).collect(),
            context: t.context(),
        }
    }
}

impl TryFrom<&TraceJson> for Trace {
    type Error = Error;

    fn try_from(j: &TraceJson) -> Result<Self> {
        let mut assignment = Assignment::new(j.context);
        for (m, b) in &j.assignment {
            assignment.insert(name(m), term::parse_term(b)?);
        }
        Ok(Trace {
            rule: name(&j.rule),
            assignment,
            premises: j.premises.iter().map(Trace::try_from).collect::<Result<_>>()?,
        })
    }
}

impl From<&StarTrace> for StarTraceJson {
    fn from(s: &StarTrace) -> Self {
        StarTraceJson {
            context: s.context,
            source: s.source.to_string(),
            target: s.target.to_string(),
            steps: s.steps.iter().map(TraceJson::from).collect(),
        }
    }
}

impl TryFrom<&StarTraceJson> for StarTrace {
    type Error = Error;

    fn try_from(j: &StarTraceJson) -> Result<Self> {
        Ok(StarTrace {
            context: j.context,
            source: term::parse_term(&j.source)?,
            target: term::parse_term(&j.target)?,
            steps: j.steps.iter().map(Trace::try_from).collect::<Result<_>>()?,
        })
    }
}

pub fn trace_to_json(t: &Trace) -> String {
    serde_json::to_string_pretty(&TraceJson::from(t)).expect("trace serializes")
}

pub fn trace_from_json(s: &str) -> Result<Trace> {
    let j: TraceJson = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
    Trace::try_from(&j)
}

pub fn star_to_json(s: &StarTrace) -> String {
    serde_json::to_string_pretty(&StarTraceJson::from(s)).expect("star trace serializes")
}

pub fn star_from_json(s: &str) -> Result<StarTrace> {
    let j: StarTraceJson = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
    StarTrace::try_from(&j)
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &Trace, indent: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "{:indent$}{} [ctx {}]", "", t.rule, t.context())?;
            for (m, b) in &t.assignment.bindings {
                write!(f, " {m}={b}")?;
            }
            for p in &t.premises {
                writeln!(f)?;
                go(p, indent + 2, f)?;
            }
            Ok(())
        }
        go(self, 0, f)
    }
}
