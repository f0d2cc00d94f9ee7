//! Static checks on signatures and rule normalization.

use std::collections::BTreeSet;
use std::fmt;

use crate::signature::{
    Constraint, MetaVarDecl, ReductionRule, ReductionSignature, Template, TermPair,
};
use crate::template::check_template;
use crate::term::{name, Name};

/// How a signature is meant to be used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValidationMode {
    /// Rules must be matchable by [`crate::enumerate::enumerate_steps`]:
    /// substitution-free patterns with injective slot maps, normalized
    /// conclusions, and every metavariable determined by a pattern.
    Enumerable,
    /// Only well-formedness; such rules serve as specifications of
    /// actions (e.g. a substitution congruence) and are not searched.
    Schematic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub rule: Option<Name>,
    pub location: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rule {
            Some(r) => write!(f, "rule `{r}`, {}: {}", self.location, self.message),
            None => write!(f, "{}: {}", self.location, self.message),
        }
    }
}

pub fn validate_signature(sig: &ReductionSignature, mode: ValidationMode) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for op in &sig.monad.ops {
        if !seen.insert(op.name.clone()) {
            out.push(Diagnostic {
                rule: None,
                location: "ops".into(),
                message: format!("operation `{}` declared twice", op.name),
            });
        }
    }
    for eq in sig.equations.list() {
        let crate::signature::Equation::LayerCommutation(op) = eq;
        match sig.monad.op(&op) {
            None => out.push(Diagnostic {
                rule: None,
                location: "equations".into(),
                message: format!("commutation for unknown operation `{op}`"),
            }),
            Some(spec) if spec.binding_arities != [1, 0] => out.push(Diagnostic {
                rule: None,
                location: "equations".into(),
                message: format!("commuting operation `{op}` must have binding arities [1, 0]"),
            }),
            Some(_) => {}
        }
    }
    let mut rule_names = BTreeSet::new();
    for r in &sig.rules {
        if !rule_names.insert(r.name.clone()) {
            out.push(diag(r, "name", "rule declared twice".into()));
        }
        validate_rule(sig, r, mode, &mut out);
    }
    out
}

fn diag(r: &ReductionRule, location: &str, message: String) -> Diagnostic {
    Diagnostic {
        rule: Some(r.name.clone()),
        location: location.into(),
        message,
    }
}

fn pairs(r: &ReductionRule) -> impl Iterator<Item = (String, &TermPair)> {
    r.hypotheses
        .iter()
        .enumerate()
        .map(|(i, p)| (format!("hypothesis {}", i + 1), p))
        .chain(std::iter::once(("conclusion".to_string(), &r.conclusion)))
}

fn validate_rule(sig: &ReductionSignature, r: &ReductionRule, mode: ValidationMode, out: &mut Vec<Diagnostic>) {
    let mut names = BTreeSet::new();
    for d in &r.metavars {
        if !names.insert(d.name.clone()) {
            out.push(diag(r, "metavars", format!("metavariable `{}` declared twice", d.name)));
        }
        if d.constraint == Constraint::OneHole && d.depth != 1 {
            out.push(diag(r, "metavars", format!("onehole metavariable `{}` must have depth 1", d.name)));
        }
    }
    let before = out.len();
    for (loc, p) in pairs(r) {
        for (side, tpl) in [("lhs", &p.lhs), ("rhs", &p.rhs)] {
            if let Err(msg) = check_template(r, sig, tpl, p.depth) {
                out.push(diag(r, &format!("{loc} {side}"), msg));
            }
        }
    }
    if mode == ValidationMode::Schematic || out.len() > before {
        return;
    }

    if r.conclusion.depth != 0 {
        out.push(diag(
            r,
            "conclusion",
            format!("conclusion has depth {}; normalize the rule before enumerating", r.conclusion.depth),
        ));
    }
    let mut known: BTreeSet<Name> = BTreeSet::new();
    // Problems are reported once; the metavariables still count as known
    // so that one bad pattern does not cascade.
    let learn = |tpl: &Template, loc: &str, known: &mut BTreeSet<Name>, out: &mut Vec<Diagnostic>| {
        if tpl.contains_subst() {
            out.push(diag(r, loc, "meta-level substitution is not allowed in a pattern".into()));
        } else if let Some(m) = non_injective(tpl) {
            out.push(diag(r, loc, format!("metavariable `{m}` has a non-injective slot map in a pattern")));
        }
        let mut ms = Vec::new();
        tpl.metavars(&mut ms);
        known.extend(ms);
    };
    learn(&r.conclusion.lhs, "conclusion lhs", &mut known, out);
    for (i, h) in r.hypotheses.iter().enumerate() {
        let loc = format!("hypothesis {}", i + 1);
        let mut ms = Vec::new();
        h.lhs.metavars(&mut ms);
        for m in ms.iter().filter(|m| !known.contains(*m)) {
            out.push(diag(
                r,
                &format!("{loc} lhs"),
                format!("metavariable `{m}` is not determined before this hypothesis"),
            ));
        }
        let mut rs = Vec::new();
        h.rhs.metavars(&mut rs);
        if h.rhs.contains_subst() {
            // Only usable as a check once everything is known.
            for m in rs.iter().filter(|m| !known.contains(*m)) {
                out.push(diag(
                    r,
                    &format!("{loc} rhs"),
                    format!("metavariable `{m}` only occurs under a meta-level substitution"),
                ));
            }
        } else {
            learn(&h.rhs, &format!("{loc} rhs"), &mut known, out);
        }
    }
    let mut cs = Vec::new();
    r.conclusion.rhs.metavars(&mut cs);
    for m in cs.iter().filter(|m| !known.contains(*m)) {
        out.push(diag(
            r,
            "conclusion rhs",
            format!("metavariable `{m}` is not determined by any pattern"),
        ));
    }
}

fn non_injective(tpl: &Template) -> Option<Name> {
    match tpl {
        Template::Var(_) => None,
        Template::Op(_, args) => args.iter().find_map(|(_, a)| non_injective(a)),
        Template::Meta(m, map) => {
            let set: BTreeSet<_> = map.iter().collect();
            (set.len() != map.len()).then(|| m.clone())
        }
        Template::Subst(body, args) => non_injective(body).or_else(|| args.iter().find_map(non_injective)),
    }
}

/// Brings the conclusion to depth 0: one new depth-0 metavariable per fresh
/// slot of the conclusion, substituted for that slot on both sides.
/// Hypotheses are kept as they are.
pub fn normalize_rule(r: &ReductionRule) -> ReductionRule {
    let n = r.conclusion.depth;
    if n == 0 {
        return r.clone();
    }
    let mut metavars = r.metavars.clone();
    let mut fresh = Vec::with_capacity(n);
    let mut counter = 0;
    while fresh.len() < n {
        let candidate = format!("_fresh{counter}");
        counter += 1;
        if r.metavar(&candidate).is_none() {
            metavars.push(MetaVarDecl::new(&candidate, 0));
            fresh.push(Template::Meta(name(&candidate), vec![]));
        }
    }
    let wrap = |t: &Template| Template::Subst(Box::new(t.clone()), fresh.clone());
    ReductionRule {
        name: r.name.clone(),
        metavars,
        hypotheses: r.hypotheses.clone(),
        conclusion: TermPair::new(0, wrap(&r.conclusion.lhs), wrap(&r.conclusion.rhs)),
    }
}

/// Names of the metavariables that [`normalize_rule`] adds to `r`.
pub fn normalization_metavars(r: &ReductionRule) -> Vec<Name> {
    let normalized = normalize_rule(r);
    normalized.metavars[r.metavars.len()..]
        .iter()
        .map(|d| d.name.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::MonadSignature;
    use crate::term::OpSpec;

    fn sig_with(rule: ReductionRule) -> ReductionSignature {
        ReductionSignature::new(
            "t",
            MonadSignature::new(vec![OpSpec::new("app", &[0, 0]), OpSpec::new("abs", &[1])]),
            vec![],
            vec![rule],
        )
    }

    fn refl() -> ReductionRule {
        ReductionRule {
            name: name("refl"),
            metavars: vec![MetaVarDecl::new("T", 0)],
            hypotheses: vec![],
            conclusion: TermPair::new(0, Template::meta("T", &[]), Template::meta("T", &[])),
        }
    }

    #[test]
    fn undeclared_metavariable_is_reported_once() {
        let mut r = refl();
        r.conclusion.rhs = Template::meta("W", &[]);
        let ds = validate_signature(&sig_with(r), ValidationMode::Schematic);
        assert_eq!(ds.len(), 1, "{ds:?}");
        assert!(ds[0].message.contains("`W`"));
    }

    #[test]
    fn slot_map_outside_ambient_depth_is_reported_once() {
        let mut r = refl();
        r.metavars[0].depth = 1;
        r.conclusion = TermPair::new(
            0,
            Template::op("abs", vec![(1, Template::meta("T", &[1]))]),
            Template::op("abs", vec![(1, Template::meta("T", &[0]))]),
        );
        let ds = validate_signature(&sig_with(r), ValidationMode::Schematic);
        assert_eq!(ds.len(), 1, "{ds:?}");
    }

    #[test]
    fn substitution_in_a_pattern_is_rejected_for_enumeration_only() {
        let mut r = refl();
        r.conclusion.lhs = Template::Subst(Box::new(Template::meta("T", &[])), vec![]);
        let sig = sig_with(r);
        assert!(validate_signature(&sig, ValidationMode::Schematic).is_empty());
        let ds = validate_signature(&sig, ValidationMode::Enumerable);
        assert_eq!(ds.len(), 1);
        assert_eq!(ds[0].rule.as_deref(), Some("refl"));
    }

    #[test]
    fn normalization_is_identity_at_depth_zero() {
        assert_eq!(normalize_rule(&refl()), refl());
    }

    #[test]
    fn normalization_adds_one_metavariable_per_slot() {
        let xi = ReductionRule {
            name: name("xi"),
            metavars: vec![MetaVarDecl::new("T", 0), MetaVarDecl::new("_fresh0", 0)],
            hypotheses: vec![TermPair::new(0, Template::meta("T", &[]), Template::meta("_fresh0", &[]))],
            conclusion: TermPair::new(1, Template::meta("T", &[]), Template::meta("_fresh0", &[])),
        };
        let n = normalize_rule(&xi);
        assert_eq!(n.conclusion.depth, 0);
        assert_eq!(normalization_metavars(&xi), vec![name("_fresh1")]);
        assert_eq!(n.hypotheses, xi.hypotheses);
    }
}
