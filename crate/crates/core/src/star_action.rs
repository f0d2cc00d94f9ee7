//! Actions of congruence-shaped rules in a star closure, and the
//! congruence for unary substitution on congruent β.
//!
//! A rule whose hypotheses are all of the form `A_j ~> B_j` (bare
//! metavariables) acts on sequences of steps by threading: the steps of the
//! `i`-th premise are lifted one at a time through a "shaped" copy of the
//! rule that keeps only hypothesis `i`, with the earlier hypotheses already
//! at their targets and the later ones still at their sources. Each shaped
//! rule must exist (up to renaming of metavariables) in the target
//! signature.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::signature::{Assignment, MetaVarDecl, ReductionRule, ReductionSignature, Template, TermPair};
use crate::template::eval_template;
use crate::term::{name, rename, Name, SubstEnv, Term};
use crate::trace::{endpoints, star_refl, star_subst, StarTrace, Trace};
use crate::validate::normalize_rule;

/// Renaming of metavariables under which two rules coincide.
pub fn alpha_equivalence(a: &ReductionRule, b: &ReductionRule) -> Option<BTreeMap<Name, Name>> {
    if a.hypotheses.len() != b.hypotheses.len() || a.metavars.len() != b.metavars.len() {
        return None;
    }
    let mut map = BTreeMap::new();
    let pairs = a.hypotheses.iter().zip(&b.hypotheses).chain([(&a.conclusion, &b.conclusion)]);
    for (p, q) in pairs {
        if p.depth != q.depth || !same_shape(&p.lhs, &q.lhs, &mut map) || !same_shape(&p.rhs, &q.rhs, &mut map) {
            return None;
        }
    }
    let mut images: Vec<&Name> = map.values().collect();
    images.sort();
    images.dedup();
    if images.len() != map.len() || map.len() != a.metavars.len() {
        return None;
    }
    for d in &a.metavars {
        let e = b.metavar(map.get(&d.name)?)?;
        if (d.depth, d.constraint) != (e.depth, e.constraint) {
            return None;
        }
    }
    Some(map)
}

fn same_shape(x: &Template, y: &Template, map: &mut BTreeMap<Name, Name>) -> bool {
    match (x, y) {
        (Template::Var(i), Template::Var(j)) => i == j,
        (Template::Op(o, xs), Template::Op(p, ys)) => {
            o == p
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|((b, s), (c, t))| b == c && same_shape(s, t, map))
        }
        (Template::Meta(m, f), Template::Meta(n, g)) => {
            f == g && map.entry(m.clone()).or_insert_with(|| n.clone()) == n
        }
        (Template::Subst(s, xs), Template::Subst(t, ys)) => {
            xs.len() == ys.len() && same_shape(s, t, map) && xs.iter().zip(ys).all(|(s, t)| same_shape(s, t, map))
        }
        _ => false,
    }
}

/// The `(A_j, B_j)` metavariable names of every hypothesis, if the rule is
/// congruence-shaped.
fn hypothesis_metas(rule: &ReductionRule) -> Option<Vec<(Name, Name)>> {
    let mut out: Vec<(Name, Name)> = Vec::new();
    for h in &rule.hypotheses {
        let bare = |t: &Template| {
            let (m, map) = t.as_bare_meta()?;
            let identity = map.len() == h.depth && map.iter().enumerate().all(|(i, &j)| i == j);
            (identity && rule.metavar(m)?.depth == h.depth).then(|| m.clone())
        };
        let (a, b) = (bare(&h.lhs)?, bare(&h.rhs)?);
        if a == b || out.iter().any(|(x, y)| [x, y].contains(&&a) || [x, y].contains(&&b)) {
            return None;
        }
        out.push((a, b));
    }
    Some(out)
}

/// Rule `rule` restricted to hypothesis `i`; see the module docs.
pub fn shaped_rule(rule: &ReductionRule, i: usize) -> Option<ReductionRule> {
    let hs = hypothesis_metas(rule)?;
    let before: BTreeMap<Name, Name> = hs[..i].iter().map(|(a, b)| (a.clone(), b.clone())).collect();
    let after: BTreeMap<Name, Name> = hs[i + 1..].iter().map(|(a, b)| (b.clone(), a.clone())).collect();
    let metavars = rule
        .metavars
        .iter()
        .filter(|d| !before.contains_key(&d.name) && !after.contains_key(&d.name))
        .cloned()
        .collect();
    let lhs = rule.conclusion.lhs.map_metas(&|m| before.get(m).cloned().unwrap_or_else(|| m.clone()));
    let rhs = rule.conclusion.rhs.map_metas(&|m| after.get(m).cloned().unwrap_or_else(|| m.clone()));
    Some(ReductionRule {
        name: name(&format!("{}#{i}", rule.name)),
        metavars,
        hypotheses: rule.hypotheses.get(i).cloned().into_iter().collect(),
        conclusion: TermPair::new(rule.conclusion.depth, lhs, rhs),
    })
}

fn realize(target: &ReductionSignature, shaped: &ReductionRule) -> Result<(Name, BTreeMap<Name, Name>)> {
    let shaped = normalize_rule(shaped);
    target
        .rules
        .iter()
        .find_map(|r| alpha_equivalence(&shaped, &normalize_rule(r)).map(|m| (r.name.clone(), m)))
        .ok_or_else(|| Error::NoRealization {
            target: target.name.clone(),
            what: format!("the shape of `{}`", shaped.name),
        })
}

/// Lifts premises given as star traces of `target` through a
/// congruence-shaped `rule`, producing a star trace of `target` between
/// the instantiated conclusion endpoints. `a` assigns every metavariable
/// of the (normalized) rule.
pub fn lift_action_to_star(
    target: &ReductionSignature,
    rule: &ReductionRule,
    a: &Assignment,
    premises: &[StarTrace],
) -> Result<StarTrace> {
    let rule = normalize_rule(rule);
    if premises.len() != rule.hypotheses.len() {
        return Err(Error::InvalidTrace(format!(
            "`{}` has {} hypotheses, got {} premises",
            rule.name,
            rule.hypotheses.len(),
            premises.len()
        )));
    }
    let hs = hypothesis_metas(&rule).ok_or_else(|| Error::NoRealization {
        target: target.name.clone(),
        what: format!("`{}`, whose hypotheses are not between bare metavariables", rule.name),
    })?;
    let n = a.context;
    let source = eval_template(target, &rule.conclusion.lhs, a, 0)?;
    let tgt = eval_template(target, &rule.conclusion.rhs, a, 0)?;
    let mut steps = Vec::new();
    if rule.hypotheses.is_empty() {
        let (tname, map) = realize(target, &rule)?;
        steps.push(Trace {
            rule: tname,
            assignment: rename_assignment(a, &map),
            premises: vec![],
        });
    }
    for (i, m) in premises.iter().enumerate() {
        if m.steps.is_empty() {
            continue;
        }
        let shaped = shaped_rule(&rule, i).expect("congruence-shaped");
        let (tname, map) = realize(target, &shaped)?;
        let (ai, bi) = &hs[i];
        // A_j for j < i has reached B_j; B_j for j > i is still A_j.
        let mut cur = Assignment::new(n);
        for d in &shaped.metavars {
            cur.insert(d.name.clone(), a.get(&d.name)?.clone());
        }
        for s in &m.steps {
            let (x, y) = endpoints(target, s)?;
            let mut here = cur.clone();
            here.insert(ai.clone(), x);
            here.insert(bi.clone(), y);
            steps.push(Trace {
                rule: tname.clone(),
                assignment: rename_assignment(&here, &map),
                premises: vec![s.clone()],
            });
        }
    }
    Ok(StarTrace {
        context: n,
        source,
        target: tgt,
        steps,
    })
}

fn rename_assignment(a: &Assignment, map: &BTreeMap<Name, Name>) -> Assignment {
    let mut out = Assignment::new(a.context);
    for (m, t) in &a.bindings {
        if let Some(m2) = map.get(m) {
            out.insert(m2.clone(), t.clone());
        }
    }
    out
}

/// The synthetic congruence of `op` in all its arguments at once:
/// `A0 ~> B0, ..., Ak ~> Bk ⊢ op(A0..Ak) ~> op(B0..Bk)`.
pub fn cong_all(op: &str, binding_arities: &[usize]) -> ReductionRule {
    let id = |b: usize| (0..b).collect::<Vec<_>>();
    let mut metavars = Vec::new();
    let mut hypotheses = Vec::new();
    let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
    for (j, &b) in binding_arities.iter().enumerate() {
        let (a, bb) = (format!("A{j}"), format!("B{j}"));
        metavars.push(MetaVarDecl::new(&a, b));
        metavars.push(MetaVarDecl::new(&bb, b));
        hypotheses.push(TermPair::new(b, Template::meta(&a, &id(b)), Template::meta(&bb, &id(b))));
        lhs.push((b, Template::meta(&a, &id(b))));
        rhs.push((b, Template::meta(&bb, &id(b))));
    }
    ReductionRule {
        name: name(&format!("cong-{op}")),
        metavars,
        hypotheses,
        conclusion: TermPair::new(0, Template::op(op, lhs), Template::op(op, rhs)),
    }
}

/// The congruence for unary substitution in the star closure of
/// `target`: given `u` in context `n + 1` and a star trace `m` in context
/// `n`, a star trace from `u<n := src m>` to `u<n := tgt m>`.
///
/// By recursion on `u`: the substituted variable gives `m` itself, other
/// variables give reflexivity, and an operation node lifts the recursive
/// results for its arguments through the operation's congruences, left to
/// right.
pub fn subst_cong_star(target: &ReductionSignature, u: &Term, n: usize, m: &StarTrace) -> Result<StarTrace> {
    if m.context != n {
        return Err(Error::Scope(format!("star trace in context {} used in context {n}", m.context)));
    }
    match u {
        Term::Var(i) if *i == n => Ok(m.clone()),
        Term::Var(i) if *i < n => Ok(star_refl(n, Term::Var(*i))),
        Term::Var(i) => Err(Error::Scope(format!("variable {i} outside context {}", n + 1))),
        Term::Op(op, args) => {
            let arities: Vec<usize> = args.iter().map(|a| a.bound).collect();
            let rule = cong_all(op, &arities);
            let mut a = Assignment::new(n);
            let mut premises = Vec::with_capacity(args.len());
            for (j, arg) in args.iter().enumerate() {
                let b = arg.bound;
                // Move the substituted variable above the argument's binders.
                let map: Vec<usize> = (0..n + 1 + b)
                    .map(|l| match l {
                        l if l < n => l,
                        l if l == n => n + b,
                        l => l - 1,
                    })
                    .collect();
                let body = rename(&arg.body, &map, n + 1 + b)?;
                let weakened = star_subst(target, m, &SubstEnv::from_renaming(&(0..n).collect::<Vec<_>>(), n + b)?)?;
                let r = subst_cong_star(target, &body, n + b, &weakened)?;
                a.insert(name(&format!("A{j}")), r.source.clone());
                a.insert(name(&format!("B{j}")), r.target.clone());
                premises.push(r);
            }
            lift_action_to_star(target, &rule, &a, &premises)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_signature;
    use crate::term::{parse_term, subst};
    use crate::trace::{star_single, validate_star};

    const CONG: &str = "(signature congbeta (ops (app 0 0) (abs 1))
      (rule beta (metavars (T 1) (U 0))
        (concl 0 (app (abs (bind 1 (meta T 0))) (meta U)) (msubst (meta T 0) (meta U))))
      (rule abs-cong (metavars (T 1) (T' 1))
        (hyp 1 (meta T 0) (meta T' 0))
        (concl 0 (abs (bind 1 (meta T 0))) (abs (bind 1 (meta T' 0)))))
      (rule appl-cong (metavars (T 0) (T' 0) (U 0))
        (hyp 0 (meta T) (meta T'))
        (concl 0 (app (meta T) (meta U)) (app (meta T') (meta U))))
      (rule appr-cong (metavars (T 0) (U 0) (U' 0))
        (hyp 0 (meta U) (meta U'))
        (concl 0 (app (meta T) (meta U)) (app (meta T) (meta U')))))";

    fn redex_step(sig: &ReductionSignature) -> StarTrace {
        // (λx.x) y ~> y in context 1
        let a = Assignment::new(1).with("T", Term::Var(1)).with("U", Term::Var(0));
        star_single(sig, Trace::new("beta", a, vec![])).unwrap()
    }

    #[test]
    fn shaped_rules_of_the_full_congruence_are_the_one_sided_ones() {
        let sig = parse_signature(CONG).unwrap();
        let all = cong_all("app", &[0, 0]);
        assert_eq!(realize(&sig, &shaped_rule(&all, 0).unwrap()).unwrap().0.as_ref(), "appl-cong");
        assert_eq!(realize(&sig, &shaped_rule(&all, 1).unwrap()).unwrap().0.as_ref(), "appr-cong");
        assert_eq!(realize(&sig, &cong_all("abs", &[1])).unwrap().0.as_ref(), "abs-cong");
    }

    #[test]
    fn substituted_variable_gives_the_premise() {
        let sig = parse_signature(CONG).unwrap();
        let m = redex_step(&sig);
        assert_eq!(subst_cong_star(&sig, &Term::Var(1), 1, &m).unwrap(), m);
    }

    #[test]
    fn weakened_term_gives_reflexivity() {
        let sig = parse_signature(CONG).unwrap();
        let m = redex_step(&sig);
        let u = parse_term("(abs (bind 1 (app (var 0) (var 2))))").unwrap();
        let r = subst_cong_star(&sig, &u, 1, &m).unwrap();
        assert!(r.is_empty());
        assert_eq!(r.source, parse_term("(abs (bind 1 (app (var 0) (var 1))))").unwrap());
    }

    #[test]
    fn two_occurrences_reduce_in_sequence() {
        let sig = parse_signature(CONG).unwrap();
        let m = redex_step(&sig);
        let u = parse_term("(app (var 1) (abs (bind 1 (var 1))))").unwrap();
        let r = subst_cong_star(&sig, &u, 1, &m).unwrap();
        assert_eq!(r.len(), 2);
        assert!(validate_star(&sig, &r).is_empty(), "{:?}", validate_star(&sig, &r));
        let at = |x: &Term| subst(&u, &SubstEnv::single(1, x.clone())).unwrap();
        assert_eq!(r.source, at(&m.source));
        assert_eq!(r.target, at(&m.target));
    }
}
