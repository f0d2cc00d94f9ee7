//! Enumeration: terms up to a depth, one-step traces from a term, and
//! bounded search in the star closure.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::Result;
use crate::signature::{Assignment, ReductionSignature, Template};
use crate::template::{eval_template, Matcher};
use crate::term::{Arg, Term};
use crate::trace::{endpoints, star_refl, star_single, StarTrace, Trace};
use crate::validate::normalize_rule;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Steps {
    /// Deduplicated and sorted.
    pub traces: Vec<Trace>,
    /// Some search was cut short (fuel or cluster size); `traces` may be
    /// incomplete.
    pub truncated: bool,
}

/// All one-step traces whose source is `t` (modulo equations).
///
/// Rules are matched by their conclusion lhs; hypotheses are then solved
/// left to right by recursively enumerating premises from the
/// instantiated hypothesis source. Recursing on a source that is not
/// smaller than `t` costs one unit of `fuel`.
pub fn enumerate_steps(sig: &ReductionSignature, ctx: usize, t: &Term, fuel: usize) -> Result<Steps> {
    sig.check_term(t, ctx)?;
    let t = sig.canonicalize(t, ctx);
    let mut out = Steps::default();
    let mut seen = BTreeSet::new();
    for rule in &sig.rules {
        let rule = normalize_rule(rule);
        let mut m = Matcher::new(sig, &rule);
        let starts = m.match_template(&rule.conclusion.lhs, &t, 0, &Assignment::new(ctx))?;
        out.truncated |= m.truncated;
        let mut partial: Vec<(Assignment, Vec<Trace>)> = starts.into_iter().map(|a| (a, vec![])).collect();
        for h in &rule.hypotheses {
            let mut next = Vec::new();
            let hctx = ctx + h.depth;
            for (a, premises) in partial {
                let src = eval_template(sig, &h.lhs, &a, h.depth)?;
                let sub_fuel = if src.size() < t.size() {
                    fuel
                } else if fuel == 0 {
                    out.truncated = true;
                    continue;
                } else {
                    fuel - 1
                };
                let sub = enumerate_steps(sig, hctx, &src, sub_fuel)?;
                out.truncated |= sub.truncated;
                for p in sub.traces {
                    let (_, tgt) = endpoints(sig, &p)?;
                    let extended = if h.rhs.contains_subst() {
                        let want = eval_template(sig, &h.rhs, &a, h.depth)?;
                        if sig.eq_modulo(&want, &tgt, hctx) {
                            vec![a.clone()]
                        } else {
                            vec![]
                        }
                    } else {
                        let ext = m.match_template(&h.rhs, &tgt, h.depth, &a)?;
                        out.truncated |= m.truncated;
                        ext
                    };
                    for a2 in extended {
                        let mut ps = premises.clone();
                        ps.push(p.clone());
                        next.push((a2, ps));
                    }
                }
            }
            partial = next;
        }
        for (a, premises) in partial {
            let tr = Trace {
                rule: rule.name.clone(),
                assignment: a,
                premises,
            };
            if seen.insert(tr.clone()) {
                out.traces.push(tr);
            }
        }
    }
    out.traces.sort();
    Ok(out)
}

/// All canonical terms of the signature in context `ctx` with depth at
/// most `max_depth`, sorted by depth and then by the term order.
pub fn enumerate_terms(sig: &ReductionSignature, ctx: usize, max_depth: usize) -> Vec<Term> {
    let mut memo = BTreeMap::new();
    let all = terms_upto(sig, ctx, max_depth, &mut memo);
    let mut canon: Vec<Term> = all.iter().map(|t| sig.canonicalize(t, ctx)).collect::<BTreeSet<_>>().into_iter().collect();
    canon.sort_by(|a, b| a.depth().cmp(&b.depth()).then_with(|| a.cmp(b)));
    canon
}

fn terms_upto(sig: &ReductionSignature, ctx: usize, d: usize, memo: &mut BTreeMap<(usize, usize), Vec<Term>>) -> Vec<Term> {
    if d == 0 {
        return Vec::new();
    }
    if let Some(v) = memo.get(&(ctx, d)) {
        return v.clone();
    }
    let mut out: Vec<Term> = (0..ctx).map(Term::Var).collect();
    for op in &sig.monad.ops {
        let mut combos: Vec<Vec<Arg>> = vec![vec![]];
        for &b in &op.binding_arities {
            let choices = terms_upto(sig, ctx + b, d - 1, memo);
            combos = combos
                .into_iter()
                .flat_map(|prefix| {
                    choices.iter().map(move |c| {
                        let mut p = prefix.clone();
                        p.push(Arg::new(b, c.clone()));
                        p
                    })
                })
                .collect();
        }
        out.extend(combos.into_iter().map(|args| Term::Op(op.name.clone(), args)));
    }
    memo.insert((ctx, d), out.clone());
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    /// A shortest star trace to the goal, if one was found.
    pub trace: Option<StarTrace>,
    /// The whole reachable set within the bound was explored without any
    /// truncation, so a `None` trace is a proof of unreachability.
    pub exhaustive: bool,
    pub explored: usize,
}

/// Breadth-first search for a star trace from `from` to `goal` of at most
/// `max_steps` steps.
pub fn star_search(sig: &ReductionSignature, ctx: usize, from: &Term, goal: &Term, max_steps: usize, fuel: usize) -> Result<SearchResult> {
    sig.check_term(from, ctx)?;
    sig.check_term(goal, ctx)?;
    let from = sig.canonicalize(from, ctx);
    let goal = sig.canonicalize(goal, ctx);
    let mut exhaustive = true;
    let mut parent: BTreeMap<Term, Option<(Term, Trace)>> = BTreeMap::new();
    parent.insert(from.clone(), None);
    let mut queue = VecDeque::from([(from.clone(), 0usize)]);
    let mut found = from == goal;
    while let Some((t, dist)) = queue.pop_front() {
        if found {
            break;
        }
        let steps = enumerate_steps(sig, ctx, &t, fuel)?;
        exhaustive &= !steps.truncated;
        if dist == max_steps {
            if !steps.traces.is_empty() {
                exhaustive = false;
            }
            continue;
        }
        for tr in steps.traces {
            let (_, next) = endpoints(sig, &tr)?;
            if parent.contains_key(&next) {
                continue;
            }
            parent.insert(next.clone(), Some((t.clone(), tr)));
            if next == goal {
                found = true;
                break;
            }
            queue.push_back((next, dist + 1));
        }
    }
    let explored = parent.len();
    if !found {
        return Ok(SearchResult {
            trace: None,
            exhaustive,
            explored,
        });
    }
    let mut steps = Vec::new();
    let mut cur = goal.clone();
    while let Some(Some((prev, tr))) = parent.get(&cur) {
        steps.push(tr.clone());
        cur = prev.clone();
    }
    steps.reverse();
    let mut star = star_refl(ctx, from);
    for s in steps {
        let one = star_single(sig, s)?;
        star = crate::trace::star_compose(sig, &star, &one)?;
    }
    Ok(SearchResult {
        trace: Some(star),
        exhaustive,
        explored,
    })
}

/// Whether a template is a bare metavariable with the identity slot map.
pub fn is_bare_meta(t: &Template) -> bool {
    matches!(t, Template::Meta(_, map) if map.iter().enumerate().all(|(i, &j)| i == j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_signature;
    use crate::term::parse_term;

    const WH: &str = "(signature whbeta (ops (app 0 0) (abs 1))
      (rule beta (metavars (T 1) (U 0))
        (concl 0 (app (abs (bind 1 (meta T 0))) (meta U)) (msubst (meta T 0) (meta U))))
      (rule appl-cong (metavars (T 0) (T2 0) (U 0))
        (hyp 0 (meta T) (meta T2))
        (concl 0 (app (meta T) (meta U)) (app (meta T2) (meta U)))))";

    #[test]
    fn counts_terms() {
        let sig = parse_signature(WH).unwrap();
        assert_eq!(enumerate_terms(&sig, 0, 1).len(), 0);
        // x; app(x, x); abs(x), abs(y)
        assert_eq!(enumerate_terms(&sig, 1, 2).len(), 4);
    }

    #[test]
    fn weak_head_steps() {
        let sig = parse_signature(WH).unwrap();
        let t = parse_term("(app (app (abs (bind 1 (var 1))) (var 0)) (var 0))").unwrap();
        let steps = enumerate_steps(&sig, 1, &t, 2).unwrap();
        assert_eq!(steps.traces.len(), 1);
        assert!(!steps.truncated);
        assert_eq!(endpoints(&sig, &steps.traces[0]).unwrap().1, parse_term("(app (var 0) (var 0))").unwrap());
    }

    #[test]
    fn search_finds_shortest_path() {
        let sig = parse_signature(WH).unwrap();
        let t = parse_term("(app (app (abs (bind 1 (var 1))) (abs (bind 1 (var 1)))) (var 0))").unwrap();
        let r = star_search(&sig, 1, &t, &Term::Var(0), 5, 2).unwrap();
        assert_eq!(r.trace.unwrap().len(), 2);
    }
}
