//! Seeded random terms, substitutions and traces.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::enumerate::enumerate_steps;
use crate::signature::{Assignment, Constraint, ReductionRule, ReductionSignature, Template};
use crate::term::{depends_on_top, Arg, SubstEnv, Term};
use crate::trace::{endpoints, validate_trace, Trace};
use crate::validate::normalize_rule;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Derives an independent stream for instance `index` of `label`.
pub fn rng_for(seed: u64, label: &str, index: u64) -> Rng64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes().chain(index.to_le_bytes()) {
        h = (h ^ b as u64).wrapping_mul(0x100_0000_01b3);
    }
    rng(seed ^ h)
}

/// A random canonical term of depth at most `depth`, if one exists.
pub fn random_term(sig: &ReductionSignature, ctx: usize, depth: usize, r: &mut Rng64) -> Option<Term> {
    if depth == 0 {
        return None;
    }
    let ops: Vec<_> = sig
        .monad
        .ops
        .iter()
        .filter(|o| depth > 1 || o.binding_arities.is_empty())
        .collect();
    let var_weight = if ctx > 0 { 2 } else { 0 };
    let total = var_weight + 2 * ops.len();
    if total == 0 {
        return None;
    }
    let pick = r.gen_range(0..total);
    if pick < var_weight {
        return Some(Term::Var(r.gen_range(0..ctx)));
    }
    let op = ops[(pick - var_weight) / 2];
    let mut args = Vec::with_capacity(op.binding_arities.len());
    for &b in &op.binding_arities {
        args.push(Arg::new(b, random_term(sig, ctx + b, depth - 1, r)?));
    }
    Some(sig.mk_op(&op.name, args, ctx))
}

/// A random substitution from `source` to `target` whose images have depth
/// at most `depth`; `None` if some image cannot be built.
pub fn random_env(sig: &ReductionSignature, source: usize, target: usize, depth: usize, r: &mut Rng64) -> Option<SubstEnv> {
    let images = (0..source)
        .map(|_| random_term(sig, target, depth, r))
        .collect::<Option<Vec<_>>>()?;
    SubstEnv::new(target, images).ok()
}

/// The rules of `sig` that enumeration can match.
pub fn searchable(sig: &ReductionSignature) -> ReductionSignature {
    let mut s = sig.clone();
    s.rules.retain(|r| !r.conclusion.lhs.contains_subst() && r.hypotheses.iter().all(|h| !h.lhs.contains_subst()));
    s
}

/// A random valid one-step trace in context `ctx`.
///
/// Rules that enumeration can match are sampled by enumerating the steps of
/// random terms. The others are instantiated directly: premises of
/// hypotheses between bare metavariables are sampled recursively (at most
/// `height` levels), every other metavariable gets a random term.
pub fn random_trace(sig: &ReductionSignature, ctx: usize, term_depth: usize, height: usize, r: &mut Rng64) -> Option<Trace> {
    let search = searchable(sig);
    let schematic: Vec<&ReductionRule> = sig.rules.iter().filter(|x| search.rule(&x.name).is_err()).collect();
    for _ in 0..64 {
        if height > 0 && !schematic.is_empty() && r.gen_bool(0.4) {
            let rule = schematic.choose(r)?;
            if let Some(t) = instantiate(sig, rule, ctx, term_depth, height, r) {
                return Some(t);
            }
            continue;
        }
        if search.rules.is_empty() {
            continue;
        }
        let t = random_term(sig, ctx, term_depth, r)?;
        let steps = enumerate_steps(&search, ctx, &t, 2).ok()?;
        if let Some(tr) = steps.traces.choose(r) {
            return Some(tr.clone());
        }
    }
    None
}

fn instantiate(sig: &ReductionSignature, rule: &ReductionRule, ctx: usize, term_depth: usize, height: usize, r: &mut Rng64) -> Option<Trace> {
    let rule = normalize_rule(rule);
    let mut a = Assignment::new(ctx);
    let mut premises = Vec::new();
    for h in &rule.hypotheses {
        let bare = |t: &Template| match t {
            Template::Meta(m, map) if *map == (0..h.depth).collect::<Vec<_>>() => Some(m.clone()),
            _ => None,
        };
        let (x, y) = (bare(&h.lhs)?, bare(&h.rhs)?);
        let p = random_trace(sig, ctx + h.depth, term_depth, height - 1, r)?;
        let (s, t) = endpoints(sig, &p).ok()?;
        a.insert(x, s);
        a.insert(y, t);
        premises.push(p);
    }
    for d in &rule.metavars {
        if a.bindings.contains_key(&d.name) {
            continue;
        }
        let n = ctx + d.depth;
        let t = (0..16)
            .filter_map(|_| random_term(sig, n, term_depth, r))
            .find(|t| d.constraint != Constraint::OneHole || depends_on_top(t, n - 1))?;
        a.insert(d.name.clone(), t);
    }
    let tr = Trace {
        rule: rule.name.clone(),
        assignment: a,
        premises,
    };
    validate_trace(sig, &tr).is_empty().then_some(tr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn same_seed_same_samples() {
        let sig = corpus::load("lcex").unwrap();
        let a: Vec<_> = (0..20).map(|i| random_term(&sig, 2, 4, &mut rng_for(7, "t", i))).collect();
        let b: Vec<_> = (0..20).map(|i| random_term(&sig, 2, 4, &mut rng_for(7, "t", i))).collect();
        assert_eq!(a, b);
        for t in a.into_iter().flatten() {
            assert!(t.depth() <= 4);
            assert_eq!(sig.canonicalize(&t, 2), t);
        }
    }

    #[test]
    fn schematic_rules_are_sampled_validly() {
        let sig = corpus::load("onecong").unwrap();
        let mut r = rng(3);
        let traces: Vec<_> = (0..40).filter_map(|_| random_trace(&sig, 1, 3, 2, &mut r)).collect();
        assert!(traces.len() > 30);
        assert!(traces.iter().any(|t| t.rule.as_ref() == "subst-cong"));
        for t in &traces {
            assert!(validate_trace(&sig, t).is_empty());
        }
    }
}
