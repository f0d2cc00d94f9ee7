//! The built-in signatures and golden checks that ship with the crate.

use serde::{Deserialize, Serialize};

use crate::dsl::parse_signature;
use crate::error::{Error, Result};
use crate::signature::ReductionSignature;
use crate::enumerate::{enumerate_steps, star_search};
use crate::term::Term;
use crate::trace::{target, validate_star, StarTrace, StarTraceJson};
use crate::validate::{validate_signature, ValidationMode};

pub struct CorpusEntry {
    pub name: &'static str,
    pub source: &'static str,
    pub mode: ValidationMode,
    pub summary: &'static str,
}

pub const ENTRIES: &[CorpusEntry] = &[
    CorpusEntry {
        name: "lc",
        source: include_str!("../data/lc.sig"),
        mode: ValidationMode::Enumerable,
        summary: "lambda-calculus syntax, no rules",
    },
    CorpusEntry {
        name: "topbeta",
        source: include_str!("../data/topbeta.sig"),
        mode: ValidationMode::Enumerable,
        summary: "beta at the root only",
    },
    CorpusEntry {
        name: "whbeta",
        source: include_str!("../data/whbeta.sig"),
        mode: ValidationMode::Enumerable,
        summary: "weak-head beta",
    },
    CorpusEntry {
        name: "congbeta",
        source: include_str!("../data/congbeta.sig"),
        mode: ValidationMode::Enumerable,
        summary: "beta closed under all congruences",
    },
    CorpusEntry {
        name: "parbeta",
        source: include_str!("../data/parbeta.sig"),
        mode: ValidationMode::Enumerable,
        summary: "parallel beta",
    },
    CorpusEntry {
        name: "lcfix",
        source: include_str!("../data/lcfix.sig"),
        mode: ValidationMode::Enumerable,
        summary: "congruent beta with a fixpoint operator",
    },
    CorpusEntry {
        name: "lcex",
        source: include_str!("../data/lcex.sig"),
        mode: ValidationMode::Enumerable,
        summary: "explicit substitutions with commuting substitution layers",
    },
    CorpusEntry {
        name: "onecong",
        source: include_str!("../data/onecong.sig"),
        mode: ValidationMode::Schematic,
        summary: "congruent beta plus a unary substitution congruence",
    },
    CorpusEntry {
        name: "gallery",
        source: include_str!("../data/gallery.sig"),
        mode: ValidationMode::Enumerable,
        summary: "a catalogue of classic rule shapes (refl, trans, eta, fix)",
    },
];

pub fn names() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|e| e.name)
}

pub fn entry(name: &str) -> Result<&'static CorpusEntry> {
    ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownCorpus(name.to_string()))
}

/// Parses and validates a corpus signature.
pub fn load(name: &str) -> Result<ReductionSignature> {
    let e = entry(name)?;
    let sig = parse_signature(e.source)?;
    let diags = validate_signature(&sig, e.mode);
    if let Some(d) = diags.first() {
        return Err(Error::Invalid(format!("{}: {d}", e.name)));
    }
    Ok(sig)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GoldenCheck {
    /// The multiset of one-step targets of `term`.
    Reduce { term: String, targets: Vec<String> },
    /// Whether `goal` is reachable from `from` in at most `max_steps`.
    Search {
        from: String,
        goal: String,
        max_steps: usize,
        found: bool,
    },
    /// A star trace that must validate.
    Trace { trace: StarTraceJson },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Golden {
    pub name: String,
    /// How the expected value was obtained.
    pub origin: String,
    /// A command line reproducing the check.
    pub command: String,
    pub signature: String,
    pub context: usize,
    pub check: GoldenCheck,
}

const GOLDEN_SOURCES: &[&str] = &[
    include_str!("../data/goldens/double-redex-congbeta.json"),
    include_str!("../data/goldens/double-redex-whbeta.json"),
    include_str!("../data/goldens/double-redex-parbeta.json"),
    include_str!("../data/goldens/under-binder-whbeta.json"),
    include_str!("../data/goldens/under-binder-congbeta.json"),
    include_str!("../data/goldens/identity-redex.json"),
    include_str!("../data/goldens/fix-exp.json"),
    include_str!("../data/goldens/ex-identity.json"),
];

pub fn goldens() -> Result<Vec<Golden>> {
    GOLDEN_SOURCES
        .iter()
        .map(|s| serde_json::from_str(s).map_err(|e| Error::Json(e.to_string())))
        .collect()
}

pub fn golden(name: &str) -> Result<Golden> {
    goldens()?
        .into_iter()
        .find(|g| g.name == name)
        .ok_or_else(|| Error::UnknownCorpus(format!("golden:{name}")))
}

/// Re-runs a golden check; returns the list of mismatches.
pub fn check_golden(g: &Golden) -> Result<Vec<String>> {
    let sig = load(&g.signature)?;
    let n = g.context;
    let mut out = Vec::new();
    match &g.check {
        GoldenCheck::Reduce { term, targets } => {
            let t = sig.parse_term(term, n)?;
            let steps = enumerate_steps(&sig, n, &t, DEFAULT_FUEL)?;
            let mut got = steps
                .traces
                .iter()
                .map(|tr| target(&sig, tr))
                .collect::<Result<Vec<_>>>()?;
            let mut want = targets.iter().map(|s| sig.parse_term(s, n)).collect::<Result<Vec<_>>>()?;
            got.sort();
            want.sort();
            if got != want {
                let show = |v: &[Term]| v.iter().map(Term::to_string).collect::<Vec<_>>().join(", ");
                out.push(format!("targets [{}], expected [{}]", show(&got), show(&want)));
            }
        }
        GoldenCheck::Search {
            from,
            goal,
            max_steps,
            found,
        } => {
            let r = star_search(
                &sig,
                n,
                &sig.parse_term(from, n)?,
                &sig.parse_term(goal, n)?,
                *max_steps,
                DEFAULT_FUEL,
            )?;
            if r.trace.is_some() != *found {
                out.push(format!("found = {}, expected {found}", r.trace.is_some()));
            }
            if !found && !r.exhaustive {
                out.push("search was not exhaustive".into());
            }
        }
        GoldenCheck::Trace { trace } => {
            let s = StarTrace::try_from(trace)?;
            if s.context != n {
                out.push(format!("trace context {} differs from {n}", s.context));
            }
            out.extend(validate_star(&sig, &s));
        }
    }
    Ok(out)
}

/// Fuel used for goldens and by default on the command line.
pub const DEFAULT_FUEL: usize = 3;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_loads() {
        for n in names() {
            load(n).unwrap_or_else(|e| panic!("{n}: {e}"));
        }
    }

    #[test]
    fn unknown_entries_are_errors() {
        assert!(matches!(load("nope"), Err(Error::UnknownCorpus(_))));
    }

    #[test]
    fn goldens_hold() {
        let gs = goldens().unwrap();
        assert_eq!(gs.len(), GOLDEN_SOURCES.len());
        for g in gs {
            let errs = check_golden(&g).unwrap();
            assert!(errs.is_empty(), "{}: {errs:?}", g.name);
        }
    }
}
