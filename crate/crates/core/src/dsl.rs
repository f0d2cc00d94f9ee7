//! The signature DSL: one s-expression per file.
//!
//! ```text
//! (signature NAME
//!   (ops (IDENT NAT*)*)
//!   (equations (commute IDENT)*)?
//!   (rule NAME (metavars (IDENT NAT [onehole])*)
//!              (hyp NAT TEMPLATE TEMPLATE)*
//!              (concl NAT TEMPLATE TEMPLATE))*)
//!
//! TEMPLATE := (tvar NAT) | (meta IDENT NAT*) | (msubst TEMPLATE TEMPLATE*)
//!           | (IDENT TARG*)
//! TARG     := TEMPLATE | (bind NAT TEMPLATE)
//! ```

use std::fmt::Write as _;

use crate::error::Result;
use crate::sexpr::{error_at, parse_ident, parse_nat, parse_one, Sexp};
use crate::signature::{
    Constraint, Equation, MetaVarDecl, MonadSignature, ReductionRule, ReductionSignature, Template, TermPair,
};
use crate::term::{name, OpSpec};

const RESERVED: &[&str] = &["tvar", "meta", "msubst", "bind", "var"];

pub fn parse_signature(src: &str) -> Result<ReductionSignature> {
    let form = parse_one(src)?;
    let items = form
        .as_list()
        .filter(|_| form.head() == Some("signature"))
        .ok_or_else(|| error_at(form.pos(), "expected `(signature NAME ...)`"))?;
    let sig_name = items
        .get(1)
        .ok_or_else(|| error_at(form.pos(), "missing signature name"))
        .and_then(parse_ident)?;
    let mut ops = None;
    let mut equations = Vec::new();
    let mut rules = Vec::new();
    for item in &items[2..] {
        match item.head() {
            Some("ops") if ops.is_none() && rules.is_empty() => ops = Some(parse_ops(item)?),
            Some("equations") if ops.is_some() && rules.is_empty() && equations.is_empty() => {
                for e in &item.as_list().unwrap()[1..] {
                    equations.push(parse_equation(e)?);
                }
            }
            Some("rule") if ops.is_some() => rules.push(parse_rule(item)?),
            _ => {
                return Err(error_at(
                    item.pos(),
                    "expected `(ops ...)`, then optionally `(equations ...)`, then `(rule ...)` forms",
                ))
            }
        }
    }
    let ops = ops.ok_or_else(|| error_at(form.pos(), "missing `(ops ...)`"))?;
    Ok(ReductionSignature::new(sig_name, MonadSignature::new(ops), equations, rules))
}

fn parse_ops(form: &Sexp) -> Result<Vec<OpSpec>> {
    let mut ops = Vec::new();
    for o in &form.as_list().unwrap()[1..] {
        let parts = o
            .as_list()
            .filter(|p| !p.is_empty())
            .ok_or_else(|| error_at(o.pos(), "expected `(IDENT NAT*)`"))?;
        let op = parse_ident(&parts[0])?;
        if RESERVED.contains(&op) {
            return Err(error_at(parts[0].pos(), format!("`{op}` is reserved")));
        }
        let arities = parts[1..].iter().map(parse_nat).collect::<Result<Vec<_>>>()?;
        ops.push(OpSpec::new(op, &arities));
    }
    Ok(ops)
}

fn parse_equation(e: &Sexp) -> Result<Equation> {
    match e.as_list() {
        Some([head, op]) if head.as_atom() == Some("commute") => {
            Ok(Equation::LayerCommutation(name(parse_ident(op)?)))
        }
        _ => Err(error_at(e.pos(), "expected `(commute IDENT)`")),
    }
}

fn parse_rule(form: &Sexp) -> Result<ReductionRule> {
    let items = form.as_list().unwrap();
    let rule_name = items
        .get(1)
        .ok_or_else(|| error_at(form.pos(), "missing rule name"))
        .and_then(parse_ident)?;
    let mv = items
        .get(2)
        .filter(|m| m.head() == Some("metavars"))
        .ok_or_else(|| error_at(form.pos(), "expected `(metavars ...)` after the rule name"))?;
    let mut metavars = Vec::new();
    for d in &mv.as_list().unwrap()[1..] {
        metavars.push(parse_metavar(d)?);
    }
    let mut hypotheses = Vec::new();
    let mut conclusion = None;
    for p in &items[3..] {
        match p.head() {
            Some("hyp") if conclusion.is_none() => hypotheses.push(parse_pair(p)?),
            Some("concl") if conclusion.is_none() => conclusion = Some(parse_pair(p)?),
            _ => return Err(error_at(p.pos(), "expected `(hyp ...)` forms followed by one `(concl ...)`")),
        }
    }
    let conclusion = conclusion.ok_or_else(|| error_at(form.pos(), format!("rule `{rule_name}` has no conclusion")))?;
    Ok(ReductionRule {
        name: name(rule_name),
        metavars,
        hypotheses,
        conclusion,
    })
}

fn parse_metavar(d: &Sexp) -> Result<MetaVarDecl> {
    let bad = || error_at(d.pos(), "expected `(IDENT NAT [onehole])`");
    let parts = d.as_list().ok_or_else(bad)?;
    let (m, depth, constraint) = match parts {
        [m, n] => (m, n, Constraint::None),
        [m, n, c] if c.as_atom() == Some("onehole") => (m, n, Constraint::OneHole),
        _ => return Err(bad()),
    };
    Ok(MetaVarDecl {
        name: name(parse_ident(m)?),
        depth: parse_nat(depth)?,
        constraint,
    })
}

fn parse_pair(p: &Sexp) -> Result<TermPair> {
    match p.as_list() {
        Some([_, d, l, r]) => Ok(TermPair::new(parse_nat(d)?, parse_template(l)?, parse_template(r)?)),
        _ => Err(error_at(p.pos(), "expected `(hyp|concl NAT TEMPLATE TEMPLATE)`")),
    }
}

pub fn parse_template(s: &Sexp) -> Result<Template> {
    let items = s
        .as_list()
        .filter(|i| !i.is_empty())
        .ok_or_else(|| error_at(s.pos(), "expected a template `(...)`"))?;
    match parse_ident(&items[0])? {
        "tvar" => match items {
            [_, n] => Ok(Template::Var(parse_nat(n)?)),
            _ => Err(error_at(s.pos(), "expected `(tvar NAT)`")),
        },
        "meta" => {
            let m = items
                .get(1)
                .ok_or_else(|| error_at(s.pos(), "expected `(meta IDENT NAT*)`"))
                .and_then(parse_ident)?;
            let map = items[2..].iter().map(parse_nat).collect::<Result<Vec<_>>>()?;
            Ok(Template::Meta(name(m), map))
        }
        "msubst" => {
            let body = items
                .get(1)
                .ok_or_else(|| error_at(s.pos(), "expected `(msubst TEMPLATE TEMPLATE*)`"))
                .and_then(parse_template)?;
            let args = items[2..].iter().map(parse_template).collect::<Result<Vec<_>>>()?;
            Ok(Template::Subst(Box::new(body), args))
        }
        "bind" | "var" => Err(error_at(s.pos(), format!("`{}` is not a template", items[0].as_atom().unwrap()))),
        op => {
            let mut args = Vec::with_capacity(items.len() - 1);
            for a in &items[1..] {
                if a.head() == Some("bind") {
                    match a.as_list().unwrap() {
                        [_, n, t] => args.push((parse_nat(n)?, parse_template(t)?)),
                        _ => return Err(error_at(a.pos(), "expected `(bind NAT TEMPLATE)`")),
                    }
                } else {
                    args.push((0, parse_template(a)?));
                }
            }
            Ok(Template::Op(name(op), args))
        }
    }
}

pub fn template_text(t: &Template) -> String {
    let mut s = String::new();
    write_template(&mut s, t);
    s
}

fn write_template(s: &mut String, t: &Template) {
    match t {
        Template::Var(i) => write!(s, "(tvar {i})").unwrap(),
        Template::Meta(m, map) => {
            write!(s, "(meta {m}").unwrap();
            for j in map {
                write!(s, " {j}").unwrap();
            }
            s.push(')');
        }
        Template::Subst(body, args) => {
            s.push_str("(msubst ");
            write_template(s, body);
            for a in args {
                s.push(' ');
                write_template(s, a);
            }
            s.push(')');
        }
        Template::Op(o, args) => {
            write!(s, "({o}").unwrap();
            for (b, a) in args {
                s.push(' ');
                if *b == 0 {
                    write_template(s, a);
                } else {
                    write!(s, "(bind {b} ").unwrap();
                    write_template(s, a);
                    s.push(')');
                }
            }
            s.push(')');
        }
    }
}

/// Canonical printing; `parse_signature(&print_signature(s))` gives back `s`.
pub fn print_signature(sig: &ReductionSignature) -> String {
    let mut s = format!("(signature {}\n  (ops", sig.name);
    for op in &sig.monad.ops {
        write!(s, " ({}", op.name).unwrap();
        for b in &op.binding_arities {
            write!(s, " {b}").unwrap();
        }
        s.push(')');
    }
    s.push(')');
    let eqs = sig.equations.list();
    if !eqs.is_empty() {
        s.push_str("\n  (equations");
        for Equation::LayerCommutation(op) in eqs {
            write!(s, " (commute {op})").unwrap();
        }
        s.push(')');
    }
    for r in &sig.rules {
        write!(s, "\n  (rule {}\n    (metavars", r.name).unwrap();
        for d in &r.metavars {
            write!(s, " ({} {}", d.name, d.depth).unwrap();
            if d.constraint == Constraint::OneHole {
                s.push_str(" onehole");
            }
            s.push(')');
        }
        s.push(')');
        for h in &r.hypotheses {
            write!(s, "\n    (hyp {} {} {})", h.depth, template_text(&h.lhs), template_text(&h.rhs)).unwrap();
        }
        let c = &r.conclusion;
        write!(s, "\n    (concl {} {} {}))", c.depth, template_text(&c.lhs), template_text(&c.rhs)).unwrap();
    }
    s.push_str(")\n");
    s
}
