//! λ-calculus with explicit substitutions: `(esubst (bind 1 t) u)` is
//! t[x/u]. Independent substitutions commute, so terms are compared up to
//! that equation.
//!
//!     cargo run --example explicit_substitutions

use redsig::corpus;
use redsig::enumerate::{enumerate_steps, star_search};
use redsig::trace::target;

fn main() -> redsig::error::Result<()> {
    let ex = corpus::load("lcex")?;

    // t[x/a][y/b] and t[y/b][x/a] with a, b independent, in context {a, b}.
    let l = ex.parse_term("(esubst (bind 1 (esubst (bind 1 (app (var 2) (var 3))) (var 0))) (var 1))", 2)?;
    let r = ex.parse_term("(esubst (bind 1 (esubst (bind 1 (app (var 3) (var 2))) (var 1))) (var 0))", 2)?;
    println!("commuted layers equal: {}", ex.eq_modulo(&l, &r, 2));
    println!("canonical form: {}", ex.canonicalize(&l, 2));

    // The garbage-collection rule only fires when the variable is unused.
    for text in ["(esubst (bind 1 (var 0)) (var 0))", "(esubst (bind 1 (var 1)) (var 0))"] {
        let t = ex.parse_term(text, 1)?;
        let rules: Vec<String> = enumerate_steps(&ex, 1, &t, 2)?
            .traces
            .iter()
            .map(|tr| format!("{} -> {}", tr.rule, target(&ex, tr).unwrap()))
            .collect();
        println!("{t}: {rules:?}");
    }

    // (λx.x) y reduces to y in two steps: beta, then var.
    let t = ex.parse_term("(app (abs (bind 1 (var 1))) (var 0))", 1)?;
    let y = ex.parse_term("(var 0)", 1)?;
    let s = star_search(&ex, 1, &t, &y, 3, 2)?.trace.expect("reachable");
    for step in &s.steps {
        println!("  {} : {} ~> {}", step.rule, redsig::trace::source(&ex, step)?, target(&ex, step)?);
    }
    Ok(())
}
