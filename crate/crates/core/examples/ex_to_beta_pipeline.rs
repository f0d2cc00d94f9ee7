//! Composing translations: explicit substitutions are first read as
//! single-step congruence over meta-level substitution, then as sequences
//! of ordinary β-steps.
//!
//!     cargo run --example ex_to_beta_pipeline

use redsig::corpus;
use redsig::sample::{random_trace, rng};
use redsig::signature::Assignment;
use redsig::trace::{star_compose, star_single, validate_star, Trace};
use redsig::translate::{composed_ex_to_beta_star, ex_to_onecong};

fn main() -> redsig::error::Result<()> {
    let ex = corpus::load("lcex")?;
    let first = ex_to_onecong()?;
    let both = composed_ex_to_beta_star()?;
    let cb = corpus::load("congbeta")?;

    // (λx.x) y ~> x[x/y] ~> y
    let beta = Trace::new("beta", Assignment::new(1).with("T", ex.parse_term("(var 1)", 2)?).with("U", ex.parse_term("(var 0)", 1)?), vec![]);
    let var = Trace::new("var-esubst", Assignment::new(1).with("T", ex.parse_term("(var 0)", 1)?), vec![]);
    let d = star_compose(&ex, &star_single(&ex, beta)?, &star_single(&ex, var)?)?;
    println!("in lcex:      {} ~>* {} ({} steps)", d.source, d.target, d.len());

    let mid = first.fold_star(&d)?;
    println!("in onecong:   {} ~>* {} ({} steps)", mid.source, mid.target, mid.len());

    let out = both.fold_star(&d)?;
    assert!(validate_star(&cb, &out).is_empty());
    println!("in congbeta:  {} ~>* {} ({} steps)", out.source, out.target, out.len());

    // Random derivations go through as well.
    let mut r = rng(7);
    let mut shown = 0;
    while shown < 5 {
        let Some(t) = random_trace(&ex, 1, 3, 2, &mut r) else { continue };
        let image = both.fold_trace(&t)?;
        assert!(validate_star(&cb, &image).is_empty());
        println!("{:>14} ↦ {} β-step(s)", t.rule, image.len());
        shown += 1;
    }
    Ok(())
}
