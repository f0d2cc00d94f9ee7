//! Substitution is a congruence for reduction sequences: from m : a ~>* b
//! and a term U with a hole, build U[a] ~>* U[b] by copying m into every
//! occurrence of the hole.
//!
//!     cargo run --example subst_congruence

use redsig::corpus;
use redsig::enumerate::star_search;
use redsig::star_action::subst_cong_star;
use redsig::trace::validate_star;

fn main() -> redsig::error::Result<()> {
    let cb = corpus::load("congbeta")?;
    // m : (λz.z) x ~> x, in context {x}
    let a = cb.parse_term("(app (abs (bind 1 (var 1))) (var 0))", 1)?;
    let b = cb.parse_term("(var 0)", 1)?;
    let m = star_search(&cb, 1, &a, &b, 1, 2)?.trace.expect("one step");

    // U = λy. hole (hole y): the hole (level 1) occurs twice, once under a binder.
    let u = cb.parse_term("(abs (bind 1 (app (var 1) (app (var 1) (var 2)))))", 2)?;
    let s = subst_cong_star(&cb, &u, 1, &m)?;
    assert!(validate_star(&cb, &s).is_empty());
    println!("{}\n  ~>* {}\nin {} steps:", s.source, s.target, s.len());
    for step in &s.steps {
        println!("  {step}");
    }
    Ok(())
}
