//! Well-scoped terms: variables are de Bruijn levels, so `(var 0)` is the
//! outermost variable of the context and a binder adds the next level.
//!
//!     cargo run --example scoped_terms

use redsig::corpus;
use redsig::term::{strengthen, subst, weaken, SubstEnv, Term};

fn main() -> redsig::error::Result<()> {
    let lc = corpus::load("lc")?;

    // λy. x y in the context {x}: x is level 0, y is level 1.
    let t = lc.parse_term("(abs (bind 1 (app (var 0) (var 1))))", 1)?;
    println!("t           = {t}");

    // Terms are checked against their context.
    match lc.parse_term("(app (var 0) (var 1))", 1) {
        Err(e) => println!("out of scope: {e}"),
        Ok(_) => unreachable!(),
    }

    // Substitute x := λz. z. The bound variable of t is relocated.
    let id = lc.parse_term("(abs (bind 1 (var 0)))", 0)?;
    let t0 = subst(&t, &SubstEnv::single(0, id))?;
    println!("t[x := id]  = {t0}");

    // Substituting a variable under the binder never captures it.
    let t2 = subst(&t, &SubstEnv::new(2, vec![Term::Var(1)])?)?;
    println!("t[x := w]   = {t2}   (in context 2)");

    // Weakening adds an unused variable on top; strengthening removes it.
    let w = weaken(&t, 1);
    println!("weaken(t)   = {w}");
    assert_eq!(strengthen(&w, 1), Some(t.clone()));
    assert_eq!(strengthen(&t, 0), None, "t uses x");
    Ok(())
}
