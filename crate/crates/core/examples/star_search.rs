//! Bounded search in the reflexive-transitive closure. Weak-head reduction
//! cannot reach under a λ, and the search proves it by exhausting the
//! reachable terms.
//!
//!     cargo run --example star_search

use redsig::corpus;
use redsig::enumerate::star_search;
use redsig::trace::validate_star;

fn main() -> redsig::error::Result<()> {
    let from = "(abs (bind 1 (app (abs (bind 1 (var 2))) (var 0))))"; // λx.(λy.y) z, in context {z}
    let goal = "(abs (bind 1 (var 0)))"; // λx.z
    for name in ["whbeta", "congbeta"] {
        let sig = corpus::load(name)?;
        let (a, b) = (sig.parse_term(from, 1)?, sig.parse_term(goal, 1)?);
        let r = star_search(&sig, 1, &a, &b, 4, corpus::DEFAULT_FUEL)?;
        match r.trace {
            Some(s) => {
                assert!(validate_star(&sig, &s).is_empty());
                println!("{name}: found in {} step(s)", s.len());
                for step in &s.steps {
                    println!("  {step}");
                }
            }
            None => println!("{name}: not found, exhaustive = {}, {} term(s) explored", r.exhaustive, r.explored),
        }
    }
    Ok(())
}
