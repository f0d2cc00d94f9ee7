//! Translating a fixpoint operator into plain β-reduction: `fix x. t`
//! becomes `Y (λx. t)` with Turing's combinator, and each fixpoint step
//! becomes a sequence of β-steps.
//!
//!     cargo run --example fixpoint_translation

use redsig::corpus::{self, GoldenCheck};
use redsig::trace::{validate_star, StarTrace};
use redsig::translate::{fix_to_beta_star, turing_unfolding, turing_y};

fn main() -> redsig::error::Result<()> {
    let tr = fix_to_beta_star()?;
    let cb = corpus::load("congbeta")?;

    println!("Y = {}", turing_y(0));
    let r = turing_unfolding(&cb)?;
    println!("Y f ~>* f (Y f) in {} steps", r.len());

    let fix = tr.source.parse_term("(fix (bind 1 (abs (bind 1 (var 0)))))", 0)?;
    println!("fix x. λy. y  ↦  {}", tr.fold_term(&fix, 0)?);

    let GoldenCheck::Trace { trace } = corpus::golden("fix-exp")?.check else {
        unreachable!()
    };
    let step = StarTrace::try_from(&trace)?;
    let image = tr.fold_star(&step)?;
    assert!(validate_star(&cb, &image).is_empty());
    println!("one fixpoint step becomes {} β-steps:", image.len());
    for s in &image.steps {
        println!("  {} ~> ...", s.rule);
    }
    println!("ends at {}", image.target);
    Ok(())
}
