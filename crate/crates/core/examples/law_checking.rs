//! Bounded law checking: the substitution and module laws of the syntax,
//! the morphism laws of a translation, and a deliberately broken
//! substitution that the checks must reject.
//!
//!     cargo run --release --example law_checking

use redsig::corpus;
use redsig::model::{check_monad_laws, check_monad_laws_with, check_morphism_laws, mutant_subst, LawBounds};
use redsig::sample::{random_trace, rng};
use redsig::translate::{fix_to_beta_star, mutant_fix_to_beta_star};

fn main() -> redsig::error::Result<()> {
    let bounds = LawBounds::default();
    for name in ["lc", "congbeta", "lcex"] {
        let sig = corpus::load(name)?;
        for r in check_monad_laws(&sig, &bounds) {
            println!("{name:>9} {:<28} {:>6} instances  {}", r.law, r.instances, if r.passed() { "ok" } else { "VIOLATED" });
        }
    }

    let lc = corpus::load("lc")?;
    let broken = check_monad_laws_with(&lc, &bounds, mutant_subst);
    let failed: Vec<&str> = broken.iter().filter(|r| !r.passed()).map(|r| r.law.as_str()).collect();
    println!("broken substitution violates: {failed:?}");

    for tr in [fix_to_beta_star()?, mutant_fix_to_beta_star()?] {
        let mut r = rng(3);
        let samples: Vec<_> = std::iter::from_fn(|| Some(random_trace(&tr.source, 1, 3, 2, &mut r)))
            .flatten()
            .take(50)
            .collect();
        for rep in check_morphism_laws(&tr, &samples, 2, 2, 3) {
            println!("{:>24} {:<20} {} violation(s)", tr.name, rep.law, rep.violations.len());
        }
    }
    Ok(())
}
