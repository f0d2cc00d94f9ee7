//! One-step reduction as proof-relevant traces. The same term has two
//! congruent β-traces, but only one weak-head or one parallel trace.
//!
//!     cargo run --example enumerate_steps

use redsig::corpus;
use redsig::enumerate::enumerate_steps;
use redsig::trace::{endpoints, trace_to_json};

fn main() -> redsig::error::Result<()> {
    // (I x) (I x) where I = λy.y, in context {x}
    let text = "(app (app (abs (bind 1 (var 1))) (var 0)) (app (abs (bind 1 (var 1))) (var 0)))";
    for name in ["congbeta", "whbeta", "parbeta"] {
        let sig = corpus::load(name)?;
        let t = sig.parse_term(text, 1)?;
        let steps = enumerate_steps(&sig, 1, &t, corpus::DEFAULT_FUEL)?;
        println!("{name}: {} trace(s)", steps.traces.len());
        for tr in &steps.traces {
            let (_, target) = endpoints(&sig, tr)?;
            println!("  {tr}\n    ~> {target}");
        }
    }

    // Traces serialize to JSON.
    let sig = corpus::load("whbeta")?;
    let t = sig.parse_term(text, 1)?;
    let steps = enumerate_steps(&sig, 1, &t, 3)?;
    println!("{}", trace_to_json(&steps.traces[0]));
    Ok(())
}
