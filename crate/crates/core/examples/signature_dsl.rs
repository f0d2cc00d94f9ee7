//! Declaring a reduction signature in the s-expression DSL and checking it.
//!
//!     cargo run --example signature_dsl

use redsig::dsl::{parse_signature, print_signature};
use redsig::validate::{validate_signature, ValidationMode};

const SOURCE: &str = r#"
; Call-by-name beta plus eta-contraction.
(signature demo
  (ops (app 0 0) (abs 1))
  (rule beta
    (metavars (T 1) (U 0))
    (concl 0 (app (abs (bind 1 (meta T 0))) (meta U)) (msubst (meta T 0) (meta U))))
  (rule appl-cong
    (metavars (T 0) (T' 0) (U 0))
    (hyp 0 (meta T) (meta T'))
    (concl 0 (app (meta T) (meta U)) (app (meta T') (meta U))))
  (rule eta
    (metavars (T 0))
    (concl 0 (abs (bind 1 (app (meta T) (tvar 0)))) (meta T))))
"#;

// `msubst` on the left-hand side cannot be matched against terms.
const UNMATCHABLE: &str = r#"
(signature odd
  (ops (app 0 0) (abs 1))
  (rule backwards
    (metavars (T 1) (U 0))
    (concl 0 (msubst (meta T 0) (meta U)) (app (abs (bind 1 (meta T 0))) (meta U)))))
"#;

fn main() -> redsig::error::Result<()> {
    let sig = parse_signature(SOURCE)?;
    println!("{} operations, {} rules", sig.monad.ops.len(), sig.rules.len());
    assert!(validate_signature(&sig, ValidationMode::Enumerable).is_empty());

    // Printing and re-parsing gives the same signature back.
    let printed = print_signature(&sig);
    assert_eq!(parse_signature(&printed)?, sig);
    println!("{printed}");

    let odd = parse_signature(UNMATCHABLE)?;
    for d in validate_signature(&odd, ValidationMode::Enumerable) {
        println!("enumerable: {d}");
    }
    // As a schematic rule (used only to describe actions) it is fine.
    assert!(validate_signature(&odd, ValidationMode::Schematic).is_empty());

    // Syntax errors carry a line and column.
    if let Err(e) = parse_signature("(signature broken\n  (ops (app 0 0)") {
        println!("parse error: {e}");
    }
    Ok(())
}
