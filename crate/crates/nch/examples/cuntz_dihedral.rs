//! The Cuntz algebra as forms with the Fedosov product: generator
//! relations under the mu identification, and the dihedral subalgebra
//! with its exact truncated series for L = log(f f^gamma) and W_t.
//!
//! Run with: cargo run --release --example cuntz_dihedral

use nch::algebra::builtin;
use nch::cuntz::{dihedral_suite, CuntzCtx};

fn main() -> Result<(), nch::error::NchError> {
    for name in ["dual", "C2", "M2"] {
        let alg = builtin(name).unwrap();
        let ctx = CuntzCtx::new(&alg, 4)?;
        println!("Q({name}) generator relations:");
        for (check, ok) in ctx.verify_generator_relations()? {
            println!("  [{}] {check}", if ok { "ok" } else { "FAIL" });
            assert!(ok);
        }
    }

    let report = dihedral_suite(6)?;
    println!("\ndihedral subalgebra over the unitalized ground field (degree <= 6):");
    for (check, ok) in &report.checks {
        println!("  [{}] {check}", if *ok { "ok" } else { "FAIL" });
        assert!(ok);
    }
    println!("  L in the word basis:");
    for (word, coeff) in &report.l_leading_coefficients {
        println!("    {coeff}  *  {word}");
    }
    Ok(())
}
