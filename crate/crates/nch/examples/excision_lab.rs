//! H-unitality and excision: the bar-complex acyclicity test, the
//! excision long exact sequence on a split extension, and the
//! square-zero counterexample where excision genuinely fails.
//!
//! Run with: cargo run --release --example excision_lab

use nch::algebra::builtin;
use nch::excision::{
    excision_check, h_unitality, nilpotent_extension_example, split_extension_example,
};

fn main() -> Result<(), nch::error::NchError> {
    for name in ["C", "M2", "strict_upper2"] {
        let a = builtin(name).unwrap();
        let rep = h_unitality(&a, 5)?;
        println!(
            "H-unitality of {name}: {} (bar homology dims {:?})",
            if rep.h_unital_up_to_truncation { "yes" } else { "no" },
            rep.dims.iter().map(|(_, d, _)| *d).collect::<Vec<_>>(),
        );
    }

    let split = split_extension_example()?;
    println!("\nsplit extension R = C x M2(C), I = M2(C), A = C:");
    let rep = excision_check(&split, 3, 6)?;
    for (q, comp, imker, conn) in &rep.nodes {
        println!(
            "  HC_{q}: composite zero {comp}, im = ker {imker}, connecting dims {conn}"
        );
    }
    assert!(rep.all_pass());

    let nilp = nilpotent_extension_example()?;
    println!("\ncounterexample R = upper2, I = strict_upper2 (not H-unital):");
    let rep = excision_check(&nilp, 3, 6)?;
    for (q, comp, imker, conn) in &rep.nodes {
        println!(
            "  HC_{q}: composite zero {comp}, im = ker {imker}, connecting dims {conn}"
        );
    }
    assert!(rep.any_fail(), "excision must fail without H-unitality");
    println!("excision fails for the square-zero ideal, as it must");
    Ok(())
}
