//! Toeplitz operators of Laurent polynomial symbols: the exact trace
//! cocycle, combinatorial winding numbers, and the stabilized
//! parametrix-difference index.
//!
//! Run with: cargo run --release --example toeplitz_winding

use nch::toeplitz::{commutator_trace, cocycle_phi, index_report, LaurentSymbol};

fn main() -> Result<(), nch::error::NchError> {
    // the trace formula tr(f[e,g]) = sum_k k f_{-k} g_k
    for (f, g) in [("z^-1", "z"), ("z^-2", "z^2"), ("1 + z^-1", "1 + z")] {
        let fs = LaurentSymbol::parse(f)?;
        let gs = LaurentSymbol::parse(g)?;
        let (trace, fourier) = commutator_trace(&fs, &gs, 10)?;
        println!("tr(f[e,g]) for f = {f}, g = {g}: matrix {trace}, fourier {fourier}");
        assert_eq!(trace, fourier);
        let phi = cocycle_phi(&fs, &gs, 10)?;
        assert_eq!(phi, trace, "phi agrees with the commutator trace");
    }

    println!();
    for text in ["z", "z^2", "2 + z", "z^-1 + 1/3"] {
        let f = LaurentSymbol::parse(text)?;
        let report = index_report(&f, 1..=12)?;
        println!(
            "symbol {text}: winding {}, stabilized index {:?}, ker {} / coker {}",
            report.winding,
            report.stabilized_index.as_ref().map(|v| v.to_string()),
            report.kernel_dim,
            report.cokernel_dim,
        );
        println!("  {}", report.sign_convention);
    }
    Ok(())
}
