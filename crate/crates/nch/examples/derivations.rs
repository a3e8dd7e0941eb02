//! Derivations acting on forms and homology: the Lie derivative
//! commutes with b, d and kappa, the composite L_D o S vanishes on
//! cyclic homology, and inner derivations act trivially on Hochschild
//! homology.
//!
//! Run with: cargo run --release --example derivations

use nch::algebra::builtin;
use nch::excision::{derivation_action, derivation_on_hh};
use nch::linalg::{SparseMat, SparseVec};

fn main() -> Result<(), nch::error::NchError> {
    // D(eps) = eps on the dual numbers
    let a = builtin("dual").unwrap();
    let d = SparseMat::from_columns(2, vec![SparseVec::zero(), SparseVec::unit(1)]);
    let rep = derivation_action(&a, &d, 4, 8)?;
    println!("dual numbers, D(eps) = eps:");
    println!("  L_D b = b L_D: {}", rep.commutes_with_b);
    println!("  L_D d = d L_D: {}", rep.commutes_with_d);
    println!("  L_D kappa = kappa L_D: {}", rep.commutes_with_kappa);
    for (n, ok) in &rep.ld_s_zero {
        println!("  L_D o S = 0 on HC_{n}: {ok}");
    }
    assert!(rep.all_pass);

    // inner derivation on M2 annihilates Hochschild homology
    let m2 = builtin("M2").unwrap();
    let x = SparseVec::unit(2); // e12
    let inner = SparseMat::from_fn(4, 4, |j| {
        m2.multiply(&x, &SparseVec::unit(j))
            .sub(&m2.multiply(&SparseVec::unit(j), &x))
    });
    println!("\nM2(C), inner derivation [e12, .]:");
    for (n, ok) in derivation_on_hh(&m2, &inner, 2, 4)? {
        println!("  acts as zero on HH_{n}: {ok}");
        assert!(ok);
    }
    Ok(())
}
