//! Lie algebra homology of matrix algebras and the cyclic connection:
//! Chevalley-Eilenberg homology, gl_r(k)-coinvariants against the
//! permutation model, invariant tr_sigma functionals, and the
//! cyclic-class subcomplex computing shifted cyclic homology.
//!
//! Run with: cargo run --release --example loday_quillen

use nch::algebra::builtin;
use nch::lie::{
    ce_homology, coinvariant_dimension_check, cyclic_class_homology, raw_matrix_algebra,
    tr_sigma_invariant, LieAlgebra,
};

fn main() -> Result<(), nch::error::NchError> {
    let c = builtin("C").unwrap();
    let g = LieAlgebra::new(raw_matrix_algebra(&c, 2))?;
    println!("H_n(gl_2(C)) for n <= 2: {:?}", ce_homology(&g, 2)?);

    for (alg, r, n) in [("C", 1usize, 1usize), ("C", 2, 2), ("C2", 2, 2)] {
        let a = builtin(alg).unwrap();
        let cmp = coinvariant_dimension_check(&a, r, n)?;
        println!(
            "coinvariants of Lambda^{n} gl_{r}({alg}): lie side {}, permutation side {} -> {}",
            cmp.lie_side,
            cmp.permutation_side,
            if cmp.equal { "equal" } else { "DIFFER" }
        );
        assert!(cmp.equal);
    }

    for sigma in [vec![1usize, 0], vec![1usize, 2, 0]] {
        println!(
            "tr_sigma invariant for the {}-cycle: {}",
            sigma.len(),
            tr_sigma_invariant(2, &sigma)
        );
    }

    let report = cyclic_class_homology(&c, 3, 3)?;
    println!("\ncyclic-class subcomplex inside the coinvariants of gl_3(C):");
    for (n, h, hc, ok) in &report.homology_vs_hc {
        println!(
            "  homology at chain degree {n}: {h}, HC_{}(C) = {hc} -> {}",
            n - 1,
            if *ok { "match" } else { "MISMATCH" }
        );
        assert!(ok);
    }
    Ok(())
}
