//! Hochschild and cyclic homology of the built-in algebras, computed in
//! both models (mixed b+B total complex and the Connes quotient complex)
//! with exact rational arithmetic.
//!
//! Run with: cargo run --release --example cyclic_homology

use nch::algebra::builtin;
use nch::homology::{cyclic_homology, hochschild_homology, periodic_approx, CyclicModel};

fn main() -> Result<(), nch::error::NchError> {
    for name in ["C", "C2", "dual", "M2"] {
        let a = builtin(name).unwrap();
        let n_max = 6;
        let hh = hochschild_homology(&a, 4, n_max)?;
        let mixed = cyclic_homology(&a, 4, n_max, CyclicModel::Mixed)?;
        let connes = cyclic_homology(&a, 4, n_max, CyclicModel::Connes)?;
        println!("algebra {name} (dim {}):", a.dim);
        let dims = |rs: &[nch::homology::HomologyResult]| -> Vec<usize> {
            rs.iter().map(|r| r.dim).collect()
        };
        println!("  HH_n          = {:?}", dims(&hh));
        println!("  HC_n (mixed)  = {:?}", dims(&mixed));
        println!("  HC_n (Connes) = {:?}", dims(&connes));
        assert_eq!(dims(&mixed), dims(&connes), "simplicial normalization");
        for parity in 0..2usize {
            let hp = periodic_approx(&a, parity, n_max + 2)?;
            println!(
                "  HP parity {parity}: tower {:?} -> {} ({:?})",
                hp.tower_dims, hp.label, hp.stabilized_dim
            );
        }
    }
    // Morita invariance at desk scale: HC(M2(C)) matches HC(C)
    let c = builtin("C").unwrap();
    let m2 = builtin("M2").unwrap();
    let hc_c = cyclic_homology(&c, 4, 6, CyclicModel::Mixed)?;
    let hc_m2 = cyclic_homology(&m2, 4, 6, CyclicModel::Mixed)?;
    for (a, b) in hc_c.iter().zip(&hc_m2) {
        assert_eq!(a.dim, b.dim, "Morita at degree {}", a.degree);
    }
    println!("\nMorita check: dim HC_n(M2(C)) = dim HC_n(C) for n <= 4");
    Ok(())
}
