//! Higher traces and index pairings: idempotent lifting, the even index
//! theorem (direct formula = Chern pairing) on algebra extensions, and
//! the odd index theorem on the Toeplitz operator model.
//!
//! Run with: cargo run --release --example chern_index

use nch::algebra::{builtin, Extension};
use nch::kindex::{
    chern_character_even, even_index_theorem, lifting_polynomial, EvenHigherTrace,
};
use nch::linalg::SparseVec;
use nch::matrix::RingMatrix;
use nch::scalar::Scalar;
use nch::toeplitz::{odd_toeplitz_theorem, LaurentSymbol};

fn main() -> Result<(), nch::error::NchError> {
    println!("lifting polynomials:");
    for n in 0..=3 {
        let f = lifting_polynomial(n);
        let c: Vec<String> = f.coeffs.iter().map(|x| x.to_string()).collect();
        println!("  f_{n}(x) coefficients (low to high): {:?}", c);
    }

    // even index over the nilpotent extension dual / (eps)
    let r = builtin("dual").unwrap();
    let ext = Extension::new(&r, &[SparseVec::unit(1)])?;
    let tau = SparseVec::collect(vec![(0, Scalar::one()), (1, Scalar::from_int(3))]);
    let ht = EvenHigherTrace::new(ext, 1, tau)?;
    let e = RingMatrix::from_rows(vec![vec![ht.ext.quotient.one_element()]]);
    let (ind, checks) = even_index_theorem(&ht, &e, 1)?;
    println!("\neven higher trace on dual/(eps), m = 1, e = 1:");
    println!("  ind_tau[e] = {ind}");
    for (name, ok) in checks {
        println!("  [{}] {name}", if ok { "ok" } else { "FAIL" });
        assert!(ok);
    }

    // even index with a 2x2 idempotent over the upper-triangular quotient
    let r = builtin("upper2").unwrap();
    let ext = Extension::new(&r, &[SparseVec::unit(2)])?;
    let tau = SparseVec::collect(vec![(0, Scalar::from_int(2)), (1, Scalar::one())]);
    let ht = EvenHigherTrace::new(ext, 1, tau)?;
    let a = &ht.ext.quotient;
    let e = RingMatrix::diag(vec![a.basis_element(1), a.one_element()]);
    let ch = chern_character_even(&e, 1)?;
    println!("\nupper2/strict_upper2, e = diag(s, 1):");
    println!("  Ch_2[e] is a cycle: {}", ch.boundary_is_zero);
    let (ind, checks) = even_index_theorem(&ht, &e, 1)?;
    println!("  ind_tau[e] = {ind}");
    for (name, ok) in checks {
        assert!(ok, "{name}");
    }

    // the odd index theorem on the Toeplitz model: ind_tau[z] = -1
    let theorem = odd_toeplitz_theorem(&LaurentSymbol::z(1), 8)?;
    println!("\nodd Toeplitz higher trace, u = z:");
    println!("  direct formula tau((1-qp)^n - (1-pq)^n) = {}", theorem.direct);
    println!("  Chern character pairing              = {}", theorem.paired);
    assert!(theorem.equal && theorem.stability);
    for (name, ok) in &theorem.connecting_checks {
        println!("  [{}] {name}", if *ok { "ok" } else { "FAIL" });
        assert!(ok);
    }
    Ok(())
}
