//! Supertraces on the Fedosov algebra and the cochain calculus: the
//! three equivalent supertrace characterizations, curvature and Bianchi,
//! and the transgression identity b cs = ch.
//!
//! Run with: cargo run --release --example supertraces

use nch::algebra::builtin;
use nch::cochain::{
    bianchi_holds, chern_simons, curvature, supertrace_check, transgression_holds,
    InfiniteCochain, RCochain,
};
use nch::forms::{Convention, FormsCtx};
use nch::linalg::SparseVec;
use nch::scalar::Scalar;

fn main() -> Result<(), nch::error::NchError> {
    // the matrix trace in degree zero is a supertrace
    let m2 = builtin("M2").unwrap();
    let ctx = FormsCtx::new(&m2, Convention::Reduced, 4)?;
    let mut components = vec![SparseVec::zero(); 5];
    components[0] = SparseVec::collect(vec![(0, Scalar::from_int(2)), (1, Scalar::one())]);
    let tau = InfiniteCochain { components };
    let report = supertrace_check(&ctx, &tau)?;
    println!("matrix trace in degree 0 on M2:");
    println!("  vanishes on Fedosov super-commutators: {}", report.supertrace_on_qa);
    println!("  kappa-invariant with tau b = 2 tau d:  {}", report.kappa_and_bd);
    println!("  rescaled (b+B)-cocycle off degree 0:   {}", report.rescaled_cocycle);
    assert!(report.consistent());

    // curvature calculus for a based non-multiplicative lift
    let a = builtin("C2").unwrap();
    let rho = RCochain::from_fn(&a, &m2, 1, |t| {
        if t[0] == 0 {
            SparseVec::unit(0)
        } else {
            SparseVec::unit(2) // s -> e12, not multiplicative
        }
    });
    let omega = curvature(&rho)?;
    println!("\nbased lift C2 -> M2 with s -> e12:");
    println!("  curvature omega is nonzero: {}", !omega.is_zero());
    println!("  Bianchi delta omega + [rho, omega] = 0: {}", bianchi_holds(&rho)?);

    // transgression with a scalar-valued based map
    let ground = builtin("C").unwrap();
    let rho = RCochain::from_fn(&a, &ground, 1, |t| {
        if t[0] == 0 {
            SparseVec::unit(0)
        } else {
            SparseVec::single(0, Scalar::ratio(1, 2))
        }
    });
    let tau0 = SparseVec::unit(0);
    for n in 0..=2usize {
        let holds = transgression_holds(&rho, &tau0, n)?;
        println!("  b cs_{} = ch_{}: {holds}", 2 * n + 1, 2 * n + 2);
        assert!(holds);
    }
    let cs = chern_simons(&rho, &tau0, 1)?;
    println!("  cs_3(1,1,1) = {} (expected 1/2)", cs.value(&[0, 0, 0]));
    Ok(())
}
