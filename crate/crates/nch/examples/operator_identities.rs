//! The operator calculus on noncommutative forms: builds b, b', d,
//! lambda, N, kappa, B as exact sparse matrices and verifies the
//! identities that tie them together, including the Karoubi homotopy
//! formula and the X-complex supercomplex property.
//!
//! Run with: cargo run --release --example operator_identities

use nch::algebra::builtin;
use nch::forms::{tilde_block_check, Convention, FormsCtx, OpKind};
use nch::suites::{all_pass, operators_suite};

fn main() -> Result<(), nch::error::NchError> {
    let n_max = 6;
    for name in ["C", "C2", "dual", "M2", "upper2"] {
        let a = builtin(name).unwrap();
        let assertions = operators_suite(&a, n_max)?;
        let passed = assertions.iter().filter(|x| x.pass).count();
        println!("{name}: {passed}/{} operator identities hold", assertions.len());
        assert!(all_pass(&assertions));
    }

    // a closer look at one identity on the dual numbers
    let a = builtin("dual").unwrap();
    let ctx = FormsCtx::new(&a, Convention::Reduced, n_max)?;
    let n = 3;
    let kappa = ctx.op(OpKind::Kappa, n)?;
    println!("\nkappa on Omega^{n}(dual) has {} nonzero entries", kappa.nnz());
    let d = ctx.op(OpKind::D, n)?;
    let b_up = ctx.op(OpKind::B, n + 1)?;
    let b = ctx.op(OpKind::B, n)?;
    let d_dn = ctx.op(OpKind::D, n - 1)?;
    let laplacian = b_up.compose(&d).add(&d_dn.compose(&b));
    let id = nch::linalg::SparseMat::identity(ctx.space(n).dim());
    assert_eq!(laplacian, id.sub(&kappa));
    println!("bd + db = 1 - kappa verified entrywise on Omega^{n}");

    // nonunital block formalism on the unitalization
    let strict = builtin("strict_upper2").unwrap();
    let report = tilde_block_check(&strict, 4)?;
    for (name, ok) in &report.checks {
        println!("  [{}] {name}", if *ok { "ok" } else { "FAIL" });
    }
    assert!(report.all_pass());
    Ok(())
}
