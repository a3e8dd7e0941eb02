//! The harmonic decomposition of noncommutative forms: the spectral
//! projection P onto the generalized 1-eigenspace of the Karoubi
//! operator, the Green operator G, and the contractibility of the
//! complement.
//!
//! Run with: cargo run --release --example harmonic_decomposition

use nch::algebra::builtin;
use nch::forms::{Convention, FormsCtx, OpKind};
use nch::linalg::{rank, SparseMat};

fn main() -> Result<(), nch::error::NchError> {
    for name in ["dual", "C2", "M2"] {
        let a = builtin(name).unwrap();
        let ctx = FormsCtx::new(&a, Convention::Reduced, 5)?;
        println!("algebra {name}:");
        for n in 0..=4 {
            let dim = ctx.space(n).dim();
            if dim == 0 {
                continue;
            }
            let p = ctx.op(OpKind::HarmonicP, n)?;
            let g = ctx.op(OpKind::GreenG, n)?;
            let kappa = ctx.op(OpKind::Kappa, n)?;
            assert_eq!(p.compose(&p), *p.as_ref(), "P^2 = P");
            assert_eq!(p.compose(&kappa), kappa.compose(&p), "P kappa = kappa P");
            assert!(g.compose(&p).is_zero() && p.compose(&g).is_zero());
            let id = SparseMat::identity(dim);
            assert_eq!(g.compose(&id.sub(&kappa)), id.sub(&p));
            println!(
                "  degree {n}: dim Omega = {dim}, rank P = {}, rank (1-P) = {}",
                rank(&p),
                rank(&id.sub(&p))
            );
            if n >= 1 && n < 5 {
                let d = ctx.op(OpKind::D, n)?;
                let b_up = ctx.op(OpKind::B, n + 1)?;
                let b = ctx.op(OpKind::B, n)?;
                let d_dn = ctx.op(OpKind::D, n - 1)?;
                let laplacian = b_up.compose(&d).add(&d_dn.compose(&b));
                // 1 = G (bd + db) on the complement of the harmonic part
                assert_eq!(
                    g.compose(&laplacian).compose(&id.sub(&p)),
                    id.sub(&p),
                    "Green inverts the laplacian off the harmonic part"
                );
            }
        }
    }
    println!("harmonic decomposition verified: P projects, G inverts 1 - kappa off it");
    Ok(())
}
