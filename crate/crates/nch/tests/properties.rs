//! Property tests for the exact kernels: scalar field axioms, sparse
//! linear algebra invariants, the cyclic quotient, and the symbol
//! algebra behind the Toeplitz model.

use nch::algebra::builtin;
use nch::forms::{Convention, FormsCtx, Overflow};
use nch::homology::CyclicBasis;
use nch::linalg::{kernel_basis, rank, rank_reversed, solve, SparseMat, SparseVec};
use nch::ring::Ring;
use nch::scalar::Scalar;
use nch::toeplitz::{LaurentSymbol, ToeplitzOp};
use proptest::prelude::*;

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=9, -6i64..=6, 1i64..=5).prop_map(|(a, b, c, d)| {
        let re = Scalar::ratio(a, b);
        let im = Scalar::ratio(c, d);
        &re + &(&im * &Scalar::i())
    })
}

proptest! {
    #[test]
    fn scalar_field_axioms(a in scalar_strategy(), b in scalar_strategy(), c in scalar_strategy()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), Scalar::one());
        }
        prop_assert_eq!(&a * &a.conj(), Scalar::from_rational(a.norm_sq()));
    }

    #[test]
    fn scalar_parse_roundtrip(a in scalar_strategy()) {
        let text = a.to_string();
        let back: Scalar = text.parse().unwrap();
        prop_assert_eq!(a, back);
    }
}

fn sparse_matrix_strategy(rows: usize, cols: usize) -> impl Strategy<Value = SparseMat> {
    proptest::collection::vec(
        proptest::collection::vec((-3i64..=3).prop_map(Scalar::from_int), rows),
        cols,
    )
    .prop_map(move |data| {
        SparseMat::from_columns(
            rows,
            data.into_iter()
                .map(|col| SparseVec::collect(col.into_iter().enumerate()))
                .collect(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_is_pivot_independent(m in sparse_matrix_strategy(5, 7)) {
        prop_assert_eq!(rank(&m), rank_reversed(&m));
    }

    #[test]
    fn kernel_vectors_annihilate(m in sparse_matrix_strategy(4, 6)) {
        let kernel = kernel_basis(&m);
        prop_assert_eq!(kernel.len(), 6 - rank(&m));
        for v in kernel {
            prop_assert!(m.apply(&v).is_zero());
        }
    }

    #[test]
    fn solve_solves(m in sparse_matrix_strategy(4, 4), xs in proptest::collection::vec(-3i64..=3, 4)) {
        let x = SparseVec::collect(xs.into_iter().map(Scalar::from_int).enumerate());
        let b = m.apply(&x);
        let found = solve(&m, &b).expect("consistent by construction");
        prop_assert_eq!(m.apply(&found), b);
    }
}

fn symbol_strategy() -> impl Strategy<Value = LaurentSymbol> {
    proptest::collection::vec((-3i64..=3, -4i64..=4), 0..5).prop_map(|terms| {
        terms
            .into_iter()
            .fold(LaurentSymbol::zero(), |acc, (c, k)| {
                acc.add(&LaurentSymbol::monomial(k, Scalar::from_int(c)))
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn operator_model_is_a_ring(f in symbol_strategy(), g in symbol_strategy(), h in symbol_strategy()) {
        let a = ToeplitzOp::from_symbol(f);
        let b = ToeplitzOp::from_symbol(g);
        let c = ToeplitzOp::from_symbol(h);
        // associativity and distributivity including Hankel corrections
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        let one = a.one_like();
        prop_assert_eq!(a.mul(&one), a.clone());
        prop_assert_eq!(one.mul(&a), a);
    }

    #[test]
    fn operator_entries_match_products(f in symbol_strategy(), g in symbol_strategy()) {
        // entries of the model product agree with an honest truncated
        // matrix product on a window clear of the band
        let a = ToeplitzOp::from_symbol(f.clone());
        let b = ToeplitzOp::from_symbol(g.clone());
        let prod = a.mul(&b);
        let bound = (f.support_bound() + g.support_bound() + 2) as usize;
        let pad = bound + 8;
        for j in 0..bound {
            for k in 0..bound {
                let mut direct = Scalar::zero();
                for i in 0..=pad {
                    direct += &(&f.coeff(j as i64 - i as i64) * &g.coeff(i as i64 - k as i64));
                }
                prop_assert_eq!(prod.entry(j, k), direct);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cyclic_quotient_constants(dim in 1usize..=3, degree in 0usize..=4) {
        // the class of a rotated tuple equals the signed class of the
        // original, and projecting a lift is the identity
        let basis = CyclicBasis::new(dim, degree);
        for (idx, tuple) in basis.canon.iter().enumerate() {
            let mut rotated = tuple.clone();
            rotated.rotate_right(1);
            if let Some((ridx, sign)) = basis.class_of_tuple(&rotated) {
                // [rot T] = (-1)^(degree) [T]
                let expect = if degree % 2 == 0 { Scalar::one() } else { -Scalar::one() };
                prop_assert_eq!(ridx, idx);
                prop_assert_eq!(sign, expect);
            }
            let lifted = basis.lift(&SparseVec::unit(idx));
            prop_assert_eq!(basis.project_plain(&lifted), SparseVec::unit(idx));
        }
    }

    #[test]
    fn fedosov_associativity_random_chains(seed in 0u64..1000) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let alg = builtin("dual").unwrap();
        let ctx = FormsCtx::new(&alg, Convention::Reduced, 8).unwrap();
        let random_chain = |rng: &mut rand_chacha::ChaCha8Rng| {
            let mut acc = nch::forms::GradedChain::zero(8);
            for deg in 0..=1usize {
                let dim = ctx.space(deg).dim();
                let v = SparseVec::collect(
                    (0..dim).map(|i| (i, Scalar::from_int(rng.gen_range(-2..=2)))),
                );
                acc = acc.add(&nch::forms::GradedChain::single(8, deg, v));
            }
            acc
        };
        let x = random_chain(&mut rng);
        let y = random_chain(&mut rng);
        let z = random_chain(&mut rng);
        let left = ctx
            .fedosov(&ctx.fedosov(&x, &y, Overflow::Strict).unwrap(), &z, Overflow::Strict)
            .unwrap();
        let right = ctx
            .fedosov(&x, &ctx.fedosov(&y, &z, Overflow::Strict).unwrap(), Overflow::Strict)
            .unwrap();
        prop_assert_eq!(left, right);
    }
}
