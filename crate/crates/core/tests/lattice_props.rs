use num_bigint::BigInt;
use proptest::prelude::*;
use toricstack::lattice::{
    cokernel, divisible_in_quotient, invariant_factor_chain, smith_normal_form, FgAbelianGroup,
    IntegerMatrix,
};
use toricstack::oracle::{oracle_divisibility, oracle_quotient_enumerate, oracle_verify_snf, OracleError, MAX_ORDER};

fn matrix(max_dim: usize, max_abs: i64) -> impl Strategy<Value = IntegerMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-max_abs..=max_abs, c), r)
            .prop_map(move |rows| IntegerMatrix::from_rows(c, &rows))
    })
}

fn permuted_columns(m: &IntegerMatrix, shift: usize) -> IntegerMatrix {
    let order: Vec<usize> = (0..m.cols()).map(|j| (j + shift) % m.cols()).collect();
    m.select_columns(&order)
}

fn permuted_rows(m: &IntegerMatrix, shift: usize) -> IntegerMatrix {
    let order: Vec<usize> = (0..m.rows()).map(|i| (i + shift) % m.rows()).collect();
    m.select_rows(&order)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn snf_passes_oracle(a in matrix(6, 20)) {
        let dec = smith_normal_form(&a);
        prop_assert!(oracle_verify_snf(&a, &dec));
        prop_assert_eq!(dec.reconstruct(), a);
    }

    #[test]
    fn cokernel_is_invariant(a in matrix(5, 9), shift in 0usize..6, coeffs in proptest::collection::vec(-3i64..=3, 6)) {
        let g = cokernel(&a);
        prop_assert_eq!(&cokernel(&permuted_columns(&a, shift)), &g);
        // Permuting coordinates of the ambient lattice is an automorphism.
        prop_assert_eq!(&cokernel(&permuted_rows(&a, shift)), &g);
        let extra: Vec<BigInt> = (0..a.rows())
            .map(|i| (0..a.cols()).map(|j| &a[(i, j)] * BigInt::from(coeffs[j % coeffs.len()])).sum())
            .collect();
        let widened = a.hstack(&IntegerMatrix::from_columns(a.rows(), &[extra]));
        prop_assert_eq!(&cokernel(&widened), &g);
    }

    #[test]
    fn divisibility_matches_enumeration(
        rel in matrix(3, 6),
        v in proptest::collection::vec(-8i64..=8, 3),
        r in 1i64..=6,
    ) {
        let v: Vec<BigInt> = v.into_iter().take(rel.rows()).map(BigInt::from).collect();
        prop_assume!(v.len() == rel.rows());
        let r = BigInt::from(r);
        match oracle_divisibility(&v, &r, &rel) {
            Ok(expected) => prop_assert_eq!(divisible_in_quotient(&v, &r, &rel), expected),
            Err(OracleError::TooLarge { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected oracle error {e}"),
        }
    }

    #[test]
    fn chain_matches_census(orders in proptest::collection::vec(1i64..=12, 0..=4)) {
        let orders: Vec<BigInt> = orders.into_iter().map(BigInt::from).collect();
        let chain = invariant_factor_chain(&orders);
        let product: BigInt = orders.iter().product();
        prop_assert_eq!(chain.iter().product::<BigInt>(), product.clone());
        if product <= BigInt::from(MAX_ORDER) {
            let table = oracle_quotient_enumerate(&IntegerMatrix::diagonal(&orders), MAX_ORDER).unwrap();
            let census: Vec<BigInt> = table.invariant_factors().into_iter().map(BigInt::from).collect();
            prop_assert_eq!(chain.clone(), census);
        }
        let group = FgAbelianGroup::from_cyclic_orders(0, &orders);
        prop_assert_eq!(group.invariant_factors(), &chain[..]);
    }
}

#[test]
fn presentation_cokernel_matches_enumeration() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for _ in 0..200 {
        let a = toricstack::random::random_matrix(&mut rng, 3, 4, 6);
        let g = cokernel(&a);
        match oracle_quotient_enumerate(&a, MAX_ORDER) {
            Ok(table) => {
                checked += 1;
                assert_eq!(g.order(), Some(BigInt::from(table.order())));
                let census: Vec<BigInt> = table.invariant_factors().into_iter().map(BigInt::from).collect();
                assert_eq!(g.invariant_factors(), &census[..]);
            }
            Err(OracleError::Infinite) => assert!(!g.is_finite()),
            Err(OracleError::TooLarge { order, .. }) => assert_eq!(g.order(), Some(order)),
        }
    }
    assert!(checked > 50);
}
