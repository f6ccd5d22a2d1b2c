use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toricstack::gerbe::{canonicalize, compare_banded, gerbe_class, is_isomorphic_banded, picard_of_rigidification, PicClass};
use toricstack::lattice::IntegerMatrix;
use toricstack::oracle::{oracle_band_isomorphism, oracle_divisibility, OracleError};
use toricstack::random::{random_data, DataBounds};
use toricstack::stacky::{generic_stabilizer, StackyData};

fn bounds() -> DataBounds {
    DataBounds {
        max_roots: 3,
        max_root: 6,
        ..DataBounds::default()
    }
}

fn chain_data(seed: u64) -> StackyData {
    let data = random_data(&mut ChaCha8Rng::seed_from_u64(seed), &bounds());
    canonicalize(&data).data
}

/// Same data with `b` replaced.
fn with_b(data: &StackyData, rows: Vec<Vec<BigInt>>) -> StackyData {
    let b = IntegerMatrix::from_rows(data.num_rays(), &rows);
    StackyData::new(data.fan().clone(), data.r().to_vec(), b)
}

fn b_rows(data: &StackyData) -> Vec<Vec<BigInt>> {
    (0..data.num_roots()).map(|i| data.b_row(i).to_vec()).collect()
}

/// `row + sum_l c_l <e_l, a_.>`.
fn add_relations<R: Rng>(rng: &mut R, data: &StackyData, row: &[BigInt]) -> Vec<BigInt> {
    let rays = data.fan().ray_matrix();
    let mut out = row.to_vec();
    for l in 0..data.lattice_rank() {
        let c = BigInt::from(rng.gen_range(-3..=3));
        for (k, x) in out.iter_mut().enumerate() {
            *x += &c * &rays[(l, k)];
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reflexive_and_symmetric(seed in any::<u64>(), other in any::<u64>()) {
        let a = chain_data(seed);
        prop_assert!(is_isomorphic_banded(&a, &a).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(other);
        let rows = (0..a.num_roots())
            .map(|_| (0..a.num_rays()).map(|_| BigInt::from(rng.gen_range(-6..=6))).collect())
            .collect();
        let b = with_b(&a, rows);
        prop_assert_eq!(is_isomorphic_banded(&a, &b).unwrap(), is_isomorphic_banded(&b, &a).unwrap());
    }

    #[test]
    fn relation_shifts_are_invisible(seed in any::<u64>(), shift in any::<u64>()) {
        let a = chain_data(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(shift);
        let pic = picard_of_rigidification(&a);
        let rows: Vec<Vec<BigInt>> = b_rows(&a)
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut out = add_relations(&mut rng, &a, row);
                for x in out.iter_mut() {
                    *x += &a.r()[i] * BigInt::from(rng.gen_range(-2..=2));
                }
                out
            })
            .collect();
        let b = with_b(&a, rows);
        prop_assert!(is_isomorphic_banded(&a, &b).unwrap());
        for i in 0..a.num_roots() {
            let (ca, cb) = (gerbe_class(&a, i).unwrap(), gerbe_class(&b, i).unwrap());
            let diff = ca.sub(&cb);
            prop_assert!(pic.is_divisible(&diff, &a.r()[i]));
            // Without the r-multiple the class itself is unchanged.
            let only_relations = PicClass::new(add_relations(&mut rng, &a, a.b_row(i)));
            prop_assert!(pic.class_eq(&ca, &only_relations));
        }
    }

    #[test]
    fn divisibility_verdicts_match_enumeration(seed in any::<u64>(), other in any::<u64>()) {
        let a = chain_data(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(other);
        let rows = (0..a.num_roots())
            .map(|_| (0..a.num_rays()).map(|_| BigInt::from(rng.gen_range(-6..=6))).collect())
            .collect();
        let b = with_b(&a, rows);
        let cmp = compare_banded(&a, &b).unwrap();
        let relations = a.fan().ray_matrix().transpose();
        for i in 0..a.num_roots() {
            let diff: Vec<BigInt> = a.b_row(i).iter().zip(b.b_row(i)).map(|(x, y)| x - y).collect();
            match oracle_divisibility(&diff, &a.r()[i], &relations) {
                Ok(expected) => prop_assert_eq!(cmp.divisibility[i], expected),
                Err(OracleError::TooLarge { .. }) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }

    #[test]
    fn canonicalize_properties(seed in any::<u64>()) {
        let data = random_data(&mut ChaCha8Rng::seed_from_u64(seed), &bounds());
        let once = canonicalize(&data);
        let twice = canonicalize(&once.data);
        prop_assert_eq!(generic_stabilizer(&once.data).order(), generic_stabilizer(&data).order());
        prop_assert_eq!(generic_stabilizer(&once.data), generic_stabilizer(&data));
        prop_assert_eq!(twice.data.r(), once.data.r());
        prop_assert!(is_isomorphic_banded(&twice.data, &once.data).unwrap());
        prop_assert!(is_isomorphic_banded(&once.data, &once.data).unwrap());
        prop_assert!(oracle_band_isomorphism(data.r(), &once.certificate, once.data.r()).unwrap());
    }
}
