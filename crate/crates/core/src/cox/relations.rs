//! Exact test of multiplicative relations `prod_k q_k^{e_k} = 1` in `Q*`.
//!
//! Magnitudes are factored over a gcd-free basis of all numerators and
//! denominators, which plays the role of a prime factorization without
//! factoring any integer; the relation holds iff every basis exponent sums to
//! zero and the sign product is positive.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Pairwise coprime integers `> 1` such that every input `> 1` is a product
/// of their powers.
pub fn gcd_free_basis(values: &[BigInt]) -> Vec<BigInt> {
    let mut basis: Vec<BigInt> = values
        .iter()
        .map(|x| x.abs())
        .filter(|x| *x > BigInt::one())
        .collect();
    'refine: loop {
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let g = basis[i].gcd(&basis[j]);
                if g.is_one() {
                    continue;
                }
                let (a, b) = (basis[i].clone(), basis[j].clone());
                basis.swap_remove(j);
                basis.swap_remove(i);
                if a != b {
                    basis.extend([&a / &g, g.clone(), &b / &g].into_iter().filter(|x| !x.is_one()));
                } else {
                    basis.push(a);
                }
                continue 'refine;
            }
        }
        break;
    }
    basis.sort();
    basis
}

/// Exponents of `x` over `basis`; `x` must be a product of basis powers.
fn valuations(x: &BigInt, basis: &[BigInt]) -> Vec<i64> {
    let mut rest = x.abs();
    let v = basis
        .iter()
        .map(|p| {
            let mut k = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                k += 1;
            }
            k
        })
        .collect();
    debug_assert!(rest.is_one(), "value not supported on the basis");
    v
}

/// True iff `prod_k values[k]^{exponents[k]} = 1` exactly.
pub fn multiplicative_relation_holds(values: &[BigRational], exponents: &[BigInt]) -> bool {
    assert_eq!(values.len(), exponents.len(), "one exponent per value");
    assert!(values.iter().all(|v| !v.is_zero()), "values must be units");

    let two = BigInt::from(2);
    let negative_weight: BigInt = values
        .iter()
        .zip(exponents)
        .filter(|(v, _)| v.is_negative())
        .map(|(_, e)| e.clone())
        .sum();
    if !negative_weight.is_multiple_of(&two) {
        return false;
    }

    let mut atoms = Vec::new();
    for v in values {
        atoms.push(v.numer().clone());
        atoms.push(v.denom().clone());
    }
    let basis = gcd_free_basis(&atoms);
    let mut totals = vec![BigInt::zero(); basis.len()];
    for (v, e) in values.iter().zip(exponents) {
        if e.is_zero() {
            continue;
        }
        let num = valuations(v.numer(), &basis);
        let den = valuations(v.denom(), &basis);
        for j in 0..basis.len() {
            totals[j] += e * BigInt::from(num[j] - den[j]);
        }
    }
    totals.iter().all(Zero::is_zero)
}
