//! Exact integer linear algebra: Smith normal form, cokernels, finitely
//! generated abelian groups and integer linear systems.

mod group;
mod matrix;
mod snf;
mod solve;

pub use group::{cokernel, invariant_factor_chain, Cokernel, CokernelElement, FgAbelianGroup};
pub use matrix::{int_vec, IntegerMatrix};
pub use snf::{smith_normal_form, SnfDecomposition};
pub use solve::{divisible_in_quotient, in_column_span, solve_linear, LinearSolution};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

/// Rank over the rationals.
pub fn rank(m: &IntegerMatrix) -> usize {
    smith_normal_form(m).rank()
}

/// Nonnegative gcd of a list, 0 for the empty or all-zero list.
pub fn gcd_all(values: &[BigInt]) -> BigInt {
    values.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// Determinant of a square matrix by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntegerMatrix) -> BigInt {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = num / &prev;
            }
        }
        prev = a[(k, k)].clone();
    }
    if n == 0 {
        return BigInt::from(1);
    }
    sign * &a[(n - 1, n - 1)]
}
