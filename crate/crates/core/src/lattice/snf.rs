//! Smith normal form over the integers.
//!
//! The decomposition is stored as `A = U * D * V` with `U`, `V` unimodular and
//! `D` diagonal with `d_1 | d_2 | ... | d_k`, nonnegative, zeros trailing. The
//! inverses of both transforms are tracked alongside, since every consumer
//! (cokernel coordinates, solving, saturation) needs one of them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntegerMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    /// Left transform, `rows x rows`.
    pub u: IntegerMatrix,
    /// Diagonal factor, same shape as the input.
    pub d: IntegerMatrix,
    /// Right transform, `cols x cols`.
    pub v: IntegerMatrix,
    /// `U^-1`.
    pub u_inv: IntegerMatrix,
    /// `V^-1`.
    pub v_inv: IntegerMatrix,
}

impl SnfDecomposition {
    /// Diagonal of `D`, including unit and zero entries.
    pub fn diagonal(&self) -> Vec<BigInt> {
        self.d.diagonal_entries()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }

    pub fn reconstruct(&self) -> IntegerMatrix {
        &(&self.u * &self.d) * &self.v
    }
}

struct Work {
    a: IntegerMatrix,
    u: IntegerMatrix,
    u_inv: IntegerMatrix,
    v: IntegerMatrix,
    v_inv: IntegerMatrix,
}

// Invariant maintained by every operation: A = u * a * v.
impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_cols(i, j);
        self.u_inv.swap_rows(i, j);
    }

    /// row_i += k * row_j
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        self.a.add_row_multiple(i, j, k);
        self.u.add_col_multiple(j, i, &-k);
        self.u_inv.add_row_multiple(i, j, k);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_col(i);
        self.u_inv.negate_row(i);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_rows(i, j);
        self.v_inv.swap_cols(i, j);
    }

    /// col_i += k * col_j
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        self.a.add_col_multiple(i, j, k);
        self.v.add_row_multiple(j, i, &-k);
        self.v_inv.add_col_multiple(i, j, k);
    }

    /// Smallest nonzero |entry| in the trailing block starting at (t, t).
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[(bi, bj)].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }
}

/// Computes `A = U * D * V` with minimal-absolute-value pivoting.
pub fn smith_normal_form(matrix: &IntegerMatrix) -> SnfDecomposition {
    let (m, n) = (matrix.rows(), matrix.cols());
    let mut w = Work {
        a: matrix.clone(),
        u: IntegerMatrix::identity(m),
        u_inv: IntegerMatrix::identity(m),
        v: IntegerMatrix::identity(n),
        v_inv: IntegerMatrix::identity(n),
    };

    for t in 0..m.min(n) {
        let Some(_) = w.min_pivot(t) else { break };
        loop {
            let (pi, pj) = w.min_pivot(t).expect("block is nonzero");
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let pivot = w.a[(t, t)].clone();

            let mut clean = true;
            for i in t + 1..m {
                let q = w.a[(i, t)].div_floor(&pivot);
                w.add_row(i, t, &-q);
                clean &= w.a[(i, t)].is_zero();
            }
            for j in t + 1..n {
                let q = w.a[(t, j)].div_floor(&pivot);
                w.add_col(j, t, &-q);
                clean &= w.a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }

            // Enforce the divisor chain: pull a non-multiple into row t.
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !w.a[(i, j)].is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => w.add_row(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
    }

    SnfDecomposition {
        u: w.u,
        d: w.a,
        v: w.v,
        u_inv: w.u_inv,
        v_inv: w.v_inv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::matrix::int_vec;

    fn check(a: &IntegerMatrix) -> SnfDecomposition {
        let s = smith_normal_form(a);
        assert_eq!(&s.reconstruct(), a);
        assert_eq!(&s.u * &s.u_inv, IntegerMatrix::identity(a.rows()));
        assert_eq!(&s.v * &s.v_inv, IntegerMatrix::identity(a.cols()));
        assert!(s.d.is_diagonal());
        s
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntegerMatrix::identity(2));
        assert_eq!(s.d, IntegerMatrix::identity(2));
    }

    #[test]
    fn coprime_diagonal_merges() {
        let s = check(&IntegerMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal(), int_vec(&[1, 6]));
    }

    #[test]
    fn root_gerbe_psi_matrix() {
        let s = check(&IntegerMatrix::from_i64(&[&[-3, 2, 0], &[0, 1, 2]]));
        assert_eq!(s.d, IntegerMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0]]));
    }

    #[test]
    fn empty_and_zero_matrices() {
        let s = check(&IntegerMatrix::zeros(0, 3));
        assert_eq!(s.rank(), 0);
        let s = check(&IntegerMatrix::zeros(2, 0));
        assert_eq!(s.u, IntegerMatrix::identity(2));
        let s = check(&IntegerMatrix::zeros(2, 2));
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn negative_and_rank_deficient() {
        let s = check(&IntegerMatrix::from_i64(&[&[-4, -6], &[2, 3], &[6, 9]]));
        assert_eq!(s.diagonal(), int_vec(&[1, 0]));
        let s = check(&IntegerMatrix::from_i64(&[&[4, 0, 0], &[0, 6, 0], &[0, 0, 10]]));
        assert_eq!(s.diagonal(), int_vec(&[2, 2, 60]));
    }
}
