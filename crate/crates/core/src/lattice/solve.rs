use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::matrix::IntegerMatrix;
use super::snf::smith_normal_form;

/// Integer solution set of `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    /// A particular solution, absent when no integer solution exists.
    pub particular: Option<Vec<BigInt>>,
    /// Basis of the integer kernel of `A`.
    pub kernel_basis: Vec<Vec<BigInt>>,
}

/// Solves `A x = b` over the integers.
pub fn solve_linear(a: &IntegerMatrix, b: &[BigInt]) -> LinearSolution {
    assert_eq!(a.rows(), b.len(), "right-hand side has wrong length");
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let diag = snf.diagonal();
    let kernel_basis = (rank..a.cols()).map(|j| snf.v_inv.column(j)).collect();

    // D y = U^-1 b, x = V^-1 y.
    let c = snf.u_inv.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.cols()];
    let mut solvable = c[rank..].iter().all(Zero::is_zero);
    if solvable {
        for i in 0..rank {
            let (q, r) = c[i].div_rem(&diag[i]);
            if !r.is_zero() {
                solvable = false;
                break;
            }
            y[i] = q;
        }
    }
    LinearSolution {
        particular: solvable.then(|| snf.v_inv.mul_vec(&y)),
        kernel_basis,
    }
}

/// True iff `v` lies in the column span of `relations` over the integers.
pub fn in_column_span(relations: &IntegerMatrix, v: &[BigInt]) -> bool {
    solve_linear(relations, v).particular.is_some()
}

/// True iff the class of `v` vanishes in `Z^n / (r Z^n + span(relations))`.
pub fn divisible_in_quotient(v: &[BigInt], r: &BigInt, relations: &IntegerMatrix) -> bool {
    let n = v.len();
    assert_eq!(relations.rows(), n, "relations live in a different ambient lattice");
    let scaled = IntegerMatrix::identity(n).scale(r);
    in_column_span(&scaled.hstack(relations), v)
}
