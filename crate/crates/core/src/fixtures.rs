//! Named data sets used by tests, benches and the command-line examples.

use num_bigint::BigInt;

use crate::fan::standard::{affine_space, line_with_rays, projective_space};
use crate::fan::SimplicialFan;
use crate::lattice::{int_vec, IntegerMatrix};
use crate::stacky::StackyData;

/// `N = Z`, rays `a = -3` and `a = 2`, one square root (`r = 2`) with
/// `b = (0, 1)`: a square root of `O(1)` on the weighted projective line
/// `P(3,2)`.
pub fn weighted_root_gerbe() -> StackyData {
    StackyData::new(
        line_with_rays(3, 2),
        int_vec(&[2]),
        IntegerMatrix::from_i64(&[&[0, 1]]),
    )
}

/// `N = Z`, the single ray `Q_{>=0}` with `a = a`, no roots: the quotient
/// `[A^1 / mu_a]`.
pub fn affine_line_mod(a: i64) -> StackyData {
    let fan = SimplicialFan::from_maximal_cones(1, vec![int_vec(&[a])], &[vec![0]]);
    StackyData::rigid(fan)
}

/// One ray `(x, y)` in `Z^2`, no roots.
pub fn single_ray_in_plane(x: i64, y: i64) -> StackyData {
    let fan = SimplicialFan::from_maximal_cones(2, vec![int_vec(&[x, y])], &[vec![0]]);
    StackyData::rigid(fan)
}

/// `P^1` (rays `-1`, `+1`) with one root of order `r` and `b = (b_minus, b_plus)`.
pub fn projective_line_root(r: i64, b_minus: i64, b_plus: i64) -> StackyData {
    StackyData::new(
        projective_space_line(),
        vec![BigInt::from(r)],
        IntegerMatrix::from_i64(&[&[b_minus, b_plus]]),
    )
}

/// `P^1` with ray order `(-1, +1)`.
pub fn projective_space_line() -> SimplicialFan {
    line_with_rays(1, 1)
}

pub fn rigid_projective_space(n: usize) -> StackyData {
    StackyData::rigid(projective_space(n))
}

pub fn rigid_affine_space(n: usize) -> StackyData {
    StackyData::rigid(affine_space(n))
}
