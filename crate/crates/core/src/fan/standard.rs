//! Standard fans: projective and affine spaces, weighted projective lines,
//! and products.

use num_bigint::BigInt;

use super::{Cone, SimplicialFan};

fn unit(d: usize, i: usize) -> Vec<BigInt> {
    (0..d).map(|j| BigInt::from((i == j) as i64)).collect()
}

/// Fan of `P^n`: rays `e_1, ..., e_n, -(e_1 + ... + e_n)`, every proper
/// subset of rays a cone.
pub fn projective_space(n: usize) -> SimplicialFan {
    let mut rays: Vec<Vec<BigInt>> = (0..n).map(|i| unit(n, i)).collect();
    rays.push(vec![BigInt::from(-1); n]);
    let maximal: Vec<Cone> = (0..=n)
        .map(|skip| (0..=n).filter(|&k| k != skip).collect())
        .collect();
    SimplicialFan::from_maximal_cones(n, rays, &maximal)
}

/// Fan of `A^n`: the positive orthant.
pub fn affine_space(n: usize) -> SimplicialFan {
    let rays = (0..n).map(|i| unit(n, i)).collect();
    SimplicialFan::from_maximal_cones(n, rays, &[(0..n).collect()])
}

/// Complete fan in `Z` with rays `-first` and `second` (both positive), the
/// combinatorial shape of a weighted projective line.
pub fn line_with_rays(first: i64, second: i64) -> SimplicialFan {
    assert!(first > 0 && second > 0, "ray lengths must be positive");
    SimplicialFan::from_maximal_cones(
        1,
        vec![vec![BigInt::from(-first)], vec![BigInt::from(second)]],
        &[vec![0], vec![1]],
    )
}

/// Product fan in `N_1 + N_2`; rays of `a` come first.
pub fn product(a: &SimplicialFan, b: &SimplicialFan) -> SimplicialFan {
    let (da, db) = (a.lattice_rank(), b.lattice_rank());
    let na = a.num_rays();
    let zero = BigInt::from(0);
    let mut rays = Vec::with_capacity(na + b.num_rays());
    for r in a.rays() {
        let mut v = r.clone();
        v.extend(std::iter::repeat_n(zero.clone(), db));
        rays.push(v);
    }
    for r in b.rays() {
        let mut v = vec![zero.clone(); da];
        v.extend(r.iter().cloned());
        rays.push(v);
    }
    let cones = a
        .cones()
        .iter()
        .flat_map(|ca| {
            b.cones().iter().map(move |cb| {
                let mut c = ca.clone();
                c.extend(cb.iter().map(|&k| k + na));
                c
            })
        })
        .collect();
    SimplicialFan::new(da + db, rays, cones)
}
