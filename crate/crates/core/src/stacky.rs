//! Combinatorial data of a toric DM stack and the invariants of its quotient
//! presentation.
//!
//! The data is a lattice `N = Z^d`, a simplicial fan with chosen ray vectors
//! `a_rho`, positive integers `r_1..r_R` and an `R x n` integer matrix `b`.
//! The stack is the quotient of an open subset of `C^n` by the group
//! `G = Hom(coker([B Q]^T), C*)`, where `B` stacks the ray coordinates over
//! the rows of `b` and `Q` is zero above `diag(r)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fan::{
    is_admissible_zero_pattern, rays_span, validate_fan, Cone, FanViolation, SimplicialFan,
    ZeroPattern,
};
use crate::lattice::{
    cokernel, gcd_all, rank, solve_linear, Cokernel, CokernelElement,
    FgAbelianGroup, IntegerMatrix,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackyData {
    fan: SimplicialFan,
    r: Vec<BigInt>,
    b: IntegerMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DataViolation {
    Fan(FanViolation),
    /// Some `r_i` is not a positive integer.
    NonPositiveRoot { index: usize, value: BigInt },
    BRowCount { expected: usize, found: usize },
    BColumnCount { expected: usize, found: usize },
}

impl DataViolation {
    pub fn code(&self) -> &'static str {
        match self {
            DataViolation::Fan(v) => v.code(),
            DataViolation::NonPositiveRoot { .. } => "non_positive_root",
            DataViolation::BRowCount { .. } => "b_row_count",
            DataViolation::BColumnCount { .. } => "b_column_count",
        }
    }
}

impl fmt::Display for DataViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataViolation::Fan(v) => write!(f, "{v}"),
            DataViolation::NonPositiveRoot { index, value } => write!(
                f,
                "r[{index}] = {value}: the r_i must be positive non zero integers"
            ),
            DataViolation::BRowCount { expected, found } => {
                write!(f, "b has {found} rows, expected one per r_i ({expected})")
            }
            DataViolation::BColumnCount { expected, found } => {
                write!(f, "b has {found} columns, expected one per ray ({expected})")
            }
        }
    }
}

impl StackyData {
    /// Stores the data as given; see [`validate_data`].
    pub fn new(fan: SimplicialFan, r: Vec<BigInt>, b: IntegerMatrix) -> Self {
        StackyData { fan, r, b }
    }

    /// Data with no root constructions (`R = 0`).
    pub fn rigid(fan: SimplicialFan) -> Self {
        let n = fan.num_rays();
        StackyData {
            fan,
            r: Vec::new(),
            b: IntegerMatrix::zeros(0, n),
        }
    }

    pub fn fan(&self) -> &SimplicialFan {
        &self.fan
    }

    pub fn lattice_rank(&self) -> usize {
        self.fan.lattice_rank()
    }

    pub fn num_rays(&self) -> usize {
        self.fan.num_rays()
    }

    /// Number of root constructions `R`.
    pub fn num_roots(&self) -> usize {
        self.r.len()
    }

    pub fn r(&self) -> &[BigInt] {
        &self.r
    }

    pub fn b(&self) -> &IntegerMatrix {
        &self.b
    }

    pub fn b_row(&self, i: usize) -> &[BigInt] {
        self.b.row(i)
    }
}

/// Checks the fan axioms, positivity of every `r_i` and the shape of `b`.
pub fn validate_data(data: &StackyData) -> std::result::Result<(), DataViolation> {
    validate_fan(&data.fan).map_err(DataViolation::Fan)?;
    if let Some((index, value)) = data.r.iter().enumerate().find(|(_, x)| !x.is_positive()) {
        return Err(DataViolation::NonPositiveRoot {
            index,
            value: value.clone(),
        });
    }
    if data.b.rows() != data.r.len() {
        return Err(DataViolation::BRowCount {
            expected: data.r.len(),
            found: data.b.rows(),
        });
    }
    if data.b.cols() != data.num_rays() {
        return Err(DataViolation::BColumnCount {
            expected: data.num_rays(),
            found: data.b.cols(),
        });
    }
    Ok(())
}

/// `B` is `(d+R) x n`: the ray coordinates over the rows of `b`. `Q` is
/// `(d+R) x R`: zero on the first `d` rows, `diag(r)` below.
pub fn build_matrices(data: &StackyData) -> (IntegerMatrix, IntegerMatrix) {
    let d = data.lattice_rank();
    let rr = data.num_roots();
    let b = data.fan.ray_matrix().vstack(&data.b);
    let q = IntegerMatrix::zeros(d, rr).vstack(&IntegerMatrix::diagonal(&data.r));
    (b, q)
}

/// Exponent matrix `[B Q]` of the homomorphism
/// `(lambda, mu) -> (prod_k lambda_k^{a_lk}, mu_i^{r_i} prod_k lambda_k^{b_ik})`.
pub fn psi_exponents(data: &StackyData) -> IntegerMatrix {
    let (b, q) = build_matrices(data);
    b.hstack(&q)
}

/// Rank of the connected component and invariant factors of the component
/// group of `G`, plus the classes of the standard basis characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientGroupDesc {
    pub torus_rank: usize,
    pub finite_part: FgAbelianGroup,
    /// Class of `e_k` in `coker([B Q]^T)` for each of the `n + R` factors of
    /// `(C*)^n x (C*)^R`, in cokernel coordinates.
    pub character_classes: Vec<CokernelElement>,
}

/// `coker([B Q]^T)` as a cokernel of `Z^{n+R}`.
fn character_cokernel(data: &StackyData) -> Cokernel {
    Cokernel::new(&psi_exponents(data).transpose())
}

pub fn quotient_group(data: &StackyData) -> QuotientGroupDesc {
    let coker = character_cokernel(data);
    let m = coker.ambient_rank();
    let character_classes = (0..m)
        .map(|k| {
            let e: Vec<BigInt> = (0..m).map(|j| BigInt::from((j == k) as i64)).collect();
            coker.class_of(&e)
        })
        .collect();
    let group = coker.group();
    QuotientGroupDesc {
        torus_rank: group.free_rank(),
        finite_part: group.torsion(),
        character_classes,
    }
}

/// Ray of the stacky fan in `N + Z/r_1 + ... + Z/r_R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedRay {
    pub lattice: Vec<BigInt>,
    /// `b_{i rho} mod r_i`, in `[0, r_i)`.
    pub residues: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackyFan {
    pub extended_group: FgAbelianGroup,
    pub fan: SimplicialFan,
    pub lifted_rays: Vec<LiftedRay>,
}

/// The stacky fan `(N + Z/r_1 + ... + Z/r_R, fan, (a_rho, b_rho mod r))`.
/// Requires the rays to span `N_Q`.
pub fn stacky_fan(data: &StackyData) -> Result<StackyFan> {
    let span = rays_span(&data.fan);
    if !span.spans {
        return Err(Error::NonSpanningRays {
            rank: span.rank,
            lattice_rank: data.lattice_rank(),
        });
    }
    let lifted_rays = (0..data.num_rays())
        .map(|k| LiftedRay {
            lattice: data.fan.ray(k).to_vec(),
            residues: data
                .r
                .iter()
                .enumerate()
                .map(|(i, ri)| data.b[(i, k)].mod_floor(ri))
                .collect(),
        })
        .collect();
    Ok(StackyFan {
        extended_group: FgAbelianGroup::from_cyclic_orders(data.lattice_rank(), &data.r),
        fan: data.fan.clone(),
        lifted_rays,
    })
}

/// The band `Z/r_1 + ... + Z/r_R` of the gerbe over the rigidification,
/// which is the stabilizer of a generic point.
pub fn generic_stabilizer(data: &StackyData) -> FgAbelianGroup {
    FgAbelianGroup::from_cyclic_orders(0, &data.r)
}

/// Isotropy group of a point whose coordinates vanish exactly on the rays of
/// `cone`: the character group `coker([B Q]^T)` modulo the characters of the
/// coordinates that stay nonzero.
pub fn point_stabilizer(data: &StackyData, cone: &[usize]) -> Result<FgAbelianGroup> {
    if !data.fan.contains_cone(cone) {
        return Err(Error::ConeNotInFan(cone.to_vec()));
    }
    let n = data.num_rays();
    let m = n + data.num_roots();
    let nonvanishing: Vec<usize> = (0..n).filter(|k| !cone.contains(k)).collect();
    let mut units = IntegerMatrix::zeros(m, nonvanishing.len());
    for (j, &k) in nonvanishing.iter().enumerate() {
        units[(k, j)] = BigInt::one();
    }
    let relations = psi_exponents(data).transpose().hstack(&units);
    Ok(cokernel(&relations))
}

/// Stabilizers of every cone of the fan, in the fan's cone order.
pub fn stabilizers_of_all_cones(
    data: &StackyData,
    exec: Execution,
) -> Vec<(Cone, FgAbelianGroup)> {
    exec.map(data.fan.cones(), |cone| {
        let g = point_stabilizer(data, cone).expect("cone taken from the fan");
        (cone.clone(), g)
    })
}

/// Same fan and rays with the root data dropped.
pub fn rigidify(data: &StackyData) -> StackyData {
    StackyData::rigid(data.fan.clone())
}

/// Re-expresses the data in a basis of the saturation `N'` of the ray span and
/// returns it with the rank `k = d - rank N'` of the split-off torus factor.
/// Spanning data is returned unchanged with `k = 0`.
pub fn split_nonspanning(data: &StackyData) -> (StackyData, usize) {
    let span = rays_span(&data.fan);
    if span.spans {
        return (data.clone(), 0);
    }
    let d = data.lattice_rank();
    let basis = IntegerMatrix::from_columns(d, &span.saturation_basis);
    let rays = data
        .fan
        .rays()
        .iter()
        .map(|a| {
            solve_linear(&basis, a)
                .particular
                .expect("ray lies in its own saturated span")
        })
        .collect();
    let fan = data.fan.with_rays(span.rank, rays);
    (
        StackyData::new(fan, data.r.clone(), data.b.clone()),
        d - span.rank,
    )
}

/// `a_rho = multiplicity * primitive` with `primitive` the generator of
/// `rho ∩ N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayDecomposition {
    pub primitive: Vec<BigInt>,
    pub multiplicity: BigInt,
}

pub fn canonical_ray_decomposition(data: &StackyData) -> Vec<RayDecomposition> {
    data.fan
        .rays()
        .iter()
        .map(|a| {
            let g = gcd_all(a);
            RayDecomposition {
                primitive: a.iter().map(|x| x / &g).collect(),
                multiplicity: g,
            }
        })
        .collect()
}

/// Dimension and band of the Deligne-Mumford torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DmTorus {
    pub dimension: usize,
    pub gerbe_part: FgAbelianGroup,
    /// The all-nonzero zero pattern is admissible, so the torus is open in the stack.
    pub dense_torus_admissible: bool,
}

pub fn dm_torus(data: &StackyData) -> DmTorus {
    DmTorus {
        dimension: data.lattice_rank(),
        gerbe_part: generic_stabilizer(data),
        dense_torus_admissible: is_admissible_zero_pattern(&data.fan, &ZeroPattern::empty()),
    }
}

/// `|det|` of the ray vectors of a full-dimensional cone.
pub fn cone_multiplicity(data: &StackyData, cone: &[usize]) -> Option<BigInt> {
    (cone.len() == data.lattice_rank()).then(|| {
        crate::lattice::determinant(&data.fan.ray_matrix().select_columns(cone)).abs()
    })
}

/// `rank([B Q])`, exposed for the torus-rank bookkeeping.
pub fn psi_rank(data: &StackyData) -> usize {
    rank(&psi_exponents(data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::lattice::int_vec;

    fn cyclic(orders: &[i64]) -> FgAbelianGroup {
        FgAbelianGroup::from_cyclic_orders(0, &int_vec(orders))
    }

    #[test]
    fn validation() {
        assert_eq!(validate_data(&StackyData::rigid(crate::fan::standard::projective_space(1))), Ok(()));
        let bad = StackyData::new(
            crate::fan::standard::projective_space(1),
            int_vec(&[0]),
            IntegerMatrix::from_i64(&[&[0, 0]]),
        );
        assert!(matches!(validate_data(&bad), Err(DataViolation::NonPositiveRoot { index: 0, .. })));
        let bad = StackyData::new(
            crate::fan::standard::projective_space(1),
            int_vec(&[2]),
            IntegerMatrix::from_i64(&[&[0, 0, 1]]),
        );
        assert_eq!(
            validate_data(&bad),
            Err(DataViolation::BColumnCount { expected: 2, found: 3 })
        );
    }

    #[test]
    fn root_gerbe_matrices() {
        let data = weighted_root_gerbe();
        let (b, q) = build_matrices(&data);
        assert_eq!(b, IntegerMatrix::from_i64(&[&[-3, 2], &[0, 1]]));
        assert_eq!(q, IntegerMatrix::from_i64(&[&[0], &[2]]));
        assert_eq!(psi_exponents(&data), IntegerMatrix::from_i64(&[&[-3, 2, 0], &[0, 1, 2]]));
    }

    #[test]
    fn affine_quotient_matrices() {
        let data = affine_line_mod(3);
        let (b, q) = build_matrices(&data);
        assert_eq!(b, IntegerMatrix::from_i64(&[&[3]]));
        assert_eq!((q.rows(), q.cols()), (1, 0));
        assert_eq!(psi_exponents(&data), b);
        let p1 = StackyData::rigid(crate::fan::standard::projective_space(1));
        assert_eq!(
            build_matrices(&StackyData::rigid(crate::fan::standard::line_with_rays(1, 1))).0,
            IntegerMatrix::from_i64(&[&[-1, 1]])
        );
        assert_eq!(psi_exponents(&p1), build_matrices(&p1).0);
    }

    #[test]
    fn quotient_groups() {
        let g = quotient_group(&weighted_root_gerbe());
        assert_eq!(g.torus_rank, 1);
        assert!(g.finite_part.is_trivial());
        assert_eq!(g.character_classes.len(), 3);

        let g = quotient_group(&affine_line_mod(3));
        assert_eq!(g.torus_rank, 0);
        assert_eq!(g.finite_part, cyclic(&[3]));

        let g = quotient_group(&StackyData::rigid(crate::fan::standard::projective_space(2)));
        assert_eq!(g.torus_rank, 1);
        assert!(g.finite_part.is_trivial());
    }

    #[test]
    fn stacky_fan_lifts() {
        let sf = stacky_fan(&weighted_root_gerbe()).unwrap();
        assert_eq!(sf.extended_group, FgAbelianGroup::from_cyclic_orders(1, &int_vec(&[2])));
        assert_eq!(sf.lifted_rays[0].lattice, int_vec(&[-3]));
        assert_eq!(sf.lifted_rays[0].residues, int_vec(&[0]));
        assert_eq!(sf.lifted_rays[1].residues, int_vec(&[1]));

        let sf = stacky_fan(&StackyData::rigid(crate::fan::standard::projective_space(2))).unwrap();
        assert_eq!(sf.extended_group, FgAbelianGroup::free(2));
        assert!(sf.lifted_rays.iter().all(|l| l.residues.is_empty()));

        let err = stacky_fan(&single_ray_in_plane(1, 0)).unwrap_err();
        assert_eq!(err, Error::NonSpanningRays { rank: 1, lattice_rank: 2 });
    }

    #[test]
    fn stabilizers() {
        let data = weighted_root_gerbe();
        assert_eq!(generic_stabilizer(&data), cyclic(&[2]));
        assert_eq!(point_stabilizer(&data, &[]).unwrap(), cyclic(&[2]));
        assert_eq!(point_stabilizer(&data, &[0]).unwrap(), cyclic(&[6]));
        assert_eq!(point_stabilizer(&data, &[1]).unwrap(), cyclic(&[4]));
        assert_eq!(
            point_stabilizer(&data, &[0, 1]).unwrap_err(),
            Error::ConeNotInFan(vec![0, 1])
        );

        let a3 = affine_line_mod(3);
        assert_eq!(point_stabilizer(&a3, &[0]).unwrap(), cyclic(&[3]));
        assert!(point_stabilizer(&a3, &[]).unwrap().is_trivial());

        let gen = StackyData::new(
            crate::fan::standard::projective_space(1),
            int_vec(&[2, 3]),
            IntegerMatrix::from_i64(&[&[0, 1], &[1, 1]]),
        );
        assert_eq!(generic_stabilizer(&gen), cyclic(&[6]));
        assert!(generic_stabilizer(&rigidify(&gen)).is_trivial());
    }

    #[test]
    fn all_cone_batch_matches_single_queries() {
        let data = weighted_root_gerbe();
        for mode in [Execution::Sequential, Execution::Parallel] {
            let all = stabilizers_of_all_cones(&data, mode);
            assert_eq!(all.len(), 3);
            for (cone, g) in all {
                assert_eq!(g, point_stabilizer(&data, &cone).unwrap());
            }
        }
    }

    #[test]
    fn rigidification() {
        let r = rigidify(&weighted_root_gerbe());
        assert_eq!(r.num_roots(), 0);
        assert_eq!(r.fan(), weighted_root_gerbe().fan());
        assert_eq!(rigidify(&r), r);
    }

    #[test]
    fn splitting() {
        let data = weighted_root_gerbe();
        assert_eq!(split_nonspanning(&data), (data.clone(), 0));

        let (split, k) = split_nonspanning(&single_ray_in_plane(1, 0));
        assert_eq!(k, 1);
        assert_eq!(split.lattice_rank(), 1);
        assert_eq!(split.fan().rays(), &[int_vec(&[1])]);

        let (split, k) = split_nonspanning(&single_ray_in_plane(2, 4));
        assert_eq!(k, 1);
        assert_eq!(split.fan().rays(), &[int_vec(&[2])]);
        assert_eq!(split_nonspanning(&split), (split.clone(), 0));
    }

    #[test]
    fn ray_decomposition() {
        let dec = canonical_ray_decomposition(&affine_line_mod(6));
        assert_eq!(dec[0].primitive, int_vec(&[1]));
        assert_eq!(dec[0].multiplicity, BigInt::from(6));
        let dec = canonical_ray_decomposition(&single_ray_in_plane(2, 4));
        assert_eq!(dec[0].primitive, int_vec(&[1, 2]));
        assert_eq!(dec[0].multiplicity, BigInt::from(2));
        let dec = canonical_ray_decomposition(&weighted_root_gerbe());
        assert_eq!(dec[0].primitive, int_vec(&[-1]));
        assert_eq!(dec[0].multiplicity, BigInt::from(3));
    }

    #[test]
    fn dm_tori() {
        let t = dm_torus(&weighted_root_gerbe());
        assert_eq!(t.dimension, 1);
        assert_eq!(t.gerbe_part, cyclic(&[2]));
        assert!(t.dense_torus_admissible);
        let t = dm_torus(&StackyData::rigid(crate::fan::standard::projective_space(2)));
        assert_eq!((t.dimension, t.gerbe_part.is_trivial()), (2, true));
        let data = StackyData::new(
            crate::fan::standard::projective_space(1),
            int_vec(&[4, 6]),
            IntegerMatrix::zeros(2, 2),
        );
        assert_eq!(dm_torus(&data).gerbe_part, cyclic(&[2, 12]));
    }

    #[test]
    fn torus_rank_bookkeeping() {
        let data = weighted_root_gerbe();
        let q = quotient_group(&data);
        assert_eq!(q.torus_rank, data.num_rays() + data.num_roots() - psi_rank(&data));
        assert_eq!(q.torus_rank, data.num_rays() - data.lattice_rank());
    }
}
