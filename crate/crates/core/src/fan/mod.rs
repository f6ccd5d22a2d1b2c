//! Simplicial fans given by explicit ray vectors and cone lists.
//!
//! A ray is stored as the chosen lattice vector `a_rho` on it; the ray itself
//! is `Q_{>=0} a_rho`. Cones are sets of ray indices and must include every
//! face, the empty cone among them.

mod fm;
pub mod standard;

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::lattice::{rank, smith_normal_form, IntegerMatrix};

pub use fm::{feasible_point, Equality, Inequality, Rational};

/// A cone, as the sorted list of its ray indices.
pub type Cone = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialFan {
    lattice_rank: usize,
    rays: Vec<Vec<BigInt>>,
    cones: Vec<Cone>,
}

/// The set of ray indices on which a point's coordinates vanish.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZeroPattern(pub BTreeSet<usize>);

impl ZeroPattern {
    pub fn empty() -> Self {
        ZeroPattern(BTreeSet::new())
    }

    pub fn contains(&self, ray: usize) -> bool {
        self.0.contains(&ray)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.iter().copied().collect()
    }
}

impl FromIterator<usize> for ZeroPattern {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        ZeroPattern(iter.into_iter().collect())
    }
}

/// First violated fan axiom, with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FanViolation {
    WrongRayDimension { ray: usize, expected: usize, found: usize },
    ZeroRay { ray: usize },
    RayIndexOutOfRange { cone: Cone, index: usize },
    RepeatedRayInCone { cone: Cone },
    DuplicateCone { cone: Cone },
    /// Two rays point in the same direction.
    DuplicateRayDirection { first: usize, second: usize },
    RayNotInFan { ray: usize },
    /// The rays of this cone are linearly dependent.
    NotSimplicial { cone: Cone },
    /// `face` is a face of `cone` but is not listed.
    MissingFace { cone: Cone, face: Cone },
    /// `point` lies in both cones but not in the cone on their common rays.
    BadIntersection {
        first: Cone,
        second: Cone,
        point: Vec<BigRational>,
    },
}

impl FanViolation {
    /// Stable identifier for machine-readable reports.
    pub fn code(&self) -> &'static str {
        match self {
            FanViolation::WrongRayDimension { .. } => "wrong_ray_dimension",
            FanViolation::ZeroRay { .. } => "zero_ray",
            FanViolation::RayIndexOutOfRange { .. } => "ray_index_out_of_range",
            FanViolation::RepeatedRayInCone { .. } => "repeated_ray_in_cone",
            FanViolation::DuplicateCone { .. } => "duplicate_cone",
            FanViolation::DuplicateRayDirection { .. } => "duplicate_ray_direction",
            FanViolation::RayNotInFan { .. } => "ray_not_in_fan",
            FanViolation::NotSimplicial { .. } => "not_simplicial",
            FanViolation::MissingFace { .. } => "missing_face",
            FanViolation::BadIntersection { .. } => "bad_intersection",
        }
    }
}

impl fmt::Display for FanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FanViolation::WrongRayDimension { ray, expected, found } => {
                write!(f, "ray {ray} has {found} coordinates, lattice rank is {expected}")
            }
            FanViolation::ZeroRay { ray } => write!(f, "ray {ray} is the zero vector"),
            FanViolation::RayIndexOutOfRange { cone, index } => {
                write!(f, "cone {cone:?} refers to missing ray {index}")
            }
            FanViolation::RepeatedRayInCone { cone } => {
                write!(f, "cone {cone:?} lists a ray twice")
            }
            FanViolation::DuplicateCone { cone } => write!(f, "cone {cone:?} listed twice"),
            FanViolation::DuplicateRayDirection { first, second } => {
                write!(f, "rays {first} and {second} span the same half-line")
            }
            FanViolation::RayNotInFan { ray } => {
                write!(f, "ray {ray} is not a one-dimensional cone of the fan")
            }
            FanViolation::NotSimplicial { cone } => {
                write!(f, "rays of cone {cone:?} are linearly dependent")
            }
            FanViolation::MissingFace { cone, face } => {
                write!(f, "face {face:?} of cone {cone:?} is not listed")
            }
            FanViolation::BadIntersection { first, second, point } => {
                let p: Vec<String> = point.iter().map(|x| x.to_string()).collect();
                write!(
                    f,
                    "cones {first:?} and {second:?} meet at ({}) outside their common face",
                    p.join(", ")
                )
            }
        }
    }
}

/// Whether the rays span `Q^d`, and an integer basis of the saturation
/// `N' = span(rays) ∩ N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaySpan {
    pub spans: bool,
    pub rank: usize,
    /// Basis vectors of `N'`, each in `Z^d`.
    pub saturation_basis: Vec<Vec<BigInt>>,
}

impl SimplicialFan {
    /// Stores the data as given (cone index lists are sorted); call
    /// [`validate_fan`] before relying on the fan axioms.
    pub fn new(lattice_rank: usize, rays: Vec<Vec<BigInt>>, cones: Vec<Cone>) -> Self {
        let cones = cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        SimplicialFan {
            lattice_rank,
            rays,
            cones,
        }
    }

    /// Builds a fan from its maximal cones, adding every face.
    pub fn from_maximal_cones(
        lattice_rank: usize,
        rays: Vec<Vec<BigInt>>,
        maximal: &[Cone],
    ) -> Self {
        let mut all: BTreeSet<Cone> = BTreeSet::new();
        all.insert(Vec::new());
        for cone in maximal {
            let mut c = cone.clone();
            c.sort_unstable();
            c.dedup();
            all.extend(subsets(&c));
        }
        Self::new(lattice_rank, rays, all.into_iter().collect())
    }

    /// Adds every missing face to the cone list.
    pub fn closed_under_faces(&self) -> Self {
        let mut seen: HashSet<Cone> = HashSet::new();
        let mut cones = Vec::new();
        let mut push = |c: Cone, cones: &mut Vec<Cone>| {
            if seen.insert(c.clone()) {
                cones.push(c);
            }
        };
        push(Vec::new(), &mut cones);
        for cone in &self.cones {
            let mut c = cone.clone();
            c.dedup();
            for face in subsets(&c) {
                push(face, &mut cones);
            }
        }
        cones.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        SimplicialFan {
            lattice_rank: self.lattice_rank,
            rays: self.rays.clone(),
            cones,
        }
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn ray(&self, k: usize) -> &[BigInt] {
        &self.rays[k]
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    /// `d x n` matrix whose columns are the ray vectors.
    pub fn ray_matrix(&self) -> IntegerMatrix {
        IntegerMatrix::from_columns(self.lattice_rank, &self.rays)
    }

    pub fn contains_cone(&self, cone: &[usize]) -> bool {
        let mut c = cone.to_vec();
        c.sort_unstable();
        c.dedup();
        self.cones.contains(&c)
    }

    /// Same combinatorics with new ray vectors in a lattice of rank `lattice_rank`.
    pub fn with_rays(&self, lattice_rank: usize, rays: Vec<Vec<BigInt>>) -> Self {
        assert_eq!(rays.len(), self.rays.len(), "ray count must not change");
        SimplicialFan {
            lattice_rank,
            rays,
            cones: self.cones.clone(),
        }
    }

    /// Cone sets compared as sets, ignoring list order.
    pub fn same_cones(&self, other: &SimplicialFan) -> bool {
        let a: BTreeSet<&Cone> = self.cones.iter().collect();
        let b: BTreeSet<&Cone> = other.cones.iter().collect();
        a == b
    }
}

/// All subsets of a sorted index list, each sorted.
fn subsets(cone: &[usize]) -> Vec<Cone> {
    assert!(cone.len() < usize::BITS as usize, "cone too large to enumerate");
    (0..1usize << cone.len())
        .map(|mask| {
            cone.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &r)| r)
                .collect()
        })
        .collect()
}

fn same_direction(a: &[BigInt], b: &[BigInt]) -> bool {
    // Parallel iff all 2x2 minors vanish; same side iff the dot product is positive.
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if &a[i] * &b[j] != &a[j] * &b[i] {
                return false;
            }
        }
    }
    let dot: BigInt = a.iter().zip(b).map(|(x, y)| x * y).sum();
    dot.is_positive()
}

fn to_rational(x: &BigInt) -> Rational {
    Rational::from_integer(x.clone())
}

/// Searches for a point of `cone(first) ∩ cone(second)` whose coordinates in
/// `first` put positive weight outside the common rays.
fn intersection_witness(fan: &SimplicialFan, first: &Cone, second: &Cone) -> Option<Vec<Rational>> {
    let only_first: Vec<usize> = first.iter().filter(|r| !second.contains(r)).copied().collect();
    if only_first.is_empty() {
        return None;
    }
    let d = fan.lattice_rank;
    let nvars = first.len() + second.len();
    let mut equalities = Vec::with_capacity(d + 1);
    for l in 0..d {
        let mut coeffs = Vec::with_capacity(nvars);
        coeffs.extend(first.iter().map(|&r| to_rational(&fan.rays[r][l])));
        coeffs.extend(second.iter().map(|&r| -to_rational(&fan.rays[r][l])));
        equalities.push(Equality {
            coeffs,
            value: Rational::zero(),
        });
    }
    let mut norm = vec![Rational::zero(); nvars];
    for (i, r) in first.iter().enumerate() {
        if only_first.contains(r) {
            norm[i] = Rational::one();
        }
    }
    equalities.push(Equality {
        coeffs: norm,
        value: Rational::one(),
    });
    let inequalities: Vec<Inequality> = (0..nvars)
        .map(|i| {
            let mut coeffs = vec![Rational::zero(); nvars];
            coeffs[i] = -Rational::one();
            Inequality {
                coeffs,
                bound: Rational::zero(),
            }
        })
        .collect();
    let weights = feasible_point(nvars, &equalities, &inequalities)?;
    let point = (0..d)
        .map(|l| {
            first
                .iter()
                .zip(&weights)
                .map(|(&r, w)| w * to_rational(&fan.rays[r][l]))
                .fold(Rational::zero(), |a, b| a + b)
        })
        .collect();
    Some(point)
}

/// Checks every fan axiom and returns the first violation found.
pub fn validate_fan(fan: &SimplicialFan) -> Result<(), FanViolation> {
    let d = fan.lattice_rank;
    let n = fan.rays.len();
    for (k, ray) in fan.rays.iter().enumerate() {
        if ray.len() != d {
            return Err(FanViolation::WrongRayDimension {
                ray: k,
                expected: d,
                found: ray.len(),
            });
        }
        if ray.iter().all(Zero::is_zero) {
            return Err(FanViolation::ZeroRay { ray: k });
        }
    }

    let mut seen = HashSet::new();
    for cone in &fan.cones {
        if let Some(&index) = cone.iter().find(|&&i| i >= n) {
            return Err(FanViolation::RayIndexOutOfRange {
                cone: cone.clone(),
                index,
            });
        }
        if cone.windows(2).any(|w| w[0] == w[1]) {
            return Err(FanViolation::RepeatedRayInCone { cone: cone.clone() });
        }
        if !seen.insert(cone.clone()) {
            return Err(FanViolation::DuplicateCone { cone: cone.clone() });
        }
    }

    for i in 0..n {
        for j in i + 1..n {
            if same_direction(&fan.rays[i], &fan.rays[j]) {
                return Err(FanViolation::DuplicateRayDirection { first: i, second: j });
            }
        }
    }

    for k in 0..n {
        if !seen.contains(&vec![k]) {
            return Err(FanViolation::RayNotInFan { ray: k });
        }
    }

    for cone in &fan.cones {
        if rank(&fan.ray_matrix().select_columns(cone)) != cone.len() {
            return Err(FanViolation::NotSimplicial { cone: cone.clone() });
        }
    }

    for cone in &fan.cones {
        for face in subsets(cone) {
            if !seen.contains(&face) {
                return Err(FanViolation::MissingFace {
                    cone: cone.clone(),
                    face,
                });
            }
        }
    }

    // With face closure and simpliciality in place, checking maximal pairs
    // covers every pair of cones.
    let maximal = maximal_cones(fan);
    for (i, first) in maximal.iter().enumerate() {
        for second in &maximal[i + 1..] {
            for (a, b) in [(first, second), (second, first)] {
                if let Some(point) = intersection_witness(fan, a, b) {
                    return Err(FanViolation::BadIntersection {
                        first: a.clone(),
                        second: b.clone(),
                        point,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Cones not strictly contained in another listed cone.
pub fn maximal_cones(fan: &SimplicialFan) -> Vec<Cone> {
    fan.cones
        .iter()
        .filter(|c| {
            !fan.cones
                .iter()
                .any(|o| o.len() > c.len() && c.iter().all(|r| o.contains(r)))
        })
        .cloned()
        .collect()
}

/// Facet-pairing completeness test: the fan is pure of full dimension, each
/// codimension-one face of a maximal cone lies in exactly two maximal cones,
/// and maximal cones are connected through shared facets.
pub fn is_complete(fan: &SimplicialFan) -> bool {
    let d = fan.lattice_rank;
    let maximal = maximal_cones(fan);
    if maximal.iter().any(|c| c.len() != d) {
        return false;
    }
    if d == 0 {
        return true;
    }
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); maximal.len()];
    for (i, cone) in maximal.iter().enumerate() {
        for skip in 0..cone.len() {
            let facet: Vec<usize> = cone
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != skip)
                .map(|(_, &r)| r)
                .collect();
            let holders: Vec<usize> = maximal
                .iter()
                .enumerate()
                .filter(|(_, m)| facet.iter().all(|r| m.contains(r)))
                .map(|(j, _)| j)
                .collect();
            if holders.len() != 2 {
                return false;
            }
            adjacency[i].extend(holders.into_iter().filter(|&j| j != i));
        }
    }
    let mut reached = vec![false; maximal.len()];
    let mut stack = vec![0];
    reached[0] = true;
    while let Some(i) = stack.pop() {
        for &j in &adjacency[i] {
            if !reached[j] {
                reached[j] = true;
                stack.push(j);
            }
        }
    }
    reached.into_iter().all(|x| x)
}

/// Rank of the rays and an integer basis of their saturation in `N`.
///
/// The basis is read off the left Smith transform of the ray matrix; each
/// vector's sign is fixed so its first nonzero coordinate is positive.
pub fn rays_span(fan: &SimplicialFan) -> RaySpan {
    let a = fan.ray_matrix();
    let snf = smith_normal_form(&a);
    let r = snf.rank();
    let saturation_basis = (0..r)
        .map(|j| {
            let col = snf.u.column(j);
            let negative = col.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
            if negative {
                col.into_iter().map(|x| -x).collect()
            } else {
                col
            }
        })
        .collect();
    RaySpan {
        spans: r == fan.lattice_rank,
        rank: r,
        saturation_basis,
    }
}

/// True iff some maximal cone contains every ray of the pattern.
pub fn is_admissible_zero_pattern(fan: &SimplicialFan, pattern: &ZeroPattern) -> bool {
    maximal_cones(fan)
        .iter()
        .any(|m| pattern.iter().all(|r| m.contains(&r)))
}

/// Ray sets of the maximal cones: the largest zero patterns allowed on the
/// open locus of the quotient construction.
pub fn irrelevant_patterns(fan: &SimplicialFan) -> Vec<ZeroPattern> {
    maximal_cones(fan)
        .into_iter()
        .map(|c| c.into_iter().collect())
        .collect()
}
