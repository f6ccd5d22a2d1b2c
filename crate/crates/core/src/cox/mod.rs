//! Morphisms into a toric stack given by homogeneous polynomials in the Cox
//! ring of a complete rigid source.
//!
//! A tuple `(P_rho)` indexed by the target rays, with classes `chi_i` for the
//! target roots, defines a morphism when (a) the degree classes satisfy the
//! linear relations imposed by the target data and (b) the polynomial map
//! sends the open locus of the source into that of the target. Two tuples give
//! 2-isomorphic morphisms when they differ by the action of the target group.

mod poly;
pub mod relations;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fan::{is_admissible_zero_pattern, is_complete, maximal_cones, rays_span, ZeroPattern};
use crate::gerbe::{picard_of_rigidification, PicClass, PicardPresentation};
use crate::lattice::solve_linear;
use crate::stacky::StackyData;

pub use poly::SparsePolynomial;
pub use relations::multiplicative_relation_holds;

/// Common degree of all terms of `p` in `Pic` of the source.
pub fn degree(p: &SparsePolynomial, pic: &PicardPresentation) -> Result<PicClass> {
    let mut terms = p.terms();
    let Some((first, _)) = terms.next() else {
        return Err(Error::ZeroPolynomial);
    };
    let class_of = |e: &Vec<u32>| PicClass::new(e.iter().map(|&x| BigInt::from(x)).collect());
    let base = class_of(first);
    for (idx, (e, _)) in terms.enumerate() {
        if !pic.class_eq(&base, &class_of(e)) {
            return Err(Error::NotHomogeneous {
                first: 0,
                second: idx + 1,
            });
        }
    }
    Ok(base)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismData {
    source: StackyData,
    target: StackyData,
    polys: Vec<SparsePolynomial>,
    chi: Vec<PicClass>,
}

impl MorphismData {
    /// Checks the shape of the data and the standing hypotheses: rigid and
    /// complete source, spanning target rays.
    pub fn new(
        source: StackyData,
        target: StackyData,
        polys: Vec<SparsePolynomial>,
        chi: Vec<PicClass>,
    ) -> Result<Self> {
        if source.num_roots() != 0 {
            return Err(Error::NotRigid(source.num_roots()));
        }
        if !is_complete(source.fan()) {
            return Err(Error::SourceNotComplete);
        }
        if !rays_span(target.fan()).spans {
            return Err(Error::TargetNotSpanning);
        }
        if polys.len() != target.num_rays() {
            return Err(Error::MalformedMorphism(format!(
                "{} polynomials for {} target rays",
                polys.len(),
                target.num_rays()
            )));
        }
        let n = source.num_rays();
        if let Some(p) = polys.iter().find(|p| p.num_vars() != n) {
            return Err(Error::MalformedMorphism(format!(
                "polynomial in {} variables, source has {n} rays",
                p.num_vars()
            )));
        }
        if chi.len() != target.num_roots() {
            return Err(Error::MalformedMorphism(format!(
                "{} chi classes for {} target roots",
                chi.len(),
                target.num_roots()
            )));
        }
        if chi.iter().any(|c| c.representative.len() != n) {
            return Err(Error::MalformedMorphism(
                "chi class representative has the wrong length".into(),
            ));
        }
        Ok(MorphismData {
            source,
            target,
            polys,
            chi,
        })
    }

    pub fn source(&self) -> &StackyData {
        &self.source
    }

    pub fn target(&self) -> &StackyData {
        &self.target
    }

    pub fn polys(&self) -> &[SparsePolynomial] {
        &self.polys
    }

    pub fn chi(&self) -> &[PicClass] {
        &self.chi
    }

    /// Same data with each `P_rho` multiplied by `factors[rho]`.
    pub fn scaled(&self, factors: &[BigRational]) -> MorphismData {
        let polys = self
            .polys
            .iter()
            .zip(factors)
            .map(|(p, k)| p.scale(k))
            .collect();
        MorphismData {
            polys,
            ..self.clone()
        }
    }
}

/// Which relations of condition (a) hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionA {
    /// For each coordinate `l` of `N`: `sum_rho a_{l rho} chi_rho = 0`.
    pub torus_relations: Vec<bool>,
    /// For each root `i`: `sum_rho b_{i rho} chi_rho + r_i chi_i = 0`.
    pub root_relations: Vec<bool>,
}

impl ConditionA {
    pub fn holds(&self) -> bool {
        self.torus_relations.iter().chain(&self.root_relations).all(|&x| x)
    }
}

pub fn check_condition_a(md: &MorphismData) -> Result<ConditionA> {
    let pic = picard_of_rigidification(&md.source);
    let n = md.source.num_rays();
    let chi_rho = md
        .polys
        .iter()
        .map(|p| degree(p, &pic))
        .collect::<Result<Vec<_>>>()?;
    let rays = md.target.fan().ray_matrix();
    let torus_relations = (0..md.target.lattice_rank())
        .map(|l| pic.is_zero(&PicClass::combination(n, rays.row(l), &chi_rho)))
        .collect();
    let root_relations = (0..md.target.num_roots())
        .map(|i| {
            let sum = PicClass::combination(n, md.target.b_row(i), &chi_rho)
                .add(&md.chi[i].scale(&md.target.r()[i]));
            pic.is_zero(&sum)
        })
        .collect();
    Ok(ConditionA {
        torus_relations,
        root_relations,
    })
}

/// A source point of the open locus whose image leaves the target's open locus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    /// Zero pattern of `point`; admissible on the source.
    pub source_pattern: ZeroPattern,
    pub point: Vec<BigRational>,
    /// Target rays where the image vanishes; not admissible on the target.
    pub image_pattern: ZeroPattern,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConditionBVerdict {
    Proven,
    Refuted(Refutation),
    Unknown,
}

/// Sample grid and budget for the refutation search used on non-monomial
/// tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplingConfig {
    pub seed: u64,
    /// Total number of sample points, spread evenly over the zero patterns.
    pub budget: usize,
    pub values: Vec<BigRational>,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        SamplingConfig {
            seed: 0,
            budget: 512,
            values: vec![q(1, 1), q(-1, 1), q(2, 1), q(-2, 1), q(3, 1), q(-3, 1), q(1, 2), q(-1, 2)],
        }
    }
}

fn image_pattern_at(md: &MorphismData, point: &[BigRational]) -> ZeroPattern {
    md.polys
        .iter()
        .enumerate()
        .filter(|(_, p)| p.evaluate(point).is_zero())
        .map(|(k, _)| k)
        .collect()
}

fn point_with_zeros(n: usize, pattern: &ZeroPattern) -> Vec<BigRational> {
    (0..n)
        .map(|k| {
            if pattern.contains(k) {
                BigRational::zero()
            } else {
                BigRational::one()
            }
        })
        .collect()
}

/// Re-checks a refutation from scratch.
pub fn verify_refutation(md: &MorphismData, refutation: &Refutation) -> bool {
    let n = md.source.num_rays();
    if refutation.point.len() != n {
        return false;
    }
    let zeros: ZeroPattern = (0..n).filter(|&k| refutation.point[k].is_zero()).collect();
    zeros == refutation.source_pattern
        && is_admissible_zero_pattern(md.source.fan(), &zeros)
        && image_pattern_at(md, &refutation.point) == refutation.image_pattern
        && !is_admissible_zero_pattern(md.target.fan(), &refutation.image_pattern)
}

/// Decides condition (b) exactly when every nonzero `P_rho` is a monomial;
/// otherwise searches for a refuting sample point and answers `Unknown` if
/// none is found. Never answers `Proven` without a proof.
pub fn check_condition_b(
    md: &MorphismData,
    sampling: &SamplingConfig,
    exec: Execution,
) -> ConditionBVerdict {
    let n = md.source.num_rays();
    let always_zero: Vec<usize> = (0..md.polys.len()).filter(|&k| md.polys[k].is_zero()).collect();

    if md.polys.iter().all(|p| p.is_zero() || p.is_monomial()) {
        // A monomial vanishes at z iff its support meets the zero set of z,
        // so the worst source patterns are the maximal ones.
        let supports: Vec<_> = md.polys.iter().map(|p| p.support()).collect();
        let maximal = maximal_cones(md.source.fan());
        let failing = exec.find_map_first(&maximal, |cone| {
            let image: ZeroPattern = (0..md.polys.len())
                .filter(|&k| always_zero.contains(&k) || cone.iter().any(|v| supports[k].contains(v)))
                .collect();
            (!is_admissible_zero_pattern(md.target.fan(), &image)).then(|| {
                let source_pattern: ZeroPattern = cone.iter().copied().collect();
                Refutation {
                    point: point_with_zeros(n, &source_pattern),
                    source_pattern,
                    image_pattern: image,
                }
            })
        });
        return match failing {
            Some(r) => ConditionBVerdict::Refuted(r),
            None => ConditionBVerdict::Proven,
        };
    }

    let candidates = sample_points(md, sampling);
    let found = exec.find_map_first(&candidates, |(pattern, point)| {
        let image = image_pattern_at(md, point);
        (!is_admissible_zero_pattern(md.target.fan(), &image)).then(|| Refutation {
            source_pattern: pattern.clone(),
            point: point.clone(),
            image_pattern: image,
        })
    });
    match found {
        Some(r) => ConditionBVerdict::Refuted(r),
        None => ConditionBVerdict::Unknown,
    }
}

/// Deterministic sample points: for every cone of the source (every
/// admissible zero pattern), the all-ones point and then random draws from
/// the sample grid off the pattern.
fn sample_points(md: &MorphismData, sampling: &SamplingConfig) -> Vec<(ZeroPattern, Vec<BigRational>)> {
    let n = md.source.num_rays();
    let mut patterns: Vec<ZeroPattern> = md
        .source
        .fan()
        .cones()
        .iter()
        .map(|c| c.iter().copied().collect())
        .collect();
    patterns.sort_by(|a: &ZeroPattern, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let per_pattern = (sampling.budget / patterns.len().max(1)).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    let mut out = Vec::with_capacity(per_pattern * patterns.len());
    for pattern in &patterns {
        out.push((pattern.clone(), point_with_zeros(n, pattern)));
        for _ in 1..per_pattern {
            if sampling.values.is_empty() {
                break;
            }
            let point = (0..n)
                .map(|k| {
                    if pattern.contains(k) {
                        BigRational::zero()
                    } else {
                        sampling.values[rng.gen_range(0..sampling.values.len())].clone()
                    }
                })
                .collect();
            out.push((pattern.clone(), point));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwoIsoVerdict {
    /// `P'_rho = ratios[rho] * P_rho`; `None` where both polynomials vanish
    /// and the ratio is unconstrained.
    Yes { ratios: Vec<Option<BigRational>> },
    No { reason: String },
    /// Reserved for ratios outside `Q`; unreachable with rational input.
    Unknown,
}

/// Decides whether the two tuples differ by an element of the target group.
///
/// Writing `P'_rho = lambda_rho P_rho`, the tuples are related iff
/// `prod_rho lambda_rho^{<m, a_rho>} = 1` for every `m` orthogonal to the rays
/// whose ratio is unconstrained (all of `M` when every ratio is determined).
/// The components on the root factors always exist since `C*` is divisible.
pub fn check_two_isomorphic(first: &MorphismData, second: &MorphismData) -> Result<TwoIsoVerdict> {
    if first.source != second.source || first.target != second.target {
        return Err(Error::MismatchedSourceTarget);
    }
    let pic = picard_of_rigidification(&first.source);
    if first
        .chi
        .iter()
        .zip(&second.chi)
        .any(|(a, b)| !pic.class_eq(a, b))
    {
        return Err(Error::MismatchedSourceTarget);
    }

    let mut ratios = Vec::with_capacity(first.polys.len());
    for (k, (p, q)) in first.polys.iter().zip(&second.polys).enumerate() {
        match (p.is_zero(), q.is_zero()) {
            (true, true) => ratios.push(None),
            (false, false) => match p.ratio_to(q) {
                Some(lambda) => ratios.push(Some(lambda)),
                None => {
                    return Ok(TwoIsoVerdict::No {
                        reason: format!("P_{k} and P'_{k} are not proportional"),
                    })
                }
            },
            _ => {
                return Ok(TwoIsoVerdict::No {
                    reason: format!("exactly one of P_{k}, P'_{k} vanishes"),
                })
            }
        }
    }

    let rays = first.target.fan().ray_matrix();
    let free: Vec<usize> = (0..ratios.len()).filter(|&k| ratios[k].is_none()).collect();
    let fixed: Vec<usize> = (0..ratios.len()).filter(|&k| ratios[k].is_some()).collect();
    let free_rays_t = rays.select_columns(&free).transpose();
    let characters = solve_linear(&free_rays_t, &vec![BigInt::zero(); free.len()]).kernel_basis;
    let values: Vec<BigRational> = fixed.iter().map(|&k| ratios[k].clone().unwrap()).collect();
    let fixed_rays = rays.select_columns(&fixed);
    for m in &characters {
        let exponents = fixed_rays.transpose().mul_vec(m);
        if !multiplicative_relation_holds(&values, &exponents) {
            return Ok(TwoIsoVerdict::No {
                reason: format!("ratios violate the character relation m = {m:?}"),
            });
        }
    }
    Ok(TwoIsoVerdict::Yes { ratios })
}
