use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntegerMatrix;
use super::snf::{smith_normal_form, SnfDecomposition};

/// A finitely generated abelian group `Z^free_rank + Z/f_1 + ... + Z/f_k`
/// with `f_1 | f_2 | ... | f_k` and every `f_i >= 2`.
///
/// Equality compares isomorphism type only; the presentation is carried for
/// reporting and is ignored by `==`.
#[derive(Clone, Debug)]
pub struct FgAbelianGroup {
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
    presentation: Option<IntegerMatrix>,
}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            free_rank: rank,
            invariant_factors: Vec::new(),
            presentation: None,
        }
    }

    /// Group with the given free rank and the cyclic factors `Z/c` for each `c`
    /// in `cyclic_orders`, normalized to invariant-factor form.
    pub fn from_cyclic_orders(free_rank: usize, cyclic_orders: &[BigInt]) -> Self {
        FgAbelianGroup {
            free_rank,
            invariant_factors: invariant_factor_chain(cyclic_orders),
            presentation: None,
        }
    }

    pub fn with_presentation(mut self, relations: IntegerMatrix) -> Self {
        self.presentation = Some(relations);
        self
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn presentation(&self) -> Option<&IntegerMatrix> {
        self.presentation.as_ref()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.invariant_factors.iter().product())
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// The torsion subgroup as a group of its own.
    pub fn torsion(&self) -> FgAbelianGroup {
        FgAbelianGroup {
            free_rank: 0,
            invariant_factors: self.invariant_factors.clone(),
            presentation: None,
        }
    }

    /// Exponent of the torsion part (1 when torsion-free).
    pub fn exponent(&self) -> BigInt {
        self.invariant_factors
            .last()
            .cloned()
            .unwrap_or_else(BigInt::one)
    }
}

impl PartialEq for FgAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.free_rank == other.free_rank && self.invariant_factors == other.invariant_factors
    }
}

impl Eq for FgAbelianGroup {}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        parts.extend(self.invariant_factors.iter().map(|c| format!("Z/{c}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// Invariant factors of `Z/r_1 + ... + Z/r_R`, units dropped.
///
/// Zero entries stand for `Z/0 = Z` and are ignored here; callers that can
/// produce them should count them as free rank instead.
pub fn invariant_factor_chain(orders: &[BigInt]) -> Vec<BigInt> {
    let nonzero: Vec<BigInt> = orders
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| x.abs())
        .collect();
    if nonzero.iter().all(|x| x.is_one()) {
        return Vec::new();
    }
    // Already a chain: no normal-form work needed.
    let chain: Vec<BigInt> = nonzero.iter().filter(|x| !x.is_one()).cloned().collect();
    if chain.windows(2).all(|w| w[1].is_multiple_of(&w[0])) {
        return chain;
    }
    let snf = smith_normal_form(&IntegerMatrix::diagonal(&chain));
    snf.diagonal().into_iter().filter(|x| !x.is_one()).collect()
}

/// Quotient `Z^n / (column span of relations)` together with the coordinate
/// map used to read off classes of vectors.
#[derive(Clone, Debug)]
pub struct Cokernel {
    ambient: usize,
    group: FgAbelianGroup,
    snf: SnfDecomposition,
    /// Diagonal of `D` padded with zeros to length `ambient`.
    moduli: Vec<BigInt>,
}

impl Cokernel {
    pub fn new(relations: &IntegerMatrix) -> Self {
        let n = relations.rows();
        let snf = smith_normal_form(relations);
        let mut moduli = snf.diagonal();
        moduli.resize(n, BigInt::zero());
        let free_rank = moduli.iter().filter(|x| x.is_zero()).count();
        let factors: Vec<BigInt> = moduli
            .iter()
            .filter(|x| !x.is_zero() && !x.is_one())
            .cloned()
            .collect();
        let group = FgAbelianGroup {
            free_rank,
            invariant_factors: factors,
            presentation: Some(relations.clone()),
        };
        Cokernel {
            ambient: n,
            group,
            snf,
            moduli,
        }
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn into_group(self) -> FgAbelianGroup {
        self.group
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    /// Normalized coordinates of the class of `v`: one residue in `[0, f)`
    /// per invariant factor `f`, followed by the free coordinates.
    pub fn class_of(&self, v: &[BigInt]) -> CokernelElement {
        assert_eq!(v.len(), self.ambient, "vector not in the ambient lattice");
        let coords = self.snf.u_inv.mul_vec(v);
        let mut torsion = Vec::new();
        let mut free = Vec::new();
        for (c, m) in coords.into_iter().zip(&self.moduli) {
            if m.is_zero() {
                free.push(c);
            } else if !m.is_one() {
                torsion.push(c.mod_floor(m));
            }
        }
        CokernelElement { torsion, free }
    }

    pub fn is_zero_class(&self, v: &[BigInt]) -> bool {
        self.class_of(v).is_zero()
    }

    /// Order of the class of `v`, `None` when it has infinite order.
    pub fn element_order(&self, v: &[BigInt]) -> Option<BigInt> {
        let class = self.class_of(v);
        if class.free.iter().any(|x| !x.is_zero()) {
            return None;
        }
        let factors = self.group.invariant_factors();
        Some(
            class
                .torsion
                .iter()
                .zip(factors)
                .fold(BigInt::one(), |acc, (x, f)| {
                    let ord = f / x.gcd(f);
                    acc.lcm(&ord)
                }),
        )
    }
}

/// Coordinates of a cokernel class; equal classes have equal coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CokernelElement {
    pub torsion: Vec<BigInt>,
    pub free: Vec<BigInt>,
}

impl CokernelElement {
    pub fn is_zero(&self) -> bool {
        self.torsion.iter().chain(&self.free).all(Zero::is_zero)
    }
}

/// `Z^n` modulo the column span of a matrix with `n` rows.
pub fn cokernel(relations: &IntegerMatrix) -> FgAbelianGroup {
    Cokernel::new(relations).into_group()
}
