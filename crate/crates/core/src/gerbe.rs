//! Picard group of the rigidification and classification of the stack as a
//! banded gerbe over it.
//!
//! `Pic` of the rigidified stack is `(Z^n)^* / M`, with `M` embedded by
//! `m -> (<m, a_rho>)_rho`. Row `i` of `b` defines the class of the line bundle
//! whose `r_i`-th root is taken; two data sets with the same fan, rays and
//! chain of `r_i` give isomorphic banded gerbes exactly when each difference
//! of rows is divisible by `r_i` in `Pic`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    divisible_in_quotient, in_column_span, invariant_factor_chain, smith_normal_form,
    Cokernel, FgAbelianGroup, IntegerMatrix,
};
use crate::stacky::StackyData;

/// An element of `(Z^n)^*` read modulo `M`. Compare with
/// [`PicardPresentation::class_eq`], not `==`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PicClass {
    pub representative: Vec<BigInt>,
}

impl PicClass {
    pub fn new(representative: Vec<BigInt>) -> Self {
        PicClass { representative }
    }

    pub fn zero(n: usize) -> Self {
        PicClass::new(vec![BigInt::zero(); n])
    }

    /// Class of the dual basis vector `e_k^*`.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); n];
        v[k] = BigInt::one();
        PicClass::new(v)
    }

    pub fn add(&self, other: &PicClass) -> PicClass {
        PicClass::new(
            self.representative
                .iter()
                .zip(&other.representative)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &PicClass) -> PicClass {
        PicClass::new(
            self.representative
                .iter()
                .zip(&other.representative)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigInt) -> PicClass {
        PicClass::new(self.representative.iter().map(|a| a * k).collect())
    }

    /// `sum_j coeffs[j] * classes[j]`.
    pub fn combination(n: usize, coeffs: &[BigInt], classes: &[PicClass]) -> PicClass {
        coeffs
            .iter()
            .zip(classes)
            .fold(PicClass::zero(n), |acc, (c, x)| acc.add(&x.scale(c)))
    }
}

#[derive(Clone, Debug)]
pub struct PicardPresentation {
    n: usize,
    relation_matrix: IntegerMatrix,
    group: FgAbelianGroup,
}

impl PicardPresentation {
    pub fn num_rays(&self) -> usize {
        self.n
    }

    /// `n x d`; column `l` is `(<m_l, a_rho>)_rho`.
    pub fn relation_matrix(&self) -> &IntegerMatrix {
        &self.relation_matrix
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn ray_class(&self, k: usize) -> PicClass {
        PicClass::basis(self.n, k)
    }

    pub fn is_zero(&self, class: &PicClass) -> bool {
        in_column_span(&self.relation_matrix, &class.representative)
    }

    pub fn class_eq(&self, a: &PicClass, b: &PicClass) -> bool {
        self.is_zero(&a.sub(b))
    }

    /// Whether `class` is `r` times some class.
    pub fn is_divisible(&self, class: &PicClass, r: &BigInt) -> bool {
        divisible_in_quotient(&class.representative, r, &self.relation_matrix)
    }

    /// Order of the class, `None` when it has infinite order.
    pub fn class_order(&self, class: &PicClass) -> Option<BigInt> {
        Cokernel::new(&self.relation_matrix).element_order(&class.representative)
    }
}

/// `Pic` of rigid data (`R = 0`).
pub fn picard_group(data: &StackyData) -> Result<PicardPresentation> {
    if data.num_roots() != 0 {
        return Err(Error::NotRigid(data.num_roots()));
    }
    Ok(picard_of_rigidification(data))
}

/// `Pic` of the rigidification of any data; only the fan and rays are used.
pub fn picard_of_rigidification(data: &StackyData) -> PicardPresentation {
    let relation_matrix = data.fan().ray_matrix().transpose();
    let group = Cokernel::new(&relation_matrix).into_group();
    PicardPresentation {
        n: data.num_rays(),
        relation_matrix,
        group,
    }
}

/// Class of `sum_rho b_{i rho} e_rho^*` (index `i` is zero-based).
pub fn gerbe_class(data: &StackyData, i: usize) -> Result<PicClass> {
    if i >= data.num_roots() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: data.num_roots(),
        });
    }
    Ok(PicClass::new(data.b_row(i).to_vec()))
}

pub fn is_divisor_chain(r: &[BigInt]) -> bool {
    r.windows(2).all(|w| w[1].is_multiple_of(&w[0]))
}

/// Outcome of comparing two data sets as banded gerbes over the same
/// rigidification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandedComparison {
    /// `R = R'` and `r_i = r_i'` for every `i`.
    pub same_band: bool,
    /// For each `i`, whether `b_i - b_i'` is divisible by `r_i` in `Pic`.
    /// Empty when the bands differ.
    pub divisibility: Vec<bool>,
}

impl BandedComparison {
    pub fn is_isomorphic(&self) -> bool {
        self.same_band && self.divisibility.iter().all(|&x| x)
    }
}

fn check_same_underlying(a: &StackyData, b: &StackyData) -> Result<()> {
    if a.lattice_rank() != b.lattice_rank() {
        return Err(Error::MismatchedUnderlyingData(format!(
            "lattice ranks {} and {}",
            a.lattice_rank(),
            b.lattice_rank()
        )));
    }
    if a.fan().rays() != b.fan().rays() {
        return Err(Error::MismatchedUnderlyingData("ray vectors differ".into()));
    }
    if !a.fan().same_cones(b.fan()) {
        return Err(Error::MismatchedUnderlyingData("cone lists differ".into()));
    }
    Ok(())
}

/// Compares two chain-form data sets sharing lattice, fan and rays.
pub fn compare_banded(first: &StackyData, second: &StackyData) -> Result<BandedComparison> {
    check_same_underlying(first, second)?;
    for data in [first, second] {
        if !is_divisor_chain(data.r()) {
            return Err(Error::NotInChainForm(data.r().to_vec()));
        }
    }
    if first.r() != second.r() {
        return Ok(BandedComparison {
            same_band: false,
            divisibility: Vec::new(),
        });
    }
    let pic = picard_of_rigidification(first);
    let divisibility = (0..first.num_roots())
        .map(|i| {
            let diff = PicClass::new(first.b_row(i).to_vec())
                .sub(&PicClass::new(second.b_row(i).to_vec()));
            pic.is_divisible(&diff, &first.r()[i])
        })
        .collect();
    Ok(BandedComparison {
        same_band: true,
        divisibility,
    })
}

pub fn is_isomorphic_banded(first: &StackyData, second: &StackyData) -> Result<bool> {
    compare_banded(first, second).map(|c| c.is_isomorphic())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonicalized {
    pub data: StackyData,
    /// `T` with `b' = T b`; it induces `Z/r_1 + ... -> Z/s_1 + ...`.
    pub certificate: IntegerMatrix,
}

/// Rewrites the data with `r` replaced by its invariant factors and each
/// `b`-row pushed through the band isomorphism read off the Smith form of
/// `diag(r)`.
pub fn canonicalize(data: &StackyData) -> Canonicalized {
    let r = data.r();
    let unit_free = r.iter().all(|x| !x.is_one());
    if unit_free && is_divisor_chain(r) {
        return Canonicalized {
            data: data.clone(),
            certificate: IntegerMatrix::identity(r.len()),
        };
    }
    // diag(r) = U D V, so x -> U^-1 x carries Z^R / diag(r) onto Z^R / D.
    let snf = smith_normal_form(&IntegerMatrix::diagonal(r));
    let keep: Vec<usize> = snf
        .diagonal()
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_one())
        .map(|(j, _)| j)
        .collect();
    let certificate = snf.u_inv.select_rows(&keep);
    let chain: Vec<BigInt> = keep.iter().map(|&j| snf.d[(j, j)].clone()).collect();
    debug_assert_eq!(chain, invariant_factor_chain(r));
    let b = &certificate * data.b();
    Canonicalized {
        data: StackyData::new(data.fan().clone(), chain, b),
        certificate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::lattice::int_vec;
    use crate::stacky::{generic_stabilizer, rigidify};

    #[test]
    fn root_gerbe_picard() {
        let pic = picard_group(&rigidify(&weighted_root_gerbe())).unwrap();
        assert_eq!(pic.group(), &FgAbelianGroup::free(1));
        let (rho, tau) = (pic.ray_class(0), pic.ray_class(1));
        let g = tau.sub(&rho);
        assert!(pic.class_eq(&g.scale(&BigInt::from(2)), &rho));
        assert!(pic.class_eq(&g.scale(&BigInt::from(3)), &tau));
        assert!(!pic.class_eq(&g, &rho));

        let class = gerbe_class(&weighted_root_gerbe(), 0).unwrap();
        assert_eq!(class.representative, int_vec(&[0, 1]));
        assert!(pic.class_eq(&class, &g.scale(&BigInt::from(3))));
    }

    #[test]
    fn picard_requires_rigid_data() {
        assert_eq!(
            picard_group(&weighted_root_gerbe()).unwrap_err(),
            Error::NotRigid(1)
        );
    }

    #[test]
    fn projective_and_affine_line() {
        let pic = picard_group(&StackyData::rigid(projective_space_line())).unwrap();
        assert_eq!(pic.group(), &FgAbelianGroup::free(1));
        assert!(pic.class_eq(&pic.ray_class(0), &pic.ray_class(1)));
        assert_eq!(pic.class_order(&pic.ray_class(0)), None);

        let pic = picard_group(&affine_line_mod(1)).unwrap();
        assert!(pic.group().is_trivial());
        assert!(pic.is_zero(&pic.ray_class(0)));

        // [A^1 / mu_3]: Pic = Z/3 generated by the ray class.
        let pic = picard_group(&affine_line_mod(3)).unwrap();
        assert_eq!(pic.class_order(&pic.ray_class(0)), Some(BigInt::from(3)));
    }

    #[test]
    fn gerbe_class_edge_cases() {
        let zero_row = projective_line_root(2, 0, 0);
        let pic = picard_of_rigidification(&zero_row);
        assert!(pic.is_zero(&gerbe_class(&zero_row, 0).unwrap()));
        // A relation column as b-row: <m, a_rho> for m = 1 is (-1, 1).
        let rel = projective_line_root(2, -1, 1);
        assert!(pic.is_zero(&gerbe_class(&rel, 0).unwrap()));
        assert_eq!(
            gerbe_class(&rel, 1).unwrap_err(),
            Error::IndexOutOfRange { index: 1, len: 1 }
        );
    }

    #[test]
    fn parity_classification() {
        let base = projective_line_root(2, 0, 0);
        assert!(is_isomorphic_banded(&projective_line_root(2, 0, 2), &base).unwrap());
        assert!(!is_isomorphic_banded(&projective_line_root(2, 0, 1), &base).unwrap());
        assert!(is_isomorphic_banded(&base, &base).unwrap());
        // Moving b by r times a unit vector never changes the class.
        assert!(is_isomorphic_banded(&projective_line_root(2, 2, 1), &projective_line_root(2, 0, 1)).unwrap());
    }

    #[test]
    fn classification_preconditions() {
        let a = projective_line_root(2, 0, 0);
        let other_rays = StackyData::new(
            crate::fan::standard::line_with_rays(3, 2),
            int_vec(&[2]),
            IntegerMatrix::from_i64(&[&[0, 0]]),
        );
        assert!(matches!(
            compare_banded(&a, &other_rays),
            Err(Error::MismatchedUnderlyingData(_))
        ));
        let non_chain = StackyData::new(
            projective_space_line(),
            int_vec(&[2, 3]),
            IntegerMatrix::zeros(2, 2),
        );
        assert_eq!(
            compare_banded(&non_chain, &non_chain).unwrap_err(),
            Error::NotInChainForm(int_vec(&[2, 3]))
        );
        let different_band = projective_line_root(4, 0, 0);
        let cmp = compare_banded(&a, &different_band).unwrap();
        assert!(!cmp.same_band && !cmp.is_isomorphic());
    }

    #[test]
    fn canonical_forms() {
        let chain = StackyData::new(
            projective_space_line(),
            int_vec(&[2, 4]),
            IntegerMatrix::from_i64(&[&[0, 1], &[1, 3]]),
        );
        let c = canonicalize(&chain);
        assert_eq!(c.data, chain);
        assert_eq!(c.certificate, IntegerMatrix::identity(2));

        let rigid = rigidify(&chain);
        assert_eq!(canonicalize(&rigid).data, rigid);

        let coprime = StackyData::new(
            projective_space_line(),
            int_vec(&[2, 3]),
            IntegerMatrix::from_i64(&[&[0, 1], &[1, 1]]),
        );
        let c = canonicalize(&coprime);
        assert_eq!(c.data.r(), &int_vec(&[6])[..]);
        assert_eq!(generic_stabilizer(&c.data), generic_stabilizer(&coprime));
        assert_eq!((c.certificate.rows(), c.certificate.cols()), (1, 2));
        // The certificate sends the order-2 and order-3 generators to
        // elements of order 2 and 3 in Z/6.
        let six = BigInt::from(6);
        let img0 = c.certificate[(0, 0)].mod_floor(&six);
        let img1 = c.certificate[(0, 1)].mod_floor(&six);
        assert_eq!(img0, BigInt::from(3));
        assert!(img1 == BigInt::from(2) || img1 == BigInt::from(4));
        let again = canonicalize(&c.data);
        assert_eq!(again.data, c.data);
        assert!(is_isomorphic_banded(&again.data, &c.data).unwrap());
    }
}
