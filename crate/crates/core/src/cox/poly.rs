use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Polynomial with exact rational coefficients in the ray variables `z_k` of
/// a source fan.
///
/// Terms are keyed by exponent vector; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePolynomial {
    num_vars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl SparsePolynomial {
    pub fn zero(num_vars: usize) -> Self {
        SparsePolynomial {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(num_vars: usize) -> Self {
        Self::monomial(num_vars, BigRational::one(), vec![0; num_vars])
    }

    /// Sums the given terms; repeated exponent vectors are merged.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BigRational, Vec<u32>)>,
    {
        let mut p = Self::zero(num_vars);
        for (c, e) in terms {
            if e.len() != num_vars {
                return Err(Error::MalformedMorphism(format!(
                    "exponent vector of length {} in a ring with {num_vars} variables",
                    e.len()
                )));
            }
            p.add_term(c, e);
        }
        Ok(p)
    }

    pub fn monomial(num_vars: usize, coeff: BigRational, exponents: Vec<u32>) -> Self {
        assert_eq!(exponents.len(), num_vars, "exponent vector length");
        let mut p = Self::zero(num_vars);
        p.add_term(coeff, exponents);
        p
    }

    /// The variable `z_k`.
    pub fn variable(num_vars: usize, k: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[k] = 1;
        Self::monomial(num_vars, BigRational::one(), e)
    }

    fn add_term(&mut self, coeff: BigRational, exponents: Vec<u32>) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exponents).or_insert_with(BigRational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    /// Variables occurring with positive exponent in some term.
    pub fn support(&self) -> BTreeSet<usize> {
        self.terms
            .keys()
            .flat_map(|e| e.iter().enumerate().filter(|(_, &x)| x > 0).map(|(k, _)| k))
            .collect()
    }

    pub fn evaluate(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.num_vars, "point has wrong dimension");
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let mut p = Self::zero(self.num_vars);
        for (e, c) in &self.terms {
            p.add_term(c * k, e.clone());
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars, "different rings");
        let mut p = Self::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                p.add_term(ca * cb, e);
            }
        }
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars, "different rings");
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(c.clone(), e.clone());
        }
        p
    }

    /// `Some(lambda)` when `other = lambda * self` with both nonzero.
    pub fn ratio_to(&self, other: &Self) -> Option<BigRational> {
        if self.is_zero() || other.is_zero() || self.terms.len() != other.terms.len() {
            return None;
        }
        let mut ratio: Option<BigRational> = None;
        for ((ea, ca), (eb, cb)) in self.terms.iter().zip(&other.terms) {
            if ea != eb {
                return None;
            }
            let q = cb / ca;
            match &ratio {
                Some(r) if *r != q => return None,
                Some(_) => {}
                None => ratio = Some(q),
            }
        }
        ratio
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(k, &x)| if x == 1 { format!("z{k}") } else { format!("z{k}^{x}") })
                    .collect();
                match (vars.is_empty(), c.is_one()) {
                    (true, _) => c.to_string(),
                    (false, true) => vars.join("*"),
                    (false, false) => format!("{c}*{}", vars.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn merging_and_cancellation() {
        let p = SparsePolynomial::from_terms(
            2,
            vec![(q(1, 1), vec![1, 0]), (q(-1, 1), vec![1, 0]), (q(2, 1), vec![0, 1])],
        )
        .unwrap();
        assert_eq!(p.num_terms(), 1);
        assert!(p.is_monomial());
        assert_eq!(p.support(), [1].into_iter().collect());
        assert!(SparsePolynomial::from_terms(2, vec![(q(1, 1), vec![1])]).is_err());
    }

    #[test]
    fn evaluation_and_products() {
        let x = SparsePolynomial::variable(2, 0);
        let y = SparsePolynomial::variable(2, 1);
        let s = x.add(&y);
        let p = s.mul(&s);
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.evaluate(&[q(1, 2), q(3, 2)]), q(4, 1));
        assert_eq!(s.evaluate(&[q(1, 1), q(-1, 1)]), q(0, 1));
        assert_eq!(p.to_string(), "z1^2 + 2*z0*z1 + z0^2");
    }

    #[test]
    fn ratios() {
        let x = SparsePolynomial::variable(2, 0);
        let y = SparsePolynomial::variable(2, 1);
        let s = x.add(&y.scale(&q(3, 1)));
        assert_eq!(s.ratio_to(&s.scale(&q(-1, 2))), Some(q(-1, 2)));
        assert_eq!(s.ratio_to(&x.add(&y)), None);
        assert_eq!(s.ratio_to(&x), None);
        assert_eq!(SparsePolynomial::zero(2).ratio_to(&x), None);
    }
}
