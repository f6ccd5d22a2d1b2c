//! Slow, independent verifiers for the lattice and stack computations.
//!
//! Nothing here calls the Smith form, cokernel, solver or determinant code of
//! the main paths. Finite quotients are enumerated element by element from a
//! triangular basis computed locally, and determinants use cofactor expansion.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::lattice::{IntegerMatrix, SnfDecomposition};
use crate::stacky::StackyData;

/// Largest group the oracles enumerate by default.
pub const MAX_ORDER: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    Infinite,
    TooLarge { order: BigInt, bound: u64 },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::Infinite => write!(f, "quotient is infinite"),
            OracleError::TooLarge { order, bound } => {
                write!(f, "quotient of order {order} exceeds the enumeration bound {bound}")
            }
        }
    }
}

impl std::error::Error for OracleError {}

/// Cofactor expansion along the first row.
pub fn cofactor_determinant(m: &IntegerMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let rows: Vec<Vec<BigInt>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    laplace(&rows)
}

fn laplace(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if rows[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = rows[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &rows[0][j] * laplace(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn naive_product(a: &IntegerMatrix, b: &IntegerMatrix) -> Option<IntegerMatrix> {
    if a.cols() != b.rows() {
        return None;
    }
    let mut out = IntegerMatrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut s = BigInt::zero();
            for k in 0..a.cols() {
                s += &a[(i, k)] * &b[(k, j)];
            }
            out[(i, j)] = s;
        }
    }
    Some(out)
}

fn is_identity(m: &IntegerMatrix) -> bool {
    m.rows() == m.cols()
        && (0..m.rows()).all(|i| (0..m.cols()).all(|j| m[(i, j)] == BigInt::from((i == j) as i64)))
}

/// Checks `A = U D V`, that `U` and `V` have determinant `+-1` and the stored
/// inverses are inverses, and that `D` is diagonal, non-negative and a divisor
/// chain with zeros last.
pub fn oracle_verify_snf(a: &IntegerMatrix, dec: &SnfDecomposition) -> bool {
    let (m, n) = (a.rows(), a.cols());
    let shapes = dec.u.rows() == m
        && dec.u.cols() == m
        && dec.d.rows() == m
        && dec.d.cols() == n
        && dec.v.rows() == n
        && dec.v.cols() == n;
    if !shapes {
        return false;
    }
    let ud = naive_product(&dec.u, &dec.d).unwrap();
    if naive_product(&ud, &dec.v).as_ref() != Some(a) {
        return false;
    }
    for (x, x_inv) in [(&dec.u, &dec.u_inv), (&dec.v, &dec.v_inv)] {
        if !cofactor_determinant(x).abs().is_one() {
            return false;
        }
        match naive_product(x, x_inv) {
            Some(p) if is_identity(&p) => {}
            _ => return false,
        }
    }
    for i in 0..m {
        for j in 0..n {
            if i != j && !dec.d[(i, j)].is_zero() {
                return false;
            }
        }
    }
    let diag: Vec<BigInt> = (0..m.min(n)).map(|i| dec.d[(i, i)].clone()).collect();
    if diag.iter().any(|x| x.is_negative()) {
        return false;
    }
    diag.windows(2).all(|w| {
        if w[0].is_zero() {
            w[1].is_zero()
        } else {
            (&w[1] % &w[0]).is_zero()
        }
    })
}

/// Lower-triangular basis of the column lattice with positive diagonal and
/// entries below the diagonal reduced modulo the diagonal of their row.
/// `None` when the lattice has rank below the number of rows.
fn triangular_basis(relations: &IntegerMatrix) -> Option<Vec<Vec<BigInt>>> {
    let n = relations.rows();
    let mut cols: Vec<Vec<BigInt>> = (0..relations.cols())
        .map(|j| (0..n).map(|i| relations[(i, j)].clone()).collect())
        .collect();
    let mut basis: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        // Euclid on row i across the remaining columns.
        loop {
            let nonzero: Vec<usize> = (0..cols.len()).filter(|&j| !cols[j][i].is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let p = *nonzero.iter().min_by_key(|&&j| cols[j][i].abs()).unwrap();
            for &j in &nonzero {
                if j == p {
                    continue;
                }
                let q = cols[j][i].div_floor(&cols[p][i]);
                for t in 0..n {
                    let delta = &q * &cols[p][t];
                    cols[j][t] -= delta;
                }
            }
        }
        let p = (0..cols.len()).find(|&j| !cols[j][i].is_zero())?;
        let mut pivot = cols.swap_remove(p);
        if pivot[i].is_negative() {
            pivot.iter_mut().for_each(|x| *x = -x.clone());
        }
        basis.push(pivot);
    }
    for j in 0..n {
        for i in j + 1..n {
            let q = basis[j][i].div_floor(&basis[i][i]);
            if q.is_zero() {
                continue;
            }
            for t in 0..n {
                let delta = &q * &basis[i][t];
                basis[j][t] -= delta;
            }
        }
    }
    Some(basis)
}

/// Finite abelian group `Z^n / L` as an explicit list of coset
/// representatives `0 <= x_i < h_i` with respect to a triangular basis of `L`.
#[derive(Clone, Debug)]
pub struct FiniteGroupTable {
    basis: Vec<Vec<i64>>,
    elements: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
}

impl FiniteGroupTable {
    fn reduce(&self, v: &mut [i64]) {
        for i in 0..v.len() {
            let q = v[i].div_euclid(self.basis[i][i]);
            if q != 0 {
                for t in i..v.len() {
                    v[t] -= q * self.basis[i][t];
                }
            }
        }
    }

    fn build(basis: Vec<Vec<i64>>) -> Self {
        let n = basis.len();
        let mut table = FiniteGroupTable {
            basis,
            elements: Vec::new(),
            index: HashMap::new(),
        };
        let zero = vec![0i64; n];
        table.index.insert(zero.clone(), 0);
        table.elements.push(zero);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for k in 0..n {
                let mut y = table.elements[x].clone();
                y[k] += 1;
                table.reduce(&mut y);
                if !table.index.contains_key(&y) {
                    table.index.insert(y.clone(), table.elements.len());
                    queue.push_back(table.elements.len());
                    table.elements.push(y);
                }
            }
        }
        table
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn element(&self, i: usize) -> &[i64] {
        &self.elements[i]
    }

    /// Index of the class of an arbitrary vector of `Z^n`.
    pub fn class_of(&self, v: &[BigInt]) -> usize {
        assert_eq!(v.len(), self.rank(), "vector of the wrong length");
        let mut exact: Vec<BigInt> = v.to_vec();
        for i in 0..exact.len() {
            let q = exact[i].div_floor(&BigInt::from(self.basis[i][i]));
            if !q.is_zero() {
                for t in i..exact.len() {
                    exact[t] -= &q * BigInt::from(self.basis[i][t]);
                }
            }
        }
        let w: Vec<i64> = exact.iter().map(|x| x.to_i64().unwrap()).collect();
        self.index[&w]
    }

    pub fn compose(&self, a: usize, b: usize) -> usize {
        let mut v: Vec<i64> = self.elements[a].iter().zip(&self.elements[b]).map(|(x, y)| x + y).collect();
        self.reduce(&mut v);
        self.index[&v]
    }

    pub fn inverse(&self, a: usize) -> usize {
        let mut v: Vec<i64> = self.elements[a].iter().map(|x| -x).collect();
        self.reduce(&mut v);
        self.index[&v]
    }

    fn multiple(&self, a: usize, k: u64) -> Vec<i64> {
        let k = k as i64;
        let mut v: Vec<i64> = self.elements[a].iter().map(|x| x * k).collect();
        self.reduce(&mut v);
        v
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut o = self.order() as u64;
        for p in prime_divisors(o) {
            while o.is_multiple_of(p) && self.multiple(a, o / p).iter().all(|&x| x == 0) {
                o /= p;
            }
        }
        o
    }

    /// Number of elements of each order.
    pub fn order_census(&self) -> BTreeMap<u64, usize> {
        let mut census = BTreeMap::new();
        for a in 0..self.order() {
            *census.entry(self.element_order(a)).or_insert(0) += 1;
        }
        census
    }

    pub fn is_cyclic(&self) -> bool {
        let n = self.order() as u64;
        self.order_census().contains_key(&n)
    }

    /// Invariant factors `d_1 | d_2 | ...` (all `> 1`) recovered from the
    /// element-order census alone.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let census = self.order_census();
        let count_dividing = |m: u64| -> usize {
            census.iter().filter(|(o, _)| m.is_multiple_of(**o)).map(|(_, c)| c).sum()
        };
        let order = self.order() as u64;
        // For each prime, exponents of the cyclic p-parts, largest first.
        let mut primary: Vec<(u64, Vec<u32>)> = Vec::new();
        for p in prime_divisors(order) {
            let sylow = ilog(order, p);
            let mut logs = vec![0u32];
            while *logs.last().unwrap() < sylow {
                let k = logs.len() as u32;
                logs.push(exact_log(count_dividing(p.pow(k)) as u64, p));
            }
            // logs[k] - logs[k-1] = number of cyclic p-parts of exponent >= k.
            let at_least: Vec<u32> = logs.windows(2).map(|w| w[1] - w[0]).collect();
            let parts = at_least.first().copied().unwrap_or(0) as usize;
            let mut exps = vec![0u32; parts];
            for (k, &cnt) in at_least.iter().enumerate() {
                for e in exps.iter_mut().take(cnt as usize) {
                    *e = k as u32 + 1;
                }
            }
            primary.push((p, exps));
        }
        let len = primary.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        // Largest factor collects the largest part of every prime.
        let mut factors: Vec<u64> = (0..len)
            .map(|j| {
                primary
                    .iter()
                    .map(|(p, e)| e.get(j).map_or(1, |&x| p.pow(x)))
                    .product()
            })
            .collect();
        factors.reverse();
        factors
    }

    /// Closure, inverses and identity for every element; associativity on
    /// all triples when the group has at most `assoc_limit` elements and on
    /// the generators otherwise.
    pub fn verify_axioms(&self, assoc_limit: usize) -> bool {
        let n = self.order();
        let zero = 0;
        for a in 0..n {
            if self.compose(a, zero) != a || self.compose(a, self.inverse(a)) != zero {
                return false;
            }
        }
        let check: Vec<usize> = if n <= assoc_limit {
            (0..n).collect()
        } else {
            let gens: Vec<usize> = (0..self.rank())
                .map(|k| {
                    let mut e = vec![0i64; self.rank()];
                    e[k] = 1;
                    self.reduce(&mut e);
                    self.index[&e]
                })
                .collect();
            gens
        };
        for &a in &check {
            for &b in &check {
                if self.compose(a, b) != self.compose(b, a) {
                    return false;
                }
                for &c in &check {
                    if self.compose(self.compose(a, b), c) != self.compose(a, self.compose(b, c)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn ilog(n: u64, p: u64) -> u32 {
    let mut k = 0;
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    k
}

fn exact_log(c: u64, p: u64) -> u32 {
    let k = ilog(c, p);
    assert_eq!(p.pow(k), c, "subgroup order must be a prime power");
    k
}

/// Enumerates `Z^n / (column span of relations)`.
pub fn oracle_quotient_enumerate(
    relations: &IntegerMatrix,
    bound: u64,
) -> Result<FiniteGroupTable, OracleError> {
    let basis = triangular_basis(relations).ok_or(OracleError::Infinite)?;
    let order: BigInt = (0..basis.len()).map(|i| basis[i][i].clone()).product();
    if order > BigInt::from(bound) {
        return Err(OracleError::TooLarge { order, bound });
    }
    let small = basis
        .into_iter()
        .map(|c| c.into_iter().map(|x| x.to_i64().unwrap()).collect())
        .collect();
    let table = FiniteGroupTable::build(small);
    assert_eq!(BigInt::from(table.order()), order, "enumeration disagrees with the basis");
    Ok(table)
}

/// Whether `v` vanishes in `Z^n / (r Z^n + relations)`, by enumeration.
pub fn oracle_divisibility(
    v: &[BigInt],
    r: &BigInt,
    relations: &IntegerMatrix,
) -> Result<bool, OracleError> {
    let n = v.len();
    assert_eq!(relations.rows(), n, "relations live in the wrong lattice");
    let mut all = relations.clone();
    let mut scaled = IntegerMatrix::zeros(n, n);
    for i in 0..n {
        scaled[(i, i)] = r.clone();
    }
    all = all.hstack(&scaled);
    let table = oracle_quotient_enumerate(&all, MAX_ORDER)?;
    Ok(table.class_of(v) == 0)
}

/// Relations of the stabilizer of a point vanishing exactly on `cone`, in
/// `Z^{n+R}`: the rows of `[B Q]` together with `e_k` for rays off the cone.
fn stabilizer_relations(data: &StackyData, cone: &[usize]) -> IntegerMatrix {
    let n = data.num_rays();
    let rr = data.num_roots();
    let d = data.lattice_rank();
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for l in 0..d {
        let mut c = vec![BigInt::zero(); n + rr];
        for k in 0..n {
            c[k] = data.fan().ray(k)[l].clone();
        }
        cols.push(c);
    }
    for i in 0..rr {
        let mut c = vec![BigInt::zero(); n + rr];
        for k in 0..n {
            c[k] = data.b()[(i, k)].clone();
        }
        c[n + i] = data.r()[i].clone();
        cols.push(c);
    }
    for k in (0..n).filter(|k| !cone.contains(k)) {
        let mut c = vec![BigInt::zero(); n + rr];
        c[k] = BigInt::one();
        cols.push(c);
    }
    IntegerMatrix::from_columns(n + rr, &cols)
}

/// Order of the stabilizer by enumerating its character group.
pub fn oracle_stabilizer_order_enumerated(
    data: &StackyData,
    cone: &[usize],
    bound: u64,
) -> Result<BigInt, OracleError> {
    let table = oracle_quotient_enumerate(&stabilizer_relations(data, cone), bound)?;
    Ok(BigInt::from(table.order()))
}

/// `|det a_sigma| * prod r_i` for full-dimensional cones, enumeration
/// otherwise.
pub fn oracle_stabilizer_order(data: &StackyData, cone: &[usize]) -> Result<BigInt, OracleError> {
    let d = data.lattice_rank();
    if cone.len() == d {
        let a = IntegerMatrix::from_columns(
            d,
            &cone.iter().map(|&k| data.fan().ray(k).to_vec()).collect::<Vec<_>>(),
        );
        let roots: BigInt = data.r().iter().product();
        return Ok(cofactor_determinant(&a).abs() * roots);
    }
    oracle_stabilizer_order_enumerated(data, cone, MAX_ORDER)
}

/// Whether `x -> T x` is a well-defined bijection
/// `Z/r_1 + ... + Z/r_R -> Z/s_1 + ... + Z/s_S`, by enumerating the source.
pub fn oracle_band_isomorphism(r: &[BigInt], t: &IntegerMatrix, s: &[BigInt]) -> Result<bool, OracleError> {
    if t.rows() != s.len() || t.cols() != r.len() {
        return Ok(false);
    }
    let source = oracle_quotient_enumerate(&IntegerMatrix::diagonal(r), MAX_ORDER)?;
    let target = oracle_quotient_enumerate(&IntegerMatrix::diagonal(s), MAX_ORDER)?;
    if source.order() != target.order() {
        return Ok(false);
    }
    let image = |x: &[BigInt]| target.class_of(&t.mul_vec(x));
    // Well defined: each relation r_i e_i maps to zero.
    for (i, ri) in r.iter().enumerate() {
        let mut e = vec![BigInt::zero(); r.len()];
        e[i] = ri.clone();
        if image(&e) != 0 {
            return Ok(false);
        }
    }
    let mut hit = vec![false; target.order()];
    for a in 0..source.order() {
        let x: Vec<BigInt> = source.element(a).iter().map(|&v| BigInt::from(v)).collect();
        let y = image(&x);
        if hit[y] {
            return Ok(false);
        }
        hit[y] = true;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::lattice::{int_vec, smith_normal_form};

    #[test]
    fn snf_checks() {
        let a = IntegerMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let mut dec = smith_normal_form(&a);
        assert!(oracle_verify_snf(&a, &dec));
        let good = dec.clone();

        dec.d = IntegerMatrix::from_i64(&[&[6, 0], &[0, 1]]);
        assert!(!oracle_verify_snf(&a, &dec));

        let mut dec = good.clone();
        dec.u[(0, 0)] += BigInt::one();
        assert!(!oracle_verify_snf(&a, &dec));
    }

    #[test]
    fn cofactor_matches_hand_values() {
        assert_eq!(cofactor_determinant(&IntegerMatrix::from_i64(&[&[1, 2], &[3, 4]])), BigInt::from(-2));
        assert_eq!(cofactor_determinant(&IntegerMatrix::zeros(0, 0)), BigInt::one());
        let m = IntegerMatrix::from_i64(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]]);
        assert_eq!(cofactor_determinant(&m), BigInt::zero());
        let m = IntegerMatrix::from_i64(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]);
        assert_eq!(cofactor_determinant(&m), BigInt::from(6));
    }

    #[test]
    fn enumeration_examples() {
        let t = oracle_quotient_enumerate(&IntegerMatrix::from_i64(&[&[2, 0], &[0, 3]]), MAX_ORDER).unwrap();
        assert_eq!(t.order(), 6);
        assert!(t.is_cyclic());
        assert_eq!(t.invariant_factors(), vec![6]);
        assert!(t.verify_axioms(64));

        let t = oracle_quotient_enumerate(&IntegerMatrix::from_i64(&[&[3]]), MAX_ORDER).unwrap();
        assert_eq!(t.order(), 3);

        let free = IntegerMatrix::from_i64(&[&[1, 2], &[0, 0]]);
        assert_eq!(oracle_quotient_enumerate(&free, MAX_ORDER).unwrap_err(), OracleError::Infinite);
        let big = IntegerMatrix::from_i64(&[&[101, 0], &[0, 103]]);
        assert!(matches!(
            oracle_quotient_enumerate(&big, MAX_ORDER),
            Err(OracleError::TooLarge { .. })
        ));
    }

    #[test]
    fn census_recovers_invariant_factors() {
        let t = oracle_quotient_enumerate(&IntegerMatrix::diagonal(&int_vec(&[4, 6])), MAX_ORDER).unwrap();
        assert_eq!(t.order(), 24);
        assert_eq!(t.invariant_factors(), vec![2, 12]);
        let t = oracle_quotient_enumerate(&IntegerMatrix::diagonal(&int_vec(&[2, 2, 4, 3])), MAX_ORDER).unwrap();
        assert_eq!(t.invariant_factors(), vec![2, 2, 12]);
        let t = oracle_quotient_enumerate(&IntegerMatrix::diagonal(&int_vec(&[1, 1])), MAX_ORDER).unwrap();
        assert_eq!(t.order(), 1);
        assert!(t.invariant_factors().is_empty());
        // Non-diagonal presentation of Z/2 + Z/4.
        let t = oracle_quotient_enumerate(&IntegerMatrix::from_i64(&[&[2, 2], &[0, 4]]), MAX_ORDER).unwrap();
        assert_eq!(t.invariant_factors(), vec![2, 4]);
    }

    #[test]
    fn divisibility_examples() {
        let rel = IntegerMatrix::from_i64(&[&[-1], &[1]]);
        let two = BigInt::from(2);
        assert!(!oracle_divisibility(&int_vec(&[0, 1]), &two, &rel).unwrap());
        assert!(oracle_divisibility(&int_vec(&[0, 2]), &two, &rel).unwrap());
        assert!(oracle_divisibility(&int_vec(&[1, 1]), &two, &rel).unwrap());
    }

    #[test]
    fn stabilizer_examples() {
        let g = weighted_root_gerbe();
        assert_eq!(oracle_stabilizer_order(&g, &[0]).unwrap(), BigInt::from(6));
        assert_eq!(oracle_stabilizer_order(&g, &[1]).unwrap(), BigInt::from(4));
        assert_eq!(oracle_stabilizer_order_enumerated(&g, &[0], MAX_ORDER).unwrap(), BigInt::from(6));
        assert_eq!(oracle_stabilizer_order_enumerated(&g, &[], MAX_ORDER).unwrap(), BigInt::from(2));
        for a in 1..=7 {
            let data = affine_line_mod(a);
            assert_eq!(oracle_stabilizer_order(&data, &[0]).unwrap(), BigInt::from(a));
            assert_eq!(oracle_stabilizer_order(&data, &[]).unwrap(), BigInt::one());
        }
    }

    #[test]
    fn band_isomorphism() {
        // Z/2 + Z/3 -> Z/6.
        let r = int_vec(&[2, 3]);
        let s = int_vec(&[6]);
        assert!(oracle_band_isomorphism(&r, &IntegerMatrix::from_i64(&[&[3, 2]]), &s).unwrap());
        assert!(!oracle_band_isomorphism(&r, &IntegerMatrix::from_i64(&[&[3, 0]]), &s).unwrap());
        assert!(!oracle_band_isomorphism(&r, &IntegerMatrix::from_i64(&[&[1, 1]]), &s).unwrap());
    }
}
