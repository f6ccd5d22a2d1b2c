//! Exact feasibility of small rational linear systems by Fourier-Motzkin
//! elimination.
//!
//! Equalities are eliminated first by Gaussian elimination, so elimination
//! only runs over the free variables that remain. Each elimination stage is
//! kept so that a feasible point can be recovered by back-substitution.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// `coeffs . x <= bound`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Inequality {
    pub coeffs: Vec<Rational>,
    pub bound: Rational,
}

/// `coeffs . x == value`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equality {
    pub coeffs: Vec<Rational>,
    pub value: Rational,
}

pub fn rat(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

impl Inequality {
    /// Scales so the first nonzero coefficient has absolute value 1.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            for c in &mut self.coeffs {
                *c = &*c / &lead;
            }
            self.bound = &self.bound / &lead;
        }
        self
    }
}

/// Row-reduced equalities: `x[pivot] = constant - sum(coeff * x[free])`.
struct Reduced {
    pivots: Vec<(usize, Vec<Rational>, Rational)>,
    free: Vec<usize>,
}

fn reduce_equalities(num_vars: usize, eqs: &[Equality]) -> Option<Reduced> {
    let mut rows: Vec<(Vec<Rational>, Rational)> =
        eqs.iter().map(|e| (e.coeffs.clone(), e.value.clone())).collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..num_vars {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i].0[col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r].0[col].clone();
        for c in &mut rows[r].0 {
            *c = &*c / &lead;
        }
        rows[r].1 = &rows[r].1 / &lead;
        for i in 0..rows.len() {
            if i == r || rows[i].0[col].is_zero() {
                continue;
            }
            let f = rows[i].0[col].clone();
            for j in 0..num_vars {
                let delta = &f * &rows[r].0[j];
                rows[i].0[j] -= delta;
            }
            let delta = &f * &rows[r].1;
            rows[i].1 -= delta;
        }
        pivot_cols.push(col);
        r += 1;
    }
    // Leftover rows read 0 = value.
    if rows[r..].iter().any(|(_, v)| !v.is_zero()) {
        return None;
    }
    let free: Vec<usize> = (0..num_vars).filter(|c| !pivot_cols.contains(c)).collect();
    let pivots = pivot_cols
        .iter()
        .enumerate()
        .map(|(i, &pc)| {
            let coeffs = free.iter().map(|&f| rows[i].0[f].clone()).collect();
            (pc, coeffs, rows[i].1.clone())
        })
        .collect();
    Some(Reduced { pivots, free })
}

fn eliminate(system: &[Inequality], var: usize) -> Vec<Inequality> {
    let mut out: Vec<Inequality> = Vec::new();
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for ineq in system {
        let c = &ineq.coeffs[var];
        if c.is_zero() {
            out.push(ineq.clone());
        } else if c.is_positive() {
            pos.push(ineq);
        } else {
            neg.push(ineq);
        }
    }
    for p in &pos {
        for n in &neg {
            // Combine so the coefficient of `var` cancels.
            let wp = -&n.coeffs[var];
            let wn = p.coeffs[var].clone();
            let coeffs = p
                .coeffs
                .iter()
                .zip(&n.coeffs)
                .map(|(a, b)| &wp * a + &wn * b)
                .collect();
            let bound = &wp * &p.bound + &wn * &n.bound;
            out.push(Inequality { coeffs, bound }.normalized());
        }
    }
    dedup(out)
}

fn dedup(system: Vec<Inequality>) -> Vec<Inequality> {
    let mut best: Vec<Inequality> = Vec::new();
    for ineq in system {
        if ineq.coeffs.iter().all(Zero::is_zero) && !ineq.bound.is_negative() {
            continue;
        }
        match best.iter_mut().find(|b| b.coeffs == ineq.coeffs) {
            Some(b) if ineq.bound < b.bound => b.bound = ineq.bound,
            Some(_) => {}
            None => best.push(ineq),
        }
    }
    best
}

/// Returns a point satisfying all constraints, or `None` when infeasible.
pub fn feasible_point(
    num_vars: usize,
    equalities: &[Equality],
    inequalities: &[Inequality],
) -> Option<Vec<Rational>> {
    let reduced = reduce_equalities(num_vars, equalities)?;
    let m = reduced.free.len();

    // Rewrite every inequality in the free variables only.
    let mut system: Vec<Inequality> = inequalities
        .iter()
        .map(|ineq| {
            let mut coeffs: Vec<Rational> =
                reduced.free.iter().map(|&f| ineq.coeffs[f].clone()).collect();
            let mut bound = ineq.bound.clone();
            for (pc, pcoeffs, constant) in &reduced.pivots {
                let a = &ineq.coeffs[*pc];
                if a.is_zero() {
                    continue;
                }
                bound -= a * constant;
                for (c, pcoef) in coeffs.iter_mut().zip(pcoeffs) {
                    *c -= a * pcoef;
                }
            }
            Inequality { coeffs, bound }.normalized()
        })
        .collect();
    system = dedup(system);

    let mut stages = Vec::with_capacity(m + 1);
    for var in 0..m {
        let next = eliminate(&system, var);
        stages.push(std::mem::replace(&mut system, next));
    }
    if system.iter().any(|i| i.bound.is_negative()) {
        return None;
    }

    let mut values = vec![Rational::zero(); m];
    for var in (0..m).rev() {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for ineq in &stages[var] {
            let c = &ineq.coeffs[var];
            if c.is_zero() {
                continue;
            }
            let rest: Rational = (var + 1..m)
                .map(|j| &ineq.coeffs[j] * &values[j])
                .fold(Rational::zero(), |a, b| a + b);
            let limit = (&ineq.bound - rest) / c;
            if c.is_positive() {
                hi = Some(hi.map_or(limit.clone(), |h| h.min(limit)));
            } else {
                lo = Some(lo.map_or(limit.clone(), |l| l.max(limit)));
            }
        }
        values[var] = match (lo, hi) {
            (Some(l), Some(h)) => (l + h) / rat(2),
            (Some(l), None) => l + Rational::one(),
            (None, Some(h)) => h - Rational::one(),
            (None, None) => Rational::zero(),
        };
    }

    let mut point = vec![Rational::zero(); num_vars];
    for (&f, v) in reduced.free.iter().zip(&values) {
        point[f] = v.clone();
    }
    for (pc, pcoeffs, constant) in &reduced.pivots {
        let mut x = constant.clone();
        for (pcoef, v) in pcoeffs.iter().zip(&values) {
            x -= pcoef * v;
        }
        point[*pc] = x;
    }
    Some(point)
}
