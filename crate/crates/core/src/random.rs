//! Seeded generators of small valid inputs for property tests and benches.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::fan::standard::{affine_space, product, projective_space};
use crate::fan::{maximal_cones, rays_span, validate_fan, Cone, SimplicialFan};
use crate::lattice::IntegerMatrix;
use crate::stacky::StackyData;

/// Size limits for [`random_data`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DataBounds {
    pub max_rank: usize,
    pub max_rays: usize,
    pub max_entry: i64,
    pub max_roots: usize,
    pub max_root: i64,
    pub max_b: i64,
}

impl Default for DataBounds {
    fn default() -> Self {
        DataBounds {
            max_rank: 3,
            max_rays: 6,
            max_entry: 5,
            max_roots: 2,
            max_root: 4,
            max_b: 6,
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn big_rays(rays: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rays.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn small_rays(fan: &SimplicialFan) -> Vec<Vec<i64>> {
    fan.rays()
        .iter()
        .map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect())
        .collect()
}

/// Rank-one fan: one or both half-lines.
fn random_line<R: Rng>(rng: &mut R, b: &DataBounds) -> SimplicialFan {
    let mut rays = vec![vec![-rng.gen_range(1..=b.max_entry)], vec![rng.gen_range(1..=b.max_entry)]];
    if rng.gen_bool(0.2) {
        rays.remove(rng.gen_range(0..2));
    }
    let maximal: Vec<Cone> = (0..rays.len()).map(|k| vec![k]).collect();
    SimplicialFan::from_maximal_cones(1, big_rays(&rays), &maximal)
}

/// Plane fan: rays sorted by angle, consecutive pairs spanning a strictly
/// convex sector kept as 2-cones with high probability.
fn random_plane<R: Rng>(rng: &mut R, b: &DataBounds) -> SimplicialFan {
    let target = rng.gen_range(2..=b.max_rays.max(2));
    let mut dirs: Vec<(i64, i64)> = Vec::new();
    let mut rays: Vec<(i64, i64)> = Vec::new();
    for _ in 0..200 {
        if rays.len() == target {
            break;
        }
        let (x, y) = (rng.gen_range(-b.max_entry..=b.max_entry), rng.gen_range(-b.max_entry..=b.max_entry));
        if x == 0 && y == 0 {
            continue;
        }
        let g = gcd(x, y);
        let dir = (x / g, y / g);
        if dirs.contains(&dir) {
            continue;
        }
        dirs.push(dir);
        rays.push((x, y));
    }
    rays.sort_by(|p, q| (p.1 as f64).atan2(p.0 as f64).total_cmp(&(q.1 as f64).atan2(q.0 as f64)));
    let n = rays.len();
    let mut maximal: Vec<Cone> = (0..n).map(|k| vec![k]).collect();
    if n >= 2 {
        for k in 0..n {
            let (u, v) = (rays[k], rays[(k + 1) % n]);
            let cross = u.0 * v.1 - u.1 * v.0;
            let convex = if n == 2 { k == 0 && cross != 0 } else { cross > 0 };
            if convex && rng.gen_bool(0.85) {
                maximal.push(vec![k, (k + 1) % n]);
            }
        }
    }
    let rays: Vec<Vec<i64>> = rays.into_iter().map(|(x, y)| vec![x, y]).collect();
    SimplicialFan::from_maximal_cones(2, big_rays(&rays), &maximal)
}

/// Random product of elementary matrices with small off-diagonal entries.
fn random_unimodular<R: Rng>(rng: &mut R, d: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect();
    if d < 2 {
        return m;
    }
    for _ in 0..rng.gen_range(0..4) {
        let i = rng.gen_range(0..d);
        let j = (i + rng.gen_range(1..d)) % d;
        let k = rng.gen_range(-1..=1);
        for t in 0..d {
            m[i][t] += k * m[j][t];
        }
    }
    m
}

/// Rank-three fan from a standard shape, optionally with some maximal cones
/// removed, rays stretched and a unimodular change of basis applied.
fn random_space<R: Rng>(rng: &mut R, b: &DataBounds) -> SimplicialFan {
    let shapes = [
        projective_space(3),
        affine_space(3),
        product(&projective_space(1), &projective_space(2)),
        product(&projective_space(2), &affine_space(1)),
        product(&product(&projective_space(1), &projective_space(1)), &projective_space(1)),
    ];
    let base = shapes
        .into_iter()
        .filter(|f| f.num_rays() <= b.max_rays)
        .collect::<Vec<_>>()
        .choose(rng)
        .cloned()
        .unwrap_or_else(|| affine_space(3));
    let mut maximal = maximal_cones(&base);
    maximal.shuffle(rng);
    let drop = rng.gen_range(0..=maximal.len() / 2);
    let kept: Vec<Cone> = maximal.split_off(drop);
    let mut used = vec![false; base.num_rays()];
    kept.iter().flatten().for_each(|&k| used[k] = true);
    let mut maximal = kept;
    maximal.extend((0..base.num_rays()).filter(|&k| !used[k]).map(|k| vec![k]));

    let rays = small_rays(&base);
    for _ in 0..20 {
        let t = random_unimodular(rng, 3);
        let candidate: Vec<Vec<i64>> = rays
            .iter()
            .map(|r| {
                let m = if rng.gen_bool(0.3) { rng.gen_range(2..=3) } else { 1 };
                (0..3).map(|i| m * (0..3).map(|j| t[i][j] * r[j]).sum::<i64>()).collect()
            })
            .collect();
        if candidate.iter().flatten().all(|x| x.abs() <= b.max_entry) {
            return SimplicialFan::from_maximal_cones(3, big_rays(&candidate), &maximal);
        }
    }
    SimplicialFan::from_maximal_cones(3, big_rays(&rays), &maximal)
}

/// A valid simplicial fan of rank `1..=max_rank`.
pub fn random_fan<R: Rng>(rng: &mut R, bounds: &DataBounds) -> SimplicialFan {
    let fan = match rng.gen_range(1..=bounds.max_rank.clamp(1, 3)) {
        1 => random_line(rng, bounds),
        2 => random_plane(rng, bounds),
        _ => random_space(rng, bounds),
    };
    debug_assert_eq!(validate_fan(&fan), Ok(()));
    fan
}

/// Root data on top of a given fan.
pub fn random_roots<R: Rng>(rng: &mut R, fan: SimplicialFan, bounds: &DataBounds) -> StackyData {
    let rr = rng.gen_range(0..=bounds.max_roots);
    let r: Vec<BigInt> = (0..rr).map(|_| BigInt::from(rng.gen_range(1..=bounds.max_root))).collect();
    let n = fan.num_rays();
    let rows: Vec<Vec<i64>> = (0..rr)
        .map(|_| (0..n).map(|_| rng.gen_range(-bounds.max_b..=bounds.max_b)).collect())
        .collect();
    StackyData::new(fan, r, IntegerMatrix::from_rows(n, &rows))
}

pub fn random_data<R: Rng>(rng: &mut R, bounds: &DataBounds) -> StackyData {
    let fan = random_fan(rng, bounds);
    random_roots(rng, fan, bounds)
}

/// Like [`random_data`] but with rays spanning `N_Q`.
pub fn random_spanning_data<R: Rng>(rng: &mut R, bounds: &DataBounds) -> StackyData {
    loop {
        let fan = random_fan(rng, bounds);
        if rays_span(&fan).spans {
            return random_roots(rng, fan, bounds);
        }
    }
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, max_abs: i64) -> IntegerMatrix {
    let entries: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-max_abs..=max_abs)).collect())
        .collect();
    IntegerMatrix::from_rows(cols, &entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::stacky::validate_data;

    #[test]
    fn generated_data_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let bounds = DataBounds::default();
        let mut ranks = [0usize; 4];
        for _ in 0..300 {
            let data = random_data(&mut rng, &bounds);
            assert_eq!(validate_data(&data), Ok(()), "{:?}", data.fan());
            assert!(data.num_rays() <= bounds.max_rays);
            assert!(data.fan().rays().iter().flatten().all(|x| x.magnitude() <= &5u32.into()));
            ranks[data.lattice_rank()] += 1;
        }
        assert!(ranks[1..].iter().all(|&c| c > 0), "{ranks:?}");
        for _ in 0..50 {
            assert!(rays_span(random_spanning_data(&mut rng, &bounds).fan()).spans);
        }
    }
}
