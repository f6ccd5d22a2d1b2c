use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toricstack::fan::standard::{affine_space, product, projective_space};
use toricstack::fan::{
    is_admissible_zero_pattern, is_complete, maximal_cones, validate_fan, SimplicialFan, ZeroPattern,
};
use toricstack::random::{random_fan, DataBounds};

fn standard_fans() -> Vec<SimplicialFan> {
    let mut fans = Vec::new();
    for n in 1..=3 {
        fans.push(projective_space(n));
        fans.push(affine_space(n));
    }
    fans.push(product(&projective_space(1), &projective_space(1)));
    fans.push(product(&projective_space(1), &projective_space(2)));
    fans.push(product(&projective_space(2), &affine_space(1)));
    fans
}

/// Drops one face of a maximal cone of dimension at least two.
fn drop_a_face(fan: &SimplicialFan) -> Option<SimplicialFan> {
    let top = maximal_cones(fan).into_iter().find(|c| c.len() >= 2)?;
    let face = vec![top[0]];
    let cones = fan.cones().iter().filter(|c| **c != face).cloned().collect();
    Some(SimplicialFan::new(fan.lattice_rank(), fan.rays().to_vec(), cones))
}

/// Adds a cone overlapping an existing one or breaking simpliciality.
fn add_bad_cone(fan: &SimplicialFan) -> SimplicialFan {
    let all: Vec<usize> = (0..fan.num_rays()).collect();
    let mut cones = fan.cones().to_vec();
    cones.push(all);
    SimplicialFan::new(fan.lattice_rank(), fan.rays().to_vec(), cones)
}

#[test]
fn standard_fans_validate_and_mutations_fail() {
    for fan in standard_fans() {
        assert_eq!(validate_fan(&fan), Ok(()), "{fan:?}");
        if let Some(bad) = drop_a_face(&fan) {
            assert!(validate_fan(&bad).is_err());
        }
        if maximal_cones(&fan).iter().all(|c| c.len() < fan.num_rays()) {
            assert!(validate_fan(&add_bad_cone(&fan)).is_err());
        }
    }
}

#[test]
fn generated_fans_validate_and_mutations_fail() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let bounds = DataBounds::default();
    for _ in 0..150 {
        let fan = random_fan(&mut rng, &bounds);
        assert_eq!(validate_fan(&fan), Ok(()), "{fan:?}");
        if let Some(bad) = drop_a_face(&fan) {
            assert!(validate_fan(&bad).is_err(), "{bad:?}");
        }
    }
}

#[test]
fn complete_fans_admit_every_singleton() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let bounds = DataBounds::default();
    let mut fans = standard_fans();
    fans.extend((0..100).map(|_| random_fan(&mut rng, &bounds)));
    let mut complete = 0;
    for fan in fans.iter().filter(|f| is_complete(f)) {
        complete += 1;
        for k in 0..fan.num_rays() {
            assert!(is_admissible_zero_pattern(fan, &[k].into_iter().collect()));
        }
    }
    assert!(complete > 5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn admissibility_is_monotone(seed in any::<u64>(), mask in any::<u64>(), sub in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fan = random_fan(&mut rng, &DataBounds::default());
        let n = fan.num_rays();
        let w: ZeroPattern = (0..n).filter(|k| mask >> k & 1 == 1).collect();
        let w_sub: ZeroPattern = w.iter().filter(|k| sub >> k & 1 == 1).collect();
        if is_admissible_zero_pattern(&fan, &w) {
            prop_assert!(is_admissible_zero_pattern(&fan, &w_sub));
        }
        prop_assert!(is_admissible_zero_pattern(&fan, &ZeroPattern::empty()));
    }
}
