use hscomp::group::{make_group, GroupModel, GroupSpec};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SAMPLES: usize = 10_000;

fn models() -> Vec<GroupModel> {
    [
        "free_abelian(1)",
        "free_abelian(3)",
        "free_group(2)",
        "free_group(3)",
        "heisenberg",
        "direct_sum_finite(1,2,3,5,2)",
        "lamplighter(2)",
        "lamplighter(3)",
        "lamplighter(inf)",
        "extension(free_abelian(2),free_abelian(1),heisenberg)",
        "extension(free_abelian(1),direct_sum_finite(1,2,2,2),trivial)",
        "extension(free_group(2),free_abelian(1),trivial)",
    ]
    .iter()
    .map(|s| make_group(&s.parse::<GroupSpec>().unwrap()).unwrap())
    .collect()
}

#[test]
fn group_axioms_on_samples() {
    for (seed, g) in models().iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
        let e = g.identity();
        for _ in 0..SAMPLES {
            let (x, y, z) = (g.sample(&mut rng, 6), g.sample(&mut rng, 6), g.sample(&mut rng, 6));
            assert!(g.is_valid(&x), "{}", g.spec());
            assert_eq!(g.multiply(&g.multiply(&x, &y), &z), g.multiply(&x, &g.multiply(&y, &z)), "{}", g.spec());
            assert_eq!(g.multiply(&x, &e), x);
            assert_eq!(g.multiply(&e, &x), x);
            assert_eq!(g.multiply(&x, &g.inverse(&x)), e, "{}", g.spec());
            assert!(g.is_valid(&g.multiply(&x, &y)));
        }
    }
}

#[test]
fn length_axioms_on_samples() {
    for (seed, g) in models().iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed as u64);
        let e = g.identity();
        assert_eq!(g.length(&e), 0);
        for _ in 0..SAMPLES {
            let (x, y, z) = (g.sample(&mut rng, 6), g.sample(&mut rng, 6), g.sample(&mut rng, 6));
            let lx = g.length(&x);
            assert_eq!(lx == 0, x == e, "{}", g.spec());
            assert_eq!(g.length(&g.inverse(&x)), lx, "{}", g.spec());
            assert!(g.length(&g.multiply(&x, &y)) <= lx + g.length(&y), "{}", g.spec());
            assert_eq!(g.distance(&g.multiply(&z, &x), &g.multiply(&z, &y)), g.distance(&x, &y), "{}", g.spec());
        }
    }
}

proptest! {
    #[test]
    fn format_parse_round_trip(which in 0usize..12, seed in any::<u64>()) {
        let g = &models()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = g.sample(&mut rng, 5);
        prop_assert_eq!(g.parse_element(&g.format_element(&x)).unwrap(), x);
    }

    #[test]
    fn spec_display_round_trip(which in 0usize..12) {
        let spec = models()[which].spec().clone();
        prop_assert_eq!(spec.to_string().parse::<GroupSpec>().unwrap(), spec);
    }
}
