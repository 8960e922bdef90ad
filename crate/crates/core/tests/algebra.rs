//! Exhaustive and randomized checks of the string monoid, the left distance,
//! distributions and stochastic map composition.

mod common;

use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tokcheck_core::{
    compose, concat, enumerate_strings, fixtures, kl_divergence, l1_distance, left_distance,
    longest_common_prefix, pushforward, ratio, tv_distance, Dist, Rational, Space, StochMap, Str,
};

use common::{alphabet, random_dist, random_map};

#[test]
fn monoid_laws_exhaustive() {
    let a = alphabet(3);
    let all = enumerate_strings(&a, 4);
    let eps = Str::empty(&a);
    for x in &all {
        assert_eq!(&concat(&eps, x).unwrap(), x);
        assert_eq!(&concat(x, &eps).unwrap(), x);
    }
    for x in &all {
        for y in &all {
            let xy = concat(x, y).unwrap();
            assert_eq!(xy.len(), x.len() + y.len());
            for z in &all {
                let left = concat(&xy, z).unwrap();
                let right = concat(x, &concat(y, z).unwrap()).unwrap();
                assert_eq!(left, right);
            }
        }
    }
}

#[test]
fn left_distance_is_a_metric() {
    let a = alphabet(2);
    let all = enumerate_strings(&a, 4);
    for x in &all {
        for y in &all {
            let dxy = left_distance(x, y).unwrap();
            assert_eq!(dxy == 0, x == y);
            assert_eq!(dxy, left_distance(y, x).unwrap());
            let lcp = longest_common_prefix(x, y).unwrap();
            assert_eq!(dxy, x.len() + y.len() - 2 * lcp.len());
            for z in &all {
                assert!(left_distance(x, z).unwrap() <= dxy + left_distance(y, z).unwrap());
            }
        }
    }
}

#[test]
fn enumeration_has_no_duplicates() {
    for k in 1..=3 {
        for n in 0..=4 {
            let all = enumerate_strings(&alphabet(k), n);
            let expected: usize = (0..=n).map(|i| k.pow(i as u32)).sum();
            assert_eq!(all.len(), expected);
            let set: std::collections::BTreeSet<_> = all.iter().collect();
            assert_eq!(set.len(), all.len());
        }
    }
}

/// Dense `Σ_y g[y][z] f[x][y]` over canonical indices.
fn dense_compose(g: &StochMap, f: &StochMap) -> Vec<Vec<Rational>> {
    let xs = f.dom().strings();
    let ys = f.cod().strings();
    let zs = g.cod().strings();
    let mut out = vec![vec![Rational::zero(); zs.len()]; xs.len()];
    for (i, x) in xs.iter().enumerate() {
        for y in &ys {
            let fy = f.kernel_at(x).unwrap().mass(y);
            for (k, z) in zs.iter().enumerate() {
                out[i][k] += &fy * g.kernel_at(y).unwrap().mass(z);
            }
        }
    }
    out
}

#[test]
fn compose_matches_dense_matrix_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..40 {
        let sizes = [1 + trial % 5, 1 + (trial / 2) % 5, 1 + (trial / 3) % 5];
        let spaces: Vec<Space> = sizes.iter().map(|&k| Space::truncated(&alphabet(k), 1)).collect();
        let f = random_map(&mut rng, &spaces[0], &spaces[1]);
        let g = random_map(&mut rng, &spaces[1], &spaces[2]);
        let gf = compose(&g, &f).unwrap();
        let dense = dense_compose(&g, &f);
        let zs = spaces[2].strings();
        for (i, x) in spaces[0].strings().iter().enumerate() {
            let row = gf.kernel_at(x).unwrap();
            let total: Rational = row.iter().map(|(_, m)| m.clone()).sum();
            assert_eq!(total, ratio(1, 1));
            for (k, z) in zs.iter().enumerate() {
                assert_eq!(row.mass(z), dense[i][k]);
            }
        }
    }
}

#[test]
fn composition_is_associative_with_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for trial in 0..30 {
        let spaces: Vec<Space> = (0..4)
            .map(|j| Space::truncated(&alphabet(1 + (trial + j) % 5), 1))
            .collect();
        let f = random_map(&mut rng, &spaces[0], &spaces[1]);
        let g = random_map(&mut rng, &spaces[1], &spaces[2]);
        let h = random_map(&mut rng, &spaces[2], &spaces[3]);
        let left = compose(&h, &compose(&g, &f).unwrap()).unwrap();
        let right = compose(&compose(&h, &g).unwrap(), &f).unwrap();
        assert_eq!(left, right);
        assert_eq!(compose(&StochMap::identity_map(&spaces[1]), &f).unwrap(), f);
        assert_eq!(compose(&f, &StochMap::identity_map(&spaces[0])).unwrap(), f);
    }
}

#[test]
fn pushforward_contracts_l1() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let dom = Space::truncated(&alphabet(2), 2);
    let cod = Space::truncated(&alphabet(3), 1);
    for _ in 0..100 {
        let f = random_map(&mut rng, &dom, &cod);
        let p = random_dist(&mut rng, &dom);
        let q = random_dist(&mut rng, &dom);
        let before = l1_distance(&p, &q).unwrap();
        let after = l1_distance(&pushforward(&f, &p).unwrap(), &pushforward(&f, &q).unwrap()).unwrap();
        assert!(after <= before, "{after} > {before}");
    }
}

#[test]
fn deterministic_pushforward_sums_fibers() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let a = alphabet(3);
    let dom = Space::truncated(&a, 2);
    let cod = Space::truncated(&a, 1);
    // keep only the last symbol
    let f = StochMap::deterministic(&dom, &cod, |x| Ok(x.suffix_from(x.len().saturating_sub(1)))).unwrap();
    for _ in 0..20 {
        let p = random_dist(&mut rng, &dom);
        let fp = pushforward(&f, &p).unwrap();
        for y in cod.strings() {
            let fiber: Rational = dom
                .strings()
                .iter()
                .filter(|x| f.value_at(x).unwrap() == Some(&y))
                .map(|x| p.mass(x))
                .sum();
            assert_eq!(fp.mass(&y), fiber);
        }
    }
}

#[test]
fn pushforward_of_point_mass_is_the_row() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let dom = Space::truncated(&alphabet(2), 2);
    let cod = Space::truncated(&alphabet(2), 2);
    let f = random_map(&mut rng, &dom, &cod);
    for x in dom.strings() {
        let p = Dist::point_mass(&x, &dom).unwrap();
        assert_eq!(&pushforward(&f, &p).unwrap(), f.kernel_at(&x).unwrap());
    }
    let g = StochMap::deterministic(&dom, &cod, |x| Ok(x.prefix(x.len().min(1)))).unwrap();
    for x in dom.strings() {
        let p = Dist::point_mass(&x, &dom).unwrap();
        let expected = Dist::point_mass(&x.prefix(x.len().min(1)), &cod).unwrap();
        assert_eq!(pushforward(&g, &p).unwrap(), expected);
    }
}

#[test]
fn pinsker_bound_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let space = Space::truncated(&alphabet(2), 2);
    let support = space.strings();
    for _ in 0..100 {
        let weights = |rng: &mut ChaCha8Rng| {
            support
                .iter()
                .map(|s| (s.clone(), rand::Rng::random_range(rng, 1..=20u64)))
                .collect::<Vec<_>>()
        };
        let p = Dist::from_weights(&space, weights(&mut rng)).unwrap();
        let q = Dist::from_weights(&space, weights(&mut rng)).unwrap();
        let tv = tv_distance(&p, &q).unwrap().to_f64().unwrap();
        let kl = kl_divergence(&p, &q).unwrap();
        assert!(tv <= (kl / 2.0).sqrt() + 1e-9, "tv {tv} kl {kl}");
        assert!(tv <= 1.0);
        assert!(l1_distance(&p, &q).unwrap() <= ratio(2, 1));
    }
}

#[test]
fn collapse_sampling_frequencies() {
    let p = fixtures::collapse_p_star();
    let draws = p.sample(42, 100_000);
    for (label, target) in [("σ1", 0.2), ("σ2", 0.4), ("σ3", 0.4)] {
        let s = fixtures::collapse_text(label);
        let freq = draws.iter().filter(|d| **d == s).count() as f64 / 1e5;
        assert!((freq - target).abs() < 0.01, "{label}: {freq}");
    }
}

#[test]
fn empirical_converges_on_doubling_schedule() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let space = Space::truncated(&alphabet(2), 2);
    for seed in 0..5u64 {
        let candidates: Vec<Str> = space.strings().into_iter().take(5).collect();
        let p = Dist::random(&space, &candidates, 9, &mut rng).unwrap();
        let mut n = 1_000usize;
        while n <= 128_000 {
            let e = Dist::empirical(&p.sample(seed ^ n as u64, n), &space).unwrap();
            let tv = tv_distance(&e, &p).unwrap().to_f64().unwrap();
            assert!(tv < 3.0 / (n as f64).sqrt(), "n {n}: tv {tv}");
            n *= 2;
        }
        let e = Dist::empirical(&p.sample(seed, 100_000), &space).unwrap();
        assert!(tv_distance(&e, &p).unwrap() < ratio(1, 50));
    }
}

proptest! {
    #[test]
    fn distance_bounds(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = Space::truncated(&alphabet(3), 2);
        let p = random_dist(&mut rng, &space);
        let q = random_dist(&mut rng, &space);
        prop_assert!(tv_distance(&p, &q).unwrap() <= ratio(1, 1));
        prop_assert_eq!(tv_distance(&p, &q).unwrap(), tv_distance(&q, &p).unwrap());
        prop_assert!(tv_distance(&p, &p).unwrap().is_zero());
    }

    #[test]
    fn sampling_is_reproducible(seed in any::<u64>(), n in 0usize..200) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = Space::truncated(&alphabet(2), 2);
        let p = random_dist(&mut rng, &space);
        let draws = p.sample(seed, n);
        prop_assert_eq!(&draws, &p.sample(seed, n));
        prop_assert!(draws.iter().all(|d| p.mass(d) > Rational::zero()));
    }

    #[test]
    fn composition_keeps_rows_stochastic(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = Space::truncated(&alphabet(2), 2);
        let y = Space::truncated(&alphabet(3), 1);
        let f = random_map(&mut rng, &x, &y);
        let g = random_map(&mut rng, &y, &x);
        for (_, row) in compose(&g, &f).unwrap().rows() {
            let total: Rational = row.iter().map(|(_, m)| m.clone()).sum();
            prop_assert_eq!(total, ratio(1, 1));
        }
    }
}
