//! Schreier graphs: the projection is a graph morphism, and bounded
//! distance profiles detect asymptotic equivalence.

mod common;

use common::{contracting, path_at, random_loop, rng, shipped};
use proptest::prelude::*;
use rand::Rng;
use selfsim::dynamics::{ae_class, ae_equivalent};
use selfsim::schreier::{distance_profile, Generators};
use selfsim::{Bounds, Graph, LeftInfinitePath, Nucleus, Path};

fn random_left(g: &Graph, r: &mut impl Rng) -> LeftInfinitePath {
    let cycle = random_loop(g, r, 3);
    let v = g.range(cycle[0]);
    let n = r.gen_range(0..4);
    let tail = path_at(g, r, v, n);
    LeftInfinitePath::new(g, cycle, tail.edges().to_vec()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn projection_is_a_morphism(seed in any::<u64>(), level in 1usize..=4) {
        let (aut, n) = contracting(seed);
        let g = aut.graph();
        let gens = Generators::standard(&n).unwrap();
        let upper = gens.level(level);
        let lower = gens.level(level - 1);
        let psi = gens.project(&upper, &lower);
        for (i, mu) in upper.vertices().iter().enumerate() {
            let tail = Path::from_edges_at(g, mu.source(), &mu.edges()[1..]).unwrap();
            let tail = if tail.is_empty() { Path::empty(g.source(mu.edges()[0])) } else { tail };
            prop_assert_eq!(Some(psi.vertex_map[i]), lower.vertex_index(&tail));
        }
        for (e, f) in upper.edges().iter().zip(&psi.edge_map) {
            prop_assert!(lower.edges().contains(f));
            let ends = [psi.vertex_map[e.from], psi.vertex_map[e.to]];
            prop_assert!(ends == [f.from, f.to] || ends == [f.to, f.from]);
        }
    }
}

#[test]
fn bounded_profiles_are_asymptotic_pairs() {
    let aut = shipped("ex310");
    let n = Nucleus::compute(&aut, Bounds::default()).unwrap();
    let gens = Generators::standard(&n).unwrap();
    let levels: Vec<_> = (1..=12).map(|k| gens.level(k)).collect();
    let g = aut.graph();
    let mut r = rng(2024);
    let mut equivalent = 0;
    for i in 0..100 {
        let x = random_left(g, &mut r);
        let y = if i % 2 == 0 {
            let class = ae_class(&n, &x);
            class[r.gen_range(0..class.len())].clone()
        } else {
            random_left(g, &mut r)
        };
        let profile: Vec<usize> = levels
            .iter()
            .enumerate()
            .map(|(k, gamma)| {
                let mu = Path::from_edges(g, &x.suffix(k + 1)).unwrap();
                let nu = Path::from_edges(g, &y.suffix(k + 1)).unwrap();
                gamma.geodesic_distance(&mu, &nu).unwrap().unwrap()
            })
            .collect();
        if i < 6 {
            let direct = distance_profile(&gens, &x, &y, 6);
            assert_eq!(direct, profile[..6].iter().map(|&d| Some(d)).collect::<Vec<_>>());
        }
        let ae = ae_equivalent(&n, &x, &y);
        equivalent += ae as usize;
        let bounded = profile.iter().all(|&d| d <= 1);
        assert_eq!(bounded, ae, "{} vs {}: {profile:?}", x.display(g), y.display(g));
    }
    assert!(equivalent >= 50);
}
