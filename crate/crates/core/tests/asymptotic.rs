//! Asymptotic equivalence: equivalence-relation laws, class sizes and the
//! shift on classes.

mod common;

use common::{contracting, path_at, random_loop, rng};
use proptest::prelude::*;
use rand::Rng;
use selfsim::dynamics::{ae_class, ae_equivalent, shift_class};
use selfsim::{Graph, LeftInfinitePath};

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
    fn ae_is_an_equivalence_with_small_classes(seed in any::<u64>()) {
        let (aut, n) = contracting(seed);
        let g = aut.graph();
        let mut r = rng(seed.wrapping_mul(31));
        let x = random_left(g, &mut r);
        let class = ae_class(&n, &x);
        prop_assert!(ae_equivalent(&n, &x, &x));
        prop_assert!(class.contains(&x));
        prop_assert!(class.len() <= n.len(), "class of {} has {} members, nucleus {}", x.display(g), class.len(), n.len());
        for y in &class {
            prop_assert!(ae_equivalent(&n, &x, y));
            prop_assert!(ae_equivalent(&n, y, &x));
            prop_assert_eq!(&ae_class(&n, y), &class);
        }
        let z = random_left(g, &mut r);
        prop_assert_eq!(ae_equivalent(&n, &x, &z), class.contains(&z));
        prop_assert_eq!(ae_equivalent(&n, &z, &x), class.contains(&z));
    }

    #[test]
    fn shift_is_well_defined_on_classes(seed in any::<u64>()) {
        let (aut, n) = contracting(seed);
        let g = aut.graph();
        let mut r = rng(seed ^ 0xa5a5);
        let x = random_left(g, &mut r);
        let sx = shift_class(&x);
        for y in ae_class(&n, &x) {
            prop_assert!(ae_equivalent(&n, &sx, &shift_class(&y)));
        }
    }
}
