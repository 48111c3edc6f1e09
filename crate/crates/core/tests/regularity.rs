//! The regularity decider against a brute-force search for fixed paths.

mod common;

use common::{brute_force_regular, contracting, shipped, DEPTH, SHIPPED};
use selfsim::dynamics::{is_hausdorff, is_regular};
use selfsim::{Bounds, Nucleus};

#[test]
fn decider_agrees_with_brute_force_on_fuzzed_automata() {
    let mut checked = 0;
    let mut irregular = 0;
    let mut seed = 0;
    while checked < 50 {
        let (_, n) = contracting(seed);
        seed += 1;
        let non_units = (0..n.len()).filter(|&s| !n.is_unit(s)).count();
        if non_units > DEPTH {
            continue;
        }
        let regular = is_regular(&n).is_ok();
        assert_eq!(regular, brute_force_regular(&n), "seed {}", seed - 1);
        if regular {
            assert!(is_hausdorff(&n).is_ok());
        } else {
            irregular += 1;
        }
        checked += 1;
    }
    assert!(irregular > 0 && irregular < 50, "{irregular} of 50 irregular");
}

#[test]
fn shipped_examples() {
    for name in SHIPPED {
        let aut = shipped(name);
        let Ok(n) = Nucleus::compute(&aut, Bounds::default()) else {
            assert_eq!(name, "noncontracting");
            continue;
        };
        if is_regular(&n).is_ok() {
            assert!(is_hausdorff(&n).is_ok(), "{name}");
        }
        assert_eq!(is_regular(&n).is_ok(), brute_force_regular(&n), "{name}");
    }
}
