//! The spec-file and path-literal formats round-trip.

mod common;

use common::{fuzzed, path_at, random_loop, rng};
use proptest::prelude::*;
use rand::Rng;
use selfsim::paths::{parse_bi, parse_left, parse_right};
use selfsim::{format_spec, parse_spec, BiInfinitePath, LeftInfinitePath, RightInfinitePath, SpecError, SpecFile};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn spec_files_round_trip(
        seed in any::<u64>(),
        states in proptest::option::of(1usize..100_000),
        rounds in proptest::option::of(1usize..100),
        gens in proptest::option::of(1usize..4),
    ) {
        let aut = fuzzed(seed);
        let mut spec = SpecFile::from_automaton(&aut);
        spec.options.max_states = states;
        spec.options.max_rounds = rounds;
        spec.options.generators = gens.map(|k| {
            aut.generator_specs().iter().take(k).map(|g| g.name.clone()).collect()
        });
        let text = format_spec(&spec);
        let parsed = parse_spec(&text).unwrap();
        prop_assert_eq!(&parsed, &spec);
        prop_assert_eq!(format_spec(&parsed), text.clone());
        prop_assert_eq!(parsed.automaton().unwrap(), (*aut).clone());

        // damage one line; the parser must fail cleanly or still round-trip
        let mut r = rng(seed);
        let lines: Vec<&str> = text.lines().collect();
        let at = r.gen_range(0..lines.len());
        let col = r.gen_range(0..=lines[at].len());
        let junk = ["->", "|", ":", "[", "x^-1", "#", "=", ""][r.gen_range(0..8)];
        let mut broken: Vec<String> = lines.iter().map(|s| s.to_string()).collect();
        broken[at].insert_str(col, junk);
        match parse_spec(&broken.join("\n")) {
            Ok(s) => prop_assert_eq!(parse_spec(&format_spec(&s)).unwrap(), s),
            Err(SpecError::Syntax { line, col, .. }) | Err(SpecError::UnknownSymbol { line, col, .. }) => {
                prop_assert!(line >= 1 && line <= lines.len() + 1 && col >= 1);
            }
            Err(SpecError::Validation(_)) => {}
        }
    }

    #[test]
    fn path_literals_round_trip(seed in any::<u64>(), shift in -5i64..5) {
        let aut = fuzzed(seed);
        let g = aut.graph();
        let mut r = rng(seed.rotate_right(9));
        let cycle = random_loop(g, &mut r, 4);
        let v = g.range(cycle[0]);
        let k = r.gen_range(0..4);
        let tail = path_at(g, &mut r, v, k);
        let x = LeftInfinitePath::new(g, cycle.clone(), tail.edges().to_vec()).unwrap();
        prop_assert_eq!(parse_left(g, &x.display(g).to_string()).unwrap(), x.clone());

        let y = RightInfinitePath::new(g, Vec::new(), cycle.clone()).unwrap();
        prop_assert_eq!(parse_right(g, &y.display(g).to_string()).unwrap(), y.clone());

        let k = r.gen_range(0..3);
        let center = path_at(g, &mut r, v, k);
        let u = center.source();
        let right = (0..64).find_map(|_| {
            let n = r.gen_range(1..=4);
            let p = path_at(g, &mut r, u, n);
            (p.source() == u).then(|| p.edges().to_vec())
        });
        if let Some(right) = right {
            let z = BiInfinitePath::new(g, cycle, center.edges().to_vec(), right, shift).unwrap();
            prop_assert_eq!(parse_bi(g, &z.display(g).to_string()).unwrap(), z.clone());
            prop_assert_eq!(z.translate(3).translate(-3), z);
        }
    }
}
