//! Germ equality against a direct scan of restrictions up to depth 32.

mod common;

use common::{fuzzed, random_element, random_loop, rng};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use selfsim::dynamics::{act_infinite, germ_equal, Germ};
use selfsim::{Automaton, Bounds, EdgeId, Element, Graph, Path, RightInfinitePath, VertexId};

const SCAN: usize = 32;

/// A random path of length at most `n` whose source is `v`.
fn path_from(g: &Graph, r: &mut impl Rng, v: VertexId, n: usize) -> Vec<EdgeId> {
    let mut rev = Vec::new();
    let mut at = v;
    for _ in 0..n {
        let Some(&e) = g.edges_out_of(at).choose(r) else { break };
        rev.push(e);
        at = g.range(e);
    }
    rev.reverse();
    rev
}

fn random_right(g: &Graph, r: &mut impl Rng) -> RightInfinitePath {
    let cycle = random_loop(g, r, 3);
    let v = g.range(cycle[0]);
    let n = r.gen_range(0..4);
    let head = path_from(g, r, v, n);
    RightInfinitePath::new(g, head, cycle).unwrap()
}

fn element_at(aut: &Automaton, r: &mut impl Rng, v: VertexId, len: usize) -> Element {
    for _ in 0..20 {
        let g = random_element(aut, r, len);
        if g.dom() == v {
            return g;
        }
    }
    aut.unit(v)
}

/// `g|_{y(from, to)}`
fn restrict_along(aut: &Automaton, g: &Element, y: &RightInfinitePath, from: usize, to: usize) -> Element {
    let edges: Vec<EdgeId> = (from + 1..=to).map(|i| y.edge_at(i)).collect();
    let p = Path::from_edges_at(aut.graph(), g.dom(), &edges).unwrap();
    aut.restrict(g, &p).unwrap()
}

fn oracle(aut: &Automaton, a: &Germ, b: &Germ) -> bool {
    if a.x() != b.x() || a.y() != b.y() || a.m() as i64 - a.n() as i64 != b.m() as i64 - b.n() as i64 {
        return false;
    }
    (a.n().max(b.n())..=SCAN).any(|l| {
        let ga = restrict_along(aut, a.g(), a.y(), a.n(), l);
        let gb = restrict_along(aut, b.g(), b.y(), b.n(), l);
        aut.equal(&ga, &gb).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn germ_equal_matches_scan(seed in any::<u64>(), n in 0usize..4, k in 0usize..4, glen in 0usize..4, mode in 0u8..3) {
        let aut = fuzzed(seed);
        let g = aut.graph();
        let b = Bounds::default();
        let mut r = rng(seed ^ 0x9e37);
        let y = random_right(g, &mut r);
        let tail = y.drop_front(n);
        let el = element_at(&aut, &mut r, tail.range(g), glen);
        let moved = act_infinite(&aut, &el, &tail, b).unwrap();
        let len = r.gen_range(0..3);
        let mu = path_from(g, &mut r, moved.range(g), len);
        let mu = Path::from_edges_at(g, moved.range(g), &mu).unwrap();
        let x = moved.prepend(g, &mu).unwrap();
        let m = mu.len();
        let a = Germ::new(&aut, x.clone(), m, el.clone(), n, y.clone(), b).unwrap();

        let shifted = || {
            let h = restrict_along(&aut, &el, &y, n, n + k);
            Germ::new(&aut, x.clone(), m + k, h, n + k, y.clone(), b).unwrap()
        };
        let other = match mode {
            0 => shifted(),
            _ => {
                let q = n + k;
                let h = element_at(&aut, &mut r, y.drop_front(q).range(g), glen);
                Germ::new(&aut, x.clone(), m + k, h, q, y.clone(), b).unwrap_or_else(|_| shifted())
            }
        };
        let decided = germ_equal(&aut, &a, &other, b).unwrap();
        prop_assert_eq!(decided, oracle(&aut, &a, &other));
        prop_assert_eq!(decided, germ_equal(&aut, &other, &a, b).unwrap());
        if mode == 0 {
            prop_assert!(decided);
        }
    }
}
