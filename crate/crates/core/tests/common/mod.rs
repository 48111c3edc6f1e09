#![allow(dead_code)]

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use selfsim::sample::{random_automaton, SampleParams};
use selfsim::{Automaton, Bounds, EdgeId, Element, Graph, Nucleus, Path, VertexId};

pub const SHIPPED: [&str; 5] = ["ex310", "basilica", "katsura", "odometer", "noncontracting"];

pub fn shipped(name: &str) -> Arc<Automaton> {
    let path = format!("{}/examples/{name}.ss", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(path).unwrap();
    Arc::new(selfsim::load_spec(&text).unwrap().1)
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn small() -> SampleParams {
    SampleParams::default()
}

pub fn fuzzed(seed: u64) -> Arc<Automaton> {
    Arc::new(random_automaton(&mut rng(seed), &small()))
}

pub fn small_bounds() -> Bounds {
    Bounds {
        max_states: 400,
        max_rounds: 16,
        max_word_len: 64,
    }
}

/// The first automaton from `seed` onward whose nucleus is found within
/// small bounds.
pub fn contracting(seed: u64) -> (Arc<Automaton>, Nucleus) {
    let mut r = rng(seed);
    loop {
        let aut = Arc::new(random_automaton(&mut r, &small()));
        if let Ok(n) = Nucleus::compute(&aut, small_bounds()) {
            return (aut, n);
        }
    }
}

/// A random composable word of `len` letters, as an element.
pub fn random_element(aut: &Automaton, r: &mut impl Rng, len: usize) -> Element {
    let letters = aut.letter_elements();
    let mut g = letters.choose(r).unwrap().clone();
    if len == 0 {
        return aut.unit(g.dom());
    }
    for _ in 1..len {
        let options: Vec<&Element> = letters.iter().filter(|l| l.dom() == g.cod()).collect();
        let Some(&l) = options.choose(r) else { break };
        g = aut.compose(l, &g).unwrap();
    }
    g
}

/// A random path of length `n` with range `v`.
pub fn path_at(g: &Graph, r: &mut impl Rng, v: VertexId, n: usize) -> Path {
    let mut at = v;
    let mut edges = Vec::with_capacity(n);
    for _ in 0..n {
        let e = *g.edges_into(at).choose(r).unwrap();
        edges.push(e);
        at = g.source(e);
    }
    Path::from_edges_at(g, v, &edges).unwrap()
}

/// Every path of length `n` with range `v`.
pub fn all_paths_at(g: &Graph, v: VertexId, n: usize) -> Vec<Path> {
    g.enumerate_paths(n, Some(v))
}

/// A random closed path at some vertex, length `1..=max`.
pub fn random_loop(g: &Graph, r: &mut impl Rng, max: usize) -> Vec<EdgeId> {
    loop {
        let v = *g.vertices().collect::<Vec<_>>().choose(r).unwrap();
        let n = r.gen_range(1..=max);
        let p = path_at(g, r, v, n);
        if p.source() == p.range() {
            return p.edges().to_vec();
        }
    }
}

pub const DEPTH: usize = 10;

/// Whether `g` fixes some path of length `depth` with no restriction along
/// it acting trivially.
fn fixes_without_settling(aut: &Automaton, g: &Element, depth: usize) -> bool {
    if aut.equal(g, &aut.unit(g.dom())).unwrap() {
        return false;
    }
    if depth == 0 {
        return true;
    }
    aut.graph().edges_into(g.dom()).iter().any(|&e| {
        let (f, h) = aut.step(g, e).unwrap();
        f == e && fixes_without_settling(aut, &h, depth - 1)
    })
}

pub fn brute_force_regular(n: &Nucleus) -> bool {
    let aut = n.automaton();
    !n.elements()
        .iter()
        .filter(|g| g.dom() == g.cod())
        .any(|g| fixes_without_settling(aut, g, DEPTH))
}
