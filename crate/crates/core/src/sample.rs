//! Random valid automata and paths, for fuzzing and property tests.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::automaton::{Automaton, GeneratorSpec};
use crate::graph::{EdgeId, Graph, Path, VertexId};

#[derive(Clone, Copy, Debug)]
pub struct SampleParams {
    pub max_vertices: usize,
    pub max_extra_edges: usize,
    pub max_generators: usize,
    pub max_word_len: usize,
}

impl Default for SampleParams {
    fn default() -> Self {
        SampleParams {
            max_vertices: 2,
            max_extra_edges: 3,
            max_generators: 2,
            max_word_len: 1,
        }
    }
}

fn vertex_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["v", "w", "u"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (0..n).map(|i| format!("v{i}")).collect()
    }
}

/// A random graph without sinks in the range sense: every vertex receives
/// at least one edge.
pub fn random_graph<R: Rng>(rng: &mut R, params: &SampleParams) -> Graph {
    let nv = rng.gen_range(1..=params.max_vertices.max(1));
    let names = vertex_names(nv);
    let extra = rng.gen_range(0..=params.max_extra_edges);
    let mut edges = Vec::new();
    for i in 0..nv + extra {
        let dst = if i < nv { i } else { rng.gen_range(0..nv) };
        let src = rng.gen_range(0..nv);
        edges.push((i.to_string(), names[src].clone(), names[dst].clone()));
    }
    Graph::new(names, edges).expect("fresh names")
}

/// A random valid automaton; retries until validation passes.
pub fn random_automaton<R: Rng>(rng: &mut R, params: &SampleParams) -> Automaton {
    loop {
        if let Some(a) = attempt(rng, params) {
            return a;
        }
    }
}

fn attempt<R: Rng>(rng: &mut R, params: &SampleParams) -> Option<Automaton> {
    let g = random_graph(rng, params);
    let ng = rng.gen_range(1..=params.max_generators.max(1));
    let gen_names: Vec<String> = (0..ng).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let verts: Vec<VertexId> = g.vertices().collect();
    let mut ends = Vec::new();
    for _ in 0..ng {
        let dom = *verts.choose(rng)?;
        let same: Vec<VertexId> = verts
            .iter()
            .copied()
            .filter(|&w| g.edges_into(w).len() == g.edges_into(dom).len())
            .collect();
        ends.push((dom, *same.choose(rng)?));
    }
    // letters as (symbol, from, to)
    let mut letters = Vec::new();
    for (name, &(d, c)) in gen_names.iter().zip(&ends) {
        letters.push((name.clone(), d, c));
        letters.push((format!("{name}^-1"), c, d));
    }
    let mut specs = Vec::new();
    for (name, &(dom, cod)) in gen_names.iter().zip(&ends) {
        let mut spec = GeneratorSpec::new(name, g.vertex_name(dom), g.vertex_name(cod));
        let mut images: Vec<EdgeId> = g.edges_into(cod).to_vec();
        images.shuffle(rng);
        for (&e, &f) in g.edges_into(dom).iter().zip(&images) {
            let word = random_word(rng, &g, &letters, g.source(e), g.source(f), params.max_word_len)?;
            spec = spec.rule(g.edge_name(e), g.edge_name(f), &word);
        }
        specs.push(spec);
    }
    Automaton::new(g, specs).ok()
}

fn random_word<R: Rng>(
    rng: &mut R,
    g: &Graph,
    letters: &[(String, VertexId, VertexId)],
    from: VertexId,
    to: VertexId,
    max_len: usize,
) -> Option<String> {
    for _ in 0..32 {
        let len = rng.gen_range(0..=max_len);
        if len == 0 {
            if from == to {
                return Some(g.vertex_name(from).to_string());
            }
            continue;
        }
        // words act right to left, so walk from `from` through domains
        let mut cur = from;
        let mut word = Vec::new();
        for _ in 0..len {
            let options: Vec<&(String, VertexId, VertexId)> = letters.iter().filter(|l| l.1 == cur).collect();
            let Some(l) = options.choose(rng) else { break };
            word.push(l.0.clone());
            cur = l.2;
        }
        if word.len() == len && cur == to {
            word.reverse();
            return Some(word.join(" "));
        }
    }
    if from == to {
        return Some(g.vertex_name(from).to_string());
    }
    // shortest letter path
    let mut prev: Vec<Option<(VertexId, usize)>> = vec![None; g.num_vertices()];
    let mut queue = VecDeque::from([from]);
    let mut seen = vec![false; g.num_vertices()];
    seen[from.index()] = true;
    while let Some(v) = queue.pop_front() {
        for (i, l) in letters.iter().enumerate() {
            if l.1 == v && !seen[l.2.index()] {
                seen[l.2.index()] = true;
                prev[l.2.index()] = Some((v, i));
                queue.push_back(l.2);
            }
        }
    }
    if !seen[to.index()] {
        return None;
    }
    let mut word = Vec::new();
    let mut cur = to;
    while let Some((p, i)) = prev[cur.index()] {
        word.push(letters[i].0.clone());
        cur = p;
    }
    Some(word.join(" "))
}

/// A random path of length `n`, grown from its range; `None` when it runs
/// into a vertex that receives no edges.
pub fn random_path<R: Rng>(rng: &mut R, g: &Graph, n: usize) -> Option<Path> {
    let verts: Vec<VertexId> = g.vertices().collect();
    let start = *verts.choose(rng)?;
    let mut at = start;
    let mut edges = Vec::with_capacity(n);
    for _ in 0..n {
        let e = *g.edges_into(at).choose(rng)?;
        edges.push(e);
        at = g.source(e);
    }
    Path::from_edges_at(g, start, &edges).ok()
}

/// A random cycle (closed path) of length `1..=max_len`, if one is found.
pub fn random_cycle<R: Rng>(rng: &mut R, g: &Graph, max_len: usize) -> Option<Vec<EdgeId>> {
    for _ in 0..64 {
        let n = rng.gen_range(1..=max_len.max(1));
        let p = random_path(rng, g, n)?;
        if p.source() == p.range() {
            return Some(p.edges().to_vec());
        }
    }
    None
}
