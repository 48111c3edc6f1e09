//! Recurrence (bounded search) and level-transitivity.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::DynamicsError;
use crate::automaton::{Automaton, Element};
use crate::graph::{EdgeId, Path};
use crate::machine::{Bounds, StateId, StateMachine};

pub const DEFAULT_RECURRENCE_DEPTH: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Recurrence {
    Recurrent,
    /// No word of length `<= depth` realises `g · e = f` with `g|_e = h`.
    Inconclusive {
        depth: usize,
        edge: String,
        image: String,
        restriction: String,
    },
}

/// Searches words of length `<= depth` for every triple `(e, f, h)` with
/// `h` a generator, inverse or unit and `d(h) = s(e)`, `c(h) = s(f)`.
pub fn check_recurrent(aut: &Arc<Automaton>, depth: usize, bounds: Bounds) -> Result<Recurrence, DynamicsError> {
    let g = aut.graph();
    if !g.structure().strongly_connected {
        return Err(DynamicsError::NotStronglyConnected);
    }
    let mut seeds = aut.letter_elements();
    seeds.extend(aut.units());
    let m = StateMachine::closure(aut, &seeds, bounds)?;
    let targets: Vec<StateId> = (0..seeds.len()).map(|i| m.seed_state(i)).collect();

    let mut open: HashSet<(EdgeId, EdgeId, StateId)> = HashSet::new();
    for e in g.edges() {
        for f in g.edges() {
            for &h in &targets {
                if m.state(h).dom() == g.source(e) && m.state(h).cod() == g.source(f) {
                    open.insert((e, f, h));
                }
            }
        }
    }

    let mut seen: HashSet<Element> = HashSet::new();
    let mut frontier: VecDeque<Element> = aut.units().into_iter().collect();
    seen.extend(frontier.iter().cloned());
    let mut class_cache: HashMap<Element, Option<StateId>> = HashMap::new();
    for len in 0..=depth {
        let mut next = VecDeque::new();
        while let Some(w) = frontier.pop_front() {
            for &e in g.edges_into(w.dom()) {
                let (f, r) = aut.step(&w, e).expect("domain matches");
                let class = match class_cache.get(&r) {
                    Some(&c) => c,
                    None => {
                        let c = m.classify_with(&r, bounds)?;
                        class_cache.insert(r, c);
                        c
                    }
                };
                if let Some(h) = class {
                    open.remove(&(e, f, h));
                }
            }
            if len < depth {
                for l in aut.letter_elements() {
                    if let Ok(p) = aut.compose(&l, &w) {
                        if p.len() == len + 1 && seen.insert(p.clone()) {
                            next.push_back(p);
                        }
                    }
                }
            }
        }
        if open.is_empty() {
            return Ok(Recurrence::Recurrent);
        }
        frontier = next;
    }
    let &(e, f, h) = open.iter().min().expect("nonempty");
    Ok(Recurrence::Inconclusive {
        depth,
        edge: g.edge_name(e).to_string(),
        image: g.edge_name(f).to_string(),
        restriction: m.name(h),
    })
}

/// Whether the generators act transitively on `E^n`.
pub fn level_transitive(aut: &Automaton, n: usize) -> bool {
    assert!(n >= 1, "levels start at 1");
    let paths = aut.graph().enumerate_paths(n, None);
    if paths.len() <= 1 {
        return true;
    }
    let index: HashMap<&Path, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut uf = UnionFind::<usize>::new(paths.len());
    for g in aut.letter_elements().iter().filter(|g| !g.word()[0].is_inverse()) {
        for (i, p) in paths.iter().enumerate() {
            if p.range() == g.dom() {
                let img = aut.act(g, p).expect("domain matches");
                uf.union(i, index[&img]);
            }
        }
    }
    let root = uf.find(0);
    (1..paths.len()).all(|i| uf.find(i) == root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::tests::ex310;

    #[test]
    fn example_is_level_transitive() {
        let aut = ex310();
        for n in 1..=6 {
            assert!(level_transitive(&aut, n), "level {n}");
        }
    }
}
