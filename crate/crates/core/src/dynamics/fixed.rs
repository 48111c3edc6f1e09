//! Regularity and Hausdorffness through the fixed-edge digraph.
//!
//! On non-unit nucleus states put an arc `h -e-> h|_e` whenever `h · e = e`.
//! An arc whose restriction is a unit ends the walk: the path read so far
//! is strongly fixed. Any `g` fixing `y` has `g|_{y(0,n)} ∈ N` for large
//! `n`, so fixed points that are never strongly fixed show up as cycles of
//! this digraph, and conversely each cycle gives such a fixed point.
//!
//! ```text
//!   regular        no cycle
//!   Hausdorff      no cycle from which a unit arc is reachable
//! ```

use std::collections::{HashSet, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::automaton::Element;
use crate::graph::{EdgeId, Path, VertexId};
use crate::machine::StateId;
use crate::nucleus::Nucleus;
use crate::paths::RightInfinitePath;

/// An arc of the fixed-edge digraph; `to` is `None` for a unit restriction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixedArc {
    pub from: StateId,
    pub edge: EdgeId,
    pub to: Option<StateId>,
}

/// `element · path = path` with every restriction along `path` non-unit.
/// For a non-Hausdorff witness, `escape` is strongly fixed by the
/// restriction at the start of the cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedWitness {
    pub state: StateId,
    pub element: Element,
    pub path: RightInfinitePath,
    pub escape: Option<Path>,
}

pub fn fixed_edge_digraph(n: &Nucleus) -> Vec<FixedArc> {
    let m = n.machine();
    let mut arcs = Vec::new();
    for s in 0..m.len() {
        if m.is_unit(s) {
            continue;
        }
        for (e, f, t) in m.successors(s) {
            if e == f {
                arcs.push(FixedArc {
                    from: s,
                    edge: e,
                    to: (!m.is_unit(t)).then_some(t),
                });
            }
        }
    }
    arcs
}

struct Fixed {
    arcs: Vec<FixedArc>,
    out: Vec<Vec<usize>>,
    on_cycle: Vec<bool>,
}

impl Fixed {
    fn new(n: &Nucleus) -> Fixed {
        let arcs = fixed_edge_digraph(n);
        let len = n.len();
        let mut out = vec![Vec::new(); len];
        let mut dg: DiGraph<(), ()> = DiGraph::with_capacity(len, arcs.len());
        for _ in 0..len {
            dg.add_node(());
        }
        for (i, a) in arcs.iter().enumerate() {
            out[a.from].push(i);
            if let Some(t) = a.to {
                dg.add_edge(NodeIndex::new(a.from), NodeIndex::new(t), ());
            }
        }
        let mut on_cycle = vec![false; len];
        for scc in tarjan_scc(&dg) {
            if scc.len() > 1 || dg.contains_edge(scc[0], scc[0]) {
                for v in scc {
                    on_cycle[v.index()] = true;
                }
            }
        }
        Fixed { arcs, out, on_cycle }
    }

    /// Arcs of a cycle through `s`, in order.
    fn cycle_from(&self, s: StateId) -> Vec<usize> {
        let mut pred: Vec<Option<usize>> = vec![None; self.out.len()];
        let mut queue = VecDeque::new();
        for &i in &self.out[s] {
            if let Some(t) = self.arcs[i].to {
                if t == s {
                    return vec![i];
                }
                if pred[t].is_none() {
                    pred[t] = Some(i);
                    queue.push_back(t);
                }
            }
        }
        while let Some(u) = queue.pop_front() {
            for &i in &self.out[u] {
                let Some(t) = self.arcs[i].to else { continue };
                if t == s {
                    let mut arcs = vec![i];
                    let mut cur = u;
                    while cur != s {
                        let a = pred[cur].expect("reached");
                        arcs.push(a);
                        cur = self.arcs[a].from;
                    }
                    arcs.reverse();
                    return arcs;
                }
                if pred[t].is_none() && t != s {
                    pred[t] = Some(i);
                    queue.push_back(t);
                }
            }
        }
        unreachable!("state lies on a cycle")
    }

    /// Arcs of a shortest walk from `s` ending in a unit arc.
    fn escape_from(&self, s: StateId) -> Option<Vec<usize>> {
        let mut pred: Vec<Option<Option<usize>>> = vec![None; self.out.len()];
        pred[s] = Some(None);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &i in &self.out[u] {
                match self.arcs[i].to {
                    None => {
                        let mut arcs = vec![i];
                        let mut cur = u;
                        while let Some(Some(a)) = pred[cur] {
                            arcs.push(a);
                            cur = self.arcs[a].from;
                        }
                        arcs.reverse();
                        return Some(arcs);
                    }
                    Some(t) if pred[t].is_none() => {
                        pred[t] = Some(Some(i));
                        queue.push_back(t);
                    }
                    Some(_) => {}
                }
            }
        }
        None
    }

    fn witness(&self, n: &Nucleus, s: StateId, escape: Option<Vec<usize>>) -> FixedWitness {
        let cycle: Vec<EdgeId> = self.cycle_from(s).iter().map(|&i| self.arcs[i].edge).collect();
        let g = n.automaton().graph();
        let escape = escape.map(|arcs| {
            let edges: Vec<EdgeId> = arcs.iter().map(|&i| self.arcs[i].edge).collect();
            Path::from_edges(g, &edges).expect("fixed arcs compose")
        });
        FixedWitness {
            state: s,
            element: n.machine().rep(s).clone(),
            path: RightInfinitePath::normalized(Vec::new(), cycle),
            escape,
        }
    }
}

/// `Ok(())` when regular, otherwise a fixed point that is never strongly
/// fixed along the way.
pub fn is_regular(n: &Nucleus) -> Result<(), FixedWitness> {
    let fx = Fixed::new(n);
    match (0..n.len()).find(|&s| fx.on_cycle[s]) {
        None => Ok(()),
        Some(s) => Err(fx.witness(n, s, None)),
    }
}

/// `Ok(())` when the groupoid of germs is Hausdorff.
pub fn is_hausdorff(n: &Nucleus) -> Result<(), FixedWitness> {
    let fx = Fixed::new(n);
    for s in (0..n.len()).filter(|&s| fx.on_cycle[s]) {
        if let Some(esc) = fx.escape_from(s) {
            return Err(fx.witness(n, s, Some(esc)));
        }
    }
    Ok(())
}

/// A shortest path `μ` such that every nucleus element fixing `μ` fixes
/// every extension of `μ`.
pub fn discerning_path(n: &Nucleus) -> Option<Path> {
    let m = n.machine();
    let g = n.automaton().graph();
    type Key = (VertexId, Vec<StateId>);
    let mut seen: HashSet<Key> = HashSet::new();
    let mut queue: VecDeque<(Key, Vec<EdgeId>)> = VecDeque::new();
    for v in g.vertices() {
        let fixing: Vec<StateId> = (0..m.len())
            .filter(|&s| !m.is_unit(s) && m.state(s).dom() == v && m.state(s).cod() == v)
            .collect();
        let key = (v, fixing);
        if seen.insert(key.clone()) {
            queue.push_back((key, Vec::new()));
        }
    }
    while let Some(((v, fixing), path)) = queue.pop_front() {
        for &e in g.edges_into(v) {
            let mut next: Vec<StateId> = fixing
                .iter()
                .filter_map(|&s| match m.step(s, e) {
                    Some((f, t)) if f == e && !m.is_unit(t) => Some(t),
                    _ => None,
                })
                .collect();
            next.sort_unstable();
            next.dedup();
            let mut p = path.clone();
            p.push(e);
            if next.is_empty() {
                return Some(Path::from_edges(g, &p).expect("walk composes"));
            }
            let key = (g.source(e), next);
            if seen.insert(key.clone()) {
                queue.push_back((key, p));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::automaton::tests::ex310;
    use crate::machine::Bounds;

    #[test]
    fn example_is_regular() {
        let n = Nucleus::compute(&Arc::new(ex310()), Bounds::default()).unwrap();
        assert!(fixed_edge_digraph(&n).is_empty());
        assert!(is_regular(&n).is_ok());
        assert!(is_hausdorff(&n).is_ok());
        assert_eq!(discerning_path(&n).map(|p| p.len()), Some(1));
    }
}
