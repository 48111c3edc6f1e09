//! Product of a finite window of positions with machine states.

use std::collections::{HashMap, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::graph::EdgeId;
use crate::machine::{StateId, StateMachine};

/// Nodes are `(position, state)` with `state · x(position)` defined (and
/// equal to `y(position)` when a target is given). Arcs follow restriction
/// to the successor positions.
pub(crate) struct RunGraph {
    pub nodes: Vec<(usize, StateId)>,
    pub adj: Vec<Vec<usize>>,
}

impl RunGraph {
    pub fn build(
        m: &StateMachine,
        positions: usize,
        x: &dyn Fn(usize) -> EdgeId,
        y: Option<&dyn Fn(usize) -> EdgeId>,
        next: &dyn Fn(usize) -> Vec<usize>,
    ) -> RunGraph {
        let mut nodes = Vec::new();
        let mut index = HashMap::new();
        let mut targets = Vec::new();
        for p in 0..positions {
            let e = x(p);
            for s in 0..m.len() {
                let Some((f, t)) = m.step(s, e) else { continue };
                if y.is_some_and(|y| y(p) != f) {
                    continue;
                }
                index.insert((p, s), nodes.len());
                nodes.push((p, s));
                targets.push(t);
            }
        }
        let adj = nodes
            .iter()
            .zip(&targets)
            .map(|(&(p, _), &t)| next(p).into_iter().filter_map(|q| index.get(&(q, t)).copied()).collect())
            .collect();
        RunGraph { nodes, adj }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes lying on a directed cycle.
    pub fn cyclic(&self) -> Vec<bool> {
        let mut dg: DiGraph<(), ()> = DiGraph::with_capacity(self.len(), 0);
        for _ in 0..self.len() {
            dg.add_node(());
        }
        for (u, vs) in self.adj.iter().enumerate() {
            for &v in vs {
                dg.add_edge(NodeIndex::new(u), NodeIndex::new(v), ());
            }
        }
        let mut on = vec![false; self.len()];
        for scc in tarjan_scc(&dg) {
            if scc.len() > 1 || self.adj[scc[0].index()].contains(&scc[0].index()) {
                for n in scc {
                    on[n.index()] = true;
                }
            }
        }
        on
    }

    /// BFS from `sources`; returns the predecessor of each reached node
    /// (`Some(None)` for sources).
    pub fn search(&self, sources: impl IntoIterator<Item = usize>) -> Vec<Option<Option<usize>>> {
        let mut pred = vec![None; self.len()];
        let mut queue = VecDeque::new();
        for s in sources {
            if pred[s].is_none() {
                pred[s] = Some(None);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if pred[v].is_none() {
                    pred[v] = Some(Some(u));
                    queue.push_back(v);
                }
            }
        }
        pred
    }

    /// Path of nodes from a source to `to` using predecessors from [`search`].
    pub fn trace(pred: &[Option<Option<usize>>], to: usize) -> Vec<usize> {
        let mut path = vec![to];
        let mut cur = to;
        while let Some(Some(p)) = pred[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// A directed cycle through `u`, listed from the successor of `u`
    /// round to `u` itself.
    pub fn cycle_through(&self, u: usize) -> Vec<usize> {
        let pred = self.search(self.adj[u].iter().copied());
        let mut best: Option<usize> = None;
        for (w, &p) in pred.iter().enumerate() {
            if p.is_some() && self.adj[w].contains(&u) && best.is_none() {
                best = Some(w);
            }
        }
        let last = best.expect("node lies on a cycle");
        let mut path = Self::trace(&pred, last);
        path.push(u);
        path
    }
}
