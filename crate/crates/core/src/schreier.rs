//! Level-`n` Schreier graphs, their projections `ψ_n` and geodesics.
//!
//! Vertices of `Γ_n` are the paths `E^n`. A label `a` joins `μ` to `a · μ`
//! whenever `d(a) = r(μ)`. Since the label set is closed under inverses,
//! each undirected edge is stored once under the smaller of the two names
//! `a`, `a^-1`, with endpoints in ascending order.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::automaton::{Automaton, Element};
use crate::graph::Path;
use crate::machine::{escape, Bounds, ClosureError, StateId, StateMachine};
use crate::nucleus::Nucleus;
use crate::paths::LeftInfinitePath;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SchreierError {
    #[error(transparent)]
    Closure(#[from] ClosureError),
    #[error("path `{0}` is not a vertex of this level")]
    VertexNotInLevel(String),
}

/// One undirected labelled edge, `from <= to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SchreierEdge {
    pub from: usize,
    pub to: usize,
    pub label: StateId,
}

#[derive(Clone, Debug)]
pub struct SchreierGraph {
    level: usize,
    vertices: Vec<Path>,
    index: HashMap<Path, usize>,
    edges: Vec<SchreierEdge>,
    labels: Vec<String>,
    names: Vec<String>,
}

/// A generating set closed under inverses and restriction, as a machine.
#[derive(Debug)]
pub struct Generators {
    machine: StateMachine,
    inverse: Vec<StateId>,
    canon: Vec<StateId>,
    extended: bool,
}

impl Generators {
    /// Generators, inverses, units and the nucleus.
    pub fn standard(n: &Nucleus) -> Result<Generators, ClosureError> {
        let aut = n.automaton();
        let mut seeds = aut.letter_elements();
        seeds.extend(n.elements());
        Self::build(aut, &seeds, n.bounds(), false)
    }

    /// Generators, inverses and units; for actions without a known nucleus.
    pub fn letters(aut: &Arc<Automaton>, bounds: Bounds) -> Result<Generators, ClosureError> {
        Self::build(aut, &aut.letter_elements(), bounds, false)
    }

    /// The closure of `set` under inverses and restriction; `extended()`
    /// reports whether anything had to be added.
    pub fn custom(aut: &Arc<Automaton>, set: &[Element], bounds: Bounds) -> Result<Generators, ClosureError> {
        let mut seeds = set.to_vec();
        seeds.extend(set.iter().map(|g| aut.inverse(g)));
        let gens = Self::build(aut, &seeds, bounds, false)?;
        let given: BTreeSet<StateId> = (0..set.len()).map(|i| gens.machine.seed_state(i)).collect();
        let extended = given.len() < gens.machine.len();
        Ok(Generators { extended, ..gens })
    }

    fn build(aut: &Arc<Automaton>, seeds: &[Element], bounds: Bounds, extended: bool) -> Result<Generators, ClosureError> {
        let machine = StateMachine::closure(aut, seeds, bounds)?;
        let mut inverse = Vec::with_capacity(machine.len());
        for s in 0..machine.len() {
            let inv = machine
                .classify_with(&aut.inverse(machine.rep(s)), bounds)?
                .expect("restriction closure of a symmetric set is symmetric");
            inverse.push(inv);
        }
        let names: Vec<String> = (0..machine.len()).map(|s| machine.name(s)).collect();
        let canon = (0..machine.len())
            .map(|s| {
                let t = inverse[s];
                if (&names[t], t) < (&names[s], s) {
                    t
                } else {
                    s
                }
            })
            .collect();
        Ok(Generators {
            machine,
            inverse,
            canon,
            extended,
        })
    }

    pub fn machine(&self) -> &StateMachine {
        &self.machine
    }

    pub fn len(&self) -> usize {
        self.machine.len()
    }

    pub fn is_empty(&self) -> bool {
        self.machine.is_empty()
    }

    pub fn extended(&self) -> bool {
        self.extended
    }

    pub fn inverse(&self, s: StateId) -> StateId {
        self.inverse[s]
    }

    fn canonical(&self, s: StateId) -> StateId {
        self.canon[s]
    }

    pub fn level(&self, n: usize) -> SchreierGraph {
        let aut = self.machine.automaton();
        let g = aut.graph();
        let vertices = g.enumerate_paths(n, None);
        let index: HashMap<Path, usize> = vertices.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let mut edges = BTreeSet::new();
        for s in 0..self.len() {
            for (i, mu) in vertices.iter().enumerate() {
                if let Some((nu, _)) = self.machine.act_restrict(s, mu) {
                    edges.insert(self.undirected(i, index[&nu], s));
                }
            }
        }
        SchreierGraph {
            level: n,
            names: vertices.iter().map(|p| p.display(g).to_string()).collect(),
            vertices,
            index,
            edges: edges.into_iter().collect(),
            labels: (0..self.len()).map(|s| self.machine.name(s)).collect(),
        }
    }

    /// `{μ, ν}` reached by `s : μ -> ν`, stored once for `s` and `s^-1`.
    fn undirected(&self, mu: usize, nu: usize, s: StateId) -> SchreierEdge {
        SchreierEdge {
            from: mu.min(nu),
            to: mu.max(nu),
            label: self.canonical(s),
        }
    }

    /// `ψ_n`: `eμ ↦ μ` on vertices and `(a : eμ → fν) ↦ (a|_e : μ → ν)`.
    /// Edges are stored unoriented, so the label is first oriented from
    /// `from` to `to`.
    pub fn project(&self, gamma: &SchreierGraph, lower: &SchreierGraph) -> Projection {
        assert!(gamma.level >= 1 && lower.level + 1 == gamma.level, "consecutive levels");
        let vertex_map: Vec<usize> = gamma
            .vertices
            .iter()
            .map(|p| lower.index[&Path::from_edges_at(self.g(), self.g().source(p.edges()[0]), &p.edges()[1..]).expect("suffix")])
            .collect();
        let mut edge_map = Vec::with_capacity(gamma.edges.len());
        for e in &gamma.edges {
            let mu = &gamma.vertices[e.from];
            let forward = match self.machine.act_restrict(e.label, mu) {
                Some((nu, _)) if gamma.index[&nu] == e.to => e.label,
                _ => self.inverse[e.label],
            };
            let (_, t) = self.machine.step(forward, mu.edges()[0]).expect("labelled edge");
            let image = self.undirected(vertex_map[e.from], vertex_map[e.to], t);
            edge_map.push(image);
        }
        Projection { vertex_map, edge_map }
    }

    fn g(&self) -> &crate::graph::Graph {
        self.machine.automaton().graph()
    }
}

/// `ψ_n` on vertices (indices into the lower level) and on edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<SchreierEdge>,
}

#[derive(Serialize)]
struct SchreierExport<'a> {
    level: usize,
    vertices: &'a [String],
    edges: Vec<EdgeExport<'a>>,
}

#[derive(Serialize)]
struct EdgeExport<'a> {
    from: &'a str,
    to: &'a str,
    label: &'a str,
}

impl SchreierGraph {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn vertices(&self) -> &[Path] {
        &self.vertices
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn edges(&self) -> &[SchreierEdge] {
        &self.edges
    }

    pub fn label(&self, s: StateId) -> &str {
        &self.labels[s]
    }

    pub fn vertex_index(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Neighbours ignoring labels and loops, ascending, without repeats.
    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![BTreeSet::new(); self.vertices.len()];
        for e in &self.edges {
            if e.from != e.to {
                adj[e.from].insert(e.to);
                adj[e.to].insert(e.from);
            }
        }
        adj.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    /// BFS distances from vertex `from`; `None` for unreachable vertices.
    pub fn distances_from(&self, from: usize) -> Vec<Option<usize>> {
        let adj = self.neighbours();
        let mut dist = vec![None; self.vertices.len()];
        dist[from] = Some(0);
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].expect("queued");
            for &v in &adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Geodesic distance; `Ok(None)` when unreachable.
    pub fn geodesic_distance(&self, mu: &Path, nu: &Path) -> Result<Option<usize>, SchreierError> {
        let lookup = |p: &Path| {
            self.vertex_index(p)
                .ok_or_else(|| SchreierError::VertexNotInLevel(format!("{:?}", p.edges())))
        };
        let (a, b) = (lookup(mu)?, lookup(nu)?);
        Ok(self.distances_from(a)[b])
    }

    pub fn is_connected(&self) -> bool {
        self.vertices.is_empty() || self.distances_from(0).iter().all(Option::is_some)
    }

    /// Whether the non-loop edges form one cycle through every vertex.
    pub fn is_cycle(&self) -> bool {
        let adj = self.neighbours();
        self.vertices.len() >= 3 && adj.iter().all(|n| n.len() == 2) && self.is_connected()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let export = SchreierExport {
            level: self.level,
            vertices: &self.names,
            edges: self
                .edges
                .iter()
                .map(|e| EdgeExport {
                    from: &self.names[e.from],
                    to: &self.names[e.to],
                    label: &self.labels[e.label],
                })
                .collect(),
        };
        serde_json::to_value(export).expect("serializable")
    }

    pub fn to_dot(&self) -> String {
        let mut out = format!("graph schreier_{} {{\n", self.level);
        for name in &self.names {
            let _ = writeln!(out, "  \"{}\";", escape(name));
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  \"{}\" -- \"{}\" [label=\"{}\"];",
                escape(&self.names[e.from]),
                escape(&self.names[e.to]),
                escape(&self.labels[e.label])
            );
        }
        out.push_str("}\n");
        out
    }
}

/// `d_geo(x_{-n} … x_{-1}, y_{-n} … y_{-1})` for `n = 1 ..= max_level`.
pub fn distance_profile(
    gens: &Generators,
    x: &LeftInfinitePath,
    y: &LeftInfinitePath,
    max_level: usize,
) -> Vec<Option<usize>> {
    let g = gens.machine.automaton().graph();
    (1..=max_level)
        .map(|n| {
            let gamma = gens.level(n);
            let mu = Path::from_edges(g, &x.suffix(n)).expect("suffix of a path");
            let nu = Path::from_edges(g, &y.suffix(n)).expect("suffix of a path");
            gamma.geodesic_distance(&mu, &nu).expect("level-n paths")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::tests::ex310;

    fn standard() -> Generators {
        let n = Nucleus::compute(&Arc::new(ex310()), Bounds::default()).unwrap();
        Generators::standard(&n).unwrap()
    }

    #[test]
    fn level_one_is_a_square_with_loops() {
        let gens = standard();
        let g1 = gens.level(1);
        assert_eq!(g1.vertices().len(), 4);
        let mut non_loops: Vec<(String, String, String)> = g1
            .edges()
            .iter()
            .filter(|e| e.from != e.to)
            .map(|e| {
                (
                    g1.label(e.label).to_string(),
                    g1.vertex_names()[e.from].clone(),
                    g1.vertex_names()[e.to].clone(),
                )
            })
            .collect();
        non_loops.sort();
        assert_eq!(
            non_loops,
            [
                ("a".into(), "1".into(), "4".into()),
                ("a".into(), "2".into(), "3".into()),
                ("b".into(), "1".into(), "3".into()),
                ("b".into(), "2".into(), "4".into()),
            ]
        );
        assert!(g1.is_cycle());
        for v in 0..4 {
            assert!(g1.edges().iter().any(|e| e.from == v && e.to == v));
        }
    }

    #[test]
    fn level_two_antipodes() {
        let gens = standard();
        let g2 = gens.level(2);
        assert_eq!(g2.vertices().len(), 8);
        assert!(g2.is_cycle());
        let d = g2.distances_from(0);
        assert_eq!(d.iter().filter_map(|x| *x).max(), Some(4));
    }
}
