//! Restriction closures and element equality.
//!
//! A closure is explored word by word, then collapsed by Moore partition
//! refinement: two words are equal as partial isomorphisms of `E*` exactly
//! when they have the same domain, codomain and edge action, and their
//! restrictions along each edge are again equal. Units at every vertex are
//! always explored alongside the seeds so that words acting trivially fall
//! into the unit classes.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;
use thiserror::Error;

use crate::automaton::{Automaton, Element};
use crate::graph::{EdgeId, Path, VertexId};

pub type StateId = usize;

/// Limits for closure exploration and nucleus iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub max_states: usize,
    pub max_rounds: usize,
    pub max_word_len: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_states: 10_000,
            max_rounds: 64,
            max_word_len: 1024,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error, Serialize)]
pub enum ClosureError {
    #[error("restriction closure exceeded {0} words")]
    StateLimit(usize),
    #[error("restriction closure produced a word longer than {0} letters")]
    WordLength(usize),
}

#[derive(Clone, Debug)]
struct RawNode {
    elem: Element,
    /// Aligned with `graph.edges_into(dom)`; `None` until expanded.
    moves: Option<Vec<(EdgeId, usize)>>,
}

/// Word-level exploration of a restriction closure.
pub(crate) struct Explorer<'a> {
    aut: &'a Automaton,
    bounds: Bounds,
    nodes: Vec<RawNode>,
    index: HashMap<Element, usize>,
    queue: VecDeque<usize>,
}

impl<'a> Explorer<'a> {
    pub(crate) fn new(aut: &'a Automaton, bounds: Bounds) -> Explorer<'a> {
        Explorer {
            aut,
            bounds,
            nodes: Vec::new(),
            index: HashMap::new(),
            queue: VecDeque::new(),
        }
    }

    /// Seeds the explorer with the states of an already closed machine.
    fn with_machine(aut: &'a Automaton, bounds: Bounds, m: &StateMachine) -> Explorer<'a> {
        let mut ex = Explorer::new(aut, bounds);
        for s in &m.states {
            let moves = aut
                .graph()
                .edges_into(s.dom)
                .iter()
                .map(|&e| s.moves[e.index()].expect("closed machine"))
                .collect();
            ex.index.insert(s.rep.clone(), ex.nodes.len());
            ex.nodes.push(RawNode {
                elem: s.rep.clone(),
                moves: Some(moves),
            });
        }
        for (w, &s) in &m.aliases {
            ex.index.insert(w.clone(), s);
        }
        ex
    }

    pub(crate) fn add(&mut self, g: &Element) -> Result<usize, ClosureError> {
        if let Some(&i) = self.index.get(g) {
            return Ok(i);
        }
        if g.len() > self.bounds.max_word_len {
            return Err(ClosureError::WordLength(self.bounds.max_word_len));
        }
        if self.nodes.len() >= self.bounds.max_states {
            return Err(ClosureError::StateLimit(self.bounds.max_states));
        }
        let i = self.nodes.len();
        self.nodes.push(RawNode {
            elem: g.clone(),
            moves: None,
        });
        self.index.insert(g.clone(), i);
        self.queue.push_back(i);
        Ok(i)
    }

    pub(crate) fn add_units(&mut self) -> Result<(), ClosureError> {
        for u in self.aut.units() {
            self.add(&u)?;
        }
        Ok(())
    }

    pub(crate) fn run(&mut self) -> Result<(), ClosureError> {
        let g = self.aut.graph();
        while let Some(i) = self.queue.pop_front() {
            let elem = self.nodes[i].elem.clone();
            let mut moves = Vec::with_capacity(g.edges_into(elem.dom()).len());
            for &e in g.edges_into(elem.dom()) {
                let (f, h) = self.aut.step(&elem, e).expect("edge in domain");
                let j = self.add(&h)?;
                moves.push((f, j));
            }
            self.nodes[i].moves = Some(moves);
        }
        Ok(())
    }

    /// Moore refinement; returns a class id per node.
    pub(crate) fn partition(&self) -> Vec<usize> {
        let moves = |i: usize| self.nodes[i].moves.as_ref().expect("explored");
        let mut initial: HashMap<(VertexId, VertexId, Vec<EdgeId>), usize> = HashMap::new();
        let mut class: Vec<usize> = Vec::with_capacity(self.nodes.len());
        for (i, n) in self.nodes.iter().enumerate() {
            let key = (
                n.elem.dom(),
                n.elem.cod(),
                moves(i).iter().map(|&(f, _)| f).collect(),
            );
            let next = initial.len();
            class.push(*initial.entry(key).or_insert(next));
        }
        let mut count = initial.len();
        loop {
            let mut sigs: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let refined: Vec<usize> = (0..self.nodes.len())
                .map(|i| {
                    let key = (class[i], moves(i).iter().map(|&(_, j)| class[j]).collect());
                    let next = sigs.len();
                    *sigs.entry(key).or_insert(next)
                })
                .collect();
            class = refined;
            if sigs.len() == count {
                return class;
            }
            count = sigs.len();
        }
    }

    fn node_of(&self, g: &Element) -> usize {
        self.index[g]
    }
}

/// Closed, minimized machine over canonical element classes.
#[derive(Clone, Debug)]
pub struct StateMachine {
    aut: Arc<Automaton>,
    states: Vec<State>,
    seeds: Vec<StateId>,
    aliases: HashMap<Element, StateId>,
}

#[derive(Clone, Debug)]
pub struct State {
    rep: Element,
    dom: VertexId,
    cod: VertexId,
    /// Indexed by edge id.
    moves: Vec<Option<(EdgeId, StateId)>>,
}

impl State {
    /// Shortest, then least, word found in the class.
    pub fn rep(&self) -> &Element {
        &self.rep
    }

    pub fn dom(&self) -> VertexId {
        self.dom
    }

    pub fn cod(&self) -> VertexId {
        self.cod
    }
}

impl StateMachine {
    /// The smallest restriction-closed set of classes containing `seeds`.
    /// States are numbered in BFS order from the seeds, edges in id order.
    pub fn closure(
        aut: &Arc<Automaton>,
        seeds: &[Element],
        bounds: Bounds,
    ) -> Result<StateMachine, ClosureError> {
        let mut ex = Explorer::new(aut, bounds);
        for s in seeds {
            ex.add(s)?;
        }
        ex.add_units()?;
        ex.run()?;
        let seed_nodes: Vec<usize> = seeds.iter().map(|s| ex.node_of(s)).collect();
        Ok(Self::from_explorer(aut, &ex, &seed_nodes))
    }

    fn from_explorer(aut: &Arc<Automaton>, ex: &Explorer<'_>, seed_nodes: &[usize]) -> StateMachine {
        let class = ex.partition();
        let n_classes = class.iter().max().map_or(0, |m| m + 1);
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
        for (i, &c) in class.iter().enumerate() {
            members[c].push(i);
        }
        let g = aut.graph();
        let mut order: Vec<Option<StateId>> = vec![None; n_classes];
        let mut visit: Vec<usize> = Vec::new();
        let mut queue = VecDeque::new();
        for &s in seed_nodes {
            let c = class[s];
            if order[c].is_none() {
                order[c] = Some(visit.len());
                visit.push(c);
                queue.push_back(s);
            }
        }
        while let Some(i) = queue.pop_front() {
            for &(_, j) in ex.nodes[i].moves.as_ref().expect("explored") {
                let c = class[j];
                if order[c].is_none() {
                    order[c] = Some(visit.len());
                    visit.push(c);
                    queue.push_back(j);
                }
            }
        }
        let mut states = Vec::with_capacity(visit.len());
        let mut aliases = HashMap::new();
        for (sid, &c) in visit.iter().enumerate() {
            let rep_node = *members[c]
                .iter()
                .min_by(|&&a, &&b| ex.nodes[a].elem.shortlex_cmp(&ex.nodes[b].elem))
                .expect("nonempty class");
            let rep = ex.nodes[rep_node].elem.clone();
            let mut moves = vec![None; g.num_edges()];
            let edges = g.edges_into(rep.dom());
            for (k, &(f, j)) in ex.nodes[rep_node].moves.as_ref().expect("explored").iter().enumerate() {
                moves[edges[k].index()] = Some((f, order[class[j]].expect("closed")));
            }
            for &m in &members[c] {
                aliases.insert(ex.nodes[m].elem.clone(), sid);
            }
            states.push(State {
                dom: rep.dom(),
                cod: rep.cod(),
                rep,
                moves,
            });
        }
        let seeds = seed_nodes
            .iter()
            .map(|&s| order[class[s]].expect("seed"))
            .collect();
        StateMachine {
            aut: Arc::clone(aut),
            states,
            seeds,
            aliases,
        }
    }

    pub fn automaton(&self) -> &Arc<Automaton> {
        &self.aut
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, s: StateId) -> &State {
        &self.states[s]
    }

    pub fn rep(&self, s: StateId) -> &Element {
        &self.states[s].rep
    }

    pub fn is_unit(&self, s: StateId) -> bool {
        self.states[s].rep.is_unit()
    }

    /// State of the `i`-th seed.
    pub fn seed_state(&self, i: usize) -> StateId {
        self.seeds[i]
    }

    pub fn seed_states(&self) -> &[StateId] {
        &self.seeds
    }

    pub fn unit_state(&self, v: VertexId) -> Option<StateId> {
        self.aliases.get(&self.aut.unit(v)).copied()
    }

    /// `(s · e, s|_e)`, or `None` when `r(e) != d(s)`.
    pub fn step(&self, s: StateId, e: EdgeId) -> Option<(EdgeId, StateId)> {
        self.states[s].moves[e.index()]
    }

    /// `(s · p, s|_p)`; `None` when `r(p) != d(s)`.
    pub fn act_restrict(&self, s: StateId, p: &Path) -> Option<(Path, StateId)> {
        if p.range() != self.states[s].dom {
            return None;
        }
        let mut cur = s;
        let mut image = Vec::with_capacity(p.len());
        for &e in p.edges() {
            let (f, next) = self.step(cur, e)?;
            image.push(f);
            cur = next;
        }
        let g = self.aut.graph();
        let path = Path::from_edges_at(g, self.states[s].cod, &image).expect("valid image");
        Some((path, cur))
    }

    /// Successor states of `s` in edge order.
    pub fn successors(&self, s: StateId) -> impl Iterator<Item = (EdgeId, EdgeId, StateId)> + '_ {
        self.aut
            .graph()
            .edges_into(self.states[s].dom)
            .iter()
            .map(move |&e| {
                let (f, t) = self.states[s].moves[e.index()].expect("closed");
                (e, f, t)
            })
    }

    /// Exact word lookup among the words met while building the machine.
    pub fn lookup(&self, g: &Element) -> Option<StateId> {
        self.aliases.get(g).copied()
    }

    /// The state equal to `g`, if any.
    pub fn classify(&self, g: &Element) -> Result<Option<StateId>, ClosureError> {
        self.classify_with(g, Bounds::default())
    }

    pub fn classify_with(&self, g: &Element, bounds: Bounds) -> Result<Option<StateId>, ClosureError> {
        if let Some(s) = self.lookup(g) {
            return Ok(Some(s));
        }
        let mut ex = Explorer::with_machine(&self.aut, bounds, self);
        let node = ex.add(g)?;
        ex.run()?;
        let class = ex.partition();
        Ok((0..self.states.len()).find(|&s| class[s] == class[node]))
    }

    /// States lying on a directed cycle of the restriction digraph, and
    /// everything reachable from them.
    pub fn limit_states(&self) -> Vec<StateId> {
        let mut dg: DiGraph<(), ()> = DiGraph::with_capacity(self.len(), 0);
        let nodes: Vec<_> = (0..self.len()).map(|_| dg.add_node(())).collect();
        for s in 0..self.len() {
            for (_, _, t) in self.successors(s) {
                dg.add_edge(nodes[s], nodes[t], ());
            }
        }
        let mut on_cycle = vec![false; self.len()];
        for scc in tarjan_scc(&dg) {
            let cyclic = scc.len() > 1 || dg.contains_edge(scc[0], scc[0]);
            if cyclic {
                for n in scc {
                    on_cycle[n.index()] = true;
                }
            }
        }
        let mut seen = on_cycle.clone();
        let mut queue: VecDeque<StateId> = (0..self.len()).filter(|&s| on_cycle[s]).collect();
        while let Some(s) = queue.pop_front() {
            for (_, _, t) in self.successors(s) {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        (0..self.len()).filter(|&s| seen[s]).collect()
    }

    /// States reachable from `from` (inclusive), ascending.
    pub fn reachable_from(&self, from: &[StateId]) -> Vec<StateId> {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::new();
        for &s in from {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(s) = queue.pop_front() {
            for (_, _, t) in self.successors(s) {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        (0..self.len()).filter(|&s| seen[s]).collect()
    }

    pub fn name(&self, s: StateId) -> String {
        self.aut.format_element(&self.states[s].rep)
    }

    pub fn export(&self) -> MachineExport {
        let g = self.aut.graph();
        MachineExport {
            states: (0..self.len())
                .map(|s| StateExport {
                    id: s,
                    name: self.name(s),
                    dom: g.vertex_name(self.states[s].dom).to_string(),
                    cod: g.vertex_name(self.states[s].cod).to_string(),
                    unit: self.is_unit(s),
                    moves: self
                        .successors(s)
                        .map(|(e, f, t)| MoveExport {
                            edge: g.edge_name(e).to_string(),
                            image: g.edge_name(f).to_string(),
                            target: t,
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Moore diagram: one node per state, arcs labelled `e/f` from `s` to
    /// `s|_e` where `s · e = f`.
    pub fn to_dot(&self) -> String {
        let g = self.aut.graph();
        let mut out = String::from("digraph machine {\n  rankdir=LR;\n");
        for s in 0..self.len() {
            let shape = if self.is_unit(s) { "box" } else { "ellipse" };
            let _ = writeln!(out, "  s{s} [label=\"{}\", shape={shape}];", escape(&self.name(s)));
        }
        for s in 0..self.len() {
            for (e, f, t) in self.successors(s) {
                let _ = writeln!(
                    out,
                    "  s{s} -> s{t} [label=\"{}/{}\"];",
                    escape(g.edge_name(e)),
                    escape(g.edge_name(f))
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MachineExport {
    pub states: Vec<StateExport>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct StateExport {
    pub id: StateId,
    pub name: String,
    pub dom: String,
    pub cod: String,
    pub unit: bool,
    pub moves: Vec<MoveExport>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MoveExport {
    pub edge: String,
    pub image: String,
    pub target: StateId,
}

impl Automaton {
    /// Equality as partial isomorphisms of `E*`.
    pub fn equal(&self, g: &Element, h: &Element) -> Result<bool, ClosureError> {
        self.equal_with(g, h, Bounds::default())
    }

    pub fn equal_with(&self, g: &Element, h: &Element, bounds: Bounds) -> Result<bool, ClosureError> {
        if g == h {
            return Ok(true);
        }
        if g.dom() != h.dom() || g.cod() != h.cod() {
            return Ok(false);
        }
        let mut ex = Explorer::new(self, bounds);
        let a = ex.add(g)?;
        let b = ex.add(h)?;
        ex.add_units()?;
        ex.run()?;
        let class = ex.partition();
        Ok(class[a] == class[b])
    }
}
