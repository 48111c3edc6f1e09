//! Finite directed graphs and finite paths.
//!
//! An edge `e` points from its source `s(e)` to its range `r(e)`. Paths
//! compose like functions: `e1 e2 ... en` is a path exactly when
//! `s(e_i) = r(e_{i+1})`, so a path grows to the right, toward its source:
//!
//! ```text
//!   r(e1) <--e1-- s(e1) = r(e2) <--e2-- ... <--en-- s(en)
//!   r(path) = r(e1)                       s(path) = s(en)
//! ```
//!
//! Most graph libraries concatenate walks the other way round. Everything in
//! this crate uses the ordering drawn above.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("edge `{edge}` refers to unknown vertex `{vertex}`")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("paths are not composable: s({left}) = {left_source} but r({right}) = {right_range}")]
    NonComposable {
        left: String,
        left_source: String,
        right: String,
        right_range: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    /// `s(e)`
    pub src: VertexId,
    /// `r(e)`
    pub dst: VertexId,
}

/// Flags computed by [`Graph::structure`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub finite: bool,
    /// Every vertex receives an edge: `vE^1` is nonempty for all `v`.
    pub no_sources: bool,
    /// Every vertex emits an edge.
    pub no_sinks: bool,
    pub strongly_connected: bool,
    pub primitive: bool,
}

/// A finite directed graph. Vertex and edge ids are ordered by name, so every
/// enumeration this crate performs is deterministic.
#[derive(Clone, Debug)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
    into: Vec<Vec<EdgeId>>,
    out_of: Vec<Vec<EdgeId>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph from vertex names and `(edge, src, dst)` triples, where
    /// `src = s(e)` and `dst = r(e)`.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Graph, GraphError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let mut names: Vec<String> = vertices.into_iter().map(Into::into).collect();
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateId(w[0].clone()));
        }
        let vertex_index: HashMap<String, VertexId> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), VertexId(i as u32)))
            .collect();

        let mut raw: Vec<(String, String, String)> = edges.into_iter().collect();
        raw.sort();
        let mut seen = HashSet::new();
        let mut edge_list = Vec::with_capacity(raw.len());
        for (name, src, dst) in raw {
            if !seen.insert(name.clone()) || vertex_index.contains_key(&name) {
                return Err(GraphError::DuplicateId(name));
            }
            let lookup = |v: &String| {
                vertex_index
                    .get(v)
                    .copied()
                    .ok_or_else(|| GraphError::DanglingEndpoint {
                        edge: name.clone(),
                        vertex: v.clone(),
                    })
            };
            let src_id = lookup(&src)?;
            let dst_id = lookup(&dst)?;
            edge_list.push(Edge {
                name,
                src: src_id,
                dst: dst_id,
            });
        }
        let edge_index = edge_list
            .iter()
            .enumerate()
            .map(|(i, e)| (e.name.clone(), EdgeId(i as u32)))
            .collect();
        let mut into = vec![Vec::new(); names.len()];
        let mut out_of = vec![Vec::new(); names.len()];
        for (i, e) in edge_list.iter().enumerate() {
            into[e.dst.index()].push(EdgeId(i as u32));
            out_of[e.src.index()].push(EdgeId(i as u32));
        }
        Ok(Graph {
            vertices: names,
            edges: edge_list,
            vertex_index,
            edge_index,
            into,
            out_of,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).map(|i| VertexId(i as u32))
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(|i| EdgeId(i as u32))
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    /// `r(e)`
    pub fn range(&self, e: EdgeId) -> VertexId {
        self.edges[e.index()].dst
    }

    /// `s(e)`
    pub fn source(&self, e: EdgeId) -> VertexId {
        self.edges[e.index()].src
    }

    /// `vE^1`: the edges whose range is `v`, in id order.
    pub fn edges_into(&self, v: VertexId) -> &[EdgeId] {
        &self.into[v.index()]
    }

    /// `E^1 v`: the edges whose source is `v`, in id order.
    pub fn edges_out_of(&self, v: VertexId) -> &[EdgeId] {
        &self.out_of[v.index()]
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.index()]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.index()].name
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId, GraphError> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn edge_id(&self, name: &str) -> Result<EdgeId, GraphError> {
        self.edge_index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownEdge(name.to_string()))
    }

    pub fn has_vertex(&self, name: &str) -> bool {
        self.vertex_index.contains_key(name)
    }

    pub fn has_edge(&self, name: &str) -> bool {
        self.edge_index.contains_key(name)
    }

    /// Vertices reachable from `v` by walking edges backwards from range to
    /// source, i.e. the `w` with `vE^*w` nonempty.
    fn reach_from(&self, v: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.num_vertices()];
        seen[v.index()] = true;
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for &e in self.edges_into(u) {
                let w = self.source(e);
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Structural predicates of the graph.
    pub fn structure(&self) -> StructureReport {
        let no_sources = self.vertices().all(|v| !self.edges_into(v).is_empty());
        let no_sinks = self.vertices().all(|v| !self.edges_out_of(v).is_empty());
        let strongly_connected = self.num_edges() > 0
            && self.vertices().all(|v| self.reach_from(v).iter().all(|&b| b));
        StructureReport {
            finite: true,
            no_sources,
            no_sinks,
            strongly_connected,
            primitive: strongly_connected && self.is_primitive(),
        }
    }

    /// Some power of the adjacency matrix, with exponent at most `|V|^2 + 1`,
    /// is strictly positive.
    fn is_primitive(&self) -> bool {
        let n = self.num_vertices();
        if n == 0 {
            return false;
        }
        let mut adj = vec![vec![false; n]; n];
        for e in &self.edges {
            adj[e.dst.index()][e.src.index()] = true;
        }
        let mut power = adj.clone();
        for _ in 0..(n * n + 1) {
            if power.iter().all(|row| row.iter().all(|&b| b)) {
                return true;
            }
            let mut next = vec![vec![false; n]; n];
            for i in 0..n {
                for k in 0..n {
                    if power[i][k] {
                        for j in 0..n {
                            next[i][j] |= adj[k][j];
                        }
                    }
                }
            }
            power = next;
        }
        false
    }

    /// All paths of length `n` (optionally only those with range `at`), in
    /// lexicographic order of their edge-id sequences.
    pub fn enumerate_paths(&self, n: usize, at: Option<VertexId>) -> Vec<Path> {
        let starts: Vec<VertexId> = match at {
            Some(v) => vec![v],
            None => self.vertices().collect(),
        };
        let mut out = Vec::new();
        if n == 0 {
            out.extend(starts.into_iter().map(Path::empty));
            return out;
        }
        let mut stack: Vec<EdgeId> = Vec::with_capacity(n);
        let firsts: Vec<EdgeId> = match at {
            Some(v) => self.edges_into(v).to_vec(),
            None => self.edges().collect(),
        };
        for e in firsts {
            stack.push(e);
            self.extend_paths(&mut stack, n, &mut out);
            stack.pop();
        }
        out
    }

    fn extend_paths(&self, stack: &mut Vec<EdgeId>, n: usize, out: &mut Vec<Path>) {
        if stack.len() == n {
            out.push(Path {
                range: self.range(stack[0]),
                source: self.source(stack[n - 1]),
                edges: stack.clone(),
            });
            return;
        }
        let tail = self.source(*stack.last().expect("nonempty"));
        for &e in self.edges_into(tail) {
            stack.push(e);
            self.extend_paths(stack, n, out);
            stack.pop();
        }
    }

    /// Checks `s(left) = r(right)` for consecutive edges.
    pub fn composable(&self, left: EdgeId, right: EdgeId) -> bool {
        self.source(left) == self.range(right)
    }

    /// Parses edge names into a path. Accepts `1.2.3` as well as `123` when
    /// the concatenation splits uniquely into edge names.
    pub fn parse_path(&self, text: &str) -> Result<Path, GraphError> {
        let edges = self.split_edge_names(text)?;
        Path::from_edges(self, &edges)
    }

    /// Splits a segment such as `2.4.2` or `242` into edge ids.
    pub fn split_edge_names(&self, text: &str) -> Result<Vec<EdgeId>, GraphError> {
        let mut out = Vec::new();
        for token in text.split('.').map(str::trim).filter(|t| !t.is_empty()) {
            if let Ok(e) = self.edge_id(token) {
                out.push(e);
                continue;
            }
            match split_into_names(token, &|s| self.edge_index.get(s).copied()) {
                Some(parts) => out.extend(parts),
                None => return Err(GraphError::UnknownEdge(token.to_string())),
            }
        }
        Ok(out)
    }
}

/// Splits `token` into a sequence of known names, preferring longer names
/// first and backtracking when needed.
pub(crate) fn split_into_names<T: Copy>(
    token: &str,
    lookup: &dyn Fn(&str) -> Option<T>,
) -> Option<Vec<T>> {
    if token.is_empty() {
        return Some(Vec::new());
    }
    let bounds: Vec<usize> = token
        .char_indices()
        .map(|(i, _)| i)
        .skip(1)
        .chain(std::iter::once(token.len()))
        .collect();
    for &end in bounds.iter().rev() {
        if let Some(t) = lookup(&token[..end]) {
            if let Some(mut rest) = split_into_names(&token[end..], lookup) {
                rest.insert(0, t);
                return Some(rest);
            }
        }
    }
    None
}

/// A finite path `e1 ... en`, or the empty path at a vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    range: VertexId,
    source: VertexId,
    edges: Vec<EdgeId>,
}

impl Path {
    pub fn empty(v: VertexId) -> Path {
        Path {
            range: v,
            source: v,
            edges: Vec::new(),
        }
    }

    pub fn single(g: &Graph, e: EdgeId) -> Path {
        Path {
            range: g.range(e),
            source: g.source(e),
            edges: vec![e],
        }
    }

    /// A nonempty path from its edges; fails if consecutive edges do not
    /// compose.
    pub fn from_edges(g: &Graph, edges: &[EdgeId]) -> Result<Path, GraphError> {
        let (first, last) = match (edges.first(), edges.last()) {
            (Some(&f), Some(&l)) => (f, l),
            _ => return Err(GraphError::UnknownEdge(String::new())),
        };
        for w in edges.windows(2) {
            if !g.composable(w[0], w[1]) {
                return Err(non_composable(g, w[0], w[1]));
            }
        }
        Ok(Path {
            range: g.range(first),
            source: g.source(last),
            edges: edges.to_vec(),
        })
    }

    /// Like [`Path::from_edges`] but an empty edge list yields the empty path
    /// at `at`.
    pub fn from_edges_at(g: &Graph, at: VertexId, edges: &[EdgeId]) -> Result<Path, GraphError> {
        if edges.is_empty() {
            Ok(Path::empty(at))
        } else {
            Path::from_edges(g, edges)
        }
    }

    /// `r(path)`
    pub fn range(&self) -> VertexId {
        self.range
    }

    /// `s(path)`
    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `p q`, defined when `s(p) = r(q)`.
    pub fn concat(&self, other: &Path, g: &Graph) -> Result<Path, GraphError> {
        if self.source != other.range {
            let left = self.edges.last().map(|&e| g.edge_name(e)).unwrap_or("");
            let right = other.edges.first().map(|&e| g.edge_name(e)).unwrap_or("");
            return Err(GraphError::NonComposable {
                left: left.to_string(),
                left_source: g.vertex_name(self.source).to_string(),
                right: right.to_string(),
                right_range: g.vertex_name(other.range).to_string(),
            });
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Ok(Path {
            range: self.range,
            source: other.source,
            edges,
        })
    }

    /// The first `n` edges.
    pub fn prefix(&self, g: &Graph, n: usize) -> Path {
        if n == 0 {
            return Path::empty(self.range);
        }
        let edges = self.edges[..n].to_vec();
        Path {
            range: self.range,
            source: g.source(edges[n - 1]),
            edges,
        }
    }

    /// The path with the first `n` edges removed.
    pub fn suffix(&self, g: &Graph, n: usize) -> Path {
        if n == self.edges.len() {
            return Path::empty(self.source);
        }
        let edges = self.edges[n..].to_vec();
        Path {
            range: g.range(edges[0]),
            source: self.source,
            edges,
        }
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> PathDisplay<'a> {
        PathDisplay { path: self, graph: g }
    }
}

pub(crate) fn non_composable(g: &Graph, left: EdgeId, right: EdgeId) -> GraphError {
    GraphError::NonComposable {
        left: g.edge_name(left).to_string(),
        left_source: g.vertex_name(g.source(left)).to_string(),
        right: g.edge_name(right).to_string(),
        right_range: g.vertex_name(g.range(right)).to_string(),
    }
}

/// Writes edge names joined by `.`; the empty path prints as its vertex.
pub struct PathDisplay<'a> {
    path: &'a Path,
    graph: &'a Graph,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            return write!(f, "{}", self.graph.vertex_name(self.path.range));
        }
        write_edges(f, self.graph, &self.path.edges)
    }
}

pub(crate) fn write_edges(f: &mut impl fmt::Write, g: &Graph, edges: &[EdgeId]) -> fmt::Result {
    for (i, &e) in edges.iter().enumerate() {
        if i > 0 {
            f.write_char('.')?;
        }
        f.write_str(g.edge_name(e))?;
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn triple(e: &str, s: &str, r: &str) -> (String, String, String) {
        (e.to_string(), s.to_string(), r.to_string())
    }

    /// The two-vertex graph with loop 1 at v, edge 2 from w to v and edges 3, 4
    /// from v to w.
    pub(crate) fn asymmetric() -> Graph {
        Graph::new(
            ["v", "w"],
            [
                triple("1", "v", "v"),
                triple("2", "w", "v"),
                triple("3", "v", "w"),
                triple("4", "v", "w"),
            ],
        )
        .unwrap()
    }

    fn basilica_graph() -> Graph {
        Graph::new(
            ["v", "w"],
            [
                triple("0", "v", "v"),
                triple("1", "v", "v"),
                triple("2", "v", "w"),
                triple("3", "w", "w"),
            ],
        )
        .unwrap()
    }

    fn names(g: &Graph, paths: &[Path]) -> Vec<String> {
        paths.iter().map(|p| p.display(g).to_string()).collect()
    }

    #[test]
    fn asymmetric_structure() {
        let g = asymmetric();
        let report = g.structure();
        assert!(report.no_sources);
        assert!(report.no_sinks);
        assert!(report.strongly_connected);
        assert!(report.primitive);
    }

    #[test]
    fn lone_vertex_has_a_source() {
        let g = Graph::new(["v"], Vec::<(String, String, String)>::new()).unwrap();
        let report = g.structure();
        assert!(!report.no_sources);
        assert!(!report.strongly_connected);
    }

    #[test]
    fn basilica_graph_is_not_strongly_connected() {
        // w receives edge 2 from v, but nothing leads back from w to v.
        let g = basilica_graph();
        let report = g.structure();
        assert!(report.no_sources);
        assert!(!report.strongly_connected);
        assert!(!report.primitive);
    }

    #[test]
    fn two_cycle_is_strongly_connected_but_not_primitive() {
        let g = Graph::new(["a", "b"], [triple("x", "a", "b"), triple("y", "b", "a")]).unwrap();
        let report = g.structure();
        assert!(report.strongly_connected);
        assert!(!report.primitive);
    }

    #[test]
    fn construction_errors() {
        let dup = Graph::new(["v", "v"], Vec::<(String, String, String)>::new());
        assert_eq!(dup, Err(GraphError::DuplicateId("v".into())));
        let dangling = Graph::new(["v"], [triple("1", "v", "u")]);
        assert!(matches!(dangling, Err(GraphError::DanglingEndpoint { .. })));
        let dup_edge = Graph::new(["v"], [triple("1", "v", "v"), triple("1", "v", "v")]);
        assert_eq!(dup_edge, Err(GraphError::DuplicateId("1".into())));
    }

    #[test]
    fn concat_follows_range_source_convention() {
        let g = asymmetric();
        let p3 = Path::single(&g, g.edge_id("3").unwrap());
        let p1 = Path::single(&g, g.edge_id("1").unwrap());
        let joined = p3.concat(&p1, &g).unwrap();
        assert_eq!(joined.display(&g).to_string(), "3.1");
        assert_eq!(joined.range(), g.vertex_id("w").unwrap());
        assert_eq!(joined.source(), g.vertex_id("v").unwrap());

        let v = g.vertex_id("v").unwrap();
        assert_eq!(Path::empty(v).concat(&p1, &g).unwrap(), p1);
        assert!(matches!(p1.concat(&p3, &g), Err(GraphError::NonComposable { .. })));
    }

    #[test]
    fn enumerate_small_levels() {
        let g = asymmetric();
        assert_eq!(names(&g, &g.enumerate_paths(1, None)), ["1", "2", "3", "4"]);
        let zero = g.enumerate_paths(0, None);
        assert_eq!(zero.len(), 2);
        assert!(zero.iter().all(Path::is_empty));
        // brute-force join of the edge table
        let mut expected = Vec::new();
        for e in g.edges() {
            for f in g.edges() {
                if g.composable(e, f) {
                    expected.push(format!("{}.{}", g.edge_name(e), g.edge_name(f)));
                }
            }
        }
        let two = names(&g, &g.enumerate_paths(2, None));
        assert_eq!(two.len(), 8);
        assert_eq!(two, expected);
        let at_w = g.enumerate_paths(2, Some(g.vertex_id("w").unwrap()));
        assert!(at_w.iter().all(|p| p.range() == g.vertex_id("w").unwrap()));
        assert_eq!(at_w.len(), 4);
    }

    #[test]
    fn path_counts_match_adjacency_powers() {
        for g in [asymmetric(), basilica_graph()] {
            let n = g.num_vertices();
            let mut adj = vec![vec![0u64; n]; n];
            for e in g.edges() {
                adj[g.range(e).index()][g.source(e).index()] += 1;
            }
            let mut power = adj.clone();
            for len in 1..=8 {
                let total: u64 = power.iter().flatten().sum();
                assert_eq!(g.enumerate_paths(len, None).len() as u64, total, "length {len}");
                let mut next = vec![vec![0u64; n]; n];
                for i in 0..n {
                    for k in 0..n {
                        for j in 0..n {
                            next[i][j] += power[i][k] * adj[k][j];
                        }
                    }
                }
                power = next;
            }
        }
    }

    #[test]
    fn parse_compact_and_dotted_paths() {
        let g = asymmetric();
        let p = g.parse_path("242312").unwrap();
        assert_eq!(p.display(&g).to_string(), "2.4.2.3.1.2");
        assert_eq!(g.parse_path("2.4.2.3.1.2").unwrap(), p);
        assert!(g.parse_path("21").is_err());
    }
}
