//! Rule tables for self-similar groupoid actions and the word calculus on
//! groupoid elements.
//!
//! An [`Element`] is a word `s1 s2 ... sk` of signed generator letters read
//! as a composition of partial maps, so `sk` acts first:
//!
//! ```text
//!   g · (eμ)   = (g · e) (g|_e · μ)
//!   (s1 … sk)|_e = s1|_{(s2 … sk)·e} · … · sk|_e
//! ```
//!
//! Restriction words are freely reduced, which is sound in a groupoid, so a
//! word never grows when restricted along an edge whose rules have
//! single-letter restrictions.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{split_into_names, EdgeId, Graph, GraphError, Path, VertexId};

/// A signed generator symbol: generator `index` or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Letter(u32);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Letter {
        Letter((generator as u32) << 1 | inverse as u32)
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Rule table for one generator, written with names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    /// `d(g)`
    pub dom: String,
    /// `c(g)`
    pub cod: String,
    pub rules: Vec<RuleSpec>,
}

/// `g · edge = image` with restriction `g|_edge = word`. Word symbols are
/// generator names, `name^-1`, or vertex names for units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSpec {
    pub edge: String,
    pub image: String,
    pub word: Vec<String>,
}

impl GeneratorSpec {
    pub fn new(name: &str, dom: &str, cod: &str) -> GeneratorSpec {
        GeneratorSpec {
            name: name.to_string(),
            dom: dom.to_string(),
            cod: cod.to_string(),
            rules: Vec::new(),
        }
    }

    /// Adds a rule; `word` is split on whitespace.
    pub fn rule(mut self, edge: &str, image: &str, word: &str) -> GeneratorSpec {
        self.rules.push(RuleSpec {
            edge: edge.to_string(),
            image: image.to_string(),
            word: word.split_whitespace().map(str::to_string).collect(),
        });
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub enum Violation {
    #[error("generator `{0}` is defined twice or clashes with a vertex name")]
    DuplicateGenerator(String),
    #[error("generator `{generator}`: unknown vertex `{vertex}`")]
    UnknownVertex { generator: String, vertex: String },
    #[error("generator `{generator}`: unknown edge `{edge}`")]
    UnknownEdge { generator: String, edge: String },
    #[error("generator `{generator}`: unknown symbol `{symbol}` in restriction of `{edge}`")]
    UnknownSymbol {
        generator: String,
        edge: String,
        symbol: String,
    },
    #[error("generator `{generator}`: edge `{edge}` does not have range d({generator})")]
    RuleOutsideDomain { generator: String, edge: String },
    #[error("generator `{generator}`: image `{image}` does not have range c({generator})")]
    ImageOutsideCodomain { generator: String, image: String },
    #[error("generator `{generator}`: two rules for edge `{edge}`")]
    DuplicateRule { generator: String, edge: String },
    #[error("generator `{generator}`: no rule for edge `{edge}`")]
    MissingRule { generator: String, edge: String },
    #[error("generator `{0}` is not a bijection on edges")]
    NotBijectiveOnEdges(String),
    #[error("generator `{generator}`: restriction at `{edge}` has the wrong domain or codomain")]
    RestrictionVertexMismatch { generator: String, edge: String },
    #[error("generator `{generator}`: restriction word at `{edge}` is not composable")]
    NonComposableWord { generator: String, edge: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid automaton: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("element has domain {found}, expected {expected}")]
    DomainMismatch { expected: String, found: String },
    #[error("cannot compose: d({left}) = {left_dom} but c({right}) = {right_cod}")]
    NonComposable {
        left: String,
        left_dom: String,
        right: String,
        right_cod: String,
    },
    #[error("empty element literal")]
    EmptyElement,
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Clone, Debug)]
struct LetterTable {
    dom: VertexId,
    cod: VertexId,
    /// Indexed by edge id; `Some` exactly on `d(letter)E^1`.
    moves: Vec<Option<(EdgeId, Vec<Letter>)>>,
}

/// A groupoid element: a freely reduced word over signed letters together
/// with its domain. The empty word is the unit at `dom`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    dom: VertexId,
    cod: VertexId,
    word: Vec<Letter>,
}

impl Element {
    /// `d(g)`
    pub fn dom(&self) -> VertexId {
        self.dom
    }

    /// `c(g)`
    pub fn cod(&self) -> VertexId {
        self.cod
    }

    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_unit(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_unit()
    }

    /// Orders by length first, then letters.
    pub fn shortlex_cmp(&self, other: &Element) -> std::cmp::Ordering {
        (self.word.len(), &self.word, self.dom).cmp(&(other.word.len(), &other.word, other.dom))
    }
}

/// A validated E-automaton.
#[derive(Clone, Debug)]
pub struct Automaton {
    graph: Graph,
    specs: Vec<GeneratorSpec>,
    names: Vec<String>,
    letters: Vec<LetterTable>,
}

impl PartialEq for Automaton {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph && self.specs == other.specs
    }
}

impl Eq for Automaton {}

fn free_reduce(word: &mut Vec<Letter>) {
    let mut out: Vec<Letter> = Vec::with_capacity(word.len());
    for &l in word.iter() {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    *word = out;
}

fn invert_word(word: &[Letter]) -> Vec<Letter> {
    word.iter().rev().map(|l| l.inverse()).collect()
}

impl Automaton {
    /// Validates and builds an automaton. All violations are reported at
    /// once.
    pub fn new(graph: Graph, generators: Vec<GeneratorSpec>) -> Result<Automaton, AutomatonError> {
        let violations = validate_rules(&graph, &generators);
        if !violations.is_empty() {
            return Err(AutomatonError::Invalid(violations));
        }
        let mut specs = generators;
        specs.sort_by(|a, b| a.name.cmp(&b.name));
        let names: Vec<String> = specs.iter().map(|g| g.name.clone()).collect();
        let mut letters = Vec::with_capacity(2 * specs.len());
        for spec in &specs {
            let dom = graph.vertex_id(&spec.dom)?;
            let cod = graph.vertex_id(&spec.cod)?;
            let mut fwd = vec![None; graph.num_edges()];
            let mut bwd = vec![None; graph.num_edges()];
            for rule in &spec.rules {
                let e = graph.edge_id(&rule.edge)?;
                let f = graph.edge_id(&rule.image)?;
                let word = resolve_word(&graph, &names, &rule.word)
                    .expect("validated")
                    .1;
                bwd[f.index()] = Some((e, invert_word(&word)));
                fwd[e.index()] = Some((f, word));
            }
            letters.push(LetterTable {
                dom,
                cod,
                moves: fwd,
            });
            letters.push(LetterTable {
                dom: cod,
                cod: dom,
                moves: bwd,
            });
        }
        Ok(Automaton {
            graph,
            specs,
            names,
            letters,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Generator tables sorted by name.
    pub fn generator_specs(&self) -> &[GeneratorSpec] {
        &self.specs
    }

    pub fn num_generators(&self) -> usize {
        self.names.len()
    }

    pub fn generator_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// All letters: generator `i` is `2i`, its inverse `2i + 1`.
    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.letters.len() as u32).map(Letter)
    }

    pub fn letter_dom(&self, l: Letter) -> VertexId {
        self.letters[l.index()].dom
    }

    pub fn letter_cod(&self, l: Letter) -> VertexId {
        self.letters[l.index()].cod
    }

    /// `(l · e, l|_e)` as a raw word, or `None` when `r(e) != d(l)`.
    pub fn letter_step(&self, l: Letter, e: EdgeId) -> Option<(EdgeId, &[Letter])> {
        self.letters[l.index()].moves[e.index()]
            .as_ref()
            .map(|(f, w)| (*f, w.as_slice()))
    }

    /// Longest restriction word appearing in a rule.
    pub fn max_rule_length(&self) -> usize {
        self.letters
            .iter()
            .flat_map(|t| t.moves.iter().flatten())
            .map(|(_, w)| w.len())
            .max()
            .unwrap_or(0)
    }

    pub fn unit(&self, v: VertexId) -> Element {
        Element {
            dom: v,
            cod: v,
            word: Vec::new(),
        }
    }

    pub fn units(&self) -> Vec<Element> {
        self.graph.vertices().map(|v| self.unit(v)).collect()
    }

    pub fn letter(&self, l: Letter) -> Element {
        Element {
            dom: self.letter_dom(l),
            cod: self.letter_cod(l),
            word: vec![l],
        }
    }

    /// Every generator and inverse as an element.
    pub fn letter_elements(&self) -> Vec<Element> {
        self.letters().map(|l| self.letter(l)).collect()
    }

    pub fn generator(&self, name: &str) -> Result<Element, AutomatonError> {
        let i = self
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| AutomatonError::UnknownSymbol(name.to_string()))?;
        Ok(self.letter(Letter::new(i, false)))
    }

    /// Builds an element from a nonempty letter word, checking
    /// composability, and reduces it.
    pub fn element(&self, word: &[Letter]) -> Result<Element, AutomatonError> {
        let last = *word.last().ok_or(AutomatonError::EmptyElement)?;
        for w in word.windows(2) {
            if self.letter_dom(w[0]) != self.letter_cod(w[1]) {
                return Err(AutomatonError::NonComposable {
                    left: self.letter_name(w[0]),
                    left_dom: self.graph.vertex_name(self.letter_dom(w[0])).to_string(),
                    right: self.letter_name(w[1]),
                    right_cod: self.graph.vertex_name(self.letter_cod(w[1])).to_string(),
                });
            }
        }
        Ok(self.reduced(self.letter_dom(last), word.to_vec()))
    }

    /// `word` must already be composable with domain `dom`.
    fn reduced(&self, dom: VertexId, mut word: Vec<Letter>) -> Element {
        free_reduce(&mut word);
        let cod = word.first().map_or(dom, |&l| self.letter_cod(l));
        Element { dom, cod, word }
    }

    pub fn letter_name(&self, l: Letter) -> String {
        let base = &self.names[l.generator()];
        if l.is_inverse() {
            format!("{base}^-1")
        } else {
            base.clone()
        }
    }

    /// Parses `a b^-1`, `a.b^-1`, `ab` (when the split into generator names
    /// is unambiguous by longest match), or a vertex name for a unit.
    pub fn parse_element(&self, text: &str) -> Result<Element, AutomatonError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(AutomatonError::EmptyElement);
        }
        if let Ok(v) = self.graph.vertex_id(text) {
            return Ok(self.unit(v));
        }
        let tokens: Vec<&str> = text
            .split(|c: char| c.is_whitespace() || c == '.' || c == '*')
            .filter(|t| !t.is_empty())
            .collect();
        let mut letters = Vec::new();
        let mut unit_dom = None;
        for token in tokens {
            if let Ok(v) = self.graph.vertex_id(token) {
                unit_dom.get_or_insert(v);
                continue;
            }
            match self.symbol(token) {
                Some(l) => letters.push(l),
                None => {
                    let parts = split_letters(token, &|s| self.symbol(s))
                        .ok_or_else(|| AutomatonError::UnknownSymbol(token.to_string()))?;
                    letters.extend(parts);
                }
            }
        }
        match (letters.is_empty(), unit_dom) {
            (true, Some(v)) => Ok(self.unit(v)),
            _ => self.element(&letters),
        }
    }

    fn symbol(&self, token: &str) -> Option<Letter> {
        let (base, inverse) = match token
            .strip_suffix("^-1")
            .or_else(|| token.strip_suffix("⁻¹"))
        {
            Some(b) => (b, true),
            None => (token, false),
        };
        self.names
            .iter()
            .position(|n| n == base)
            .map(|i| Letter::new(i, inverse))
    }

    /// Writes the word; letters are juxtaposed when every generator name is a
    /// single character and space-separated otherwise. Units print as their
    /// vertex.
    pub fn format_element(&self, g: &Element) -> String {
        if g.word.is_empty() {
            return self.graph.vertex_name(g.dom).to_string();
        }
        let sep = if self.names.iter().all(|n| n.chars().count() == 1) {
            ""
        } else {
            " "
        };
        g.word
            .iter()
            .map(|&l| self.letter_name(l))
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Symbols as accepted by the spec-file grammar.
    pub fn word_symbols(&self, g: &Element) -> Vec<String> {
        if g.word.is_empty() {
            vec![self.graph.vertex_name(g.dom).to_string()]
        } else {
            g.word.iter().map(|&l| self.letter_name(l)).collect()
        }
    }

    pub fn display<'a>(&'a self, g: &'a Element) -> ElementDisplay<'a> {
        ElementDisplay { aut: self, elem: g }
    }

    /// `g^-1`
    pub fn inverse(&self, g: &Element) -> Element {
        Element {
            dom: g.cod,
            cod: g.dom,
            word: invert_word(&g.word),
        }
    }

    /// `hg`, defined when `d(h) = c(g)`.
    pub fn compose(&self, h: &Element, g: &Element) -> Result<Element, AutomatonError> {
        if h.dom != g.cod {
            return Err(AutomatonError::NonComposable {
                left: self.format_element(h),
                left_dom: self.graph.vertex_name(h.dom).to_string(),
                right: self.format_element(g),
                right_cod: self.graph.vertex_name(g.cod).to_string(),
            });
        }
        let mut word = h.word.clone();
        word.extend_from_slice(&g.word);
        Ok(self.reduced(g.dom, word))
    }

    fn check_domain(&self, g: &Element, v: VertexId) -> Result<(), AutomatonError> {
        if g.dom == v {
            Ok(())
        } else {
            Err(AutomatonError::DomainMismatch {
                expected: self.graph.vertex_name(g.dom).to_string(),
                found: self.graph.vertex_name(v).to_string(),
            })
        }
    }

    /// `(g · e, g|_e)`, or `None` when `r(e) != d(g)`.
    pub fn step(&self, g: &Element, e: EdgeId) -> Option<(EdgeId, Element)> {
        if self.graph.range(e) != g.dom {
            return None;
        }
        let mut cur = e;
        let mut parts: Vec<&[Letter]> = Vec::with_capacity(g.word.len());
        for &l in g.word.iter().rev() {
            let (next, w) = self.letter_step(l, cur).expect("composable word");
            parts.push(w);
            cur = next;
        }
        let word: Vec<Letter> = parts.iter().rev().flat_map(|w| w.iter().copied()).collect();
        Some((cur, self.reduced(self.graph.source(e), word)))
    }

    /// `(g · p, g|_p)`.
    pub fn act_restrict(&self, g: &Element, p: &Path) -> Result<(Path, Element), AutomatonError> {
        self.check_domain(g, p.range())?;
        let mut cur = g.clone();
        let mut image = Vec::with_capacity(p.len());
        for &e in p.edges() {
            let (f, next) = self.step(&cur, e).expect("domain checked");
            image.push(f);
            cur = next;
        }
        let path = Path::from_edges_at(&self.graph, g.cod, &image).expect("actions preserve paths");
        Ok((path, cur))
    }

    /// `g · p`
    pub fn act(&self, g: &Element, p: &Path) -> Result<Path, AutomatonError> {
        self.act_restrict(g, p).map(|(q, _)| q)
    }

    /// `g|_p`
    pub fn restrict(&self, g: &Element, p: &Path) -> Result<Element, AutomatonError> {
        self.act_restrict(g, p).map(|(_, h)| h)
    }
}

/// Display adapter from [`Automaton::display`].
pub struct ElementDisplay<'a> {
    aut: &'a Automaton,
    elem: &'a Element,
}

impl fmt::Display for ElementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.aut.format_element(self.elem))
    }
}

fn split_letters(token: &str, lookup: &dyn Fn(&str) -> Option<Letter>) -> Option<Vec<Letter>> {
    // `ab^-1c`: split on inverse markers first, then by generator names.
    let mut out = Vec::new();
    let mut rest = token;
    while !rest.is_empty() {
        let (chunk, inverse, tail) = match rest.find("^-1") {
            Some(i) => (&rest[..i], true, &rest[i + 3..]),
            None => (rest, false, ""),
        };
        let mut parts = split_into_names(chunk, lookup)?;
        if inverse {
            let last = parts.pop()?;
            parts.push(last.inverse());
        }
        out.extend(parts);
        rest = tail;
    }
    Some(out)
}

/// Resolves a restriction word to `(unit vertex if any, letters)`.
fn resolve_word(
    graph: &Graph,
    names: &[String],
    word: &[String],
) -> Result<(Option<VertexId>, Vec<Letter>), String> {
    let mut letters = Vec::new();
    let mut unit = None;
    for sym in word {
        if let Ok(v) = graph.vertex_id(sym) {
            unit.get_or_insert(v);
            continue;
        }
        let (base, inverse) = match sym.strip_suffix("^-1") {
            Some(b) => (b, true),
            None => (sym.as_str(), false),
        };
        match names.iter().position(|n| n == base) {
            Some(i) => letters.push(Letter::new(i, inverse)),
            None => return Err(sym.clone()),
        }
    }
    Ok((unit, letters))
}

/// Checks rule tables against the graph: bijectivity on edges and the
/// vertex conditions `d(g|_e) = s(e)`, `c(g|_e) = s(g · e)`.
pub fn validate_rules(graph: &Graph, generators: &[GeneratorSpec]) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut names: Vec<String> = generators.iter().map(|g| g.name.clone()).collect();
    names.sort();
    for g in generators {
        if !seen.insert(g.name.as_str()) || graph.has_vertex(&g.name) || g.name.is_empty() {
            out.push(Violation::DuplicateGenerator(g.name.clone()));
        }
    }
    // vertex lookups for every generator's domain and codomain
    let mut ends = Vec::new();
    for g in generators {
        let dom = graph.vertex_id(&g.dom);
        let cod = graph.vertex_id(&g.cod);
        for (name, r) in [(&g.dom, &dom), (&g.cod, &cod)] {
            if r.is_err() {
                out.push(Violation::UnknownVertex {
                    generator: g.name.clone(),
                    vertex: name.clone(),
                });
            }
        }
        ends.push((dom.ok(), cod.ok()));
    }
    if !out.is_empty() {
        return out;
    }
    let spec_of = |name: &str| generators.iter().position(|g| g.name == name);
    let letter_ends = |l: Letter| {
        let i = spec_of(&names[l.generator()]).expect("known generator");
        let (d, c) = ends[i];
        let (d, c) = (d.expect("checked"), c.expect("checked"));
        if l.is_inverse() {
            (c, d)
        } else {
            (d, c)
        }
    };
    for (gi, g) in generators.iter().enumerate() {
        let (dom, cod) = (ends[gi].0.expect("checked"), ends[gi].1.expect("checked"));
        let mut covered = HashSet::new();
        let mut images = HashSet::new();
        let mut bijective = true;
        for rule in &g.rules {
            let e = match graph.edge_id(&rule.edge) {
                Ok(e) => e,
                Err(_) => {
                    out.push(Violation::UnknownEdge {
                        generator: g.name.clone(),
                        edge: rule.edge.clone(),
                    });
                    continue;
                }
            };
            let f = match graph.edge_id(&rule.image) {
                Ok(f) => f,
                Err(_) => {
                    out.push(Violation::UnknownEdge {
                        generator: g.name.clone(),
                        edge: rule.image.clone(),
                    });
                    continue;
                }
            };
            if graph.range(e) != dom {
                out.push(Violation::RuleOutsideDomain {
                    generator: g.name.clone(),
                    edge: rule.edge.clone(),
                });
            }
            if graph.range(f) != cod {
                out.push(Violation::ImageOutsideCodomain {
                    generator: g.name.clone(),
                    image: rule.image.clone(),
                });
            }
            if !covered.insert(e) {
                out.push(Violation::DuplicateRule {
                    generator: g.name.clone(),
                    edge: rule.edge.clone(),
                });
            }
            if !images.insert(f) {
                bijective = false;
            }
            let (unit, letters) = match resolve_word(graph, &names, &rule.word) {
                Ok(r) => r,
                Err(symbol) => {
                    out.push(Violation::UnknownSymbol {
                        generator: g.name.clone(),
                        edge: rule.edge.clone(),
                        symbol,
                    });
                    continue;
                }
            };
            if rule.word.is_empty() {
                out.push(Violation::RestrictionVertexMismatch {
                    generator: g.name.clone(),
                    edge: rule.edge.clone(),
                });
                continue;
            }
            let composable = letters
                .windows(2)
                .all(|w| letter_ends(w[0]).0 == letter_ends(w[1]).1);
            if !composable {
                out.push(Violation::NonComposableWord {
                    generator: g.name.clone(),
                    edge: rule.edge.clone(),
                });
                continue;
            }
            let (wd, wc) = match (letters.first(), letters.last()) {
                (Some(&first), Some(&last)) => (letter_ends(last).0, letter_ends(first).1),
                _ => {
                    let u = unit.expect("nonempty word");
                    (u, u)
                }
            };
            if wd != graph.source(e) || wc != graph.source(f) {
                out.push(Violation::RestrictionVertexMismatch {
                    generator: g.name.clone(),
                    edge: rule.edge.clone(),
                });
            }
        }
        for &e in graph.edges_into(dom) {
            if !covered.contains(&e) {
                out.push(Violation::MissingRule {
                    generator: g.name.clone(),
                    edge: graph.edge_name(e).to_string(),
                });
                bijective = false;
            }
        }
        if !bijective {
            out.push(Violation::NotBijectiveOnEdges(g.name.clone()));
        }
    }
    out
}
