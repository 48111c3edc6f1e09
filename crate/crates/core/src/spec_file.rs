//! Line-oriented text format for graphs and their self-similar actions.
//!
//! ```text
//! [graph]
//! vertex v
//! edge 1 : v -> v        # src -> dst
//! [generator a : v -> v] # d(a) -> c(a)
//! 1 -> 1 | a             # a · 1 = 1, a|_1 = a
//! [options]
//! max_states = 500
//! generators = a, a a
//! ```

use std::fmt::{self, Write};

use thiserror::Error;

use crate::automaton::{Automaton, AutomatonError, GeneratorSpec, RuleSpec};
use crate::graph::Graph;
use crate::machine::Bounds;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}, column {col}: unknown symbol `{symbol}`")]
    UnknownSymbol { line: usize, col: usize, symbol: String },
    #[error(transparent)]
    Validation(#[from] AutomatonError),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpecOptions {
    pub max_states: Option<usize>,
    pub max_rounds: Option<usize>,
    pub max_word_len: Option<usize>,
    /// Default generating set, as element words.
    pub generators: Option<Vec<String>>,
}

impl SpecOptions {
    fn is_empty(&self) -> bool {
        *self == SpecOptions::default()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpecFile {
    pub vertices: Vec<String>,
    /// `(name, src, dst)`
    pub edges: Vec<(String, String, String)>,
    pub generators: Vec<GeneratorSpec>,
    pub options: SpecOptions,
}

impl SpecFile {
    pub fn from_automaton(aut: &Automaton) -> SpecFile {
        let g = aut.graph();
        SpecFile {
            vertices: g.vertices().map(|v| g.vertex_name(v).to_string()).collect(),
            edges: g
                .edges()
                .map(|e| {
                    (
                        g.edge_name(e).to_string(),
                        g.vertex_name(g.source(e)).to_string(),
                        g.vertex_name(g.range(e)).to_string(),
                    )
                })
                .collect(),
            generators: aut.generator_specs().to_vec(),
            options: SpecOptions::default(),
        }
    }

    pub fn graph(&self) -> Result<Graph, SpecError> {
        Graph::new(self.vertices.clone(), self.edges.clone()).map_err(|e| SpecError::Validation(e.into()))
    }

    pub fn automaton(&self) -> Result<Automaton, SpecError> {
        Ok(Automaton::new(self.graph()?, self.generators.clone())?)
    }

    /// Defaults overridden by the options section.
    pub fn bounds(&self) -> Bounds {
        let d = Bounds::default();
        Bounds {
            max_states: self.options.max_states.unwrap_or(d.max_states),
            max_rounds: self.options.max_rounds.unwrap_or(d.max_rounds),
            max_word_len: self.options.max_word_len.unwrap_or(d.max_word_len),
        }
    }
}

impl fmt::Display for SpecFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_spec(self))
    }
}

pub fn format_spec(spec: &SpecFile) -> String {
    let mut out = String::from("[graph]\n");
    for v in &spec.vertices {
        writeln!(out, "vertex {v}").unwrap();
    }
    for (e, s, r) in &spec.edges {
        writeln!(out, "edge {e} : {s} -> {r}").unwrap();
    }
    for g in &spec.generators {
        writeln!(out, "\n[generator {} : {} -> {}]", g.name, g.dom, g.cod).unwrap();
        for r in &g.rules {
            writeln!(out, "{} -> {} | {}", r.edge, r.image, r.word.join(" ")).unwrap();
        }
    }
    let o = &spec.options;
    if !o.is_empty() {
        out.push_str("\n[options]\n");
        for (key, val) in [
            ("max_states", o.max_states),
            ("max_rounds", o.max_rounds),
            ("max_word_len", o.max_word_len),
        ] {
            if let Some(v) = val {
                writeln!(out, "{key} = {v}").unwrap();
            }
        }
        if let Some(gens) = &o.generators {
            writeln!(out, "generators = {}", gens.join(", ")).unwrap();
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Arrow,
    Punct(char),
}

struct Lexed {
    toks: Vec<(Tok, usize)>,
    /// Column just past the last character, for end-of-line errors.
    end: usize,
}

const PUNCT: [char; 6] = [':', '|', '=', '[', ']', ','];

fn lex(line: &str) -> Lexed {
    let chars: Vec<char> = line.chars().take_while(|&c| c != '#').collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            toks.push((Tok::Arrow, i + 1));
            i += 2;
        } else if PUNCT.contains(&c) {
            toks.push((Tok::Punct(c), i + 1));
            i += 1;
        } else {
            let start = i;
            while i < chars.len()
                && !chars[i].is_whitespace()
                && !PUNCT.contains(&chars[i])
                && !(chars[i] == '-' && chars.get(i + 1) == Some(&'>'))
            {
                i += 1;
            }
            toks.push((Tok::Word(chars[start..i].iter().collect()), start + 1));
        }
    }
    let end = chars.iter().rposition(|c| !c.is_whitespace()).map_or(1, |p| p + 2);
    Lexed { toks, end }
}

struct Cursor<'a> {
    line: usize,
    lexed: &'a Lexed,
    pos: usize,
}

impl Cursor<'_> {
    fn err<T>(&self, col: usize, msg: impl Into<String>) -> Result<T, SpecError> {
        Err(SpecError::Syntax {
            line: self.line,
            col,
            msg: msg.into(),
        })
    }

    fn col(&self) -> usize {
        self.lexed.toks.get(self.pos).map_or(self.lexed.end, |t| t.1)
    }

    fn at_end(&self) -> bool {
        self.pos == self.lexed.toks.len()
    }

    fn name(&mut self, what: &str) -> Result<(String, usize), SpecError> {
        match self.lexed.toks.get(self.pos) {
            Some((Tok::Word(w), col)) if is_name(w) => {
                self.pos += 1;
                Ok((w.clone(), *col))
            }
            Some((Tok::Word(w), col)) => self.err(*col, format!("`{w}` is not a valid {what}")),
            _ => self.err(self.col(), format!("expected {what}")),
        }
    }

    fn expect(&mut self, tok: Tok, shown: &str) -> Result<(), SpecError> {
        if self.lexed.toks.get(self.pos).map(|t| &t.0) == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(self.col(), format!("expected `{shown}`"))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if matches!(self.lexed.toks.get(self.pos), Some((Tok::Word(w), _)) if w == kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn finish(&self) -> Result<(), SpecError> {
        if self.at_end() {
            Ok(())
        } else {
            self.err(self.col(), "unexpected trailing input")
        }
    }

    /// Remaining words up to the end of the line.
    fn words(&mut self) -> Result<Vec<(String, usize)>, SpecError> {
        let mut out = Vec::new();
        while let Some((tok, col)) = self.lexed.toks.get(self.pos) {
            match tok {
                Tok::Word(w) => out.push((w.clone(), *col)),
                _ => return self.err(*col, "expected a generator, inverse or vertex name"),
            }
            self.pos += 1;
        }
        Ok(out)
    }
}

fn is_name(w: &str) -> bool {
    !w.is_empty() && w.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

fn is_symbol(w: &str) -> bool {
    is_name(w.strip_suffix("^-1").unwrap_or(w))
}

enum Section {
    None,
    Graph,
    Generator,
    Options,
}

pub fn parse_spec(text: &str) -> Result<SpecFile, SpecError> {
    let mut spec = SpecFile::default();
    let mut section = Section::None;
    let mut seen_graph = false;
    let mut seen_options = false;
    let mut symbols: Vec<(String, usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let lexed = lex(raw);
        if lexed.toks.is_empty() {
            continue;
        }
        let mut c = Cursor { line, lexed: &lexed, pos: 0 };
        if c.lexed.toks[0].0 == Tok::Punct('[') {
            c.pos = 1;
            if c.keyword("graph") {
                if seen_graph {
                    return c.err(lexed.toks[1].1, "duplicate [graph] section");
                }
                seen_graph = true;
                section = Section::Graph;
            } else if c.keyword("generator") {
                let (name, _) = c.name("generator name")?;
                c.expect(Tok::Punct(':'), ":")?;
                let (dom, _) = c.name("vertex name")?;
                c.expect(Tok::Arrow, "->")?;
                let (cod, _) = c.name("vertex name")?;
                spec.generators.push(GeneratorSpec::new(&name, &dom, &cod));
                section = Section::Generator;
            } else if c.keyword("options") {
                if seen_options {
                    return c.err(lexed.toks[1].1, "duplicate [options] section");
                }
                seen_options = true;
                section = Section::Options;
            } else {
                return c.err(c.col(), "expected `graph`, `generator` or `options`");
            }
            c.expect(Tok::Punct(']'), "]")?;
            c.finish()?;
            continue;
        }
        match section {
            Section::None => return c.err(c.col(), "content before the first section"),
            Section::Graph => {
                if c.keyword("vertex") {
                    let (v, _) = c.name("vertex name")?;
                    spec.vertices.push(v);
                } else if c.keyword("edge") {
                    let (e, _) = c.name("edge name")?;
                    c.expect(Tok::Punct(':'), ":")?;
                    let (s, _) = c.name("vertex name")?;
                    c.expect(Tok::Arrow, "->")?;
                    let (r, _) = c.name("vertex name")?;
                    spec.edges.push((e, s, r));
                } else {
                    return c.err(c.col(), "expected `vertex` or `edge`");
                }
                c.finish()?;
            }
            Section::Generator => {
                let (edge, _) = c.name("edge name")?;
                c.expect(Tok::Arrow, "->")?;
                let (image, _) = c.name("edge name")?;
                c.expect(Tok::Punct('|'), "|")?;
                let col = c.col();
                let word = c.words()?;
                if word.is_empty() {
                    return c.err(col, "empty restriction; write the vertex name for a unit");
                }
                for (w, wc) in &word {
                    if !is_symbol(w) {
                        return c.err(*wc, format!("`{w}` is not a valid symbol"));
                    }
                    symbols.push((w.clone(), line, *wc));
                }
                let g = spec.generators.last_mut().expect("inside a generator section");
                g.rules.push(RuleSpec {
                    edge,
                    image,
                    word: word.into_iter().map(|w| w.0).collect(),
                });
            }
            Section::Options => {
                let (key, kcol) = c.name("option name")?;
                c.expect(Tok::Punct('='), "=")?;
                let o = &mut spec.options;
                match key.as_str() {
                    "max_states" | "max_rounds" | "max_word_len" => {
                        let vcol = c.col();
                        let (v, _) = c.name("number")?;
                        let n: usize = match v.parse() {
                            Ok(n) => n,
                            Err(_) => return c.err(vcol, format!("`{v}` is not a number")),
                        };
                        let slot = match key.as_str() {
                            "max_states" => &mut o.max_states,
                            "max_rounds" => &mut o.max_rounds,
                            _ => &mut o.max_word_len,
                        };
                        if slot.replace(n).is_some() {
                            return c.err(kcol, format!("`{key}` given twice"));
                        }
                    }
                    "generators" => {
                        let mut gens = Vec::new();
                        let mut cur: Vec<String> = Vec::new();
                        while let Some((tok, col)) = lexed.toks.get(c.pos) {
                            match tok {
                                Tok::Word(w) if is_symbol(w) => {
                                    symbols.push((w.clone(), line, *col));
                                    cur.push(w.clone());
                                }
                                Tok::Punct(',') if !cur.is_empty() => gens.push(std::mem::take(&mut cur).join(" ")),
                                _ => return c.err(*col, "expected a comma-separated list of words"),
                            }
                            c.pos += 1;
                        }
                        if cur.is_empty() {
                            return c.err(c.col(), "expected a word");
                        }
                        gens.push(cur.join(" "));
                        if o.generators.replace(gens).is_some() {
                            return c.err(kcol, "`generators` given twice");
                        }
                    }
                    _ => return c.err(kcol, format!("unknown option `{key}`")),
                }
                c.finish()?;
            }
        }
    }
    if !seen_graph {
        return Err(SpecError::Syntax {
            line: text.lines().count().max(1),
            col: 1,
            msg: "missing [graph] section".into(),
        });
    }
    for (sym, line, col) in symbols {
        let base = sym.strip_suffix("^-1").unwrap_or(&sym);
        let is_gen = spec.generators.iter().any(|g| g.name == base);
        let is_vertex = base == sym && spec.vertices.contains(&sym);
        if !is_gen && !is_vertex {
            return Err(SpecError::UnknownSymbol { line, col, symbol: sym });
        }
    }
    Ok(spec)
}

/// Parses and validates in one go.
pub fn load_spec(text: &str) -> Result<(SpecFile, Automaton), SpecError> {
    let spec = parse_spec(text)?;
    let aut = spec.automaton()?;
    Ok((spec, aut))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX: &str = "\
[graph]
vertex v
vertex w
edge 1 : v -> v      # src = s(e), dst = r(e)
edge 2 : w -> v
edge 3 : v -> w
edge 4 : v -> w
[generator a : v -> w]   # d(a)=v, c(a)=w
1 -> 4 | v               # unit restriction
2 -> 3 | b
[generator b : w -> v]
3 -> 1 | v
4 -> 2 | a
";

    #[test]
    fn parses_and_round_trips() {
        let (spec, aut) = load_spec(EX).unwrap();
        assert_eq!(aut.num_generators(), 2);
        let text = format_spec(&spec);
        assert_eq!(parse_spec(&text).unwrap(), spec);
        assert_eq!(format_spec(&parse_spec(&text).unwrap()), text);
        assert_eq!(SpecFile::from_automaton(&aut).automaton().unwrap(), aut);
    }

    #[test]
    fn errors_carry_positions() {
        let bad = "[graph]\nvertex v\nedge 1 v -> v\n";
        assert_eq!(
            parse_spec(bad),
            Err(SpecError::Syntax {
                line: 3,
                col: 8,
                msg: "expected `:`".into()
            })
        );
        let unknown = "[graph]\nvertex v\nedge 1 : v -> v\n[generator a : v -> v]\n1 -> 1 | a q\n";
        assert_eq!(
            parse_spec(unknown),
            Err(SpecError::UnknownSymbol {
                line: 5,
                col: 12,
                symbol: "q".into()
            })
        );
        assert!(matches!(parse_spec("vertex v"), Err(SpecError::Syntax { line: 1, col: 1, .. })));
        let invalid = "[graph]\nvertex v\nedge 1 : v -> v\nedge 2 : v -> v\n[generator a : v -> v]\n1 -> 1 | v\n";
        assert!(matches!(load_spec(invalid), Err(SpecError::Validation(_))));
    }

    #[test]
    fn options_section() {
        let text = "[graph]\nvertex v\n\n[options]\nmax_states = 20\ngenerators = v, v v\n";
        let spec = parse_spec(text).unwrap();
        assert_eq!(spec.bounds().max_states, 20);
        assert_eq!(spec.options.generators, Some(vec!["v".into(), "v v".into()]));
        assert_eq!(format_spec(&spec), text);
    }
}
