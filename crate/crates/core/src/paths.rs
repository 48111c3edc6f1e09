//! Eventually periodic infinite paths and the path literal grammar.
//!
//! ```text
//!   left-infinite   ρ^∞ λ        … ρ ρ λ          x_{-1} is the last edge of λ
//!   right-infinite  μ π^∞        μ π π …          x_1 is the first edge of μ
//!   bi-infinite     ρ^∞ μ π^∞    x_{n0} = μ_1     (anchor n0 ∈ ℤ)
//! ```
//!
//! Every constructor normalizes: cycles are primitive and the finite part
//! is as short as possible, which also pins down the rotation of each
//! cycle. A bi-infinite path that is periodic throughout keeps an empty
//! center with its anchor reduced modulo the period. Two normalized values
//! denote the same sequence exactly when they are equal.

use std::fmt;

use thiserror::Error;

use crate::graph::{non_composable, write_edges, EdgeId, Graph, GraphError, Path, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PathError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("a cycle needs at least one edge")]
    EmptyCycle,
    #[error("junction mismatch: {0}")]
    JunctionMismatch(String),
    #[error("syntax error at column {col}: {msg}")]
    Syntax { col: usize, msg: String },
    #[error("expected a {expected} path")]
    WrongKind { expected: &'static str },
}

fn junction(g: &Graph, left: EdgeId, right: EdgeId) -> PathError {
    match non_composable(g, left, right) {
        GraphError::NonComposable {
            left,
            left_source,
            right,
            right_range,
        } => PathError::JunctionMismatch(format!(
            "s({left}) = {left_source} but r({right}) = {right_range}"
        )),
        other => PathError::Graph(other),
    }
}

fn check_chain(g: &Graph, parts: &[&[EdgeId]]) -> Result<(), PathError> {
    let mut prev: Option<EdgeId> = None;
    for &e in parts.iter().flat_map(|p| p.iter()) {
        if let Some(p) = prev {
            if !g.composable(p, e) {
                return Err(junction(g, p, e));
            }
        }
        prev = Some(e);
    }
    Ok(())
}

fn check_cycle(g: &Graph, cycle: &[EdgeId]) -> Result<(), PathError> {
    if cycle.is_empty() {
        return Err(PathError::EmptyCycle);
    }
    check_chain(g, &[cycle, cycle])
}

/// Shortest `d` with `cycle = (cycle[..d])^k`.
pub(crate) fn primitive_root(cycle: &[EdgeId]) -> Vec<EdgeId> {
    let n = cycle.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && (d..n).all(|i| cycle[i] == cycle[i - d]) {
            return cycle[..d].to_vec();
        }
    }
    cycle.to_vec()
}

/// `ρ^∞ λ`
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeftInfinitePath {
    cycle: Vec<EdgeId>,
    tail: Vec<EdgeId>,
}

impl LeftInfinitePath {
    pub fn new(g: &Graph, cycle: Vec<EdgeId>, tail: Vec<EdgeId>) -> Result<Self, PathError> {
        check_cycle(g, &cycle)?;
        check_chain(g, &[&cycle, &tail])?;
        Ok(Self::normalized(cycle, tail))
    }

    pub(crate) fn normalized(cycle: Vec<EdgeId>, tail: Vec<EdgeId>) -> Self {
        let mut cycle = primitive_root(&cycle);
        let skip = tail
            .iter()
            .enumerate()
            .take_while(|&(i, e)| *e == cycle[i % cycle.len()])
            .count();
        let p = cycle.len();
        cycle.rotate_left(skip % p);
        LeftInfinitePath {
            cycle,
            tail: tail[skip..].to_vec(),
        }
    }

    /// The repeating block `ρ`.
    pub fn cycle(&self) -> &[EdgeId] {
        &self.cycle
    }

    /// The finite part `λ`.
    pub fn tail(&self) -> &[EdgeId] {
        &self.tail
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    /// `x_{-k}` for `k >= 1`.
    pub fn edge_at(&self, k: usize) -> EdgeId {
        assert!(k >= 1, "positions start at -1");
        let t = self.tail.len();
        if k <= t {
            self.tail[t - k]
        } else {
            let p = self.cycle.len();
            self.cycle[p - 1 - (k - t - 1) % p]
        }
    }

    /// The last `n` edges `x_{-n} … x_{-1}`.
    pub fn suffix(&self, n: usize) -> Vec<EdgeId> {
        (1..=n).rev().map(|k| self.edge_at(k)).collect()
    }

    /// `s(x_{-1})`
    pub fn source(&self, g: &Graph) -> VertexId {
        g.source(self.edge_at(1))
    }

    /// Deletes the rightmost edge.
    pub fn shift(&self) -> LeftInfinitePath {
        let mut cycle = self.cycle.clone();
        let mut tail = self.tail.clone();
        if tail.pop().is_none() {
            cycle.rotate_right(1);
        }
        Self::normalized(cycle, tail)
    }

    /// `x e`, defined when `s(x) = r(e)`.
    pub fn extend(&self, g: &Graph, e: EdgeId) -> Result<LeftInfinitePath, PathError> {
        let last = self.edge_at(1);
        if !g.composable(last, e) {
            return Err(junction(g, last, e));
        }
        let mut tail = self.tail.clone();
        tail.push(e);
        Ok(Self::normalized(self.cycle.clone(), tail))
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> impl fmt::Display + 'a {
        Shown(move |f: &mut fmt::Formatter<'_>| {
            f.write_str("(")?;
            write_edges(f, g, &self.cycle)?;
            f.write_str(")^inf")?;
            if !self.tail.is_empty() {
                f.write_str(" . ")?;
                write_edges(f, g, &self.tail)?;
            }
            Ok(())
        })
    }
}

/// `μ π^∞`
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RightInfinitePath {
    head: Vec<EdgeId>,
    cycle: Vec<EdgeId>,
}

impl RightInfinitePath {
    pub fn new(g: &Graph, head: Vec<EdgeId>, cycle: Vec<EdgeId>) -> Result<Self, PathError> {
        check_cycle(g, &cycle)?;
        check_chain(g, &[&head, &cycle])?;
        Ok(Self::normalized(head, cycle))
    }

    pub(crate) fn normalized(mut head: Vec<EdgeId>, cycle: Vec<EdgeId>) -> Self {
        let mut cycle = primitive_root(&cycle);
        let q = cycle.len();
        let mut k = 0;
        while let Some(&e) = head.last() {
            if e != cycle[q - 1 - k % q] {
                break;
            }
            head.pop();
            k += 1;
        }
        cycle.rotate_right(k % q);
        RightInfinitePath { head, cycle }
    }

    pub fn head(&self) -> &[EdgeId] {
        &self.head
    }

    pub fn cycle(&self) -> &[EdgeId] {
        &self.cycle
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    /// `x_i` for `i >= 1`.
    pub fn edge_at(&self, i: usize) -> EdgeId {
        assert!(i >= 1, "positions start at 1");
        let h = self.head.len();
        if i <= h {
            self.head[i - 1]
        } else {
            self.cycle[(i - h - 1) % self.cycle.len()]
        }
    }

    /// `x_1 … x_n`
    pub fn prefix(&self, n: usize) -> Vec<EdgeId> {
        (1..=n).map(|i| self.edge_at(i)).collect()
    }

    /// `r(x_1)`
    pub fn range(&self, g: &Graph) -> VertexId {
        g.range(self.edge_at(1))
    }

    /// The left shift applied `k` times: `x_{k+1} x_{k+2} …`.
    pub fn drop_front(&self, k: usize) -> RightInfinitePath {
        let h = self.head.len();
        if k <= h {
            return Self::normalized(self.head[k..].to_vec(), self.cycle.clone());
        }
        let mut cycle = self.cycle.clone();
        let q = cycle.len();
        cycle.rotate_left((k - h) % q);
        Self::normalized(Vec::new(), cycle)
    }

    /// `μ x` for a finite path `μ` with `s(μ) = r(x)`.
    pub fn prepend(&self, g: &Graph, mu: &Path) -> Result<RightInfinitePath, PathError> {
        let mut head = mu.edges().to_vec();
        check_chain(g, &[&head, &[self.edge_at(1)]])?;
        head.extend_from_slice(&self.head);
        Ok(Self::normalized(head, self.cycle.clone()))
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> impl fmt::Display + 'a {
        Shown(move |f: &mut fmt::Formatter<'_>| {
            if !self.head.is_empty() {
                write_edges(f, g, &self.head)?;
                f.write_str(" . ")?;
            }
            f.write_str("(")?;
            write_edges(f, g, &self.cycle)?;
            f.write_str(")^inf")
        })
    }
}

/// `ρ^∞ μ π^∞` anchored so that the first center edge sits at `n0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiInfinitePath {
    left: Vec<EdgeId>,
    center: Vec<EdgeId>,
    right: Vec<EdgeId>,
    anchor: i64,
}

impl BiInfinitePath {
    pub fn new(
        g: &Graph,
        left: Vec<EdgeId>,
        center: Vec<EdgeId>,
        right: Vec<EdgeId>,
        anchor: i64,
    ) -> Result<Self, PathError> {
        check_cycle(g, &left)?;
        check_cycle(g, &right)?;
        check_chain(g, &[&left, &center, &right])?;
        Ok(Self::normalized(left, center, right, anchor))
    }

    fn raw_at(left: &[EdgeId], center: &[EdgeId], right: &[EdgeId], n0: i64, i: i64) -> EdgeId {
        let c = center.len() as i64;
        if i < n0 {
            let p = left.len() as i64;
            left[(p - 1 - (n0 - 1 - i).rem_euclid(p)) as usize]
        } else if i < n0 + c {
            center[(i - n0) as usize]
        } else {
            right[(i - n0 - c).rem_euclid(right.len() as i64) as usize]
        }
    }

    pub(crate) fn normalized(left: Vec<EdgeId>, center: Vec<EdgeId>, right: Vec<EdgeId>, n0: i64) -> Self {
        let left = primitive_root(&left);
        let right = primitive_root(&right);
        let (p, q) = (left.len() as i64, right.len() as i64);
        let c = center.len() as i64;
        let at = |i: i64| Self::raw_at(&left, &center, &right, n0, i);
        let deviation = (n0..=n0 + c + p + q).find(|&i| at(i) != left[(i - n0).rem_euclid(p) as usize]);
        let Some(l) = deviation else {
            let anchor = n0.rem_euclid(p);
            return BiInfinitePath {
                right: left.clone(),
                left,
                center: Vec::new(),
                anchor,
            };
        };
        let base = n0 + c;
        let mut r = base;
        while r > l - p - q - 1 && at(r - 1) == right[(r - 1 - base).rem_euclid(q) as usize] {
            r -= 1;
        }
        let new_left: Vec<EdgeId> = (0..p).map(|k| at(l - p + k)).collect();
        let (new_center, start) = if r >= l {
            ((l..r).map(at).collect(), r)
        } else {
            (Vec::new(), l)
        };
        let new_right: Vec<EdgeId> = (0..q).map(|k| at(start + k)).collect();
        BiInfinitePath {
            left: new_left,
            center: new_center,
            right: new_right,
            anchor: l,
        }
    }

    pub fn left_cycle(&self) -> &[EdgeId] {
        &self.left
    }

    pub fn center(&self) -> &[EdgeId] {
        &self.center
    }

    pub fn right_cycle(&self) -> &[EdgeId] {
        &self.right
    }

    pub fn anchor(&self) -> i64 {
        self.anchor
    }

    /// First index of the right periodic region.
    pub fn right_start(&self) -> i64 {
        self.anchor + self.center.len() as i64
    }

    pub fn edge_at(&self, i: i64) -> EdgeId {
        Self::raw_at(&self.left, &self.center, &self.right, self.anchor, i)
    }

    /// `x_a … x_{b-1}`
    pub fn window(&self, a: i64, b: i64) -> Vec<EdgeId> {
        (a..b).map(|i| self.edge_at(i)).collect()
    }

    /// `x(-∞, n) = … x_{n-1} x_n`.
    pub fn truncate_left(&self, n: i64) -> LeftInfinitePath {
        let p = self.left.len() as i64;
        let mut start = self.anchor;
        if start > n + 1 {
            start -= ((start - n - 1) + p - 1) / p * p;
        }
        LeftInfinitePath::normalized(self.left.clone(), self.window(start, n + 1))
    }

    /// `x_m x_{m+1} …`
    pub fn suffix_from(&self, m: i64) -> RightInfinitePath {
        let q = self.right.len() as i64;
        let mut end = self.right_start();
        if end < m {
            end += (m - end + q - 1) / q * q;
        }
        RightInfinitePath::normalized(self.window(m, end), self.right.clone())
    }

    /// The translation `τ^k`: `τ(x)_n = x_{n-1}`.
    pub fn translate(&self, k: i64) -> BiInfinitePath {
        let mut out = self.clone();
        out.anchor += k;
        if out.center.is_empty() && out.left == out.right {
            out.anchor = out.anchor.rem_euclid(out.left.len() as i64);
        }
        out
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> impl fmt::Display + 'a {
        Shown(move |f: &mut fmt::Formatter<'_>| {
            f.write_str("(")?;
            write_edges(f, g, &self.left)?;
            f.write_str(")^inf . ")?;
            if !self.center.is_empty() {
                write_edges(f, g, &self.center)?;
                f.write_str(" . ")?;
            }
            f.write_str("(")?;
            write_edges(f, g, &self.right)?;
            write!(f, ")^inf @ {}", self.anchor)
        })
    }
}

struct Shown<F>(F);

impl<F: Fn(&mut fmt::Formatter<'_>) -> fmt::Result> fmt::Display for Shown<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        (self.0)(f)
    }
}

/// A parsed path literal before it is committed to a kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathLiteral {
    pub left: Option<Vec<EdgeId>>,
    pub middle: Vec<EdgeId>,
    pub right: Option<Vec<EdgeId>>,
    pub anchor: Option<i64>,
}

/// Any of the four path kinds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyPath {
    Finite(Path),
    Left(LeftInfinitePath),
    Right(RightInfinitePath),
    Bi(BiInfinitePath),
}

impl PathLiteral {
    /// Grammar: `1.2.3`, `(1)^inf . 2.3`, `2.3 . (1)^inf`,
    /// `(rho)^inf . mid . (pi)^inf @ n0`. Edge names inside a segment may be
    /// juxtaposed (`(23)^inf`) when they split uniquely.
    pub fn parse(g: &Graph, text: &str) -> Result<PathLiteral, PathError> {
        let (body, anchor) = match text.rfind('@') {
            Some(i) => {
                let n = text[i + 1..].trim();
                let n0 = n.parse::<i64>().map_err(|_| PathError::Syntax {
                    col: i + 2,
                    msg: format!("bad anchor `{n}`"),
                })?;
                (&text[..i], Some(n0))
            }
            None => (text, None),
        };
        let mut segments: Vec<(usize, bool, &str)> = Vec::new();
        let mut rest = body;
        let mut offset = 0;
        while let Some(open) = rest.find('(') {
            let close = rest[open..].find(')').map(|c| open + c).ok_or(PathError::Syntax {
                col: offset + open + 1,
                msg: "unclosed `(`".into(),
            })?;
            segments.push((offset, false, &rest[..open]));
            let after = &rest[close + 1..];
            let marker = ["^inf", "^∞"]
                .iter()
                .find(|m| after.trim_start().starts_with(*m))
                .ok_or(PathError::Syntax {
                    col: offset + close + 2,
                    msg: "expected `^inf` after `)`".into(),
                })?;
            segments.push((offset + open + 1, true, &rest[open + 1..close]));
            let skip = after.len() - after.trim_start().len() + marker.len();
            offset += close + 1 + skip;
            rest = &after[skip..];
        }
        if rest.contains(')') {
            return Err(PathError::Syntax {
                col: offset + rest.find(')').unwrap_or(0) + 1,
                msg: "unmatched `)`".into(),
            });
        }
        segments.push((offset, false, rest));

        let parse_edges = |col: usize, s: &str| -> Result<Vec<EdgeId>, PathError> {
            let trimmed = s.trim().trim_matches('.').trim();
            if trimmed.chars().any(|c| c == '(' || c == ')') {
                return Err(PathError::Syntax {
                    col,
                    msg: "nested parentheses".into(),
                });
            }
            g.split_edge_names(trimmed).map_err(PathError::from)
        };
        let mut cycles = Vec::new();
        let mut plain: Vec<Vec<EdgeId>> = Vec::new();
        let mut layout = Vec::new();
        for &(col, is_cycle, s) in &segments {
            let edges = parse_edges(col + 1, s)?;
            if is_cycle {
                if edges.is_empty() {
                    return Err(PathError::EmptyCycle);
                }
                cycles.push(edges);
                layout.push('c');
            } else if !edges.is_empty() {
                plain.push(edges);
                layout.push('p');
            }
        }
        let layout: String = layout.into_iter().collect();
        let mut cycles = cycles.into_iter();
        let mut plain = plain.into_iter();
        let lit = match layout.as_str() {
            "p" | "" => PathLiteral {
                left: None,
                middle: plain.next().unwrap_or_default(),
                right: None,
                anchor,
            },
            "c" => {
                let c = cycles.next();
                PathLiteral {
                    left: c.clone(),
                    middle: Vec::new(),
                    right: c,
                    anchor,
                }
            }
            "cp" => PathLiteral {
                left: cycles.next(),
                middle: plain.next().unwrap_or_default(),
                right: None,
                anchor,
            },
            "pc" => PathLiteral {
                left: None,
                middle: plain.next().unwrap_or_default(),
                right: cycles.next(),
                anchor,
            },
            "cc" | "cpc" => PathLiteral {
                left: cycles.next(),
                middle: plain.next().unwrap_or_default(),
                right: cycles.next(),
                anchor,
            },
            other => {
                return Err(PathError::Syntax {
                    col: 1,
                    msg: format!("unsupported layout of {} segments", other.len()),
                })
            }
        };
        if let Some(c) = &lit.left {
            check_cycle(g, c)?;
        }
        if let Some(c) = &lit.right {
            check_cycle(g, c)?;
        }
        let empty = Vec::new();
        check_chain(
            g,
            &[
                lit.left.as_ref().unwrap_or(&empty),
                &lit.middle,
                lit.right.as_ref().unwrap_or(&empty),
            ],
        )?;
        if lit.anchor.is_some() && (lit.left.is_none() || lit.right.is_none()) {
            return Err(PathError::Syntax {
                col: 1,
                msg: "an anchor needs a bi-infinite path".into(),
            });
        }
        Ok(lit)
    }

    pub fn finite(&self, g: &Graph) -> Result<Path, PathError> {
        if self.left.is_some() || self.right.is_some() || self.middle.is_empty() {
            return Err(PathError::WrongKind { expected: "finite" });
        }
        Ok(Path::from_edges(g, &self.middle)?)
    }

    pub fn left_infinite(&self, g: &Graph) -> Result<LeftInfinitePath, PathError> {
        let lone = self.middle.is_empty() && self.anchor.is_none();
        match (&self.left, &self.right) {
            (Some(c), None) => LeftInfinitePath::new(g, c.clone(), self.middle.clone()),
            (Some(c), Some(d)) if lone && c == d => LeftInfinitePath::new(g, c.clone(), Vec::new()),
            _ => Err(PathError::WrongKind {
                expected: "left-infinite",
            }),
        }
    }

    pub fn right_infinite(&self, g: &Graph) -> Result<RightInfinitePath, PathError> {
        let lone = self.middle.is_empty() && self.anchor.is_none();
        match (&self.left, &self.right) {
            (None, Some(c)) => RightInfinitePath::new(g, self.middle.clone(), c.clone()),
            (Some(c), Some(d)) if lone && c == d => RightInfinitePath::new(g, Vec::new(), c.clone()),
            _ => Err(PathError::WrongKind {
                expected: "right-infinite",
            }),
        }
    }

    pub fn bi_infinite(&self, g: &Graph) -> Result<BiInfinitePath, PathError> {
        match (&self.left, &self.right) {
            (Some(l), Some(r)) => BiInfinitePath::new(
                g,
                l.clone(),
                self.middle.clone(),
                r.clone(),
                self.anchor.unwrap_or(0),
            ),
            _ => Err(PathError::WrongKind {
                expected: "bi-infinite",
            }),
        }
    }

    /// Picks the kind from the layout; a lone cycle reads as left-infinite.
    pub fn into_any(&self, g: &Graph) -> Result<AnyPath, PathError> {
        match (&self.left, &self.right, self.anchor) {
            (None, None, _) => self.finite(g).map(AnyPath::Finite),
            (Some(_), None, _) => self.left_infinite(g).map(AnyPath::Left),
            (None, Some(_), _) => self.right_infinite(g).map(AnyPath::Right),
            (Some(l), Some(r), None) if l == r && self.middle.is_empty() => {
                self.left_infinite(g).map(AnyPath::Left)
            }
            _ => self.bi_infinite(g).map(AnyPath::Bi),
        }
    }
}

pub fn parse_left(g: &Graph, text: &str) -> Result<LeftInfinitePath, PathError> {
    PathLiteral::parse(g, text)?.left_infinite(g)
}

pub fn parse_right(g: &Graph, text: &str) -> Result<RightInfinitePath, PathError> {
    PathLiteral::parse(g, text)?.right_infinite(g)
}

pub fn parse_bi(g: &Graph, text: &str) -> Result<BiInfinitePath, PathError> {
    PathLiteral::parse(g, text)?.bi_infinite(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::asymmetric;

    #[test]
    fn literals_on_the_asymmetric_graph() {
        let g = asymmetric();
        let x = parse_left(&g, "(1)^inf").unwrap();
        assert_eq!(x.cycle().len(), 1);
        assert!(matches!(
            PathLiteral::parse(&g, "(12)^inf"),
            Err(PathError::JunctionMismatch(_))
        ));
        let y = parse_left(&g, "(23)^inf").unwrap();
        assert_eq!(y.display(&g).to_string(), "(2.3)^inf");
        let r = parse_right(&g, "2.3 . (1)^inf").unwrap();
        assert_eq!(r.display(&g).to_string(), "2.3 . (1)^inf");
        assert!(parse_left(&g, "(1)^inf . 3").is_err());
    }

    #[test]
    fn normal_forms_absorb_into_cycles() {
        let g = asymmetric();
        let a = parse_left(&g, "(23)^inf . 2.3.2").unwrap();
        let b = parse_left(&g, "(3.2)^inf").unwrap();
        assert_eq!(a, b);
        let c = parse_left(&g, "(2.3.2.3)^inf").unwrap();
        assert_eq!(c.cycle().len(), 2);
        let r1 = parse_right(&g, "1.2.3 . (2.3)^inf").unwrap();
        let r2 = parse_right(&g, "1 . (2.3)^inf").unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn shift_rotates_cycles() {
        let g = asymmetric();
        let x = parse_left(&g, "(23)^inf").unwrap();
        assert_eq!(x.shift(), parse_left(&g, "(32)^inf").unwrap());
        let one = parse_left(&g, "(1)^inf").unwrap();
        assert_eq!(one.shift(), one);
        let y = parse_left(&g, "(1)^inf . 2.4").unwrap();
        assert_eq!(y.shift(), parse_left(&g, "(1)^inf . 2").unwrap());
    }

    #[test]
    fn bi_infinite_normal_form_is_canonical() {
        let g = asymmetric();
        let x = parse_bi(&g, "(1)^inf . 1.2.3 . (2.3)^inf @ 0").unwrap();
        let y = parse_bi(&g, "(1)^inf . 2.3.2.3 . (2.3)^inf @ 1").unwrap();
        assert_eq!(x, y);
        assert_eq!(x.anchor(), 1);
        assert!(x.center().is_empty());
        for i in -10..10 {
            assert_eq!(x.edge_at(i), y.edge_at(i));
        }
        let periodic = parse_bi(&g, "(1)^inf . 1.1 . (1)^inf @ 7").unwrap();
        assert_eq!(periodic, parse_bi(&g, "(1)^inf @ 0").unwrap());
    }

    #[test]
    fn truncations_and_suffixes() {
        let g = asymmetric();
        let x = parse_bi(&g, "(1)^inf . 2.4 . (1)^inf @ 0").unwrap();
        let t = x.truncate_left(0);
        assert_eq!(t, parse_left(&g, "(1)^inf . 2").unwrap());
        assert_eq!(x.truncate_left(-3), parse_left(&g, "(1)^inf").unwrap());
        let s = x.suffix_from(1);
        assert_eq!(s, parse_right(&g, "4 . (1)^inf").unwrap());
        assert_eq!(x.suffix_from(5), parse_right(&g, "(1)^inf").unwrap());
    }
}
