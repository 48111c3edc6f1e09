//! Germs `[x, m, g, n, y]` of the groupoid of the action.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use super::{act_infinite, DynamicsError};
use crate::automaton::{Automaton, Element};
use crate::machine::{Bounds, StateMachine};
use crate::paths::{PathLiteral, RightInfinitePath};

/// A germ with `ς^m(x) = g · ς^n(y)`, checked on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Germ {
    x: RightInfinitePath,
    m: usize,
    g: Element,
    n: usize,
    y: RightInfinitePath,
}

impl Germ {
    pub fn new(
        aut: &Arc<Automaton>,
        x: RightInfinitePath,
        m: usize,
        g: Element,
        n: usize,
        y: RightInfinitePath,
        bounds: Bounds,
    ) -> Result<Germ, DynamicsError> {
        let tail = y.drop_front(n);
        if g.dom() != tail.range(aut.graph()) {
            return Err(DynamicsError::InvalidGerm(format!(
                "d({}) is not the range of the tail of y",
                aut.format_element(&g)
            )));
        }
        if act_infinite(aut, &g, &tail, bounds)? != x.drop_front(m) {
            return Err(DynamicsError::InvalidGerm(format!(
                "{} does not carry the tail of y onto the tail of x",
                aut.format_element(&g)
            )));
        }
        Ok(Germ { x, m, g, n, y })
    }

    /// Parses `x ; m ; g ; n ; y`.
    pub fn parse(aut: &Arc<Automaton>, text: &str, bounds: Bounds) -> Result<Germ, DynamicsError> {
        let parts: Vec<&str> = text.split(';').map(str::trim).collect();
        let [x, m, g, n, y] = parts[..] else {
            return Err(DynamicsError::InvalidGerm("expected `x ; m ; g ; n ; y`".into()));
        };
        let graph = aut.graph();
        let x = PathLiteral::parse(graph, x)?.right_infinite(graph)?;
        let y = PathLiteral::parse(graph, y)?.right_infinite(graph)?;
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| DynamicsError::InvalidGerm(format!("`{s}` is not a natural number")))
        };
        let (m, n) = (num(m)?, num(n)?);
        let g = aut.parse_element(g)?;
        Germ::new(aut, x, m, g, n, y, bounds)
    }

    pub fn x(&self) -> &RightInfinitePath {
        &self.x
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn g(&self) -> &Element {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn y(&self) -> &RightInfinitePath {
        &self.y
    }

    pub fn display<'a>(&'a self, aut: &'a Automaton) -> impl fmt::Display + 'a {
        GermDisplay { germ: self, aut }
    }
}

struct GermDisplay<'a> {
    germ: &'a Germ,
    aut: &'a Automaton,
}

impl fmt::Display for GermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.aut.graph();
        write!(
            f,
            "[{} ; {} ; {} ; {} ; {}]",
            self.germ.x.display(g),
            self.germ.m,
            self.aut.format_element(&self.germ.g),
            self.germ.n,
            self.germ.y.display(g)
        )
    }
}

/// `[x,m,g,n,y] = [w,p,h,q,z]` iff `x = w`, `y = z`, `m - n = p - q` and
/// `g|_{y(n,l)} = h|_{y(q,l)}` for some `l >= max(n, q)`.
pub fn germ_equal(aut: &Arc<Automaton>, a: &Germ, b: &Germ, bounds: Bounds) -> Result<bool, DynamicsError> {
    if a.x != b.x || a.y != b.y || a.m as i128 - a.n as i128 != b.m as i128 - b.n as i128 {
        return Ok(false);
    }
    let y = &a.y;
    let machine = StateMachine::closure(aut, &[a.g.clone(), b.g.clone()], bounds)?;
    let mut sg = machine.seed_state(0);
    let mut sh = machine.seed_state(1);
    let start = a.n.max(b.n);
    for i in a.n + 1..=start {
        sg = machine.step(sg, y.edge_at(i)).expect("valid germ").1;
    }
    for i in b.n + 1..=start {
        sh = machine.step(sh, y.edge_at(i)).expect("valid germ").1;
    }
    let head = y.head().len();
    let q = y.period();
    let mut seen = HashSet::new();
    let mut l = start;
    loop {
        if sg == sh {
            return Ok(true);
        }
        if l >= head && !seen.insert(((l - head) % q, sg, sh)) {
            return Ok(false);
        }
        let e = y.edge_at(l + 1);
        sg = machine.step(sg, e).expect("valid germ").1;
        sh = machine.step(sh, e).expect("valid germ").1;
        l += 1;
    }
}
