//! Nucleus computation for contracting actions.
//!
//! The core starts as the limit restrictions of the generators, their
//! inverses and the units, and grows by the limit restrictions of pairwise
//! products until it stops changing. The result is restriction-closed,
//! symmetric and absorbs the limit restrictions of all products of two of
//! its elements, which makes it the nucleus. Contraction is only
//! semi-decidable, so exhausting the bounds is reported as such and never as
//! "not contracting".

use std::collections::{BTreeMap, HashSet};
use std::sync::{Arc, Mutex};

use serde::Serialize;
use thiserror::Error;

use crate::automaton::{Automaton, Element};
use crate::machine::{Bounds, ClosureError, MachineExport, StateId, StateMachine};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundHit {
    States(usize),
    Rounds(usize),
    WordLength(usize),
}

impl std::fmt::Display for BoundHit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundHit::States(n) => write!(f, "max_states = {n}"),
            BoundHit::Rounds(n) => write!(f, "max_rounds = {n}"),
            BoundHit::WordLength(n) => write!(f, "max_word_len = {n}"),
        }
    }
}

impl From<ClosureError> for BoundHit {
    fn from(e: ClosureError) -> Self {
        match e {
            ClosureError::StateLimit(n) => BoundHit::States(n),
            ClosureError::WordLength(n) => BoundHit::WordLength(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub enum NucleusError {
    #[error("no nucleus found within {0}")]
    NotContractingWithinBound(BoundHit),
    #[error("restrictions of {k}-fold products never settle into the nucleus")]
    Diverged { k: usize },
}

impl From<ClosureError> for NucleusError {
    fn from(e: ClosureError) -> Self {
        NucleusError::NotContractingWithinBound(e.into())
    }
}

/// Limit restrictions of `g`: classes in its restriction closure that are
/// reachable from a directed cycle.
pub fn limit_restrictions(
    aut: &Arc<Automaton>,
    g: &Element,
    bounds: Bounds,
) -> Result<Vec<Element>, ClosureError> {
    let m = StateMachine::closure(aut, std::slice::from_ref(g), bounds)?;
    Ok(m.limit_states().into_iter().map(|s| m.rep(s).clone()).collect())
}

fn sorted_reps(m: &StateMachine, ids: &[StateId]) -> Vec<Element> {
    let mut reps: Vec<Element> = ids.iter().map(|&s| m.rep(s).clone()).collect();
    reps.sort_by(|a, b| a.shortlex_cmp(b));
    reps
}

fn pair_products(aut: &Automaton, xs: &[Element]) -> Vec<Element> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for h in xs {
        for g in xs {
            if let Ok(p) = aut.compose(h, g) {
                if seen.insert(p.clone()) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// The nucleus with its machine. States are ordered units first, then by
/// word length and letters.
#[derive(Debug)]
pub struct Nucleus {
    machine: StateMachine,
    inverse: Vec<StateId>,
    rounds: usize,
    bounds: Bounds,
    rk: Mutex<BTreeMap<usize, usize>>,
}

impl Nucleus {
    pub fn compute(aut: &Arc<Automaton>, bounds: Bounds) -> Result<Nucleus, NucleusError> {
        let mut seeds = aut.letter_elements();
        seeds.extend(aut.units());
        let m = StateMachine::closure(aut, &seeds, bounds)?;
        let mut core = sorted_reps(&m, &m.limit_states());
        let mut rounds = 0;
        loop {
            if rounds >= bounds.max_rounds {
                return Err(NucleusError::NotContractingWithinBound(BoundHit::Rounds(
                    bounds.max_rounds,
                )));
            }
            rounds += 1;
            let mut seeds = core.clone();
            seeds.extend(pair_products(aut, &core));
            let m = StateMachine::closure(aut, &seeds, bounds)?;
            let next = sorted_reps(&m, &m.limit_states());
            if next.len() == core.len() {
                break;
            }
            core = next;
        }
        let machine = StateMachine::closure(aut, &core, bounds)?;
        debug_assert_eq!(machine.len(), core.len());
        let mut inverse = Vec::with_capacity(machine.len());
        for s in 0..machine.len() {
            let inv = aut.inverse(machine.rep(s));
            let t = machine.classify_with(&inv, bounds)?.ok_or(NucleusError::Diverged { k: 1 })?;
            inverse.push(t);
        }
        Ok(Nucleus {
            machine,
            inverse,
            rounds,
            bounds,
            rk: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn automaton(&self) -> &Arc<Automaton> {
        self.machine.automaton()
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

    /// Product rounds the iteration needed.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn elements(&self) -> Vec<Element> {
        (0..self.len()).map(|s| self.machine.rep(s).clone()).collect()
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.len()).map(|s| self.machine.name(s)).collect()
    }

    pub fn inverse_state(&self, s: StateId) -> StateId {
        self.inverse[s]
    }

    pub fn is_unit(&self, s: StateId) -> bool {
        self.machine.is_unit(s)
    }

    /// The nucleus state equal to `g`, if any.
    pub fn classify(&self, g: &Element) -> Result<Option<StateId>, ClosureError> {
        self.machine.classify_with(g, self.bounds)
    }

    pub fn moore_diagram(&self) -> MachineExport {
        self.machine.export()
    }

    /// `R_k`: the least `j` with `h|_μ` in the nucleus for every product `h`
    /// of `k` nucleus elements and every `μ` of length `j`.
    pub fn r_k(&self, k: usize) -> Result<usize, NucleusError> {
        assert!(k >= 1, "R_k needs k >= 1");
        if let Some(&r) = self.rk.lock().expect("rk cache").get(&k) {
            return Ok(r);
        }
        let aut = self.automaton();
        let base = self.elements();
        let mut products: Vec<Element> = base.clone();
        for _ in 1..k {
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for h in &base {
                for g in &products {
                    if let Ok(p) = aut.compose(h, g) {
                        if seen.insert(p.clone()) {
                            next.push(p);
                        }
                    }
                }
            }
            products = next;
        }
        let mut seeds = base.clone();
        seeds.extend(products.iter().cloned());
        let m = StateMachine::closure(aut, &seeds, self.bounds)?;
        let inside: HashSet<StateId> = (0..base.len()).map(|i| m.seed_state(i)).collect();
        let mut r = 0;
        for i in base.len()..seeds.len() {
            let mut level = vec![m.seed_state(i)];
            let mut depth = 0;
            let mut seen_levels = HashSet::new();
            while !level.iter().all(|s| inside.contains(s)) {
                if !seen_levels.insert(level.clone()) {
                    return Err(NucleusError::Diverged { k });
                }
                let mut next: Vec<StateId> = level
                    .iter()
                    .flat_map(|&s| m.successors(s).map(|(_, _, t)| t))
                    .collect();
                next.sort_unstable();
                next.dedup();
                level = next;
                depth += 1;
            }
            r = r.max(depth);
        }
        self.rk.lock().expect("rk cache").insert(k, r);
        Ok(r)
    }

    /// The restriction closure of `N ∪ N²`.
    pub fn products_closure(&self) -> Result<StateMachine, ClosureError> {
        let aut = self.automaton();
        let base = self.elements();
        let mut seeds = base.clone();
        seeds.extend(pair_products(aut, &base));
        StateMachine::closure(aut, &seeds, self.bounds)
    }
}

/// Checks that `set` is a contracting core: restriction-closed, closed
/// under inverses, and containing every limit restriction of the letters
/// and of products of two of its elements.
pub fn is_contracting_core(aut: &Arc<Automaton>, set: &[Element], bounds: Bounds) -> Result<bool, ClosureError> {
    let mut seeds = set.to_vec();
    seeds.extend(pair_products(aut, set));
    seeds.extend(aut.letter_elements());
    let m = StateMachine::closure(aut, &seeds, bounds)?;
    let members: HashSet<StateId> = (0..set.len()).map(|i| m.seed_state(i)).collect();
    for &s in &members {
        if m.successors(s).any(|(_, _, t)| !members.contains(&t)) {
            return Ok(false);
        }
        match m.classify_with(&aut.inverse(m.rep(s)), bounds)? {
            Some(t) if members.contains(&t) => {}
            _ => return Ok(false),
        }
    }
    Ok(m.limit_states().iter().all(|s| members.contains(s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::tests::ex310;

    #[test]
    fn example_nucleus() {
        let aut = Arc::new(ex310());
        let n = Nucleus::compute(&aut, Bounds::default()).unwrap();
        assert_eq!(n.names(), ["v", "w", "a", "a^-1", "b", "b^-1"]);
        assert_eq!(n.r_k(1).unwrap(), 0);
        assert_eq!(n.r_k(2).unwrap(), 2);
        assert!(is_contracting_core(&aut, &n.elements(), Bounds::default()).unwrap());
    }

    #[test]
    fn limit_restrictions_of_a() {
        let aut = Arc::new(ex310());
        let a = aut.generator("a").unwrap();
        let mut lr: Vec<String> = limit_restrictions(&aut, &a, Bounds::default())
            .unwrap()
            .iter()
            .map(|g| aut.format_element(g))
            .collect();
        lr.sort();
        assert_eq!(lr, ["a", "b", "v", "w"]);
        let ab = aut.parse_element("ab").unwrap();
        // ab -4-> ba -1-> a: ba is a restriction of ab but lies on no cycle
        let mut lr: Vec<String> = limit_restrictions(&aut, &ab, Bounds::default())
            .unwrap()
            .iter()
            .map(|g| aut.format_element(g))
            .collect();
        lr.sort();
        assert_eq!(lr, ["a", "b", "v", "w"]);
    }
}
