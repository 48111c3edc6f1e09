//! Dynamics on eventually periodic paths: asymptotic equivalence, the
//! shift, fixed-point deciders, recurrence and the solenoid relations.
//!
//! Every decider reduces to a finite product of a periodic path with a
//! finite state machine, so all answers are exact once the machines exist.

mod ae;
mod fixed;
mod germ;
mod run_graph;
mod solenoid;
mod transitivity;

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::automaton::{Automaton, AutomatonError, Element};
use crate::graph::EdgeId;
use crate::machine::{Bounds, ClosureError, StateId, StateMachine};
use crate::paths::{PathError, RightInfinitePath};

pub use ae::{ae_class, ae_equivalent, ae_equivalent_bi, ae_witness, shift_class, AeWitness};
pub use fixed::{discerning_path, fixed_edge_digraph, is_hausdorff, is_regular, FixedArc, FixedWitness};
pub use germ::{germ_equal, Germ};
pub use solenoid::{stable_equivalent, stable_witness, unstable_equivalent, UnstableWitness};
pub use transitivity::{check_recurrent, level_transitive, Recurrence, DEFAULT_RECURRENCE_DEPTH};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Closure(#[from] ClosureError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("the element is not defined at the range of the path")]
    DomainMismatch,
    #[error("invalid germ: {0}")]
    InvalidGerm(String),
    #[error("the graph is not strongly connected")]
    NotStronglyConnected,
}

/// Runs state `s` along `y`, returning `s · y` or `None` when `d(s) != r(y)`.
pub fn run_right(m: &StateMachine, s: StateId, y: &RightInfinitePath) -> Option<RightInfinitePath> {
    let h = y.head().len();
    let q = y.period();
    let mut seen: HashMap<(StateId, usize), usize> = HashMap::new();
    let mut out: Vec<EdgeId> = Vec::new();
    let mut cur = s;
    let mut i = 1;
    loop {
        if i > h {
            let key = (cur, (i - h - 1) % q);
            if let Some(&i0) = seen.get(&key) {
                let cycle = out[i0 - 1..].to_vec();
                out.truncate(i0 - 1);
                return Some(RightInfinitePath::normalized(out, cycle));
            }
            seen.insert(key, i);
        }
        let (f, t) = m.step(cur, y.edge_at(i))?;
        out.push(f);
        cur = t;
        i += 1;
    }
}

/// `g · y` for an eventually periodic right-infinite path.
pub fn act_infinite(
    aut: &Arc<Automaton>,
    g: &Element,
    y: &RightInfinitePath,
    bounds: Bounds,
) -> Result<RightInfinitePath, DynamicsError> {
    if g.dom() != y.range(aut.graph()) {
        return Err(DynamicsError::DomainMismatch);
    }
    let m = StateMachine::closure(aut, std::slice::from_ref(g), bounds)?;
    Ok(run_right(&m, m.seed_state(0), y).expect("domain checked"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::tests::ex310;
    use crate::paths::parse_right;

    #[test]
    fn act_on_eventually_periodic_paths() {
        let aut = Arc::new(ex310());
        let g = aut.graph();
        let a = aut.generator("a").unwrap();
        let y = parse_right(g, "1 . (1)^inf").unwrap();
        let img = act_infinite(&aut, &a, &y, Bounds::default()).unwrap();
        assert_eq!(img, parse_right(g, "4 . (1)^inf").unwrap());
        let z = parse_right(g, "(2.3)^inf").unwrap();
        let img = act_infinite(&aut, &a, &z, Bounds::default()).unwrap();
        let prefix = aut.act(&a, &crate::graph::Path::from_edges(g, &z.prefix(12)).unwrap()).unwrap();
        assert_eq!(img.prefix(12), prefix.edges());
    }
}
