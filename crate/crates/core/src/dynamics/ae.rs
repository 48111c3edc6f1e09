//! Asymptotic equivalence of left- and bi-infinite paths via nucleus runs.
//!
//! `x ∼ y` iff there are `h_n ∈ N` (`n < 0`) with `h_n · x_n = y_n` and
//! `h_n|_{x_n} = h_{n+1}`. Past the tails both paths repeat with period
//! `L = lcm(p, q)`, so the runs live in a finite digraph: positions
//! `-1 … -(T+L)` with a wrap arc closing the periodic block. A run exists
//! iff some node at `-1` is reachable from a directed cycle.

use std::collections::{BTreeSet, HashMap};

use num_integer::Integer;

use super::run_graph::RunGraph;
use crate::graph::EdgeId;
use crate::machine::StateId;
use crate::nucleus::Nucleus;
use crate::paths::{BiInfinitePath, LeftInfinitePath};

/// A nucleus run `… cycle cycle tail` whose last state is `h_{-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AeWitness {
    pub cycle: Vec<StateId>,
    pub tail: Vec<StateId>,
}

impl AeWitness {
    /// `h_{-k}` for `k >= 1`.
    pub fn state_at(&self, k: usize) -> StateId {
        let t = self.tail.len();
        if k <= t {
            self.tail[t - k]
        } else {
            let p = self.cycle.len();
            self.cycle[p - 1 - (k - t - 1) % p]
        }
    }
}

struct LeftWindow {
    tail: usize,
    period: usize,
}

impl LeftWindow {
    fn positions(&self) -> usize {
        self.tail + self.period
    }

    /// Position index `p` stands for `x_{-(p+1)}`.
    fn next(&self, p: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(2);
        if p >= 1 {
            out.push(p - 1);
        }
        if p == self.tail {
            out.push(self.tail + self.period - 1);
        }
        out
    }

    /// Window position of `x_{-k}`.
    fn fold(&self, k: usize) -> usize {
        if k <= self.positions() {
            k - 1
        } else {
            self.tail + (k - self.tail - 1) % self.period
        }
    }
}

fn left_graph(n: &Nucleus, x: &LeftInfinitePath, y: Option<&LeftInfinitePath>) -> (RunGraph, LeftWindow) {
    let (tail, period) = match y {
        Some(y) => (x.tail().len().max(y.tail().len()), x.period().lcm(&y.period())),
        None => (x.tail().len(), x.period()),
    };
    let w = LeftWindow { tail, period };
    let xe = |p: usize| x.edge_at(p + 1);
    let ye = y.map(|y| move |p: usize| y.edge_at(p + 1));
    let g = RunGraph::build(
        n.machine(),
        w.positions(),
        &xe,
        ye.as_ref().map(|f| f as &dyn Fn(usize) -> EdgeId),
        &|p| w.next(p),
    );
    (g, w)
}

/// Decides `x ∼ y`.
pub fn ae_equivalent(n: &Nucleus, x: &LeftInfinitePath, y: &LeftInfinitePath) -> bool {
    ae_witness(n, x, y).is_some()
}

/// A nucleus run witnessing `x ∼ y`, if one exists.
pub fn ae_witness(n: &Nucleus, x: &LeftInfinitePath, y: &LeftInfinitePath) -> Option<AeWitness> {
    let (rg, _) = left_graph(n, x, Some(y));
    let cyclic = rg.cyclic();
    let pred = rg.search((0..rg.len()).filter(|&u| cyclic[u]));
    let end = (0..rg.len()).find(|&u| rg.nodes[u].0 == 0 && pred[u].is_some())?;
    let path = RunGraph::trace(&pred, end);
    let start = path[0];
    let cycle = rg.cycle_through(start);
    Some(AeWitness {
        cycle: cycle.iter().map(|&u| rg.nodes[u].1).collect(),
        tail: path[1..].iter().map(|&u| rg.nodes[u].1).collect(),
    })
}

/// Deletes the rightmost edge; well defined on classes.
pub fn shift_class(x: &LeftInfinitePath) -> LeftInfinitePath {
    x.shift()
}

/// Every `y` with `x ∼ y`, in normal form and sorted.
///
/// Live nodes (those with an infinite run to their left) are grouped level
/// by level according to the output word they produce up to `-1`. The
/// grouping evolves deterministically with the position, so it eventually
/// repeats; each class member is then a periodic point of the induced map
/// between the repeated levels.
pub fn ae_class(n: &Nucleus, x: &LeftInfinitePath) -> Vec<LeftInfinitePath> {
    let m = n.machine();
    let (rg, w) = left_graph(n, x, None);
    let cyclic = rg.cyclic();
    let pred = rg.search((0..rg.len()).filter(|&u| cyclic[u]));
    let mut live: Vec<Vec<StateId>> = vec![Vec::new(); w.positions()];
    for (u, &(p, s)) in rg.nodes.iter().enumerate() {
        if pred[u].is_some() {
            live[p].push(s);
        }
    }
    for l in &mut live {
        l.sort_unstable();
    }

    // levels[k-1][group] = (edge at -k, group at level k-1)
    let mut levels: Vec<Vec<(EdgeId, usize)>> = Vec::new();
    let mut labels_prev: HashMap<StateId, usize> = HashMap::new();
    let mut seen: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    let mut k = 1;
    let (k2, k1) = loop {
        let e = x.edge_at(k);
        let p = w.fold(k);
        let mut intern: HashMap<(EdgeId, usize), usize> = HashMap::new();
        let mut groups = Vec::new();
        let mut labels = HashMap::new();
        let mut canon = Vec::new();
        for &s in &live[p] {
            let (f, t) = m.step(s, e).expect("live node");
            let prev = if k == 1 { 0 } else { labels_prev[&t] };
            let id = *intern.entry((f, prev)).or_insert_with(|| {
                groups.push((f, prev));
                groups.len() - 1
            });
            labels.insert(s, id);
            canon.push(id);
        }
        levels.push(groups);
        labels_prev = labels;
        if k > w.tail {
            if let Some(&earlier) = seen.get(&(p, canon.clone())) {
                break (earlier, k);
            }
            seen.insert((p, canon), k);
        }
        k += 1;
    };

    // Follow a group at level `from` down to level `to`, collecting edges.
    let descend = |from: usize, mut gid: usize, to: usize| -> (usize, Vec<EdgeId>) {
        let mut word = Vec::new();
        for lvl in (to + 1..=from).rev() {
            let (e, prev) = levels[lvl - 1][gid];
            word.push(e);
            gid = prev;
        }
        (gid, word)
    };
    let ng = levels[k1 - 1].len();
    let f: Vec<usize> = (0..ng).map(|gid| descend(k1, gid, k2).0).collect();
    let mut periodic: Vec<usize> = (0..ng).collect();
    for _ in 0..ng {
        periodic = periodic.iter().map(|&g| f[g]).collect();
    }
    let periodic: BTreeSet<usize> = periodic.into_iter().collect();
    let pre: HashMap<usize, usize> = periodic.iter().map(|&g| (f[g], g)).collect();

    let mut out = BTreeSet::new();
    for &g0 in &periodic {
        let mut chain = Vec::new();
        let mut cur = g0;
        loop {
            cur = pre[&cur];
            chain.push(cur);
            if cur == g0 {
                break;
            }
        }
        let cycle: Vec<EdgeId> = chain.iter().rev().flat_map(|&g| descend(k1, g, k2).1).collect();
        let (_, suffix) = descend(k2, g0, 0);
        out.insert(LeftInfinitePath::normalized(cycle, suffix));
    }
    out.into_iter().collect()
}

/// Decides `x ∼ y` for bi-infinite paths: a nucleus run over all of `ℤ`.
pub fn ae_equivalent_bi(n: &Nucleus, x: &BiInfinitePath, y: &BiInfinitePath) -> bool {
    let left_period = x.left_cycle().len().lcm(&y.left_cycle().len()) as i64;
    let right_period = x.right_cycle().len().lcm(&y.right_cycle().len()) as i64;
    let a = x.anchor().min(y.anchor());
    let b = x.right_start().max(y.right_start());
    let lo = a - left_period;
    let hi = b + right_period;
    let positions = (hi - lo) as usize;
    let at = |p: usize| lo + p as i64;
    let xe = |p: usize| x.edge_at(at(p));
    let ye = |p: usize| y.edge_at(at(p));
    let wrap_left = (a - 1 - lo) as usize;
    let wrap_right = positions - 1;
    let next = |p: usize| {
        let mut out = Vec::with_capacity(2);
        if p + 1 < positions {
            out.push(p + 1);
        }
        if p == wrap_left {
            out.push(0);
        }
        if p == wrap_right {
            out.push((b - lo) as usize);
        }
        out
    };
    let rg = RunGraph::build(n.machine(), positions, &xe, Some(&ye), &next);
    let cyclic = rg.cyclic();
    let left = (0..rg.len()).filter(|&u| cyclic[u] && at(rg.nodes[u].0) < a);
    let pred = rg.search(left);
    (0..rg.len()).any(|u| cyclic[u] && at(rg.nodes[u].0) >= b && pred[u].is_some())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::automaton::tests::ex310;
    use crate::machine::Bounds;
    use crate::paths::{parse_bi, parse_left};

    fn nucleus() -> Nucleus {
        Nucleus::compute(&Arc::new(ex310()), Bounds::default()).unwrap()
    }

    #[test]
    fn loop_class_is_a_singleton() {
        let n = nucleus();
        let g = n.automaton().graph();
        let x = parse_left(g, "(1)^inf").unwrap();
        assert_eq!(ae_class(&n, &x), vec![x.clone()]);
        assert!(ae_equivalent(&n, &x, &x));
        let y = parse_left(g, "(1)^inf . 1").unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn witness_is_a_consistent_run() {
        let n = nucleus();
        let aut = n.automaton();
        let g = aut.graph();
        let m = n.machine();
        for text in ["(2.3)^inf", "(1)^inf . 2.4", "(3.2)^inf . 3"] {
            let x = parse_left(g, text).unwrap();
            for y in ae_class(&n, &x) {
                let wit = ae_witness(&n, &x, &y).expect("class member");
                for k in 1..40 {
                    let (f, t) = m.step(wit.state_at(k), x.edge_at(k)).unwrap();
                    assert_eq!(f, y.edge_at(k));
                    if k > 1 {
                        assert_eq!(t, wit.state_at(k - 1));
                    }
                }
            }
        }
    }

    #[test]
    fn bi_infinite_reflexive() {
        let n = nucleus();
        let g = n.automaton().graph();
        let x = parse_bi(g, "(2.3)^inf . 2.4 . (1)^inf @ -3").unwrap();
        assert!(ae_equivalent_bi(&n, &x, &x));
    }
}
