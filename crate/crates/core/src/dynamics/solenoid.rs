//! Stable and unstable equivalence on the limit solenoid.
//!
//! Both relations are monotone in their cut index and the truncations are
//! periodic once the cut passes the seams, so scanning up to the first
//! periodic cut decides them.

use num_integer::Integer;

use super::ae::ae_equivalent;
use super::{run_right, DynamicsError};
use crate::automaton::Element;
use crate::nucleus::Nucleus;
use crate::paths::BiInfinitePath;

/// The least `m >= 0` with `x(-∞, -m) ∼ y(-∞, -m)`.
pub fn stable_witness(n: &Nucleus, x: &BiInfinitePath, y: &BiInfinitePath) -> Option<usize> {
    let last = (1 - x.anchor().min(y.anchor())).max(0) as usize;
    (0..=last).find(|&m| ae_equivalent(n, &x.truncate_left(-(m as i64)), &y.truncate_left(-(m as i64))))
}

pub fn stable_equivalent(n: &Nucleus, x: &BiInfinitePath, y: &BiInfinitePath) -> bool {
    stable_witness(n, x, y).is_some()
}

/// `g · x(M+1, ∞) = y(M+1, ∞)` with `g` in the restriction closure of
/// `N ∪ N²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnstableWitness {
    pub cut: usize,
    pub element: Element,
}

/// Decides unstable equivalence, returning the least cut and a witness.
pub fn unstable_equivalent(
    n: &Nucleus,
    x: &BiInfinitePath,
    y: &BiInfinitePath,
) -> Result<Option<UnstableWitness>, DynamicsError> {
    let f = n.products_closure()?;
    let g = n.automaton().graph();
    let seam = x.right_start().max(y.right_start()).max(1) as usize;
    let period = x.right_cycle().len().lcm(&y.right_cycle().len());
    for cut in 0..seam + period {
        let xs = x.suffix_from(cut as i64 + 1);
        let ys = y.suffix_from(cut as i64 + 1);
        let (from, to) = (xs.range(g), ys.range(g));
        for s in 0..f.len() {
            if f.state(s).dom() != from || f.state(s).cod() != to {
                continue;
            }
            if run_right(&f, s, &xs).as_ref() == Some(&ys) {
                return Ok(Some(UnstableWitness {
                    cut,
                    element: f.rep(s).clone(),
                }));
            }
        }
    }
    Ok(None)
}
