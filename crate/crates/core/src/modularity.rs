//! Heavy modules and the k-up-modularity of a cost function.
//!
//! At threshold `t` the heavy modules are the connected components of the
//! vertices costing strictly more than `t`. `k(T, c)` is the largest number
//! of heavy modules over all thresholds; `k = 1` exactly when costs never
//! increase moving away from a most expensive vertex.

use std::collections::VecDeque;

use crate::scalar::CostScalar;
use crate::tree::{TreeInstance, VertexSet};

#[derive(Clone, Debug, PartialEq)]
pub struct HeavyModuleDecomposition<C> {
    pub threshold: C,
    /// Each module sorted; modules ordered by smallest vertex.
    pub modules: Vec<VertexSet>,
}

impl<C> HeavyModuleDecomposition<C> {
    pub fn count(&self) -> usize {
        self.modules.len()
    }
}

pub fn heavy_modules<C: CostScalar>(inst: &TreeInstance<C>, t: &C) -> HeavyModuleDecomposition<C> {
    heavy_modules_within(inst, &inst.all_vertices(), t)
}

/// Heavy modules of the subtree induced by `set`.
pub fn heavy_modules_within<C: CostScalar>(
    inst: &TreeInstance<C>,
    set: &[usize],
    t: &C,
) -> HeavyModuleDecomposition<C> {
    let heavy: Vec<usize> = set.iter().copied().filter(|&v| inst.cost(v) > t).collect();
    HeavyModuleDecomposition { threshold: t.clone(), modules: inst.components_of(&heavy) }
}

/// Thresholds at which the module count can change: zero and every distinct
/// cost, ascending.
fn sweep_thresholds<C: CostScalar>(inst: &TreeInstance<C>, set: &[usize]) -> Vec<C> {
    let mut ts: Vec<C> = vec![C::zero()];
    ts.extend(set.iter().map(|&v| inst.cost(v).clone()));
    ts.sort_by(|a, b| a.partial_cmp(b).expect("costs are comparable"));
    ts.dedup();
    ts
}

/// `k(T, c)` and the smallest threshold attaining it.
pub fn k_up_modularity<C: CostScalar>(inst: &TreeInstance<C>) -> (usize, C) {
    k_up_modularity_within(inst, &inst.all_vertices())
}

pub fn k_up_modularity_within<C: CostScalar>(inst: &TreeInstance<C>, set: &[usize]) -> (usize, C) {
    let mut best = (0, C::zero());
    for t in sweep_thresholds(inst, set) {
        let k = heavy_modules_within(inst, set, &t).count();
        if k > best.0 {
            best = (k, t);
        }
    }
    best
}

/// True if, for some most expensive vertex `z`, costs are non-increasing
/// along every path leaving `z`.
pub fn is_up_monotonic<C: CostScalar>(inst: &TreeInstance<C>) -> bool {
    let top = inst.max_cost();
    (0..inst.n()).filter(|&z| inst.cost(z) == top).any(|z| monotone_from(inst, z))
}

fn monotone_from<C: CostScalar>(inst: &TreeInstance<C>, z: usize) -> bool {
    let mut seen = vec![false; inst.n()];
    seen[z] = true;
    let mut queue = VecDeque::from([z]);
    while let Some(u) = queue.pop_front() {
        for &w in inst.neighbors(u) {
            if !seen[w] {
                if inst.cost(w) > inst.cost(u) {
                    return false;
                }
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    true
}
