//! Exact optimal strategies for small trees.
//!
//! `OPT(S) = min over v in S of c(v) + max over components C of S - v of
//! OPT(C)`, with an empty maximum counting as zero. Every candidate set that
//! can arise is a connected vertex set, so the recursion is memoized on the
//! set itself.
//!
//! Trees with few connected sets (paths, caterpillars) are solved outright.
//! For bushy trees the count explodes, so the search becomes branch and bound:
//! each call gets a budget, stops as soon as it cannot beat it, and memoizes
//! the lower bound it learned. Every target must be queried, which gives a
//! cheap lower bound to cut with. [`SolveLimits`] caps the memo so that hard
//! instances fail with an error instead of hanging.

use std::collections::HashMap;
use std::hash::Hash;
use std::ops::{Add, Sub};

use num_traits::{One, Zero};

use crate::decision::{worst_path_cost, DecisionTree};
use crate::error::{Error, Result};
use crate::ranking::ranking_based_dt;
use crate::scalar::CostScalar;
use crate::tree::TreeInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveLimits {
    /// Cap on candidate sets visited without a solved memo entry. A set the
    /// search has to revisit with a larger budget counts again.
    pub max_states: usize,
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits { max_states: 5_000_000 }
    }
}

impl SolveLimits {
    pub fn new(max_states: usize) -> Self {
        SolveLimits { max_states: max_states.max(1) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactSolution<C> {
    pub cost: C,
    /// An optimal strategy; among optimal first queries the smallest id wins
    /// at every candidate set.
    pub tree: DecisionTree,
    /// Candidate sets memoized during the solve.
    pub states: usize,
}

pub fn opt_exact<C: CostScalar>(inst: &TreeInstance<C>, limits: SolveLimits) -> Result<ExactSolution<C>> {
    let n = inst.n();
    let (tree, states) = match (n <= 128, C::common_integers(inst.costs())) {
        (true, Some(ints)) => run::<u128, u128, _>(inst, ints.into_iter().map(u128::from).collect(), limits),
        (true, None) => run::<u128, C, _>(inst, inst.costs().to_vec(), limits),
        (false, Some(ints)) => run::<WideMask, u128, _>(inst, ints.into_iter().map(u128::from).collect(), limits),
        (false, None) => run::<WideMask, C, _>(inst, inst.costs().to_vec(), limits),
    }?;
    let cost = worst_path_cost(inst, &tree);
    Ok(ExactSolution { cost, tree, states })
}

/// Optimum for the subtree induced by a connected vertex set; the returned
/// tree uses the ids of `inst`.
pub fn opt_exact_within<C: CostScalar>(
    inst: &TreeInstance<C>,
    set: &[usize],
    limits: SolveLimits,
) -> Result<ExactSolution<C>> {
    let (sub, back) = inst.induced(set)?;
    let sol = opt_exact(&sub, limits)?;
    Ok(ExactSolution { tree: sol.tree.relabel(&back), ..sol })
}

/// Arithmetic the search needs; implemented by machine integers and by every
/// cost scalar.
trait Weight: Clone + PartialOrd + Add<Output = Self> + Sub<Output = Self> + Zero + One {}

impl<W: Clone + PartialOrd + Add<Output = W> + Sub<Output = W> + Zero + One> Weight for W {}

fn run<M: VertexMask, W: Weight, C: CostScalar>(
    inst: &TreeInstance<C>,
    costs: Vec<W>,
    limits: SolveLimits,
) -> Result<(DecisionTree, usize)> {
    let n = inst.n();
    let adj = (0..n).map(|v| inst.neighbors(v).to_vec()).collect();
    // Any strategy's cost is an upper bound; the ranking strategy is a cheap
    // and usually decent one. Searching strictly below `bound + 1` keeps it
    // reachable, so the optimum is always found.
    let ranking = ranking_based_dt(inst, &inst.all_vertices())?;
    let bound = worst_path(&ranking, &costs) + W::one();
    let budgeted = connected_subsets(inst) > PLAIN_SEARCH_MAX_SETS;
    let mut solver = Solver { n, adj, costs, memo: HashMap::new(), limit: limits.max_states, visited: 0, budgeted, top: bound.clone() };
    let mut all = M::empty(n);
    for v in 0..n {
        all.insert(v);
    }
    if !solver.solve(&all, &bound)?.1 {
        return Err(Error::Invariant("exact search missed the known upper bound".into()));
    }
    let states = solver.memo.len();
    Ok((solver.reconstruct(&all), states))
}

/// Below this many connected vertex sets the search runs without budgets.
const PLAIN_SEARCH_MAX_SETS: f64 = (1u64 << 20) as f64;

/// Number of connected vertex sets of the tree, as a float since it can be
/// astronomically large. Rooted anywhere, the sets whose top vertex is `v`
/// number `prod over children w of (1 + f(w))`.
fn connected_subsets<C: CostScalar>(inst: &TreeInstance<C>) -> f64 {
    let n = inst.n();
    let mut parent = vec![usize::MAX; n];
    let mut order = vec![0];
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        for &w in inst.neighbors(u) {
            if w != parent[u] {
                parent[w] = u;
                order.push(w);
            }
        }
        i += 1;
    }
    let mut f = vec![1.0f64; n];
    for &v in order.iter().rev() {
        if v != 0 {
            f[parent[v]] *= 1.0 + f[v];
        }
    }
    f.iter().sum()
}

fn worst_path<W: Weight>(d: &DecisionTree, costs: &[W]) -> W {
    let mut worst = W::zero();
    let mut stack = vec![(d.root(), costs[d.root()].clone())];
    while let Some((v, acc)) = stack.pop() {
        if acc > worst {
            worst = acc.clone();
        }
        for &c in d.children(v) {
            stack.push((c, acc.clone() + costs[c].clone()));
        }
    }
    worst
}

fn keep_min<W: PartialOrd>(slot: &mut Option<W>, w: W) {
    if slot.as_ref().is_none_or(|m| w < *m) {
        *slot = Some(w);
    }
}

/// Memo entry: the optimum with its first query, or only a lower bound
/// learned from a search that was cut off.
#[derive(Clone)]
enum Entry<W> {
    Exact(W, usize),
    AtLeast(W),
}

struct Solver<M, W> {
    n: usize,
    adj: Vec<Vec<usize>>,
    costs: Vec<W>,
    memo: HashMap<M, Entry<W>>,
    limit: usize,
    visited: usize,
    /// Pass shrinking budgets down. Without budgets every reachable set is
    /// solved once and exactly, which is faster when there are few of them.
    budgeted: bool,
    /// Strict upper bound on the optimum of every set.
    top: W,
}

impl<M: VertexMask, W: Weight> Solver<M, W> {
    /// Optimum of `set` if it is below `beta`, flagged exact; otherwise a
    /// lower bound that is at least `beta`.
    fn solve(&mut self, set: &M, beta: &W) -> Result<(W, bool)> {
        let known = match self.memo.get(set) {
            Some(Entry::Exact(w, _)) => return Ok((w.clone(), true)),
            Some(Entry::AtLeast(w)) => Some(w.clone()),
            None => None,
        };
        if self.visited >= self.limit {
            return Err(Error::StateLimitExceeded { limit: self.limit });
        }
        self.visited += 1;
        let members = set.ones();
        let mut lower = self.lower_bound(&members);
        if let Some(w) = known {
            if w > lower {
                lower = w;
            }
        }
        if lower >= *beta {
            return Ok((lower, false));
        }

        let mut cutoff = beta.clone();
        let mut best = None;
        // Smallest lower bound among the branches that were cut off.
        let mut floor: Option<W> = None;
        for &v in &members {
            let base = self.costs[v].clone();
            if base >= cutoff {
                keep_min(&mut floor, base);
                continue;
            }
            let budget = if self.budgeted { cutoff.clone() - base.clone() } else { self.top.clone() };
            let mut worst = W::zero();
            let mut exact = true;
            for comp in self.split(set, v) {
                let (w, comp_exact) = self.solve(&comp, &budget)?;
                if w > worst {
                    worst = w;
                }
                if !comp_exact || base.clone() + worst.clone() >= cutoff {
                    exact = false;
                    break;
                }
            }
            let total = base + worst;
            if exact {
                cutoff = total;
                best = Some(v);
            } else {
                keep_min(&mut floor, total);
            }
        }
        let (value, exact, entry) = match best {
            Some(v) => (cutoff.clone(), true, Entry::Exact(cutoff, v)),
            None => {
                let bound = floor.expect("candidate set is non-empty");
                let bound = if bound > lower { bound } else { lower };
                (bound.clone(), false, Entry::AtLeast(bound))
            }
        };
        self.memo.insert(set.clone(), entry);
        Ok((value, exact))
    }

    /// Every target must itself be queried, and every target other than the
    /// first query also pays for that query.
    fn lower_bound(&self, members: &[usize]) -> W {
        let (mut top, mut second, mut cheapest) = (W::zero(), W::zero(), None::<(W, usize)>);
        let mut top_at = usize::MAX;
        for &v in members {
            let c = &self.costs[v];
            if *c > top {
                second = std::mem::replace(&mut top, c.clone());
                top_at = v;
            } else if *c > second {
                second = c.clone();
            }
            if cheapest.as_ref().is_none_or(|(m, _)| c < m) {
                cheapest = Some((c.clone(), v));
            }
        }
        match cheapest {
            None => W::zero(),
            Some(_) if members.len() == 1 => top,
            Some((c, v)) => {
                // First query r: the rest still pay at least their own maximum.
                let other = if v == top_at { second.clone() } else { top.clone() };
                let via_cheapest = c + other;
                let via_top = top + second;
                if via_cheapest < via_top {
                    via_cheapest
                } else {
                    via_top
                }
            }
        }
    }

    /// Components of `set - v`, ordered by smallest vertex.
    fn split(&self, set: &M, v: usize) -> Vec<M> {
        let mut comps: Vec<(usize, M)> = Vec::with_capacity(self.adj[v].len());
        let mut stack = Vec::new();
        for &start in &self.adj[v] {
            if !set.contains(start) {
                continue;
            }
            let mut comp = M::empty(self.n);
            let mut low = start;
            comp.insert(start);
            stack.push((start, v));
            while let Some((u, from)) = stack.pop() {
                for &w in &self.adj[u] {
                    if w != from && set.contains(w) {
                        comp.insert(w);
                        low = low.min(w);
                        stack.push((w, u));
                    }
                }
            }
            comps.push((low, comp));
        }
        comps.sort_unstable_by_key(|&(low, _)| low);
        comps.into_iter().map(|(_, c)| c).collect()
    }

    fn first_query(&self, set: &M) -> usize {
        match self.memo.get(set) {
            Some(Entry::Exact(_, v)) => *v,
            _ => unreachable!("sets on optimal branches are solved exactly"),
        }
    }

    fn reconstruct(&self, all: &M) -> DecisionTree {
        let mut children = std::collections::BTreeMap::new();
        let mut stack = vec![all.clone()];
        let mut root = None;
        while let Some(set) = stack.pop() {
            let v = self.first_query(&set);
            root.get_or_insert(v);
            let comps = self.split(&set, v);
            children.insert(v, comps.iter().map(|c| self.first_query(c)).collect::<Vec<_>>());
            stack.extend(comps);
        }
        DecisionTree::from_parts(root.expect("non-empty"), children)
    }
}

/// Vertex subsets used as memo keys.
trait VertexMask: Clone + Eq + Hash {
    fn empty(n: usize) -> Self;
    fn insert(&mut self, v: usize);
    fn contains(&self, v: usize) -> bool;
    fn ones(&self) -> Vec<usize>;
}

impl VertexMask for u128 {
    fn empty(_: usize) -> Self {
        0
    }
    fn insert(&mut self, v: usize) {
        *self |= 1 << v;
    }
    fn contains(&self, v: usize) -> bool {
        *self >> v & 1 == 1
    }
    fn ones(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.count_ones() as usize);
        let mut m = *self;
        while m != 0 {
            out.push(m.trailing_zeros() as usize);
            m &= m - 1;
        }
        out
    }
}

/// Bitset for trees with more than 128 vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
struct WideMask(Box<[u64]>);

impl VertexMask for WideMask {
    fn empty(n: usize) -> Self {
        WideMask(vec![0; n.div_ceil(64)].into_boxed_slice())
    }
    fn insert(&mut self, v: usize) {
        self.0[v / 64] |= 1 << (v % 64);
    }
    fn contains(&self, v: usize) -> bool {
        self.0[v / 64] >> (v % 64) & 1 == 1
    }
    fn ones(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &w) in self.0.iter().enumerate() {
            let mut m = w;
            while m != 0 {
                out.push(i * 64 + m.trailing_zeros() as usize);
                m &= m - 1;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::{evaluate_cost, validate_decision_tree};
    use crate::fixtures::{fig1, fig2_tree};
    use crate::scalar::Rational;

    fn r(p: i64, q: i64) -> Rational {
        Rational::from_ratio(p, q)
    }

    /// Minimum worst-case cost by enumerating every valid decision tree,
    /// with no memoization or pruning.
    fn brute_force(inst: &TreeInstance<Rational>, set: &[usize]) -> Rational {
        set.iter()
            .map(|&v| {
                let worst = inst
                    .split_components(set, v)
                    .unwrap()
                    .iter()
                    .map(|c| brute_force(inst, c))
                    .fold(r(0, 1), |a, b| if b > a { b } else { a });
                inst.cost(v).clone() + worst
            })
            .reduce(|a, b| if b < a { b } else { a })
            .unwrap()
    }

    #[test]
    fn single_vertex() {
        let t = TreeInstance::path(vec![r(3, 7)]).unwrap();
        let s = opt_exact(&t, SolveLimits::default()).unwrap();
        assert_eq!(s.cost, r(3, 7));
        assert_eq!(s.tree, DecisionTree::leaf(0));
    }

    #[test]
    fn unit_path_of_seven() {
        let t = TreeInstance::path(vec![r(1, 1); 7]).unwrap();
        assert_eq!(brute_force(&t, &t.all_vertices()), r(3, 1));
        let s = opt_exact(&t, SolveLimits::default()).unwrap();
        assert_eq!(s.cost, r(3, 1));
        assert_eq!(evaluate_cost(&t, &s.tree).unwrap(), s.cost);
    }

    #[test]
    fn figure_optimum_is_pinned() {
        let t = fig1();
        let oracle = brute_force(&t, &t.all_vertices());
        let s = opt_exact(&t, SolveLimits::default()).unwrap();
        assert_eq!(s.cost, oracle);
        assert_eq!(s.cost, r(9, 5));
        assert!(s.cost <= evaluate_cost(&t, &fig2_tree()).unwrap());
        validate_decision_tree(&t, &s.tree).unwrap();
        assert_eq!(evaluate_cost(&t, &s.tree).unwrap(), s.cost);
    }

    #[test]
    fn float_costs_agree_with_rational() {
        let t = crate::fixtures::fig1_with::<f64>();
        let s = opt_exact(&t, SolveLimits::default()).unwrap();
        assert!((s.cost - 1.8).abs() < 1e-12);
    }

    #[test]
    fn counts_connected_sets() {
        let unit = |n| vec![r(1, 1); n];
        // Paths: n(n+1)/2 intervals. Stars: 2^(n-1) sets with the centre,
        // plus n - 1 single leaves.
        assert_eq!(connected_subsets(&TreeInstance::path(unit(7)).unwrap()), 28.0);
        assert_eq!(connected_subsets(&TreeInstance::star(unit(6)).unwrap()), 37.0);
        assert_eq!(connected_subsets(&fig1()), {
            // Brute force over all subsets of the figure tree.
            let t = fig1();
            (1u32..1 << 11)
                .filter(|m| t.is_connected_set(&(0..11).filter(|v| m >> v & 1 == 1).collect::<Vec<_>>()))
                .count() as f64
        });
    }

    #[test]
    fn budgeted_search_agrees_with_oracle() {
        // Stars with alternating costs have 2^(n-1) connected sets, which
        // switches the budgeted search on.
        let mut costs = vec![r(1, 2)];
        costs.extend((1..23).map(|i| r(1 + (i % 3), 3)));
        let t = TreeInstance::star(costs).unwrap();
        assert!(connected_subsets(&t) > PLAIN_SEARCH_MAX_SETS);
        let s = opt_exact(&t, SolveLimits::default()).unwrap();
        // Centre first, then the most expensive leaf.
        assert_eq!(s.cost, r(1, 2) + r(1, 1));
        assert_eq!(s.tree.root(), 0);
        assert!(s.states < 1000);
        let (small, _) = t.induced(&(0..8).collect::<Vec<_>>()).unwrap();
        assert_eq!(opt_exact(&small, SolveLimits::default()).unwrap().cost, brute_force(&small, &small.all_vertices()));
    }

    #[test]
    fn state_limit_is_reported() {
        let t = TreeInstance::star(vec![r(1, 1); 12]).unwrap();
        let err = opt_exact(&t, SolveLimits::new(10)).unwrap_err();
        assert!(matches!(err, Error::StateLimitExceeded { limit: 10 }));
        assert!(err.is_resource_limit());
    }

    #[test]
    fn wide_masks_match_narrow_ones() {
        // 130-vertex path; only wide masks can key it.
        let costs: Vec<Rational> = (0..130).map(|i| r(1 + (i * 7 % 5), 5)).collect();
        let t = TreeInstance::path(costs).unwrap();
        let s = opt_exact(&t, SolveLimits::default()).unwrap();
        assert_eq!(evaluate_cost(&t, &s.tree).unwrap(), s.cost);
        let (sub, _) = t.induced(&(0..10).collect::<Vec<_>>()).unwrap();
        let narrow = opt_exact(&sub, SolveLimits::default()).unwrap();
        assert_eq!(narrow.cost, brute_force(&sub, &sub.all_vertices()));
    }

    #[test]
    fn subset_solve_uses_original_ids() {
        let t = fig1();
        let set = [6, 8, 9, 10];
        let s = opt_exact_within(&t, &set, SolveLimits::default()).unwrap();
        crate::decision::validate_on(&t, &set, &s.tree).unwrap();
        assert_eq!(s.cost, brute_force(&t, &set));
    }
}
