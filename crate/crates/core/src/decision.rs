//! Decision trees (search strategies), their validity check against an
//! instance, and worst-case cost evaluation.
//!
//! A decision tree holds every vertex of the instance exactly once. The root
//! is the first query; each child of a query `q` is the next query after the
//! response "the target lies in component C of S(q) - q", where `S(q)` is the
//! candidate set when `q` is asked. The target itself is always queried, so
//! the root-to-`x` path is the full query sequence for target `x`.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::scalar::CostScalar;
use crate::tree::{TreeInstance, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionTree {
    root: usize,
    /// Only queries with at least one child have an entry.
    children: BTreeMap<usize, Vec<usize>>,
}

/// Candidate set at every query of a validated decision tree.
pub type CandidateSets = BTreeMap<usize, VertexSet>;

impl DecisionTree {
    pub fn leaf(v: usize) -> Self {
        DecisionTree { root: v, children: BTreeMap::new() }
    }

    /// Builds a tree from raw parts without checking it. Empty child lists
    /// are dropped.
    pub fn from_parts(root: usize, mut children: BTreeMap<usize, Vec<usize>>) -> Self {
        children.retain(|_, c| !c.is_empty());
        DecisionTree { root, children }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn children(&self, v: usize) -> &[usize] {
        self.children.get(&v).map_or(&[], Vec::as_slice)
    }

    pub fn children_map(&self) -> &BTreeMap<usize, Vec<usize>> {
        &self.children
    }

    /// Preorder listing. Stops descending at vertices already listed, so it
    /// terminates on malformed input.
    pub fn vertices(&self) -> Vec<usize> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            if !seen.insert(v) {
                continue;
            }
            out.push(v);
            stack.extend(self.children(v).iter().rev());
        }
        out
    }

    pub fn contains(&self, v: usize) -> bool {
        v == self.root || self.children.values().any(|c| c.contains(&v))
    }

    /// Maximum number of queries on a root-to-leaf path.
    pub fn depth(&self) -> usize {
        let mut best = 0;
        let mut stack = vec![(self.root, 1)];
        while let Some((v, d)) = stack.pop() {
            best = best.max(d);
            stack.extend(self.children(v).iter().map(|&c| (c, d + 1)));
        }
        best
    }

    pub fn parents(&self) -> HashMap<usize, usize> {
        self.children
            .iter()
            .flat_map(|(&p, cs)| cs.iter().map(move |&c| (c, p)))
            .collect()
    }

    /// Vertices of the subtree rooted at `v`, sorted.
    pub fn subtree(&self, v: usize) -> VertexSet {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            out.push(u);
            stack.extend_from_slice(self.children(u));
        }
        out.sort_unstable();
        out
    }

    /// Root-to-`v` path, both ends included. `None` if `v` is not in the tree.
    pub fn path_to(&self, v: usize) -> Option<Vec<usize>> {
        let parents = self.parents();
        let mut path = vec![v];
        let mut cur = v;
        while cur != self.root {
            cur = *parents.get(&cur)?;
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }

    /// Hangs `sub` below `parent` as a new child branch.
    pub fn graft(&mut self, parent: usize, sub: DecisionTree) {
        self.children.entry(parent).or_default().push(sub.root);
        for (q, cs) in sub.children {
            self.children.entry(q).or_default().extend(cs);
        }
    }

    /// Renames every vertex through `map`.
    pub fn relabel(&self, map: &[usize]) -> Self {
        DecisionTree {
            root: map[self.root],
            children: self
                .children
                .iter()
                .map(|(&q, cs)| (map[q], cs.iter().map(|&c| map[c]).collect()))
                .collect(),
        }
    }

    /// Same strategy with every child list ordered by the smallest vertex in
    /// the child's subtree.
    pub fn canonical(&self) -> Self {
        let mut smallest: HashMap<usize, usize> = HashMap::new();
        let order = self.vertices();
        for &v in order.iter().rev() {
            let m = self.children(v).iter().map(|c| smallest[c]).fold(v, usize::min);
            smallest.insert(v, m);
        }
        let children = self
            .children
            .iter()
            .map(|(&q, cs)| {
                let mut cs = cs.clone();
                cs.sort_by_key(|c| smallest[c]);
                (q, cs)
            })
            .collect();
        DecisionTree { root: self.root, children }
    }
}

/// A tree whose vertices are exactly `universe` and whose queries are all
/// strictly valid. Returns the candidate set of every query.
pub fn validate_on<C: CostScalar>(
    inst: &TreeInstance<C>,
    universe: &[usize],
    d: &DecisionTree,
) -> Result<CandidateSets> {
    let n = inst.n();
    let mut seen = vec![false; n];
    let mut order = Vec::new();
    let mut stack = vec![d.root()];
    while let Some(v) = stack.pop() {
        if v >= n {
            return Err(Error::UnknownVertex { vertex: v });
        }
        if seen[v] {
            return Err(Error::DuplicateVertex { vertex: v });
        }
        seen[v] = true;
        order.push(v);
        stack.extend(d.children(v).iter().rev());
    }
    for &u in universe {
        if u >= n {
            return Err(Error::UnknownVertex { vertex: u });
        }
        if !seen[u] {
            return Err(Error::MissingVertex { vertex: u });
        }
    }

    let mut sub: HashMap<usize, VertexSet> = HashMap::with_capacity(order.len());
    for &v in order.iter().rev() {
        let mut set = vec![v];
        for c in d.children(v) {
            set.extend_from_slice(&sub[c]);
        }
        set.sort_unstable();
        sub.insert(v, set);
    }

    let mut root_set = universe.to_vec();
    root_set.sort_unstable();
    root_set.dedup();
    let mut cands = CandidateSets::new();
    cands.insert(d.root(), root_set);
    for &q in &order {
        let s = &cands[&q];
        if s.binary_search(&q).is_err() {
            return Err(Error::QueryOutsideCandidate { vertex: q });
        }
        let comps = inst.split_components(s, q)?;
        let kids = d.children(q);
        if kids.len() != comps.len() {
            return Err(Error::ComponentMismatch { vertex: q });
        }
        let mut used = vec![false; comps.len()];
        let mut assigned = Vec::with_capacity(kids.len());
        for &c in kids {
            let Some(i) = comps.iter().position(|comp| *comp == sub[&c]) else {
                return Err(Error::ComponentMismatch { vertex: q });
            };
            if used[i] {
                return Err(Error::ComponentMismatch { vertex: q });
            }
            used[i] = true;
            assigned.push((c, i));
        }
        for (c, i) in assigned {
            cands.insert(c, comps[i].clone());
        }
    }
    Ok(cands)
}

/// Checks `d` against the whole instance.
pub fn validate_decision_tree<C: CostScalar>(
    inst: &TreeInstance<C>,
    d: &DecisionTree,
) -> Result<CandidateSets> {
    validate_on(inst, &inst.all_vertices(), d)
}

/// Worst-case total query cost over all targets.
pub fn evaluate_cost<C: CostScalar>(inst: &TreeInstance<C>, d: &DecisionTree) -> Result<C> {
    validate_decision_tree(inst, d)?;
    Ok(worst_path_cost(inst, d))
}

/// Worst root-to-leaf cost sum, without validation. Also meaningful for
/// partial trees.
pub fn worst_path_cost<C: CostScalar>(inst: &TreeInstance<C>, d: &DecisionTree) -> C {
    let mut best: Option<C> = None;
    let mut stack = vec![(d.root(), inst.cost(d.root()).clone())];
    while let Some((v, acc)) = stack.pop() {
        let kids = d.children(v);
        if kids.is_empty() {
            if best.as_ref().is_none_or(|b| acc > *b) {
                best = Some(acc);
            }
            continue;
        }
        for &c in kids {
            stack.push((c, acc.clone() + inst.cost(c).clone()));
        }
    }
    best.expect("tree has a root")
}

/// The queries asked when the target is `x`, in order, and their total cost.
#[derive(Clone, Debug, PartialEq)]
pub struct QuerySequence<C> {
    pub queries: Vec<usize>,
    pub total_cost: C,
}

pub fn query_sequence<C: CostScalar>(
    inst: &TreeInstance<C>,
    d: &DecisionTree,
    x: usize,
) -> Result<QuerySequence<C>> {
    if x >= inst.n() {
        return Err(Error::UnknownVertex { vertex: x });
    }
    validate_decision_tree(inst, d)?;
    let queries = d.path_to(x).ok_or(Error::MissingVertex { vertex: x })?;
    let total_cost = queries.iter().fold(C::zero(), |acc, &q| acc + inst.cost(q).clone());
    Ok(QuerySequence { queries, total_cost })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fig1, fig2_tree};
    use crate::scalar::Rational;

    fn r(p: i64, q: i64) -> Rational {
        Rational::from_ratio(p, q)
    }

    fn unit_path3() -> TreeInstance<Rational> {
        TreeInstance::path(vec![r(1, 1); 3]).unwrap()
    }

    #[test]
    fn figure_strategy_costs_eleven_fifths() {
        let (t, d) = (fig1(), fig2_tree());
        validate_decision_tree(&t, &d).unwrap();
        assert_eq!(evaluate_cost(&t, &d).unwrap(), r(11, 5));
        assert_eq!(d.depth(), 5);
    }

    #[test]
    fn candidate_sets_follow_responses() {
        let cands = validate_decision_tree(&fig1(), &fig2_tree()).unwrap();
        assert_eq!(cands[&4], vec![0, 1, 2, 4, 5]);
        assert_eq!(cands[&0], vec![0, 1, 2, 5]);
        assert_eq!(cands[&10], vec![9, 10]);
    }

    #[test]
    fn single_vertex() {
        let t = TreeInstance::path(vec![r(3, 7)]).unwrap();
        let d = DecisionTree::leaf(0);
        validate_decision_tree(&t, &d).unwrap();
        assert_eq!(evaluate_cost(&t, &d).unwrap(), r(3, 7));
    }

    #[test]
    fn middle_first_on_unit_path() {
        let d = DecisionTree::from_parts(1, BTreeMap::from([(1, vec![0, 2])]));
        assert_eq!(evaluate_cost(&unit_path3(), &d).unwrap(), r(2, 1));
    }

    #[test]
    fn reparented_query_is_rejected() {
        // v8 moved from below v4 to below v5.
        let mut ch = fig2_tree().children_map().clone();
        ch.get_mut(&3).unwrap().retain(|&c| c != 7);
        ch.get_mut(&4).unwrap().push(7);
        let d = DecisionTree::from_parts(3, ch);
        let err = validate_decision_tree(&fig1(), &d).unwrap_err();
        assert!(matches!(
            err,
            Error::ComponentMismatch { .. } | Error::QueryOutsideCandidate { .. }
        ));
    }

    #[test]
    fn missing_and_duplicate_vertices() {
        let t = unit_path3();
        let d = DecisionTree::from_parts(1, BTreeMap::from([(1, vec![0])]));
        assert!(matches!(validate_decision_tree(&t, &d), Err(Error::MissingVertex { vertex: 2 })));
        let d = DecisionTree::from_parts(1, BTreeMap::from([(1, vec![0, 2]), (2, vec![0])]));
        assert!(matches!(validate_decision_tree(&t, &d), Err(Error::DuplicateVertex { vertex: 0 })));
    }

    #[test]
    fn query_outside_candidate() {
        let t = unit_path3();
        let d = DecisionTree::from_parts(0, BTreeMap::from([(0, vec![2]), (2, vec![1])]));
        validate_decision_tree(&t, &d).unwrap();
        let d = DecisionTree::from_parts(0, BTreeMap::from([(0, vec![1, 2])]));
        assert!(matches!(validate_decision_tree(&t, &d), Err(Error::ComponentMismatch { vertex: 0 })));
        // Root outside the universe it is supposed to search.
        let d = DecisionTree::from_parts(0, BTreeMap::from([(0, vec![1]), (1, vec![2])]));
        assert!(matches!(validate_on(&t, &[1, 2], &d), Err(Error::QueryOutsideCandidate { vertex: 0 })));
    }

    #[test]
    fn query_sequences_match_figure() {
        let (t, d) = (fig1(), fig2_tree());
        let q = query_sequence(&t, &d, 5).unwrap();
        assert_eq!(q.queries, vec![3, 4, 0, 1, 5]);
        assert_eq!(q.total_cost, r(11, 5));
        let q = query_sequence(&t, &d, 3).unwrap();
        assert_eq!(q.queries, vec![3]);
        assert_eq!(q.total_cost, r(1, 5));
        let q = query_sequence(&t, &d, 9).unwrap();
        assert_eq!(q.queries, vec![3, 8, 10, 9]);
        assert_eq!(q.total_cost, r(9, 5));
        assert!(matches!(query_sequence(&t, &d, 11), Err(Error::UnknownVertex { vertex: 11 })));
    }

    #[test]
    fn canonical_orders_children_by_smallest_vertex() {
        let d = fig2_tree().canonical();
        assert_eq!(d.children(3), &[4, 8, 7]);
        assert_eq!(evaluate_cost(&fig1(), &d).unwrap(), r(11, 5));
    }

    #[test]
    fn works_with_float_costs() {
        let t = crate::fixtures::fig1_with::<f64>();
        let c = evaluate_cost(&t, &fig2_tree()).unwrap();
        assert!((c - 2.2).abs() < 1e-12);
    }
}
