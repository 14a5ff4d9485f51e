//! Tree instances: an undirected tree together with a positive query cost per
//! vertex, plus the component splitting that defines query responses.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::scalar::{max_cost, CostScalar};

/// Sorted list of 0-based vertex ids.
pub type VertexSet = Vec<usize>;

#[derive(Clone, Debug, PartialEq)]
pub struct TreeInstance<C> {
    costs: Vec<C>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl<C: CostScalar> TreeInstance<C> {
    /// Checks that `edges` form a spanning tree on `0..costs.len()` and that
    /// every cost is strictly positive.
    pub fn new(edges: Vec<(usize, usize)>, costs: Vec<C>) -> Result<Self> {
        let n = costs.len();
        if n == 0 {
            return Err(Error::NotATree("no vertices".into()));
        }
        if edges.len() != n - 1 {
            return Err(Error::NotATree(format!(
                "{} edges on {} vertices, expected {}",
                edges.len(),
                n,
                n - 1
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::UnknownVertex { vertex: u.max(v) });
            }
            if u == v {
                return Err(Error::NotATree(format!("self loop at v{}", u + 1)));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let inst = TreeInstance { costs, edges, adj };
        // n - 1 edges plus connectivity rules out cycles and duplicate edges.
        let reached = inst.reach(0, |_| true).len();
        if reached != n {
            return Err(Error::NotATree(format!("disconnected: {reached} of {n} vertices reachable")));
        }
        let zero = C::zero();
        if let Some(v) = inst.costs.iter().position(|c| *c <= zero) {
            return Err(Error::NonPositiveCost { vertex: v });
        }
        Ok(inst)
    }

    /// Path `0 - 1 - ... - (n-1)` with the given costs.
    pub fn path(costs: Vec<C>) -> Result<Self> {
        let edges = (1..costs.len()).map(|i| (i - 1, i)).collect();
        Self::new(edges, costs)
    }

    /// Star centred at vertex 0.
    pub fn star(costs: Vec<C>) -> Result<Self> {
        let edges = (1..costs.len()).map(|i| (0, i)).collect();
        Self::new(edges, costs)
    }

    pub fn n(&self) -> usize {
        self.costs.len()
    }

    pub fn cost(&self, v: usize) -> &C {
        &self.costs[v]
    }

    pub fn costs(&self) -> &[C] {
        &self.costs
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbors of `v`, ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn all_vertices(&self) -> VertexSet {
        (0..self.n()).collect()
    }

    pub fn max_cost(&self) -> &C {
        max_cost(&self.costs).expect("instance has at least one vertex")
    }

    /// Divides every cost by the maximum cost. Returns the normalized
    /// instance and the divisor.
    pub fn normalize(&self) -> (Self, C) {
        let scale = self.max_cost().clone();
        let inst = self.map_costs(|c| c.clone() / scale.clone());
        (inst, scale)
    }

    pub fn map_costs<D: CostScalar>(&self, f: impl Fn(&C) -> D) -> TreeInstance<D> {
        TreeInstance {
            costs: self.costs.iter().map(f).collect(),
            edges: self.edges.clone(),
            adj: self.adj.clone(),
        }
    }

    /// Membership mask over all vertices.
    pub fn mask(&self, set: &[usize]) -> Vec<bool> {
        let mut m = vec![false; self.n()];
        for &v in set {
            m[v] = true;
        }
        m
    }

    /// Vertices reachable from `start` through vertices accepted by `allowed`
    /// (`start` itself is always included). Sorted ascending.
    fn reach(&self, start: usize, allowed: impl Fn(usize) -> bool) -> VertexSet {
        let mut seen = vec![false; self.n()];
        seen[start] = true;
        let mut out = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if !seen[w] && allowed(w) {
                    seen[w] = true;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Connected components of the forest induced by `set`, each sorted,
    /// ordered by smallest vertex id.
    pub fn components_of(&self, set: &[usize]) -> Vec<VertexSet> {
        let inside = self.mask(set);
        let mut done = vec![false; self.n()];
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        let mut comps = Vec::new();
        for &v in &sorted {
            if done[v] {
                continue;
            }
            let comp = self.reach(v, |w| inside[w]);
            for &w in &comp {
                done[w] = true;
            }
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected_set(&self, set: &[usize]) -> bool {
        !set.is_empty() && self.components_of(set).len() == 1
    }

    /// Responses to querying `v` while `candidate` is the candidate set: the
    /// components of `candidate` minus `v`, ordered by smallest vertex id.
    pub fn split_components(&self, candidate: &[usize], v: usize) -> Result<Vec<VertexSet>> {
        if v >= self.n() {
            return Err(Error::UnknownVertex { vertex: v });
        }
        if !candidate.contains(&v) {
            return Err(Error::VertexNotInCandidate { vertex: v });
        }
        let rest: Vec<usize> = candidate.iter().copied().filter(|&u| u != v).collect();
        Ok(self.components_of(&rest))
    }

    /// The sub-instance induced by a connected vertex set, relabeled to
    /// `0..set.len()` in ascending id order. Returns it with the map from new
    /// ids back to ids of `self`.
    pub fn induced(&self, set: &[usize]) -> Result<(Self, Vec<usize>)> {
        let mut back: Vec<usize> = set.to_vec();
        back.sort_unstable();
        back.dedup();
        if back.iter().any(|&v| v >= self.n()) || !self.is_connected_set(&back) {
            return Err(Error::NotConnected);
        }
        let mut fwd = vec![usize::MAX; self.n()];
        for (i, &v) in back.iter().enumerate() {
            fwd[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| fwd[u] != usize::MAX && fwd[v] != usize::MAX)
            .map(|&(u, v)| (fwd[u], fwd[v]))
            .collect();
        let costs = back.iter().map(|&v| self.costs[v].clone()).collect();
        Ok((Self::new(edges, costs)?, back))
    }
}
