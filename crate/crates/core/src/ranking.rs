//! Minimal vertex rankings of trees and the strategy they induce.
//!
//! A ranking labels vertices with positive integers so that any two vertices
//! with equal labels are separated by a strictly larger label on the path
//! between them. Querying the top-labelled vertex of every candidate subtree
//! gives a strategy whose depth is the number of labels used; with a minimal
//! ranking that strategy is optimal for uniform costs.

use std::collections::BTreeMap;

use crate::decision::DecisionTree;
use crate::error::{Error, Result};
use crate::scalar::CostScalar;
use crate::tree::TreeInstance;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ranking {
    pub labels: BTreeMap<usize, u32>,
    pub max_label: u32,
}

impl Ranking {
    pub fn label(&self, v: usize) -> u32 {
        self.labels[&v]
    }

    /// Checks the separation property on every pair of equally labelled
    /// vertices. Quadratic; meant for tests and input checking.
    pub fn is_valid<C: CostScalar>(&self, inst: &TreeInstance<C>) -> bool {
        let inside = inst.mask(&self.labels.keys().copied().collect::<Vec<_>>());
        for (&u, &lu) in &self.labels {
            // DFS from u carrying the largest label strictly between u and
            // the current vertex.
            let mut stack = vec![(u, usize::MAX, 0u32)];
            while let Some((v, parent, between)) = stack.pop() {
                let lv = self.labels[&v];
                if v != u && lv == lu && between <= lu {
                    return false;
                }
                let next = if v == u { 0 } else { between.max(lv) };
                for &w in inst.neighbors(v) {
                    if w != parent && inside[w] {
                        stack.push((w, v, next));
                    }
                }
            }
        }
        true
    }
}

/// Minimal vertex ranking of the subtree induced by `set`.
///
/// Roots the subtree at its smallest vertex and processes vertices bottom-up.
/// Each vertex keeps the set of labels still visible from above its subtree
/// (the critical list, here a bitmask). A vertex takes the smallest label
/// that is above every label visible in two or more child subtrees and is
/// not visible in any child subtree; labels it hides drop out of its list.
pub fn vertex_ranking<C: CostScalar>(inst: &TreeInstance<C>, set: &[usize]) -> Result<Ranking> {
    if set.iter().any(|&v| v >= inst.n()) || !inst.is_connected_set(set) {
        return Err(Error::NotConnected);
    }
    let inside = inst.mask(set);
    let root = *set.iter().min().expect("non-empty");

    let mut order = Vec::with_capacity(set.len());
    let mut parent = vec![usize::MAX; inst.n()];
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in inst.neighbors(v).iter().rev() {
            if inside[w] && w != parent[v] {
                parent[w] = v;
                stack.push(w);
            }
        }
    }

    let mut visible = vec![0u64; inst.n()];
    let mut labels = BTreeMap::new();
    for &v in order.iter().rev() {
        let mut any = 0u64;
        let mut twice = 0u64;
        for &w in inst.neighbors(v) {
            if inside[w] && w != parent[v] {
                twice |= any & visible[w];
                any |= visible[w];
            }
        }
        let mut bit = 64 - twice.leading_zeros();
        while any >> bit & 1 == 1 {
            bit += 1;
        }
        assert!(bit < 64, "ranking needs more than 64 labels");
        let above = if bit == 63 { 0 } else { any >> (bit + 1) << (bit + 1) };
        visible[v] = above | 1 << bit;
        labels.insert(v, bit + 1);
    }
    let max_label = labels.values().copied().max().unwrap_or(0);
    Ok(Ranking { labels, max_label })
}

/// Strategy that queries the highest-ranked vertex of each candidate subtree.
pub fn ranking_based_dt<C: CostScalar>(inst: &TreeInstance<C>, set: &[usize]) -> Result<DecisionTree> {
    let ranking = vertex_ranking(inst, set)?;
    let mut piece = set.to_vec();
    piece.sort_unstable();
    let mut children = BTreeMap::new();
    let root = build(inst, &ranking, &piece, &mut children)?;
    Ok(DecisionTree::from_parts(root, children))
}

fn build<C: CostScalar>(
    inst: &TreeInstance<C>,
    ranking: &Ranking,
    piece: &[usize],
    children: &mut BTreeMap<usize, Vec<usize>>,
) -> Result<usize> {
    let top = piece.iter().map(|&v| ranking.label(v)).max().expect("non-empty piece");
    let mut tops = piece.iter().copied().filter(|&v| ranking.label(v) == top);
    let z = tops.next().expect("maximum is attained");
    assert!(tops.next().is_none(), "maximum label must be unique in a connected piece");
    let mut kids = Vec::new();
    for comp in inst.split_components(piece, z)? {
        kids.push(build(inst, ranking, &comp, children)?);
    }
    children.insert(z, kids);
    Ok(z)
}

/// `floor(log2 m) + 1` for `m >= 1`.
pub fn log_depth_bound(m: usize) -> usize {
    (usize::BITS - m.leading_zeros()) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::{evaluate_cost, validate_on};
    use crate::scalar::Rational;

    fn unit(n: usize) -> Vec<Rational> {
        vec![Rational::from_i64(1); n]
    }

    /// Does some valid ranking of `inst` use at most `k` labels? Exhaustive.
    fn exists_ranking_with(inst: &TreeInstance<Rational>, k: u32) -> bool {
        let n = inst.n();
        let mut labels = vec![1u32; n];
        loop {
            let r = Ranking {
                labels: labels.iter().copied().enumerate().collect(),
                max_label: k,
            };
            if r.is_valid(inst) {
                return true;
            }
            let mut i = 0;
            while i < n && labels[i] == k {
                labels[i] = 1;
                i += 1;
            }
            if i == n {
                return false;
            }
            labels[i] += 1;
        }
    }

    #[test]
    fn single_vertex_gets_label_one() {
        let t = TreeInstance::path(unit(1)).unwrap();
        let r = vertex_ranking(&t, &[0]).unwrap();
        assert_eq!(r.max_label, 1);
        assert_eq!(ranking_based_dt(&t, &[0]).unwrap().depth(), 1);
    }

    #[test]
    fn path_of_seven_uses_three_labels() {
        let t = TreeInstance::path(unit(7)).unwrap();
        let r = vertex_ranking(&t, &t.all_vertices()).unwrap();
        assert_eq!(r.max_label, 3);
        assert!(r.is_valid(&t));
        assert!(!exists_ranking_with(&t, 2));
        let d = ranking_based_dt(&t, &t.all_vertices()).unwrap();
        assert_eq!(d.depth(), 3);
        assert_eq!(evaluate_cost(&t, &d).unwrap(), Rational::from_i64(3));
    }

    #[test]
    fn star_centre_outranks_leaves() {
        let t = TreeInstance::star(unit(5)).unwrap();
        let r = vertex_ranking(&t, &t.all_vertices()).unwrap();
        assert_eq!(r.label(0), 2);
        assert!((1..5).all(|v| r.label(v) == 1));
        assert_eq!(r.max_label, 2);
        assert!(!exists_ranking_with(&t, 1));
    }

    #[test]
    fn path_of_three_queries_middle_first() {
        let t = TreeInstance::path(unit(3)).unwrap();
        let d = ranking_based_dt(&t, &t.all_vertices()).unwrap();
        assert_eq!(d.root(), 1);
        assert_eq!(evaluate_cost(&t, &d).unwrap(), Rational::from_i64(2));
    }

    #[test]
    fn works_on_subsets() {
        let t = crate::fixtures::fig1();
        let set = [3, 6, 7, 8, 9, 10];
        let d = ranking_based_dt(&t, &set).unwrap();
        validate_on(&t, &set, &d).unwrap();
        assert!(d.depth() <= log_depth_bound(set.len()));
        assert!(matches!(ranking_based_dt(&t, &[6, 9]), Err(Error::NotConnected)));
    }

    #[test]
    fn is_valid_rejects_bad_labelling() {
        let t = TreeInstance::path(unit(3)).unwrap();
        let bad = Ranking { labels: BTreeMap::from([(0, 1), (1, 1), (2, 2)]), max_label: 2 };
        assert!(!bad.is_valid(&t));
    }

    #[test]
    fn log_bound_values() {
        assert_eq!(log_depth_bound(1), 1);
        assert_eq!(log_depth_bound(7), 3);
        assert_eq!(log_depth_bound(8), 4);
    }
}
