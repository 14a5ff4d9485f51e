//! The worked example used throughout the docs and tests: an 11-vertex tree
//! with costs in fifths, and a hand-built strategy for it of cost 11/5.

use std::collections::BTreeMap;

use crate::decision::DecisionTree;
use crate::scalar::{CostScalar, Rational};
use crate::tree::TreeInstance;

/// Edges of the example tree, 1-based.
pub const FIG1_EDGES: [(usize, usize); 10] =
    [(1, 2), (1, 3), (1, 4), (2, 5), (2, 6), (4, 7), (4, 8), (7, 9), (9, 10), (10, 11)];

/// Costs of v1..v11 as numerators over 5.
pub const FIG1_FIFTHS: [i64; 11] = [1, 2, 1, 1, 3, 4, 5, 2, 3, 1, 4];

pub fn fig1() -> TreeInstance<Rational> {
    fig1_with()
}

/// The example tree with costs in any scalar type.
pub fn fig1_with<C: CostScalar>() -> TreeInstance<C> {
    let edges = FIG1_EDGES.iter().map(|&(u, v)| (u - 1, v - 1)).collect();
    let costs = FIG1_FIFTHS.iter().map(|&p| C::from_ratio(p, 5)).collect();
    TreeInstance::new(edges, costs).expect("example tree is valid")
}

/// The example strategy: v4 first, then v5/v8/v9, and so on (1-based in the
/// listing below, 0-based in the returned tree).
pub fn fig2_tree() -> DecisionTree {
    let listing: [(usize, &[usize]); 6] = [
        (4, &[5, 8, 9]),
        (5, &[1]),
        (1, &[2, 3]),
        (2, &[6]),
        (9, &[7, 11]),
        (11, &[10]),
    ];
    let children: BTreeMap<usize, Vec<usize>> = listing
        .iter()
        .map(|&(q, cs)| (q - 1, cs.iter().map(|c| c - 1).collect()))
        .collect();
    DecisionTree::from_parts(3, children)
}
