//! Graphviz output. Vertices print 1-based as `v<id> (c=<cost>)`.

use std::fmt::Write;

use crate::decision::DecisionTree;
use crate::scalar::CostScalar;
use crate::tree::TreeInstance;

fn node<C: CostScalar>(out: &mut String, inst: &TreeInstance<C>, v: usize) {
    writeln!(out, "  v{} [label=\"v{} (c={})\"];", v + 1, v + 1, inst.cost(v)).expect("write to string");
}

/// The tree itself, as an undirected graph.
pub fn instance_to_dot<C: CostScalar>(inst: &TreeInstance<C>) -> String {
    let mut out = String::from("graph tree {\n");
    for v in 0..inst.n() {
        node(&mut out, inst, v);
    }
    for &(u, v) in inst.edges() {
        writeln!(out, "  v{} -- v{};", u + 1, v + 1).expect("write to string");
    }
    out.push_str("}\n");
    out
}

/// A strategy as a directed graph from each query to the next ones.
pub fn decision_tree_to_dot<C: CostScalar>(inst: &TreeInstance<C>, d: &DecisionTree) -> String {
    let mut out = String::from("digraph strategy {\n");
    for v in d.vertices() {
        node(&mut out, inst, v);
    }
    for v in d.vertices() {
        for &c in d.children(v) {
            writeln!(out, "  v{} -> v{};", v + 1, c + 1).expect("write to string");
        }
    }
    out.push_str("}\n");
    out
}
