//! Search strategies for locating a hidden target vertex in a tree when
//! querying a vertex has a non-uniform cost.
//!
//! A query to `v` costs `c(v)` and answers either "`v` is the target" or
//! "the target lies in this component of `T - v`". Strategies are
//! [`DecisionTree`]s, scored by their worst-case total query cost.
//!
//! * [`exact`] finds optimal strategies for small trees.
//! * [`ranking`] builds the optimal strategy for uniform costs from a minimal
//!   vertex ranking.
//! * [`modularity`] measures how far the costs are from monotone
//!   (k-up-modularity).
//! * [`approx`] builds strategies within `(4d + 2)` times optimal, `d` being
//!   the number of cost levels descended, which is `O(log log n)`.
//!
//! All algorithms are generic over the [`CostScalar`] type. The aliases below
//! fix it to exact rationals, which is what the verification suite uses.

pub mod approx;
pub mod bench;
pub mod decision;
pub mod dot;
pub mod error;
pub mod exact;
pub mod fixtures;
pub mod generate;
pub mod io;
pub mod modularity;
pub mod ranking;
pub mod scalar;
pub mod tree;

pub use decision::{
    evaluate_cost, query_sequence, validate_decision_tree, validate_on, DecisionTree, QuerySequence,
};
pub use error::{Error, Result};
pub use scalar::{CostScalar, Rational};
pub use tree::{TreeInstance, VertexSet};

/// Tree instance with exact rational costs.
pub type Instance = TreeInstance<Rational>;
/// Tree instance with binary64 costs.
pub type InstanceF64 = TreeInstance<f64>;
/// Query sequence with exact rational cost.
pub type Trace = QuerySequence<Rational>;
/// Heavy-module decomposition at a rational threshold.
pub type Modules = modularity::HeavyModuleDecomposition<Rational>;
/// Output of the approximation algorithm on a rational instance.
pub type Approximation = approx::ApproxResult<Rational>;
