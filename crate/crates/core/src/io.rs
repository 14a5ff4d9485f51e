//! JSON encodings of instances and decision trees.
//!
//! Vertex ids are 1-based on disk. Costs are strings such as `"3/5"` so that
//! rationals survive unchanged; plain JSON numbers are accepted on input.
//!
//! ```json
//! {"n":3,"edges":[[1,2],[2,3]],"costs":["1","1/2","1"]}
//! {"root":2,"children":{"2":[1,3]}}
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::decision::DecisionTree;
use crate::error::{Error, Result};
use crate::scalar::CostScalar;
use crate::tree::TreeInstance;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    n: usize,
    edges: Vec<[usize; 2]>,
    costs: Vec<CostField>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CostField {
    Text(String),
    Number(serde_json::Number),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDoc {
    root: usize,
    #[serde(default)]
    children: BTreeMap<usize, Vec<usize>>,
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse { line: e.line(), message: e.to_string() }
}

fn zero_based(id: usize) -> Result<usize> {
    id.checked_sub(1)
        .ok_or_else(|| Error::InvalidParameters("vertex ids are 1-based; found 0".into()))
}

pub fn instance_to_json<C: CostScalar>(inst: &TreeInstance<C>) -> String {
    let doc = InstanceDoc {
        n: inst.n(),
        edges: inst.edges().iter().map(|&(u, v)| [u + 1, v + 1]).collect(),
        costs: inst.costs().iter().map(|c| CostField::Text(c.to_string())).collect(),
    };
    serde_json::to_string(&doc).expect("instance serializes") + "\n"
}

pub fn instance_from_json<C: CostScalar>(text: &str) -> Result<TreeInstance<C>> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(parse_error)?;
    if doc.costs.len() != doc.n {
        return Err(Error::NotATree(format!("declared n = {} but {} costs given", doc.n, doc.costs.len())));
    }
    let costs = doc
        .costs
        .iter()
        .enumerate()
        .map(|(i, field)| {
            let text = match field {
                CostField::Text(s) => s.clone(),
                CostField::Number(x) => x.to_string(),
            };
            C::parse_cost(&text)
                .ok_or_else(|| Error::InvalidParameters(format!("cannot read cost `{text}` of v{}", i + 1)))
        })
        .collect::<Result<Vec<C>>>()?;
    let edges = doc
        .edges
        .iter()
        .map(|&[u, v]| Ok((zero_based(u)?, zero_based(v)?)))
        .collect::<Result<Vec<_>>>()?;
    TreeInstance::new(edges, costs)
}

pub fn decision_tree_to_json(d: &DecisionTree) -> String {
    let doc = TreeDoc {
        root: d.root() + 1,
        children: d
            .children_map()
            .iter()
            .map(|(&v, kids)| (v + 1, kids.iter().map(|k| k + 1).collect()))
            .collect(),
    };
    serde_json::to_string(&doc).expect("decision tree serializes") + "\n"
}

/// Reads a decision tree. Vertex ids are only checked for being 1-based;
/// run [`validate_decision_tree`](crate::validate_decision_tree) against an
/// instance before trusting it.
pub fn decision_tree_from_json(text: &str) -> Result<DecisionTree> {
    let doc: TreeDoc = serde_json::from_str(text).map_err(parse_error)?;
    let children = doc
        .children
        .iter()
        .map(|(&v, kids)| Ok((zero_based(v)?, kids.iter().map(|&k| zero_based(k)).collect::<Result<_>>()?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(DecisionTree::from_parts(zero_based(doc.root)?, children))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fig1, fig2_tree};
    use crate::scalar::Rational;

    #[test]
    fn figure_instance_text() {
        let text = instance_to_json(&fig1());
        assert_eq!(
            text,
            "{\"n\":11,\"edges\":[[1,2],[1,3],[1,4],[2,5],[2,6],[4,7],[4,8],[7,9],[9,10],[10,11]],\
             \"costs\":[\"1/5\",\"2/5\",\"1/5\",\"1/5\",\"3/5\",\"4/5\",\"1\",\"2/5\",\"3/5\",\"1/5\",\"4/5\"]}\n"
        );
        let back: TreeInstance<Rational> = instance_from_json(&text).unwrap();
        assert_eq!(back, fig1());
        assert_eq!(instance_to_json(&back), text);
    }

    #[test]
    fn figure_tree_text() {
        let text = decision_tree_to_json(&fig2_tree());
        assert_eq!(text, "{\"root\":4,\"children\":{\"1\":[2,3],\"2\":[6],\"4\":[5,8,9],\"5\":[1],\"9\":[7,11],\"11\":[10]}}\n");
        let back = decision_tree_from_json(&text).unwrap();
        assert_eq!(back, fig2_tree());
        assert_eq!(decision_tree_to_json(&back), text);
    }

    #[test]
    fn accepts_numbers_and_reports_lines() {
        let t: TreeInstance<Rational> =
            instance_from_json("{\"n\": 2, \"edges\": [[1, 2]], \"costs\": [1, \"1/2\"]}").unwrap();
        assert_eq!(t.cost(0), &Rational::from_i64(1));
        let err = instance_from_json::<Rational>("{\n\"n\": 2,\n\"edges\": [[1, 2]]\n,,}").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err:?}");
        let err = instance_from_json::<Rational>("{\"n\":2,\"edges\":[[0,1]],\"costs\":[\"1\",\"1\"]}").unwrap_err();
        assert!(matches!(err, Error::InvalidParameters(_)));
        let err = instance_from_json::<Rational>("{\"n\":3,\"edges\":[[1,2]],\"costs\":[\"1\",\"1\"]}").unwrap_err();
        assert!(matches!(err, Error::NotATree(_)));
        let err = instance_from_json::<Rational>("{\"n\":1,\"edges\":[],\"costs\":[\"0\"]}").unwrap_err();
        assert!(matches!(err, Error::NonPositiveCost { vertex: 0 }));
    }

    #[test]
    fn float_instances_read_fractions() {
        let t: TreeInstance<f64> = instance_from_json(&instance_to_json(&fig1())).unwrap();
        assert!((t.cost(1) - 0.4).abs() < 1e-15);
    }
}
