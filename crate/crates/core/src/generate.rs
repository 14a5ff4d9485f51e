//! Seeded random instances.
//!
//! Every generator draws from a `ChaCha8Rng` seeded with the given 64-bit
//! seed, so equal arguments always produce equal instances.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::{CostScalar, Rational};
use crate::tree::TreeInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    /// Uniform labelled tree, decoded from a random Prüfer sequence.
    RandomTree,
    Path,
    Star,
    /// Centre 0 with three or more legs of random length.
    Spider,
}

impl Shape {
    pub const ALL: [Shape; 4] = [Shape::RandomTree, Shape::Path, Shape::Star, Shape::Spider];
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::RandomTree => "random-tree",
            Shape::Path => "path",
            Shape::Star => "star",
            Shape::Spider => "spider",
        })
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random-tree" => Ok(Shape::RandomTree),
            "path" => Ok(Shape::Path),
            "star" => Ok(Shape::Star),
            "spider" => Ok(Shape::Spider),
            _ => Err(Error::InvalidParameters(format!("unknown shape `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CostModel {
    /// Every vertex costs 1.
    Uniform,
    /// Integers in `1..=100`, normalized.
    Random,
    /// Non-increasing away from a random root, so `k = 1`.
    UpMonotonic,
    /// `k` non-adjacent centres of cost 1; every other vertex costs at most
    /// 1/2 and no more than its neighbor toward the nearest centre, so the
    /// cost function is exactly `k`-up-modular.
    PlantedK(usize),
    /// `1` and `1 + eps` by parity of the distance from vertex 0, normalized.
    Alternating(Rational),
}

impl CostModel {
    /// One representative of every model, as used by the benchmark defaults.
    pub fn defaults() -> Vec<CostModel> {
        vec![
            CostModel::Uniform,
            CostModel::Random,
            CostModel::UpMonotonic,
            CostModel::PlantedK(3),
            CostModel::Alternating(Rational::from_ratio(1, 8)),
        ]
    }
}

impl fmt::Display for CostModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostModel::Uniform => f.write_str("uniform"),
            CostModel::Random => f.write_str("random"),
            CostModel::UpMonotonic => f.write_str("up-monotonic"),
            CostModel::PlantedK(k) => write!(f, "planted-k({k})"),
            CostModel::Alternating(eps) => write!(f, "alternating({eps})"),
        }
    }
}

/// Parses `uniform`, `random`, `up-monotonic`, `planted-k(K)` and
/// `alternating(EPS)`; `planted-k:K` and `alternating:EPS` also work.
impl FromStr for CostModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameters(format!("unknown cost model `{s}`"));
        let (name, arg) = match s.split_once(['(', ':']) {
            Some((name, rest)) => (name, Some(rest.strip_suffix(')').unwrap_or(rest))),
            None => (s, None),
        };
        match (name, arg) {
            ("uniform", None) => Ok(CostModel::Uniform),
            ("random", None) => Ok(CostModel::Random),
            ("up-monotonic", None) => Ok(CostModel::UpMonotonic),
            ("planted-k", Some(k)) => k.trim().parse().map(CostModel::PlantedK).map_err(|_| bad()),
            ("alternating", Some(eps)) => {
                let eps = Rational::parse_cost(eps.trim()).ok_or_else(bad)?;
                if !eps.is_positive() {
                    return Err(Error::InvalidParameters("alternating needs eps > 0".into()));
                }
                Ok(CostModel::Alternating(eps))
            }
            _ => Err(bad()),
        }
    }
}

pub fn generate_instance(shape: Shape, model: &CostModel, n: usize, seed: u64) -> Result<TreeInstance<Rational>> {
    if n == 0 {
        return Err(Error::InvalidSize { n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = generate_edges(shape, n, &mut rng);
    let skeleton = TreeInstance::new(edges.clone(), vec![Rational::one(); n])?;
    let costs = generate_costs(&skeleton, model, &mut rng)?;
    TreeInstance::new(edges, costs)
}

pub fn generate_edges(shape: Shape, n: usize, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    match shape {
        Shape::Path => (1..n).map(|v| (v - 1, v)).collect(),
        Shape::Star => (1..n).map(|v| (0, v)).collect(),
        Shape::RandomTree => random_tree(n, rng),
        Shape::Spider => spider(n, rng),
    }
}

fn random_tree(n: usize, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    if n <= 2 {
        return (1..n).map(|v| (0, v)).collect();
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    prufer_decode(&code, n)
}

/// Edges of the labelled tree with Prüfer sequence `code` on `code.len() + 2`
/// vertices.
pub fn prufer_decode(code: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &v in code {
        degree[v] += 1;
    }
    let mut leaves: std::collections::BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &v in code {
        let leaf = leaves.pop_first().expect("a leaf always exists");
        edges.push((leaf.min(v), leaf.max(v)));
        degree[v] -= 1;
        if degree[v] == 1 {
            leaves.insert(v);
        }
    }
    let rest: Vec<usize> = leaves.into_iter().collect();
    edges.push((rest[0], rest[1]));
    edges
}

fn spider(n: usize, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    if n <= 3 {
        return (1..n).map(|v| (v - 1, v)).collect();
    }
    let legs = rng.gen_range(3..=(n - 1).min(6));
    let mut lengths = vec![1usize; legs];
    for _ in legs..n - 1 {
        lengths[rng.gen_range(0..legs)] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut next = 1;
    for len in lengths {
        let mut prev = 0;
        for _ in 0..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    edges
}

fn generate_costs(inst: &TreeInstance<Rational>, model: &CostModel, rng: &mut impl Rng) -> Result<Vec<Rational>> {
    let n = inst.n();
    let ints: Vec<i64> = match model {
        CostModel::Uniform => vec![1; n],
        CostModel::Random => (0..n).map(|_| rng.gen_range(1..=100)).collect(),
        CostModel::UpMonotonic => {
            let root = rng.gen_range(0..n);
            descend(inst, &[root], 100, 100, rng)
        }
        CostModel::PlantedK(k) => {
            let centres = independent_set(inst, *k, rng)?;
            descend(inst, &centres, 100, 50, rng)
        }
        CostModel::Alternating(eps) => {
            let high = Rational::one() + eps.clone();
            return Ok(bfs(inst, &[0])
                .depth
                .iter()
                .map(|d| if d.is_even() { Rational::one() / high.clone() } else { Rational::one() })
                .collect());
        }
    };
    let top = *ints.iter().max().expect("n >= 1");
    Ok(ints.iter().map(|&c| Rational::from_ratio(c, top)).collect())
}

/// Sources cost `peak`; their neighbors at most `cap`; every other vertex
/// at most its BFS parent.
fn descend(inst: &TreeInstance<Rational>, sources: &[usize], peak: i64, cap: i64, rng: &mut impl Rng) -> Vec<i64> {
    let layers = bfs(inst, sources);
    let mut cost = vec![0i64; inst.n()];
    for &v in &layers.order {
        cost[v] = match layers.parent[v] {
            None => peak,
            Some(p) => rng.gen_range(1..=cost[p].min(cap)),
        };
    }
    cost
}

fn independent_set(inst: &TreeInstance<Rational>, k: usize, rng: &mut impl Rng) -> Result<Vec<usize>> {
    if k == 0 {
        return Err(Error::InvalidParameters("planted-k needs k >= 1".into()));
    }
    let mut order = inst.all_vertices();
    order.shuffle(rng);
    let mut blocked = vec![false; inst.n()];
    let mut picked = Vec::with_capacity(k);
    for v in order {
        if picked.len() == k {
            break;
        }
        if !blocked[v] {
            picked.push(v);
            blocked[v] = true;
            for &w in inst.neighbors(v) {
                blocked[w] = true;
            }
        }
    }
    if picked.len() < k {
        return Err(Error::InvalidParameters(format!(
            "could not place {k} non-adjacent centres on {} vertices",
            inst.n()
        )));
    }
    Ok(picked)
}

struct Layers {
    order: Vec<usize>,
    depth: Vec<usize>,
    parent: Vec<Option<usize>>,
}

/// Multi-source BFS from `sources`.
fn bfs(inst: &TreeInstance<Rational>, sources: &[usize]) -> Layers {
    let n = inst.n();
    let mut depth = vec![usize::MAX; n];
    let mut parent = vec![None; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    for &s in sources {
        depth[s] = 0;
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &w in inst.neighbors(u) {
            if depth[w] == usize::MAX {
                depth[w] = depth[u] + 1;
                parent[w] = Some(u);
                queue.push_back(w);
            }
        }
    }
    Layers { order, depth, parent }
}

/// Rounds every cost up to the nearest multiple of `step`.
pub fn round_up_to_multiple(inst: &TreeInstance<Rational>, step: &Rational) -> Result<TreeInstance<Rational>> {
    if !step.is_positive() {
        return Err(Error::InvalidParameters("rounding step must be positive".into()));
    }
    Ok(inst.map_costs(|c| (c / step).ceil() * step))
}
