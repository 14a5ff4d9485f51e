//! Cost-level recursion: an `O(log log n)`-approximate strategy whose running
//! time is exponential only in the number of heavy modules.
//!
//! Costs are normalized to a maximum of 1 and `(0, 1]` is cut into doubling
//! levels starting at `(0, 1/log2 n]`. A call on a candidate subtree at level
//! `(a, b]` works as follows:
//!
//! 1. If the level is the lowest one, or every vertex costs more than `a`,
//!    query by a minimal vertex ranking and stop.
//! 2. If no vertex costs more than `a`, drop to the next level.
//! 3. Otherwise pick one vertex per heavy module (`X`), add the branch points
//!    of the subtree spanning `X` (`Y`), and the cheapest vertex strictly
//!    between each pair of adjacent `Y` vertices (`Z`). Contract the tree onto
//!    `Z` and solve that small auxiliary tree exactly. Every component of the
//!    rest now holds at most one heavy module; its ranking strategy is hung
//!    below the deepest queried neighbor, and the light pieces around it are
//!    solved recursively one level down and hung the same way.
//!
//! Each level descended adds at most `4 OPT`, and the base case costs at
//! most `2 OPT`, which gives the `(4d + 2) OPT` bound recorded in
//! [`ApproxStats::depth_d`].

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::decision::{validate_decision_tree, worst_path_cost, DecisionTree};
use crate::error::{Error, Result};
use crate::exact::{opt_exact, SolveLimits};
use crate::modularity::heavy_modules_within;
use crate::ranking::ranking_based_dt;
use crate::scalar::CostScalar;
use crate::tree::{TreeInstance, VertexSet};

/// One half-open cost interval `(lower, upper]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostLevel {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CostLevelSchedule {
    pub n: usize,
    /// Ascending; the first starts at 0, the last ends at 1.
    pub levels: Vec<CostLevel>,
}

impl CostLevelSchedule {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }
}

/// Doubling cost levels for a tree on `n >= 2` vertices. The first upper
/// endpoint is the largest binary64 value not exceeding `1 / log2 n`.
pub fn cost_levels(n: usize) -> Result<CostLevelSchedule> {
    if n < 2 {
        return Err(Error::InvalidSize { n });
    }
    let mut upper = floor_inverse_log2(n).min(1.0);
    let mut lower = 0.0;
    let mut levels = vec![CostLevel { lower, upper }];
    while upper < 1.0 {
        lower = upper;
        upper = (2.0 * upper).min(1.0);
        levels.push(CostLevel { lower, upper });
    }
    Ok(CostLevelSchedule { n, levels })
}

/// `ceil(log2 log2 n) + 1`, the most levels a run on `n` vertices can
/// descend; 1 for `n <= 2`.
pub fn level_depth_bound(n: usize) -> usize {
    // Smallest m with 2^(2^m) >= n.
    let mut m = 0;
    while m < 6 && (1u128 << (1u32 << m)) < n as u128 {
        m += 1;
    }
    m + 1
}

const FIXED_BITS: u64 = 256;

/// Largest binary64 value `<= 1 / log2 n`, for `n >= 2`.
///
/// `log2 n` is evaluated in 256-bit fixed point via
/// `ln r = 2 atanh((r - 1) / (r + 1))` after splitting off the power of two,
/// so the result is exact up to a margin far below one ulp.
pub fn floor_inverse_log2(n: usize) -> f64 {
    assert!(n >= 2);
    let one = BigInt::one() << FIXED_BITS;
    let k = (usize::BITS - 1 - n.leading_zeros()) as u64;
    let inverse = if n.is_power_of_two() {
        one / BigInt::from(k)
    } else {
        let pow = BigInt::from(1usize << k);
        let n = BigInt::from(n);
        let ln_r = atanh_fixed(&(&n - &pow), &(&n + &pow)) << 1;
        let ln2 = atanh_fixed(&BigInt::one(), &BigInt::from(3)) << 1;
        let log2 = (BigInt::from(k) << FIXED_BITS) + (ln_r << FIXED_BITS) / ln2;
        // Truncation errors are a few hundred units; the margin dwarfs them.
        &one * &one / log2 - (BigInt::one() << 32)
    };
    fixed_to_f64_floor(&inverse)
}

/// `atanh(p / q)` scaled by `2^FIXED_BITS`, for `0 <= p / q < 1`.
fn atanh_fixed(p: &BigInt, q: &BigInt) -> BigInt {
    let mut term = (BigInt::one() << FIXED_BITS) * p / q;
    let (p2, q2) = (p * p, q * q);
    let mut sum = BigInt::zero();
    let mut j = 1u32;
    while !term.is_zero() {
        sum += &term / j;
        term = term * &p2 / &q2;
        j += 2;
    }
    sum
}

/// Rounds a non-negative fixed-point value down to binary64.
fn fixed_to_f64_floor(x: &BigInt) -> f64 {
    let bits = x.bits();
    let (mantissa, shift) = if bits > 53 { (x >> (bits - 53), bits - 53) } else { (x.clone(), 0) };
    let m = mantissa.to_u64().expect("53-bit mantissa") as f64;
    m * 2f64.powi(shift as i32 - FIXED_BITS as i32)
}

/// Vertex sets cutting a candidate subtree into pieces with at most one heavy
/// module each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorSets {
    /// One representative per heavy module.
    pub x: VertexSet,
    /// `x` plus the branch points of the subtree spanning `x`.
    pub y: VertexSet,
    /// `y` plus the cheapest vertex strictly between each adjacent pair.
    pub z: VertexSet,
}

/// Builds `X`, `Y` and `Z` for the connected vertex set `sub` at threshold
/// `a`. Representatives are the most expensive vertex of each module and
/// path minima break ties by smallest id.
pub fn separator_sets<C: CostScalar>(inst: &TreeInstance<C>, sub: &[usize], a: &C) -> Result<SeparatorSets> {
    let modules = heavy_modules_within(inst, sub, a).modules;
    if modules.is_empty() {
        return Err(Error::NoHeavyVertex);
    }
    let pick = |set: &[usize], better: &dyn Fn(&C, &C) -> bool| {
        set.iter().copied().fold(None, |best: Option<usize>, v| match best {
            Some(b) if !better(inst.cost(v), inst.cost(b)) => Some(b),
            _ => Some(v),
        })
    };
    let mut x: VertexSet = modules.iter().map(|m| pick(m, &|c, b| c > b).expect("module non-empty")).collect();
    x.sort_unstable();

    // Root the candidate subtree at a representative; a vertex lies on the
    // spanning subtree of X iff its own subtree contains a representative.
    let inside = inst.mask(sub);
    let root = x[0];
    let mut parent = vec![usize::MAX; inst.n()];
    let mut order = vec![root];
    let mut queue = VecDeque::from([root]);
    let mut seen = vec![false; inst.n()];
    seen[root] = true;
    while let Some(u) = queue.pop_front() {
        for &w in inst.neighbors(u) {
            if inside[w] && !seen[w] {
                seen[w] = true;
                parent[w] = u;
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    let mut spans = inst.mask(&x);
    for &v in order.iter().rev() {
        if spans[v] && v != root {
            spans[parent[v]] = true;
        }
    }
    let in_y = |v: usize, spans: &[bool]| {
        spans[v] && inst.neighbors(v).iter().filter(|&&w| inside[w] && spans[w]).count() >= 3
    };
    let mut y: VertexSet = order.iter().copied().filter(|&v| x.contains(&v) || in_y(v, &spans)).collect();
    y.sort_unstable();
    let y_mask = inst.mask(&y);

    let mut z = y.clone();
    for &v in &y {
        if v == root {
            continue;
        }
        let mut between = Vec::new();
        let mut u = parent[v];
        while !y_mask[u] {
            between.push(u);
            u = parent[u];
        }
        between.sort_unstable();
        if let Some(m) = pick(&between, &|c, b| c < b) {
            z.push(m);
        }
    }
    z.sort_unstable();
    Ok(SeparatorSets { x, y, z })
}

/// The tree on `Z` joining two of its vertices whenever the tree path
/// between them has no other `Z` vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxiliaryTree {
    /// `Z`, ascending; auxiliary vertex `i` is original vertex `vertices[i]`.
    pub vertices: VertexSet,
    /// Edges in original ids, `u < v`, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl AuxiliaryTree {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Map from auxiliary ids to original ids.
    pub fn back_map(&self) -> &[usize] {
        &self.vertices
    }

    /// Standalone instance with the original costs.
    pub fn to_instance<C: CostScalar>(&self, inst: &TreeInstance<C>) -> Result<TreeInstance<C>> {
        let idx = |v: usize| self.vertices.binary_search(&v).expect("edge endpoint in Z");
        let edges = self.edges.iter().map(|&(u, v)| (idx(u), idx(v))).collect();
        let costs = self.vertices.iter().map(|&v| inst.cost(v).clone()).collect();
        TreeInstance::new(edges, costs)
    }
}

pub fn auxiliary_tree<C: CostScalar>(inst: &TreeInstance<C>, z: &[usize]) -> Result<AuxiliaryTree> {
    let mut vertices = z.to_vec();
    vertices.sort_unstable();
    vertices.dedup();
    if vertices.is_empty() {
        return Err(Error::AuxiliaryNotATree);
    }
    let in_z = inst.mask(&vertices);
    let mut edges = Vec::new();
    for &u in &vertices {
        let mut seen = vec![false; inst.n()];
        seen[u] = true;
        let mut queue = VecDeque::from([u]);
        while let Some(p) = queue.pop_front() {
            for &w in inst.neighbors(p) {
                if seen[w] {
                    continue;
                }
                seen[w] = true;
                if in_z[w] {
                    if u < w {
                        edges.push((u, w));
                    }
                } else {
                    queue.push_back(w);
                }
            }
        }
    }
    edges.sort_unstable();
    let aux = AuxiliaryTree { vertices, edges };
    if aux.edges.len() + 1 != aux.vertices.len() || aux.to_instance(inst).is_err() {
        return Err(Error::AuxiliaryNotATree);
    }
    Ok(aux)
}

/// A decision tree under construction for the candidate set `universe`.
/// Some responses may not have a child yet.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialDecisionTree {
    pub universe: VertexSet,
    pub tree: DecisionTree,
}

impl PartialDecisionTree {
    pub fn new(mut universe: VertexSet, tree: DecisionTree) -> Self {
        universe.sort_unstable();
        PartialDecisionTree { universe, tree }
    }

    /// Candidate set when the query at the end of `path` is asked.
    fn candidates_along<C: CostScalar>(&self, inst: &TreeInstance<C>, path: &[usize]) -> Result<VertexSet> {
        let mut set = self.universe.clone();
        for pair in path.windows(2) {
            let (q, next) = (pair[0], pair[1]);
            set = inst
                .split_components(&set, q)?
                .into_iter()
                .find(|c| c.binary_search(&next).is_ok())
                .ok_or(Error::QueryOutsideCandidate { vertex: next })?;
        }
        Ok(set)
    }
}

/// Hangs `sub_dt` below the deepest query to a neighbor of `w`, on the
/// response branch that contains `w`. Returns that query.
///
/// The queried neighbors of `w` must lie on one root-to-leaf path; anything
/// else means the partial tree was assembled wrongly and is reported as
/// [`Error::NotAPath`].
pub fn attach_subtree<C: CostScalar>(
    d: &mut PartialDecisionTree,
    inst: &TreeInstance<C>,
    w: &[usize],
    sub_dt: DecisionTree,
) -> Result<usize> {
    let queried = inst.mask(&d.tree.vertices());
    if let Some(&v) = w.iter().find(|&&v| queried[v]) {
        return Err(Error::AlreadyQueried { vertex: v });
    }
    let in_w = inst.mask(w);
    let mut touching: Vec<usize> = w
        .iter()
        .flat_map(|&v| inst.neighbors(v).iter().copied())
        .filter(|&u| !in_w[u] && queried[u])
        .collect();
    touching.sort_unstable();
    touching.dedup();
    if touching.is_empty() {
        return Err(Error::NoNeighborQueried);
    }
    let paths: Vec<Vec<usize>> = touching
        .iter()
        .map(|&q| d.tree.path_to(q).expect("queried vertex is in the tree"))
        .collect();
    let deepest = paths.iter().max_by_key(|p| p.len()).expect("non-empty").clone();
    if !touching.iter().all(|q| deepest.contains(q)) {
        return Err(Error::NotAPath);
    }
    let anchor = *deepest.last().expect("non-empty path");

    let cands = d.candidates_along(inst, &deepest)?;
    let branch = inst
        .split_components(&cands, anchor)?
        .into_iter()
        .find(|c| c.binary_search(&w[0]).is_ok())
        .ok_or(Error::QueryOutsideCandidate { vertex: w[0] })?;
    if w.iter().any(|v| branch.binary_search(v).is_err()) {
        return Err(Error::NotAPath);
    }
    if d.tree.children(anchor).iter().any(|c| branch.binary_search(c).is_ok()) {
        return Err(Error::BranchOccupied { vertex: anchor });
    }
    if let Some(v) = sub_dt.vertices().into_iter().find(|&v| !in_w[v]) {
        return Err(Error::VertexNotInCandidate { vertex: v });
    }
    d.tree.graft(anchor, sub_dt);
    Ok(anchor)
}

/// Record of one separator step.
#[derive(Clone, Debug, PartialEq)]
pub struct MainStep<C> {
    /// Index into the cost-level schedule.
    pub level: usize,
    /// Heavy means costing strictly more than this, in the instance's units.
    pub threshold: C,
    pub sub: VertexSet,
    /// Heavy modules of `sub` at this level.
    pub heavy_modules: usize,
    pub separators: SeparatorSets,
    pub aux_size: usize,
    /// Optimal cost of the auxiliary tree, in the instance's cost units.
    pub aux_opt: C,
    /// Largest number of heavy modules found in one component of `sub - Z`.
    pub max_modules_per_component: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BaseCase {
    pub level: usize,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxStats<C> {
    /// Levels descended from the top call to the deepest base case.
    pub depth_d: usize,
    pub level_count: usize,
    pub steps: Vec<MainStep<C>>,
    pub base_cases: Vec<BaseCase>,
}

impl<C> ApproxStats<C> {
    pub fn max_aux_size(&self) -> usize {
        self.steps.iter().map(|s| s.aux_size).max().unwrap_or(0)
    }

    /// `4 d + 2`.
    pub fn ratio_bound(&self) -> usize {
        4 * self.depth_d + 2
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxResult<C> {
    pub tree: DecisionTree,
    pub stats: ApproxStats<C>,
}

pub fn create_decision_tree<C: CostScalar>(inst: &TreeInstance<C>) -> Result<ApproxResult<C>> {
    create_decision_tree_with(inst, SolveLimits::default())
}

/// As [`create_decision_tree`], with a state cap for the auxiliary solves.
pub fn create_decision_tree_with<C: CostScalar>(
    inst: &TreeInstance<C>,
    limits: SolveLimits,
) -> Result<ApproxResult<C>> {
    if inst.n() == 1 {
        let stats = ApproxStats {
            depth_d: 0,
            level_count: 0,
            steps: Vec::new(),
            base_cases: vec![BaseCase { level: 0, size: 1 }],
        };
        return Ok(ApproxResult { tree: DecisionTree::leaf(0), stats });
    }
    let schedule = cost_levels(inst.n())?;
    let mut builder = Builder {
        inst,
        scale: inst.max_cost().clone(),
        schedule: &schedule,
        limits,
        steps: Vec::new(),
        base_cases: Vec::new(),
    };
    let tree = builder.build(&inst.all_vertices(), schedule.top())?.canonical();
    validate_decision_tree(inst, &tree)?;
    let lowest = builder.base_cases.iter().map(|b| b.level).min().unwrap_or(schedule.top());
    let stats = ApproxStats {
        depth_d: schedule.top() - lowest,
        level_count: schedule.len(),
        steps: builder.steps,
        base_cases: builder.base_cases,
    };
    Ok(ApproxResult { tree, stats })
}

struct Builder<'a, C> {
    inst: &'a TreeInstance<C>,
    /// Maximum cost; thresholds are scaled by it instead of normalizing.
    scale: C,
    schedule: &'a CostLevelSchedule,
    limits: SolveLimits,
    steps: Vec<MainStep<C>>,
    base_cases: Vec<BaseCase>,
}

impl<C: CostScalar> Builder<'_, C> {
    fn threshold(&self, level: usize) -> C {
        C::from_dyadic(self.schedule.levels[level].lower) * self.scale.clone()
    }

    fn build(&mut self, sub: &[usize], level: usize) -> Result<DecisionTree> {
        let inst = self.inst;
        let a = self.threshold(level);
        let heavy = sub.iter().filter(|&&v| *inst.cost(v) > a).count();
        if level == 0 || heavy == sub.len() {
            self.base_cases.push(BaseCase { level, size: sub.len() });
            return ranking_based_dt(inst, sub);
        }
        if heavy == 0 {
            return self.build(sub, level - 1);
        }

        let separators = separator_sets(inst, sub, &a)?;
        let aux = auxiliary_tree(inst, &separators.z)?;
        let aux_inst = aux.to_instance(inst)?;
        let solved = opt_exact(&aux_inst, self.limits)?;
        let mut partial = PartialDecisionTree::new(sub.to_vec(), solved.tree.relabel(aux.back_map()));

        let in_z = inst.mask(&separators.z);
        let rest: Vec<usize> = sub.iter().copied().filter(|&v| !in_z[v]).collect();
        let mut max_modules = 0;
        for comp in inst.components_of(&rest) {
            let modules = heavy_modules_within(inst, &comp, &a).modules;
            max_modules = max_modules.max(modules.len());
            let light = match modules.as_slice() {
                [] => vec![comp],
                [module] => {
                    let dh = ranking_based_dt(inst, module)?;
                    attach_subtree(&mut partial, inst, &comp, dh)?;
                    let in_module = inst.mask(module);
                    let outside: Vec<usize> = comp.iter().copied().filter(|&v| !in_module[v]).collect();
                    inst.components_of(&outside)
                }
                _ => {
                    return Err(Error::Invariant(format!(
                        "component with {} heavy modules after separation",
                        modules.len()
                    )))
                }
            };
            for piece in light {
                let dl = self.build(&piece, level - 1)?;
                attach_subtree(&mut partial, inst, &piece, dl)?;
            }
        }

        self.steps.push(MainStep {
            level,
            threshold: a,
            sub: sub.to_vec(),
            heavy_modules: separators.x.len(),
            aux_size: aux.len(),
            aux_opt: worst_path_cost(&aux_inst, &solved.tree),
            separators,
            max_modules_per_component: max_modules,
        });
        Ok(partial.tree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::evaluate_cost;
    use crate::exact::opt_exact;
    use crate::fixtures::fig1;
    use crate::scalar::Rational;
    use std::collections::BTreeMap;

    fn r(p: i64, q: i64) -> Rational {
        Rational::from_ratio(p, q)
    }

    #[test]
    fn levels_for_sixteen_and_four() {
        let s = cost_levels(16).unwrap();
        let got: Vec<(f64, f64)> = s.levels.iter().map(|l| (l.lower, l.upper)).collect();
        assert_eq!(got, vec![(0.0, 0.25), (0.25, 0.5), (0.5, 1.0)]);
        let s = cost_levels(4).unwrap();
        let got: Vec<(f64, f64)> = s.levels.iter().map(|l| (l.lower, l.upper)).collect();
        assert_eq!(got, vec![(0.0, 0.5), (0.5, 1.0)]);
        assert!(matches!(cost_levels(1), Err(Error::InvalidSize { n: 1 })));
        assert_eq!(cost_levels(2).unwrap().len(), 1);
    }

    #[test]
    fn levels_for_eleven() {
        let b0 = floor_inverse_log2(11);
        // Frozen from the fixed-point evaluation; 1/log2(11) = 0.28906482631...
        assert_eq!(b0.to_bits(), 0x3FD2_8009_C1DD_6453);
        let s = cost_levels(11).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.levels[0].upper, b0);
        assert_eq!(s.levels[1], CostLevel { lower: b0, upper: 2.0 * b0 });
        assert_eq!(s.levels[2], CostLevel { lower: 2.0 * b0, upper: 1.0 });
    }

    #[test]
    fn inverse_log_matches_high_precision_table() {
        // Largest binary64 <= 1/log2(n), from an independent 400-bit
        // evaluation.
        let table: [(usize, u64); 15] = [
            (3, 0x3FE4_3093_9835_353D),
            (5, 0x3FDB_9034_6905_0F72),
            (6, 0x3FD8_C232_46DC_0A9F),
            (7, 0x3FD6_CC19_3ACE_A9B4),
            (8, 0x3FD5_5555_5555_5555),
            (10, 0x3FD3_4413_509F_79FE),
            (11, 0x3FD2_8009_C1DD_6453),
            (12, 0x3FD1_DA33_8341_6063),
            (14, 0x3FD0_CF3F_FED2_D6AB),
            (50, 0x3FC6_ADF5_9C6E_689C),
            (100, 0x3FC3_4413_509F_79FE),
            (200, 0x3FC0_BED7_6D1B_56BD),
            (1000, 0x3FB9_B019_C0D4_A2A9),
            (12345, 0x3FB2_D5C9_AC84_D947),
            (1 << 20, 0x3FA9_9999_9999_9999),
        ];
        for (n, bits) in table {
            assert_eq!(floor_inverse_log2(n).to_bits(), bits, "n={n}");
        }
        for n in 2..3000usize {
            let b = floor_inverse_log2(n);
            let approx = 1.0 / (n as f64).log2();
            assert!((b - approx).abs() <= 4.0 * f64::EPSILON * approx, "n={n}");
        }
    }

    #[test]
    fn depth_bound_values() {
        let expect = [(1, 1), (2, 1), (3, 2), (4, 2), (5, 3), (16, 3), (17, 4), (256, 4), (257, 5), (1 << 20, 6)];
        for (n, d) in expect {
            assert_eq!(level_depth_bound(n), d, "n={n}");
        }
        for n in 2..5000 {
            assert!(cost_levels(n).unwrap().top() <= level_depth_bound(n), "n={n}");
        }
    }

    #[test]
    fn separators_on_light_middle_path() {
        let t = TreeInstance::path(vec![r(1, 1), r(1, 10), r(1, 1)]).unwrap();
        let s = separator_sets(&t, &t.all_vertices(), &r(1, 2)).unwrap();
        assert_eq!(s.x, vec![0, 2]);
        assert_eq!(s.y, vec![0, 2]);
        assert_eq!(s.z, vec![0, 1, 2]);
        let aux = auxiliary_tree(&t, &s.z).unwrap();
        assert_eq!(aux.edges, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn separators_with_one_module() {
        let t = TreeInstance::path(vec![r(1, 10), r(1, 1), r(3, 4), r(1, 10)]).unwrap();
        let s = separator_sets(&t, &t.all_vertices(), &r(1, 2)).unwrap();
        assert_eq!((s.x.clone(), s.y.clone(), s.z.clone()), (vec![1], vec![1], vec![1]));
        let aux = auxiliary_tree(&t, &s.z).unwrap();
        assert!(aux.edges.is_empty());
        let t1 = TreeInstance::path(vec![r(1, 10); 2]).unwrap();
        assert!(matches!(separator_sets(&t1, &[0, 1], &r(1, 2)), Err(Error::NoHeavyVertex)));
    }

    /// Spider: centre 0 (cost 1/10), legs 0-1-2-3, 0-4-5, 0-6 with heavy
    /// tips 3, 5 and 6.
    fn spider() -> TreeInstance<Rational> {
        let edges = vec![(0, 1), (1, 2), (2, 3), (0, 4), (4, 5), (0, 6)];
        let costs = vec![r(1, 10), r(1, 5), r(1, 8), r(1, 1), r(1, 4), r(1, 1), r(1, 1)];
        TreeInstance::new(edges, costs).unwrap()
    }

    #[test]
    fn separators_on_spider() {
        let t = spider();
        let s = separator_sets(&t, &t.all_vertices(), &r(1, 2)).unwrap();
        assert_eq!(s.x, vec![3, 5, 6]);
        assert_eq!(s.y, vec![0, 3, 5, 6]);
        // Leg 1 interior {1, 2}: cheapest is 2; leg 2 interior {4}; leg 3 none.
        assert_eq!(s.z, vec![0, 2, 3, 4, 5, 6]);
        let aux = auxiliary_tree(&t, &s.z).unwrap();
        assert_eq!(aux.edges, vec![(0, 2), (0, 4), (0, 6), (2, 3), (4, 5)]);
        assert!(aux.len() <= 4 * 3 - 3);
    }

    #[test]
    fn auxiliary_tree_rejects_unclosed_sets() {
        let t = TreeInstance::star(vec![r(1, 1); 4]).unwrap();
        assert!(matches!(auxiliary_tree(&t, &[1, 2, 3]), Err(Error::AuxiliaryNotATree)));
        assert_eq!(auxiliary_tree(&t, &[2]).unwrap().edges, vec![]);
    }

    #[test]
    fn attach_below_only_neighbor() {
        let t = TreeInstance::star(vec![r(1, 1); 4]).unwrap();
        let mut d = PartialDecisionTree::new(t.all_vertices(), DecisionTree::leaf(0));
        assert_eq!(attach_subtree(&mut d, &t, &[2], DecisionTree::leaf(2)).unwrap(), 0);
        assert_eq!(d.tree.children(0), &[2]);
        assert!(matches!(
            attach_subtree(&mut d, &t, &[2], DecisionTree::leaf(2)),
            Err(Error::AlreadyQueried { vertex: 2 })
        ));
    }

    #[test]
    fn attach_picks_deepest_neighbor() {
        // On the figure tree, query v4, then v9, then v11. The light piece
        // {v10} touches v9 (depth 2) and v11 (depth 3).
        let t = fig1();
        let partial = DecisionTree::from_parts(3, BTreeMap::from([(3, vec![8]), (8, vec![10])]));
        let mut d = PartialDecisionTree::new(t.all_vertices(), partial);
        assert_eq!(attach_subtree(&mut d, &t, &[9], DecisionTree::leaf(9)).unwrap(), 10);
        // v7 hangs off v9 on a different branch from v11.
        assert_eq!(attach_subtree(&mut d, &t, &[6], DecisionTree::leaf(6)).unwrap(), 8);
        assert!(matches!(
            attach_subtree(&mut d, &t, &[0, 1, 2, 4, 5], DecisionTree::leaf(0)),
            Ok(3)
        ));
        assert!(matches!(
            attach_subtree(&mut d, &t, &[7], DecisionTree::leaf(6)),
            Err(Error::VertexNotInCandidate { vertex: 6 })
        ));
    }

    #[test]
    fn attach_errors() {
        let t = TreeInstance::path(vec![r(1, 1); 5]).unwrap();
        // v4 already answers the branch {v2, ..., v5} of v1.
        let tree = DecisionTree::from_parts(0, BTreeMap::from([(0, vec![3])]));
        let mut d = PartialDecisionTree::new(t.all_vertices(), tree);
        assert!(matches!(
            attach_subtree(&mut d, &t, &[1], DecisionTree::leaf(1)),
            Err(Error::BranchOccupied { vertex: 0 })
        ));
        let mut d = PartialDecisionTree::new(t.all_vertices(), DecisionTree::leaf(0));
        assert!(matches!(
            attach_subtree(&mut d, &t, &[3], DecisionTree::leaf(3)),
            Err(Error::NoNeighborQueried)
        ));
        // Neighbors v1 and v5 sit on sibling branches below v3.
        let tree = DecisionTree::from_parts(2, BTreeMap::from([(2, vec![0, 4])]));
        let mut d = PartialDecisionTree::new(t.all_vertices(), tree);
        assert!(matches!(
            attach_subtree(&mut d, &t, &[1, 3], DecisionTree::leaf(1)),
            Err(Error::NotAPath)
        ));
        assert_eq!(attach_subtree(&mut d, &t, &[1], DecisionTree::leaf(1)).unwrap(), 0);
    }

    #[test]
    fn uniform_costs_take_the_ranking_strategy() {
        let t = TreeInstance::path(vec![r(1, 1); 7]).unwrap();
        let out = create_decision_tree(&t).unwrap();
        assert_eq!(evaluate_cost(&t, &out.tree).unwrap(), r(3, 1));
        assert!(out.stats.steps.is_empty());
        assert_eq!(out.stats.depth_d, 0);
    }

    #[test]
    fn single_vertex_is_one_query() {
        let t = TreeInstance::path(vec![r(3, 7)]).unwrap();
        let out = create_decision_tree(&t).unwrap();
        assert_eq!(out.tree, DecisionTree::leaf(0));
        assert_eq!(evaluate_cost(&t, &out.tree).unwrap(), r(3, 7));
    }

    #[test]
    fn figure_tree_within_bound() {
        let t = fig1();
        let out = create_decision_tree(&t).unwrap();
        let cost = evaluate_cost(&t, &out.tree).unwrap();
        let opt = opt_exact(&t, SolveLimits::default()).unwrap().cost;
        let bound = Rational::from_i64(out.stats.ratio_bound() as i64) * opt;
        assert!(cost <= bound, "{cost} > {bound}");
        assert!(out.stats.depth_d < out.stats.level_count);
        for step in &out.stats.steps {
            assert!(step.aux_size <= 4 * step.heavy_modules - 3);
            assert!(step.max_modules_per_component <= 1);
        }
    }

    #[test]
    fn spider_runs_a_separator_step() {
        let t = spider();
        let out = create_decision_tree(&t).unwrap();
        assert!(!out.stats.steps.is_empty());
        let opt = opt_exact(&t, SolveLimits::default()).unwrap().cost;
        let cost = evaluate_cost(&t, &out.tree).unwrap();
        assert!(cost <= Rational::from_i64(out.stats.ratio_bound() as i64) * opt);
    }
}
