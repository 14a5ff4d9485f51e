//! Empirical approximation ratios on generated or fixed instances.
//!
//! Every instance is solved by [`create_decision_tree`]; when it is small
//! enough the exact optimum is computed too and the ratio is checked against
//! the proven `4 d + 2` bound in exact arithmetic. Instances run in parallel
//! and rows come back in seed order, so reports are reproducible apart from
//! the timing column.

use std::time::Instant;

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::approx::{create_decision_tree_with, level_depth_bound};
use crate::decision::evaluate_cost;
use crate::error::{Error, Result};
use crate::exact::{opt_exact, SolveLimits};
use crate::generate::{generate_instance, CostModel, Shape};
use crate::modularity::k_up_modularity;
use crate::scalar::{CostScalar, Rational};
use crate::tree::TreeInstance;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub count: usize,
    /// Inclusive range of tree sizes.
    pub n_min: usize,
    pub n_max: usize,
    pub shapes: Vec<Shape>,
    pub cost_models: Vec<CostModel>,
    pub seed: u64,
    /// Largest `n` for which the exact optimum is computed.
    pub exact_cap: usize,
    pub state_limit: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            count: 100,
            n_min: 2,
            n_max: 14,
            shapes: Shape::ALL.to_vec(),
            cost_models: CostModel::defaults(),
            seed: 0,
            exact_cap: 14,
            state_limit: SolveLimits::default().max_states,
        }
    }
}

impl BenchConfig {
    fn check(&self) -> Result<()> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::InvalidParameters(format!("bad size range {}..={}", self.n_min, self.n_max)));
        }
        if self.count > 0 && (self.shapes.is_empty() || self.cost_models.is_empty()) {
            return Err(Error::InvalidParameters("need at least one shape and one cost model".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub seed: u64,
    /// `shape/cost-model` for generated instances, the given name otherwise.
    pub source: String,
    pub n: usize,
    pub k: usize,
    #[serde(serialize_with = "opt_rational")]
    pub opt: Option<Rational>,
    #[serde(serialize_with = "opt_rational")]
    pub approx_cost: Option<Rational>,
    #[serde(serialize_with = "opt_rational")]
    pub ratio: Option<Rational>,
    pub depth_d: usize,
    pub max_aux_size: usize,
    pub runtime_ms: f64,
    pub error: Option<String>,
}

impl BenchRow {
    /// `Some(true)` if the ratio is known and exceeds `4 d + 2`.
    pub fn violates_bound(&self) -> Option<bool> {
        let bound = Rational::from_i64(4 * self.depth_d as i64 + 2);
        self.ratio.as_ref().map(|r| *r > bound)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchAggregates {
    pub rows: usize,
    pub rows_with_oracle: usize,
    pub errors: usize,
    /// 0 when no row has an oracle value.
    #[serde(serialize_with = "rational")]
    pub max_ratio: Rational,
    #[serde(serialize_with = "rational")]
    pub mean_ratio: Rational,
    /// Rows with ratio above `4 d + 2`.
    pub bound_violations: usize,
    /// Rows with `d` above `ceil(log2 log2 n) + 1`.
    pub depth_violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub aggregates: BenchAggregates,
}

fn rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn opt_rational<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// Runs `config.count` generated instances; instance `i` uses seed
/// `config.seed + i`.
pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    config.check()?;
    let rows = (0..config.count)
        .into_par_iter()
        .map(|i| {
            let seed = config.seed.wrapping_add(i as u64);
            match draw_instance(config, seed) {
                Ok((source, inst)) => evaluate_row(seed, source, &inst, config),
                Err(e) => error_row(seed, String::new(), 0, e),
            }
        })
        .collect();
    Ok(report(rows))
}

/// Runs the given named instances; row seeds are their positions.
pub fn run_bench_fixed(instances: &[(String, TreeInstance<Rational>)], config: &BenchConfig) -> BenchReport {
    let rows = instances
        .par_iter()
        .enumerate()
        .map(|(i, (name, inst))| evaluate_row(i as u64, name.clone(), inst, config))
        .collect();
    report(rows)
}

/// Picks size, shape and model from the seed; draws again when a model
/// cannot be realized at that size, such as too many planted centres.
fn draw_instance(config: &BenchConfig, seed: u64) -> Result<(String, TreeInstance<Rational>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for _ in 0..64 {
        let n = rng.gen_range(config.n_min..=config.n_max);
        let shape = config.shapes[rng.gen_range(0..config.shapes.len())];
        let model = &config.cost_models[rng.gen_range(0..config.cost_models.len())];
        match generate_instance(shape, model, n, seed) {
            Ok(inst) => return Ok((format!("{shape}/{model}"), inst)),
            Err(e @ Error::InvalidParameters(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn error_row(seed: u64, source: String, n: usize, e: Error) -> BenchRow {
    BenchRow {
        seed,
        source,
        n,
        k: 0,
        opt: None,
        approx_cost: None,
        ratio: None,
        depth_d: 0,
        max_aux_size: 0,
        runtime_ms: 0.0,
        error: Some(e.to_string()),
    }
}

fn evaluate_row(seed: u64, source: String, inst: &TreeInstance<Rational>, config: &BenchConfig) -> BenchRow {
    let limits = SolveLimits::new(config.state_limit);
    let n = inst.n();
    let k = k_up_modularity(inst).0;
    let start = Instant::now();
    let approx = create_decision_tree_with(inst, limits);
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let approx = match approx {
        Ok(a) => a,
        Err(e) => return BenchRow { k, ..error_row(seed, source, n, e) },
    };
    let mut row = BenchRow {
        seed,
        source,
        n,
        k,
        opt: None,
        approx_cost: None,
        ratio: None,
        depth_d: approx.stats.depth_d,
        max_aux_size: approx.stats.max_aux_size(),
        runtime_ms,
        error: None,
    };
    let cost = match evaluate_cost(inst, &approx.tree) {
        Ok(c) => c,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    if n <= config.exact_cap {
        match opt_exact(inst, limits) {
            Ok(sol) => {
                row.ratio = Some(cost.clone() / sol.cost.clone());
                row.opt = Some(sol.cost);
            }
            Err(e) => row.error = Some(e.to_string()),
        }
    }
    row.approx_cost = Some(cost);
    row
}

fn report(rows: Vec<BenchRow>) -> BenchReport {
    let ratios: Vec<&Rational> = rows.iter().filter_map(|r| r.ratio.as_ref()).collect();
    let max_ratio = ratios.iter().copied().fold(Rational::zero(), |m, r| if *r > m { r.clone() } else { m });
    let mean_ratio = if ratios.is_empty() {
        Rational::zero()
    } else {
        ratios.iter().copied().fold(Rational::zero(), |s, r| s + r) / Rational::from_i64(ratios.len() as i64)
    };
    let aggregates = BenchAggregates {
        rows: rows.len(),
        rows_with_oracle: ratios.len(),
        errors: rows.iter().filter(|r| r.error.is_some()).count(),
        max_ratio,
        mean_ratio,
        bound_violations: rows.iter().filter(|r| r.violates_bound() == Some(true)).count(),
        depth_violations: rows
            .iter()
            .filter(|r| r.error.is_none() && r.depth_d > level_depth_bound(r.n))
            .count(),
    };
    BenchReport { rows, aggregates }
}

impl BenchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// One row per instance, then the aggregates as `# name,value` lines.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "seed",
            "source",
            "n",
            "k",
            "opt",
            "approx_cost",
            "ratio",
            "ratio_f64",
            "depth_d",
            "max_aux_size",
            "runtime_ms",
            "error",
        ])
        .expect("write to memory");
        let text = |r: &Option<Rational>| r.as_ref().map(|r| r.to_string()).unwrap_or_default();
        for row in &self.rows {
            let ratio_f64 = row.ratio.as_ref().and_then(|r| r.to_f64()).map(|x| format!("{x:.6}"));
            w.write_record([
                row.seed.to_string(),
                row.source.clone(),
                row.n.to_string(),
                row.k.to_string(),
                text(&row.opt),
                text(&row.approx_cost),
                text(&row.ratio),
                ratio_f64.unwrap_or_default(),
                row.depth_d.to_string(),
                row.max_aux_size.to_string(),
                format!("{:.3}", row.runtime_ms),
                row.error.clone().unwrap_or_default(),
            ])
            .expect("write to memory");
        }
        let mut out = String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8");
        let a = &self.aggregates;
        for (name, value) in [
            ("rows", a.rows.to_string()),
            ("rows_with_oracle", a.rows_with_oracle.to_string()),
            ("errors", a.errors.to_string()),
            ("max_ratio", a.max_ratio.to_string()),
            ("mean_ratio", a.mean_ratio.to_string()),
            ("bound_violations", a.bound_violations.to_string()),
            ("depth_violations", a.depth_violations.to_string()),
        ] {
            out.push_str(&format!("# {name},{value}\n"));
        }
        out
    }
}
