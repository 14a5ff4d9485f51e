use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use treesearch::approx::create_decision_tree_with;
use treesearch::bench::{run_bench, run_bench_fixed, BenchConfig, BenchReport};
use treesearch::dot::{decision_tree_to_dot, instance_to_dot};
use treesearch::exact::{opt_exact, SolveLimits};
use treesearch::generate::{generate_instance, round_up_to_multiple, CostModel, Shape};
use treesearch::io::{decision_tree_from_json, decision_tree_to_json, instance_from_json, instance_to_json};
use treesearch::modularity::{heavy_modules, is_up_monotonic, k_up_modularity};
use treesearch::ranking::ranking_based_dt;
use treesearch::{
    evaluate_cost, query_sequence, validate_decision_tree, CostScalar, DecisionTree, Instance, Rational,
};

/// Search strategies for trees with vertex query costs.
///
/// Vertex ids are 1-based everywhere. Instances and strategies are JSON; see
/// the project README for the formats.
#[derive(Parser)]
#[command(name = "treesearch", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an instance, and optionally a strategy for it.
    Validate {
        #[command(flatten)]
        io: InputOutput,
        /// Strategy to check against the instance.
        #[arg(long)]
        tree: Option<PathBuf>,
    },
    /// Build a strategy with the cost-level approximation.
    Solve {
        #[command(flatten)]
        io: InputOutput,
        #[command(flatten)]
        limits: Limits,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Compute an optimal strategy (small trees only).
    Exact {
        #[command(flatten)]
        io: InputOutput,
        #[command(flatten)]
        limits: Limits,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Worst-case cost of a strategy.
    Eval {
        #[command(flatten)]
        io: InputOutput,
        #[arg(long)]
        tree: PathBuf,
    },
    /// Strategy from a minimal vertex ranking; optimal for uniform costs.
    Rank {
        #[command(flatten)]
        io: InputOutput,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// k-up-modularity with a witness threshold and its heavy modules.
    Kmod {
        #[command(flatten)]
        io: InputOutput,
    },
    /// Generate a random instance.
    Gen(GenArgs),
    /// Measure approximation ratios on generated or given instances.
    Bench(BenchArgs),
    /// Graphviz text for an instance, or for a strategy when --tree is given.
    ExportDot {
        #[command(flatten)]
        io: InputOutput,
        #[arg(long)]
        tree: Option<PathBuf>,
    },
    /// Queries asked, and their cost, when the target is a given vertex.
    Trace {
        #[command(flatten)]
        io: InputOutput,
        #[arg(long)]
        tree: PathBuf,
        /// Target vertex id (1-based).
        #[arg(long)]
        target: usize,
    },
}

#[derive(Args)]
struct InputOutput {
    /// Instance file; `-` reads standard input.
    #[arg(long, short)]
    input: PathBuf,
    /// Write here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Limits {
    /// Search states allowed in each exact solve before giving up.
    #[arg(long, default_value_t = SolveLimits::default().max_states)]
    state_limit: usize,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value = "random-tree")]
    shape: String,
    /// uniform, random, up-monotonic, planted-k(K) or alternating(EPS).
    #[arg(long, default_value = "random")]
    cost_model: String,
    #[arg(long, short)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Round every cost up to a multiple of this value.
    #[arg(long)]
    round_up: Option<String>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 14)]
    n_max: usize,
    /// Comma-separated shapes; all by default.
    #[arg(long, value_delimiter = ',')]
    shapes: Vec<String>,
    /// Comma-separated cost models; one of each kind by default.
    #[arg(long, value_delimiter = ',')]
    cost_models: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 14)]
    exact_cap: usize,
    #[command(flatten)]
    limits: Limits,
    /// Benchmark these instance files instead of generated ones.
    #[arg(long, short)]
    input: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = BenchFormat::Json)]
    format: BenchFormat,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchFormat {
    Json,
    Csv,
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    if path == Path::new("-") {
        return std::io::read_to_string(std::io::stdin()).context("reading standard input");
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_instance(path: &Path) -> anyhow::Result<Instance> {
    instance_from_json(&read_text(path)?).with_context(|| format!("invalid instance {}", path.display()))
}

fn read_tree(path: &Path) -> anyhow::Result<DecisionTree> {
    decision_tree_from_json(&read_text(path)?).with_context(|| format!("invalid decision tree {}", path.display()))
}

fn emit(output: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(inst: &Instance, d: &DecisionTree, format: Format) -> String {
    match format {
        Format::Json => decision_tree_to_json(d),
        Format::Dot => decision_tree_to_dot(inst, d),
    }
}

fn json_line(value: serde_json::Value) -> String {
    value.to_string() + "\n"
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Validate { io, tree } => {
            let inst = read_instance(&io.input)?;
            let mut report = json!({ "n": inst.n(), "valid": true });
            if let Some(path) = tree {
                let d = read_tree(&path)?;
                validate_decision_tree(&inst, &d).context("strategy rejected")?;
                report["cost"] = json!(evaluate_cost(&inst, &d)?.to_string());
            }
            emit(&io.output, &json_line(report))
        }
        Command::Solve { io, limits, format } => {
            let inst = read_instance(&io.input)?;
            let out = create_decision_tree_with(&inst, SolveLimits::new(limits.state_limit))?;
            let cost = evaluate_cost(&inst, &out.tree)?;
            eprintln!(
                "cost {cost}, levels descended {}, bound {} x OPT, largest auxiliary tree {}",
                out.stats.depth_d,
                out.stats.ratio_bound(),
                out.stats.max_aux_size()
            );
            emit(&io.output, &render(&inst, &out.tree, format))
        }
        Command::Exact { io, limits, format } => {
            let inst = read_instance(&io.input)?;
            let sol = opt_exact(&inst, SolveLimits::new(limits.state_limit))?;
            eprintln!("optimal cost {}, {} states", sol.cost, sol.states);
            emit(&io.output, &render(&inst, &sol.tree, format))
        }
        Command::Eval { io, tree } => {
            let inst = read_instance(&io.input)?;
            let d = read_tree(&tree)?;
            let cost = evaluate_cost(&inst, &d)?;
            emit(&io.output, &json_line(json!({ "cost": cost.to_string(), "depth": d.depth() })))
        }
        Command::Rank { io, format } => {
            let inst = read_instance(&io.input)?;
            let d = ranking_based_dt(&inst, &inst.all_vertices())?;
            emit(&io.output, &render(&inst, &d, format))
        }
        Command::Kmod { io } => {
            let inst = read_instance(&io.input)?;
            let (k, t) = k_up_modularity(&inst);
            let modules: Vec<Vec<usize>> = heavy_modules(&inst, &t)
                .modules
                .iter()
                .map(|m| m.iter().map(|v| v + 1).collect())
                .collect();
            let report = json!({
                "k": k,
                "threshold": t.to_string(),
                "modules": modules,
                "up_monotonic": is_up_monotonic(&inst),
            });
            emit(&io.output, &json_line(report))
        }
        Command::Gen(args) => {
            let shape: Shape = args.shape.parse()?;
            let model: CostModel = args.cost_model.parse()?;
            let mut inst = generate_instance(shape, &model, args.n, args.seed)?;
            if let Some(step) = args.round_up {
                let Some(step) = Rational::parse_cost(&step) else { bail!("cannot read rounding step `{step}`") };
                inst = round_up_to_multiple(&inst, &step)?;
            }
            emit(&args.output, &instance_to_json(&inst))
        }
        Command::Bench(args) => {
            let defaults = BenchConfig::default();
            let config = BenchConfig {
                count: args.count,
                n_min: args.n_min,
                n_max: args.n_max,
                shapes: if args.shapes.is_empty() {
                    defaults.shapes
                } else {
                    args.shapes.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
                },
                cost_models: if args.cost_models.is_empty() {
                    defaults.cost_models
                } else {
                    args.cost_models.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
                },
                seed: args.seed,
                exact_cap: args.exact_cap,
                state_limit: args.limits.state_limit,
            };
            let report: BenchReport = if args.input.is_empty() {
                run_bench(&config)?
            } else {
                let named = args
                    .input
                    .iter()
                    .map(|p| Ok((p.display().to_string(), read_instance(p)?)))
                    .collect::<anyhow::Result<Vec<_>>>()?;
                run_bench_fixed(&named, &config)
            };
            let a = &report.aggregates;
            eprintln!(
                "{} rows, {} with optimum, max ratio {}, bound violations {}",
                a.rows, a.rows_with_oracle, a.max_ratio, a.bound_violations
            );
            let text = match args.format {
                BenchFormat::Json => report.to_json(),
                BenchFormat::Csv => report.to_csv(),
            };
            emit(&args.output, &text)
        }
        Command::ExportDot { io, tree } => {
            let inst = read_instance(&io.input)?;
            let text = match tree {
                Some(path) => {
                    let d = read_tree(&path)?;
                    validate_decision_tree(&inst, &d).context("strategy rejected")?;
                    decision_tree_to_dot(&inst, &d)
                }
                None => instance_to_dot(&inst),
            };
            emit(&io.output, &text)
        }
        Command::Trace { io, tree, target } => {
            let inst = read_instance(&io.input)?;
            let d = read_tree(&tree)?;
            if target == 0 {
                bail!(treesearch::Error::InvalidParameters("vertex ids are 1-based; found 0".into()));
            }
            let seq = query_sequence(&inst, &d, target - 1)?;
            let queries: Vec<usize> = seq.queries.iter().map(|q| q + 1).collect();
            emit(&io.output, &json_line(json!({ "queries": queries, "cost": seq.total_cost.to_string() })))
        }
    }
}

/// 2 when any error in the chain is a resource limit, 1 otherwise.
fn exit_code(err: &anyhow::Error) -> u8 {
    let limit = err
        .chain()
        .filter_map(|e| e.downcast_ref::<treesearch::Error>())
        .any(treesearch::Error::is_resource_limit);
    if limit {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    // Usage errors exit with 1 like other bad input; 2 means a resource limit.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
