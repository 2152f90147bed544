//! `igm`: generate iterated clone-growth graphs, print exact count
//! trajectories, measure structural parameters, query the implicit next
//! generation, and run the verification harness.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 capacity (a
//! requested object is too large to enumerate), 4 a verification check
//! contradicted its closed form.

mod export;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use igm::combin::predicted_counts;
use igm::metrics::{
    chromatic_number, clique_number, diameter, domination_number, independence_number,
    is_biconnected, is_connected, normalized_laplacian_spectrum, ParamResult,
};
use igm::seed::read_edge_list;
use igm::verify::{run_all, CheckStatus, RunOptions};
use igm::{
    evolve_step, DiameterMode, Error, GraphSnapshot, ImplicitLayer, LayerNode, ModelParams,
    Result, SeedSpec, DEFAULT_NODE_BUDGET, DEFAULT_PAIR_BUDGET,
};

use export::Format;

#[derive(Parser)]
#[command(
    name = "igm",
    version,
    about = "Iterated clone-growth graphs: generation, exact counts, metrics, implicit queries, verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Materialize a trajectory and write snapshots.
    Generate(GenerateArgs),
    /// Print the exact (n, e) table without materializing anything.
    Counts(CountsArgs),
    /// Measure structural parameters of one graph.
    Metrics(MetricsArgs),
    /// Query the un-materialized generation over a base graph.
    Implicit(ImplicitArgs),
    /// Run every structural check and write the report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Seed: K<n>, C<n>, P<n>, E<n>, or an edge-list file path.
    #[arg(long)]
    seed: String,
    /// Subset fraction denominator; 2 is the half-model.
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long)]
    steps: usize,
    /// Output file (or directory with --all-levels); stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Edgelist)]
    format: Format,
    /// Node budget; a step that would exceed it fails with exit 3.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: usize,
    /// Write every level, not just the last.
    #[arg(long)]
    all_levels: bool,
}

#[derive(Args)]
struct CountsArgs {
    #[arg(long)]
    seed: String,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long)]
    steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum MetricKind {
    Conn,
    Biconn,
    Diam,
    Clique,
    Indep,
    Chrom,
    Dom,
    Spectrum,
}

const ALL_METRICS: [MetricKind; 8] = [
    MetricKind::Conn,
    MetricKind::Biconn,
    MetricKind::Diam,
    MetricKind::Clique,
    MetricKind::Indep,
    MetricKind::Chrom,
    MetricKind::Dom,
    MetricKind::Spectrum,
];

#[derive(Args)]
struct MetricsArgs {
    /// Edge-list file to measure; alternative to --seed/--steps.
    #[arg(long = "in", conflicts_with_all = ["seed"])]
    input: Option<PathBuf>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    steps: usize,
    /// Comma-separated subset of conn,biconn,diam,clique,indep,chrom,dom,spectrum.
    #[arg(long, value_enum, value_delimiter = ',')]
    select: Vec<MetricKind>,
    /// Wall-clock budget per exact solve, in seconds.
    #[arg(long, default_value_t = 60)]
    time_budget: u64,
    /// Also write rows as CSV: metric,value,lower,upper,exact,witness_size,elapsed_ms.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: usize,
}

#[derive(Args)]
struct ImplicitArgs {
    /// Base graph: an edge-list file path or a seed spec evolved --steps times.
    #[arg(long)]
    base: String,
    #[arg(long, default_value_t = 0)]
    steps: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: usize,
    #[command(subcommand)]
    query: ImplicitQuery,
}

#[derive(Subcommand)]
enum ImplicitQuery {
    /// Node and edge counts of the layer.
    Counts,
    /// Whether two layer nodes are adjacent. Addresses: o:<id>, c:<rank>.
    Adjacent { a: String, b: String },
    /// Degree of a layer node, exact.
    Degree { v: String },
    /// Exact distance between two layer nodes.
    Dist { a: String, b: String },
    /// Layer diameter: exact scan by default, sampled lower bound with --sample.
    Diameter {
        /// Exact category scan (the default); refused over the pair budget.
        #[arg(long, conflicts_with = "sample")]
        exact: bool,
        /// Sample this many random pairs instead and report their maximum.
        #[arg(long)]
        sample: Option<u64>,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        /// Clone-pair ceiling for the exact scan.
        #[arg(long, default_value_t = DEFAULT_PAIR_BUDGET)]
        pair_budget: u64,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    seed: String,
    /// Must be 2: the checked statements cover the half-model.
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long)]
    steps: usize,
    /// Write the JSON report here; without it the JSON goes to stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write densification.csv, lambda_gap.csv, diameter.csv here.
    #[arg(long)]
    plots: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: usize,
    /// Wall-clock budget per exact solve, in seconds.
    #[arg(long, default_value_t = 60)]
    time_budget: u64,
    /// Pairs drawn for sampled diameters and distance case bounds.
    #[arg(long, default_value_t = 10_000)]
    sample_pairs: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Capacity(_) | Error::PairBudget { .. } => 3u8,
                _ => 2u8,
            })
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Generate(args) => cmd_generate(args),
        Command::Counts(args) => cmd_counts(args),
        Command::Metrics(args) => cmd_metrics(args),
        Command::Implicit(args) => cmd_implicit(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

/// A seed spec string or a path to an edge-list file.
fn load_seed(spec: &str) -> Result<GraphSnapshot> {
    if Path::new(spec).is_file() {
        read_edge_list(Path::new(spec))
    } else {
        spec.parse::<SeedSpec>()?.build()
    }
}

/// Materializes exactly `steps` levels; a level over budget is an error
/// (exit 3), unlike the harness which stops early.
fn materialize(seed: GraphSnapshot, k: usize, steps: usize, budget: usize) -> Result<Vec<GraphSnapshot>> {
    let mut levels = vec![seed];
    for _ in 0..steps {
        let next = evolve_step(levels.last().expect("nonempty"), k, budget)?;
        levels.push(next);
    }
    Ok(levels)
}

fn cmd_generate(args: GenerateArgs) -> Result<ExitCode> {
    let seed = load_seed(&args.seed)?;
    let levels = materialize(seed, args.k, args.steps, args.budget)?;
    if args.all_levels {
        match &args.out {
            Some(dir) => {
                std::fs::create_dir_all(dir)?;
                for g in &levels {
                    let name = format!("level_{:03}.{}", g.level(), export::extension(args.format));
                    std::fs::write(dir.join(&name), export::render(g, args.format))?;
                }
                println!("wrote levels 0..={} to {}", levels.len() - 1, dir.display());
            }
            None => print!("{}", export::render_all(&levels, args.format)),
        }
    } else {
        let last = levels.last().expect("nonempty");
        let text = export::render(last, args.format);
        match &args.out {
            Some(path) => {
                std::fs::write(path, text)?;
                println!(
                    "wrote level {} ({} nodes, {} edges) to {}",
                    last.level(),
                    last.node_count(),
                    last.edge_count(),
                    path.display()
                );
            }
            None => print!("{text}"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_counts(args: CountsArgs) -> Result<ExitCode> {
    if args.k == 0 {
        return Err(Error::Contract("k must be at least 1".into()));
    }
    let seed = load_seed(&args.seed)?;
    let table = predicted_counts(
        seed.node_count() as u64,
        seed.edge_count(),
        args.k,
        args.steps,
    );
    for (t, (n, e)) in table.iter().enumerate() {
        println!("{t} {n} {e}");
    }
    Ok(ExitCode::SUCCESS)
}

struct MetricRow {
    metric: &'static str,
    value: String,
    lower: String,
    upper: String,
    exact: String,
    witness_size: String,
    elapsed_ms: String,
}

impl MetricRow {
    fn simple(metric: &'static str, value: impl ToString, elapsed: Duration) -> Self {
        MetricRow {
            metric,
            value: value.to_string(),
            lower: String::new(),
            upper: String::new(),
            exact: "true".into(),
            witness_size: String::new(),
            elapsed_ms: elapsed.as_millis().to_string(),
        }
    }

    fn solver(metric: &'static str, r: &ParamResult) -> Self {
        MetricRow {
            metric,
            value: r.value.to_string(),
            lower: r.lower.to_string(),
            upper: r.upper.to_string(),
            exact: r.exact.to_string(),
            witness_size: r.witness.size().to_string(),
            elapsed_ms: r.elapsed.as_millis().to_string(),
        }
    }
}

fn cmd_metrics(args: MetricsArgs) -> Result<ExitCode> {
    let base = match (&args.input, &args.seed) {
        (Some(path), _) => read_edge_list(path)?,
        (None, Some(spec)) => {
            let seed = load_seed(spec)?;
            materialize(seed, args.k, args.steps, args.budget)?
                .pop()
                .expect("nonempty")
        }
        (None, None) => {
            return Err(Error::Contract(
                "give either --in <file> or --seed <spec>".into(),
            ));
        }
    };
    let select = if args.select.is_empty() {
        ALL_METRICS.to_vec()
    } else {
        args.select.clone()
    };
    let budget = Duration::from_secs(args.time_budget);
    let mut rows = Vec::new();
    for kind in select {
        match kind {
            MetricKind::Conn => {
                let start = Instant::now();
                let value = is_connected(&base);
                rows.push(MetricRow::simple("conn", value, start.elapsed()));
                println!("conn = {value}");
            }
            MetricKind::Biconn => {
                let start = Instant::now();
                let value = is_biconnected(&base);
                rows.push(MetricRow::simple("biconn", value, start.elapsed()));
                println!("biconn = {value}");
            }
            MetricKind::Diam => {
                let start = Instant::now();
                let value = diameter(&base);
                let text = value
                    .map(|d| d.to_string())
                    .unwrap_or_else(|| "inf".into());
                rows.push(MetricRow::simple("diam", &text, start.elapsed()));
                println!("diam = {text}");
            }
            MetricKind::Clique => {
                let r = clique_number(&base, budget);
                print_solver("clique", &r);
                rows.push(MetricRow::solver("clique", &r));
            }
            MetricKind::Indep => {
                let r = independence_number(&base, budget);
                print_solver("indep", &r);
                rows.push(MetricRow::solver("indep", &r));
            }
            MetricKind::Chrom => {
                let r = chromatic_number(&base, budget);
                print_solver("chrom", &r);
                rows.push(MetricRow::solver("chrom", &r));
            }
            MetricKind::Dom => {
                let r = domination_number(&base, budget);
                print_solver("dom", &r);
                rows.push(MetricRow::solver("dom", &r));
            }
            MetricKind::Spectrum => {
                let start = Instant::now();
                match normalized_laplacian_spectrum(&base) {
                    Ok(s) => {
                        rows.push(MetricRow::simple(
                            "lambda_gap",
                            s.lambda_gap,
                            start.elapsed(),
                        ));
                        println!("lambda_gap = {}", s.lambda_gap);
                    }
                    Err(e) => {
                        rows.push(MetricRow::simple("lambda_gap", "", start.elapsed()));
                        println!("lambda_gap unavailable: {e}");
                    }
                }
            }
        }
    }
    if let Some(path) = &args.csv {
        let mut out = String::from("metric,value,lower,upper,exact,witness_size,elapsed_ms\n");
        for r in &rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.metric, r.value, r.lower, r.upper, r.exact, r.witness_size, r.elapsed_ms
            ));
        }
        std::fs::write(path, out)?;
        println!("csv written to {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn print_solver(name: &str, r: &ParamResult) {
    if r.exact {
        println!(
            "{name} = {} (exact, witness size {}, {} ms)",
            r.value,
            r.witness.size(),
            r.elapsed.as_millis()
        );
    } else {
        println!(
            "{name} in [{}, {}] (budget exhausted, witness size {}, {} ms)",
            r.lower,
            r.upper,
            r.witness.size(),
            r.elapsed.as_millis()
        );
    }
}

fn cmd_implicit(args: ImplicitArgs) -> Result<ExitCode> {
    let seed = load_seed(&args.base)?;
    let base = materialize(seed, args.k, args.steps, args.budget)?
        .pop()
        .expect("nonempty");
    let layer = ImplicitLayer::over(base, args.k)?;
    match &args.query {
        ImplicitQuery::Counts => {
            let (n, e) = layer.layer_counts();
            println!("{n} {e}");
        }
        ImplicitQuery::Adjacent { a, b } => {
            let a: LayerNode = a.parse()?;
            let b: LayerNode = b.parse()?;
            println!("{}", layer.are_adjacent(&a, &b)?);
        }
        ImplicitQuery::Degree { v } => {
            let v: LayerNode = v.parse()?;
            println!("{}", layer.degree(&v)?);
        }
        ImplicitQuery::Dist { a, b } => {
            let a: LayerNode = a.parse()?;
            let b: LayerNode = b.parse()?;
            match layer.distance(&a, &b)? {
                Some(d) => println!("{d}"),
                None => println!("unreachable"),
            }
        }
        ImplicitQuery::Diameter {
            exact: _,
            sample,
            rng_seed,
            pair_budget,
        } => {
            let mode = match sample {
                Some(pairs) => DiameterMode::Sampled {
                    pairs: *pairs,
                    seed: *rng_seed,
                },
                None => DiameterMode::Exact {
                    pair_budget: *pair_budget,
                },
            };
            let r = layer.implicit_diameter(mode)?;
            let kind = if r.exact { "exact" } else { "sampled lower bound" };
            match r.value {
                Some(d) => println!("{d} ({kind}, {} pairs scanned)", r.pairs_scanned),
                None => println!("unreachable ({kind})"),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let params = ModelParams {
        seed: args.seed.parse::<SeedSpec>()?,
        k: args.k,
    };
    let options = RunOptions {
        node_budget: args.budget,
        solver_budget: Duration::from_secs(args.time_budget),
        sample_pairs: args.sample_pairs,
        rng_seed: args.rng_seed,
        ..RunOptions::default()
    };
    let run = run_all(&params, args.steps, &options)?;

    if let Some(dir) = &args.plots {
        report::write_plots(dir, &run, &options)?;
    }

    match &args.report {
        Some(path) => {
            std::fs::write(path, report::render_json(&run))?;
            println!(
                "seed {}  k {}  steps {}  levels 0..={}",
                run.params.seed,
                run.params.k,
                run.steps_requested,
                run.trajectory.snapshots.len() - 1
            );
            if let Some(stopped) = &run.trajectory.stopped {
                println!("stopped early: {stopped}");
            }
            for c in &run.checks {
                println!(
                    "  {:<16} level {:>3}  {}",
                    c.theorem_id.label(),
                    c.level,
                    c.status.label()
                );
            }
            let summary = run
                .status_counts()
                .into_iter()
                .filter(|(_, n)| *n > 0)
                .map(|(s, n)| format!("{n} {}", s.label()))
                .collect::<Vec<_>>()
                .join(", ");
            println!("checks: {summary}");
            for c in run
                .checks
                .iter()
                .filter(|c| c.status == CheckStatus::MismatchClosedForm)
            {
                let predicted = c
                    .predicted_closed_form
                    .as_ref()
                    .map(ToString::to_string)
                    .unwrap_or_else(|| "-".into());
                let measured = c
                    .measured
                    .as_ref()
                    .map(ToString::to_string)
                    .unwrap_or_else(|| "-".into());
                println!(
                    "mismatch: {} level {} — closed form {predicted}, measured {measured}",
                    c.theorem_id.label(),
                    c.level
                );
            }
            println!("report written to {}", path.display());
        }
        None => print!("{}", report::render_json(&run)),
    }

    if let Some(dir) = &args.plots {
        eprintln!("plot series written to {}", dir.display());
    }

    Ok(if run.has_mismatch() {
        ExitCode::from(4)
    } else {
        ExitCode::SUCCESS
    })
}
