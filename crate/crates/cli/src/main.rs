use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use lpmetis::augment::{
    aggregate_features, concat_global, pagerank, refine_structure, Aggregation, FeatureTable,
    PagerankParams, RefineMode,
};
use lpmetis::graph::{
    generate, load_edge_list, read_partition, write_edge_list, write_node_set, write_partition,
    GeneratorSpec, Model,
};
use lpmetis::metrics::report;
use lpmetis::pipeline::RunManifest;
use lpmetis::{
    coarsen, lpmetis_run, sample_subgraphs, BisectConfig, CoarsenMode, Error, IdMap, LpParams,
    LpmetisConfig, PartitionMap, WeightedGraph,
};

#[derive(Parser)]
#[command(name = "lpmetis", version, about = "Label-propagation multilevel graph partitioning")]
struct Cli {
    /// Worker threads (0 = all available cores). Never changes results.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded synthetic graph as an edge list.
    Gen(GenArgs),
    /// Run LPMetis and write `node<TAB>part`.
    Partition(PartitionArgs),
    /// Edge cut, balance and size spread of a partition, as JSON.
    Metrics(MetricsArgs),
    /// Contract a partition into a coarse graph.
    Coarsen(CoarsenArgs),
    /// Remove the least influential nodes or the lightest edges.
    Refine(RefineArgs),
    /// Write `node<TAB>score` PageRank scores.
    Pagerank(PagerankArgs),
    /// Print a uniform sample of part ids, one per line.
    Sample(SampleArgs),
    /// Part-level feature aggregation and concatenation.
    #[command(subcommand)]
    Features(FeaturesCommand),
}

#[derive(Args)]
struct InputArgs {
    /// Edge list `src<TAB>dst[<TAB>weight]`.
    #[arg(long)]
    input: PathBuf,
    /// Ignore any weight column and treat every edge as weight 1.
    #[arg(long, default_value_t = false)]
    unweighted: bool,
}

#[derive(Args)]
struct GenArgs {
    /// planted_partition(B,S,p_in,p_out) | complete_bipartite(L,R) | ring(N) | random_weighted(N,M,low,high)
    #[arg(long)]
    model: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Also write the planted blocks as a partition file.
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Args)]
struct PartitionArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Number of parts.
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0.5)]
    p_ratio: f64,
    #[arg(long, default_value_t = 0.1)]
    p_bound: f64,
    /// Label-propagation rounds per level.
    #[arg(long, default_value_t = 2)]
    t: usize,
    /// Label-propagation levels.
    #[arg(long, default_value_t = 2)]
    outer_t: usize,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Warn about parts with fewer nodes than this.
    #[arg(long, default_value_t = 30_000)]
    min_subgraph_warn: usize,
    /// Partition file `node<TAB>part`.
    #[arg(long)]
    out: PathBuf,
    /// JSON run manifest.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct MetricsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    parts: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct CoarsenArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    parts: PathBuf,
    /// edge (value = member count) or node (value = summed node values).
    #[arg(long, default_value = "node")]
    mode: CoarsenMode,
    /// Coarse edge list.
    #[arg(long)]
    out: PathBuf,
    /// `coarse_id<TAB>value<TAB>self_loop_weight` per coarse node [default: OUT.values]
    #[arg(long)]
    values: Option<PathBuf>,
}

#[derive(Args)]
struct RefineArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 0.05)]
    fraction: f64,
    #[arg(long, default_value = "nodes")]
    mode: RefineMode,
    #[arg(long, default_value_t = 0.85)]
    alpha: f64,
    /// Refined edge list.
    #[arg(long)]
    out: PathBuf,
    /// Surviving node ids, one per line.
    #[arg(long)]
    nodes: Option<PathBuf>,
}

#[derive(Args)]
struct PagerankArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 0.85)]
    alpha: f64,
    /// L1 convergence tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SampleArgs {
    /// Partition file `node<TAB>part`.
    #[arg(long)]
    parts: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    ratio: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Write the ids here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FeaturesCommand {
    /// One row per part: mean or sum of member features.
    Aggregate {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        parts: PathBuf,
        /// Node feature table (`#dim F` header).
        #[arg(long)]
        features: PathBuf,
        #[arg(long, default_value = "mean")]
        op: Aggregation,
        #[arg(long)]
        out: PathBuf,
    },
    /// Append each node's part row to its own features.
    Concat {
        /// Node feature table.
        #[arg(long)]
        input: PathBuf,
        /// Part feature table keyed by part id.
        #[arg(long)]
        global: PathBuf,
        #[arg(long)]
        parts: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Infeasible(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Infeasible { .. } => CliError::Infeasible(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

type CliResult<T = ()> = std::result::Result<T, CliError>;

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: lpmetis::Result<T>) -> CliResult<T> {
    r.map_err(|e| match e {
        Error::Infeasible { .. } => CliError::Infeasible(e.to_string()),
        other => CliError::Input(format!("{}: {other}", path.display())),
    })
}

fn flush(mut w: BufWriter<File>) -> CliResult {
    w.flush().map_err(|e| CliError::Input(format!("write failed: {e}")))
}

fn load_graph(args: &InputArgs) -> CliResult<(WeightedGraph, IdMap)> {
    let (g, ids, _) = with_path(&args.input, load_edge_list(open(&args.input)?, !args.unweighted))?;
    Ok((g, ids))
}

fn load_parts(path: &Path, ids: &IdMap) -> CliResult<PartitionMap> {
    Ok(with_path(path, read_partition(open(path)?, Some(ids)))?.0)
}

fn cmd_gen(a: &GenArgs) -> CliResult {
    let model: Model = a.model.parse()?;
    let generated = generate(&GeneratorSpec { model, seed: a.seed })?;
    let g = &generated.graph;
    let ids = IdMap::identity(g.node_count());
    let mut out = create(&a.out)?;
    write_edge_list(g, &ids, &mut out)?;
    flush(out)?;
    if let Some(path) = &a.truth {
        let truth = generated
            .truth
            .as_ref()
            .ok_or_else(|| CliError::Input(format!("model {} has no planted blocks", a.model)))?;
        let mut out = create(path)?;
        write_partition(truth, &ids, &mut out)?;
        flush(out)?;
    }
    Ok(())
}

fn cmd_partition(a: &PartitionArgs) -> CliResult {
    let cfg = LpmetisConfig {
        k: a.k,
        lp: LpParams { p_ratio: a.p_ratio, p_bound: a.p_bound, t_iterations: a.t, seed: a.seed },
        outer_t: a.outer_t,
        bisect: BisectConfig { epsilon: a.epsilon, seed: a.seed, ..BisectConfig::default() },
        min_subgraph_warn: a.min_subgraph_warn,
    };
    cfg.validate()?;
    let start = Instant::now();
    let (g, ids) = load_graph(&a.input)?;
    let load = start.elapsed();
    let outcome = lpmetis_run(&g, &cfg)?;
    let start = Instant::now();
    let mut out = create(&a.out)?;
    write_partition(&outcome.partition, &ids, &mut out)?;
    flush(out)?;
    let write = start.elapsed();
    if let Some(path) = &a.manifest {
        let mut manifest = RunManifest::new(&g, &cfg, &outcome, rayon::current_num_threads());
        manifest.timings_ms.insert("load".into(), load.as_secs_f64() * 1e3);
        manifest.timings_ms.insert("write".into(), write.as_secs_f64() * 1e3);
        let mut out = create(path)?;
        writeln!(out, "{}", manifest.to_json()).map_err(|e| CliError::Input(e.to_string()))?;
        flush(out)?;
    }
    Ok(())
}

fn cmd_metrics(a: &MetricsArgs) -> CliResult {
    let start = Instant::now();
    let (g, ids) = load_graph(&a.input)?;
    let parts = load_parts(&a.parts, &ids)?;
    let load = start.elapsed();
    let r = report(&g, &parts, &[("load", load)])?;
    let text = serde_json::to_string_pretty(&r).expect("report is serializable");
    match &a.json {
        Some(path) => {
            let mut out = create(path)?;
            writeln!(out, "{text}").map_err(|e| CliError::Input(e.to_string()))?;
            flush(out)
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_coarsen(a: &CoarsenArgs) -> CliResult {
    let (g, ids) = load_graph(&a.input)?;
    let parts = load_parts(&a.parts, &ids)?;
    let cg = coarsen(&parts, a.mode, &g)?;
    let coarse_ids = IdMap::identity(cg.node_count());
    let mut out = create(&a.out)?;
    write_edge_list(&cg.graph, &coarse_ids, &mut out)?;
    flush(out)?;
    let values = a.values.clone().unwrap_or_else(|| {
        let mut p = a.out.clone().into_os_string();
        p.push(".values");
        p.into()
    });
    let mut out = create(&values)?;
    cg.write_node_values(&mut out)?;
    flush(out)
}

fn cmd_refine(a: &RefineArgs) -> CliResult {
    let (g, ids) = load_graph(&a.input)?;
    let p = PagerankParams { alpha: a.alpha, ..PagerankParams::default() };
    let (refined, local) = refine_structure(&g, a.fraction, a.mode, &p)?;
    let refined_ids = local.compose(&ids);
    let mut out = create(&a.out)?;
    write_edge_list(&refined, &refined_ids, &mut out)?;
    flush(out)?;
    if let Some(path) = &a.nodes {
        let all: Vec<usize> = (0..refined.node_count()).collect();
        let mut out = create(path)?;
        write_node_set(&all, &refined_ids, &mut out)?;
        flush(out)?;
    }
    log::info!(
        "kept {} of {} nodes and {} of {} edges",
        refined.node_count(),
        g.node_count(),
        refined.edge_count(),
        g.edge_count()
    );
    Ok(())
}

fn cmd_pagerank(a: &PagerankArgs) -> CliResult {
    let (g, ids) = load_graph(&a.input)?;
    let p = PagerankParams { alpha: a.alpha, tol: a.tol, max_iter: a.max_iter };
    let scores = pagerank(&g, &p)?;
    let mut out = create(&a.out)?;
    for (i, s) in scores.iter().enumerate() {
        writeln!(out, "{}\t{s}", ids.external_of(i)).map_err(|e| CliError::Input(e.to_string()))?;
    }
    flush(out)
}

fn cmd_sample(a: &SampleArgs) -> CliResult {
    let (parts, _) = with_path(&a.parts, read_partition(open(&a.parts)?, None))?;
    let picked = sample_subgraphs(&parts, a.ratio, a.seed)?;
    let text: String = picked.iter().map(|p| format!("{p}\n")).collect();
    match &a.out {
        Some(path) => {
            let mut out = create(path)?;
            out.write_all(text.as_bytes()).map_err(|e| CliError::Input(e.to_string()))?;
            flush(out)
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_features(c: &FeaturesCommand) -> CliResult {
    match c {
        FeaturesCommand::Aggregate { input, parts, features, op, out } => {
            let (g, ids) = load_graph(input)?;
            let parts = load_parts(parts, &ids)?;
            let (feats, _) = with_path(features, FeatureTable::read_tsv(open(features)?, Some(&ids)))?;
            let table = aggregate_features(&g, &parts, &feats, *op)?;
            let mut w = create(out)?;
            table.write_tsv(&IdMap::identity(table.len()), &mut w)?;
            flush(w)
        }
        FeaturesCommand::Concat { input, global, parts, out } => {
            let (feats, ids) = with_path(input, FeatureTable::read_tsv(open(input)?, None))?;
            let parts = load_parts(parts, &ids)?;
            let (global_table, part_ids) =
                with_path(global, FeatureTable::read_tsv(open(global)?, None))?;
            let rows = (0..parts.part_count())
                .map(|p| {
                    part_ids
                        .index_of(p as u64)
                        .map(|i| global_table.row(i).to_vec())
                        .ok_or_else(|| CliError::Input(format!("{}: no row for part {p}", global.display())))
                })
                .collect::<CliResult<Vec<_>>>()?;
            let global_dense = FeatureTable::from_rows(&rows)?;
            let table = concat_global(&feats, &global_dense, &parts)?;
            let mut w = create(out)?;
            table.write_tsv(&ids, &mut w)?;
            flush(w)
        }
    }
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Partition(a) => cmd_partition(a),
        Command::Metrics(a) => cmd_metrics(a),
        Command::Coarsen(a) => cmd_coarsen(a),
        Command::Refine(a) => cmd_refine(a),
        Command::Pagerank(a) => cmd_pagerank(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Features(c) => cmd_features(c),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: cannot start {} worker threads: {e}", cli.threads);
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Infeasible(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
