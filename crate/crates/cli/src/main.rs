use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde_json::json;

use fq_cycles::counting::{
    cycle_count, degenerate_bound, nondegenerate_count, oracle_count, path_totals, supergraph_count,
    tree_classes, tree_embeddings, OracleKind, TreeShape,
};
use fq_cycles::harness::{
    self, ExperimentConfig, JobConfig, OutputConfig, ResultRecord, RunOptions,
};
use fq_cycles::relation::{BuiltinPhi, PhiTable};
use fq_cycles::spectra::{smoothing_order, spectral_report};
use fq_cycles::{
    build_graph, generate_set, Error, FieldCtx, GraphSpec, RelationKind, SetRecipe, TheoremId,
    Verdict, VerifyParams,
};

const EXIT_USAGE: u8 = 1;
const EXIT_VIOLATION: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "fqcycles", version, about = "Cycle, path and tree counts in finite-field graphs")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    #[arg(long, global = true, default_value_t = 5)]
    q: u64,
    #[arg(long, global = true, default_value_t = 2)]
    d: usize,
    #[arg(long, global = true, default_value_t = 1)]
    t: u32,
    /// `dist` or `prod`.
    #[arg(long, global = true, default_value = "dist")]
    relation: RelationKind,
    /// Set recipe, e.g. `full`, `rand:p=0.5`, `randn:m=50`, `file:PATH`.
    #[arg(long = "set", visible_alias = "gen", global = true, default_value = "full")]
    set: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[arg(long, global = true)]
    tsv: Option<PathBuf>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Custom relation table (`x.. y.. value` per line); overrides `--relation`.
    #[arg(long, global = true, conflicts_with = "phi")]
    phi_file: Option<PathBuf>,
    /// Built-in custom relation: `zero`, `skew` or `norm-sum`.
    #[arg(long, global = true)]
    phi: Option<BuiltinPhi>,
    /// Drop loops `x ~ x` from the graph.
    #[arg(long, global = true)]
    no_loops: bool,
    /// Recompute counts by brute force and compare.
    #[arg(long, global = true)]
    oracle: bool,
    /// Record wall-clock time in result records.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Exact path, cycle, non-degenerate cycle and tree counts on one set.
    Count(CountArgs),
    /// Check statements on one set.
    Verify(VerifyArgs),
    /// Check statements on many seeded sets.
    Sweep(SweepArgs),
    /// Sphere sizes and Fourier bounds, or the smoothing estimate.
    Spectra(SpectraArgs),
    /// Enumerate labeled trees by shape.
    Trees(TreesArgs),
    /// Fixed deterministic run of every counting path and oracle.
    Selftest,
    /// Run an experiment configuration file.
    #[command(visible_alias = "config")]
    Run(RunArgs),
}

#[derive(Args)]
struct CountArgs {
    #[arg(long, value_delimiter = ',')]
    paths: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "3,4")]
    cycles: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    nondegenerate: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    tree_bound: Vec<usize>,
    /// Trees as Prüfer sequences separated by `;`, e.g. `0;0,0;1,1`.
    #[arg(long, value_delimiter = ';')]
    tree: Vec<String>,
    /// Write the adjacency list of the graph here.
    #[arg(long)]
    adjacency: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct TheoremArgs {
    /// Comma-separated statement ids, e.g. `EDGE,UPPER,MAIN`.
    #[arg(long, value_delimiter = ',', default_value = "EDGE,UPPER,RECURSION")]
    theorems: Vec<TheoremId>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    /// Tree for TREE as a Prüfer sequence.
    #[arg(long, value_delimiter = ',')]
    tree: Option<Vec<usize>>,
}

impl TheoremArgs {
    fn params(&self) -> anyhow::Result<VerifyParams> {
        let tree = self.tree.as_deref().map(TreeShape::from_pruefer).transpose()?;
        Ok(VerifyParams {
            n: self.n,
            k: self.k,
            delta: self.delta,
            epsilon: self.epsilon,
            lambda: self.lambda,
            tree,
        })
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    theorems: TheoremArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    theorems: TheoremArgs,
    #[arg(long, default_value_t = 20)]
    repetitions: usize,
}

#[derive(Args)]
struct SpectraArgs {
    /// Estimate the smoothing order of the relation instead.
    #[arg(long)]
    smoothing: bool,
    /// Report every t != 0 instead of only `--t`.
    #[arg(long)]
    all_t: bool,
}

#[derive(Args)]
struct TreesArgs {
    /// Number of vertices.
    #[arg(long, default_value_t = 4)]
    vertices: usize,
    /// Also count embeddings of each class into the graph given by the global flags.
    #[arg(long)]
    embed: bool,
}

#[derive(Args)]
struct RunArgs {
    config: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let cap = e.chain().any(|c| {
                c.downcast_ref::<Error>().is_some_and(Error::is_resource_cap)
            });
            ExitCode::from(if cap { EXIT_CAP } else { EXIT_USAGE })
        }
    }
}

fn dispatch(cli: &Cli) -> anyhow::Result<u8> {
    let g = &cli.global;
    match &cli.command {
        Command::Count(args) => count(g, args),
        Command::Verify(args) => records_command(g, job(g, "verify", &args.theorems, 1)),
        Command::Sweep(args) => records_command(g, job(g, "sweep", &args.theorems, args.repetitions)),
        Command::Spectra(args) => spectra(g, args),
        Command::Trees(args) => trees(g, args),
        Command::Selftest => {
            let records = harness::selftest(g.seed)?;
            emit_records(g, &records, &OutputConfig::default())?;
            Ok(exit_for(&records))
        }
        Command::Run(args) => {
            let text = fs::read_to_string(&args.config)
                .with_context(|| format!("reading {}", args.config.display()))?;
            let config = ExperimentConfig::from_json(&text)?;
            let records = harness::run(&config, RunOptions { timing: g.timing })?;
            emit_records(g, &records, &config.output)?;
            Ok(exit_for(&records))
        }
    }
}

fn ctx(g: &Global) -> anyhow::Result<FieldCtx> {
    Ok(FieldCtx::new(g.q, g.d)?)
}

fn spec(g: &Global, ctx: FieldCtx) -> anyhow::Result<GraphSpec> {
    let mut spec = if let Some(path) = &g.phi_file {
        let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        GraphSpec::custom(Arc::new(PhiTable::read_text(ctx, BufReader::new(file))?), g.t)
    } else if let Some(phi) = g.phi {
        GraphSpec::custom(phi.into_phi(), g.t)
    } else {
        GraphSpec::new(g.relation.relation(), g.t)
    };
    if g.no_loops {
        spec = spec.without_loops();
    }
    Ok(spec)
}

fn recipe(g: &Global) -> anyhow::Result<SetRecipe> {
    let recipe: SetRecipe = g.set.parse()?;
    // an explicit `:seed=` in the recipe wins over `--seed`
    Ok(if recipe.seed == 0 { recipe.with_seed(g.seed) } else { recipe })
}

fn custom_relation(g: &Global) -> bool {
    g.phi.is_some() || g.phi_file.is_some()
}

fn job(g: &Global, id: &str, t: &TheoremArgs, repetitions: usize) -> anyhow::Result<JobConfig> {
    if custom_relation(g) {
        anyhow::bail!("statements are defined for the distance and dot-product relations only");
    }
    let recipe = recipe(g)?;
    Ok(JobConfig {
        id: id.into(),
        q: g.q,
        d: g.d,
        relation: g.relation,
        t: g.t,
        recipe: g.set.clone(),
        seed: recipe.seed,
        repetitions,
        loops: !g.no_loops,
        paths: Vec::new(),
        cycles: Vec::new(),
        nondegenerate: Vec::new(),
        tree_bound: Vec::new(),
        trees: Vec::new(),
        oracle: false,
        theorems: t.theorems.clone(),
        params: t.params()?,
        function_max: 5,
    })
}

fn records_command(g: &Global, job: anyhow::Result<JobConfig>) -> anyhow::Result<u8> {
    let config = ExperimentConfig {
        jobs: vec![job?],
        output: OutputConfig::default(),
    };
    let records = harness::run(&config, RunOptions { timing: g.timing })?;
    if let Some(r) = records.iter().find(|r| r.resource_cap) {
        eprintln!("error: {}", r.error.as_deref().unwrap_or("resource cap"));
        return Ok(EXIT_CAP);
    }
    if let Some(r) = records.iter().find(|r| r.error.is_some()) {
        anyhow::bail!("{}", r.error.as_deref().unwrap_or_default());
    }
    emit_records(g, &records, &OutputConfig::default())?;
    print_tally(&records);
    Ok(exit_for(&records))
}

fn print_tally(records: &[ResultRecord]) {
    let mut tally: BTreeMap<TheoremId, [usize; 4]> = BTreeMap::new();
    for r in records.iter().flat_map(|r| &r.reports) {
        let slot = match r.verdict {
            Verdict::Pass => 0,
            Verdict::Vacuous => 1,
            Verdict::ConditionalFail => 2,
            Verdict::Fail => 3,
        };
        tally.entry(r.theorem).or_default()[slot] += 1;
    }
    for (theorem, [pass, vacuous, cond, fail]) in tally {
        eprintln!("{:<10} pass {pass:>4}  vacuous {vacuous:>4}  conditional_fail {cond:>4}  fail {fail:>4}", theorem.as_str());
    }
}

fn exit_for(records: &[ResultRecord]) -> u8 {
    if records.iter().any(ResultRecord::has_violation) {
        EXIT_VIOLATION
    } else {
        0
    }
}

/// Command-line paths take precedence over the configuration's.
fn emit_records(g: &Global, records: &[ResultRecord], output: &OutputConfig) -> anyhow::Result<()> {
    let pick = |flag: &Option<PathBuf>, conf: &Option<String>| flag.clone().or_else(|| conf.as_ref().map(PathBuf::from));
    match pick(&g.json, &output.json) {
        Some(path) => harness::write_json(records, create(&path)?)?,
        None => harness::write_json(records, io::stdout().lock())?,
    }
    if let Some(path) = pick(&g.csv, &output.csv) {
        harness::write_csv(records, create(&path)?)?;
    }
    if let Some(path) = pick(&g.tsv, &output.tsv) {
        harness::write_tsv(records, create(&path)?)?;
    }
    Ok(())
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn emit_value(g: &Global, value: &serde_json::Value) -> anyhow::Result<()> {
    match &g.json {
        Some(path) => {
            let mut w = create(path)?;
            serde_json::to_writer_pretty(&mut w, value)?;
            writeln!(w)?;
        }
        None => {
            let mut out = io::stdout().lock();
            serde_json::to_writer_pretty(&mut out, value)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn count(g: &Global, args: &CountArgs) -> anyhow::Result<u8> {
    let ctx = ctx(g)?;
    let spec = spec(g, ctx)?;
    let recipe = recipe(g)?;
    let set = generate_set(ctx, &recipe)?;
    let graph = build_graph(&set, &spec)?;
    if let Some(path) = &args.adjacency {
        graph.write_adjacency_list(create(path)?)?;
    }

    let mut counts = BTreeMap::new();
    let mut oracle_match = true;
    let mut check = |kind: OracleKind, n: usize, fast: &BigUint| -> anyhow::Result<()> {
        if g.oracle {
            oracle_match &= oracle_count(&graph, &kind, n)? == *fast;
        }
        Ok(())
    };
    if let Some(&kmax) = args.paths.iter().max() {
        let totals = path_totals(&graph, kmax)?;
        for &k in &args.paths {
            counts.insert(format!("P_{k}"), totals[k].to_string());
        }
    }
    for &n in &args.cycles {
        let c = cycle_count(&graph, n)?.total;
        check(OracleKind::Cycles, n, &c)?;
        counts.insert(format!("C_{n}"), c.to_string());
    }
    for &n in &args.nondegenerate {
        let c = nondegenerate_count(&graph, n)?;
        check(OracleKind::Nondegenerate, n, &c)?;
        counts.insert(format!("N_{n}"), c.to_string());
    }
    for &n in &args.tree_bound {
        counts.insert(format!("degenerate_bound_{n}"), degenerate_bound(&graph, n)?.to_string());
    }
    for text in &args.tree {
        let seq: Vec<usize> = if text.trim().is_empty() {
            Vec::new()
        } else {
            text.split(',')
                .map(|s| s.trim().parse())
                .collect::<Result<_, _>>()
                .with_context(|| format!("bad Prüfer sequence `{text}`"))?
        };
        let shape = TreeShape::from_pruefer(&seq)?;
        let c = tree_embeddings(&graph, &shape)?;
        check(OracleKind::Tree(shape), 0, &c)?;
        counts.insert(format!("n_T[{text}]"), c.to_string());
    }

    let value = json!({
        "input": {
            "q": g.q, "d": g.d, "t": g.t,
            "relation": spec.relation.name(),
            "loops": !g.no_loops,
            "recipe": recipe.to_string(),
            "size": set.len(),
        },
        "edges": {
            "ordered": graph.ordered_edge_count(),
            "loops": graph.loop_count(),
        },
        "counts": counts,
        "oracle_match": g.oracle.then_some(oracle_match),
    });
    emit_value(g, &value)?;
    Ok(if g.oracle && !oracle_match { EXIT_VIOLATION } else { 0 })
}

fn spectra(g: &Global, args: &SpectraArgs) -> anyhow::Result<u8> {
    let ctx = ctx(g)?;
    let ts: Vec<u32> = if args.all_t { (1..ctx.q()).collect() } else { vec![g.t] };
    let mut out = Vec::new();
    for &t in &ts {
        let value = if args.smoothing {
            let mut g2 = g.clone();
            g2.t = t;
            serde_json::to_value(smoothing_order(ctx, &spec(&g2, ctx)?)?)?
        } else {
            serde_json::to_value(spectral_report(ctx, t)?)?
        };
        out.push(value);
    }
    let value = if args.all_t { serde_json::Value::Array(out) } else { out.remove(0) };
    emit_value(g, &value)?;
    Ok(0)
}

fn trees(g: &Global, args: &TreesArgs) -> anyhow::Result<u8> {
    let classes = tree_classes(args.vertices)?;
    let graph = if args.embed {
        let ctx = ctx(g)?;
        Some(build_graph(&generate_set(ctx, &recipe(g)?)?, &spec(g, ctx)?)?)
    } else {
        None
    };
    let mut rows = Vec::new();
    for (key, (shape, labelings)) in &classes {
        let mut row = json!({
            "shape": key,
            "pruefer": shape.canonical_pruefer()?,
            "labelings": labelings,
            "supergraphs": supergraph_count(args.vertices).to_string(),
        });
        if let Some(graph) = &graph {
            row["embeddings"] = json!(tree_embeddings(graph, shape)?.to_string());
        }
        rows.push(row);
    }
    emit_value(g, &json!({ "vertices": args.vertices, "classes": rows }))?;
    Ok(0)
}
