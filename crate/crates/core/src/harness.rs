//! Experiment configurations, result records and their serialisations.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{verify, BoundReport, TheoremId, Verdict, VerifyInput, VerifyParams};
use crate::counting::{
    cycle_count, degenerate_bound, nondegenerate_count, oracle_count, total_paths,
    tree_embeddings, OracleKind, TreeShape,
};
use crate::ensembles::{generate_set, instance_seed, random_grid_function, random_pair_function, SetRecipe};
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::graph::{build_graph, Graph};
use crate::relation::{GraphSpec, RelationKind};

fn default_true() -> bool {
    true
}

fn default_repetitions() -> usize {
    1
}

fn default_function_max() -> u64 {
    5
}

/// One family of instances and what to compute on each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub id: String,
    pub q: u64,
    pub d: usize,
    pub relation: RelationKind,
    pub t: u32,
    pub recipe: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default = "default_true")]
    pub loops: bool,
    /// Path lengths `k` for `P_k`.
    #[serde(default)]
    pub paths: Vec<usize>,
    /// Cycle lengths `n` for `C_n`.
    #[serde(default)]
    pub cycles: Vec<usize>,
    /// Cycle lengths for `N_n`.
    #[serde(default)]
    pub nondegenerate: Vec<usize>,
    /// Cycle lengths for the degenerate-cycle bound.
    #[serde(default)]
    pub tree_bound: Vec<usize>,
    /// Trees given by Prüfer sequences, for `n_T`.
    #[serde(default)]
    pub trees: Vec<Vec<usize>>,
    /// Recompute every requested count by brute force and compare.
    #[serde(default)]
    pub oracle: bool,
    #[serde(default)]
    pub theorems: Vec<TheoremId>,
    #[serde(default)]
    pub params: VerifyParams,
    #[serde(default = "default_function_max")]
    pub function_max: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tsv: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub jobs: Vec<JobConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ExperimentConfig {
    /// Parses and validates; unknown keys and bad recipes are rejected here.
    pub fn from_json(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, job) in self.jobs.iter().enumerate() {
            let tag = |e: Error| Error::Config(format!("job {i} (`{}`): {e}", job.id));
            FieldCtx::new(job.q, job.d).map_err(tag)?;
            job.recipe.parse::<SetRecipe>().map_err(tag)?;
            for p in &job.trees {
                TreeShape::from_pruefer(p).map_err(tag)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputEcho {
    pub q: u64,
    pub d: usize,
    pub t: u32,
    pub relation: RelationKind,
    pub loops: bool,
    pub recipe: String,
    pub seed: u64,
    pub size: Option<usize>,
}

/// One instance's results. Exact counts are decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub job: String,
    pub index: usize,
    pub repetition: usize,
    pub input: InputEcho,
    pub counts: BTreeMap<String, String>,
    pub reports: Vec<BoundReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_match: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub resource_cap: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl ResultRecord {
    pub fn has_violation(&self) -> bool {
        self.reports.iter().any(BoundReport::is_violation) || self.oracle_match == Some(false)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Record wall-clock time per record (breaks byte-for-byte reproducibility).
    pub timing: bool,
}

/// Runs every job; records come back in `(job, repetition)` order.
pub fn run(config: &ExperimentConfig, options: RunOptions) -> Result<Vec<ResultRecord>> {
    config.validate()?;
    let tasks: Vec<(usize, &JobConfig)> = config
        .jobs
        .iter()
        .flat_map(|job| (0..job.repetitions).map(move |r| (r, job)))
        .collect();
    let records = tasks
        .par_iter()
        .enumerate()
        .map(|(index, &(rep, job))| run_one(job, index, rep, options))
        .collect();
    Ok(records)
}

fn run_one(job: &JobConfig, index: usize, rep: usize, options: RunOptions) -> ResultRecord {
    let start = Instant::now();
    let seed = if job.repetitions == 1 {
        job.seed
    } else {
        instance_seed(job.seed, rep as u64)
    };
    let mut record = ResultRecord {
        job: job.id.clone(),
        index,
        repetition: rep,
        input: InputEcho {
            q: job.q,
            d: job.d,
            t: job.t,
            relation: job.relation,
            loops: job.loops,
            recipe: job.recipe.clone(),
            seed,
            size: None,
        },
        counts: BTreeMap::new(),
        reports: Vec::new(),
        oracle_match: None,
        error: None,
        resource_cap: false,
        timing_ms: None,
    };
    if let Err(e) = fill(job, seed, &mut record) {
        record.resource_cap = e.is_resource_cap();
        record.error = Some(e.to_string());
    }
    if options.timing {
        record.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    record
}

fn fill(job: &JobConfig, seed: u64, record: &mut ResultRecord) -> Result<()> {
    let ctx = FieldCtx::new(job.q, job.d)?;
    let recipe: SetRecipe = job.recipe.parse()?;
    let set = generate_set(ctx, &recipe.with_seed(seed))?;
    record.input.size = Some(set.len());
    let mut spec = GraphSpec::new(job.relation.relation(), job.t);
    if !job.loops {
        spec = spec.without_loops();
    }
    let graph = build_graph(&set, &spec)?;
    let counts = &mut record.counts;
    let mut oracle = OracleTally::new(job.oracle);

    for &k in &job.paths {
        counts.insert(format!("P_{k}"), total_paths(&graph, k, false)?.total.to_string());
    }
    for &n in &job.cycles {
        let c = cycle_count(&graph, n)?.total;
        oracle.compare(&graph, &OracleKind::Cycles, n, &c)?;
        counts.insert(format!("C_{n}"), c.to_string());
    }
    for &n in &job.nondegenerate {
        let c = nondegenerate_count(&graph, n)?;
        oracle.compare(&graph, &OracleKind::Nondegenerate, n, &c)?;
        counts.insert(format!("N_{n}"), c.to_string());
    }
    for &n in &job.tree_bound {
        counts.insert(format!("degenerate_bound_{n}"), degenerate_bound(&graph, n)?.to_string());
    }
    for p in &job.trees {
        let shape = TreeShape::from_pruefer(p)?;
        let c = tree_embeddings(&graph, &shape)?;
        let name = format!("n_T[{}]", p.iter().map(usize::to_string).collect::<Vec<_>>().join(","));
        oracle.compare(&graph, &OracleKind::Tree(shape), 0, &c)?;
        counts.insert(name, c.to_string());
    }
    record.oracle_match = oracle.result();

    for &theorem in &job.theorems {
        let report = match theorem {
            TheoremId::Chikr => {
                let f = random_grid_function(ctx, instance_seed(seed, 1), job.function_max)?;
                let g = random_grid_function(ctx, instance_seed(seed, 2), job.function_max)?;
                verify(theorem, &VerifyInput::Functional { ctx, t: job.t, f: &f, g: &g })?
            }
            TheoremId::TDist | TheoremId::TProd | TheoremId::Concise => {
                let n = graph.order();
                let f = random_pair_function(n, instance_seed(seed, 3), job.function_max, 0.5);
                let g = random_pair_function(n, instance_seed(seed, 4), job.function_max, 0.5);
                verify(theorem, &VerifyInput::Bilinear { graph: &graph, f: &f, g: &g })?
            }
            _ => verify(theorem, &VerifyInput::Graph { graph: &graph, params: &job.params })?,
        };
        record.reports.push(report);
    }
    Ok(())
}

struct OracleTally {
    enabled: bool,
    all_match: bool,
    checked: bool,
}

impl OracleTally {
    fn new(enabled: bool) -> Self {
        OracleTally {
            enabled,
            all_match: true,
            checked: false,
        }
    }

    fn compare(&mut self, g: &Graph, kind: &OracleKind, n: usize, fast: &num_bigint::BigUint) -> Result<()> {
        if self.enabled {
            let slow = oracle_count(g, kind, n)?;
            self.checked = true;
            self.all_match &= &slow == fast;
        }
        Ok(())
    }

    fn result(&self) -> Option<bool> {
        (self.enabled && self.checked).then_some(self.all_match)
    }
}

/// Records as a pretty JSON array with a trailing newline.
pub fn write_json<W: Write>(records: &[ResultRecord], mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, records)?;
    writeln!(w)?;
    Ok(())
}

const SUMMARY_COLUMNS: [&str; 13] = [
    "job", "index", "q", "d", "t", "relation", "size", "seed", "theorem", "hypothesis",
    "verdict", "lhs", "rhs",
];

fn summary_rows(records: &[ResultRecord]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for r in records {
        for rep in &r.reports {
            rows.push(vec![
                r.job.clone(),
                r.index.to_string(),
                r.input.q.to_string(),
                r.input.d.to_string(),
                r.input.t.to_string(),
                r.input.relation.to_string(),
                r.input.size.map_or(String::new(), |s| s.to_string()),
                r.input.seed.to_string(),
                rep.theorem.to_string(),
                rep.hypothesis_satisfied.to_string(),
                verdict_name(rep.verdict).to_string(),
                format!("{:e}", rep.lhs_approx),
                format!("{:e}", rep.rhs),
            ]);
        }
    }
    rows
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Vacuous => "vacuous",
        Verdict::ConditionalFail => "conditional_fail",
        Verdict::Fail => "fail",
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One row per `(record, report)`.
pub fn write_csv<W: Write>(records: &[ResultRecord], mut w: W) -> Result<()> {
    writeln!(w, "{}", SUMMARY_COLUMNS.join(","))?;
    for row in summary_rows(records) {
        let fields: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}

/// Tab-separated summary with a `#` header, readable by gnuplot.
pub fn write_tsv<W: Write>(records: &[ResultRecord], mut w: W) -> Result<()> {
    writeln!(w, "# {}", SUMMARY_COLUMNS.join("\t"))?;
    for row in summary_rows(records) {
        writeln!(w, "{}", row.join("\t"))?;
    }
    Ok(())
}

/// A fixed configuration exercising every counting path, the oracles and
/// the hypothesis-free statements.
pub fn selftest_config(seed: u64) -> ExperimentConfig {
    let job = |id: &str, q: u64, d: usize, relation: RelationKind, recipe: &str| JobConfig {
        id: id.into(),
        q,
        d,
        relation,
        t: 1,
        recipe: recipe.into(),
        seed,
        repetitions: 3,
        loops: true,
        paths: vec![1, 2, 3],
        cycles: vec![2, 3, 4],
        nondegenerate: vec![3, 4],
        tree_bound: vec![4],
        trees: vec![vec![0], vec![0, 0]],
        oracle: true,
        theorems: vec![TheoremId::Edge, TheoremId::Upper, TheoremId::Recursion, TheoremId::Concise],
        params: VerifyParams::default(),
        function_max: 5,
    };
    let mut chikr = job("chikr", 5, 2, RelationKind::Prod, "randn:m=12");
    chikr.theorems = vec![TheoremId::Chikr];
    ExperimentConfig {
        jobs: vec![
            job("dist-5-2", 5, 2, RelationKind::Dist, "randn:m=9"),
            job("prod-5-2", 5, 2, RelationKind::Prod, "randn:m=9"),
            job("dist-3-3", 3, 3, RelationKind::Dist, "rand:p=0.3"),
            chikr,
        ],
        output: OutputConfig::default(),
    }
}

pub fn selftest(seed: u64) -> Result<Vec<ResultRecord>> {
    run(&selftest_config(seed), RunOptions::default())
}
