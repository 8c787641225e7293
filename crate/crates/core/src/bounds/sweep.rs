//! Seeded sweeps of one statement list over many generated sets.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{BoundReport, TheoremId, Verdict};
use super::verify::{verify, VerifyInput, VerifyParams};
use crate::ensembles::{generate_set, instance_seed, random_grid_function, random_pair_function, SetRecipe};
use crate::error::Result;
use crate::field::FieldCtx;
use crate::graph::build_graph;
use crate::relation::{GraphSpec, RelationKind};

fn default_repetitions() -> usize {
    1
}

fn default_true() -> bool {
    true
}

fn default_function_max() -> u64 {
    5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub q: u64,
    pub d: usize,
    pub relation: RelationKind,
    pub t: u32,
    /// Recipe text; random recipes are reseeded per instance.
    pub recipe: String,
    pub theorems: Vec<TheoremId>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub params: VerifyParams,
    #[serde(default = "default_true")]
    pub loops: bool,
    /// Largest value of the random functions fed to functional statements.
    #[serde(default = "default_function_max")]
    pub function_max: u64,
}

impl SweepConfig {
    pub fn spec(&self) -> GraphSpec {
        let spec = GraphSpec::new(self.relation.relation(), self.t);
        if self.loops {
            spec
        } else {
            spec.without_loops()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepInstance {
    pub index: usize,
    pub seed: u64,
    pub size: usize,
    pub reports: Vec<BoundReport>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Tally {
    pub pass: usize,
    pub vacuous: usize,
    pub conditional_fail: usize,
    pub fail: usize,
    /// Smallest `rhs - lhs` over reports whose hypothesis held.
    pub worst_slack: Option<f64>,
}

impl Tally {
    fn add(&mut self, r: &BoundReport) {
        match r.verdict {
            Verdict::Pass => self.pass += 1,
            Verdict::Vacuous => self.vacuous += 1,
            Verdict::ConditionalFail => self.conditional_fail += 1,
            Verdict::Fail => self.fail += 1,
        }
        if r.hypothesis_satisfied {
            self.worst_slack = Some(self.worst_slack.map_or(r.slack, |s| s.min(r.slack)));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub instances: Vec<SweepInstance>,
    pub tallies: BTreeMap<TheoremId, Tally>,
}

impl SweepSummary {
    pub fn reports(&self) -> impl Iterator<Item = &BoundReport> {
        self.instances.iter().flat_map(|i| &i.reports)
    }

    pub fn has_violation(&self) -> bool {
        self.tallies.values().any(|t| t.fail > 0)
    }
}

/// Runs every statement on every instance. Instances run in parallel and
/// are reported in index order.
pub fn verify_sweep(config: &SweepConfig) -> Result<SweepSummary> {
    if config.theorems.is_empty() {
        return Ok(SweepSummary {
            instances: Vec::new(),
            tallies: BTreeMap::new(),
        });
    }
    let ctx = FieldCtx::new(config.q, config.d)?;
    let recipe: SetRecipe = config.recipe.parse()?;
    let spec = config.spec();
    let instances: Result<Vec<SweepInstance>> = (0..config.repetitions)
        .into_par_iter()
        .map(|index| {
            run_instance(ctx, &recipe, &spec, config, index).map_err(|e| e.at_instance(index))
        })
        .collect();
    let instances = instances?;
    let mut tallies: BTreeMap<TheoremId, Tally> = BTreeMap::new();
    for r in instances.iter().flat_map(|i| &i.reports) {
        tallies.entry(r.theorem).or_default().add(r);
    }
    Ok(SweepSummary { instances, tallies })
}

fn run_instance(
    ctx: FieldCtx,
    recipe: &SetRecipe,
    spec: &GraphSpec,
    config: &SweepConfig,
    index: usize,
) -> Result<SweepInstance> {
    let seed = instance_seed(config.seed, index as u64);
    let set = generate_set(ctx, &recipe.clone().with_seed(seed))?;
    let graph = build_graph(&set, spec)?;
    let mut reports = Vec::with_capacity(config.theorems.len());
    for &theorem in &config.theorems {
        let report = match theorem {
            TheoremId::Chikr => {
                let f = random_grid_function(ctx, instance_seed(seed, 1), config.function_max)?;
                let g = random_grid_function(ctx, instance_seed(seed, 2), config.function_max)?;
                verify(theorem, &VerifyInput::Functional { ctx, t: config.t, f: &f, g: &g })?
            }
            TheoremId::TDist | TheoremId::TProd | TheoremId::Concise => {
                let n = graph.order();
                let f = random_pair_function(n, instance_seed(seed, 3), config.function_max, 0.5);
                let g = random_pair_function(n, instance_seed(seed, 4), config.function_max, 0.5);
                verify(theorem, &VerifyInput::Bilinear { graph: &graph, f: &f, g: &g })?
            }
            _ => verify(theorem, &VerifyInput::Graph { graph: &graph, params: &config.params })?,
        };
        reports.push(report);
    }
    Ok(SweepInstance {
        index,
        seed,
        size: set.len(),
        reports,
    })
}

