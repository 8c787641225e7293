//! Relation graphs on a point set, the edge-count identity, and the
//! degree truncation `E*`.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde_json::json;

use crate::bounds::{BoundReport, TheoremId};
use crate::error::{Error, Result};
use crate::exact::BitMatrix;
use crate::field::{FieldCtx, PointSet};
use crate::relation::{GraphSpec, Relation};

/// Largest vertex count for a materialised graph.
pub const MAX_VERTICES: usize = 20_000;

const SYMMETRY_EXHAUSTIVE_LIMIT: usize = 500;
const SYMMETRY_SAMPLES: usize = 1_000;

/// The relation graph on `E` with exact 0/1 adjacency.
#[derive(Debug, Clone)]
pub struct Graph {
    set: PointSet,
    spec: GraphSpec,
    adj: BitMatrix,
    neighbors: Vec<Vec<u32>>,
    symmetric: bool,
}

impl Graph {
    pub fn set(&self) -> &PointSet {
        &self.set
    }

    pub fn spec(&self) -> &GraphSpec {
        &self.spec
    }

    pub fn ctx(&self) -> FieldCtx {
        self.set.ctx()
    }

    pub fn order(&self) -> usize {
        self.set.len()
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.neighbors[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj.get(i, j)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.neighbors.iter().map(|n| n.len() as u64).collect()
    }

    /// Number of related ordered pairs, diagonal included.
    pub fn ordered_edge_count(&self) -> u64 {
        self.adj.count_ones()
    }

    pub fn loop_count(&self) -> u64 {
        (0..self.order()).filter(|&i| self.adj.get(i, i)).count() as u64
    }

    /// Edges in the usual sense: unordered pairs, each loop counted once.
    pub fn undirected_edge_count(&self) -> u64 {
        let loops = self.loop_count();
        (self.ordered_edge_count() - loops) / 2 + loops
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub(crate) fn require_symmetric(&self) -> Result<()> {
        if self.symmetric {
            return Ok(());
        }
        let (i, j) = (0..self.order())
            .flat_map(|i| self.adj.row_ones(i).map(move |j| (i, j)))
            .find(|&(i, j)| !self.adj.get(j, i))
            .expect("asymmetric graph has an unmatched entry");
        Err(Error::AsymmetricRelation {
            x: self.set.point(i).to_vec(),
            y: self.set.point(j).to_vec(),
        })
    }

    /// Induced subgraph on the given vertex positions, same spec.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let set = self.set.select(keep.iter().copied());
        let n = set.len();
        let pos: Vec<usize> = set
            .iter()
            .map(|p| self.set.position(p).expect("subset point"))
            .collect();
        let mut adj = BitMatrix::zeros(n);
        for (a, &i) in pos.iter().enumerate() {
            for (b, &j) in pos.iter().enumerate() {
                if self.adj.get(i, j) {
                    adj.set(a, b, true);
                }
            }
        }
        Graph::from_parts(set, self.spec.clone(), adj)
    }

    fn from_parts(set: PointSet, spec: GraphSpec, adj: BitMatrix) -> Graph {
        let neighbors: Vec<Vec<u32>> = (0..adj.n())
            .map(|i| adj.row_ones(i).map(|j| j as u32).collect())
            .collect();
        let symmetric = adj.is_symmetric();
        Graph {
            set,
            spec,
            adj,
            neighbors,
            symmetric,
        }
    }

    /// Adjacency-list export: one line per vertex, its index then its neighbours.
    pub fn write_adjacency_list<W: Write>(&self, mut w: W) -> Result<()> {
        for (i, nbrs) in self.neighbors.iter().enumerate() {
            write!(w, "{i}")?;
            for j in nbrs {
                write!(w, " {j}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    /// The edge-count identity: `N = |E|^2 / q + R` with
    /// `|R| <= K q^((d-1)/2) |E|`, `K = 2` for distance and `K = 1` for the
    /// dot product. Checked exactly as `(qN - |E|^2)^2 <= K^2 q^(d+1) |E|^2`.
    pub fn edge_report(&self) -> Result<BoundReport> {
        self.spec.require_nonzero("the edge-count identity")?;
        let constant: u64 = match self.spec.relation {
            Relation::Distance => 2,
            Relation::DotProduct => 1,
            Relation::Custom(_) => {
                return Err(Error::WrongRelation("the edge-count identity (built-in relations)"))
            }
        };
        let ctx = self.ctx();
        let q = BigInt::from(ctx.q());
        let size = BigInt::from(self.order());
        let n = BigInt::from(self.ordered_edge_count());
        let centered = &q * &n - &size * &size;
        let lhs_sq = &centered * &centered;
        let rhs_sq = BigInt::from(constant * constant)
            * q.pow(ctx.d() as u32 + 1)
            * &size
            * &size;
        let holds = lhs_sq <= rhs_sq;
        let residual = BigRational::new(centered.clone(), q.clone());
        let lhs = residual.abs();
        let rhs = constant as f64
            * (ctx.q() as f64).powf((ctx.d() as f64 - 1.0) / 2.0)
            * self.order() as f64;
        let mut terms = BTreeMap::new();
        terms.insert("ordered_pairs".into(), json!(self.ordered_edge_count().to_string()));
        terms.insert("edges".into(), json!(self.undirected_edge_count().to_string()));
        terms.insert("loops".into(), json!(self.loop_count().to_string()));
        terms.insert("residual".into(), json!(residual.to_string()));
        terms.insert("constant".into(), json!(constant));
        Ok(BoundReport::exact(
            TheoremId::Edge,
            true,
            terms,
            lhs,
            rhs,
            holds,
        ))
    }
}

/// Builds the graph of `spec` on `set`.
pub fn build_graph(set: &PointSet, spec: &GraphSpec) -> Result<Graph> {
    let n = set.len();
    if n > MAX_VERTICES {
        return Err(Error::too_large("vertex set", n as u64, MAX_VERTICES as u64));
    }
    let ctx = set.ctx();
    let t = spec.t % ctx.q();
    if let Relation::Custom(_) = spec.relation {
        if spec.require_symmetric {
            audit_symmetry(set, spec)?;
        }
    }
    let words = n.div_ceil(64);
    let rows: Result<Vec<Vec<u64>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = set.point(i);
            let mut row = vec![0u64; words];
            for j in 0..n {
                if i == j && !spec.loops {
                    continue;
                }
                let v = spec.relation.eval(&ctx, x, set.point(j)).ok_or_else(|| {
                    Error::OutOfRange(format!(
                        "relation undefined at ({:?}, {:?})",
                        x,
                        set.point(j)
                    ))
                })?;
                if v == t {
                    row[j / 64] |= 1 << (j % 64);
                }
            }
            Ok(row)
        })
        .collect();
    let adj = BitMatrix::from_rows(n, rows?);
    let graph = Graph::from_parts(set.clone(), spec.clone(), adj);
    if spec.require_symmetric && !graph.symmetric {
        graph.require_symmetric()?;
    }
    Ok(graph)
}

/// Checks `[phi(x,y) = t] == [phi(y,x) = t]`: exhaustively on small sets,
/// otherwise on a fixed-seed sample of pairs.
fn audit_symmetry(set: &PointSet, spec: &GraphSpec) -> Result<()> {
    let ctx = set.ctx();
    let n = set.len();
    let check = |i: usize, j: usize| -> Result<()> {
        let (x, y) = (set.point(i), set.point(j));
        if spec.related(&ctx, x, y)? != spec.related(&ctx, y, x)? {
            return Err(Error::AsymmetricRelation {
                x: x.to_vec(),
                y: y.to_vec(),
            });
        }
        Ok(())
    };
    if n <= SYMMETRY_EXHAUSTIVE_LIMIT {
        for i in 0..n {
            for j in i + 1..n {
                check(i, j)?;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_5eed);
        for _ in 0..SYMMETRY_SAMPLES {
            let i = (rng.next_u64() % n as u64) as usize;
            let j = (rng.next_u64() % n as u64) as usize;
            check(i, j)?;
        }
    }
    Ok(())
}

/// The truncated set `E*` of points whose degree in `E` is at most `lambda |E| / q`.
#[derive(Debug, Clone)]
pub struct TruncationResult {
    pub kept: PointSet,
    pub removed_count: usize,
    pub lambda: f64,
    pub degree_cap: f64,
}

impl TruncationResult {
    /// `|E \ E*| <= 2|E| / lambda`, compared as `removed * lambda <= 2|E|`.
    pub fn within_removal_bound(&self, original_size: usize) -> bool {
        self.removed_count as f64 * self.lambda <= 2.0 * original_size as f64 * (1.0 + 1e-12)
    }
}

pub fn truncate(set: &PointSet, spec: &GraphSpec, lambda: f64) -> Result<TruncationResult> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::OutOfRange(format!("lambda must be positive, got {lambda}")));
    }
    let cap = lambda * set.len() as f64 / set.ctx().q() as f64;
    let mut result = truncate_with_cap(set, set, spec, cap)?;
    result.lambda = lambda;
    Ok(result)
}

/// Keeps the points of `candidates` whose degree measured against `reference`
/// is at most `cap`.
pub fn truncate_with_cap(
    candidates: &PointSet,
    reference: &PointSet,
    spec: &GraphSpec,
    cap: f64,
) -> Result<TruncationResult> {
    spec.require_nonzero("truncation")?;
    let ctx = reference.ctx();
    let degrees: Result<Vec<u64>> = candidates
        .iter()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|x| {
            let mut deg = 0u64;
            for (j, y) in reference.iter().enumerate() {
                if !spec.loops && reference.position(x) == Some(j) {
                    continue;
                }
                if spec.related(&ctx, x, y)? {
                    deg += 1;
                }
            }
            Ok(deg)
        })
        .collect();
    let keep: Vec<usize> = degrees?
        .iter()
        .enumerate()
        .filter(|&(_, &deg)| deg as f64 <= cap)
        .map(|(i, _)| i)
        .collect();
    let kept = candidates.select(keep);
    Ok(TruncationResult {
        removed_count: candidates.len() - kept.len(),
        kept,
        lambda: cap * ctx.q() as f64 / reference.len().max(1) as f64,
        degree_cap: cap,
    })
}
