//! Evaluates each statement's hypothesis and inequality on one instance.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::constants::{
    c_constant, check_delta, gamma, k_constant, nondegenerate_epsilon, path_growth,
    size_threshold_exponent,
};
use super::report::{BoundReport, TheoremId};
use crate::counting::{
    bilinear_form, cycle_count, nondegenerate_count, path_totals, tree_embeddings,
    PairFunction, TreeShape,
};
use crate::error::{Error, Result};
use crate::exact::to_f64;
use crate::field::FieldCtx;
use crate::graph::{build_graph, truncate, Graph};
use crate::relation::{GraphSpec, Relation};

/// `log 2` to double precision.
const LN_2: f64 = std::f64::consts::LN_2;
/// Size hypotheses within this relative margin of their threshold count as unmet.
const HYPOTHESIS_MARGIN: f64 = 1e-12;
/// Largest `q^d` for the functional inequality (quadratic in `q^d`).
pub const MAX_FUNCTIONAL_GRID: u64 = 1 << 14;

/// Parameters a statement quantifies over besides the set itself.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyParams {
    /// Cycle length.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Path length.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Truncation level; defaults to `q^(2 epsilon / (r + 1))`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<TreeShape>,
}

/// What a statement is evaluated on.
#[derive(Debug, Clone, Copy)]
pub enum VerifyInput<'a> {
    Graph {
        graph: &'a Graph,
        params: &'a VerifyParams,
    },
    /// Nonnegative functions on all of `F_q^d`, indexed by rank.
    Functional {
        ctx: FieldCtx,
        t: u32,
        f: &'a [u64],
        g: &'a [u64],
    },
    /// Nonnegative pair functions on `E x E`.
    Bilinear {
        graph: &'a Graph,
        f: &'a PairFunction,
        g: &'a PairFunction,
    },
}

pub fn verify(theorem: TheoremId, input: &VerifyInput<'_>) -> Result<BoundReport> {
    match (theorem, *input) {
        (TheoremId::Edge, VerifyInput::Graph { graph, .. }) => graph.edge_report(),
        (TheoremId::Chikr, VerifyInput::Functional { ctx, t, f, g }) => chikr(ctx, t, f, g),
        (TheoremId::Upper, VerifyInput::Graph { graph, params }) => upper(graph, params),
        (TheoremId::Recursion, VerifyInput::Graph { graph, params }) => recursion(graph, params),
        (TheoremId::Chains, VerifyInput::Graph { graph, params }) => chains(graph, params),
        (TheoremId::TDist | TheoremId::TProd | TheoremId::Concise, VerifyInput::Bilinear { graph, f, g }) => {
            bilinear(theorem, graph, f, g)
        }
        (TheoremId::Main, VerifyInput::Graph { graph, params }) => main(graph, params),
        (TheoremId::Main2 | TheoremId::Maincor, VerifyInput::Graph { graph, params }) => {
            delta_cycles(theorem, graph, params)
        }
        (TheoremId::Nondeg, VerifyInput::Graph { graph, params }) => nondeg(graph, params),
        (TheoremId::Tree, VerifyInput::Graph { graph, params }) => tree(graph, params),
        (TheoremId::Trunc, VerifyInput::Graph { graph, params }) => trunc(graph, params),
        (TheoremId::Chikr, _) => Err(Error::MissingInput("functions f and g on F_q^d")),
        (TheoremId::TDist | TheoremId::TProd | TheoremId::Concise, _) => {
            Err(Error::MissingInput("pair functions f and g on E x E"))
        }
        (_, _) => Err(Error::MissingInput("a relation graph")),
    }
}

/// The constant `K` in `|residual| <= K q^((d-1)/2) (...)`: 1 for the dot
/// product, 2 for distances.
pub fn residual_constant(spec: &GraphSpec) -> Result<u32> {
    match spec.relation {
        Relation::DotProduct => Ok(1),
        Relation::Distance => Ok(2),
        Relation::Custom(_) => Err(Error::WrongRelation("theorem verification (built-in relations)")),
    }
}

fn builtin(graph: &Graph, what: &'static str) -> Result<u32> {
    graph.spec().require_nonzero(what)?;
    residual_constant(graph.spec())
}

fn big(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

fn int(v: &BigUint) -> BigInt {
    BigInt::from(v.clone())
}

fn text(v: impl ToString) -> Value {
    json!(v.to_string())
}

/// `|E|^a / q^b` exactly.
fn main_term(size: usize, a: usize, q: u32, b: usize) -> BigRational {
    BigRational::new(
        BigInt::from(size).pow(a as u32),
        BigInt::from(q).pow(b as u32),
    )
}

fn ratio_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::INFINITY)
}

/// `size >= q^exponent`, unmet within the margin.
fn size_at_least(size: usize, q: u32, exponent: f64) -> bool {
    size > 0 && (size as f64).ln() >= exponent * (q as f64).ln() + HYPOTHESIS_MARGIN
}

fn require<T: Copy>(v: Option<T>, what: &'static str) -> Result<T> {
    v.ok_or(Error::MissingInput(what))
}

fn chikr(ctx: FieldCtx, t: u32, f: &[u64], g: &[u64]) -> Result<BoundReport> {
    if t % ctx.q() == 0 {
        return Err(Error::ZeroParameter("the functional inequality"));
    }
    let n = ctx.space_size_capped("functional grid", MAX_FUNCTIONAL_GRID)?;
    for h in [f, g] {
        if h.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: h.len() });
        }
    }
    let t = t % ctx.q();
    let points: Vec<Vec<u32>> = (0..n as u64).map(|r| ctx.point_at(r).into_coords()).collect();
    let mut sum = BigUint::from(0u8);
    for (x, px) in points.iter().enumerate() {
        if f[x] == 0 {
            continue;
        }
        let row: u128 = points
            .iter()
            .enumerate()
            .filter(|(_, py)| ctx.dot_unchecked(px, py) == t)
            .map(|(y, _)| g[y] as u128)
            .sum();
        sum += BigUint::from(row) * f[x];
    }
    let l1 = |h: &[u64]| -> BigUint { h.iter().map(|&v| BigUint::from(v)).sum() };
    let l2 = |h: &[u64]| -> BigUint { h.iter().map(|&v| BigUint::from(v) * v).sum() };
    let (f1, g1, f2, g2) = (l1(f), l1(g), l2(f), l2(g));
    let q = BigInt::from(ctx.q());
    let centered = &q * int(&sum) - int(&f1) * int(&g1);
    let holds = &centered * &centered <= q.pow(ctx.d() as u32 + 1) * int(&f2) * int(&g2);
    let lhs = BigRational::new(centered, q).abs();
    let rhs = (ctx.q() as f64).powf((ctx.d() as f64 - 1.0) / 2.0)
        * (to_f64(&f2) * to_f64(&g2)).sqrt();
    let mut terms = BTreeMap::new();
    terms.insert("sum".into(), text(&sum));
    terms.insert("f_l1".into(), text(&f1));
    terms.insert("g_l1".into(), text(&g1));
    terms.insert("f_l2_sq".into(), text(&f2));
    terms.insert("g_l2_sq".into(), text(&g2));
    Ok(BoundReport::exact(TheoremId::Chikr, true, terms, lhs, rhs, holds))
}

fn upper(graph: &Graph, params: &VerifyParams) -> Result<BoundReport> {
    let constant = builtin(graph, "the path upper bound")?;
    let k = params.k.unwrap_or(2);
    if k == 0 {
        return Err(Error::OutOfRange("path length must be >= 1".into()));
    }
    let ctx = graph.ctx();
    let size = graph.order();
    let totals = path_totals(graph, k)?;
    let p_k = &totals[k];
    let x = path_growth(ctx.q(), ctx.d(), size, constant as f64);
    let rhs = size as f64 * x.powi(k as i32);
    let mut terms = BTreeMap::new();
    terms.insert("k".into(), json!(k));
    terms.insert("x".into(), json!(x));
    terms.insert("constant".into(), json!(constant));
    Ok(BoundReport::outward(TheoremId::Upper, true, terms, big(int(p_k)), rhs))
}

/// Odd: `(q P_{2k+1} - P_k^2)^2 <= K^2 q^(d+1) P_{2k}^2`.
/// Even: `(q P_{2k} - P_k P_{k-1})^2 <= K^2 q^(d+1) P_{2k} P_{2k-2}`.
fn recursion(graph: &Graph, params: &VerifyParams) -> Result<BoundReport> {
    let constant = builtin(graph, "the path recursion")?;
    let k = params.k.unwrap_or(1);
    if k == 0 {
        return Err(Error::OutOfRange("recursion needs k >= 1".into()));
    }
    let ctx = graph.ctx();
    let p: Vec<BigInt> = path_totals(graph, 2 * k + 1)?.iter().map(int).collect();
    let q = BigInt::from(ctx.q());
    let scale = BigInt::from(constant * constant) * q.pow(ctx.d() as u32 + 1);
    let half = constant as f64 * (ctx.q() as f64).powf((ctx.d() as f64 - 1.0) / 2.0);

    let odd = &q * &p[2 * k + 1] - &p[k] * &p[k];
    let odd_holds = &odd * &odd <= &scale * &p[2 * k] * &p[2 * k];
    let even = &q * &p[2 * k] - &p[k] * &p[k - 1];
    let even_holds = &even * &even <= &scale * &p[2 * k] * &p[2 * k - 2];

    let odd_lhs = BigRational::new(odd, q.clone()).abs();
    let even_lhs = BigRational::new(even, q).abs();
    let odd_rhs = half * p[2 * k].to_f64().unwrap_or(f64::INFINITY);
    let even_rhs = half
        * (p[2 * k].to_f64().unwrap_or(f64::INFINITY) * p[2 * k - 2].to_f64().unwrap_or(f64::INFINITY))
            .sqrt();
    let mut terms = BTreeMap::new();
    terms.insert("k".into(), json!(k));
    terms.insert("constant".into(), json!(constant));
    terms.insert("even_lhs".into(), text(super::report::format_rational(&even_lhs)));
    terms.insert("even_rhs".into(), json!(even_rhs));
    terms.insert("even_holds".into(), json!(even_holds));
    terms.insert("odd_holds".into(), json!(odd_holds));
    for (i, v) in p.iter().enumerate() {
        terms.insert(format!("p_{i}"), text(v));
    }
    Ok(BoundReport::exact(
        TheoremId::Recursion,
        true,
        terms,
        odd_lhs,
        odd_rhs,
        odd_holds && even_holds,
    ))
}

fn chains(graph: &Graph, params: &VerifyParams) -> Result<BoundReport> {
    builtin(graph, "the path count theorem")?;
    let k = require(params.k, "path length k")?;
    if k == 0 {
        return Err(Error::OutOfRange("path length must be >= 1".into()));
    }
    let ctx = graph.ctx();
    let (q, d) = (ctx.q(), ctx.d());
    let size = graph.order();
    let factor = k as f64 / LN_2;
    let half = (q as f64).powf((d as f64 + 1.0) / 2.0);
    let threshold = factor * half;
    let hypothesis = size as f64 > threshold * (1.0 + HYPOTHESIS_MARGIN);
    let totals = path_totals(graph, k)?;
    let expected = main_term(size, k + 1, q, k);
    let lhs = (big(int(&totals[k])) - &expected).abs();
    let rhs = factor * half * (size as f64 / q as f64).powi(k as i32);
    let mut terms = BTreeMap::new();
    terms.insert("k".into(), json!(k));
    terms.insert("size".into(), json!(size));
    terms.insert("threshold".into(), json!(threshold));
    terms.insert("p_k".into(), text(&totals[k]));
    terms.insert("main_term".into(), json!(ratio_f64(&expected)));
    Ok(BoundReport::outward(TheoremId::Chains, hypothesis, terms, lhs, rhs))
}

fn bilinear(theorem: TheoremId, graph: &Graph, f: &PairFunction, g: &PairFunction) -> Result<BoundReport> {
    builtin(graph, "the bilinear bound")?;
    match (theorem, &graph.spec().relation) {
        (TheoremId::TDist, Relation::Distance) | (TheoremId::TProd, Relation::DotProduct) => {}
        (TheoremId::Concise, _) => {}
        (TheoremId::TDist, _) => return Err(Error::WrongRelation("T_DIST (distance graphs)")),
        _ => return Err(Error::WrongRelation("T_PROD (dot-product graphs)")),
    }
    let ctx = graph.ctx();
    let q = ctx.q() as f64;
    let d = ctx.d() as f64;
    let v = bilinear_form(graph, f, g)?;
    let l1 = to_f64(&v.f_l1) * to_f64(&v.g_l1);
    let l2 = (to_f64(&v.f_l2_sq) * to_f64(&v.g_l2_sq)).sqrt();
    let marginals = (to_f64(&v.f_rows_sq) * to_f64(&v.g_rows_sq)).sqrt()
        + (to_f64(&v.f_cols_sq) * to_f64(&v.g_cols_sq)).sqrt();
    let first_exponent = if ctx.d() == 2 { -3.0 } else { -(d + 2.0) / 2.0 };
    let rhs = if theorem == TheoremId::TProd {
        2.0 * q.powf(d - 1.0) * l2 + q.powf((d - 3.0) / 2.0) * marginals
    } else {
        3.0 * q.powf(first_exponent) * l1
            + 4.0 * q.powf(d - 1.0) * l2
            + 4.0 * q.powf((d - 3.0) / 2.0) * marginals
    };
    let product = int(&v.f_l1) * int(&v.g_l1);
    let expected = BigRational::new(product, BigInt::from(ctx.q()).pow(2));
    let lhs = (big(int(&v.value)) - expected).abs();
    let mut terms = BTreeMap::new();
    terms.insert("value".into(), text(&v.value));
    terms.insert("f_l1".into(), text(&v.f_l1));
    terms.insert("g_l1".into(), text(&v.g_l1));
    terms.insert("f_l2_sq".into(), text(&v.f_l2_sq));
    terms.insert("g_l2_sq".into(), text(&v.g_l2_sq));
    terms.insert("f_rows_sq".into(), text(&v.f_rows_sq));
    terms.insert("g_rows_sq".into(), text(&v.g_rows_sq));
    terms.insert("f_cols_sq".into(), text(&v.f_cols_sq));
    terms.insert("g_cols_sq".into(), text(&v.g_cols_sq));
    terms.insert("first_exponent".into(), json!(first_exponent));
    Ok(BoundReport::outward(theorem, true, terms, lhs, rhs))
}

/// `|C_n - |E|^n / q^n|` and the main term.
fn cycle_deviation(graph: &Graph, n: usize) -> Result<(BigUint, BigRational, BigRational)> {
    let c = cycle_count(graph, n)?.total;
    let ctx = graph.ctx();
    let expected = main_term(graph.order(), n, ctx.q(), n);
    let lhs = (big(int(&c)) - &expected).abs();
    Ok((c, expected, lhs))
}

fn main(graph: &Graph, params: &VerifyParams) -> Result<BoundReport> {
    builtin(graph, "the cycle count theorem")?;
    let n = require(params.n, "cycle length n")?;
    if n < 4 {
        return Err(Error::OutOfRange(format!("cycle count theorem needs n >= 4, got {n}")));
    }
    let ctx = graph.ctx();
    let q = ctx.q() as f64;
    let d = ctx.d() as f64;
    let size = graph.order() as f64;
    let h = (n / 2) as f64;
    let g_term = 12.0 * q.powf(gamma(ctx.d()));
    let half = q.powf((d + 1.0) / 2.0) / size;
    let hyp_square = 8.0 * q.powf(d + 2.0) / (size * size);
    let hypothesis_value = g_term + hyp_square + (24.0 + 12.0 * h) * half;
    let hypothesis = graph.order() > 0 && hypothesis_value <= 1.0 - HYPOTHESIS_MARGIN;
    let (square, linear) = match n {
        4 => (8.0 * q.powf(d + 2.0), 28.0),
        5 => (8.0 * q.powf((2.0 * d + 3.0) / 2.0), 32.0),
        _ => (8.0 * q.powf(d + 1.0), 24.0 + 12.0 * h),
    };
    let factor = g_term + square / (size * size) + linear * half;
    let (c, expected, lhs) = cycle_deviation(graph, n)?;
    let rhs = ratio_f64(&expected) * factor;
    let mut terms = BTreeMap::new();
    terms.insert("n".into(), json!(n));
    terms.insert("gamma_term".into(), json!(g_term));
    terms.insert("hypothesis_square_term".into(), json!(hyp_square));
    terms.insert("conclusion_square_term".into(), json!(square / (size * size)));
    terms.insert("linear_term".into(), json!((24.0 + 12.0 * h) * half));
    terms.insert("hypothesis_value".into(), json!(hypothesis_value));
    terms.insert("cycles".into(), text(&c));
    terms.insert("main_term".into(), json!(ratio_f64(&expected)));
    Ok(BoundReport::outward(TheoremId::Main, hypothesis, terms, lhs, rhs))
}

fn delta_cycles(theorem: TheoremId, graph: &Graph, params: &VerifyParams) -> Result<BoundReport> {
    builtin(graph, "the cycle count theorem")?;
    let n = require(params.n, "cycle length n")?;
    let min_n = if theorem == TheoremId::Main2 { 5 } else { 4 };
    if n < min_n {
        return Err(Error::OutOfRange(format!("{theorem} needs n >= {min_n}, got {n}")));
    }
    let delta = require(params.delta, "delta")?;
    check_delta(n, delta)?;
    let ctx = graph.ctx();
    let q = ctx.q() as f64;
    let exponent = size_threshold_exponent(n, ctx.d(), delta)?;
    let hypothesis = size_at_least(graph.order(), ctx.q(), exponent);
    let k_n = k_constant(n)?;
    let decay = q.powf(-(n as f64 / 2.0 - 1.0) * delta);
    let (c, expected, lhs) = cycle_deviation(graph, n)?;
    let rhs = to_f64(&k_n) * ratio_f64(&expected) * decay;
    let mut terms = BTreeMap::new();
    terms.insert("n".into(), json!(n));
    terms.insert("delta".into(), json!(delta));
    terms.insert("threshold_exponent".into(), json!(exponent));
    terms.insert("threshold".into(), json!(q.powf(exponent)));
    terms.insert("k_n".into(), text(&k_n));
    terms.insert("decay".into(), json!(decay));
    terms.insert("cycles".into(), text(&c));
    terms.insert("main_term".into(), json!(ratio_f64(&expected)));
    Ok(BoundReport::outward(theorem, hypothesis, terms, lhs, rhs))
}

fn nondeg(graph: &Graph, params: &VerifyParams) -> Result<BoundReport> {
    builtin(graph, "the non-degenerate cycle theorem")?;
    let n = require(params.n, "cycle length n")?;
    if n < 4 {
        return Err(Error::OutOfRange(format!("NONDEG needs n >= 4, got {n}")));
    }
    let delta = require(params.delta, "delta")?;
    check_delta(n, delta)?;
    let ctx = graph.ctx();
    let q = ctx.q() as f64;
    let d = ctx.d() as f64;
    let exponent = size_threshold_exponent(n, ctx.d(), delta)?;
    let epsilon = nondegenerate_epsilon(n, delta)?;
    let hypothesis = size_at_least(graph.order(), ctx.q(), exponent);
    let k_n = to_f64(&k_constant(n)?);
    let c_n = c_constant(n)?;
    let factor = k_n * q.powf(-(n as f64 / 2.0 - 1.0) * delta)
        + 2.0 * n as f64 * q.powf(-2.0 / (n as f64 - 1.0))
        + to_f64(&c_n) * q.powf(-(d - 3.0) / 2.0 - epsilon);
    let count = nondegenerate_count(graph, n)?;
    let expected = main_term(graph.order(), n, ctx.q(), n);
    let lhs = (big(int(&count)) - &expected).abs();
    let rhs = ratio_f64(&expected) * factor;
    let mut terms = BTreeMap::new();
    terms.insert("n".into(), json!(n));
    terms.insert("delta".into(), json!(delta));
    terms.insert("epsilon".into(), json!(epsilon));
    terms.insert("threshold_exponent".into(), json!(exponent));
    terms.insert("c_n".into(), text(&c_n));
    terms.insert("nondegenerate".into(), text(&count));
    terms.insert("main_term".into(), json!(ratio_f64(&expected)));
    terms.insert("factor".into(), json!(factor));
    Ok(BoundReport::outward(TheoremId::Nondeg, hypothesis, terms, lhs, rhs))
}

/// `lambda`, given directly or as `q^(2 epsilon / (r + 1))`.
fn truncation_level(q: u32, params: &VerifyParams, r: usize) -> Result<f64> {
    match (params.lambda, params.epsilon) {
        (Some(l), _) => Ok(l),
        (None, Some(e)) => Ok((q as f64).powf(2.0 * e / (r as f64 + 1.0))),
        (None, None) => Err(Error::MissingInput("lambda or epsilon")),
    }
}

fn tree(graph: &Graph, params: &VerifyParams) -> Result<BoundReport> {
    builtin(graph, "the tree count theorem")?;
    let shape = params.tree.as_ref().ok_or(Error::MissingInput("tree shape"))?;
    let epsilon = require(params.epsilon, "epsilon")?;
    let r = shape.edge_count();
    let ctx = graph.ctx();
    let (q, d) = (ctx.q() as f64, ctx.d() as f64);
    let size = graph.order();
    let lambda = truncation_level(ctx.q(), params, r)?;
    let hypothesis = size_at_least(size, ctx.q(), (d + 1.0) / 2.0 + epsilon);
    let cut = truncate(graph.set(), graph.spec(), lambda)?;
    let reduced = build_graph(&cut.kept, graph.spec())?;
    let count = tree_embeddings(&reduced, shape)?;
    let expected = main_term(size, r + 1, ctx.q(), r);
    let lhs = (big(int(&count)) - &expected).abs();
    let main = ratio_f64(&expected);
    let rhs = 4.0 * r as f64
        * main
        * (1.0 / lambda + lambda.powf((r as f64 - 1.0) / 2.0) * q.powf((d + 1.0) / 2.0) / size as f64);
    let removal_bound = 2.0 * size as f64 / lambda;
    let mut terms = BTreeMap::new();
    terms.insert("r".into(), json!(r));
    terms.insert("epsilon".into(), json!(epsilon));
    terms.insert("lambda".into(), json!(lambda));
    terms.insert("kept".into(), json!(cut.kept.len()));
    terms.insert("removed".into(), json!(cut.removed_count));
    terms.insert("removal_bound".into(), json!(removal_bound));
    terms.insert("removal_within_bound".into(), json!(cut.within_removal_bound(size)));
    terms.insert("embeddings".into(), text(&count));
    terms.insert("main_term".into(), json!(main));
    terms.insert("theorem_form_rhs".into(), json!(8.0 * main / lambda));
    Ok(BoundReport::outward(TheoremId::Tree, hypothesis, terms, lhs, rhs).with_note(
        "bound uses the factor |E|^(r+1)/q^r with both lambda terms; theorem_form_rhs keeps only 8 main/lambda",
    ))
}

fn trunc(graph: &Graph, params: &VerifyParams) -> Result<BoundReport> {
    builtin(graph, "the truncation bound")?;
    let r = params.tree.as_ref().map_or(1, TreeShape::edge_count);
    let lambda = truncation_level(graph.ctx().q(), params, r)?;
    let size = graph.order();
    let cut = truncate(graph.set(), graph.spec(), lambda)?;
    let mut terms = BTreeMap::new();
    terms.insert("lambda".into(), json!(lambda));
    terms.insert("kept".into(), json!(cut.kept.len()));
    terms.insert("degree_cap".into(), json!(cut.degree_cap));
    let lhs = big(BigInt::from(cut.removed_count));
    Ok(BoundReport::exact(
        TheoremId::Trunc,
        lambda > 0.0,
        terms,
        lhs,
        2.0 * size as f64 / lambda,
        cut.within_removal_bound(size),
    ))
}
