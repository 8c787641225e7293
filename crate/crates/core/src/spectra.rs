//! Spheres, the Fourier transform on `F_q^d`, sphere and coefficient
//! bounds, and the smoothing-order estimate for relation operators.
//!
//! The transform is normalised as `f^(m) = q^-d sum_x chi(-x.m) f(x)` with
//! inverse `f(x) = sum_m chi(x.m) f^(m)`.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::le_outward;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, PointSet};
use crate::graph::build_graph;
use crate::relation::GraphSpec;

/// Largest `q^d` for a dense grid function.
pub const MAX_GRID: u64 = 1 << 22;
/// Largest `q^d` for the materialised operator in [`smoothing_order`].
pub const MAX_SMOOTHING_GRID: u64 = 10_000;
pub const POWER_ITERATION_CAP: usize = 10_000;
pub const POWER_ITERATION_TOLERANCE: f64 = 1e-9;
const POWER_ITERATION_SEED: u64 = 0x0005_eed0_f0e1;

/// `S_t = { x : ||x|| = t }`.
pub fn sphere(ctx: FieldCtx, t: u32) -> Result<PointSet> {
    let n = ctx.space_size_capped("sphere enumeration", MAX_GRID)?;
    let t = t % ctx.q();
    let ranks: Vec<u64> = (0..n as u64)
        .into_par_iter()
        .filter(|&r| ctx.norm_unchecked(ctx.point_at(r).coords()) == t)
        .collect();
    PointSet::from_ranks(ctx, ranks)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "values", rename_all = "lowercase")]
pub enum GridValues {
    Int(Vec<i64>),
    Complex(Vec<Complex64>),
}

/// A function on all of `F_q^d`, indexed by lexicographic rank.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFunction {
    ctx: FieldCtx,
    values: GridValues,
}

impl GridFunction {
    pub fn from_ints(ctx: FieldCtx, values: Vec<i64>) -> Result<Self> {
        check_grid(ctx, values.len())?;
        Ok(GridFunction {
            ctx,
            values: GridValues::Int(values),
        })
    }

    pub fn from_complex(ctx: FieldCtx, values: Vec<Complex64>) -> Result<Self> {
        check_grid(ctx, values.len())?;
        Ok(GridFunction {
            ctx,
            values: GridValues::Complex(values),
        })
    }

    /// The indicator function of `set`.
    pub fn indicator(set: &PointSet) -> Result<Self> {
        let ctx = set.ctx();
        let n = ctx.space_size_capped("grid function", MAX_GRID)?;
        let mut values = vec![0i64; n];
        for &r in set.ranks() {
            values[r as usize] = 1;
        }
        Self::from_ints(ctx, values)
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn len(&self) -> usize {
        match &self.values {
            GridValues::Int(v) => v.len(),
            GridValues::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn values(&self) -> &GridValues {
        &self.values
    }

    pub fn get(&self, idx: usize) -> Complex64 {
        match &self.values {
            GridValues::Int(v) => Complex64::new(v[idx] as f64, 0.0),
            GridValues::Complex(v) => v[idx],
        }
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    /// `sum_x |f(x)|^2`.
    pub fn l2_squared(&self) -> f64 {
        (0..self.len()).map(|i| self.get(i).norm_sqr()).sum()
    }
}

fn check_grid(ctx: FieldCtx, len: usize) -> Result<()> {
    let n = ctx.space_size_capped("grid function", MAX_GRID)?;
    if len != n {
        return Err(Error::LengthMismatch { expected: n, got: len });
    }
    Ok(())
}

/// `f^(m) = q^-d sum_x chi(-x.m) f(x)`.
pub fn fourier(f: &GridFunction) -> GridFunction {
    let ctx = f.ctx;
    let mut values = f.to_complex();
    transform(ctx, &mut values, -1);
    let scale = (ctx.q() as f64).powi(-(ctx.d() as i32));
    for v in values.iter_mut() {
        *v *= scale;
    }
    GridFunction {
        ctx,
        values: GridValues::Complex(values),
    }
}

/// `f(x) = sum_m chi(x.m) f^(m)`.
pub fn inverse_fourier(f: &GridFunction) -> GridFunction {
    let ctx = f.ctx;
    let mut values = f.to_complex();
    transform(ctx, &mut values, 1);
    GridFunction {
        ctx,
        values: GridValues::Complex(values),
    }
}

/// Unnormalised transform with kernel `chi(sign * x.m)`, one axis at a time.
fn transform(ctx: FieldCtx, values: &mut [Complex64], sign: i64) {
    let q = ctx.q() as usize;
    let table = ctx.character_table();
    let mut stride = values.len();
    for _ in 0..ctx.d() {
        stride /= q;
        let block = q * stride;
        values.par_chunks_mut(block).for_each(|chunk| {
            let mut line = vec![Complex64::new(0.0, 0.0); q];
            let mut out = vec![Complex64::new(0.0, 0.0); q];
            for inner in 0..stride {
                for (x, l) in line.iter_mut().enumerate() {
                    *l = chunk[x * stride + inner];
                }
                for (m, o) in out.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (x, l) in line.iter().enumerate() {
                        let e = (sign.rem_euclid(q as i64) as usize * x % q) * m % q;
                        acc += table[e] * l;
                    }
                    *o = acc;
                }
                for (m, o) in out.iter().enumerate() {
                    chunk[m * stride + inner] = *o;
                }
            }
        });
    }
}

/// `S_t^`, the transform of the sphere's indicator.
pub fn sphere_transform(ctx: FieldCtx, t: u32) -> Result<GridFunction> {
    Ok(fourier(&GridFunction::indicator(&sphere(ctx, t)?)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpectralPasses {
    /// `||S_t| - q^(d-1)| <= q^(d/2)`.
    pub size: bool,
    /// `|S_t| = q +- 1`, only for `d = 2`.
    pub two_dim: Option<bool>,
    /// `max_{m != 0} |S_t^(m)| <= 2 q^(-(d+1)/2)`.
    pub coeff: bool,
    /// `|S_t| <= 2 q^(d-1)`.
    pub upper: bool,
}

impl SpectralPasses {
    pub fn all(&self) -> bool {
        self.size && self.two_dim.unwrap_or(true) && self.coeff && self.upper
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub q: u32,
    pub d: usize,
    pub t: u32,
    pub sphere_size: u64,
    /// `|S_t| - q^(d-1)`.
    pub size_deviation: i64,
    /// `q^(d/2)`.
    pub size_bound: f64,
    pub max_nonzero_coeff: f64,
    /// `2 q^(-(d+1)/2)`.
    pub coeff_bound: f64,
    pub passes: SpectralPasses,
}

pub fn spectral_report(ctx: FieldCtx, t: u32) -> Result<SpectralReport> {
    let q = ctx.q();
    let t = t % q;
    if t == 0 {
        return Err(Error::ZeroParameter("spectral report"));
    }
    let d = ctx.d();
    let set = sphere(ctx, t)?;
    let size = set.len() as u64;
    let main = (q as i64).pow(d as u32 - 1);
    let deviation = size as i64 - main;
    let transform = fourier(&GridFunction::indicator(&set)?);
    let max_coeff = (1..transform.len())
        .map(|m| transform.get(m).norm())
        .fold(0.0, f64::max);
    let qf = q as f64;
    let coeff_bound = 2.0 * qf.powf(-(d as f64 + 1.0) / 2.0);
    let passes = SpectralPasses {
        size: (deviation as i128).pow(2) <= (q as i128).pow(d as u32),
        two_dim: (d == 2).then(|| size == q as u64 - 1 || size == q as u64 + 1),
        coeff: le_outward(max_coeff, coeff_bound),
        upper: size as i64 <= 2 * main,
    };
    Ok(SpectralReport {
        q,
        d,
        t,
        sphere_size: size,
        size_deviation: deviation,
        size_bound: qf.powf(d as f64 / 2.0),
        max_nonzero_coeff: max_coeff,
        coeff_bound,
        passes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothingReport {
    pub q: u32,
    pub d: usize,
    pub t: u32,
    pub relation: String,
    /// `(d - 1) - log_q(sigma_max)`; absent when `sigma_max = 0`.
    pub alpha_estimate: Option<f64>,
    /// Largest singular value of the mean-stripped operator matrix.
    pub sigma_max: f64,
    /// `sigma_max / q^((d-1)/2)`.
    pub c_constant: f64,
    /// `sigma_max <= 2 q^((d-1)/2)`.
    pub within_c_bound: bool,
    /// Extremes over nonempty rows and columns of `M(x, y) = [phi(x, y) = t]`.
    pub size_condition_min: u64,
    pub size_condition_max: u64,
    pub row_sum_min: u64,
    pub row_sum_max: u64,
    pub col_sum_min: u64,
    pub col_sum_max: u64,
    pub empty_rows: u64,
    pub empty_cols: u64,
    /// Every nonempty row and column sum within `q^(d/2) + 1` of `q^(d-1)`.
    pub size_condition_holds: bool,
    pub iterations: usize,
    pub converged: bool,
}

/// Power iteration on `M0^T M0` with `M0 = M (I - J/N)`, the operator with
/// its constant Fourier mode removed.
pub fn smoothing_order(ctx: FieldCtx, spec: &GraphSpec) -> Result<SmoothingReport> {
    let n = ctx.space_size_capped("smoothing operator", MAX_SMOOTHING_GRID)?;
    let full = PointSet::full(ctx)?;
    let graph = build_graph(&full, &spec.clone().allow_asymmetric())?;
    let m = graph.adjacency();

    let row_sums: Vec<u64> = (0..n).map(|i| m.row_count(i)).collect();
    let mut col_sums = vec![0u64; n];
    for i in 0..n {
        for j in m.row_ones(i) {
            col_sums[j] += 1;
        }
    }
    let nonempty = |v: &[u64]| -> (u64, u64, u64) {
        let filled: Vec<u64> = v.iter().copied().filter(|&s| s > 0).collect();
        (
            filled.iter().copied().min().unwrap_or(0),
            filled.iter().copied().max().unwrap_or(0),
            (v.len() - filled.len()) as u64,
        )
    };
    let (row_min, row_max, empty_rows) = nonempty(&row_sums);
    let (col_min, col_max, empty_cols) = nonempty(&col_sums);

    let apply = |v: &[f64]| -> Vec<f64> {
        let mean = v.iter().sum::<f64>() / n as f64;
        (0..n)
            .into_par_iter()
            .map(|i| m.row_ones(i).map(|j| v[j] - mean).sum())
            .collect()
    };
    let apply_transpose = |w: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (i, &wi) in w.iter().enumerate() {
            if wi != 0.0 {
                for j in m.row_ones(i) {
                    out[j] += wi;
                }
            }
        }
        let mean = out.iter().sum::<f64>() / n as f64;
        out.iter_mut().for_each(|o| *o -= mean);
        out
    };
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();

    let mut rng = ChaCha8Rng::seed_from_u64(POWER_ITERATION_SEED);
    let mut v: Vec<f64> = (0..n)
        .map(|_| (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 - 0.5)
        .collect();
    let scale = norm(&v);
    v.iter_mut().for_each(|x| *x /= scale);

    let floor = 1e-9 * (row_max.max(1) as f64);
    let mut sigma = 0.0;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < POWER_ITERATION_CAP {
        iterations += 1;
        let w = apply(&v);
        let next_sigma = norm(&w);
        if next_sigma <= floor {
            sigma = 0.0;
            converged = true;
            break;
        }
        let mut u = apply_transpose(&w);
        let un = norm(&u);
        if un == 0.0 {
            sigma = 0.0;
            converged = true;
            break;
        }
        u.iter_mut().for_each(|x| *x /= un);
        let change = (next_sigma - sigma).abs();
        sigma = next_sigma;
        v = u;
        if change <= POWER_ITERATION_TOLERANCE * 1e-3 * sigma {
            converged = true;
            break;
        }
    }

    let qf = ctx.q() as f64;
    let d = ctx.d() as f64;
    let half = qf.powf((d - 1.0) / 2.0);
    let main = qf.powf(d - 1.0);
    let slack = qf.powf(d / 2.0) + 1.0;
    let size_condition_holds = row_sums
        .iter()
        .chain(&col_sums)
        .filter(|&&s| s > 0)
        .all(|&s| (s as f64 - main).abs() <= slack);
    Ok(SmoothingReport {
        q: ctx.q(),
        d: ctx.d(),
        t: spec.t % ctx.q(),
        relation: spec.relation.name(),
        alpha_estimate: (sigma > 0.0).then(|| (d - 1.0) - sigma.ln() / qf.ln()),
        sigma_max: sigma,
        c_constant: sigma / half,
        within_c_bound: le_outward(sigma, 2.0 * half),
        size_condition_min: row_min.min(col_min),
        size_condition_max: row_max.max(col_max),
        row_sum_min: row_min,
        row_sum_max: row_max,
        col_sum_min: col_min,
        col_sum_max: col_max,
        empty_rows,
        empty_cols,
        size_condition_holds,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::{FnPhi, GraphSpec};
    use std::sync::Arc;

    fn ctx(q: u64, d: usize) -> FieldCtx {
        FieldCtx::new(q, d).unwrap()
    }

    #[test]
    fn sphere_examples() {
        let s = sphere(ctx(5, 2), 1).unwrap();
        let pts: Vec<Vec<u32>> = s.iter().map(|p| p.to_vec()).collect();
        assert_eq!(pts, vec![vec![0, 1], vec![0, 4], vec![1, 0], vec![4, 0]]);
        assert_eq!(sphere(ctx(3, 2), 1).unwrap().len(), 4);
        assert_eq!(sphere(ctx(5, 2), 0).unwrap().len(), 9);
    }

    #[test]
    fn transform_of_delta_is_constant() {
        let c = ctx(5, 2);
        let mut v = vec![0i64; 25];
        v[0] = 1;
        let f = fourier(&GridFunction::from_ints(c, v).unwrap());
        for m in 0..25 {
            assert!((f.get(m) - Complex64::new(1.0 / 25.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn report_q5_t1() {
        let r = spectral_report(ctx(5, 2), 1).unwrap();
        assert_eq!(r.sphere_size, 4);
        assert!((r.coeff_bound - 0.178885).abs() < 1e-5);
        assert!(r.passes.all());
        assert!(matches!(spectral_report(ctx(5, 2), 5), Err(Error::ZeroParameter(_))));
    }

    #[test]
    fn smoothing_matches_transform() {
        let c = ctx(5, 2);
        let r = smoothing_order(c, &GraphSpec::distance(1)).unwrap();
        let s = sphere_transform(c, 1).unwrap();
        let expected = (1..25).map(|m| s.get(m).norm()).fold(0.0, f64::max) * 25.0;
        assert!((r.sigma_max - expected).abs() <= 1e-6 * expected, "{} vs {}", r.sigma_max, expected);
        assert!(r.within_c_bound);
        assert!(r.converged);
    }

    #[test]
    fn smoothing_of_constant_relation_vanishes() {
        let phi = Arc::new(FnPhi::new("const", |_: &FieldCtx, _: &[u32], _: &[u32]| 1));
        let r = smoothing_order(ctx(3, 2), &GraphSpec::custom(phi, 1)).unwrap();
        assert_eq!(r.sigma_max, 0.0);
        assert_eq!(r.alpha_estimate, None);
    }
}
