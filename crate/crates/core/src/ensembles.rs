//! Deterministic point-set generators.
//!
//! Every random recipe draws from `ChaCha8Rng::seed_from_u64(seed)`, so a
//! `(context, recipe, seed)` triple names one set on every platform.

use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::counting::PairFunction;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, PointSet};
use crate::spectra::sphere;

/// Largest `q^d` a random recipe will index.
pub const MAX_RANDOM_SPACE: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RecipeKind {
    Full,
    /// Each point independently with probability `p`.
    RandomDensity { p: f64 },
    /// `m` distinct points, uniformly.
    RandomSize { m: usize },
    Sphere { t: u32 },
    /// `A^d` for a set of residues `A`.
    Product { values: Vec<u32> },
    /// `shift + span(basis)`.
    AffineSubspace { basis: Vec<Vec<u32>>, shift: Vec<u32> },
    /// Union of `S_t + c` over the centers.
    SphereUnion { t: u32, centers: Vec<Vec<u32>> },
    File { path: PathBuf },
}

/// A generator plus its seed. Text form: `full`, `rand:p=0.5`, `randn:m=50`,
/// `sphere:t=1`, `prod:A=0,1,2`, `affine:basis=1,0;0,1:shift=0,0`,
/// `spheres:t=1:centers=0,0;1,1`, `file:PATH`, each optionally followed
/// by `:seed=N` (except `file:`). Display omits a zero seed on
/// deterministic recipes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetRecipe {
    #[serde(flatten)]
    pub kind: RecipeKind,
    #[serde(default)]
    pub seed: u64,
}

impl SetRecipe {
    pub fn new(kind: RecipeKind, seed: u64) -> Self {
        SetRecipe { kind, seed }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn is_random(&self) -> bool {
        matches!(
            self.kind,
            RecipeKind::RandomDensity { .. } | RecipeKind::RandomSize { .. }
        )
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::BadRecipe(msg.into())
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| bad(format!("cannot parse `{key}={v}`")))
}

fn parse_vector(key: &str, v: &str) -> Result<Vec<u32>> {
    v.split(',').map(|c| parse_num(key, c)).collect()
}

fn parse_vectors(key: &str, v: &str) -> Result<Vec<Vec<u32>>> {
    v.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_vector(key, s))
        .collect()
}

impl FromStr for SetRecipe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(path) = s.strip_prefix("file:") {
            if path.is_empty() {
                return Err(bad("file recipe needs a path"));
            }
            return Ok(SetRecipe::new(RecipeKind::File { path: path.into() }, 0));
        }
        let mut parts = s.split(':');
        let head = parts.next().unwrap_or_default();
        let mut fields: Vec<(String, String)> = Vec::new();
        for part in parts {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got `{part}`")))?;
            if fields.iter().any(|(seen, _)| seen == k) {
                return Err(bad(format!("repeated key `{k}`")));
            }
            fields.push((k.trim().to_string(), v.trim().to_string()));
        }
        let mut take = |key: &str| -> Option<String> {
            let pos = fields.iter().position(|(k, _)| k == key)?;
            Some(fields.remove(pos).1)
        };
        let seed = match take("seed") {
            Some(v) => parse_num("seed", &v)?,
            None => 0,
        };
        let mut need = |key: &'static str| take(key).ok_or_else(|| bad(format!("`{head}` needs `{key}=`")));
        let kind = match head {
            "full" => RecipeKind::Full,
            "rand" => {
                let p: f64 = parse_num("p", &need("p")?)?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(bad(format!("density {p} outside [0, 1]")));
                }
                RecipeKind::RandomDensity { p }
            }
            "randn" => RecipeKind::RandomSize {
                m: parse_num("m", &need("m")?)?,
            },
            "sphere" => RecipeKind::Sphere {
                t: parse_num("t", &need("t")?)?,
            },
            "prod" => RecipeKind::Product {
                values: parse_vector("A", &need("A")?)?,
            },
            "affine" => RecipeKind::AffineSubspace {
                basis: parse_vectors("basis", &need("basis")?)?,
                shift: parse_vector("shift", &need("shift")?)?,
            },
            "spheres" => RecipeKind::SphereUnion {
                t: parse_num("t", &need("t")?)?,
                centers: parse_vectors("centers", &need("centers")?)?,
            },
            other => return Err(bad(format!("unknown recipe `{other}`"))),
        };
        if let Some((k, _)) = fields.first() {
            return Err(bad(format!("unknown key `{k}` for `{head}`")));
        }
        Ok(SetRecipe::new(kind, seed))
    }
}

impl fmt::Display for SetRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        let joins = |v: &[Vec<u32>]| v.iter().map(|x| join(x)).collect::<Vec<_>>().join(";");
        match &self.kind {
            RecipeKind::File { path } => return write!(f, "file:{}", path.display()),
            RecipeKind::Full => write!(f, "full")?,
            RecipeKind::RandomDensity { p } => write!(f, "rand:p={p}")?,
            RecipeKind::RandomSize { m } => write!(f, "randn:m={m}")?,
            RecipeKind::Sphere { t } => write!(f, "sphere:t={t}")?,
            RecipeKind::Product { values } => write!(f, "prod:A={}", join(values))?,
            RecipeKind::AffineSubspace { basis, shift } => {
                write!(f, "affine:basis={}:shift={}", joins(basis), join(shift))?
            }
            RecipeKind::SphereUnion { t, centers } => {
                write!(f, "spheres:t={t}:centers={}", joins(centers))?
            }
        }
        // deterministic recipes ignore the seed; keep it only if set
        if self.is_random() || self.seed != 0 {
            write!(f, ":seed={}", self.seed)?;
        }
        Ok(())
    }
}

/// Uniform integer in `[0, bound)` by rejection on the top of the range.
pub fn uniform_below(rng: &mut impl RngCore, bound: u64) -> u64 {
    assert!(bound > 0);
    let zone = u64::MAX - u64::MAX % bound;
    loop {
        let v = rng.next_u64();
        if v < zone {
            return v % bound;
        }
    }
}

/// Uniform float in `[0, 1)` with 53 random bits.
pub fn uniform_unit(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// Seed of the `index`-th instance of a sweep seeded with `seed`.
pub fn instance_seed(seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.next_u64()
}

pub fn generate_set(ctx: FieldCtx, recipe: &SetRecipe) -> Result<PointSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(recipe.seed);
    match &recipe.kind {
        RecipeKind::Full => PointSet::full(ctx),
        RecipeKind::RandomDensity { p } => {
            let n = ctx.space_size_capped("random set", MAX_RANDOM_SPACE)? as u64;
            let ranks: Vec<u64> = (0..n).filter(|_| uniform_unit(&mut rng) < *p).collect();
            let mean = *p * n as f64;
            let sd = (n as f64 * p * (1.0 - p)).sqrt();
            if (ranks.len() as f64 - mean).abs() > 5.0 * sd + 1e-9 {
                return Err(bad(format!(
                    "density sample of size {} is more than 5 standard deviations from {mean}",
                    ranks.len()
                )));
            }
            PointSet::from_ranks(ctx, ranks)
        }
        RecipeKind::RandomSize { m } => {
            let n = ctx.space_size_capped("random set", MAX_RANDOM_SPACE)?;
            if *m > n {
                return Err(bad(format!("cannot draw {m} distinct points from {n}")));
            }
            let mut ranks: Vec<u64> = (0..n as u64).collect();
            // partial Fisher-Yates: the first m slots are the sample
            for i in 0..*m {
                let j = i + uniform_below(&mut rng, (n - i) as u64) as usize;
                ranks.swap(i, j);
            }
            ranks.truncate(*m);
            PointSet::from_ranks(ctx, ranks)
        }
        RecipeKind::Sphere { t } => sphere(ctx, *t),
        RecipeKind::Product { values } => {
            if values.is_empty() {
                return Err(bad("product set needs at least one value"));
            }
            if let Some(v) = values.iter().find(|&&v| v >= ctx.q()) {
                return Err(bad(format!("product value {v} is not reduced modulo {}", ctx.q())));
            }
            let mut vals = values.clone();
            vals.sort_unstable();
            vals.dedup();
            let k = vals.len();
            let total = (k as u64)
                .checked_pow(ctx.d() as u32)
                .filter(|&t| t <= MAX_RANDOM_SPACE)
                .ok_or_else(|| Error::too_large("product set", u64::MAX, MAX_RANDOM_SPACE))?;
            let points = (0..total).map(|mut idx| {
                let mut x = vec![0u32; ctx.d()];
                for c in x.iter_mut().rev() {
                    *c = vals[(idx % k as u64) as usize];
                    idx /= k as u64;
                }
                x
            });
            PointSet::from_points(ctx, points)
        }
        RecipeKind::AffineSubspace { basis, shift } => affine(ctx, basis, shift),
        RecipeKind::SphereUnion { t, centers } => {
            let s = sphere(ctx, *t)?;
            let mut points: Vec<Vec<u32>> = Vec::new();
            for c in centers {
                ctx.point(c.clone()).map_err(|e| bad(format!("center {c:?}: {e}")))?;
                points.extend(s.translate(c)?.iter().map(<[u32]>::to_vec));
            }
            PointSet::from_points(ctx, points)
        }
        RecipeKind::File { path } => {
            let file = File::open(path)?;
            let set = PointSet::read_text(BufReader::new(file))?;
            if set.ctx() != ctx {
                return Err(bad(format!(
                    "file {} holds points of {}, expected {ctx}",
                    path.display(),
                    set.ctx()
                )));
            }
            Ok(set)
        }
    }
}

fn affine(ctx: FieldCtx, basis: &[Vec<u32>], shift: &[u32]) -> Result<PointSet> {
    let q = ctx.q() as u64;
    ctx.point(shift.to_vec()).map_err(|e| bad(format!("shift: {e}")))?;
    for b in basis {
        ctx.point(b.clone()).map_err(|e| bad(format!("basis vector {b:?}: {e}")))?;
    }
    if rank_mod(q, basis) != basis.len() {
        return Err(bad("basis vectors are linearly dependent"));
    }
    let k = basis.len();
    let total = q.pow(k as u32);
    let points = (0..total).map(|mut idx| {
        let mut x: Vec<u64> = shift.iter().map(|&c| c as u64).collect();
        for b in basis {
            let coef = idx % q;
            idx /= q;
            for (xi, &bi) in x.iter_mut().zip(b) {
                *xi = (*xi + coef * bi as u64) % q;
            }
        }
        x.into_iter().map(|c| c as u32).collect::<Vec<u32>>()
    });
    PointSet::from_points(ctx, points)
}

/// Rank of the vectors over `F_q` by Gaussian elimination.
fn rank_mod(q: u64, vectors: &[Vec<u32>]) -> usize {
    let mut rows: Vec<Vec<u64>> = vectors
        .iter()
        .map(|v| v.iter().map(|&c| c as u64 % q).collect())
        .collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = mod_pow(rows[rank][col], q - 2, q);
        for c in rows[rank].iter_mut() {
            *c = *c * inv % q;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let factor = rows[r][col];
                for c in 0..cols {
                    rows[r][c] = (rows[r][c] + q * q - factor * rows[rank][c]) % q;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_pow(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    acc
}

/// Values in `[0, max]` on all of `F_q^d`, indexed by rank.
pub fn random_grid_function(ctx: FieldCtx, seed: u64, max: u64) -> Result<Vec<u64>> {
    let n = ctx.space_size_capped("random grid function", MAX_RANDOM_SPACE)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| uniform_below(&mut rng, max + 1)).collect())
}

/// A pair function on `n x n` with each entry nonzero with probability
/// `density`, and nonzero entries uniform in `[1, max]`.
pub fn random_pair_function(n: usize, seed: u64, max: u64, density: f64) -> PairFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..n * n)
        .map(|_| {
            if uniform_unit(&mut rng) < density {
                1 + uniform_below(&mut rng, max.max(1))
            } else {
                0
            }
        })
        .collect();
    PairFunction::from_values(n, values).expect("length n * n")
}
