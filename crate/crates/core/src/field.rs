//! Prime-field arithmetic on `F_q^d`: the context, points, point sets, the
//! quadratic form `||x|| = x_1^2 + ... + x_d^2`, the dot product and the
//! additive characters `chi(a) = exp(2 pi i a / q)`.

use std::fmt;
use std::io::{BufRead, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported modulus. Products of two residues stay well inside `u64`.
pub const MAX_MODULUS: u64 = 1 << 20;

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut p = 3;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 2;
    }
    true
}

/// The ambient space `F_q^d`: an odd prime modulus and a dimension `d >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldCtx {
    q: u32,
    d: usize,
}

impl FieldCtx {
    pub fn new(q: u64, d: usize) -> Result<Self> {
        if q > MAX_MODULUS {
            return Err(Error::ModulusTooLarge(q));
        }
        if q < 3 || !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if d < 2 {
            return Err(Error::BadDimension(d));
        }
        Ok(FieldCtx { q: q as u32, d })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `q^d`, or `None` if it does not fit in a `u64`.
    pub fn space_size(&self) -> Option<u64> {
        (self.q as u64).checked_pow(self.d as u32)
    }

    pub(crate) fn space_size_capped(&self, what: &'static str, cap: u64) -> Result<usize> {
        match self.space_size() {
            Some(n) if n <= cap => Ok(n as usize),
            Some(n) => Err(Error::too_large(what, n, cap)),
            None => Err(Error::too_large(what, u128::MAX, cap)),
        }
    }

    pub fn reduce(&self, a: i64) -> u32 {
        a.rem_euclid(self.q as i64) as u32
    }

    pub(crate) fn check_len(&self, x: &[u32]) -> Result<()> {
        if x.len() != self.d {
            return Err(Error::LengthMismatch {
                expected: self.d,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Lexicographic rank of `x` among all points of `F_q^d`.
    pub fn index_of(&self, x: &[u32]) -> u64 {
        x.iter().fold(0u64, |acc, &c| acc * self.q as u64 + c as u64)
    }

    /// Inverse of [`FieldCtx::index_of`].
    pub fn point_at(&self, mut idx: u64) -> Point {
        let q = self.q as u64;
        let mut coords = vec![0u32; self.d];
        for c in coords.iter_mut().rev() {
            *c = (idx % q) as u32;
            idx /= q;
        }
        Point(coords)
    }

    /// `||x|| = sum x_i^2 mod q`.
    pub fn norm(&self, x: &[u32]) -> Result<u32> {
        self.check_len(x)?;
        Ok(self.norm_unchecked(x))
    }

    /// `x . y = sum x_i y_i mod q`.
    pub fn dot(&self, x: &[u32], y: &[u32]) -> Result<u32> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.dot_unchecked(x, y))
    }

    /// `||x - y||`.
    pub fn distance(&self, x: &[u32], y: &[u32]) -> Result<u32> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.distance_unchecked(x, y))
    }

    pub(crate) fn norm_unchecked(&self, x: &[u32]) -> u32 {
        let q = self.q as u64;
        (x.iter().map(|&c| c as u64 * c as u64).sum::<u64>() % q) as u32
    }

    pub(crate) fn dot_unchecked(&self, x: &[u32], y: &[u32]) -> u32 {
        let q = self.q as u64;
        (x.iter()
            .zip(y)
            .map(|(&a, &b)| a as u64 * b as u64)
            .sum::<u64>()
            % q) as u32
    }

    pub(crate) fn distance_unchecked(&self, x: &[u32], y: &[u32]) -> u32 {
        let q = self.q as u64;
        (x.iter()
            .zip(y)
            .map(|(&a, &b)| {
                let diff = (a as u64 + q - b as u64) % q;
                diff * diff
            })
            .sum::<u64>()
            % q) as u32
    }

    /// Additive character `chi(a) = exp(2 pi i a / q)`.
    pub fn character(&self, a: i64) -> Complex64 {
        let r = self.reduce(a);
        let theta = std::f64::consts::TAU * r as f64 / self.q as f64;
        Complex64::new(theta.cos(), theta.sin())
    }

    /// `chi(k)` for `k = 0..q`, the table used by the transforms.
    pub fn character_table(&self) -> Vec<Complex64> {
        (0..self.q as i64).map(|a| self.character(a)).collect()
    }

    pub fn point(&self, coords: Vec<u32>) -> Result<Point> {
        self.check_len(&coords)?;
        if let Some(&value) = coords.iter().find(|&&c| c >= self.q) {
            return Err(Error::Unreduced {
                value: value as u64,
                q: self.q as u64,
            });
        }
        Ok(Point(coords))
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.q, self.d)
    }
}

/// A vector of `F_q^d` with coordinates reduced into `[0, q)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point(pub(crate) Vec<u32>);

impl Point {
    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<u32> {
        self.0
    }
}

impl AsRef<[u32]> for Point {
    fn as_ref(&self) -> &[u32] {
        &self.0
    }
}

/// A finite subset of `F_q^d`, deduplicated and in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    ctx: FieldCtx,
    /// Lexicographic ranks, strictly increasing.
    ranks: Vec<u64>,
    /// Flat coordinates, `d` per point, in the same order as `ranks`.
    coords: Vec<u32>,
}

impl PointSet {
    pub fn empty(ctx: FieldCtx) -> Self {
        PointSet {
            ctx,
            ranks: Vec::new(),
            coords: Vec::new(),
        }
    }

    /// Builds a set from points, silently dropping duplicates.
    pub fn from_points<I, P>(ctx: FieldCtx, points: I) -> Result<Self>
    where
        I: IntoIterator<Item = P>,
        P: AsRef<[u32]>,
    {
        let mut ranks = Vec::new();
        for p in points {
            let p = p.as_ref();
            ctx.check_len(p)?;
            if let Some(&value) = p.iter().find(|&&c| c >= ctx.q) {
                return Err(Error::Unreduced {
                    value: value as u64,
                    q: ctx.q as u64,
                });
            }
            ranks.push(ctx.index_of(p));
        }
        ranks.sort_unstable();
        ranks.dedup();
        Ok(Self::from_sorted_ranks(ctx, ranks))
    }

    /// Builds a set from lexicographic ranks (any order, duplicates dropped).
    pub fn from_ranks(ctx: FieldCtx, mut ranks: Vec<u64>) -> Result<Self> {
        let total = ctx.space_size().unwrap_or(u64::MAX);
        if let Some(&bad) = ranks.iter().find(|&&r| r >= total) {
            return Err(Error::OutOfRange(format!("rank {bad} outside F_q^d")));
        }
        ranks.sort_unstable();
        ranks.dedup();
        Ok(Self::from_sorted_ranks(ctx, ranks))
    }

    fn from_sorted_ranks(ctx: FieldCtx, ranks: Vec<u64>) -> Self {
        let mut coords = Vec::with_capacity(ranks.len() * ctx.d);
        for &r in &ranks {
            coords.extend_from_slice(ctx.point_at(r).coords());
        }
        PointSet { ctx, ranks, coords }
    }

    /// All of `F_q^d`.
    pub fn full(ctx: FieldCtx) -> Result<Self> {
        let n = ctx.space_size_capped("full space", 1 << 26)?;
        Ok(Self::from_sorted_ranks(ctx, (0..n as u64).collect()))
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn point(&self, i: usize) -> &[u32] {
        let d = self.ctx.d;
        &self.coords[i * d..(i + 1) * d]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.coords.chunks_exact(self.ctx.d)
    }

    pub fn ranks(&self) -> &[u64] {
        &self.ranks
    }

    /// Position of `x` in the canonical order, if present.
    pub fn position(&self, x: &[u32]) -> Option<usize> {
        if x.len() != self.ctx.d {
            return None;
        }
        self.ranks.binary_search(&self.ctx.index_of(x)).ok()
    }

    pub fn contains(&self, x: &[u32]) -> bool {
        self.position(x).is_some()
    }

    /// Subset keeping the points at the given positions.
    pub fn select(&self, keep: impl IntoIterator<Item = usize>) -> Self {
        let ranks: Vec<u64> = keep.into_iter().map(|i| self.ranks[i]).collect();
        let mut ranks = ranks;
        ranks.sort_unstable();
        ranks.dedup();
        Self::from_sorted_ranks(self.ctx, ranks)
    }

    /// Every point shifted by `v`.
    pub fn translate(&self, v: &[u32]) -> Result<Self> {
        self.ctx.check_len(v)?;
        let q = self.ctx.q as u64;
        let shifted: Vec<Vec<u32>> = self
            .iter()
            .map(|p| {
                p.iter()
                    .zip(v)
                    .map(|(&a, &b)| ((a as u64 + b as u64) % q) as u32)
                    .collect()
            })
            .collect();
        Self::from_points(self.ctx, shifted)
    }

    /// Reads the text format: a `q d` header, then one point per line.
    /// Blank lines and lines starting with `#` are skipped; duplicates are errors.
    pub fn read_text<R: BufRead>(reader: R) -> Result<Self> {
        let mut ctx: Option<FieldCtx> = None;
        let mut ranks = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let line_no = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let nums: std::result::Result<Vec<u64>, _> =
                trimmed.split_whitespace().map(str::parse::<u64>).collect();
            let nums = nums.map_err(|e| Error::FileFormat {
                line: line_no,
                msg: e.to_string(),
            })?;
            match ctx {
                None => {
                    if nums.len() != 2 {
                        return Err(Error::FileFormat {
                            line: line_no,
                            msg: "header must be `q d`".into(),
                        });
                    }
                    ctx = Some(FieldCtx::new(nums[0], nums[1] as usize)?);
                }
                Some(c) => {
                    if nums.len() != c.d {
                        return Err(Error::FileFormat {
                            line: line_no,
                            msg: format!("expected {} coordinates, got {}", c.d, nums.len()),
                        });
                    }
                    if let Some(&v) = nums.iter().find(|&&v| v >= c.q as u64) {
                        return Err(Error::FileFormat {
                            line: line_no,
                            msg: format!("residue {v} not in [0, {})", c.q),
                        });
                    }
                    let coords: Vec<u32> = nums.iter().map(|&v| v as u32).collect();
                    ranks.push((c.index_of(&coords), line_no));
                }
            }
        }
        let ctx = ctx.ok_or(Error::FileFormat {
            line: 0,
            msg: "missing `q d` header".into(),
        })?;
        ranks.sort_unstable();
        if let Some(w) = ranks.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::FileFormat {
                line: w[1].1.max(w[0].1),
                msg: "duplicate point".into(),
            });
        }
        Ok(Self::from_sorted_ranks(
            ctx,
            ranks.into_iter().map(|(r, _)| r).collect(),
        ))
    }

    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{} {}", self.ctx.q, self.ctx.d)?;
        for p in self.iter() {
            let line: Vec<String> = p.iter().map(u32::to_string).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }
}
