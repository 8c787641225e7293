//! Relations `phi: F_q^d x F_q^d -> F_q` and the graph specification that
//! selects the level set `phi(x, y) = t`.

use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldCtx;

/// A user-supplied relation function.
pub trait Phi: Send + Sync {
    fn name(&self) -> String;

    /// `phi(x, y)`, or `None` where the function is undefined.
    fn eval(&self, ctx: &FieldCtx, x: &[u32], y: &[u32]) -> Option<u32>;
}

impl fmt::Debug for dyn Phi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phi({})", self.name())
    }
}

/// A closure-backed relation.
pub struct FnPhi<F> {
    name: String,
    f: F,
}

impl<F> FnPhi<F>
where
    F: Fn(&FieldCtx, &[u32], &[u32]) -> u32 + Send + Sync,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        FnPhi {
            name: name.into(),
            f,
        }
    }
}

impl<F> Phi for FnPhi<F>
where
    F: Fn(&FieldCtx, &[u32], &[u32]) -> u32 + Send + Sync,
{
    fn name(&self) -> String {
        self.name.clone()
    }

    fn eval(&self, ctx: &FieldCtx, x: &[u32], y: &[u32]) -> Option<u32> {
        Some((self.f)(ctx, x, y) % ctx.q())
    }
}

/// A relation given by an explicit table of `(x, y, phi(x, y))` triples.
///
/// Text format: an optional `q d` header line, then one triple per line as
/// `x_1 .. x_d y_1 .. y_d value`. Pairs not listed are undefined.
#[derive(Debug, Clone)]
pub struct PhiTable {
    ctx: FieldCtx,
    values: HashMap<(u64, u64), u32>,
}

impl PhiTable {
    pub fn read_text<R: BufRead>(ctx: FieldCtx, reader: R) -> Result<Self> {
        let d = ctx.d();
        let mut values = HashMap::new();
        let mut seen_header = false;
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
            if !seen_header && values.is_empty() && nums.len() == 2 {
                if nums[0] != ctx.q() as u64 || nums[1] as usize != d {
                    return Err(Error::FileFormat {
                        line: line_no,
                        msg: format!("header {} {} does not match {}", nums[0], nums[1], ctx),
                    });
                }
                seen_header = true;
                continue;
            }
            if nums.len() != 2 * d + 1 {
                return Err(Error::FileFormat {
                    line: line_no,
                    msg: format!("expected {} numbers, got {}", 2 * d + 1, nums.len()),
                });
            }
            if let Some(&v) = nums.iter().find(|&&v| v >= ctx.q() as u64) {
                return Err(Error::FileFormat {
                    line: line_no,
                    msg: format!("residue {v} not in [0, {})", ctx.q()),
                });
            }
            let x: Vec<u32> = nums[..d].iter().map(|&v| v as u32).collect();
            let y: Vec<u32> = nums[d..2 * d].iter().map(|&v| v as u32).collect();
            let key = (ctx.index_of(&x), ctx.index_of(&y));
            if values.insert(key, nums[2 * d] as u32).is_some() {
                return Err(Error::FileFormat {
                    line: line_no,
                    msg: "duplicate pair".into(),
                });
            }
        }
        Ok(PhiTable { ctx, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl Phi for PhiTable {
    fn name(&self) -> String {
        format!("table[{}]", self.values.len())
    }

    fn eval(&self, ctx: &FieldCtx, x: &[u32], y: &[u32]) -> Option<u32> {
        debug_assert_eq!(*ctx, self.ctx);
        self.values
            .get(&(ctx.index_of(x), ctx.index_of(y)))
            .copied()
    }
}

/// Named custom relations available from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinPhi {
    /// `phi(x, y) = 0` for every pair; its level sets are empty or everything.
    Zero,
    /// `x_1 y_2 - x_2 y_1`, antisymmetric.
    Skew,
    /// `||x|| + ||y||`, a symmetric relation that is not a convolution.
    NormSum,
}

impl BuiltinPhi {
    pub fn into_phi(self) -> Arc<dyn Phi> {
        match self {
            BuiltinPhi::Zero => Arc::new(FnPhi::new("zero", |_, _, _| 0)),
            BuiltinPhi::Skew => Arc::new(FnPhi::new("skew", |ctx: &FieldCtx, x, y| {
                let q = ctx.q() as u64;
                let a = x[0] as u64 * y[1] as u64 % q;
                let b = x[1] as u64 * y[0] as u64 % q;
                ((a + q - b) % q) as u32
            })),
            BuiltinPhi::NormSum => Arc::new(FnPhi::new("norm-sum", |ctx: &FieldCtx, x, y| {
                let q = ctx.q();
                (ctx.norm_unchecked(x) + ctx.norm_unchecked(y)) % q
            })),
        }
    }
}

impl FromStr for BuiltinPhi {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(BuiltinPhi::Zero),
            "skew" => Ok(BuiltinPhi::Skew),
            "norm-sum" => Ok(BuiltinPhi::NormSum),
            other => Err(Error::Config(format!("unknown built-in relation `{other}`"))),
        }
    }
}

#[derive(Clone)]
pub enum Relation {
    /// `||x - y|| = t`.
    Distance,
    /// `x . y = t`.
    DotProduct,
    Custom(Arc<dyn Phi>),
}

impl Relation {
    pub fn name(&self) -> String {
        match self {
            Relation::Distance => "dist".into(),
            Relation::DotProduct => "prod".into(),
            Relation::Custom(phi) => format!("custom:{}", phi.name()),
        }
    }

    pub fn is_builtin(&self) -> bool {
        !matches!(self, Relation::Custom(_))
    }

    /// `phi(x, y)` without length checks; `None` only for partial custom tables.
    pub fn eval(&self, ctx: &FieldCtx, x: &[u32], y: &[u32]) -> Option<u32> {
        match self {
            Relation::Distance => Some(ctx.distance_unchecked(x, y)),
            Relation::DotProduct => Some(ctx.dot_unchecked(x, y)),
            Relation::Custom(phi) => phi.eval(ctx, x, y),
        }
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Relation kind for configuration files and the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    Dist,
    Prod,
}

impl RelationKind {
    pub fn relation(self) -> Relation {
        match self {
            RelationKind::Dist => Relation::Distance,
            RelationKind::Prod => Relation::DotProduct,
        }
    }
}

impl FromStr for RelationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dist" | "distance" => Ok(RelationKind::Dist),
            "prod" | "dot" | "dot-product" => Ok(RelationKind::Prod),
            other => Err(Error::Config(format!("unknown relation `{other}`"))),
        }
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationKind::Dist => "dist",
            RelationKind::Prod => "prod",
        })
    }
}

/// Which graph to build: `x ~ y` iff `phi(x, y) = t`.
#[derive(Debug, Clone)]
pub struct GraphSpec {
    pub relation: Relation,
    pub t: u32,
    /// Keep diagonal entries `x ~ x`. Only the dot product (and custom
    /// relations) can produce them when `t != 0`.
    pub loops: bool,
    /// Refuse to build a custom-relation graph whose adjacency is not symmetric.
    pub require_symmetric: bool,
}

impl GraphSpec {
    pub fn new(relation: Relation, t: u32) -> Self {
        GraphSpec {
            relation,
            t,
            loops: true,
            require_symmetric: true,
        }
    }

    pub fn distance(t: u32) -> Self {
        Self::new(Relation::Distance, t)
    }

    pub fn dot_product(t: u32) -> Self {
        Self::new(Relation::DotProduct, t)
    }

    pub fn custom(phi: Arc<dyn Phi>, t: u32) -> Self {
        Self::new(Relation::Custom(phi), t)
    }

    pub fn without_loops(mut self) -> Self {
        self.loops = false;
        self
    }

    pub fn allow_asymmetric(mut self) -> Self {
        self.require_symmetric = false;
        self
    }

    pub fn kind(&self) -> Option<RelationKind> {
        match self.relation {
            Relation::Distance => Some(RelationKind::Dist),
            Relation::DotProduct => Some(RelationKind::Prod),
            Relation::Custom(_) => None,
        }
    }

    pub fn is_distance(&self) -> bool {
        matches!(self.relation, Relation::Distance)
    }

    pub(crate) fn require_nonzero(&self, what: &'static str) -> Result<()> {
        if self.t == 0 {
            return Err(Error::ZeroParameter(what));
        }
        Ok(())
    }

    /// Whether `x ~ y`, ignoring the loop toggle.
    pub fn related(&self, ctx: &FieldCtx, x: &[u32], y: &[u32]) -> Result<bool> {
        match self.relation.eval(ctx, x, y) {
            Some(v) => Ok(v == self.t % ctx.q()),
            None => Err(Error::OutOfRange(format!(
                "relation undefined at ({x:?}, {y:?})"
            ))),
        }
    }
}
