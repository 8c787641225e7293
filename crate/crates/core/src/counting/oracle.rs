//! Exhaustive counts that evaluate the relation pointwise. Shares no code
//! with the fast counting paths and never touches the adjacency matrix.

use num_bigint::BigUint;

use super::trees::TreeShape;
use crate::error::{Error, Result};
use crate::field::PointSet;
use crate::graph::Graph;
use crate::relation::GraphSpec;

/// Largest number of tuples or maps the oracle will enumerate.
pub const ORACLE_LIMIT: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleKind {
    /// Closed walks of length `n`.
    Cycles,
    /// Closed walks of length `n` through pairwise distinct vertices.
    Nondegenerate,
    /// Edge-preserving maps of the tree; `n` is ignored.
    Tree(TreeShape),
}

pub fn oracle_count(g: &Graph, kind: &OracleKind, n: usize) -> Result<BigUint> {
    let set = g.set();
    let spec = g.spec();
    let slots = match kind {
        OracleKind::Cycles | OracleKind::Nondegenerate => {
            if n < 2 {
                return Err(Error::OutOfRange(format!("cycle length must be >= 2, got {n}")));
            }
            n
        }
        OracleKind::Tree(t) => t.vertex_count,
    };
    let space = (set.len() as u128).checked_pow(slots as u32).unwrap_or(u128::MAX);
    if space > ORACLE_LIMIT {
        return Err(Error::too_large("oracle enumeration", space, ORACLE_LIMIT));
    }
    if set.is_empty() {
        return Ok(BigUint::from(0u8));
    }
    let pairs: Vec<(usize, usize)> = match kind {
        OracleKind::Tree(t) => t.edges.clone(),
        _ => (0..n).map(|i| (i, (i + 1) % n)).collect(),
    };
    let distinct = matches!(kind, OracleKind::Nondegenerate);
    let mut tuple = vec![0usize; slots];
    let mut count = 0u64;
    loop {
        if (!distinct || all_distinct(&tuple)) && closes(set, spec, &tuple, &pairs)? {
            count += 1;
        }
        if !advance(&mut tuple, set.len()) {
            break;
        }
    }
    Ok(BigUint::from(count))
}

fn related(set: &PointSet, spec: &GraphSpec, i: usize, j: usize) -> Result<bool> {
    if i == j && !spec.loops {
        return Ok(false);
    }
    spec.related(&set.ctx(), set.point(i), set.point(j))
}

fn closes(set: &PointSet, spec: &GraphSpec, tuple: &[usize], pairs: &[(usize, usize)]) -> Result<bool> {
    for &(a, b) in pairs {
        if !related(set, spec, tuple[a], tuple[b])? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn all_distinct(tuple: &[usize]) -> bool {
    tuple
        .iter()
        .enumerate()
        .all(|(i, a)| tuple[i + 1..].iter().all(|b| a != b))
}

/// Odometer step over `[0, base)^len`; false after the last tuple.
fn advance(tuple: &mut [usize], base: usize) -> bool {
    for slot in tuple.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}
