use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{sum_exact, with_fallback, CountMatrix, Exact};
use crate::graph::Graph;

pub const MAX_WALK_LENGTH: usize = 64;

/// Walk counts of one length `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathProfile {
    pub k: usize,
    /// `P_k`, the number of `(k+1)`-tuples with consecutive entries related.
    #[serde(with = "crate::bounds::constants::big_string")]
    pub total: BigUint,
    /// `f_k(x)`, walks of length `k` starting at `x`.
    #[serde(serialize_with = "big_vec")]
    pub per_vertex: Vec<BigUint>,
    /// `(A^k)_{xy}`, walks of length `k` from `x` to `y`.
    #[serde(skip)]
    pub pair_matrix: Option<CountMatrix<BigUint>>,
}

fn big_vec<S: serde::Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// `A v`: `out[x] = sum over neighbours y of v[y]`.
pub(crate) fn apply<T: Exact>(g: &Graph, v: &[T]) -> Option<Vec<T>> {
    use rayon::prelude::*;
    (0..g.order())
        .into_par_iter()
        .map(|x| sum_exact(g.neighbors(x).iter().map(|&y| &v[y as usize])))
        .collect()
}

/// `f_0, f_1, ..., f_k` with `f_0 = 1` on every vertex.
pub(crate) fn walk_vectors<T: Exact>(g: &Graph, k: usize) -> Option<Vec<Vec<T>>> {
    let mut out = Vec::with_capacity(k + 1);
    out.push(vec![T::one(); g.order()]);
    for i in 0..k {
        let next = apply(g, &out[i])?;
        out.push(next);
    }
    Some(out)
}

fn check_length(k: usize, min: usize) -> Result<()> {
    if k < min {
        return Err(Error::OutOfRange(format!("length must be >= {min}, got {k}")));
    }
    if k > MAX_WALK_LENGTH {
        return Err(Error::TooLong {
            len: k,
            cap: MAX_WALK_LENGTH,
        });
    }
    Ok(())
}

/// `P_k`, `f_k` and optionally the pair matrix `A^k`.
pub fn total_paths(g: &Graph, k: usize, want_pairs: bool) -> Result<PathProfile> {
    check_length(k, 1)?;
    let per_vertex = with_fallback(
        || walk_vectors::<u128>(g, k).map(|mut v| v.pop().unwrap().iter().map(Exact::to_biguint).collect()),
        || walk_vectors::<BigUint>(g, k).map(|mut v| v.pop().unwrap()),
    );
    let total = per_vertex.iter().sum();
    let pair_matrix = if want_pairs {
        Some(pair_matrix(g, k)?)
    } else {
        None
    };
    Ok(PathProfile {
        k,
        total,
        per_vertex,
        pair_matrix,
    })
}

/// `A^k` by exact repeated squaring.
pub fn pair_matrix(g: &Graph, k: usize) -> Result<CountMatrix<BigUint>> {
    check_length(k, 1)?;
    super::check_dense(g)?;
    let a = g.adjacency();
    Ok(with_fallback(
        || CountMatrix::<u128>::power_of(a, k as u32).map(|m| m.to_biguint()),
        || CountMatrix::<BigUint>::power_of(a, k as u32),
    ))
}

/// `P_0, ..., P_k` (with `P_0 = |E|`).
pub fn path_totals(g: &Graph, k: usize) -> Result<Vec<BigUint>> {
    if k > MAX_WALK_LENGTH {
        return Err(Error::TooLong {
            len: k,
            cap: MAX_WALK_LENGTH,
        });
    }
    Ok(with_fallback(
        || {
            let vs = walk_vectors::<u128>(g, k)?;
            vs.iter()
                .map(|v| sum_exact(v).map(|s| s.to_biguint()))
                .collect()
        },
        || {
            let vs = walk_vectors::<BigUint>(g, k)?;
            Some(vs.iter().map(|v| v.iter().sum()).collect())
        },
    ))
}
