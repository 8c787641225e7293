use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use super::paths::MAX_WALK_LENGTH;
use super::DENSE_LIMIT;
use crate::bounds::constants::big_string;
use crate::error::{Error, Result};
use crate::exact::{sum_exact, with_fallback, CountMatrix, Exact};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleProfile {
    pub n: usize,
    /// `C_n = tr(A^n)`, closed walks of length `n` with a marked start.
    #[serde(with = "big_string")]
    pub total: BigUint,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt_big")]
    pub nondegenerate: Option<BigUint>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt_big")]
    pub degenerate_bound: Option<BigUint>,
}

fn opt_big<S: serde::Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(b) => s.serialize_str(&b.to_string()),
        None => s.serialize_none(),
    }
}

/// `C_n = tr(A^n)`.
pub fn cycle_count(g: &Graph, n: usize) -> Result<CycleProfile> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("cycle length must be >= 2, got {n}")));
    }
    if n > MAX_WALK_LENGTH {
        return Err(Error::TooLong {
            len: n,
            cap: MAX_WALK_LENGTH,
        });
    }
    let total = if g.order() <= DENSE_LIMIT {
        with_fallback(
            || trace_dense::<u128>(g, n).map(|t| t.to_biguint()),
            || trace_dense::<BigUint>(g, n),
        )
    } else {
        with_fallback(
            || trace_streaming::<u128>(g, n).map(|t| t.to_biguint()),
            || trace_streaming::<BigUint>(g, n),
        )
    };
    Ok(CycleProfile {
        n,
        total,
        nondegenerate: None,
        degenerate_bound: None,
    })
}

/// `tr(A^h * A^(n-h))` with `h = floor(n/2)`, `A^h` by repeated squaring.
fn trace_dense<T: Exact>(g: &Graph, n: usize) -> Option<T> {
    let a = g.adjacency();
    let h = n / 2;
    let low = CountMatrix::<T>::power_of(a, h as u32)?;
    if n % 2 == 0 {
        low.trace_of_product(&low)
    } else {
        let high = low.mul_bits(a)?;
        low.trace_of_product(&high)
    }
}

/// `sum_x (A^n e_x)_x`, one walk vector per start vertex.
fn trace_streaming<T: Exact>(g: &Graph, n: usize) -> Option<T> {
    let parts: Option<Vec<T>> = (0..g.order())
        .into_par_iter()
        .map(|x| {
            let mut v = vec![T::zero(); g.order()];
            v[x] = T::one();
            for _ in 0..n {
                v = super::paths::apply(g, &v)?;
            }
            Some(v[x].clone())
        })
        .collect();
    sum_exact(&parts?)
}
