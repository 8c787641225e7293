use num_bigint::BigUint;
use num_traits::FromPrimitive;
use serde::Serialize;

use crate::bounds::constants::big_string;
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::relation::GraphSpec;
use crate::spectra::sphere_transform;

pub const MAX_SPECTRAL_GRID: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralCycles {
    pub n: usize,
    /// `sum_m (q^d S_t^(m))^n` in floating point.
    pub value: f64,
    /// `value` rounded to the nearest integer.
    #[serde(with = "big_string")]
    pub rounded: BigUint,
    /// `|value - rounded|`.
    pub rounding_error: f64,
}

/// `C_n` of the distance graph on all of `F_q^d` from its eigenvalues
/// `q^d S_t^(m)`.
pub fn full_space_spectral_cycles(ctx: FieldCtx, spec: &GraphSpec, n: usize) -> Result<SpectralCycles> {
    if !spec.is_distance() {
        return Err(Error::WrongRelation(
            "full-space spectral cycles (distance relation only)",
        ));
    }
    spec.require_nonzero("full-space spectral cycles")?;
    if n < 2 {
        return Err(Error::OutOfRange(format!("cycle length must be >= 2, got {n}")));
    }
    ctx.space_size_capped("full-space spectrum", MAX_SPECTRAL_GRID)?;
    let transform = sphere_transform(ctx, spec.t)?;
    let volume = transform.len() as f64;
    // S_t is symmetric under x -> -x, so every eigenvalue is real
    let value: f64 = (0..transform.len())
        .map(|m| (volume * transform.get(m).re).powi(n as i32))
        .sum();
    let nearest = value.round();
    Ok(SpectralCycles {
        n,
        value,
        rounded: BigUint::from_f64(nearest.max(0.0)).unwrap_or_default(),
        rounding_error: (value - nearest).abs(),
    })
}
