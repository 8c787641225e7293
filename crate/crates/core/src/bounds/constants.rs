//! Closed-form constants appearing in the cycle, path and tree bounds.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `gamma = -1` for `d = 2`, `-(d - 2) / 2` otherwise.
pub fn gamma(d: usize) -> f64 {
    if d == 2 {
        -1.0
    } else {
        -(d as f64 - 2.0) / 2.0
    }
}

/// `K_4 = 48`; `K_n = 36 + 80 * 6^(floor(n/2) - 2) + 12 floor(n/2)` for `n >= 5`.
pub fn k_constant(n: usize) -> Result<BigUint> {
    match n {
        0..=3 => Err(Error::OutOfRange(format!("K_n needs n >= 4, got {n}"))),
        4 => Ok(BigUint::from(48u32)),
        _ => {
            let h = (n / 2) as u32;
            Ok(BigUint::from(36u32)
                + BigUint::from(80u32) * BigUint::from(6u32).pow(h - 2)
                + BigUint::from(12 * h))
        }
    }
}

/// `A_k = 10 * 6^(k - 2)`, `k >= 2`.
pub fn a_constant(k: usize) -> Result<BigUint> {
    if k < 2 {
        return Err(Error::OutOfRange(format!("A_k needs k >= 2, got {k}")));
    }
    Ok(BigUint::from(10u32) * BigUint::from(6u32).pow(k as u32 - 2))
}

/// `c_n = (n - 1)^(n - 3) * 2^(C(n-1, 2) - n + 3)`, `n >= 3`.
pub fn c_constant(n: usize) -> Result<BigUint> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("c_n needs n >= 3, got {n}")));
    }
    let exp = (n - 1) * (n - 2) / 2 + 3 - n;
    Ok(BigUint::from(n - 1).pow(n as u32 - 3) << exp)
}

/// `psi_k(alpha) = (k - 1) alpha - k + 2`.
pub fn psi(k: usize, alpha: f64) -> f64 {
    (k as f64 - 1.0) * alpha - k as f64 + 2.0
}

/// `X = (|E| + K q^((d+1)/2)) / q`, the growth factor in `P_k <= |E| X^k`.
pub fn path_growth(q: u32, d: usize, size: usize, remainder_constant: f64) -> f64 {
    (size as f64 + remainder_constant * (q as f64).powf((d as f64 + 1.0) / 2.0)) / q as f64
}

/// The fraction subtracted from `d + 2` in the size thresholds:
/// `(k-2)/(k-1)` for `n = 2k`, `(2k-3)/(2k-1)` for `n = 2k+1`.
pub fn threshold_gain(n: usize) -> Result<f64> {
    if n < 4 {
        return Err(Error::OutOfRange(format!("size threshold needs n >= 4, got {n}")));
    }
    let k = (n / 2) as f64;
    Ok(if n % 2 == 0 {
        (k - 2.0) / (k - 1.0)
    } else {
        (2.0 * k - 3.0) / (2.0 * k - 1.0)
    })
}

/// Exponent `e` with the cycle-count size threshold `|E| >= q^e`.
pub fn size_threshold_exponent(n: usize, d: usize, delta: f64) -> Result<f64> {
    Ok((d as f64 + 2.0 - threshold_gain(n)? + delta) / 2.0)
}

/// `epsilon = 1 - gain + delta` in the non-degenerate cycle bound.
pub fn nondegenerate_epsilon(n: usize, delta: f64) -> Result<f64> {
    Ok(1.0 - threshold_gain(n)? + delta)
}

/// Upper limit of `delta`: `1 / (2 floor(n/2)^2)`.
pub fn delta_limit(n: usize) -> f64 {
    let h = (n / 2) as f64;
    1.0 / (2.0 * h * h)
}

pub(crate) fn check_delta(n: usize, delta: f64) -> Result<()> {
    let limit = delta_limit(n);
    if !(delta > 0.0 && delta < limit) {
        return Err(Error::OutOfRange(format!(
            "need 0 < delta < 1/(2 floor(n/2)^2) = {limit} for n = {n}, got {delta}"
        )));
    }
    Ok(())
}

/// All constants for one parameter choice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremConstants {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub gamma: f64,
    #[serde(with = "big_string")]
    pub k_n: BigUint,
    #[serde(with = "big_string")]
    pub a_k: BigUint,
    #[serde(with = "big_string")]
    pub c_n: BigUint,
    pub psi: Option<f64>,
    pub alpha: Option<f64>,
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
    /// Exponents of `q` in the size thresholds, by name.
    pub thresholds: BTreeMap<String, f64>,
    /// `X`, filled in by [`TheoremConstants::at`].
    pub x: Option<f64>,
}

/// Evaluates every constant. `alpha` must satisfy `(k-2)/(k-1) <= alpha < 1`
/// and `delta` must satisfy `0 < delta < 1/(2 floor(n/2)^2)` when given.
pub fn constants(
    n: usize,
    k: usize,
    d: usize,
    alpha: Option<f64>,
    delta: Option<f64>,
) -> Result<TheoremConstants> {
    if d < 2 {
        return Err(Error::BadDimension(d));
    }
    let k_n = k_constant(n)?;
    let a_k = a_constant(k)?;
    let c_n = c_constant(n)?;
    if let Some(a) = alpha {
        let lo = (k as f64 - 2.0) / (k as f64 - 1.0);
        if !(a >= lo && a < 1.0) {
            return Err(Error::OutOfRange(format!(
                "need (k-2)/(k-1) = {lo} <= alpha < 1, got {a}"
            )));
        }
    }
    let mut thresholds = BTreeMap::new();
    thresholds.insert("functional".into(), (d as f64 + 1.0) / 2.0);
    thresholds.insert("main".into(), (d as f64 + 2.0) / 2.0);
    let mut epsilon = None;
    if let Some(dl) = delta {
        check_delta(n, dl)?;
        thresholds.insert("cycles".into(), size_threshold_exponent(n, d, dl)?);
        epsilon = Some(nondegenerate_epsilon(n, dl)?);
    }
    if let Some(a) = alpha {
        thresholds.insert("even_cycles".into(), (d as f64 + 2.0 - a) / 2.0);
    }
    Ok(TheoremConstants {
        n,
        k,
        d,
        gamma: gamma(d),
        k_n,
        a_k,
        c_n,
        psi: alpha.map(|a| psi(k, a)),
        alpha,
        delta,
        epsilon,
        thresholds,
        x: None,
    })
}

impl TheoremConstants {
    /// Fills in `X` for a set of `size` points in `F_q^d`.
    pub fn at(mut self, q: u32, size: usize) -> Self {
        self.x = Some(path_growth(q, self.d, size, 1.0));
        self
    }
}

pub(crate) mod big_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
