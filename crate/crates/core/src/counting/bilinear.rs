use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::constants::big_string;
use crate::error::{Error, Result};
use crate::exact::{with_fallback, CountMatrix, Exact};
use crate::graph::Graph;

pub const MAX_BILINEAR_VERTICES: usize = 300;

/// A nonnegative integer function on `E x E`, row-major by vertex index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairFunction {
    n: usize,
    values: Vec<u64>,
}

impl PairFunction {
    pub fn zeros(n: usize) -> Self {
        PairFunction {
            n,
            values: vec![0; n * n],
        }
    }

    pub fn from_values(n: usize, values: Vec<u64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                got: values.len(),
            });
        }
        Ok(PairFunction { n, values })
    }

    /// Rejects negative entries with their `(row, column)`.
    pub fn from_signed(n: usize, values: &[i64]) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                got: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|&v| v < 0) {
            return Err(Error::NegativeInput(pos / n, pos % n));
        }
        Ok(PairFunction {
            n,
            values: values.iter().map(|&v| v as u64).collect(),
        })
    }

    /// Indicator of the single pair `(x, y)`.
    pub fn indicator(n: usize, x: usize, y: usize) -> Self {
        let mut f = Self::zeros(n);
        f.values[x * n + y] = 1;
        f
    }

    /// The walk-count matrix `(A^k)_{xy}` as a pair function.
    pub fn from_counts(m: &CountMatrix<BigUint>) -> Result<Self> {
        let values: Option<Vec<u64>> = m.entries().iter().map(|v| u64::try_from(v).ok()).collect();
        let values = values.ok_or_else(|| Error::too_large("pair-function entry", u64::MAX, u64::MAX))?;
        Ok(PairFunction { n: m.n(), values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: usize, y: usize) -> u64 {
        self.values[x * self.n + y]
    }

    pub fn set(&mut self, x: usize, y: usize, v: u64) {
        self.values[x * self.n + y] = v;
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// `F(x) = sum_y f(x, y)`.
    pub fn row_sums(&self) -> Vec<u128> {
        (0..self.n)
            .map(|x| self.values[x * self.n..(x + 1) * self.n].iter().map(|&v| v as u128).sum())
            .collect()
    }

    /// `F'(y) = sum_x f(x, y)`.
    pub fn column_sums(&self) -> Vec<u128> {
        let mut out = vec![0u128; self.n];
        for x in 0..self.n {
            for (o, &v) in out.iter_mut().zip(&self.values[x * self.n..(x + 1) * self.n]) {
                *o += v as u128;
            }
        }
        out
    }

    pub fn l1(&self) -> BigUint {
        self.values.iter().map(|&v| BigUint::from(v)).sum()
    }

    /// `||f||_2^2`.
    pub fn l2_squared(&self) -> BigUint {
        self.values.iter().map(|&v| BigUint::from(v) * v).sum()
    }
}

fn squares(v: &[u128]) -> BigUint {
    v.iter().map(|&x| BigUint::from(x) * x).sum()
}

/// The bilinear form with the squared norms entering its bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BilinearValue {
    /// `sum f(x,y) A(x,z) A(y,w) g(z,w)`.
    #[serde(with = "big_string")]
    pub value: BigUint,
    #[serde(with = "big_string")]
    pub f_l1: BigUint,
    #[serde(with = "big_string")]
    pub g_l1: BigUint,
    #[serde(with = "big_string")]
    pub f_l2_sq: BigUint,
    #[serde(with = "big_string")]
    pub g_l2_sq: BigUint,
    /// `||F||_2^2`, row sums of `f`.
    #[serde(with = "big_string")]
    pub f_rows_sq: BigUint,
    #[serde(with = "big_string")]
    pub g_rows_sq: BigUint,
    /// `||F'||_2^2`, column sums of `f`.
    #[serde(with = "big_string")]
    pub f_cols_sq: BigUint,
    #[serde(with = "big_string")]
    pub g_cols_sq: BigUint,
}

/// Evaluates the form as `<A^T f A, g>`, `O(|E|^3)`.
pub fn bilinear_form(graph: &Graph, f: &PairFunction, g: &PairFunction) -> Result<BilinearValue> {
    let n = graph.order();
    if n > MAX_BILINEAR_VERTICES {
        return Err(Error::too_large(
            "vertex set for the bilinear form",
            n as u64,
            MAX_BILINEAR_VERTICES as u64,
        ));
    }
    for h in [f, g] {
        if h.n != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: h.n,
            });
        }
    }
    let value = with_fallback(
        || sandwich::<u128>(graph, f, g).map(|v| v.to_biguint()),
        || sandwich::<BigUint>(graph, f, g),
    );
    Ok(BilinearValue {
        value,
        f_l1: f.l1(),
        g_l1: g.l1(),
        f_l2_sq: f.l2_squared(),
        g_l2_sq: g.l2_squared(),
        f_rows_sq: squares(&f.row_sums()),
        g_rows_sq: squares(&g.row_sums()),
        f_cols_sq: squares(&f.column_sums()),
        g_cols_sq: squares(&g.column_sums()),
    })
}

fn sandwich<T: Exact>(graph: &Graph, f: &PairFunction, g: &PairFunction) -> Option<T> {
    let n = graph.order();
    let a = graph.adjacency();
    let fm = CountMatrix::from_entries(n, f.values.iter().map(|&v| T::from_u64(v)).collect());
    // b(x, w) = sum_y f(x, y) A(y, w)
    let b = fm.mul_bits(a)?;
    // c(z, w) = sum_x A(x, z) b(x, w)
    let mut c = vec![T::zero(); n * n];
    for x in 0..n {
        let row = b.row(x);
        for z in a.row_ones(x) {
            for (cw, bw) in c[z * n..(z + 1) * n].iter_mut().zip(row) {
                if !bw.is_zero() {
                    *cw = cw.checked_add(bw)?;
                }
            }
        }
    }
    let parts: Option<Vec<T>> = c
        .par_chunks(n.max(1))
        .zip(g.values.par_chunks(n.max(1)))
        .map(|(cr, gr)| {
            let mut acc = T::zero();
            for (cv, &gv) in cr.iter().zip(gr) {
                if gv != 0 && !cv.is_zero() {
                    acc = acc.checked_add(&cv.checked_mul(&T::from_u64(gv))?)?;
                }
            }
            Some(acc)
        })
        .collect();
    crate::exact::sum_exact(&parts?)
}
