//! Exact counting arithmetic.
//!
//! Counting kernels are generic over [`Exact`]. They run first on `u128`
//! with checked operations and are re-run on `BigUint` if any operation
//! overflows, so callers always receive exact arbitrary-precision results.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

pub trait Exact: Clone + Send + Sync + PartialEq + std::fmt::Debug + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_u64(v: u64) -> Self;
    fn is_zero(&self) -> bool;
    fn checked_add(&self, other: &Self) -> Option<Self>;
    fn checked_mul(&self, other: &Self) -> Option<Self>;
    fn to_biguint(&self) -> BigUint;
}

impl Exact for u128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_u64(v: u64) -> Self {
        v as u128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        u128::checked_add(*self, *other)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        u128::checked_mul(*self, *other)
    }
    fn to_biguint(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl Exact for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_u64(v: u64) -> Self {
        BigUint::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn to_biguint(&self) -> BigUint {
        self.clone()
    }
}

/// Runs a generic kernel on `u128`, falling back to `BigUint` on overflow.
pub(crate) fn with_fallback<R>(
    narrow: impl FnOnce() -> Option<R>,
    wide: impl FnOnce() -> Option<R>,
) -> R {
    narrow()
        .or_else(wide)
        .expect("BigUint arithmetic cannot overflow")
}

pub(crate) fn sum_exact<'a, T: Exact>(values: impl IntoIterator<Item = &'a T>) -> Option<T> {
    let mut acc = T::zero();
    for v in values {
        acc = acc.checked_add(v)?;
    }
    Some(acc)
}

pub(crate) fn to_f64(v: &BigUint) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}

/// Square 0/1 matrix stored as packed bit rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn from_rows(n: usize, rows: Vec<Vec<u64>>) -> Self {
        let words = n.div_ceil(64);
        let mut bits = Vec::with_capacity(n * words);
        for r in rows {
            debug_assert_eq!(r.len(), words);
            bits.extend(r);
        }
        BitMatrix { n, words, bits }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words_per_row(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.bits[i * self.words + j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let w = &mut self.bits[i * self.words + j / 64];
        if value {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn row_count(&self, i: usize) -> u64 {
        self.row(i).iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn count_ones(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        ones(self.row(i))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| self.row_ones(i).all(|j| self.get(j, i)))
    }

    /// Boolean product `self * other`.
    pub fn bool_mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.n, other.n);
        let words = self.words;
        let rows: Vec<Vec<u64>> = (0..self.n)
            .into_par_iter()
            .map(|i| {
                let mut acc = vec![0u64; words];
                for l in self.row_ones(i) {
                    for (a, b) in acc.iter_mut().zip(other.row(l)) {
                        *a |= *b;
                    }
                }
                acc
            })
            .collect();
        BitMatrix::from_rows(self.n, rows)
    }
}

/// Positions of set bits in a packed row.
pub fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut word = word;
        std::iter::from_fn(move || {
            if word == 0 {
                None
            } else {
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            }
        })
    })
}

/// Dense square matrix of exact counts.
#[derive(Debug, Clone, PartialEq)]
pub struct CountMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Exact> CountMatrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = T::one();
        }
        CountMatrix { n, data }
    }

    /// Row-major entries; `data.len()` must be `n * n`.
    pub fn from_entries(n: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), n * n, "matrix data has wrong length");
        CountMatrix { n, data }
    }

    pub fn from_bits(a: &BitMatrix) -> Self {
        let n = a.n();
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            for j in a.row_ones(i) {
                data[i * n + j] = T::one();
            }
        }
        CountMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn total(&self) -> Option<T> {
        sum_exact(&self.data)
    }

    pub fn trace(&self) -> Option<T> {
        sum_exact((0..self.n).map(|i| self.get(i, i)))
    }

    pub fn to_biguint(&self) -> CountMatrix<BigUint> {
        CountMatrix {
            n: self.n,
            data: self.data.iter().map(Exact::to_biguint).collect(),
        }
    }

    /// `self * A` for a 0/1 matrix `A`, using its rows as adjacency lists.
    pub fn mul_bits(&self, a: &BitMatrix) -> Option<Self> {
        let n = self.n;
        let rows: Option<Vec<Vec<T>>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut out = vec![T::zero(); n];
                for (l, v) in self.row(i).iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    for j in a.row_ones(l) {
                        out[j] = out[j].checked_add(v)?;
                    }
                }
                Some(out)
            })
            .collect();
        Some(CountMatrix {
            n,
            data: rows?.into_iter().flatten().collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Option<Self> {
        let n = self.n;
        let rows: Option<Vec<Vec<T>>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut out = vec![T::zero(); n];
                for (l, v) in self.row(i).iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    for (o, w) in out.iter_mut().zip(other.row(l)) {
                        if !w.is_zero() {
                            *o = o.checked_add(&v.checked_mul(w)?)?;
                        }
                    }
                }
                Some(out)
            })
            .collect();
        Some(CountMatrix {
            n,
            data: rows?.into_iter().flatten().collect(),
        })
    }

    /// `A^k` by square-and-multiply, `k >= 1`.
    pub fn power_of(a: &BitMatrix, k: u32) -> Option<Self> {
        assert!(k >= 1);
        let mut result: Option<Self> = None;
        let mut base = Self::from_bits(a);
        let mut e = k;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base)?;
        }
        result
    }

    /// `sum_{x,y} self[x][y] * other[y][x]`, i.e. `tr(self * other)`.
    pub fn trace_of_product(&self, other: &Self) -> Option<T> {
        let n = self.n;
        let parts: Option<Vec<T>> = (0..n)
            .into_par_iter()
            .map(|x| {
                let mut acc = T::zero();
                for y in 0..n {
                    let a = self.get(x, y);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.get(y, x);
                    if b.is_zero() {
                        continue;
                    }
                    acc = acc.checked_add(&a.checked_mul(b)?)?;
                }
                Some(acc)
            })
            .collect();
        sum_exact(&parts?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> BitMatrix {
        // a - b - c with a in the middle
        let mut a = BitMatrix::zeros(3);
        for (i, j) in [(0, 1), (1, 0), (0, 2), (2, 0)] {
            a.set(i, j, true);
        }
        a
    }

    #[test]
    fn bit_rows() {
        let mut m = BitMatrix::zeros(130);
        m.set(3, 129, true);
        m.set(3, 64, true);
        m.set(3, 0, true);
        assert_eq!(m.row_ones(3).collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(m.row_count(3), 3);
        m.set(3, 64, false);
        assert!(!m.get(3, 64));
        assert!(!m.is_symmetric());
    }

    #[test]
    fn powers_of_path() {
        let a = path3();
        let a2 = CountMatrix::<u128>::power_of(&a, 2).unwrap();
        assert_eq!(a2.entries(), &[2, 0, 0, 0, 1, 1, 0, 1, 1]);
        let a4 = CountMatrix::<u128>::power_of(&a, 4).unwrap();
        assert_eq!(a4.trace(), Some(8));
        let via_bits = a2.mul_bits(&a).unwrap().mul_bits(&a).unwrap();
        assert_eq!(via_bits, a4);
        assert_eq!(a2.trace_of_product(&a2), Some(8));
    }

    #[test]
    fn overflow_detected_and_fallback_exact() {
        let mut a = BitMatrix::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                a.set(i, j, true);
            }
        }
        // entries of J^k are 2^(k-1); 2^129 overflows u128
        assert!(CountMatrix::<u128>::power_of(&a, 130).is_none());
        let big = with_fallback(
            || CountMatrix::<u128>::power_of(&a, 130).map(|m| m.to_biguint()),
            || CountMatrix::<BigUint>::power_of(&a, 130),
        );
        assert_eq!(big.get(0, 0), &(BigUint::from(1u8) << 129));
    }
}
