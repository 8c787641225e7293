use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::BitMatrix;
use crate::graph::Graph;

pub const MAX_NONDEGENERATE_LENGTH: usize = 12;
pub const MAX_NONDEGENERATE_VERTICES: usize = 5_000;

/// `N_n`: ordered `n`-tuples of pairwise distinct vertices with
/// `x_1 ~ x_2 ~ ... ~ x_n ~ x_1`.
///
/// Depth-first search from each start vertex. A branch at depth `i` only
/// continues through vertices that can reach the start in exactly the
/// remaining number of steps (boolean powers of `A^T`).
pub fn nondegenerate_count(g: &Graph, n: usize) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("cycle length must be >= 2, got {n}")));
    }
    if n > MAX_NONDEGENERATE_LENGTH {
        return Err(Error::TooLong {
            len: n,
            cap: MAX_NONDEGENERATE_LENGTH,
        });
    }
    if g.order() > MAX_NONDEGENERATE_VERTICES {
        return Err(Error::too_large(
            "vertex set for non-degenerate search",
            g.order() as u64,
            MAX_NONDEGENERATE_VERTICES as u64,
        ));
    }
    let size = g.order();
    if size < n {
        return Ok(BigUint::from(0u8));
    }
    let a = g.adjacency();
    let at = if g.is_symmetric() { a.clone() } else { transpose(a) };
    // back[s] row u: vertices w with a walk of length s from w to u
    let mut back: Vec<BitMatrix> = vec![BitMatrix::zeros(size), at.clone()];
    for s in 2..n {
        let next = back[s - 1].bool_mul(&at);
        back.push(next);
    }
    let search = Search {
        g,
        back: &back,
        n,
        words: a.words_per_row(),
    };
    let total: u128 = (0..size)
        .into_par_iter()
        .map(|start| search.walks_from(start))
        .sum();
    Ok(BigUint::from(total))
}

fn transpose(a: &BitMatrix) -> BitMatrix {
    let mut t = BitMatrix::zeros(a.n());
    for i in 0..a.n() {
        for j in a.row_ones(i) {
            t.set(j, i, true);
        }
    }
    t
}

struct Search<'a> {
    g: &'a Graph,
    back: &'a [BitMatrix],
    n: usize,
    words: usize,
}

impl Search<'_> {
    fn walks_from(&self, start: usize) -> u128 {
        let mut used = vec![0u64; self.words];
        used[start / 64] |= 1 << (start % 64);
        self.extend(start, start, 1, &mut used)
    }

    /// `depth` vertices are placed, the last one is `current`.
    fn extend(&self, start: usize, current: usize, depth: usize, used: &mut [u64]) -> u128 {
        let remaining = self.n - depth;
        let row = self.g.adjacency().row(current);
        let reach = self.back[remaining].row(start);
        if remaining == 1 {
            return row
                .iter()
                .zip(reach)
                .zip(used.iter())
                .map(|((r, b), u)| (r & b & !u).count_ones() as u128)
                .sum();
        }
        let mut total = 0u128;
        for w in 0..self.words {
            let mut cand = row[w] & reach[w] & !used[w];
            while cand != 0 {
                let bit = cand.trailing_zeros() as usize;
                cand &= cand - 1;
                let next = w * 64 + bit;
                used[w] |= 1 << bit;
                total += self.extend(start, next, depth + 1, used);
                used[w] &= !(1 << bit);
            }
        }
        total
    }
}
