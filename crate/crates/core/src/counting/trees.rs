//! Labeled trees and tree-homomorphism counts.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{sum_exact, with_fallback, Exact};
use crate::graph::Graph;

pub const MAX_TREE_VERTICES: usize = 16;
pub const MAX_ENUMERATED_TREE_VERTICES: usize = 8;

/// A labeled tree on vertices `0..vertex_count`. Serialized as its Prüfer
/// sequence, which determines it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct TreeShape {
    pub vertex_count: usize,
    /// `(parent, child)` pairs of the orientation rooted at vertex 0.
    pub edges: Vec<(usize, usize)>,
    /// Prüfer sequence of this labeling (length `vertex_count - 2`).
    pub pruefer: Vec<usize>,
}

impl TryFrom<Vec<usize>> for TreeShape {
    type Error = Error;

    fn try_from(seq: Vec<usize>) -> Result<Self> {
        TreeShape::from_pruefer(&seq)
    }
}

impl From<TreeShape> for Vec<usize> {
    fn from(tree: TreeShape) -> Self {
        tree.pruefer
    }
}

impl TreeShape {
    /// The tree encoded by a Prüfer sequence on `seq.len() + 2` vertices.
    pub fn from_pruefer(seq: &[usize]) -> Result<Self> {
        let v = seq.len() + 2;
        if let Some(&bad) = seq.iter().find(|&&s| s >= v) {
            return Err(Error::OutOfRange(format!(
                "Prüfer entry {bad} out of range for {v} vertices"
            )));
        }
        let mut degree = vec![1usize; v];
        for &s in seq {
            degree[s] += 1;
        }
        let mut undirected = Vec::with_capacity(v - 1);
        for &s in seq {
            let leaf = (0..v).find(|&i| degree[i] == 1).expect("a leaf exists");
            undirected.push((leaf, s));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..v).filter(|&i| degree[i] == 1).collect();
        undirected.push((rest[0], rest[1]));
        Self::from_edges(v, &undirected)
    }

    /// Validates an undirected edge list and orients it from vertex 0.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if vertex_count < 1 {
            return Err(Error::OutOfRange("a tree needs at least one vertex".into()));
        }
        if edges.len() + 1 != vertex_count {
            return Err(Error::OutOfRange(format!(
                "a tree on {vertex_count} vertices has {} edges, got {}",
                vertex_count - 1,
                edges.len()
            )));
        }
        let adj = adjacency(vertex_count, edges)?;
        let oriented = orient(&adj, 0);
        if oriented.len() + 1 != vertex_count {
            return Err(Error::OutOfRange("edge list is not connected".into()));
        }
        let pruefer = encode_pruefer(&adj);
        Ok(TreeShape {
            vertex_count,
            edges: oriented,
            pruefer,
        })
    }

    pub fn path(vertex_count: usize) -> Result<Self> {
        let edges: Vec<(usize, usize)> = (1..vertex_count).map(|i| (i - 1, i)).collect();
        Self::from_edges(vertex_count, &edges)
    }

    pub fn star(vertex_count: usize) -> Result<Self> {
        let edges: Vec<(usize, usize)> = (1..vertex_count).map(|i| (0, i)).collect();
        Self::from_edges(vertex_count, &edges)
    }

    pub fn edge_count(&self) -> usize {
        self.vertex_count - 1
    }

    pub fn neighbor_lists(&self) -> Vec<Vec<usize>> {
        adjacency(self.vertex_count, &self.edges).expect("valid tree")
    }

    /// `(parent, child)` orientation rooted at `root`.
    pub fn rooted_at(&self, root: usize) -> Vec<(usize, usize)> {
        orient(&self.neighbor_lists(), root)
    }

    /// The same tree with vertex `i` renamed `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let edges: Vec<(usize, usize)> =
            self.edges.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
        Self::from_edges(self.vertex_count, &edges)
    }

    /// Isomorphism-invariant key: the smallest AHU encoding over the tree's centers.
    pub fn shape_key(&self) -> String {
        let adj = self.neighbor_lists();
        centers(&adj)
            .into_iter()
            .map(|c| ahu(&adj, c, usize::MAX))
            .min()
            .unwrap_or_default()
    }

    /// Lexicographically smallest Prüfer sequence over all relabelings.
    /// Brute force over permutations; intended for trees up to 8 vertices.
    pub fn canonical_pruefer(&self) -> Result<Vec<usize>> {
        if self.vertex_count > MAX_ENUMERATED_TREE_VERTICES {
            return Err(Error::too_large(
                "tree for canonical form",
                self.vertex_count as u64,
                MAX_ENUMERATED_TREE_VERTICES as u64,
            ));
        }
        let mut perm: Vec<usize> = (0..self.vertex_count).collect();
        let mut best = self.pruefer.clone();
        loop {
            let relabeled = self.relabel(&perm)?;
            if relabeled.pruefer < best {
                best = relabeled.pruefer;
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        Ok(best)
    }
}

fn adjacency(v: usize, edges: &[(usize, usize)]) -> Result<Vec<Vec<usize>>> {
    let mut adj = vec![Vec::new(); v];
    for &(a, b) in edges {
        if a >= v || b >= v || a == b {
            return Err(Error::OutOfRange(format!("bad tree edge ({a}, {b})")));
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
    }
    Ok(adj)
}

/// Breadth-first `(parent, child)` edges reachable from `root`.
fn orient(adj: &[Vec<usize>], root: usize) -> Vec<(usize, usize)> {
    let mut seen = vec![false; adj.len()];
    let mut out = Vec::new();
    let mut queue = std::collections::VecDeque::from([root]);
    seen[root] = true;
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                out.push((u, w));
                queue.push_back(w);
            }
        }
    }
    out
}

fn encode_pruefer(adj: &[Vec<usize>]) -> Vec<usize> {
    let v = adj.len();
    if v <= 2 {
        return Vec::new();
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut removed = vec![false; v];
    let mut seq = Vec::with_capacity(v - 2);
    for _ in 0..v - 2 {
        let leaf = (0..v)
            .find(|&i| !removed[i] && degree[i] == 1)
            .expect("a leaf exists");
        let parent = adj[leaf]
            .iter()
            .copied()
            .find(|&w| !removed[w])
            .expect("leaf has a neighbour");
        seq.push(parent);
        removed[leaf] = true;
        degree[parent] -= 1;
    }
    seq
}

fn centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let v = adj.len();
    if v <= 2 {
        return (0..v).collect();
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..v).filter(|&i| degree[i] == 1).collect();
    let mut left = v;
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            degree[leaf] = 0;
        }
        // removed vertices have degree 0 and are never touched again
        for &leaf in &layer {
            for &w in &adj[leaf] {
                if degree[w] > 0 {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    layer
}

fn ahu(adj: &[Vec<usize>], u: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[u]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| ahu(adj, w, u))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All `v^(v-2)` labeled trees on `v` vertices, in Prüfer-sequence order.
pub fn enumerate_trees(v: usize) -> Result<Vec<TreeShape>> {
    if v < 2 {
        return Err(Error::OutOfRange(format!("need at least 2 vertices, got {v}")));
    }
    if v > MAX_ENUMERATED_TREE_VERTICES {
        return Err(Error::too_large(
            "tree enumeration",
            v as u64,
            MAX_ENUMERATED_TREE_VERTICES as u64,
        ));
    }
    let len = v - 2;
    let mut seq = vec![0usize; len];
    let mut out = Vec::with_capacity(v.pow(len as u32));
    loop {
        out.push(TreeShape::from_pruefer(&seq)?);
        let mut pos = len;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            seq[pos] += 1;
            if seq[pos] < v {
                break;
            }
            seq[pos] = 0;
        }
    }
}

/// Isomorphism classes of the labeled trees on `v` vertices, with the number
/// of labelings in each class, keyed by [`TreeShape::shape_key`].
pub fn tree_classes(v: usize) -> Result<BTreeMap<String, (TreeShape, u64)>> {
    let mut classes: BTreeMap<String, (TreeShape, u64)> = BTreeMap::new();
    for t in enumerate_trees(v)? {
        classes
            .entry(t.shape_key())
            .and_modify(|e| e.1 += 1)
            .or_insert((t, 1));
    }
    Ok(classes)
}

/// Number of edge-preserving maps `V(T) -> E` (repeats allowed).
pub fn tree_embeddings(g: &Graph, tree: &TreeShape) -> Result<BigUint> {
    tree_embeddings_rooted(g, tree, 0)
}

/// As [`tree_embeddings`], running the message passing from `root`.
pub fn tree_embeddings_rooted(g: &Graph, tree: &TreeShape, root: usize) -> Result<BigUint> {
    if tree.vertex_count > MAX_TREE_VERTICES {
        return Err(Error::too_large(
            "tree",
            tree.vertex_count as u64,
            MAX_TREE_VERTICES as u64,
        ));
    }
    if root >= tree.vertex_count {
        return Err(Error::OutOfRange(format!("root {root} not a tree vertex")));
    }
    g.require_symmetric()?;
    let oriented = tree.rooted_at(root);
    Ok(with_fallback(
        || embed::<u128>(g, tree.vertex_count, &oriented, root).map(|v| v.to_biguint()),
        || embed::<BigUint>(g, tree.vertex_count, &oriented, root),
    ))
}

/// Leaf messages are all ones; an internal vertex multiplies `A m_c`
/// over its children `c`; the answer sums the root message.
fn embed<T: Exact>(g: &Graph, v: usize, oriented: &[(usize, usize)], root: usize) -> Option<T> {
    let mut children = vec![Vec::new(); v];
    for &(p, c) in oriented {
        children[p].push(c);
    }
    // breadth-first order reversed visits children before parents
    let mut order: Vec<usize> = vec![root];
    order.extend(oriented.iter().map(|&(_, c)| c));
    let mut messages: Vec<Option<Vec<T>>> = vec![None; v];
    for &u in order.iter().rev() {
        let mut msg = vec![T::one(); g.order()];
        for &c in &children[u] {
            let child = messages[c].take().expect("child processed first");
            let pushed = super::paths::apply(g, &child)?;
            for (m, p) in msg.iter_mut().zip(&pushed) {
                *m = m.checked_mul(p)?;
            }
        }
        messages[u] = Some(msg);
    }
    sum_exact(messages[root].as_ref()?)
}

/// `G_T = 2^(C(r+1, 2) - r)`, the graphs on `r + 1` labeled vertices
/// containing a given spanning tree.
pub fn supergraph_count(vertex_count: usize) -> BigUint {
    let r = vertex_count - 1;
    BigUint::from(1u8) << (vertex_count * r / 2 - r)
}

/// `sum_{r=1}^{n-2} sum_{T on r+1 labeled vertices} n_T G_T`.
///
/// Labeled trees are grouped by isomorphism class; each class is counted once
/// and weighted by its number of labelings.
pub fn degenerate_bound(g: &Graph, n: usize) -> Result<BigUint> {
    if n > MAX_ENUMERATED_TREE_VERTICES + 1 {
        return Err(Error::too_large(
            "cycle length for the degenerate bound",
            n as u64,
            (MAX_ENUMERATED_TREE_VERTICES + 1) as u64,
        ));
    }
    g.require_symmetric()?;
    let mut total = BigUint::from(0u8);
    for v in 2..n {
        let g_t = supergraph_count(v);
        for (_, (tree, labelings)) in tree_classes(v)? {
            total += tree_embeddings(g, &tree)? * &g_t * labelings;
        }
    }
    Ok(total)
}
