//! Dense adjacency storage, colored graphs, and exact matrix identities.

pub mod spectrum;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symmetric 0/1 adjacency with bitset rows. A loop sets the diagonal bit
/// and counts once toward the degree.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    labels: Vec<String>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.bits == other.bits
    }
}
impl Eq for Graph {}

impl Graph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph { n, words, bits: vec![0; n * words], labels: Vec::new() }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        debug_assert_eq!(labels.len(), self.n);
        self.labels = labels;
        self
    }

    /// Label of vertex `v`, falling back to its index.
    pub fn label(&self, v: usize) -> String {
        self.labels.get(v).cloned().unwrap_or_else(|| v.to_string())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> usize {
        self.words
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
        self.bits[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.row(u))
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    /// The common degree if every row sum agrees.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degrees();
        match d.first() {
            None => Some(0),
            Some(&d0) => d.iter().all(|&x| x == d0).then_some(d0),
        }
    }

    pub fn loop_count(&self) -> usize {
        (0..self.n).filter(|&u| self.has_edge(u, u)).count()
    }

    pub fn loops(&self) -> Vec<usize> {
        (0..self.n).filter(|&u| self.has_edge(u, u)).collect()
    }

    /// Undirected edges with `u <= v`; a loop appears once.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if v >= u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_total(&self) -> usize {
        let ordered: usize = self.degrees().iter().sum();
        (ordered + self.loop_count()) / 2
    }

    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        self.row(u).iter().zip(self.row(v)).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn without_loops(&self) -> Graph {
        let mut g = self.clone();
        for u in 0..self.n {
            g.bits[u * self.words + u / 64] &= !(1 << (u % 64));
        }
        g
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|u| self.neighbors(u).all(|v| self.has_edge(v, u)))
    }

    /// Hash of the adjacency bits; ties certificates to the graph they came from.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.n.hash(&mut h);
        self.bits.hash(&mut h);
        h.finish()
    }

    pub fn dense<T: num_traits::Float>(&self) -> Vec<T> {
        let mut a = vec![T::zero(); self.n * self.n];
        for u in 0..self.n {
            for v in self.neighbors(u) {
                a[u * self.n + v] = T::one();
            }
        }
        a
    }
}

pub(crate) fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &word)| {
        let mut x = word;
        std::iter::from_fn(move || {
            if x == 0 {
                return None;
            }
            let b = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(w * 64 + b)
        })
    })
}

/// Subset of `0..n` as a bitmask, iterated in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    n: usize,
    mask: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet { n, mask: vec![0; n.div_ceil(64).max(1)] }
    }

    pub fn full(n: usize) -> Self {
        Self::from_indices(n, 0..n)
    }

    pub fn from_indices(n: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        for i in idx {
            s.insert(i);
        }
        s
    }

    /// Uniform subset of the given size, without replacement.
    pub fn random<R: Rng + ?Sized>(n: usize, size: usize, rng: &mut R) -> Self {
        Self::from_indices(n, sample(rng, n, size.min(n)))
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.n, "vertex {i} outside 0..{}", self.n);
        self.mask[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.mask[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.mask.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.iter().all(|&w| w == 0)
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> &[u64] {
        &self.mask
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        iter_bits(&self.mask)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.mask.iter().zip(&other.mask).all(|(a, b)| a & !b == 0)
    }
}

/// No color on this pair.
pub const NO_COLOR: u16 = u16::MAX;

/// Edge coloring of all unordered pairs (loops included). Color ids index
/// into `palette`, which holds the external label of each color (a field
/// element encoding or a relation index).
#[derive(Debug, Clone)]
pub struct ColoredGraph {
    n: usize,
    colors: Vec<u16>,
    palette: Vec<u32>,
    labels: Vec<String>,
}

impl ColoredGraph {
    pub fn new(n: usize, palette: Vec<u32>) -> Self {
        assert!(palette.len() < NO_COLOR as usize);
        ColoredGraph { n, colors: vec![NO_COLOR; n * n], palette, labels: Vec::new() }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = labels;
        self
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn palette(&self) -> &[u32] {
        &self.palette
    }

    pub fn set(&mut self, u: usize, v: usize, id: u16) {
        self.colors[u * self.n + v] = id;
        self.colors[v * self.n + u] = id;
    }

    pub fn color_id(&self, u: usize, v: usize) -> Option<u16> {
        let c = self.colors[u * self.n + v];
        (c != NO_COLOR).then_some(c)
    }

    /// Raw id, `NO_COLOR` if absent.
    pub fn raw(&self, u: usize, v: usize) -> u16 {
        self.colors[u * self.n + v]
    }

    pub fn color_label(&self, u: usize, v: usize) -> Option<u32> {
        self.color_id(u, v).map(|c| self.palette[c as usize])
    }

    pub fn id_of(&self, label: u32) -> Result<u16> {
        self.palette.iter().position(|&c| c == label).map(|i| i as u16).ok_or(Error::UnknownColor(label))
    }

    pub fn color_class(&self, label: u32) -> Result<Graph> {
        Ok(self.class_by_id(self.id_of(label)?))
    }

    pub fn class_by_id(&self, id: u16) -> Graph {
        let mut g = Graph::new(self.n);
        for u in 0..self.n {
            for v in u..self.n {
                if self.colors[u * self.n + v] == id {
                    g.add_edge(u, v);
                }
            }
        }
        if !self.labels.is_empty() {
            g = g.with_labels(self.labels.clone());
        }
        g
    }

    /// Number of colored unordered pairs, loops included.
    pub fn colored_pairs(&self) -> usize {
        (0..self.n)
            .map(|u| (u..self.n).filter(|&v| self.colors[u * self.n + v] != NO_COLOR).count())
            .sum()
    }

    /// Same pairs, keeping only the listed colors.
    pub fn restrict(&self, keep: &[u32]) -> Result<ColoredGraph> {
        let ids: Vec<u16> = keep.iter().map(|&l| self.id_of(l)).collect::<Result<_>>()?;
        let mut remap = vec![NO_COLOR; self.palette.len()];
        for (new, &old) in ids.iter().enumerate() {
            remap[old as usize] = new as u16;
        }
        let colors = self
            .colors
            .iter()
            .map(|&c| if c == NO_COLOR { NO_COLOR } else { remap[c as usize] })
            .collect();
        Ok(ColoredGraph { n: self.n, colors, palette: keep.to_vec(), labels: self.labels.clone() })
    }
}

/// Outcome of an exact `A^2 = cJ J + cI I - cE E` test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub holds: bool,
    /// First failing entry as `(u, v, lhs, rhs)`.
    pub first_violation: Option<(usize, usize, i64, i64)>,
}

pub fn check_square_identity(g: &Graph, c_j: i64, c_i: i64, e: &Graph) -> Result<IdentityCheck> {
    check_square_identity_weighted(g, c_j, c_i, 1, e)
}

/// Integer-exact test of `A^2 = c_j J + c_i I - c_e E`.
pub fn check_square_identity_weighted(g: &Graph, c_j: i64, c_i: i64, c_e: i64, e: &Graph) -> Result<IdentityCheck> {
    if e.n() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: e.n() });
    }
    for u in 0..g.n() {
        for v in 0..g.n() {
            let lhs = g.common_neighbors(u, v) as i64;
            let rhs = c_j + if u == v { c_i } else { 0 } - if e.has_edge(u, v) { c_e } else { 0 };
            if lhs != rhs {
                return Ok(IdentityCheck { holds: false, first_violation: Some((u, v, lhs, rhs)) });
            }
        }
    }
    Ok(IdentityCheck { holds: true, first_violation: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn loops_count_once() {
        let g = Graph::from_edges(3, [(0, 0), (0, 1), (1, 2)]);
        assert_eq!(g.degrees(), vec![2, 2, 1]);
        assert_eq!(g.loop_count(), 1);
        assert_eq!(g.edge_total(), 3);
        assert_eq!(g.edges(), vec![(0, 0), (0, 1), (1, 2)]);
        assert!(g.is_symmetric());
        assert_eq!(g.without_loops().degrees(), vec![1, 2, 1]);
    }

    #[test]
    fn vertex_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = VertexSet::random(200, 50, &mut rng);
        assert_eq!(s.len(), 50);
        assert!(s.is_subset(&VertexSet::full(200)));
        let v = s.to_vec();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert!(VertexSet::empty(5).is_empty());
    }

    #[test]
    fn zero_graph_identity() {
        let g = Graph::new(4);
        assert!(check_square_identity(&g, 0, 0, &Graph::new(4)).unwrap().holds);
        assert!(check_square_identity(&g, 0, 0, &Graph::new(3)).is_err());
        // K4: A^2 = 2J + I
        let k4 = Graph::complete(4);
        assert!(check_square_identity(&k4, 2, 1, &Graph::new(4)).unwrap().holds);
        assert!(check_square_identity_weighted(&k4, 3, 0, 1, &k4).unwrap().holds);
        let bad = check_square_identity(&k4, 1, 1, &Graph::new(4)).unwrap();
        assert_eq!(bad.first_violation, Some((0, 0, 3, 2)));
    }

    #[test]
    fn colored_classes_partition() {
        let mut cg = ColoredGraph::new(4, vec![1, 2]);
        cg.set(0, 1, 0);
        cg.set(1, 2, 1);
        cg.set(3, 3, 1);
        let a = cg.color_class(1).unwrap();
        let b = cg.color_class(2).unwrap();
        assert_eq!(a.edge_total() + b.edge_total(), cg.colored_pairs());
        assert!(matches!(cg.color_class(5), Err(Error::UnknownColor(5))));
        let r = cg.restrict(&[2]).unwrap();
        assert_eq!(r.colored_pairs(), 2);
        assert_eq!(r.color_label(3, 3), Some(2));
    }
}
