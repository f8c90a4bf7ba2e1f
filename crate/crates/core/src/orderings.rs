//! Vertex labelings, monotone paths and half-bipartite graphs.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hypergraph::{Graph, Vertex};

/// A bijection `σ` from `0..n` onto `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labeling {
    perm: Vec<usize>,
}

impl Labeling {
    pub fn from_values(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n + 1];
        for &x in &perm {
            if x == 0 || x > n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::NotALabeling(format!("{perm:?} is not a bijection onto 1..={n}")));
            }
        }
        Ok(Labeling { perm })
    }

    pub fn identity(n: usize) -> Self {
        Labeling {
            perm: (1..=n).collect(),
        }
    }

    /// `order[i]` receives label `i + 1`.
    pub fn from_order(order: &[Vertex]) -> Result<Self> {
        let n = order.len();
        let mut perm = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || perm[v] != 0 {
                return Err(Error::NotALabeling(format!("{order:?} is not an ordering of 0..{n}")));
            }
            perm[v] = i + 1;
        }
        Ok(Labeling { perm })
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn label(&self, v: Vertex) -> usize {
        self.perm[v]
    }

    pub fn values(&self) -> &[usize] {
        &self.perm
    }

    /// Vertices in increasing label order.
    pub fn order(&self) -> Vec<Vertex> {
        let mut out = vec![0; self.perm.len()];
        for (v, &l) in self.perm.iter().enumerate() {
            out[l - 1] = v;
        }
        out
    }

    pub fn reversed(&self) -> Labeling {
        let n = self.perm.len();
        Labeling {
            perm: self.perm.iter().map(|&l| n + 1 - l).collect(),
        }
    }
}

/// A labeling of a finite vertex subset `S`, i.e. a bijection onto `1..=|S|`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubsetLabeling {
    labels: BTreeMap<Vertex, usize>,
}

impl SubsetLabeling {
    pub fn new(labels: BTreeMap<Vertex, usize>) -> Result<Self> {
        let n = labels.len();
        let mut seen = vec![false; n + 1];
        for &l in labels.values() {
            if l == 0 || l > n || std::mem::replace(&mut seen[l], true) {
                return Err(Error::NotALabeling(format!("labels are not a bijection onto 1..={n}")));
            }
        }
        Ok(SubsetLabeling { labels })
    }

    pub fn from_order(order: &[Vertex]) -> Result<Self> {
        let mut labels = BTreeMap::new();
        for (i, &v) in order.iter().enumerate() {
            if labels.insert(v, i + 1).is_some() {
                return Err(Error::Overlap(v));
            }
        }
        Ok(SubsetLabeling { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, v: Vertex) -> Option<usize> {
        self.labels.get(&v).copied()
    }

    pub fn domain(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.labels.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, usize)> + '_ {
        self.labels.iter().map(|(v, l)| (*v, *l))
    }

    pub fn order(&self) -> Vec<Vertex> {
        let mut out = vec![0; self.labels.len()];
        for (&v, &l) in &self.labels {
            out[l - 1] = v;
        }
        out
    }

    /// Converts to a full [`Labeling`] when the domain is exactly `0..n`.
    pub fn to_labeling(&self, n: usize) -> Result<Labeling> {
        if self.labels.len() != n || self.labels.keys().enumerate().any(|(i, &v)| i != v) {
            return Err(Error::NotALabeling(format!("domain is not 0..{n}")));
        }
        Labeling::from_values(self.labels.values().copied().collect())
    }
}

impl From<&Labeling> for SubsetLabeling {
    fn from(sigma: &Labeling) -> Self {
        SubsetLabeling {
            labels: sigma.values().iter().enumerate().map(|(v, &l)| (v, l)).collect(),
        }
    }
}

/// `σ₁ ⊕ σ₂ ⊕ ...`: later parts are shifted past all earlier ones.
pub fn combine_labelings(parts: &[SubsetLabeling]) -> Result<SubsetLabeling> {
    let mut labels = BTreeMap::new();
    let mut offset = 0;
    for part in parts {
        for (v, l) in part.iter() {
            if labels.insert(v, l + offset).is_some() {
                return Err(Error::Overlap(v));
            }
        }
        offset += part.len();
    }
    Ok(SubsetLabeling { labels })
}

/// The unique labeling of the given vertices that is order-isomorphic to
/// the integer values.
pub fn induce_labeling(values: &[(Vertex, i64)]) -> Result<SubsetLabeling> {
    let mut sorted: Vec<(i64, Vertex)> = values.iter().map(|&(v, x)| (x, v)).collect();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::NotInjective(w[0].0));
        }
    }
    let mut labels = BTreeMap::new();
    for (i, &(_, v)) in sorted.iter().enumerate() {
        if labels.insert(v, i + 1).is_some() {
            return Err(Error::Overlap(v));
        }
    }
    Ok(SubsetLabeling { labels })
}

/// Lexicographically least (by labels) path `u - v - w` with
/// `key[u] < key[v] < key[w]`, for any injective `key` on the endpoints.
pub fn monotone_p3_by_key(g: &Graph, key: &[usize]) -> Option<(Vertex, Vertex, Vertex)> {
    let mut best: Option<((usize, usize, usize), (Vertex, Vertex, Vertex))> = None;
    for v in 0..g.n() {
        let kv = key[v];
        let mut lower: Option<Vertex> = None;
        let mut upper: Option<Vertex> = None;
        for &w in g.neighbors(v) {
            let kw = key[w];
            if kw < kv {
                if lower.is_none_or(|x| kw < key[x]) {
                    lower = Some(w);
                }
            } else if kw > kv && upper.is_none_or(|x| kw < key[x]) {
                upper = Some(w);
            }
        }
        if let (Some(a), Some(c)) = (lower, upper) {
            let k = (key[a], kv, key[c]);
            if best.is_none_or(|(bk, _)| k < bk) {
                best = Some((k, (a, v, c)));
            }
        }
    }
    best.map(|(_, path)| path)
}

/// A monotone P3 of `g` under `σ`, oriented so labels increase.
pub fn has_monotone_p3(g: &Graph, sigma: &Labeling) -> Option<(Vertex, Vertex, Vertex)> {
    monotone_p3_by_key(g, sigma.values())
}

pub fn is_half_bipartite(g: &Graph, sigma: &Labeling) -> bool {
    has_monotone_p3(g, sigma).is_none()
}

/// `B_k` on `u1 v1 u2 v2 ... uk vk` (indices `0..2k` in that order) with
/// edges `u_i v_j` for `i <= j`, labeled by index order.
pub fn complete_half_bipartite(k: usize) -> (Graph, Labeling) {
    let mut pairs = Vec::with_capacity(k * (k + 1) / 2);
    for i in 0..k {
        for j in i..k {
            pairs.push((2 * i, 2 * j + 1));
        }
    }
    (Graph::from_pairs_unchecked(2 * k, pairs), Labeling::identity(2 * k))
}

/// Order-preserving embedding of a half-bipartite `(G, σ)` on `k` vertices
/// into `B_k`. Returns, for every vertex of `G`, its image in `B_k`
/// (indexed as in [`complete_half_bipartite`]).
///
/// The `i`-th vertex in `σ`-order goes to `u_i` if it has a later neighbor
/// and to `v_i` otherwise.
pub fn embed_into_complete_half_bipartite(g: &Graph, sigma: &Labeling) -> Result<Vec<Vertex>> {
    if sigma.n() != g.n() {
        return Err(Error::NotALabeling(format!(
            "labeling has {} vertices, graph has {}",
            sigma.n(),
            g.n()
        )));
    }
    if let Some(p) = has_monotone_p3(g, sigma) {
        return Err(Error::NotHalfBipartite(p));
    }
    let k = g.n();
    let image: Vec<Vertex> = (0..k)
        .map(|w| {
            let i = sigma.label(w) - 1;
            let forward = g.neighbors(w).iter().any(|&x| sigma.label(x) > sigma.label(w));
            if forward {
                2 * i
            } else {
                2 * i + 1
            }
        })
        .collect();

    let (b, _) = complete_half_bipartite(k);
    for &(x, y) in g.edges() {
        assert!(b.has_edge(image[x], image[y]), "edge {x}{y} not preserved");
    }
    for x in 0..k {
        for y in 0..k {
            if sigma.label(x) < sigma.label(y) {
                assert!(image[x] < image[y], "order not preserved at {x},{y}");
            }
        }
    }
    Ok(image)
}
