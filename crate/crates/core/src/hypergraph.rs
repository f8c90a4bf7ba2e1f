//! Value types for 3-graphs and graphs, plus the structural operations the
//! rest of the crate is built on: shadows, link graphs, codegrees, blow-ups,
//! tensor products, induced subgraphs and isomorphism.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type Edge = [Vertex; 3];

/// Size guards for operations whose output grows multiplicatively.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub vertices: u128,
    pub edges: u128,
}

impl Caps {
    pub const DEFAULT: Caps = Caps {
        vertices: 1_000_000,
        edges: 1_000_000,
    };
    pub const UNLIMITED: Caps = Caps {
        vertices: u128::MAX,
        edges: u128::MAX,
    };

    fn check_vertices(&self, what: &'static str, requested: u128) -> Result<()> {
        if requested > self.vertices {
            return Err(Error::TooLarge {
                what,
                requested,
                cap: self.vertices,
            });
        }
        Ok(())
    }

    fn check_edges(&self, what: &'static str, requested: u128) -> Result<()> {
        if requested > self.edges {
            return Err(Error::TooLarge {
                what,
                requested,
                cap: self.edges,
            });
        }
        Ok(())
    }
}

impl Default for Caps {
    fn default() -> Self {
        Caps::DEFAULT
    }
}

#[inline]
pub(crate) fn sort3(mut e: Edge) -> Edge {
    if e[0] > e[1] {
        e.swap(0, 1);
    }
    if e[1] > e[2] {
        e.swap(1, 2);
    }
    if e[0] > e[1] {
        e.swap(0, 1);
    }
    e
}

#[inline]
pub(crate) fn pair(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Default)]
struct Index {
    coneighbors: HashMap<(Vertex, Vertex), Vec<Vertex>>,
    incident: Vec<Vec<usize>>,
    edge_set: HashSet<Edge>,
}

/// A finite 3-uniform hypergraph on vertices `0..n`.
///
/// Edges are kept as sorted triples in sorted order. Names are optional and
/// only matter for presentation and file I/O.
pub struct ThreeGraph {
    n: usize,
    names: Option<Vec<String>>,
    edges: Vec<Edge>,
    index: OnceLock<Index>,
}

impl Clone for ThreeGraph {
    fn clone(&self) -> Self {
        ThreeGraph {
            n: self.n,
            names: self.names.clone(),
            edges: self.edges.clone(),
            index: OnceLock::new(),
        }
    }
}

impl PartialEq for ThreeGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.names == other.names && self.edges == other.edges
    }
}

impl Eq for ThreeGraph {}

impl fmt::Debug for ThreeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges
            .iter()
            .map(|e| format!("{}{}{}", self.name(e[0]), self.name(e[1]), self.name(e[2])))
            .collect();
        f.debug_struct("ThreeGraph")
            .field("n", &self.n)
            .field("edges", &edges)
            .finish()
    }
}

impl ThreeGraph {
    /// Validates and canonicalizes an edge list.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for e in edges {
            for &x in &e {
                if x >= n {
                    return Err(Error::OutOfRange { index: x, n });
                }
            }
            let s = sort3(e);
            if s[0] == s[1] || s[1] == s[2] {
                return Err(Error::RepeatedVertexInEdge(e));
            }
            if !seen.insert(s) {
                return Err(Error::DuplicateEdge(s));
            }
            out.push(s);
        }
        out.sort_unstable();
        Ok(ThreeGraph {
            n,
            names: None,
            edges: out,
            index: OnceLock::new(),
        })
    }

    pub fn empty(n: usize) -> Self {
        ThreeGraph {
            n,
            names: None,
            edges: Vec::new(),
            index: OnceLock::new(),
        }
    }

    /// Builds a graph from vertex names and edges spelled with those names.
    pub fn from_named(names: &[&str], edges: &[[&str; 3]]) -> Result<Self> {
        let lookup: HashMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut es = Vec::with_capacity(edges.len());
        for e in edges {
            let mut t = [0; 3];
            for (slot, name) in t.iter_mut().zip(e) {
                *slot = *lookup
                    .get(name)
                    .ok_or_else(|| Error::UnknownName(name.to_string()))?;
            }
            es.push(t);
        }
        ThreeGraph::new(names.len(), es)?.with_names(names.iter().map(|s| s.to_string()).collect())
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n {
            return Err(Error::NameCount {
                expected: self.n,
                got: names.len(),
            });
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn without_names(mut self) -> Self {
        self.names = None;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Display name of `v`: its stored name, or the index.
    pub fn name(&self, v: Vertex) -> String {
        match &self.names {
            Some(ns) => ns[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn index_of(&self, name: &str) -> Option<Vertex> {
        match &self.names {
            Some(ns) => ns.iter().position(|s| s == name),
            None => name.parse::<usize>().ok().filter(|&i| i < self.n),
        }
    }

    fn index(&self) -> &Index {
        self.index.get_or_init(|| {
            let mut idx = Index {
                incident: vec![Vec::new(); self.n],
                ..Index::default()
            };
            for (i, e) in self.edges.iter().enumerate() {
                let [a, b, c] = *e;
                idx.coneighbors.entry((a, b)).or_default().push(c);
                idx.coneighbors.entry((a, c)).or_default().push(b);
                idx.coneighbors.entry((b, c)).or_default().push(a);
                for &x in e {
                    idx.incident[x].push(i);
                }
                idx.edge_set.insert(*e);
            }
            for list in idx.coneighbors.values_mut() {
                list.sort_unstable();
            }
            idx
        })
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex, c: Vertex) -> bool {
        self.index().edge_set.contains(&sort3([a, b, c]))
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.index().incident[v].len()
    }

    /// Edges containing `v`, by position in [`ThreeGraph::edges`].
    pub fn incident_edges(&self, v: Vertex) -> &[usize] {
        &self.index().incident[v]
    }

    /// The coneighbor set `N(uv)`, sorted.
    pub fn coneighbors(&self, u: Vertex, v: Vertex) -> &[Vertex] {
        self.index()
            .coneighbors
            .get(&pair(u, v))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn codegree(&self, u: Vertex, v: Vertex) -> usize {
        self.coneighbors(u, v).len()
    }

    pub fn shadow(&self) -> Graph {
        let pairs: Vec<(Vertex, Vertex)> = self.index().coneighbors.keys().copied().collect();
        Graph::from_pairs_unchecked(self.n, pairs)
    }

    /// Link graph of `u`, kept on the full index space with `u` isolated.
    pub fn link_graph(&self, u: Vertex) -> Result<Graph> {
        if u >= self.n {
            return Err(Error::OutOfRange { index: u, n: self.n });
        }
        let pairs = self
            .incident_edges(u)
            .iter()
            .map(|&i| {
                let e = self.edges[i];
                let rest: Vec<Vertex> = e.iter().copied().filter(|&x| x != u).collect();
                (rest[0], rest[1])
            })
            .collect();
        Ok(Graph::from_pairs_unchecked(self.n, pairs))
    }

    /// Minimum codegree over all pairs, and the coneighbor map.
    ///
    /// The map lists only pairs with a nonempty coneighbor set; every other
    /// pair has codegree zero.
    pub fn codegree_stats(&self) -> CodegreeStats {
        let idx = self.index();
        let coneighbors: BTreeMap<(Vertex, Vertex), Vec<Vertex>> = idx
            .coneighbors
            .iter()
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        let all_pairs = self.n * self.n.saturating_sub(1) / 2;
        let min_codegree = if all_pairs == 0 || coneighbors.len() < all_pairs {
            0
        } else {
            coneighbors.values().map(Vec::len).min().unwrap_or(0)
        };
        CodegreeStats {
            min_codegree,
            coneighbors,
        }
    }

    pub fn min_codegree(&self) -> usize {
        let idx = self.index();
        let all_pairs = self.n * self.n.saturating_sub(1) / 2;
        if all_pairs == 0 || idx.coneighbors.len() < all_pairs {
            0
        } else {
            idx.coneighbors.values().map(Vec::len).min().unwrap_or(0)
        }
    }

    /// Replaces each vertex `v` by an independent set of `sizes[v]` copies.
    pub fn blowup(&self, sizes: &[usize]) -> Result<ThreeGraph> {
        self.blowup_capped(sizes, Caps::DEFAULT)
    }

    pub fn blowup_capped(&self, sizes: &[usize], caps: Caps) -> Result<ThreeGraph> {
        if sizes.len() != self.n {
            return Err(Error::BadParams(format!(
                "expected {} blow-up sizes, got {}",
                self.n,
                sizes.len()
            )));
        }
        if sizes.contains(&0) {
            return Err(Error::BadParams("blow-up sizes must be at least 1".into()));
        }
        let total: u128 = sizes.iter().map(|&s| s as u128).sum();
        caps.check_vertices("blow-up vertex count", total)?;
        let edge_total: u128 = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&v| sizes[v] as u128).product::<u128>())
            .sum();
        caps.check_edges("blow-up edge count", edge_total)?;

        let mut offset = Vec::with_capacity(self.n);
        let mut acc = 0;
        for &s in sizes {
            offset.push(acc);
            acc += s;
        }
        let mut edges = Vec::with_capacity(edge_total as usize);
        for e in &self.edges {
            for i in 0..sizes[e[0]] {
                for j in 0..sizes[e[1]] {
                    for k in 0..sizes[e[2]] {
                        edges.push([offset[e[0]] + i, offset[e[1]] + j, offset[e[2]] + k]);
                    }
                }
            }
        }
        let g = ThreeGraph::new(acc, edges)?;
        match &self.names {
            Some(ns) => {
                let mut names = Vec::with_capacity(acc);
                for (v, &s) in sizes.iter().enumerate() {
                    if s == 1 {
                        names.push(ns[v].clone());
                    } else {
                        names.extend((1..=s).map(|i| format!("{}.{}", ns[v], i)));
                    }
                }
                g.with_names(names)
            }
            None => Ok(g),
        }
    }

    /// Induced subgraph on `keep`, reindexed in increasing original order.
    pub fn induced_sub(&self, keep: &[Vertex]) -> Result<ThreeGraph> {
        let mut map = vec![usize::MAX; self.n];
        let mut sorted: Vec<Vertex> = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for (i, &v) in sorted.iter().enumerate() {
            if v >= self.n {
                return Err(Error::OutOfRange { index: v, n: self.n });
            }
            map[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|&x| map[x] != usize::MAX))
            .map(|e| [map[e[0]], map[e[1]], map[e[2]]]);
        let g = ThreeGraph::new(sorted.len(), edges)?;
        match &self.names {
            Some(ns) => g.with_names(sorted.iter().map(|&v| ns[v].clone()).collect()),
            None => Ok(g),
        }
    }

    pub fn delete_vertices(&self, remove: &[Vertex]) -> Result<ThreeGraph> {
        for &v in remove {
            if v >= self.n {
                return Err(Error::OutOfRange { index: v, n: self.n });
            }
        }
        let keep: Vec<Vertex> = (0..self.n).filter(|v| !remove.contains(v)).collect();
        self.induced_sub(&keep)
    }

    /// Applies a vertex permutation: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<ThreeGraph> {
        if perm.len() != self.n {
            return Err(Error::BadParams("permutation length mismatch".into()));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::BadParams("not a permutation".into()));
            }
        }
        let g = ThreeGraph::new(
            self.n,
            self.edges.iter().map(|e| [perm[e[0]], perm[e[1]], perm[e[2]]]),
        )?;
        match &self.names {
            Some(ns) => {
                let mut names = vec![String::new(); self.n];
                for (v, &p) in perm.iter().enumerate() {
                    names[p] = ns[v].clone();
                }
                g.with_names(names)
            }
            None => Ok(g),
        }
    }

    /// Same graph with one more edge; `None` if it is already present.
    pub fn with_edge(&self, e: Edge) -> Result<Option<ThreeGraph>> {
        if self.has_edge(e[0], e[1], e[2]) {
            return Ok(None);
        }
        let g = ThreeGraph::new(self.n, self.edges.iter().copied().chain(std::iter::once(e)))?;
        Ok(Some(match &self.names {
            Some(ns) => g.with_names(ns.clone())?,
            None => g,
        }))
    }
}

/// Minimum codegree together with the pair → coneighbor map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodegreeStats {
    pub min_codegree: usize,
    pub coneighbors: BTreeMap<(Vertex, Vertex), Vec<Vertex>>,
}

impl CodegreeStats {
    pub fn coneighbors_of(&self, u: Vertex, v: Vertex) -> &[Vertex] {
        self.coneighbors
            .get(&pair(u, v))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

/// Tensor product: a triple of product vertices is an edge iff every
/// coordinate projection is an edge of the corresponding factor.
///
/// Product vertex indices are mixed-radix with the first factor most
/// significant; see [`product_coordinates`].
pub fn tensor_product(factors: &[ThreeGraph]) -> Result<ThreeGraph> {
    tensor_product_capped(factors, Caps::DEFAULT)
}

pub fn tensor_product_capped(factors: &[ThreeGraph], caps: Caps) -> Result<ThreeGraph> {
    if factors.is_empty() {
        return Err(Error::BadParams("tensor product of an empty family".into()));
    }
    if factors.len() == 1 {
        return Ok(factors[0].clone());
    }
    let mut vertices: u128 = 1;
    for f in factors {
        vertices = vertices.saturating_mul(f.n() as u128);
    }
    caps.check_vertices("tensor product vertex count", vertices)?;
    let mut edge_total: u128 = factors[0].edge_count() as u128;
    for f in &factors[1..] {
        edge_total = edge_total.saturating_mul(6 * f.edge_count() as u128);
    }
    caps.check_edges("tensor product edge count", edge_total)?;

    let dims: Vec<usize> = factors.iter().map(ThreeGraph::n).collect();
    let n = vertices as usize;
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

    // Partial triples (x, y, z) as mixed-radix prefixes.
    let mut partial: Vec<[usize; 3]> = factors[0].edges().to_vec();
    for f in &factors[1..] {
        let d = f.n();
        let mut next = Vec::with_capacity(partial.len() * f.edge_count() * 6);
        for p in &partial {
            for e in f.edges() {
                for perm in &PERMS {
                    next.push([
                        p[0] * d + e[perm[0]],
                        p[1] * d + e[perm[1]],
                        p[2] * d + e[perm[2]],
                    ]);
                }
            }
        }
        partial = next;
    }
    let g = ThreeGraph::new(n, partial)?;
    let names = (0..n)
        .map(|v| {
            let coords = product_coordinates(v, &dims);
            let parts: Vec<String> = coords
                .iter()
                .zip(factors)
                .map(|(&c, f)| f.name(c))
                .collect();
            format!("({})", parts.join(","))
        })
        .collect();
    g.with_names(names)
}

/// Coordinates of product vertex `v` for factor sizes `dims`.
pub fn product_coordinates(mut v: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = v % d;
        v /= d;
    }
    out
}

/// Default bound on vertex count for [`is_isomorphic`].
pub const ISOMORPHISM_BOUND: usize = 10;

/// Isomorphism test; returns a witness `perm` with `perm[v]` the image of
/// `v`, mapping `E(a)` onto `E(b)`.
pub fn is_isomorphic(a: &ThreeGraph, b: &ThreeGraph) -> Result<Option<Vec<Vertex>>> {
    isomorphism_bounded(a, b, Some(ISOMORPHISM_BOUND))
}

pub fn isomorphism_bounded(
    a: &ThreeGraph,
    b: &ThreeGraph,
    bound: Option<usize>,
) -> Result<Option<Vec<Vertex>>> {
    if let Some(bound) = bound {
        if a.n() > bound || b.n() > bound {
            return Err(Error::SearchBudgetExceeded {
                n: a.n().max(b.n()),
                bound,
            });
        }
    }
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return Ok(None);
    }
    let n = a.n();
    let inv_a: Vec<(usize, Vec<usize>)> = (0..n).map(|v| vertex_invariant(a, v)).collect();
    let inv_b: Vec<(usize, Vec<usize>)> = (0..n).map(|v| vertex_invariant(b, v)).collect();
    let mut ms_a = inv_a.clone();
    let mut ms_b = inv_b.clone();
    ms_a.sort();
    ms_b.sort();
    if ms_a != ms_b {
        return Ok(None);
    }
    // Rarest invariant classes first.
    let mut order: Vec<Vertex> = (0..n).collect();
    order.sort_by_key(|&v| (inv_a.iter().filter(|x| **x == inv_a[v]).count(), std::cmp::Reverse(a.degree(v)), v));

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if iso_extend(a, b, &inv_a, &inv_b, &order, 0, &mut map, &mut used) {
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

fn vertex_invariant(g: &ThreeGraph, v: Vertex) -> (usize, Vec<usize>) {
    let mut codegs: Vec<usize> = (0..g.n()).filter(|&u| u != v).map(|u| g.codegree(u, v)).collect();
    codegs.sort_unstable();
    (g.degree(v), codegs)
}

#[allow(clippy::too_many_arguments)]
fn iso_extend(
    a: &ThreeGraph,
    b: &ThreeGraph,
    inv_a: &[(usize, Vec<usize>)],
    inv_b: &[(usize, Vec<usize>)],
    order: &[Vertex],
    depth: usize,
    map: &mut [Vertex],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let x = order[depth];
    for y in 0..b.n() {
        if used[y] || inv_a[x] != inv_b[y] {
            continue;
        }
        let placed = &order[..depth];
        let ok = placed
            .iter()
            .all(|&p| a.codegree(p, x) == b.codegree(map[p], y))
            && placed.iter().enumerate().all(|(i, &p)| {
                placed[i + 1..]
                    .iter()
                    .all(|&q| a.has_edge(p, q, x) == b.has_edge(map[p], map[q], y))
            });
        if !ok {
            continue;
        }
        map[x] = y;
        used[y] = true;
        if iso_extend(a, b, inv_a, inv_b, order, depth + 1, map, used) {
            return true;
        }
        used[y] = false;
        map[x] = usize::MAX;
    }
    false
}

/// A simple graph on `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    pub fn new<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut seen = HashSet::new();
        let mut edges = Vec::new();
        for (u, v) in pairs {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::OutOfRange { index: x, n });
                }
            }
            if u == v {
                return Err(Error::BadParams(format!("loop at vertex {u}")));
            }
            let p = pair(u, v);
            if !seen.insert(p) {
                return Err(Error::BadParams(format!("duplicate pair {p:?}")));
            }
            edges.push(p);
        }
        Ok(Self::from_pairs_unchecked(n, edges))
    }

    pub fn empty(n: usize) -> Self {
        Self::from_pairs_unchecked(n, Vec::new())
    }

    pub(crate) fn from_pairs_unchecked(n: usize, pairs: Vec<(Vertex, Vertex)>) -> Self {
        let mut edges: Vec<(Vertex, Vertex)> = pairs.into_iter().map(|(u, v)| pair(u, v)).collect();
        edges.sort_unstable();
        edges.dedup();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_matching(&self) -> bool {
        self.adj.iter().all(|a| a.len() <= 1)
    }

    pub fn is_bipartite(&self) -> bool {
        let mut side = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if side[w] == u8::MAX {
                        side[w] = 1 - side[u];
                        stack.push(w);
                    } else if side[w] == side[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Induced subgraph on `keep`, keeping the original index space.
    pub fn restrict(&self, keep: &[bool]) -> Graph {
        let pairs = self
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| keep[u] && keep[v])
            .collect();
        Graph::from_pairs_unchecked(self.n, pairs)
    }
}

/// A family of part multisets of size three over `0..parts`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartPattern {
    parts: usize,
    labels: Vec<String>,
    triples: Vec<[usize; 3]>,
}

impl PartPattern {
    pub fn new<I>(parts: usize, triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = [usize; 3]>,
    {
        let mut out = Vec::new();
        for t in triples {
            for &x in &t {
                if x >= parts {
                    return Err(Error::OutOfRange { index: x, n: parts });
                }
            }
            let s = sort3(t);
            if out.contains(&s) {
                return Err(Error::DuplicateEdge(s));
            }
            out.push(s);
        }
        out.sort_unstable();
        let labels = (0..parts).map(part_label).collect();
        Ok(PartPattern {
            parts,
            labels,
            triples: out,
        })
    }

    /// Parses triples written as letter strings, e.g. `"AAB"`.
    pub fn from_letters(parts: usize, triples: &[&str]) -> Result<Self> {
        let mut ts = Vec::with_capacity(triples.len());
        for word in triples {
            let idx: Vec<usize> = word
                .chars()
                .map(|c| (c as usize).wrapping_sub('A' as usize))
                .collect();
            if idx.len() != 3 {
                return Err(Error::BadParams(format!("triple {word:?} is not three letters")));
            }
            ts.push([idx[0], idx[1], idx[2]]);
        }
        Self::new(parts, ts)
    }

    pub fn parts(&self) -> usize {
        self.parts
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    pub fn label(&self, part: usize) -> &str {
        &self.labels[part]
    }

    pub fn contains(&self, t: [usize; 3]) -> bool {
        self.triples.binary_search(&sort3(t)).is_ok()
    }

    /// For every unordered part pair (including `X = X`), how many triples
    /// contain it as a sub-multiset.
    pub fn pair_coverage(&self) -> BTreeMap<(usize, usize), usize> {
        let mut cov = BTreeMap::new();
        for x in 0..self.parts {
            for y in x..self.parts {
                cov.insert((x, y), 0);
            }
        }
        for t in &self.triples {
            let mut pairs = vec![(t[0], t[1]), (t[0], t[2]), (t[1], t[2])];
            pairs.sort_unstable();
            pairs.dedup();
            for p in pairs {
                *cov.get_mut(&p).expect("pair in range") += 1;
            }
        }
        cov
    }
}

fn part_label(i: usize) -> String {
    if i < 26 {
        ((b'A' + i as u8) as char).to_string()
    } else {
        format!("P{i}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    fn k4() -> ThreeGraph {
        ThreeGraph::new(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap()
    }

    #[test]
    fn build_rejects_bad_edges() {
        assert!(ThreeGraph::new(3, [[0, 1, 2]]).is_ok());
        assert_eq!(
            ThreeGraph::new(4, [[0, 1, 1]]),
            Err(Error::RepeatedVertexInEdge([0, 1, 1]))
        );
        assert_eq!(
            ThreeGraph::new(3, [[0, 1, 3]]),
            Err(Error::OutOfRange { index: 3, n: 3 })
        );
        assert_eq!(
            ThreeGraph::new(4, [[0, 1, 2], [2, 1, 0]]),
            Err(Error::DuplicateEdge([0, 1, 2]))
        );
    }

    #[test]
    fn tight_cycle_minus_one_edge() {
        let cycle = [[0, 1, 2], [1, 2, 3], [2, 3, 4], [3, 4, 0], [4, 0, 1]];
        let g = ThreeGraph::new(5, cycle.iter().copied().filter(|e| *e != [3, 4, 0])).unwrap();
        assert_eq!(g.edge_count(), 4);
    }

    #[test]
    fn shadow_examples() {
        assert_eq!(k4().shadow().edge_count(), 6);
        assert_eq!(ThreeGraph::empty(4).shadow().edge_count(), 0);
        let e = ThreeGraph::new(4, [[0, 1, 2]]).unwrap();
        assert_eq!(e.shadow().edges(), &[(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn link_examples() {
        for u in 0..4 {
            let l = k4().link_graph(u).unwrap();
            assert_eq!(l.edge_count(), 3);
            assert_eq!(l.degree(u), 0);
        }
        let e = ThreeGraph::new(4, [[0, 1, 2]]).unwrap();
        assert_eq!(e.link_graph(0).unwrap().edges(), &[(1, 2)]);
        assert!(matches!(e.link_graph(9), Err(Error::OutOfRange { .. })));

        let f2 = named::f2();
        let h = f2.index_of("h").unwrap();
        let link = f2.link_graph(h).unwrap();
        let mut got: Vec<String> = link
            .edges()
            .iter()
            .map(|&(a, b)| {
                let mut s = [f2.name(a), f2.name(b)];
                s.sort();
                s.concat()
            })
            .collect();
        got.sort();
        assert_eq!(got, vec!["el", "fg", "ij", "ik"]);
    }

    #[test]
    fn codegree_examples() {
        assert_eq!(k4().codegree_stats().min_codegree, 2);
        let k4m = ThreeGraph::new(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3]]).unwrap();
        // pairs: 01 -> {2,3}, 02 -> {1,3}, 03 -> {1,2}, 12 -> {0}, 13 -> {0}, 23 -> {0}
        let stats = k4m.codegree_stats();
        assert_eq!(stats.min_codegree, 1);
        assert_eq!(stats.coneighbors_of(2, 1), &[0]);
        assert_eq!(ThreeGraph::empty(4).codegree_stats().min_codegree, 0);
    }

    #[test]
    fn blowup_examples() {
        let g = named::c_minus(5).unwrap();
        assert_eq!(g.blowup(&[1; 5]).unwrap(), g);
        let e = ThreeGraph::new(3, [[0, 1, 2]]).unwrap();
        assert_eq!(e.blowup(&[2, 1, 1]).unwrap().edge_count(), 2);
        assert!(matches!(
            k4().blowup(&[200, 200, 200, 200]),
            Err(Error::TooLarge { .. })
        ));
        let tight = Caps {
            vertices: 1000,
            edges: 30_000,
        };
        assert!(k4().blowup_capped(&[20, 20, 20, 20], tight).is_err());
        let b = k4().blowup_capped(&[20, 20, 20, 20], Caps::UNLIMITED).unwrap();
        assert_eq!(b.edge_count(), 4 * 8000);
    }

    #[test]
    fn tensor_examples() {
        let c5 = named::c_minus(5).unwrap();
        assert_eq!(tensor_product(&[c5.clone()]).unwrap(), c5);
        let p = tensor_product(&[k4(), k4()]).unwrap();
        assert_eq!(p.n(), 16);
        assert_eq!(p.edge_count(), 4 * 4 * 6);
        let dims = [4, 4];
        for u in 0..16 {
            for v in u + 1..16 {
                let (cu, cv) = (product_coordinates(u, &dims), product_coordinates(v, &dims));
                let disjoint = cu.iter().zip(&cv).all(|(a, b)| a != b);
                assert_eq!(p.codegree(u, v) >= 2, disjoint, "pair {u} {v}");
            }
        }
        for e in p.edges() {
            let cs: Vec<Vec<usize>> = e.iter().map(|&v| product_coordinates(v, &dims)).collect();
            for i in 0..2 {
                assert!(k4().has_edge(cs[0][i], cs[1][i], cs[2][i]));
            }
        }
        assert!(tensor_product(&[]).is_err());
    }

    #[test]
    fn induced_examples() {
        let g = k4();
        assert_eq!(g.induced_sub(&[0, 1, 2, 3]).unwrap(), g);
        assert_eq!(g.induced_sub(&[0, 2, 3]).unwrap().edge_count(), 1);
        assert!(g.induced_sub(&[7]).is_err());

        let f = named::f_union();
        let drop: Vec<usize> = ["f", "g", "h", "i", "j", "k", "l"]
            .iter()
            .map(|s| f.index_of(s).unwrap())
            .collect();
        assert_eq!(f.delete_vertices(&drop).unwrap(), named::f1());
    }

    #[test]
    fn isomorphism_examples() {
        let c5 = named::c_minus(5).unwrap();
        let id = is_isomorphic(&c5, &c5).unwrap().unwrap();
        assert_eq!(id.len(), 5);
        let k4m = ThreeGraph::new(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3]]).unwrap();
        assert_eq!(is_isomorphic(&k4(), &k4m).unwrap(), None);

        let perm = [3, 0, 4, 1, 2];
        let moved = c5.relabel(&perm).unwrap().without_names();
        let w = is_isomorphic(&c5, &moved).unwrap().unwrap();
        for e in c5.edges() {
            assert!(moved.has_edge(w[e[0]], w[e[1]], w[e[2]]));
        }
        let big = ThreeGraph::empty(11);
        assert!(matches!(
            is_isomorphic(&big, &big),
            Err(Error::SearchBudgetExceeded { .. })
        ));
        assert!(isomorphism_bounded(&big, &big, None).unwrap().is_some());
    }

    #[test]
    fn pattern_coverage_counts() {
        let p = PartPattern::from_letters(3, &["AAB", "ABC"]).unwrap();
        let cov = p.pair_coverage();
        assert_eq!(cov[&(0, 0)], 1);
        assert_eq!(cov[&(0, 1)], 2);
        assert_eq!(cov[&(2, 2)], 0);
        assert!(p.contains([1, 0, 0]));
    }

    #[test]
    fn bipartite_check() {
        let c5 = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert!(!c5.is_bipartite());
        let p = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(p.is_bipartite());
        assert!(Graph::new(2, [(0, 0)]).is_err());
    }
}
