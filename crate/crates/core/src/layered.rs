//! Layered functions, the semi-layered reduction, reduced graphs, S-unions
//! and linearization.
//!
//! A function `f: V → ℕ` is *layered* for a 3-graph when
//!
//! * (A1) every edge has a unique vertex of largest label,
//! * (A2) edges with the same largest label carry the same label multiset,
//! * (A3) two edges agreeing in two labels agree in the third.
//!
//! (A3) fails exactly when two label multisets meet in exactly two elements.
//! A function satisfying (A1) and (A2) only is *semi-layered*.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::hypergraph::{Caps, Edge, ThreeGraph, Vertex};
use crate::sat::{Lit, SatResult, Solver};
use crate::search::{Problem, SearchOutcome, SearchStats, DEFAULT_BUDGET};

/// A layer function in canonical form: values are compressed to `1..=k`
/// preserving their order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LayerFunction {
    values: Vec<usize>,
}

impl LayerFunction {
    /// Canonicalizes arbitrary values; only their relative order matters.
    pub fn new<T: Ord + Copy>(values: &[T]) -> Self {
        let distinct: BTreeSet<T> = values.iter().copied().collect();
        let rank: BTreeMap<T, usize> = distinct.into_iter().zip(1..).collect();
        LayerFunction {
            values: values.iter().map(|v| rank[v]).collect(),
        }
    }

    pub fn constant(n: usize) -> Self {
        LayerFunction { values: vec![1; n] }
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn value(&self, v: Vertex) -> usize {
        self.values[v]
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Number of layers, the size of the range.
    pub fn layer_count(&self) -> usize {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// Vertices of each layer, lowest layer first.
    pub fn layers(&self) -> Vec<Vec<Vertex>> {
        let mut layers = vec![Vec::new(); self.layer_count()];
        for (v, &l) in self.values.iter().enumerate() {
            layers[l - 1].push(v);
        }
        layers
    }

    fn edge_labels(&self, e: &Edge) -> [usize; 3] {
        let mut t = [self.values[e[0]], self.values[e[1]], self.values[e[2]]];
        t.sort_unstable();
        t
    }
}

/// Size of the multiset intersection of two sorted triples.
fn common(a: [usize; 3], b: [usize; 3]) -> usize {
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < 3 && j < 3 {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                k += 1;
                i += 1;
                j += 1;
            }
        }
    }
    k
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LayerReport {
    /// Edges without a unique maximum.
    pub a1_violations: Vec<Edge>,
    /// Edge pairs sharing a maximum but not a label multiset.
    pub a2_violations: Vec<(Edge, Edge)>,
    /// Edge pairs whose label multisets share exactly two elements.
    pub a3_violations: Vec<(Edge, Edge)>,
}

impl LayerReport {
    pub fn is_layered(&self) -> bool {
        self.is_semi_layered() && self.a3_violations.is_empty()
    }

    pub fn is_semi_layered(&self) -> bool {
        self.a1_violations.is_empty() && self.a2_violations.is_empty()
    }
}

fn check_covers(f: &ThreeGraph, lf: &LayerFunction) -> Result<()> {
    if lf.n() != f.n() {
        return Err(Error::ShapeMismatch(format!(
            "layer function covers {} vertices, graph has {}",
            lf.n(),
            f.n()
        )));
    }
    Ok(())
}

pub fn validate_layer_function(f: &ThreeGraph, lf: &LayerFunction) -> Result<LayerReport> {
    check_covers(f, lf)?;
    let labels: Vec<[usize; 3]> = f.edges().iter().map(|e| lf.edge_labels(e)).collect();
    let mut report = LayerReport::default();
    for (i, e) in f.edges().iter().enumerate() {
        let a = labels[i];
        if a[1] == a[2] {
            report.a1_violations.push(*e);
        }
        for (j, e2) in f.edges().iter().enumerate().skip(i + 1) {
            let b = labels[j];
            if a[2] == b[2] && a != b {
                report.a2_violations.push((*e, *e2));
            }
            if common(a, b) == 2 {
                report.a3_violations.push((*e, *e2));
            }
        }
    }
    Ok(report)
}

/// Limits for [`find_layered_function_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayeredLimits {
    pub max_vertices: usize,
    pub budget: u64,
}

impl Default for LayeredLimits {
    fn default() -> Self {
        LayeredLimits {
            max_vertices: 14,
            budget: DEFAULT_BUDGET,
        }
    }
}

const UNPLACED: u8 = u8::MAX;

#[derive(Clone)]
struct WeakOrder {
    rank: Vec<u8>,
    layers: u8,
    placed: usize,
}

/// Where a new vertex goes: into an existing layer or a new one below the
/// layer of that rank (`layers` meaning on top).
#[derive(Clone, Copy)]
enum Slot {
    Join(u8),
    Open(u8),
}

impl Slot {
    /// Position on a doubled scale where placed rank `r` sits at `2r + 1`.
    fn doubled(self) -> usize {
        match self {
            Slot::Join(r) => 2 * r as usize + 1,
            Slot::Open(g) => 2 * g as usize,
        }
    }
}

/// Enumerates semi-layered functions as weak orders built one vertex at a
/// time. A new vertex joins an
/// existing layer or opens a layer in one of the gaps; inserting layers never
/// changes the relative order of placed vertices, so each edge is checked
/// once, when its last vertex is placed.
///
/// The next vertex is the one with the fewest consistent slots among those
/// closing an edge, so dead ends surface as early as possible.
struct WeakOrderSearch<'a> {
    f: &'a ThreeGraph,
    candidates: Vec<Vertex>,
}

impl<'a> WeakOrderSearch<'a> {
    fn new(f: &'a ThreeGraph) -> Self {
        WeakOrderSearch {
            f,
            candidates: (0..f.n()).collect(),
        }
    }

    fn sorted(mut t: [usize; 3]) -> [usize; 3] {
        t.sort_unstable();
        t
    }

    fn closed_labels(&self, rank: &[u8]) -> Vec<[usize; 3]> {
        let lab = |y: Vertex| 2 * rank[y] as usize + 1;
        self.f
            .edges()
            .iter()
            .filter(|e| e.iter().all(|&y| rank[y] != UNPLACED))
            .map(|e| Self::sorted([lab(e[0]), lab(e[1]), lab(e[2])]))
            .collect()
    }

    /// Label triples of the edges `z` would close.
    fn closing(&self, rank: &[u8], z: Vertex, at: usize) -> Vec<[usize; 3]> {
        let lab = |y: Vertex| if y == z { at } else { 2 * rank[y] as usize + 1 };
        self.f
            .incident_edges(z)
            .iter()
            .map(|&ei| &self.f.edges()[ei])
            .filter(|e| e.iter().all(|&y| y == z || rank[y] != UNPLACED))
            .map(|e| Self::sorted([lab(e[0]), lab(e[1]), lab(e[2])]))
            .collect()
    }

    fn compatible(&self, a: [usize; 3], b: [usize; 3]) -> bool {
        !(a[2] == b[2] && a != b)
    }

    fn fits(&self, closed: &[[usize; 3]], fresh: &[[usize; 3]]) -> bool {
        fresh.iter().enumerate().all(|(i, &a)| {
            a[1] != a[2]
                && closed.iter().all(|&b| self.compatible(a, b))
                && fresh[..i].iter().all(|&b| self.compatible(a, b))
        })
    }

    fn slots(layers: u8) -> impl Iterator<Item = Slot> {
        (0..layers)
            .map(Slot::Join)
            .chain((0..=layers).rev().map(Slot::Open))
    }

    /// The next vertex and its consistent slots.
    fn branch(&self, s: &WeakOrder) -> (Vertex, Vec<Slot>) {
        let closed = self.closed_labels(&s.rank);
        let mut best: Option<(Vertex, Vec<Slot>, (usize, usize))> = None;
        let mut fallback: Option<(Vertex, (usize, usize))> = None;
        for &z in &self.candidates {
            if s.rank[z] != UNPLACED {
                continue;
            }
            let mut closes = 0;
            let mut touches = 0;
            for &ei in self.f.incident_edges(z) {
                let k = self.f.edges()[ei]
                    .iter()
                    .filter(|&&y| y != z && s.rank[y] != UNPLACED)
                    .count();
                closes += usize::from(k == 2);
                touches += usize::from(k >= 1);
            }
            if closes == 0 {
                let key = (touches, self.f.degree(z));
                if fallback.as_ref().is_none_or(|(_, k)| key > *k) {
                    fallback = Some((z, key));
                }
                continue;
            }
            let ok: Vec<Slot> = Self::slots(s.layers)
                .filter(|slot| self.fits(&closed, &self.closing(&s.rank, z, slot.doubled())))
                .collect();
            if ok.is_empty() {
                return (z, ok);
            }
            let key = (ok.len(), usize::MAX - closes);
            if best.as_ref().is_none_or(|(_, b, k)| key < *k || (key == *k && ok.len() < b.len())) {
                best = Some((z, ok, key));
            }
        }
        match (best, fallback) {
            (Some((z, ok, _)), _) => (z, ok),
            (None, Some((z, _))) => (z, Self::slots(s.layers).collect()),
            (None, None) => unreachable!("branch called on a complete state"),
        }
    }
}

impl Problem for WeakOrderSearch<'_> {
    type State = WeakOrder;
    type Witness = LayerFunction;

    fn root(&self) -> WeakOrder {
        WeakOrder {
            rank: vec![UNPLACED; self.f.n()],
            layers: 0,
            placed: 0,
        }
    }

    fn children(&self, s: &WeakOrder, out: &mut Vec<WeakOrder>) {
        if s.placed == self.candidates.len() {
            return;
        }
        let (z, slots) = self.branch(s);
        for slot in slots {
            let mut child = s.clone();
            match slot {
                Slot::Join(r) => child.rank[z] = r,
                Slot::Open(g) => {
                    for r in child.rank.iter_mut() {
                        if *r != UNPLACED && *r >= g {
                            *r += 1;
                        }
                    }
                    child.rank[z] = g;
                    child.layers += 1;
                }
            }
            child.placed += 1;
            out.push(child);
        }
    }

    fn witness(&self, s: &WeakOrder) -> Option<LayerFunction> {
        (s.placed == self.candidates.len()).then(|| {
            let values: Vec<usize> = s
                .rank
                .iter()
                .map(|&r| if r == UNPLACED { 0 } else { r as usize })
                .collect();
            LayerFunction::new(&values)
        })
    }
}

/// Clause encoding of layered functions over the non-isolated vertices.
///
/// Each vertex pair gets one of `<`, `=`, `>` with transitivity clauses, so
/// models are exactly weak orders. Each edge gets a top-vertex selector for
/// (A1), and every pair of edges gets clauses for (A2) and (A3).
struct LayerEncoding {
    vertices: Vec<Vertex>,
    local: Vec<usize>,
    m: usize,
    solver: Solver,
}

/// A relation literal; `None` stands for the constant `true`.
type Rel = Option<Lit>;

impl LayerEncoding {
    fn pair_base(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j);
        3 * (i * self.m - i * (i + 1) / 2 + (j - i - 1))
    }

    /// `f(i) < f(j)` on local indices, `i != j`.
    fn less(&self, i: usize, j: usize) -> Lit {
        if i < j {
            Lit::pos(self.pair_base(i, j))
        } else {
            Lit::pos(self.pair_base(j, i) + 2)
        }
    }

    fn equal(&self, i: usize, j: usize) -> Rel {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Less => Some(Lit::pos(self.pair_base(i, j) + 1)),
            std::cmp::Ordering::Greater => Some(Lit::pos(self.pair_base(j, i) + 1)),
        }
    }

    fn new(f: &ThreeGraph) -> Self {
        let vertices: Vec<Vertex> = (0..f.n()).filter(|&v| f.degree(v) > 0).collect();
        let mut local = vec![usize::MAX; f.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let m = vertices.len();
        let pair_vars = 3 * m * m.saturating_sub(1) / 2;
        let top_base = pair_vars;
        let mut enc = LayerEncoding {
            vertices,
            local,
            m,
            solver: Solver::new(pair_vars + 3 * f.edge_count()),
        };

        for i in 0..m {
            for j in i + 1..m {
                let b = enc.pair_base(i, j);
                let [lt, eq, gt] = [Lit::pos(b), Lit::pos(b + 1), Lit::pos(b + 2)];
                enc.solver.add_clause(&[lt, eq, gt]);
                enc.solver.add_clause(&[!lt, !eq]);
                enc.solver.add_clause(&[!lt, !gt]);
                enc.solver.add_clause(&[!eq, !gt]);
            }
        }
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if a == b || b == c || a == c {
                        continue;
                    }
                    let (lab, lbc, lac) = (enc.less(a, b), enc.less(b, c), enc.less(a, c));
                    let (eab, ebc, eac) = (
                        enc.equal(a, b).expect("distinct"),
                        enc.equal(b, c).expect("distinct"),
                        enc.equal(a, c).expect("distinct"),
                    );
                    enc.solver.add_clause(&[!lab, !lbc, lac]);
                    enc.solver.add_clause(&[!lab, !ebc, lac]);
                    enc.solver.add_clause(&[!eab, !lbc, lac]);
                    if a < c {
                        enc.solver.add_clause(&[!eab, !ebc, eac]);
                    }
                }
            }
        }

        let edges: Vec<[usize; 3]> = f
            .edges()
            .iter()
            .map(|e| [enc.local[e[0]], enc.local[e[1]], enc.local[e[2]]])
            .collect();
        let top = |e: usize, i: usize| Lit::pos(top_base + 3 * e + i);
        for (ei, e) in edges.iter().enumerate() {
            enc.solver.add_clause(&[top(ei, 0), top(ei, 1), top(ei, 2)]);
            for i in 0..3 {
                for k in 1..3 {
                    let other = e[(i + k) % 3];
                    let l = enc.less(other, e[i]);
                    enc.solver.add_clause(&[!top(ei, i), l]);
                }
            }
        }

        let mut clause = Vec::with_capacity(5);
        for (ei, e) in edges.iter().enumerate() {
            for (ej, g) in edges.iter().enumerate().skip(ei + 1) {
                for i in 0..3 {
                    let (b1, b2) = (e[(i + 1) % 3], e[(i + 2) % 3]);
                    for j in 0..3 {
                        let (c1, c2) = (g[(j + 1) % 3], g[(j + 2) % 3]);
                        // (A2): equal tops force equal bottom multisets
                        for x in [enc.equal(b1, c1), enc.equal(b2, c2)] {
                            for z in [enc.equal(b1, c2), enc.equal(b2, c1)] {
                                let (Some(x), Some(z)) = (x, z) else { continue };
                                clause.clear();
                                clause.extend([!top(ei, i), !top(ej, j), x, z]);
                                if let Some(t) = enc.equal(e[i], g[j]) {
                                    clause.push(!t);
                                }
                                enc.solver.add_clause(&clause);
                            }
                        }
                        // (A3): two matched labels force the third
                        let Some(third) = enc.equal(e[i], g[j]) else { continue };
                        for (u, v) in [(c1, c2), (c2, c1)] {
                            clause.clear();
                            clause.push(third);
                            clause.extend(enc.equal(b1, u).map(|l| !l));
                            clause.extend(enc.equal(b2, v).map(|l| !l));
                            enc.solver.add_clause(&clause);
                        }
                    }
                }
            }
        }
        enc
    }

    fn decode(&self, model: &[bool], n: usize) -> LayerFunction {
        let mut values = vec![0usize; n];
        for i in 0..self.m {
            let below = (0..self.m)
                .filter(|&j| j != i && model[self.less(j, i).var()])
                .count();
            values[self.vertices[i]] = below + 1;
        }
        LayerFunction::new(&values)
    }
}

/// Decides whether `f` is layered and returns a layered function if so.
/// Isolated vertices go to the lowest layer. `stats.nodes` counts solver
/// decisions; the budget bounds solver conflicts.
pub fn find_layered_function(f: &ThreeGraph) -> Result<SearchOutcome<LayerFunction>> {
    find_layered_function_with(f, LayeredLimits::default())
}

pub fn find_layered_function_with(
    f: &ThreeGraph,
    limits: LayeredLimits,
) -> Result<SearchOutcome<LayerFunction>> {
    if f.n() > limits.max_vertices {
        return Err(Error::SearchBudgetExceeded {
            n: f.n(),
            bound: limits.max_vertices,
        });
    }
    let mut enc = LayerEncoding::new(f);
    let result = enc.solver.solve(limits.budget);
    let nodes = enc.solver.stats.decisions;
    let (found, complete) = match result {
        SatResult::Sat(model) => (Some(enc.decode(&model, f.n())), true),
        SatResult::Unsat => (None, true),
        SatResult::Unknown => (None, false),
    };
    if let Some(lf) = &found {
        assert!(
            validate_layer_function(f, lf)?.is_layered(),
            "solver produced an invalid layer function"
        );
    }
    Ok(SearchOutcome {
        found,
        stats: SearchStats { nodes, complete },
    })
}

/// Every semi-layered function of `f` in canonical form, in search order.
/// Stops after `limit` functions; the flag is `true` iff the list is complete.
pub fn semi_layered_functions(f: &ThreeGraph, limit: usize) -> Result<(Vec<LayerFunction>, bool)> {
    if f.n() >= UNPLACED as usize {
        return Err(Error::TooLarge {
            what: "layer search vertices",
            requested: f.n() as u128,
            cap: UNPLACED as u128 - 1,
        });
    }
    let search = WeakOrderSearch::new(f);
    let mut found = Vec::new();
    let mut stack = vec![search.root()];
    let mut buf = Vec::new();
    while let Some(s) = stack.pop() {
        if let Some(lf) = search.witness(&s) {
            if found.len() == limit {
                return Ok((found, false));
            }
            found.push(lf);
            continue;
        }
        buf.clear();
        search.children(&s, &mut buf);
        stack.extend(buf.drain(..).rev());
    }
    Ok((found, true))
}

/// Output of [`reduce_semi_layered`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub function: LayerFunction,
    /// Cardinality before the first step and after each step.
    pub cardinalities: Vec<usize>,
}

/// The lexicographically least `(p, t, q)` over (A3) violations, where `p`
/// and `t` are the two edge maxima (`p > t`) and `q` is the label of the
/// lower edge missing from the higher one.
fn least_merge(f: &ThreeGraph, lf: &LayerFunction) -> Option<(usize, usize, usize)> {
    let labels: Vec<[usize; 3]> = f.edges().iter().map(|e| lf.edge_labels(e)).collect();
    let mut best = None;
    for (i, &a) in labels.iter().enumerate() {
        for &b in &labels[i + 1..] {
            if common(a, b) != 2 {
                continue;
            }
            let (hi, lo) = if a[2] > b[2] { (a, b) } else { (b, a) };
            let mut rest = lo.to_vec();
            for x in hi {
                if let Some(pos) = rest.iter().position(|&y| y == x) {
                    rest.remove(pos);
                }
            }
            let cand = (hi[2], lo[2], rest[0]);
            if best.is_none_or(|b| cand < b) {
                best = Some(cand);
            }
        }
    }
    best
}

/// Turns a semi-layered function into a layered one by repeatedly merging
/// the top label of an (A3) violation into a lower label.
pub fn reduce_semi_layered(f: &ThreeGraph, lf: &LayerFunction) -> Result<Reduction> {
    let report = validate_layer_function(f, lf)?;
    if !report.is_semi_layered() {
        return Err(Error::NotSemiLayered {
            a1: report.a1_violations.len(),
            a2: report.a2_violations.len(),
        });
    }
    let mut current = lf.clone();
    let mut cardinalities = vec![current.layer_count()];
    while let Some((p, t, q)) = least_merge(f, &current) {
        debug_assert!(p > t && t >= q);
        let merged: Vec<usize> = current
            .values()
            .iter()
            .map(|&x| if x == p { q } else { x })
            .collect();
        current = LayerFunction::new(&merged);
        cardinalities.push(current.layer_count());
        debug_assert!(validate_layer_function(f, &current)?.is_semi_layered());
    }
    Ok(Reduction {
        function: current,
        cardinalities,
    })
}

/// The contraction of each layer to a point. Layers are numbered from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedGraph {
    pub k: usize,
    /// Layer triples `i < j < l` hit by an edge.
    pub triple_edges: BTreeSet<[usize; 3]>,
    /// `(i, j)`: some edge has two vertices on layer `i` and one on `j`.
    pub directed_pairs: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct LayerDecomposition {
    graph: ThreeGraph,
    function: LayerFunction,
    pub layers: Vec<Vec<Vertex>>,
    /// `(i, j)` with `i < j` such that the two layers induce an edge.
    pub linked_pairs: BTreeSet<(usize, usize)>,
    pub reduced: ReducedGraph,
}

impl LayerDecomposition {
    pub fn function(&self) -> &LayerFunction {
        &self.function
    }

    /// The subgraph induced on layers `i` and `j`, with the original index of
    /// each of its vertices.
    pub fn pair_subgraph(&self, i: usize, j: usize) -> Result<(ThreeGraph, Vec<Vertex>)> {
        let k = self.layers.len();
        for l in [i, j] {
            if l == 0 || l > k {
                return Err(Error::BadParams(format!("layer {l} outside 1..={k}")));
            }
        }
        let mut keep: Vec<Vertex> = self.layers[i - 1].clone();
        if i != j {
            keep.extend(&self.layers[j - 1]);
        }
        keep.sort_unstable();
        Ok((self.graph.induced_sub(&keep)?, keep))
    }
}

pub fn layer_decomposition(f: &ThreeGraph, lf: &LayerFunction) -> Result<LayerDecomposition> {
    if !validate_layer_function(f, lf)?.is_layered() {
        return Err(Error::NotLayered);
    }
    let k = lf.layer_count();
    let mut triple_edges = BTreeSet::new();
    let mut directed_pairs = BTreeSet::new();
    let mut linked_pairs = BTreeSet::new();
    for e in f.edges() {
        let [a, b, c] = lf.edge_labels(e);
        if a < b {
            triple_edges.insert([a, b, c]);
        } else {
            directed_pairs.insert((a, c));
            linked_pairs.insert((a, c));
        }
    }
    Ok(LayerDecomposition {
        graph: f.clone(),
        function: lf.clone(),
        layers: lf.layers(),
        linked_pairs,
        reduced: ReducedGraph {
            k,
            triple_edges,
            directed_pairs,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SUnion {
    pub graph: ThreeGraph,
    /// The common layer function carried over to the union.
    pub function: LayerFunction,
    /// Whether two layers of `S` form a linked pair. The union is still
    /// well defined, but vanishing density is not guaranteed to transfer.
    pub shared_linked_pair: bool,
}

/// Glues copies of layered graphs on a common vertex set: vertices on layers
/// in `shared` are identified, all others stay disjoint.
///
/// Vertices are laid out copy by copy in index order, a shared vertex
/// appearing with the first copy only.
pub fn s_union(graphs: &[ThreeGraph], lf: &LayerFunction, shared: &BTreeSet<usize>) -> Result<SUnion> {
    let first = graphs
        .first()
        .ok_or_else(|| Error::BadParams("no graphs to unite".into()))?;
    let n = first.n();
    let k = lf.layer_count();
    if let Some(&bad) = shared.iter().find(|&&l| l == 0 || l > k) {
        return Err(Error::SharedLayerConflict(format!(
            "layer {bad} outside 1..={k}"
        )));
    }
    let mut reduced = None;
    let mut linked = BTreeSet::new();
    for g in graphs {
        if g.n() != n {
            return Err(Error::ShapeMismatch("graphs differ in vertex count".into()));
        }
        let d = layer_decomposition(g, lf)?;
        match &reduced {
            None => reduced = Some(d.reduced.clone()),
            Some(r) if *r != d.reduced => return Err(Error::ReducedGraphMismatch),
            Some(_) => {}
        }
        linked.extend(d.linked_pairs);
    }
    let shared_linked_pair = linked
        .iter()
        .any(|(i, j)| shared.contains(i) && shared.contains(j));

    let is_shared = |v: Vertex| shared.contains(&lf.value(v));
    let copies = graphs.len();
    let mut index = vec![vec![usize::MAX; n]; copies];
    let mut names = Vec::new();
    let mut values = Vec::new();
    for c in 0..copies {
        for v in 0..n {
            if is_shared(v) && c > 0 {
                index[c][v] = index[0][v];
                continue;
            }
            index[c][v] = names.len();
            names.push(if is_shared(v) || copies == 1 {
                first.name(v)
            } else {
                format!("{}.{}", first.name(v), c + 1)
            });
            values.push(lf.value(v));
        }
    }
    let mut edges = BTreeSet::new();
    for (c, g) in graphs.iter().enumerate() {
        for e in g.edges() {
            let mut t = [index[c][e[0]], index[c][e[1]], index[c][e[2]]];
            t.sort_unstable();
            edges.insert(t);
        }
    }
    let mut graph = ThreeGraph::new(names.len(), edges)?;
    if first.names().is_some() {
        graph = graph.with_names(names)?;
    }
    Ok(SUnion {
        graph,
        function: LayerFunction::new(&values),
        shared_linked_pair,
    })
}

/// Replaces `v` by one new vertex per link edge plus a Fano-minus-edge
/// gadget per link edge hanging off three shared hub vertices.
///
/// Layout: the old vertices except `v` in order, then `v[u,w]` for each link
/// edge `uw`, then the hubs `x[v] y[v] z[v]`, then `x[v|u,w] y[v|u,w]
/// z[v|u,w]` per link edge.
pub fn linearize_vertex(f: &ThreeGraph, v: Vertex) -> Result<ThreeGraph> {
    let link = f.link_graph(v)?;
    let pairs = link.edges().to_vec();
    if pairs.is_empty() {
        return Err(Error::IsolatedVertex(v));
    }
    let n = f.n();
    let d = pairs.len();
    let map = |u: Vertex| if u < v { u } else { u - 1 };
    let apex = |i: usize| n - 1 + i;
    let hub = |h: usize| n - 1 + d + h;
    let gadget = |i: usize, h: usize| n - 1 + d + 3 + 3 * i + h;

    let mut edges: Vec<Edge> = f
        .edges()
        .iter()
        .filter(|e| !e.contains(&v))
        .map(|e| [map(e[0]), map(e[1]), map(e[2])])
        .collect();
    for (i, &(u, w)) in pairs.iter().enumerate() {
        let a = apex(i);
        let [x, y, z] = [gadget(i, 0), gadget(i, 1), gadget(i, 2)];
        let [xh, yh, zh] = [hub(0), hub(1), hub(2)];
        edges.push([map(u), map(w), a]);
        edges.extend([[xh, a, x], [xh, y, z], [yh, a, y], [yh, x, z], [zh, a, z], [zh, x, y]]);
    }

    let vn = f.name(v);
    let mut names: Vec<String> = (0..n).filter(|&u| u != v).map(|u| f.name(u)).collect();
    for &(u, w) in &pairs {
        names.push(format!("{vn}[{},{}]", f.name(u), f.name(w)));
    }
    for h in ["x", "y", "z"] {
        names.push(format!("{h}[{vn}]"));
    }
    for &(u, w) in &pairs {
        for h in ["x", "y", "z"] {
            names.push(format!("{h}[{vn}|{},{}]", f.name(u), f.name(w)));
        }
    }
    let total = names.len();
    ThreeGraph::new(total, edges)?.with_names(uniquify(names))
}

fn uniquify(names: Vec<String>) -> Vec<String> {
    let mut seen = HashSet::new();
    names
        .into_iter()
        .map(|mut s| {
            while !seen.insert(s.clone()) {
                s.push('\'');
            }
            s
        })
        .collect()
}

/// Linearizes the lowest-index vertex whose link is not a matching until
/// every link is a matching.
pub fn linearize_all(f: &ThreeGraph) -> Result<ThreeGraph> {
    linearize_all_capped(f, Caps::DEFAULT)
}

pub fn linearize_all_capped(f: &ThreeGraph, caps: Caps) -> Result<ThreeGraph> {
    let mut g = f.clone();
    loop {
        let mut next = None;
        for v in 0..g.n() {
            if !g.link_graph(v)?.is_matching() {
                next = Some(v);
                break;
            }
        }
        let Some(v) = next else {
            return Ok(g);
        };
        let d = g.link_graph(v)?.edge_count() as u128;
        let vertices = g.n() as u128 + 2 + 4 * d;
        let edges = g.edge_count() as u128 + 6 * d;
        if vertices > caps.vertices {
            return Err(Error::TooLarge {
                what: "linearized vertices",
                requested: vertices,
                cap: caps.vertices,
            });
        }
        if edges > caps.edges {
            return Err(Error::TooLarge {
                what: "linearized edges",
                requested: edges,
                cap: caps.edges,
            });
        }
        g = linearize_vertex(&g, v)?;
    }
}

/// Whether any two edges share at most one vertex.
pub fn is_linear(f: &ThreeGraph) -> bool {
    let by_codegree = f.codegree_stats().coneighbors.values().all(|c| c.len() <= 1);
    let by_links = (0..f.n()).all(|v| f.link_graph(v).expect("in range").is_matching());
    assert_eq!(by_codegree, by_links, "linearity checks disagree");
    by_codegree
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    fn lf(values: &[usize]) -> LayerFunction {
        LayerFunction::new(values)
    }

    /// The explicit layered function for `Z_r^-` with `u_i`, `v_i` at
    /// indices `2(i-1)`, `2i-1`.
    fn zycle_function(r: usize) -> LayerFunction {
        let mut values = vec![0; 2 * r];
        values[0] = r;
        values[1] = r + 1;
        for i in 2..=r {
            values[2 * (i - 1)] = i - 1;
            values[2 * i - 1] = i - 1;
        }
        lf(&values)
    }

    #[test]
    fn canonical_form_compresses_ranks() {
        assert_eq!(lf(&[1, 2, 5]).values(), &[1, 2, 3]);
        assert_eq!(lf(&[7, 3, 7, 0]).values(), &[3, 2, 3, 1]);
        assert_eq!(lf(&[4, 4]).layers(), vec![vec![0, 1]]);
    }

    #[test]
    fn validate_examples() {
        let e = named::single_edge();
        assert!(validate_layer_function(&e, &lf(&[1, 1, 2])).unwrap().is_layered());
        assert!(validate_layer_function(&e, &lf(&[1, 2, 3])).unwrap().is_layered());
        let r = validate_layer_function(&e, &lf(&[2, 2, 1])).unwrap();
        assert_eq!(r.a1_violations, vec![[0, 1, 2]]);
        for r in 3..6 {
            let z = named::z_minus(r).unwrap();
            let rep = validate_layer_function(&z, &zycle_function(r)).unwrap();
            assert!(rep.is_layered(), "r = {r}: {rep:?}");
        }
        assert!(validate_layer_function(&e, &lf(&[1, 1])).is_err());
    }

    #[test]
    fn a3_detects_two_shared_labels() {
        let g = ThreeGraph::new(4, [[0, 1, 2], [0, 1, 3]]).unwrap();
        let r = validate_layer_function(&g, &lf(&[1, 2, 3, 4])).unwrap();
        assert!(r.is_semi_layered());
        assert_eq!(r.a3_violations, vec![([0, 1, 2], [0, 1, 3])]);
    }

    #[test]
    fn search_examples() {
        for g in [named::f1(), named::f2(), named::c_minus(5).unwrap(), named::k4_minus()] {
            let out = find_layered_function(&g).unwrap();
            assert!(out.found.is_some(), "{g:?}");
        }
        for r in 3..5 {
            assert!(find_layered_function(&named::z_minus(r).unwrap()).unwrap().found.is_some());
        }
        assert!(find_layered_function(&named::f_union()).unwrap().is_proven_absent());
        assert!(find_layered_function(&named::k4()).unwrap().is_proven_absent());
        let out = find_layered_function(&ThreeGraph::empty(4)).unwrap();
        assert_eq!(out.found, Some(LayerFunction::constant(4)));
        assert!(matches!(
            find_layered_function(&ThreeGraph::empty(15)),
            Err(Error::SearchBudgetExceeded { n: 15, bound: 14 })
        ));
    }

    #[test]
    fn reduction_examples() {
        let e = named::single_edge();
        let red = reduce_semi_layered(&e, &lf(&[1, 2, 5])).unwrap();
        assert_eq!(red.function.values(), &[1, 2, 3]);
        assert_eq!(red.cardinalities, vec![3]);

        // uvw -> {1,2,3}, uvx -> {1,2,4}: merge 4 into 3
        let g = ThreeGraph::new(4, [[0, 1, 2], [0, 1, 3]]).unwrap();
        let red = reduce_semi_layered(&g, &lf(&[1, 2, 3, 4])).unwrap();
        assert_eq!(red.function.values(), &[1, 2, 3, 3]);
        assert_eq!(red.cardinalities, vec![4, 3]);
        assert!(validate_layer_function(&g, &red.function).unwrap().is_layered());

        let z = named::z_minus(3).unwrap();
        let red = reduce_semi_layered(&z, &zycle_function(3)).unwrap();
        assert_eq!(red.function, zycle_function(3));

        assert!(matches!(
            reduce_semi_layered(&e, &lf(&[1, 1, 1])),
            Err(Error::NotSemiLayered { a1: 1, a2: 0 })
        ));
    }

    #[test]
    fn semi_layered_enumeration_on_an_edge() {
        // weak orders on 3 points with a unique maximum: 3 + 3 * 2 = 9
        let (all, complete) = semi_layered_functions(&named::single_edge(), 100).unwrap();
        assert!(complete);
        assert_eq!(all.len(), 9);
        let (some, complete) = semi_layered_functions(&named::single_edge(), 4).unwrap();
        assert_eq!((some.len(), complete), (4, false));
    }

    #[test]
    fn decomposition_examples() {
        let e = named::single_edge();
        let d = layer_decomposition(&e, &lf(&[1, 1, 2])).unwrap();
        assert_eq!(d.linked_pairs, BTreeSet::from([(1, 2)]));
        assert_eq!(d.reduced.directed_pairs, BTreeSet::from([(1, 2)]));
        assert!(d.reduced.triple_edges.is_empty());

        // layers: {u2,v2}, {u3,v3}, {u1}, {v1}
        let z = named::z_minus(3).unwrap();
        let d = layer_decomposition(&z, &zycle_function(3)).unwrap();
        assert_eq!(d.layers, vec![vec![2, 3], vec![4, 5], vec![0], vec![1]]);
        assert_eq!(d.linked_pairs, BTreeSet::from([(1, 2), (2, 3)]));
        assert_eq!(d.reduced.triple_edges, BTreeSet::from([[1, 3, 4]]));
        let (sub, keep) = d.pair_subgraph(1, 2).unwrap();
        assert_eq!(keep, vec![2, 3, 4, 5]);
        assert_eq!(sub.edge_count(), 2);

        let f1 = named::f1();
        let w = find_layered_function(&f1).unwrap().found.unwrap();
        assert!(!layer_decomposition(&f1, &w).unwrap().linked_pairs.is_empty());

        assert!(matches!(
            layer_decomposition(&e, &lf(&[1, 2, 2])),
            Err(Error::NotLayered)
        ));
    }

    #[test]
    fn s_union_examples() {
        let e = named::single_edge();
        let f = lf(&[1, 1, 2]);
        let all = BTreeSet::from([1, 2]);
        let u = s_union(&[e.clone(), e.clone(), e.clone()], &f, &all).unwrap();
        assert_eq!(u.graph, e);
        assert!(u.shared_linked_pair);

        let u = s_union(&[e.clone(), e.clone()], &f, &BTreeSet::new()).unwrap();
        assert_eq!(u.graph.n(), 6);
        assert_eq!(u.graph.edges(), &[[0, 1, 2], [3, 4, 5]]);

        // shared layer-1 pair, two distinct apexes
        let fa = ThreeGraph::new(4, [[0, 1, 2]]).unwrap();
        let fb = ThreeGraph::new(4, [[0, 1, 3]]).unwrap();
        let f = lf(&[1, 1, 2, 2]);
        let u = s_union(&[fa, fb], &f, &BTreeSet::from([1])).unwrap();
        assert_eq!(u.graph.n(), 6);
        assert_eq!(u.graph.edge_count(), 2);
        assert_eq!(u.graph.codegree(0, 1), 2);
        assert!(!u.shared_linked_pair);
        assert!(validate_layer_function(&u.graph, &u.function).unwrap().is_layered());

        let other = ThreeGraph::new(3, []).unwrap();
        assert!(matches!(
            s_union(&[e.clone(), other], &lf(&[1, 1, 2]), &BTreeSet::new()),
            Err(Error::ReducedGraphMismatch)
        ));
        assert!(matches!(
            s_union(&[e], &lf(&[1, 1, 2]), &BTreeSet::from([3])),
            Err(Error::SharedLayerConflict(_))
        ));
    }

    #[test]
    fn linearize_examples() {
        let e = named::single_edge();
        let g = linearize_vertex(&e, 2).unwrap();
        assert_eq!((g.n(), g.edge_count()), (9, 7));
        let gadget = g.induced_sub(&(2..9).collect::<Vec<_>>()).unwrap();
        assert!(crate::hypergraph::is_isomorphic(&gadget, &named::fano_minus()).unwrap().is_some());
        for u in 2..9 {
            assert!(g.link_graph(u).unwrap().is_matching());
        }

        let g = linearize_vertex(&named::k4(), 0).unwrap();
        assert_eq!((g.n(), g.edge_count()), (18, 22));
        for u in 3..18 {
            assert!(g.link_graph(u).unwrap().is_matching());
        }

        assert!(matches!(
            linearize_vertex(&ThreeGraph::empty(3), 0),
            Err(Error::IsolatedVertex(0))
        ));
    }

    #[test]
    fn linearize_all_examples() {
        let fm = named::fano_minus();
        assert!(is_linear(&fm));
        assert_eq!(linearize_all(&fm).unwrap(), fm);
        assert!(!is_linear(&named::k4()));
        assert!(is_linear(&ThreeGraph::empty(5)));
        let l = linearize_all(&named::k4()).unwrap();
        assert!(is_linear(&l));
        let tight = Caps {
            vertices: 20,
            edges: 1000,
        };
        assert!(matches!(
            linearize_all_capped(&named::k4(), tight),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn linearized_f_is_not_layered() {
        let l = linearize_all(&named::f_union()).unwrap();
        assert!(is_linear(&l));
        let limits = LayeredLimits {
            max_vertices: 200,
            ..LayeredLimits::default()
        };
        assert!(find_layered_function_with(&l, limits).unwrap().is_proven_absent());
    }
}
