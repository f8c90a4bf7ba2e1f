//! Deciding and certifying vanishing uniform Turán density.
//!
//! Two equivalent finite criteria are searched independently:
//!
//! * a labeling `σ` plus a red/blue/green coloring of the shadow such that
//!   every edge `u < v < w` (in `σ`) has `uv` red, `uw` blue and `vw` green;
//! * a labeling `σ` under which no link graph contains a monotone P3.
//!
//! For (2,1)-type graphs only the first part needs labeling.
//!
//! All searches place vertices at labels `1, 2, ...` in turn, so an unplaced
//! vertex is always larger than every placed one. That makes the relative
//! order of an edge known as soon as two of its vertices are placed, and a
//! monotone path known as soon as its middle vertex is placed.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::hypergraph::{pair, ThreeGraph, Vertex};
use crate::orderings::{monotone_p3_by_key, Labeling, SubsetLabeling};
use crate::search::{find_first, Problem, SearchOutcome, DEFAULT_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Red,
    Blue,
    Green,
}

impl Color {
    pub fn as_str(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Blue => "blue",
            Color::Green => "green",
        }
    }

    pub fn parse(s: &str) -> Option<Color> {
        match s {
            "red" => Some(Color::Red),
            "blue" => Some(Color::Blue),
            "green" => Some(Color::Green),
            _ => None,
        }
    }

    fn code(self) -> u8 {
        match self {
            Color::Red => 1,
            Color::Blue => 2,
            Color::Green => 3,
        }
    }

    fn from_code(c: u8) -> Color {
        match c {
            1 => Color::Red,
            2 => Color::Blue,
            _ => Color::Green,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A coloring of shadow pairs, keyed by `(u, v)` with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ShadowColoring {
    colors: BTreeMap<(Vertex, Vertex), Color>,
}

impl ShadowColoring {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets the color of `uv`, returning the previous one.
    pub fn set(&mut self, u: Vertex, v: Vertex, c: Color) -> Option<Color> {
        self.colors.insert(pair(u, v), c)
    }

    pub fn get(&self, u: Vertex, v: Vertex) -> Option<Color> {
        self.colors.get(&pair(u, v)).copied()
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((Vertex, Vertex), Color)> + '_ {
        self.colors.iter().map(|(k, c)| (*k, *c))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformZeroCertificate {
    pub sigma: Labeling,
    pub coloring: ShadowColoring,
}

/// Limits for the exhaustive searches in this module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniformLimits {
    /// Refuse inputs with more vertices than this.
    pub max_vertices: usize,
    /// Node-expansion budget.
    pub budget: u64,
}

impl Default for UniformLimits {
    fn default() -> Self {
        UniformLimits {
            max_vertices: 12,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl UniformLimits {
    fn admit(&self, n: usize) -> Result<()> {
        if n > self.max_vertices {
            return Err(Error::SearchBudgetExceeded {
                n,
                bound: self.max_vertices,
            });
        }
        Ok(())
    }
}

/// Descending degree, ties by index.
fn placement_order(f: &ThreeGraph, candidates: impl Iterator<Item = Vertex>) -> Vec<Vertex> {
    let mut order: Vec<Vertex> = candidates.collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(f.degree(v)), v));
    order
}

/// The coloring forced by `σ`, or `None` if two edges force different
/// colors on the same pair.
pub fn forced_coloring(f: &ThreeGraph, sigma: &Labeling) -> Result<Option<ShadowColoring>> {
    if sigma.n() != f.n() {
        return Err(Error::ShapeMismatch(format!(
            "labeling covers {} vertices, graph has {}",
            sigma.n(),
            f.n()
        )));
    }
    let mut coloring = ShadowColoring::new();
    for e in f.edges() {
        let mut t = *e;
        t.sort_by_key(|&v| sigma.label(v));
        for (a, b, c) in [
            (t[0], t[1], Color::Red),
            (t[0], t[2], Color::Blue),
            (t[1], t[2], Color::Green),
        ] {
            if let Some(old) = coloring.set(a, b, c) {
                if old != c {
                    return Ok(None);
                }
            }
        }
    }
    Ok(Some(coloring))
}

#[derive(Clone)]
struct B2State {
    order: Vec<Vertex>,
    placed: Vec<bool>,
    colors: Vec<u8>,
}

struct B2Search<'a> {
    f: &'a ThreeGraph,
    priority: Vec<Vertex>,
}

impl B2Search<'_> {
    fn slot(&self, u: Vertex, v: Vertex) -> usize {
        let (a, b) = pair(u, v);
        a * self.f.n() + b
    }
}

impl Problem for B2Search<'_> {
    type State = B2State;
    type Witness = UniformZeroCertificate;

    fn root(&self) -> B2State {
        let n = self.f.n();
        B2State {
            order: Vec::with_capacity(n),
            placed: vec![false; n],
            colors: vec![0; n * n],
        }
    }

    fn children(&self, s: &B2State, out: &mut Vec<B2State>) {
        'next: for &x in &self.priority {
            if s.placed[x] {
                continue;
            }
            let mut child = s.clone();
            for &ei in self.f.incident_edges(x) {
                let e = self.f.edges()[ei];
                let others: Vec<Vertex> = e.iter().copied().filter(|&y| y != x).collect();
                let placed: Vec<Vertex> = others.iter().copied().filter(|&y| s.placed[y]).collect();
                if placed.len() != 1 {
                    continue;
                }
                let a = placed[0];
                let c = if others[0] == a { others[1] } else { others[0] };
                // a < x < c
                for (p, q, col) in [(a, x, Color::Red), (a, c, Color::Blue), (x, c, Color::Green)] {
                    let slot = self.slot(p, q);
                    let code = col.code();
                    match child.colors[slot] {
                        0 => child.colors[slot] = code,
                        old if old == code => {}
                        _ => continue 'next,
                    }
                }
            }
            child.placed[x] = true;
            child.order.push(x);
            out.push(child);
        }
    }

    fn witness(&self, s: &B2State) -> Option<UniformZeroCertificate> {
        if s.order.len() != self.f.n() {
            return None;
        }
        let sigma = Labeling::from_order(&s.order).expect("complete order");
        let mut coloring = ShadowColoring::new();
        let n = self.f.n();
        for u in 0..n {
            for v in u + 1..n {
                let c = s.colors[u * n + v];
                if c != 0 {
                    coloring.set(u, v, Color::from_code(c));
                }
            }
        }
        Some(UniformZeroCertificate { sigma, coloring })
    }
}

/// Searches for a labeling and shadow coloring witnessing the red/blue/green
/// edge pattern. A returned certificate has been verified.
pub fn certify_uniform_zero_b2(f: &ThreeGraph) -> Result<SearchOutcome<UniformZeroCertificate>> {
    certify_uniform_zero_b2_with(f, UniformLimits::default())
}

pub fn certify_uniform_zero_b2_with(
    f: &ThreeGraph,
    limits: UniformLimits,
) -> Result<SearchOutcome<UniformZeroCertificate>> {
    limits.admit(f.n())?;
    let search = B2Search {
        f,
        priority: placement_order(f, 0..f.n()),
    };
    let out = find_first(&search, limits.budget);
    if let Some(cert) = &out.found {
        assert!(
            verify_uniform_certificate(f, cert)?,
            "search produced an invalid certificate"
        );
    }
    Ok(out)
}

#[derive(Clone)]
struct LinkState {
    order: Vec<Vertex>,
    placed: Vec<bool>,
}

/// Places the vertices of `domain`; forbids a monotone P3 inside the link of
/// any vertex in `centers`.
struct LinkSearch<'a> {
    f: &'a ThreeGraph,
    priority: Vec<Vertex>,
    centers: Vec<Vertex>,
}

impl LinkSearch<'_> {
    /// Placing `v` now makes it the middle of a monotone path in some link
    /// iff, in that link, it has one placed and one unplaced neighbor.
    fn creates_monotone_middle(&self, s: &LinkState, v: Vertex) -> bool {
        self.centers.iter().any(|&x| {
            if x == v {
                return false;
            }
            let nbrs = self.f.coneighbors(x, v);
            let mut below = false;
            let mut above = false;
            for &w in nbrs {
                if s.placed[w] {
                    below = true;
                } else {
                    above = true;
                }
            }
            below && above
        })
    }
}

impl Problem for LinkSearch<'_> {
    type State = LinkState;
    type Witness = Vec<Vertex>;

    fn root(&self) -> LinkState {
        LinkState {
            order: Vec::with_capacity(self.priority.len()),
            placed: vec![false; self.f.n()],
        }
    }

    fn children(&self, s: &LinkState, out: &mut Vec<LinkState>) {
        for &v in &self.priority {
            if s.placed[v] || self.creates_monotone_middle(s, v) {
                continue;
            }
            let mut child = s.clone();
            child.placed[v] = true;
            child.order.push(v);
            out.push(child);
        }
    }

    fn witness(&self, s: &LinkState) -> Option<Vec<Vertex>> {
        (s.order.len() == self.priority.len()).then(|| s.order.clone())
    }
}

/// Searches for a labeling under which every link graph is half-bipartite.
pub fn certify_uniform_zero_links(f: &ThreeGraph) -> Result<SearchOutcome<Labeling>> {
    certify_uniform_zero_links_with(f, UniformLimits::default())
}

pub fn certify_uniform_zero_links_with(
    f: &ThreeGraph,
    limits: UniformLimits,
) -> Result<SearchOutcome<Labeling>> {
    limits.admit(f.n())?;
    let search = LinkSearch {
        f,
        priority: placement_order(f, 0..f.n()),
        centers: (0..f.n()).collect(),
    };
    let out = find_first(&search, limits.budget).map(|order| Labeling::from_order(&order).expect("complete order"));
    if let Some(sigma) = &out.found {
        assert!(links_half_bipartite(f, sigma)?, "search produced a bad labeling");
    }
    Ok(out)
}

/// Whether every link graph of `f` is half-bipartite under `σ`.
pub fn links_half_bipartite(f: &ThreeGraph, sigma: &Labeling) -> Result<bool> {
    if sigma.n() != f.n() {
        return Err(Error::ShapeMismatch("labeling size".into()));
    }
    for v in 0..f.n() {
        if monotone_p3_by_key(&f.link_graph(v)?, sigma.values()).is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_two_one(f: &ThreeGraph, a: &[Vertex], b: &[Vertex]) -> Result<Vec<bool>> {
    let n = f.n();
    let mut in_a = vec![None; n];
    for (&v, side) in a.iter().map(|v| (v, true)).chain(b.iter().map(|v| (v, false))) {
        if v >= n {
            return Err(Error::OutOfRange { index: v, n });
        }
        if in_a[v].replace(side).is_some() {
            return Err(Error::NotTwoOneType(format!("vertex {v} listed twice")));
        }
    }
    if let Some(v) = in_a.iter().position(Option::is_none) {
        return Err(Error::NotTwoOneType(format!("vertex {v} in neither part")));
    }
    let in_a: Vec<bool> = in_a.into_iter().map(Option::unwrap).collect();
    for e in f.edges() {
        let k = e.iter().filter(|&&v| in_a[v]).count();
        if k != 2 {
            return Err(Error::NotTwoOneType(format!(
                "edge {e:?} has {k} vertices in the first part"
            )));
        }
    }
    Ok(in_a)
}

/// For a (2,1)-type graph with parts `a` (two vertices per edge) and `b`,
/// searches for a labeling of `a` under which every link `L(u)`, `u ∈ b`,
/// is half-bipartite.
pub fn certify_21_type(f: &ThreeGraph, a: &[Vertex], b: &[Vertex]) -> Result<SearchOutcome<SubsetLabeling>> {
    certify_21_type_with(f, a, b, UniformLimits::default())
}

pub fn certify_21_type_with(
    f: &ThreeGraph,
    a: &[Vertex],
    b: &[Vertex],
    limits: UniformLimits,
) -> Result<SearchOutcome<SubsetLabeling>> {
    check_two_one(f, a, b)?;
    limits.admit(a.len())?;
    let search = LinkSearch {
        f,
        priority: placement_order(f, a.iter().copied()),
        centers: b.to_vec(),
    };
    let out = find_first(&search, limits.budget)
        .map(|order| SubsetLabeling::from_order(&order).expect("distinct vertices"));
    if let Some(sigma) = &out.found {
        let mut key = vec![0; f.n()];
        for (v, l) in sigma.iter() {
            key[v] = l;
        }
        for &u in b {
            assert!(
                monotone_p3_by_key(&f.link_graph(u)?, &key).is_none(),
                "search produced a bad labeling"
            );
        }
    }
    Ok(out)
}

/// Some partition `(A, B)` making `f` (2,1)-type, if one exists. Isolated
/// vertices go to `A`.
pub fn two_one_partition(f: &ThreeGraph) -> Option<(Vec<Vertex>, Vec<Vertex>)> {
    fn extend(f: &ThreeGraph, v: Vertex, side: &mut Vec<Option<bool>>) -> bool {
        if v == f.n() {
            return true;
        }
        for choice in [true, false] {
            side[v] = Some(choice);
            let ok = f.incident_edges(v).iter().all(|&ei| {
                let e = f.edges()[ei];
                let assigned: Vec<bool> = e.iter().filter_map(|&x| side[x]).collect();
                let in_b = assigned.iter().filter(|&&s| !s).count();
                in_b <= 1 && (assigned.len() < 3 || in_b == 1)
            });
            if ok && extend(f, v + 1, side) {
                return true;
            }
        }
        side[v] = None;
        false
    }
    let mut side = vec![None; f.n()];
    if !extend(f, 0, &mut side) {
        return None;
    }
    let a = (0..f.n()).filter(|&v| side[v] == Some(true)).collect();
    let b = (0..f.n()).filter(|&v| side[v] == Some(false)).collect();
    Some((a, b))
}

/// The full certificate for `σ`, if the forced coloring is consistent.
pub fn certificate_from_labeling(f: &ThreeGraph, sigma: &Labeling) -> Result<Option<UniformZeroCertificate>> {
    Ok(forced_coloring(f, sigma)?.map(|coloring| UniformZeroCertificate {
        sigma: sigma.clone(),
        coloring,
    }))
}

/// Extends a labeling of the first part of a (2,1)-type graph to all of
/// `f`: first-part vertices in their labeled order, then `b` by index.
pub fn extend_two_one_labeling(f: &ThreeGraph, sub: &SubsetLabeling, b: &[Vertex]) -> Result<Labeling> {
    let mut order = sub.order();
    let mut rest = b.to_vec();
    rest.sort_unstable();
    order.extend(rest);
    if order.len() != f.n() {
        return Err(Error::ShapeMismatch(format!(
            "labeling and part cover {} vertices, graph has {}",
            order.len(),
            f.n()
        )));
    }
    Labeling::from_order(&order)
}

/// Search strategy for [`check_uniform_zero`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UniformMethod {
    /// Labeling plus forced shadow coloring.
    #[default]
    B2,
    /// Labeling with half-bipartite links.
    Links,
    /// Labeling of the first part of a (2,1)-type partition.
    TwoOne,
}

impl UniformMethod {
    pub fn parse(s: &str) -> Option<UniformMethod> {
        match s {
            "b2" => Some(UniformMethod::B2),
            "links" => Some(UniformMethod::Links),
            "21type" => Some(UniformMethod::TwoOne),
            _ => None,
        }
    }
}

/// Runs one method and returns a full, verified certificate on success.
/// The (2,1) method finds its own partition and fails with
/// [`Error::NotTwoOneType`] when there is none.
pub fn check_uniform_zero(
    f: &ThreeGraph,
    method: UniformMethod,
    limits: UniformLimits,
) -> Result<SearchOutcome<UniformZeroCertificate>> {
    let out = match method {
        UniformMethod::B2 => certify_uniform_zero_b2_with(f, limits)?,
        UniformMethod::Links => {
            let out = certify_uniform_zero_links_with(f, limits)?;
            let cert = match &out.found {
                Some(sigma) => Some(
                    certificate_from_labeling(f, sigma)?
                        .expect("half-bipartite links force a consistent coloring"),
                ),
                None => None,
            };
            SearchOutcome {
                found: cert,
                stats: out.stats,
            }
        }
        UniformMethod::TwoOne => {
            let (a, b) = two_one_partition(f)
                .ok_or_else(|| Error::NotTwoOneType("no (2,1) partition exists".into()))?;
            let out = certify_21_type_with(f, &a, &b, limits)?;
            let cert = match &out.found {
                Some(sub) => Some(
                    certificate_from_labeling(f, &extend_two_one_labeling(f, sub, &b)?)?
                        .expect("half-bipartite links force a consistent coloring"),
                ),
                None => None,
            };
            SearchOutcome {
                found: cert,
                stats: out.stats,
            }
        }
    };
    if let Some(cert) = &out.found {
        assert!(verify_uniform_certificate(f, cert)?, "certificate failed verification");
    }
    Ok(out)
}

/// Checks the certificate against `f` without searching.
pub fn verify_uniform_certificate(f: &ThreeGraph, cert: &UniformZeroCertificate) -> Result<bool> {
    if cert.sigma.n() != f.n() {
        return Err(Error::ShapeMismatch(format!(
            "labeling covers {} vertices, graph has {}",
            cert.sigma.n(),
            f.n()
        )));
    }
    let shadow = f.shadow();
    if shadow.edge_count() != cert.coloring.len()
        || shadow
            .edges()
            .iter()
            .any(|&(u, v)| cert.coloring.get(u, v).is_none())
    {
        return Err(Error::ShapeMismatch(
            "coloring domain differs from the shadow".into(),
        ));
    }
    for e in f.edges() {
        let mut t = *e;
        t.sort_by_key(|&v| cert.sigma.label(v));
        if cert.coloring.get(t[0], t[1]) != Some(Color::Red)
            || cert.coloring.get(t[0], t[2]) != Some(Color::Blue)
            || cert.coloring.get(t[1], t[2]) != Some(Color::Green)
        {
            return Ok(false);
        }
    }
    Ok(true)
}
