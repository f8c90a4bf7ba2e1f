//! Injective subgraph embedding of a pattern 3-graph into a host.
//!
//! Pattern vertices are placed in a fixed order: the highest-degree vertex
//! first, then repeatedly the vertex most tied to those already placed.
//! Candidates must have enough degree, be adjacent in the host shadow to the
//! image of a placed shadow-neighbor, and match every codegree towards
//! placed vertices; edges are checked as soon as all three ends are placed.

use crate::hypergraph::{Graph, ThreeGraph, Vertex};
use crate::search::{count_all, find_first, Problem, DEFAULT_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbeddingMode {
    /// Existence only.
    Decide,
    /// Existence plus the map.
    Find,
    /// Count all embeddings.
    Count,
}

#[derive(Debug, Clone)]
pub struct EmbeddingProblem<'a> {
    pub pattern: &'a ThreeGraph,
    pub host: &'a ThreeGraph,
    /// Node-expansion cap.
    pub budget: u64,
    pub mode: EmbeddingMode,
}

impl<'a> EmbeddingProblem<'a> {
    pub fn new(pattern: &'a ThreeGraph, host: &'a ThreeGraph) -> Self {
        EmbeddingProblem {
            pattern,
            host,
            budget: DEFAULT_BUDGET,
            mode: EmbeddingMode::Find,
        }
    }

    pub fn with_mode(mut self, mode: EmbeddingMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget.max(1);
        self
    }
}

/// Embedding counts: injective maps, and distinct copies, i.e. maps up to
/// automorphisms of the pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingCount {
    pub embeddings: u64,
    pub copies: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingResult {
    /// `map[v]` is the host image of pattern vertex `v`.
    pub found: Option<Vec<Vertex>>,
    /// Set only in count mode.
    pub count: Option<EmbeddingCount>,
    /// `true` iff the search was not cut off by the budget.
    pub complete: bool,
    pub nodes: u64,
}

impl EmbeddingResult {
    pub fn is_proven_absent(&self) -> bool {
        self.complete && self.found.is_none() && self.count.is_none_or(|c| c.embeddings == 0)
    }
}

#[derive(Clone)]
struct Partial {
    images: Vec<Vertex>,
    used: Vec<bool>,
}

struct Embedder<'a> {
    pattern: &'a ThreeGraph,
    host: &'a ThreeGraph,
    host_shadow: Graph,
    order: Vec<Vertex>,
    /// Position of each pattern vertex in `order`.
    position: Vec<usize>,
}

impl<'a> Embedder<'a> {
    fn new(pattern: &'a ThreeGraph, host: &'a ThreeGraph) -> Self {
        let shadow = pattern.shadow();
        let n = pattern.n();
        let mut order = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        while order.len() < n {
            let next = (0..n)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| {
                    let closes = pattern
                        .incident_edges(v)
                        .iter()
                        .filter(|&&ei| {
                            pattern.edges()[ei]
                                .iter()
                                .all(|&x| x == v || placed[x])
                        })
                        .count();
                    let ties = shadow.neighbors(v).iter().filter(|&&x| placed[x]).count();
                    (closes, ties, pattern.degree(v), std::cmp::Reverse(v))
                })
                .expect("an unplaced vertex");
            placed[next] = true;
            order.push(next);
        }
        let mut position = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        Embedder {
            pattern,
            host,
            host_shadow: host.shadow(),
            order,
            position,
        }
    }

    fn admissible(&self, s: &Partial, p: Vertex, h: Vertex) -> bool {
        if s.used[h] || self.host.degree(h) < self.pattern.degree(p) {
            return false;
        }
        let depth = s.images.len();
        for (i, &q) in self.order[..depth].iter().enumerate() {
            let need = self.pattern.codegree(p, q);
            if need > 0 && self.host.codegree(h, s.images[i]) < need {
                return false;
            }
        }
        self.pattern.incident_edges(p).iter().all(|&ei| {
            let e = self.pattern.edges()[ei];
            let others: Vec<Vertex> = e.iter().copied().filter(|&x| x != p).collect();
            let (a, b) = (self.position[others[0]], self.position[others[1]]);
            a >= depth || b >= depth || self.host.has_edge(h, s.images[a], s.images[b])
        })
    }

    fn map_of(&self, images: &[Vertex]) -> Vec<Vertex> {
        let mut map = vec![0; self.pattern.n()];
        for (i, &v) in self.order.iter().enumerate() {
            map[v] = images[i];
        }
        map
    }
}

impl Problem for Embedder<'_> {
    type State = Partial;
    type Witness = Vec<Vertex>;

    fn root(&self) -> Partial {
        Partial {
            images: Vec::with_capacity(self.pattern.n()),
            used: vec![false; self.host.n()],
        }
    }

    fn children(&self, s: &Partial, out: &mut Vec<Partial>) {
        let depth = s.images.len();
        let Some(&p) = self.order.get(depth) else {
            return;
        };
        let anchor = self.order[..depth]
            .iter()
            .position(|&q| self.pattern.codegree(p, q) > 0);
        let mut push = |h: Vertex| {
            if self.admissible(s, p, h) {
                let mut child = s.clone();
                child.images.push(h);
                child.used[h] = true;
                out.push(child);
            }
        };
        match anchor {
            Some(i) => self.host_shadow.neighbors(s.images[i]).iter().for_each(|&h| push(h)),
            None => (0..self.host.n()).for_each(push),
        }
    }

    fn witness(&self, s: &Partial) -> Option<Vec<Vertex>> {
        (s.images.len() == self.pattern.n()).then(|| self.map_of(&s.images))
    }
}

/// Whether `map` is an injective homomorphism of `pattern` into `host`.
pub fn is_embedding(pattern: &ThreeGraph, host: &ThreeGraph, map: &[Vertex]) -> bool {
    if map.len() != pattern.n() || map.iter().any(|&h| h >= host.n()) {
        return false;
    }
    let mut seen = vec![false; host.n()];
    if map.iter().any(|&h| std::mem::replace(&mut seen[h], true)) {
        return false;
    }
    pattern
        .edges()
        .iter()
        .all(|e| host.has_edge(map[e[0]], map[e[1]], map[e[2]]))
}

pub fn find_embedding(p: &EmbeddingProblem<'_>) -> EmbeddingResult {
    if p.pattern.n() > p.host.n() {
        return EmbeddingResult {
            found: None,
            count: (p.mode == EmbeddingMode::Count).then_some(EmbeddingCount {
                embeddings: 0,
                copies: 0,
            }),
            complete: true,
            nodes: 0,
        };
    }
    let search = Embedder::new(p.pattern, p.host);
    match p.mode {
        EmbeddingMode::Decide | EmbeddingMode::Find => {
            let out = find_first(&search, p.budget);
            if let Some(map) = &out.found {
                assert!(
                    is_embedding(p.pattern, p.host, map),
                    "search produced an invalid embedding"
                );
            }
            EmbeddingResult {
                found: out.found,
                count: None,
                complete: out.stats.complete,
                nodes: out.stats.nodes,
            }
        }
        EmbeddingMode::Count => {
            let (embeddings, stats) = count_all(&search, p.budget);
            let auts = Embedder::new(p.pattern, p.pattern);
            let (automorphisms, aut_stats) = count_all(&auts, p.budget);
            let complete = stats.complete && aut_stats.complete;
            EmbeddingResult {
                found: None,
                count: Some(EmbeddingCount {
                    embeddings,
                    copies: if complete { embeddings / automorphisms.max(1) } else { 0 },
                }),
                complete,
                nodes: stats.nodes + aut_stats.nodes,
            }
        }
    }
}

/// Shorthand for a full-budget existence search.
pub fn embeds(pattern: &ThreeGraph, host: &ThreeGraph) -> EmbeddingResult {
    find_embedding(&EmbeddingProblem::new(pattern, host))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    #[test]
    fn pattern_into_itself() {
        for g in [named::c_minus(5).unwrap(), named::fano(), named::f2()] {
            let r = embeds(&g, &g);
            assert!(r.found.is_some());
            assert!(is_embedding(&g, &g, r.found.as_ref().unwrap()));
        }
    }

    #[test]
    fn cycle_minus_into_blowup() {
        let c5 = named::c_minus(5).unwrap();
        let host = c5.blowup(&[2; 5]).unwrap();
        let r = embeds(&named::c_minus(7).unwrap(), &host);
        assert!(r.found.is_some());
    }

    #[test]
    fn k4_not_in_k4_minus() {
        let r = embeds(&named::k4(), &named::k4_minus());
        assert!(r.is_proven_absent());
        let r = embeds(&named::k4(), &ThreeGraph::empty(3));
        assert!(r.is_proven_absent());
    }

    #[test]
    fn count_edge_in_k4() {
        let (edge, k4) = (named::single_edge(), named::k4());
        let p = EmbeddingProblem::new(&edge, &k4).with_mode(EmbeddingMode::Count);
        let r = find_embedding(&p);
        assert_eq!(
            r.count,
            Some(EmbeddingCount {
                embeddings: 24,
                copies: 4
            })
        );
        assert!(r.complete);
    }

    #[test]
    fn count_matches_brute_force() {
        let host = named::c_minus(5).unwrap().blowup(&[1, 2, 1, 1, 2]).unwrap();
        let pattern = named::k4_minus();
        let mut brute = 0;
        let n = host.n();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        if is_embedding(&pattern, &host, &[a, b, c, d]) {
                            brute += 1;
                        }
                    }
                }
            }
        }
        let p = EmbeddingProblem::new(&pattern, &host).with_mode(EmbeddingMode::Count);
        let r = find_embedding(&p);
        assert_eq!(r.count.unwrap().embeddings, brute);
    }

    #[test]
    fn isolated_pattern_vertices_are_placed() {
        let pattern = ThreeGraph::new(4, [[0, 1, 2]]).unwrap();
        let r = embeds(&pattern, &named::k4());
        assert!(is_embedding(&pattern, &named::k4(), r.found.as_ref().unwrap()));
        assert!(embeds(&pattern, &named::single_edge()).is_proven_absent());
    }

    #[test]
    fn budget_truncation() {
        let host = named::complete(9).unwrap();
        let fano = named::fano();
        let p = EmbeddingProblem::new(&fano, &host).with_budget(5);
        let r = find_embedding(&p);
        assert!(r.found.is_none() && !r.complete);
        assert!(!r.is_proven_absent());
    }
}
