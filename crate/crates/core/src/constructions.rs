//! Extremal constructions: the random red/blue construction, the
//! twelve-part construction and its pattern, the minimum-codegree-two
//! family and its tensor product, plus density estimates.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergraph::{is_isomorphic, tensor_product_capped, Caps, PartPattern, ThreeGraph, Vertex};
use crate::rng::SplitMix64;

/// Pairs of `[n]` are red with probability 2/3, blue otherwise, one draw per
/// pair in lexicographic order; `r < s < t` is an edge iff `rs` and `rt` are
/// red and `st` is blue.
pub fn rb_construction(n: usize, seed: u64) -> Result<ThreeGraph> {
    if n < 3 {
        return Err(Error::BadParams("the red/blue construction needs n >= 3".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let mut red = vec![false; n * n];
    for r in 0..n {
        for s in r + 1..n {
            red[r * n + s] = rng.below(3) < 2;
        }
    }
    let mut edges = Vec::new();
    for r in 0..n {
        for s in r + 1..n {
            if !red[r * n + s] {
                continue;
            }
            for t in s + 1..n {
                if red[r * n + t] && !red[s * n + t] {
                    edges.push([r, s, t]);
                }
            }
        }
    }
    ThreeGraph::new(n, edges)
}

const TWELVE_PART_TRIPLES: [&str; 30] = [
    "AAB", "ACI", "ADG", "AEE", "AFF", "AHJ", "AKL", "BBC", "BDJ", "BEH", "BFK", "BGG", "BIL",
    "CCD", "CEF", "CGK", "CHH", "CJL", "DDE", "DFL", "DHK", "DII", "EGI", "EJJ", "EKK", "ELL",
    "FGJ", "FHI", "GHL", "IJK",
];

/// The pattern on parts `A..L`.
pub fn twelve_part_pattern() -> PartPattern {
    PartPattern::from_letters(12, &TWELVE_PART_TRIPLES).expect("valid pattern")
}

/// Blows up a pattern: `m` vertices per part (`X1..Xm`, part-major), and an
/// edge on three distinct vertices whose parts form a pattern triple.
pub fn pattern_blowup(pattern: &PartPattern, m: usize, caps: Caps) -> Result<ThreeGraph> {
    if m == 0 {
        return Err(Error::BadParams("part size must be at least 1".into()));
    }
    let m128 = m as u128;
    let vertices = pattern.parts() as u128 * m128;
    let edges: u128 = pattern
        .triples()
        .iter()
        .map(|t| {
            if t[0] == t[1] && t[1] == t[2] {
                m128 * m128.saturating_sub(1) * m128.saturating_sub(2) / 6
            } else if t[0] == t[1] || t[1] == t[2] {
                m128 * m128.saturating_sub(1) / 2 * m128
            } else {
                m128 * m128 * m128
            }
        })
        .sum();
    for (what, requested, cap) in [
        ("pattern blow-up vertex count", vertices, caps.vertices),
        ("pattern blow-up edge count", edges, caps.edges),
    ] {
        if requested > cap {
            return Err(Error::TooLarge { what, requested, cap });
        }
    }
    let mut out = BTreeSet::new();
    for t in pattern.triples() {
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let e = [t[0] * m + i, t[1] * m + j, t[2] * m + k];
                    if e[0] != e[1] && e[1] != e[2] && e[0] != e[2] {
                        let mut s = e;
                        s.sort_unstable();
                        out.insert(s);
                    }
                }
            }
        }
    }
    let names = (0..pattern.parts())
        .flat_map(|p| (1..=m).map(move |i| (p, i)))
        .map(|(p, i)| format!("{}{}", pattern.label(p), i))
        .collect();
    ThreeGraph::new(pattern.parts() * m, out)?.with_names(names)
}

pub fn twelve_part_construction(m: usize) -> Result<(PartPattern, ThreeGraph)> {
    let pattern = twelve_part_pattern();
    let g = pattern_blowup(&pattern, m, Caps::DEFAULT)?;
    Ok((pattern, g))
}

/// Maps from the vertices of `f` to pattern parts under which every edge
/// lands on a pattern triple.
struct Homomorphisms<'a> {
    f: &'a ThreeGraph,
    pattern: &'a PartPattern,
    order: Vec<Vertex>,
}

impl<'a> Homomorphisms<'a> {
    fn new(f: &'a ThreeGraph, pattern: &'a PartPattern) -> Self {
        let n = f.n();
        let mut order = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        while order.len() < n {
            let next = (0..n)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| {
                    let closes = f
                        .incident_edges(v)
                        .iter()
                        .filter(|&&ei| f.edges()[ei].iter().all(|&x| x == v || placed[x]))
                        .count();
                    (closes, f.degree(v), std::cmp::Reverse(v))
                })
                .expect("unplaced vertex");
            placed[next] = true;
            order.push(next);
        }
        Homomorphisms { f, pattern, order }
    }

    fn fits(&self, map: &[Option<usize>], v: Vertex) -> bool {
        self.f.incident_edges(v).iter().all(|&ei| {
            let e = self.f.edges()[ei];
            match (map[e[0]], map[e[1]], map[e[2]]) {
                (Some(a), Some(b), Some(c)) => self.pattern.contains([a, b, c]),
                _ => true,
            }
        })
    }

    /// Calls `visit` on every homomorphism in search order; stops early when
    /// it returns `false`.
    fn run(&self, visit: &mut dyn FnMut(&[usize]) -> bool) {
        let mut map = vec![None; self.f.n()];
        self.extend(0, &mut map, visit);
    }

    fn extend(&self, depth: usize, map: &mut Vec<Option<usize>>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let Some(&v) = self.order.get(depth) else {
            let full: Vec<usize> = map.iter().map(|p| p.expect("complete")).collect();
            return visit(&full);
        };
        for part in 0..self.pattern.parts() {
            map[v] = Some(part);
            if self.fits(map, v) && !self.extend(depth + 1, map, visit) {
                map[v] = None;
                return false;
            }
        }
        map[v] = None;
        true
    }
}

/// Some map from `V(F)` to parts sending every edge onto a pattern triple.
/// Such a map exists iff `F` embeds in the pattern blow-up with at least
/// `|V(F)|` vertices per part. The search is exhaustive.
pub fn pattern_homomorphism(f: &ThreeGraph, pattern: &PartPattern) -> Option<Vec<usize>> {
    let mut found = None;
    Homomorphisms::new(f, pattern).run(&mut |m| {
        found = Some(m.to_vec());
        false
    });
    found
}

/// Every such map.
pub fn pattern_homomorphisms(f: &ThreeGraph, pattern: &PartPattern) -> Vec<Vec<usize>> {
    let mut all = Vec::new();
    Homomorphisms::new(f, pattern).run(&mut |m| {
        all.push(m.to_vec());
        true
    });
    all
}

/// The parts vertex `v` reaches over all homomorphisms.
pub fn homomorphism_images(f: &ThreeGraph, pattern: &PartPattern, v: Vertex) -> BTreeSet<usize> {
    pattern_homomorphisms(f, pattern)
        .into_iter()
        .map(|m| m[v])
        .collect()
}

/// All `k`-vertex 3-graphs with every pair in at least two edges, one per
/// isomorphism class.
pub fn enumerate_min_codegree_family(k: usize) -> Result<Vec<ThreeGraph>> {
    let triples: Vec<[usize; 3]> = (0..k)
        .flat_map(|a| (a + 1..k).flat_map(move |b| (b + 1..k).map(move |c| [a, b, c])))
        .collect();
    if k > 5 {
        return Err(Error::TooLarge {
            what: "edge subsets to enumerate",
            requested: 1u128 << triples.len().min(127),
            cap: 1 << 10,
        });
    }
    let mut family: Vec<ThreeGraph> = Vec::new();
    for mask in 0u32..1 << triples.len() {
        let edges = triples
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, t)| *t);
        let g = ThreeGraph::new(k, edges)?;
        if g.min_codegree() < 2 {
            continue;
        }
        let mut new = true;
        for h in &family {
            if is_isomorphic(h, &g)?.is_some() {
                new = false;
                break;
            }
        }
        if new {
            family.push(g);
        }
    }
    Ok(family)
}

/// The tensor product of the minimum-codegree-two family on `k` vertices.
pub fn build_tensor_counterexample(k: usize) -> Result<ThreeGraph> {
    build_tensor_counterexample_capped(k, Caps::DEFAULT)
}

pub fn build_tensor_counterexample_capped(k: usize, caps: Caps) -> Result<ThreeGraph> {
    let family = enumerate_min_codegree_family(k)?;
    if family.is_empty() {
        return Err(Error::BadParams(format!(
            "no {k}-vertex 3-graph has minimum codegree two"
        )));
    }
    tensor_product_capped(&family, caps)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformEstimate {
    /// Least induced edge density over the sampled subsets.
    pub d_hat: f64,
    pub samples: usize,
    pub min_subset_fraction: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityReport {
    pub n: usize,
    pub edges: usize,
    pub edge_density: f64,
    pub min_codegree: usize,
    pub uniform_estimate: UniformEstimate,
}

impl fmt::Display for DensityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = &self.uniform_estimate;
        writeln!(f, "n={}", self.n)?;
        writeln!(f, "edges={}", self.edges)?;
        writeln!(f, "edge_density={:.6}", self.edge_density)?;
        writeln!(f, "min_codegree={}", self.min_codegree)?;
        writeln!(f, "d_hat={:.6}", u.d_hat)?;
        writeln!(f, "samples={}", u.samples)?;
        writeln!(f, "min_subset_fraction={}", u.min_subset_fraction)?;
        writeln!(f, "seed={}", u.seed)
    }
}

fn choose3(n: usize) -> f64 {
    let n = n as f64;
    n * (n - 1.0) * (n - 2.0) / 6.0
}

fn ln_choose(n: usize, k: usize) -> f64 {
    let ln_fact = |x: usize| (1..=x).map(|i| (i as f64).ln()).sum::<f64>();
    ln_fact(n) - ln_fact(k) - ln_fact(n - k)
}

/// Exact edge density and minimum codegree, plus an estimate of the uniform
/// density: the least induced density over random vertex subsets `U`, drawn
/// uniformly from all subsets with `|U| >= max(3, ⌈c·n⌉)`. Sample `i` uses
/// its own stream derived from `(seed, i)`.
pub fn density_estimates(h: &ThreeGraph, samples: usize, min_subset_fraction: f64, seed: u64) -> Result<DensityReport> {
    let n = h.n();
    if samples == 0 {
        return Err(Error::BadParams("at least one sample is needed".into()));
    }
    if !(0.0..=1.0).contains(&min_subset_fraction) {
        return Err(Error::BadParams("subset fraction must lie in [0, 1]".into()));
    }
    if n < 3 {
        return Err(Error::BadParams("density needs at least 3 vertices".into()));
    }
    let min_size = ((min_subset_fraction * n as f64).ceil() as usize).clamp(3, n);
    // subset sizes weighted by how many subsets have that size
    let logs: Vec<f64> = (min_size..=n).map(|k| ln_choose(n, k)).collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = weights.iter().sum();

    let d_hat = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = SplitMix64::stream(seed, i);
            let mut x = rng.next_f64() * total;
            let mut size = n;
            for (j, w) in weights.iter().enumerate() {
                if x < *w {
                    size = min_size + j;
                    break;
                }
                x -= w;
            }
            let mut inside = vec![false; n];
            for v in rng.subset(n, size) {
                inside[v] = true;
            }
            let count = h
                .edges()
                .iter()
                .filter(|e| e.iter().all(|&v| inside[v]))
                .count();
            count as f64 / choose3(size)
        })
        .reduce(|| f64::INFINITY, f64::min);

    Ok(DensityReport {
        n,
        edges: h.edge_count(),
        edge_density: h.edge_count() as f64 / choose3(n),
        min_codegree: h.min_codegree(),
        uniform_estimate: UniformEstimate {
            d_hat,
            samples,
            min_subset_fraction,
            seed,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    #[test]
    fn rb_is_deterministic_and_follows_the_rule() {
        let a = rb_construction(30, 11).unwrap();
        assert_eq!(a, rb_construction(30, 11).unwrap());
        assert_ne!(a, rb_construction(30, 12).unwrap());
        // replay the colouring and check every triple
        let mut rng = SplitMix64::new(11);
        let n = 30;
        let mut red = vec![vec![false; n]; n];
        for r in 0..n {
            for s in r + 1..n {
                red[r][s] = rng.below(3) < 2;
            }
        }
        for r in 0..n {
            for s in r + 1..n {
                for t in s + 1..n {
                    assert_eq!(a.has_edge(r, s, t), red[r][s] && red[r][t] && !red[s][t]);
                }
            }
        }
        assert!(rb_construction(2, 0).is_err());
    }

    #[test]
    fn twelve_part_pattern_counts() {
        let p = twelve_part_pattern();
        assert_eq!(p.triples().len(), 30);
        let repeated = p
            .triples()
            .iter()
            .filter(|t| t[0] == t[1] || t[1] == t[2])
            .count();
        assert_eq!(repeated, 12);
        let cov = p.pair_coverage();
        assert_eq!(cov.len(), 78);
        assert!(cov.values().all(|&c| c == 1));
        // in every XXY triple, Y is among A..E
        for t in p.triples() {
            if t[0] == t[1] {
                assert!(t[2] < 5 || t[2] == t[0]);
            }
            if t[1] == t[2] {
                assert!(t[0] < 5);
            }
        }
    }

    #[test]
    fn twelve_part_graph_matches_the_pattern() {
        let (p, g) = twelve_part_construction(3).unwrap();
        assert_eq!(g.n(), 36);
        let part = |v: usize| v / 3;
        for a in 0..36 {
            for b in a + 1..36 {
                for c in b + 1..36 {
                    assert_eq!(g.has_edge(a, b, c), p.contains([part(a), part(b), part(c)]));
                }
            }
        }
        assert_eq!(g.name(0), "A1");
        assert_eq!(g.name(35), "L3");
    }

    #[test]
    fn twelve_part_min_codegree() {
        // a pair across an XXY triple sees only the other m - 1 vertices of X
        for m in 2..6 {
            let (_, g) = twelve_part_construction(m).unwrap();
            assert_eq!(g.min_codegree(), m - 1);
        }
        assert!(twelve_part_construction(0).is_err());
        assert!(matches!(
            twelve_part_construction(1000),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn homomorphisms_for_the_section_example() {
        let p = twelve_part_pattern();
        let f1 = named::f1();
        let e1 = f1.index_of("e").unwrap();
        let imgs = homomorphism_images(&f1, &p, e1);
        assert!(!imgs.is_empty());
        assert!(imgs.iter().all(|&x| x < 5));

        let f2 = named::f2();
        let e2 = f2.index_of("e").unwrap();
        let imgs = homomorphism_images(&f2, &p, e2);
        assert!(!imgs.is_empty());
        assert!(imgs.iter().all(|&x| x >= 5));

        assert!(pattern_homomorphism(&named::f_union(), &p).is_none());
        for m in pattern_homomorphisms(&f1, &p) {
            for e in f1.edges() {
                assert!(p.contains([m[e[0]], m[e[1]], m[e[2]]]));
            }
        }
    }

    #[test]
    fn family_examples() {
        assert!(enumerate_min_codegree_family(3).unwrap().is_empty());
        let f4 = enumerate_min_codegree_family(4).unwrap();
        assert_eq!(f4.len(), 1);
        assert!(is_isomorphic(&f4[0], &named::k4()).unwrap().is_some());
        // complements are the linear 3-graphs on 5 vertices: none, one edge,
        // or two edges meeting in a vertex
        let f5 = enumerate_min_codegree_family(5).unwrap();
        let mut sizes: Vec<usize> = f5.iter().map(|g| g.edge_count()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![8, 9, 10]);
        for (i, g) in f5.iter().enumerate() {
            assert!(g.min_codegree() >= 2);
            for h in &f5[i + 1..] {
                assert!(is_isomorphic(g, h).unwrap().is_none());
            }
        }
        assert!(matches!(
            enumerate_min_codegree_family(6),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn tensor_counterexample_examples() {
        let t4 = build_tensor_counterexample(4).unwrap();
        assert!(is_isomorphic(&t4, &named::k4()).unwrap().is_some());
        let size = enumerate_min_codegree_family(5).unwrap().len() as u32;
        let t5 = build_tensor_counterexample(5).unwrap();
        assert_eq!(t5.n(), 5usize.pow(size));
        assert_eq!(t5.edge_count(), 10 * 9 * 8 * 36);
        let tight = Caps { vertices: 100, edges: u128::MAX };
        match build_tensor_counterexample_capped(5, tight) {
            Err(Error::TooLarge { requested, .. }) => assert_eq!(requested, 5u128.pow(size)),
            other => panic!("expected a size error, got {other:?}"),
        }
    }

    #[test]
    fn density_examples() {
        let k = named::complete(8).unwrap();
        let r = density_estimates(&k, 20, 0.5, 1).unwrap();
        assert_eq!(r.edge_density, 1.0);
        assert_eq!(r.uniform_estimate.d_hat, 1.0);
        assert_eq!(r.min_codegree, 6);

        let e = ThreeGraph::empty(10);
        let r = density_estimates(&e, 5, 0.3, 1).unwrap();
        assert_eq!((r.edge_density, r.uniform_estimate.d_hat), (0.0, 0.0));

        let g = rb_construction(40, 5).unwrap();
        let a = density_estimates(&g, 50, 0.25, 9).unwrap();
        let b = density_estimates(&g, 50, 0.25, 9).unwrap();
        assert_eq!(a, b);
        assert!(a.uniform_estimate.d_hat <= 1.0 && a.min_codegree <= 38);
        assert!(density_estimates(&g, 0, 0.25, 9).is_err());
        let text = a.to_string();
        assert!(text.starts_with("n=40\nedges="));
        assert!(text.ends_with("seed=9\n"));
    }
}
