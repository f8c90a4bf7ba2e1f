//! Test corpora: every 3-graph on few vertices up to isomorphism, seeded
//! random 3-graphs, and the tripartite 3-graphs on at most six vertices.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::hypergraph::ThreeGraph;
use crate::rng::SplitMix64;

/// Largest vertex count for exhaustive enumeration.
pub const MAX_EXHAUSTIVE: usize = 6;

fn triples(n: usize) -> Vec<[usize; 3]> {
    (0..n)
        .flat_map(|a| (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| [a, b, c])))
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Edge sets on `n ≤ 6` vertices as bitmasks over [`triples`], with a
/// canonical form under vertex permutations.
struct Canon {
    n: usize,
    triples: Vec<[usize; 3]>,
    /// `images[p][i]`: the bit of triple `i` under permutation `p`.
    images: Vec<Vec<u32>>,
}

impl Canon {
    fn new(n: usize) -> Self {
        assert!(n <= MAX_EXHAUSTIVE);
        let ts = triples(n);
        let position = |mut t: [usize; 3]| {
            t.sort_unstable();
            ts.iter().position(|&x| x == t).expect("a triple")
        };
        let images = permutations(n)
            .iter()
            .map(|p| {
                ts.iter()
                    .map(|t| 1u32 << position([p[t[0]], p[t[1]], p[t[2]]]))
                    .collect()
            })
            .collect();
        Canon { n, triples: ts, images }
    }

    fn canonical(&self, mask: u32) -> u32 {
        self.images
            .iter()
            .map(|img| {
                img.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .fold(0, |acc, (_, b)| acc | b)
            })
            .min()
            .expect("at least one permutation")
    }

    fn graph(&self, mask: u32) -> ThreeGraph {
        let edges = self
            .triples
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, t)| *t);
        ThreeGraph::new(self.n, edges).expect("valid edges")
    }

    fn mask_of(&self, g: &ThreeGraph) -> u32 {
        g.edges()
            .iter()
            .map(|e| 1u32 << self.triples.iter().position(|t| t == e).expect("a triple"))
            .fold(0, |a, b| a | b)
    }
}

/// One representative of every isomorphism class of 3-graphs on exactly `n`
/// vertices, in increasing order of canonical edge mask.
pub fn isomorphism_classes(n: usize) -> Result<Vec<ThreeGraph>> {
    if n > 5 {
        return Err(Error::TooLarge {
            what: "edge subsets to enumerate",
            requested: 1u128 << triples(n).len(),
            cap: 1 << 10,
        });
    }
    let canon = Canon::new(n);
    let reps: BTreeSet<u32> = (0..1u32 << canon.triples.len())
        .map(|m| canon.canonical(m))
        .collect();
    Ok(reps.into_iter().map(|m| canon.graph(m)).collect())
}

/// Every isomorphism class on `1..=max_n` vertices.
pub fn small_classes(max_n: usize) -> Result<Vec<ThreeGraph>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(isomorphism_classes(n)?);
    }
    Ok(out)
}

/// Each triple of `[n]` independently with probability `p`, one draw per
/// triple in lexicographic order.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<ThreeGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::BadParams(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = SplitMix64::new(seed);
    let edges: Vec<[usize; 3]> = triples(n).into_iter().filter(|_| rng.next_f64() < p).collect();
    ThreeGraph::new(n, edges)
}

/// `count` random graphs; graph `i` has a vertex count drawn from
/// `min_n..=max_n` and an edge probability from `probabilities`, both from
/// the stream `(seed, i)`.
pub fn random_corpus(
    count: usize,
    min_n: usize,
    max_n: usize,
    probabilities: &[f64],
    seed: u64,
) -> Result<Vec<ThreeGraph>> {
    if min_n > max_n || probabilities.is_empty() {
        return Err(Error::BadParams("empty vertex range or probability list".into()));
    }
    (0..count as u64)
        .map(|i| {
            let mut rng = SplitMix64::stream(seed, i);
            let n = min_n + rng.below((max_n - min_n + 1) as u64) as usize;
            let p = probabilities[rng.below(probabilities.len() as u64) as usize];
            random_graph(n, p, rng.next_u64())
        })
        .collect()
}

/// Tripartite 3-graphs with at least one edge on `3..=max_n` vertices, one per
/// isomorphism class: every edge meets each of three vertex classes once.
pub fn tripartite_corpus(max_n: usize) -> Result<Vec<ThreeGraph>> {
    if max_n > MAX_EXHAUSTIVE {
        return Err(Error::TooLarge {
            what: "tripartite corpus vertex count",
            requested: max_n as u128,
            cap: MAX_EXHAUSTIVE as u128,
        });
    }
    let mut out = Vec::new();
    for n in 3..=max_n {
        let canon = Canon::new(n);
        let mut seen = BTreeSet::new();
        for a in 1..=n {
            for b in a..=n {
                if a + b >= n {
                    break;
                }
                let c = n - a - b;
                if c < b {
                    continue;
                }
                let crossing: Vec<[usize; 3]> = (0..a)
                    .flat_map(|x| {
                        (a..a + b).flat_map(move |y| (a + b..n).map(move |z| [x, y, z]))
                    })
                    .collect();
                for m in 1u32..1 << crossing.len() {
                    let edges = crossing
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| m >> i & 1 == 1)
                        .map(|(_, t)| *t);
                    let g = ThreeGraph::new(n, edges)?;
                    if seen.insert(canon.canonical(canon.mask_of(&g))) {
                        out.push(g);
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::is_isomorphic;

    #[test]
    fn class_counts() {
        // 3-graphs on n unlabeled vertices: 1, 1, 2, 5, 34
        let counts: Vec<usize> = (1..=5).map(|n| isomorphism_classes(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 34]);
        assert!(isomorphism_classes(6).is_err());
    }

    #[test]
    fn classes_are_pairwise_non_isomorphic() {
        let g4 = isomorphism_classes(4).unwrap();
        for (i, a) in g4.iter().enumerate() {
            for b in &g4[i + 1..] {
                assert!(is_isomorphic(a, b).unwrap().is_none());
            }
        }
    }

    #[test]
    fn random_graphs_are_reproducible() {
        let a = random_corpus(20, 6, 7, &[0.2, 0.4], 3).unwrap();
        assert_eq!(a, random_corpus(20, 6, 7, &[0.2, 0.4], 3).unwrap());
        assert!(a.iter().all(|g| (6..=7).contains(&g.n())));
        assert_eq!(random_graph(6, 1.0, 0).unwrap().edge_count(), 20);
        assert_eq!(random_graph(6, 0.0, 0).unwrap().edge_count(), 0);
    }

    #[test]
    fn tripartite_corpus_shape() {
        let c = tripartite_corpus(4).unwrap();
        // one edge on 3 vertices; on 4 vertices: one edge plus an isolated
        // vertex, or two edges sharing a pair
        assert_eq!(c.len(), 3);
        let c6 = tripartite_corpus(6).unwrap();
        for (i, a) in c6.iter().enumerate() {
            assert!(a.edge_count() >= 1);
            for b in c6[i + 1..].iter().filter(|b| b.n() == a.n()) {
                assert!(is_isomorphic(a, b).unwrap().is_none());
            }
        }
        assert!(c6.iter().any(|g| g.n() == 6 && g.edge_count() == 8));
    }
}
