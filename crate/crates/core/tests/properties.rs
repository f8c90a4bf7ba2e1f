//! Property tests: searches against brute-force oracles, and invariants of
//! the transformations and file formats.

use std::collections::BTreeSet;

use proptest::prelude::*;

use hgt_core::corpus::small_classes;
use hgt_core::embed::{find_embedding, is_embedding, EmbeddingMode, EmbeddingProblem};
use hgt_core::format::{parse_graph, serialize_graph};
use hgt_core::layered::{
    find_layered_function, is_linear, layer_decomposition, linearize_vertex, reduce_semi_layered,
    s_union, semi_layered_functions, validate_layer_function, LayerFunction,
};
use hgt_core::orderings::{has_monotone_p3, is_half_bipartite};
use hgt_core::uniform::{
    certify_uniform_zero_b2, certify_uniform_zero_links, forced_coloring, verify_uniform_certificate,
};
use hgt_core::{Graph, Labeling, ThreeGraph};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = ThreeGraph> {
    (3..=max_n).prop_flat_map(|n| {
        let triples: Vec<[usize; 3]> = (0..n)
            .flat_map(|a| (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| [a, b, c])))
            .collect();
        let m = triples.len();
        prop::collection::vec(any::<bool>(), m).prop_map(move |keep| {
            let edges = triples.iter().zip(&keep).filter(|(_, k)| **k).map(|(t, _)| *t);
            ThreeGraph::new(n, edges).unwrap()
        })
    })
}

fn sparse_graph_strategy(max_n: usize) -> impl Strategy<Value = ThreeGraph> {
    (3..=max_n).prop_flat_map(|n| {
        let triples: Vec<[usize; 3]> = (0..n)
            .flat_map(|a| (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| [a, b, c])))
            .collect();
        let m = triples.len();
        prop::collection::vec(prop::bool::weighted(0.25), m).prop_map(move |keep| {
            let edges = triples.iter().zip(&keep).filter(|(_, k)| **k).map(|(t, _)| *t);
            ThreeGraph::new(n, edges).unwrap()
        })
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Some function `V -> 1..=n` satisfying A1-A3, by exhaustion.
fn brute_force_layered(f: &ThreeGraph) -> bool {
    let n = f.n();
    let total = n.pow(n as u32);
    (0..total).any(|mut code| {
        let values: Vec<usize> = (0..n)
            .map(|_| {
                let x = code % n;
                code /= n;
                x
            })
            .collect();
        validate_layer_function(f, &LayerFunction::new(&values))
            .unwrap()
            .is_layered()
    })
}

/// Some labeling with a consistent forced coloring, by exhaustion.
fn brute_force_b2(f: &ThreeGraph) -> bool {
    permutations(f.n()).iter().any(|order| {
        let sigma = Labeling::from_order(order).unwrap();
        forced_coloring(f, &sigma).unwrap().is_some()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn layered_search_matches_exhaustion(f in graph_strategy(5)) {
        let out = find_layered_function(&f).unwrap();
        prop_assert!(out.stats.complete);
        prop_assert_eq!(out.found.is_some(), brute_force_layered(&f));
        if let Some(lf) = out.found {
            prop_assert!(validate_layer_function(&f, &lf).unwrap().is_layered());
        }
    }

    #[test]
    fn coloring_search_matches_exhaustion(f in graph_strategy(6)) {
        let out = certify_uniform_zero_b2(&f).unwrap();
        prop_assert!(out.stats.complete);
        prop_assert_eq!(out.found.is_some(), brute_force_b2(&f));
        if let Some(cert) = out.found {
            prop_assert!(verify_uniform_certificate(&f, &cert).unwrap());
        }
    }

    #[test]
    fn coloring_and_link_criteria_agree(f in sparse_graph_strategy(7)) {
        let b2 = certify_uniform_zero_b2(&f).unwrap();
        let links = certify_uniform_zero_links(&f).unwrap();
        prop_assert!(b2.stats.complete && links.stats.complete);
        prop_assert_eq!(b2.found.is_some(), links.found.is_some());
    }

    #[test]
    fn embedding_counts_match_exhaustion(
        pattern in graph_strategy(3).prop_filter("has an edge", |g| g.edge_count() > 0),
        host in graph_strategy(6),
    ) {
        let r = find_embedding(&EmbeddingProblem::new(&pattern, &host).with_mode(EmbeddingMode::Count));
        let n = host.n();
        let mut brute = 0u64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    brute += u64::from(is_embedding(&pattern, &host, &[a, b, c]));
                }
            }
        }
        prop_assert!(r.complete);
        prop_assert_eq!(r.count.unwrap().embeddings, brute);
        let found = find_embedding(&EmbeddingProblem::new(&pattern, &host));
        prop_assert_eq!(found.found.is_some(), brute > 0);
    }

    #[test]
    fn graph_files_round_trip(f in graph_strategy(8)) {
        let text = serialize_graph(&f).unwrap();
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(serialize_graph(&back).unwrap(), text);
    }

    #[test]
    fn half_bipartite_graphs_are_bipartite(
        n in 1usize..=7,
        mask in any::<u32>(),
        seed in any::<u64>(),
    ) {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let g = Graph::new(n, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| *p)).unwrap();
        let mut order: Vec<usize> = (0..n).collect();
        let mut rng = hgt_core::rng::SplitMix64::new(seed);
        for i in (1..n).rev() {
            order.swap(i, rng.below(i as u64 + 1) as usize);
        }
        let sigma = Labeling::from_order(&order).unwrap();
        if is_half_bipartite(&g, &sigma) {
            prop_assert!(g.is_bipartite());
        } else {
            prop_assert!(has_monotone_p3(&g, &sigma).is_some());
        }
    }

    #[test]
    fn linearizing_a_vertex_removes_its_shared_pairs(f in sparse_graph_strategy(6)) {
        for v in (0..f.n()).filter(|&v| f.degree(v) > 0) {
            let g = linearize_vertex(&f, v).unwrap();
            let link = f.link_graph(v).unwrap();
            prop_assert_eq!(g.n(), f.n() - 1 + 4 * link.edge_count() + 3);
            prop_assert_eq!(g.edge_count(), f.edge_count() + 6 * link.edge_count());
            // the vertices added for v never share a pair with anyone
            for a in f.n() - 1..g.n() {
                for b in 0..g.n() {
                    if a != b {
                        prop_assert!(g.codegree(a, b) <= 1);
                    }
                }
            }
        }
        prop_assert_eq!(is_linear(&f), (0..f.n()).all(|u| (u + 1..f.n()).all(|w| f.codegree(u, w) <= 1)));
    }
}

#[test]
fn every_semi_layered_function_reduces_to_a_layered_one() {
    for f in small_classes(4).unwrap() {
        let (functions, complete) = semi_layered_functions(&f, usize::MAX).unwrap();
        assert!(complete);
        let brute: BTreeSet<Vec<usize>> = {
            let n = f.n();
            (0..n.pow(n as u32))
                .map(|mut code| {
                    let v: Vec<usize> = (0..n)
                        .map(|_| {
                            let x = code % n;
                            code /= n;
                            x
                        })
                        .collect();
                    LayerFunction::new(&v)
                })
                .filter(|lf| validate_layer_function(&f, lf).unwrap().is_semi_layered())
                .map(|lf| lf.values().to_vec())
                .collect()
        };
        let found: BTreeSet<Vec<usize>> = functions.iter().map(|lf| lf.values().to_vec()).collect();
        assert_eq!(found, brute, "semi-layered functions of {f:?}");
        for lf in &functions {
            let r = reduce_semi_layered(&f, lf).unwrap();
            assert!(r.cardinalities.windows(2).all(|w| w[1] < w[0]));
            assert!(validate_layer_function(&f, &r.function).unwrap().is_layered());
        }
    }
}

#[test]
fn unions_over_unlinked_layers_keep_vanishing_density() {
    let mut checked = 0;
    for f in small_classes(5).unwrap() {
        if f.edge_count() == 0 || certify_uniform_zero_b2(&f).unwrap().found.is_none() {
            continue;
        }
        let Some(lf) = find_layered_function(&f).unwrap().found else {
            continue;
        };
        let d = layer_decomposition(&f, &lf).unwrap();
        let in_linked: BTreeSet<usize> = d.linked_pairs.iter().flat_map(|&(i, j)| [i, j]).collect();
        let free: BTreeSet<usize> = (1..=lf.layer_count()).filter(|l| !in_linked.contains(l)).collect();
        // one linked layer may join the free ones without closing a linked pair
        let mut choices = vec![free.clone()];
        for &l in &in_linked {
            let mut s = free.clone();
            s.insert(l);
            choices.push(s);
        }
        for shared in choices {
            let u = s_union(&[f.clone(), f.clone()], &lf, &shared).unwrap();
            assert!(!u.shared_linked_pair);
            let out = certify_uniform_zero_b2(&u.graph).unwrap();
            assert!(out.found.is_some(), "union of {f:?} over {shared:?} lost vanishing density");
            checked += 1;
        }
    }
    assert!(checked > 0);
}
