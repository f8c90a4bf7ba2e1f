//! Generators for the named 3-graphs used throughout the crate.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hypergraph::{Graph, ThreeGraph};
use crate::orderings::{complete_half_bipartite, Labeling};

/// Names accepted by [`generate_named`], with their parameters.
pub const NAMES: &[(&str, &str)] = &[
    ("edge", "a single edge"),
    ("K", "complete 3-graph, n=<vertices>"),
    ("K4-3", "K4^(3)"),
    ("K4-3-minus", "K4^(3) with one edge removed"),
    ("C", "tight cycle, l=<length> (l >= 4)"),
    ("C-minus", "tight cycle minus an edge, l=<length> (l >= 5)"),
    ("Z", "zycle, r=<length> (r >= 3)"),
    ("Z-minus", "zycle minus an edge, r=<length> (r >= 3)"),
    ("fano", "Fano plane"),
    ("fano-minus", "Fano plane minus the edge x_v y_v z_v"),
    ("F32", "F_{3,2} = {123,124,125,345}"),
    ("F1", "{abc, abd, cde}"),
    ("F2", "{fgh, fgi, hij, hik, jkl, ehl}"),
    ("F", "F1 and F2 glued at e"),
    ("Ktt", "complete tripartite K(t1,t2,t3), t=<size> or t1,t2,t3"),
    ("B", "complete half-bipartite graph with its order, k=<k>"),
];

/// Output of [`generate_named`]: `B` is an ordered 2-graph, everything else
/// a 3-graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Named {
    Three(ThreeGraph),
    Ordered(Graph, Labeling),
}

pub type Params = BTreeMap<String, usize>;

fn param(params: &Params, key: &str) -> Result<usize> {
    params
        .get(key)
        .copied()
        .ok_or_else(|| Error::BadParams(format!("missing parameter {key}")))
}

pub fn generate_named(name: &str, params: &Params) -> Result<Named> {
    let g = match name {
        "edge" => single_edge(),
        "K" => complete(param(params, "n")?)?,
        "K4-3" => k4(),
        "K4-3-minus" => k4_minus(),
        "C" => tight_cycle(param(params, "l")?)?,
        "C-minus" => c_minus(param(params, "l")?)?,
        "Z" => zycle(param(params, "r")?)?,
        "Z-minus" => z_minus(param(params, "r")?)?,
        "fano" => fano(),
        "fano-minus" => fano_minus(),
        "F32" => f32_graph(),
        "F1" => f1(),
        "F2" => f2(),
        "F" => f_union(),
        "Ktt" => {
            if let Some(&t) = params.get("t") {
                complete_tripartite(t, t, t)?
            } else {
                complete_tripartite(
                    param(params, "t1")?,
                    param(params, "t2")?,
                    param(params, "t3")?,
                )?
            }
        }
        "B" => {
            let k = param(params, "k")?;
            if k == 0 {
                return Err(Error::BadParams("B needs k >= 1".into()));
            }
            let (g, sigma) = complete_half_bipartite(k);
            return Ok(Named::Ordered(g, sigma));
        }
        other => return Err(Error::UnknownName(other.to_string())),
    };
    Ok(Named::Three(g))
}

fn numbered(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

pub fn single_edge() -> ThreeGraph {
    ThreeGraph::new(3, [[0, 1, 2]])
        .and_then(|g| g.with_names(numbered(3)))
        .expect("valid")
}

pub fn complete(n: usize) -> Result<ThreeGraph> {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                edges.push([a, b, c]);
            }
        }
    }
    ThreeGraph::new(n, edges)?.with_names(numbered(n))
}

pub fn k4() -> ThreeGraph {
    complete(4).expect("valid")
}

pub fn k4_minus() -> ThreeGraph {
    ThreeGraph::new(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3]])
        .and_then(|g| g.with_names(numbered(4)))
        .expect("valid")
}

/// Tight cycle on `1..=l` with edges `{i, i+1, i+2}` taken cyclically.
pub fn tight_cycle(l: usize) -> Result<ThreeGraph> {
    if l < 4 {
        return Err(Error::BadParams(format!("tight cycle needs l >= 4, got {l}")));
    }
    let edges = (0..l).map(|i| [i, (i + 1) % l, (i + 2) % l]);
    ThreeGraph::new(l, edges)?.with_names(numbered(l))
}

/// Tight cycle with the edge `{l-1, l, 1}` removed.
pub fn c_minus(l: usize) -> Result<ThreeGraph> {
    if l < 5 {
        return Err(Error::BadParams(format!("C-minus needs l >= 5, got {l}")));
    }
    let edges = (0..l)
        .filter(|&i| i != l - 2)
        .map(|i| [i, (i + 1) % l, (i + 2) % l]);
    ThreeGraph::new(l, edges)?.with_names(numbered(l))
}

fn zycle_names(r: usize) -> Vec<String> {
    (1..=r)
        .flat_map(|i| [format!("u{i}"), format!("v{i}")])
        .collect()
}

/// Zycle on `u1 v1 u2 v2 ...`: edges `u_i v_i u_{i+1}` and `u_i v_i v_{i+1}`
/// cyclically. `u_i` is vertex `2(i-1)`, `v_i` is `2(i-1)+1`.
pub fn zycle(r: usize) -> Result<ThreeGraph> {
    if r < 3 {
        return Err(Error::BadParams(format!("zycle needs r >= 3, got {r}")));
    }
    ThreeGraph::new(2 * r, zycle_edges(r))?.with_names(zycle_names(r))
}

fn zycle_edges(r: usize) -> Vec<[usize; 3]> {
    let mut edges = Vec::with_capacity(2 * r);
    for i in 0..r {
        let j = (i + 1) % r;
        edges.push([2 * i, 2 * i + 1, 2 * j]);
        edges.push([2 * i, 2 * i + 1, 2 * j + 1]);
    }
    edges
}

/// Zycle with the edge `u_r v_r v_1` removed.
pub fn z_minus(r: usize) -> Result<ThreeGraph> {
    if r < 3 {
        return Err(Error::BadParams(format!("Z-minus needs r >= 3, got {r}")));
    }
    let drop = [2 * (r - 1), 2 * (r - 1) + 1, 1];
    let edges = zycle_edges(r).into_iter().filter(|e| *e != drop);
    ThreeGraph::new(2 * r, edges)?.with_names(zycle_names(r))
}

const FANO_NAMES: [&str; 7] = ["x_v", "y_v", "z_v", "v", "x", "y", "z"];
const FANO_GADGET: [[&str; 3]; 6] = [
    ["x_v", "v", "x"],
    ["x_v", "y", "z"],
    ["y_v", "v", "y"],
    ["y_v", "x", "z"],
    ["z_v", "v", "z"],
    ["z_v", "x", "y"],
];

pub fn fano() -> ThreeGraph {
    let mut edges = FANO_GADGET.to_vec();
    edges.push(["x_v", "y_v", "z_v"]);
    ThreeGraph::from_named(&FANO_NAMES, &edges).expect("valid")
}

pub fn fano_minus() -> ThreeGraph {
    ThreeGraph::from_named(&FANO_NAMES, &FANO_GADGET).expect("valid")
}

/// The (2,1) partition of [`fano_minus`]: `({v, x, y, z}, {x_v, y_v, z_v})`.
pub fn fano_minus_partition() -> (Vec<usize>, Vec<usize>) {
    (vec![3, 4, 5, 6], vec![0, 1, 2])
}

pub fn f32_graph() -> ThreeGraph {
    ThreeGraph::new(5, [[0, 1, 2], [0, 1, 3], [0, 1, 4], [2, 3, 4]])
        .and_then(|g| g.with_names(numbered(5)))
        .expect("valid")
}

pub fn f1() -> ThreeGraph {
    ThreeGraph::from_named(
        &["a", "b", "c", "d", "e"],
        &[["a", "b", "c"], ["a", "b", "d"], ["c", "d", "e"]],
    )
    .expect("valid")
}

const F2_EDGES: [[&str; 3]; 6] = [
    ["f", "g", "h"],
    ["f", "g", "i"],
    ["h", "i", "j"],
    ["h", "i", "k"],
    ["j", "k", "l"],
    ["e", "h", "l"],
];

pub fn f2() -> ThreeGraph {
    ThreeGraph::from_named(&["e", "f", "g", "h", "i", "j", "k", "l"], &F2_EDGES).expect("valid")
}

/// `F1 ∪ F2` on the twelve vertices `a..l`, sharing `e`.
pub fn f_union() -> ThreeGraph {
    let mut edges = vec![["a", "b", "c"], ["a", "b", "d"], ["c", "d", "e"]];
    edges.extend_from_slice(&F2_EDGES);
    ThreeGraph::from_named(
        &["a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l"],
        &edges,
    )
    .expect("valid")
}

pub fn complete_tripartite(t1: usize, t2: usize, t3: usize) -> Result<ThreeGraph> {
    if t1 == 0 || t2 == 0 || t3 == 0 {
        return Err(Error::BadParams("part sizes must be at least 1".into()));
    }
    let mut edges = Vec::with_capacity(t1 * t2 * t3);
    for a in 0..t1 {
        for b in 0..t2 {
            for c in 0..t3 {
                edges.push([a, t1 + b, t1 + t2 + c]);
            }
        }
    }
    let names = (1..=t1)
        .map(|i| format!("a{i}"))
        .chain((1..=t2).map(|i| format!("b{i}")))
        .chain((1..=t3).map(|i| format!("c{i}")))
        .collect();
    ThreeGraph::new(t1 + t2 + t3, edges)?.with_names(names)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_words(g: &ThreeGraph) -> Vec<String> {
        let mut out: Vec<String> = g
            .edges()
            .iter()
            .map(|e| e.iter().map(|&v| g.name(v)).collect::<Vec<_>>().join(""))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn generate_by_name() {
        let p = Params::new();
        match generate_named("K4-3", &p).unwrap() {
            Named::Three(g) => assert_eq!((g.n(), g.edge_count()), (4, 4)),
            _ => panic!(),
        }
        let mut p = Params::new();
        p.insert("r".into(), 3);
        match generate_named("Z-minus", &p).unwrap() {
            Named::Three(g) => {
                assert_eq!((g.n(), g.edge_count()), (6, 5));
                let expected = ThreeGraph::from_named(
                    &["u1", "v1", "u2", "v2", "u3", "v3"],
                    &[
                        ["u1", "v1", "u2"],
                        ["u1", "v1", "v2"],
                        ["u2", "v2", "u3"],
                        ["u2", "v2", "v3"],
                        ["u3", "v3", "u1"],
                    ],
                )
                .unwrap();
                assert_eq!(g, expected);
            }
            _ => panic!(),
        }
        let mut p = Params::new();
        p.insert("k".into(), 2);
        match generate_named("B", &p).unwrap() {
            Named::Ordered(g, _) => assert_eq!(g.edges(), &[(0, 1), (0, 3), (2, 3)]),
            _ => panic!(),
        }
        assert!(matches!(
            generate_named("nope", &Params::new()),
            Err(Error::UnknownName(_))
        ));
        let mut p = Params::new();
        p.insert("l".into(), 4);
        assert!(matches!(generate_named("C-minus", &p), Err(Error::BadParams(_))));
        assert!(matches!(generate_named("C", &Params::new()), Err(Error::BadParams(_))));
    }

    #[test]
    fn fano_is_a_steiner_triple_system() {
        let f = fano();
        assert_eq!(f.edge_count(), 7);
        for u in 0..7 {
            for v in u + 1..7 {
                assert_eq!(f.codegree(u, v), 1);
            }
        }
        assert_eq!(fano_minus().edge_count(), 6);
    }

    #[test]
    fn named_f_graphs() {
        assert_eq!(edge_words(&f1()), vec!["abc", "abd", "cde"]);
        assert_eq!(edge_words(&f2()), vec!["ehl", "fgh", "fgi", "hij", "hik", "jkl"]);
        assert_eq!(f_union().n(), 12);
        assert_eq!(f_union().edge_count(), 9);
        assert_eq!(edge_words(&f32_graph()), vec!["123", "124", "125", "345"]);
    }

    #[test]
    fn c_minus_drops_the_wraparound_edge() {
        let g = c_minus(5).unwrap();
        assert_eq!(edge_words(&g), vec!["123", "125", "234", "345"]);
        assert!(!g.has_edge(3, 4, 0));
        assert_eq!(tight_cycle(5).unwrap().edge_count(), 5);
    }

    #[test]
    fn tripartite_sizes() {
        let g = complete_tripartite(2, 2, 1).unwrap();
        assert_eq!((g.n(), g.edge_count()), (5, 4));
    }
}
