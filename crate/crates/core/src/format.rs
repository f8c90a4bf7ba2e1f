//! Text formats for 3-graphs, ordered 2-graphs and certificates.
//!
//! A 3-graph file:
//!
//! ```text
//! %3graph v1
//! # comment
//! vertices a b c d
//! edge a b c
//! edge a b d
//! ```
//!
//! Without a `vertices` line the tokens are indices `0..n`, with `n` one
//! more than the largest index used. Canonical output always carries the
//! `vertices` line, lists edges in sorted index order, separates tokens by
//! single spaces and ends with a newline.
//!
//! Certificates name vertices with the same tokens as their graph:
//!
//! ```text
//! %certificate uniform-zero
//! order c a b d
//! color a c red
//!
//! %certificate layered
//! layer a 1
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hypergraph::{Caps, Graph, ThreeGraph, Vertex};
use crate::layered::LayerFunction;
use crate::orderings::Labeling;
use crate::uniform::{Color, ShadowColoring, UniformZeroCertificate};

pub const GRAPH_HEADER: &str = "%3graph v1";
pub const ORDERED_GRAPH_HEADER: &str = "%2graph v1";
pub const UNIFORM_HEADER: &str = "%certificate uniform-zero";
pub const LAYERED_HEADER: &str = "%certificate layered";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    UniformZero(UniformZeroCertificate),
    Layered(LayerFunction),
}

/// A whitespace token with its 1-based column.
#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    col: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn err(&self, token: usize, msg: impl Into<String>) -> Error {
        let col = self.tokens.get(token).map_or(1, |t| t.col);
        Error::parse(self.number, col, msg)
    }

    fn keyword(&self) -> &'a str {
        self.tokens[0].text
    }

    fn args(&self) -> &[Token<'a>] {
        &self.tokens[1..]
    }

    fn expect_args(&self, count: usize) -> Result<()> {
        if self.args().len() != count {
            return Err(self.err(
                0,
                format!("`{}` takes {count} arguments, found {}", self.keyword(), self.args().len()),
            ));
        }
        Ok(())
    }
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..i],
                    col: line[..s].chars().count() + 1,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

/// Splits `text` into its header line and the remaining non-blank,
/// non-comment lines; the header must be the first such line.
fn lines_after_header<'a>(text: &'a str, header: &str) -> Result<Vec<Line<'a>>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| Line {
            number: i + 1,
            tokens: tokenize(l),
        })
        .filter(|l| !l.tokens.is_empty() && !l.tokens[0].text.starts_with('#'));
    let Some(first) = lines.next() else {
        return Err(Error::parse(1, 1, format!("missing header `{header}`")));
    };
    let found: Vec<&str> = first.tokens.iter().map(|t| t.text).collect();
    if found.join(" ") != header {
        return Err(first.err(0, format!("expected header `{header}`")));
    }
    Ok(lines.collect())
}

fn check_token(name: &str) -> Result<()> {
    if name.is_empty() || name.starts_with('#') || name.chars().any(char::is_whitespace) {
        return Err(Error::BadParams(format!(
            "vertex name {name:?} cannot be written as a token"
        )));
    }
    Ok(())
}

/// Vertex tokens resolved either by an explicit list or as indices.
struct Vertices {
    lookup: Option<HashMap<String, Vertex>>,
}

impl Vertices {
    fn resolve(&self, line: &Line<'_>, i: usize) -> Result<Vertex> {
        let text = line.tokens[i].text;
        match &self.lookup {
            Some(map) => map
                .get(text)
                .copied()
                .ok_or_else(|| line.err(i, format!("unknown vertex `{text}`"))),
            None => text
                .parse::<usize>()
                .ok()
                .filter(|&v| (v as u128) < Caps::DEFAULT.vertices)
                .ok_or_else(|| line.err(i, format!("`{text}` is not a vertex index below the cap"))),
        }
    }
}

/// Body lines, names from a `vertices` line (if any), and the resolver.
type VertexSection<'a, 'b> = (&'b [Line<'a>], Option<Vec<String>>, Vertices);

/// Reads an optional leading `vertices` line.
fn read_vertices<'a, 'b>(lines: &'b [Line<'a>]) -> Result<VertexSection<'a, 'b>> {
    match lines.first() {
        Some(l) if l.keyword() == "vertices" => {
            let mut lookup = HashMap::new();
            let mut names = Vec::new();
            for (i, t) in l.args().iter().enumerate() {
                if lookup.insert(t.text.to_string(), names.len()).is_some() {
                    return Err(l.err(i + 1, format!("vertex `{}` listed twice", t.text)));
                }
                names.push(t.text.to_string());
            }
            if let Some(later) = lines[1..].iter().find(|l| l.keyword() == "vertices") {
                return Err(later.err(0, "second `vertices` line"));
            }
            Ok((&lines[1..], Some(names), Vertices { lookup: Some(lookup) }))
        }
        _ => {
            if let Some(later) = lines.iter().find(|l| l.keyword() == "vertices") {
                return Err(later.err(0, "`vertices` must precede all edges"));
            }
            Ok((lines, None, Vertices { lookup: None }))
        }
    }
}

/// Names equal to `0..n` in order carry no information.
fn keep_names(names: Vec<String>) -> Option<Vec<String>> {
    let plain = names.iter().enumerate().all(|(i, s)| *s == i.to_string());
    (!plain).then_some(names)
}

pub fn parse_graph(text: &str) -> Result<ThreeGraph> {
    let lines = lines_after_header(text, GRAPH_HEADER)?;
    let (body, names, vertices) = read_vertices(&lines)?;
    let mut edges = Vec::with_capacity(body.len());
    let mut seen = HashMap::new();
    let mut max = None;
    for line in body {
        if line.keyword() != "edge" {
            return Err(line.err(0, format!("unknown directive `{}`", line.keyword())));
        }
        line.expect_args(3)?;
        let mut e = [0; 3];
        for (k, slot) in e.iter_mut().enumerate() {
            *slot = vertices.resolve(line, k + 1)?;
        }
        let mut s = e;
        s.sort_unstable();
        if s[0] == s[1] || s[1] == s[2] {
            return Err(line.err(1, "edge repeats a vertex"));
        }
        if let Some(first) = seen.insert(s, line.number) {
            return Err(line.err(0, format!("duplicate edge (first on line {first})")));
        }
        max = max.max(Some(s[2]));
        edges.push(s);
    }
    let n = match &names {
        Some(ns) => ns.len(),
        None => max.map_or(0, |m| m + 1),
    };
    let g = ThreeGraph::new(n, edges)?;
    match names.and_then(keep_names) {
        Some(ns) => g.with_names(ns),
        None => Ok(g),
    }
}

pub fn serialize_graph(g: &ThreeGraph) -> Result<String> {
    let names: Vec<String> = (0..g.n()).map(|v| g.name(v)).collect();
    for name in &names {
        check_token(name)?;
    }
    let mut out = String::new();
    writeln!(out, "{GRAPH_HEADER}").unwrap();
    out.push_str("vertices");
    for name in &names {
        write!(out, " {name}").unwrap();
    }
    out.push('\n');
    for e in g.edges() {
        writeln!(out, "edge {} {} {}", names[e[0]], names[e[1]], names[e[2]]).unwrap();
    }
    Ok(out)
}

/// Canonical form of a graph file.
pub fn canonicalize_graph(text: &str) -> Result<String> {
    serialize_graph(&parse_graph(text)?)
}

/// An ordered 2-graph: `vertices`, an optional `order` line listing the
/// vertices in increasing label order, and `edge u v` lines.
pub fn serialize_ordered_graph(g: &Graph, sigma: Option<&Labeling>) -> String {
    let mut out = String::new();
    writeln!(out, "{ORDERED_GRAPH_HEADER}").unwrap();
    out.push_str("vertices");
    for v in 0..g.n() {
        write!(out, " {v}").unwrap();
    }
    out.push('\n');
    if let Some(sigma) = sigma {
        out.push_str("order");
        for v in sigma.order() {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    for &(u, v) in g.edges() {
        writeln!(out, "edge {u} {v}").unwrap();
    }
    out
}

pub fn parse_ordered_graph(text: &str) -> Result<(Graph, Option<Labeling>)> {
    let lines = lines_after_header(text, ORDERED_GRAPH_HEADER)?;
    let (body, names, vertices) = read_vertices(&lines)?;
    let mut order = None;
    let mut pairs = Vec::new();
    let mut max = None;
    for line in body {
        match line.keyword() {
            "order" if order.is_none() => {
                let vs = (1..line.tokens.len())
                    .map(|i| vertices.resolve(line, i))
                    .collect::<Result<Vec<_>>>()?;
                order = Some((line, vs));
            }
            "order" => return Err(line.err(0, "second `order` line")),
            "edge" => {
                line.expect_args(2)?;
                let (u, v) = (vertices.resolve(line, 1)?, vertices.resolve(line, 2)?);
                if u == v {
                    return Err(line.err(1, "loop edge"));
                }
                max = max.max(Some(u.max(v)));
                pairs.push((u, v));
            }
            other => return Err(line.err(0, format!("unknown directive `{other}`"))),
        }
    }
    let n = match &names {
        Some(ns) => ns.len(),
        None => max.map_or(0, |m| m + 1),
    };
    let g = Graph::new(n, pairs)?;
    let sigma = match order {
        None => None,
        Some((line, vs)) => {
            if vs.len() != n {
                return Err(line.err(0, format!("order lists {} of {n} vertices", vs.len())));
            }
            Some(Labeling::from_order(&vs).map_err(|e| line.err(0, e.to_string()))?)
        }
    };
    Ok((g, sigma))
}

/// Parses a certificate of either kind, resolving vertex tokens against `g`.
pub fn parse_certificate(text: &str, g: &ThreeGraph) -> Result<Certificate> {
    let header = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    let header = tokenize(header).iter().map(|t| t.text).collect::<Vec<_>>().join(" ");
    if header == UNIFORM_HEADER {
        parse_uniform(text, g).map(Certificate::UniformZero)
    } else if header == LAYERED_HEADER {
        parse_layered(text, g).map(Certificate::Layered)
    } else {
        let line = text
            .lines()
            .position(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .map_or(1, |i| i + 1);
        Err(Error::parse(
            line,
            1,
            format!("expected `{UNIFORM_HEADER}` or `{LAYERED_HEADER}`"),
        ))
    }
}

fn graph_vertices(g: &ThreeGraph) -> Vertices {
    let lookup = (0..g.n()).map(|v| (g.name(v), v)).collect();
    Vertices { lookup: Some(lookup) }
}

fn parse_uniform(text: &str, g: &ThreeGraph) -> Result<UniformZeroCertificate> {
    let lines = lines_after_header(text, UNIFORM_HEADER)?;
    let vertices = graph_vertices(g);
    let mut order: Option<Vec<Vertex>> = None;
    let mut coloring = ShadowColoring::new();
    for line in &lines {
        match line.keyword() {
            "order" if order.is_none() => {
                let vs = (1..line.tokens.len())
                    .map(|i| vertices.resolve(line, i))
                    .collect::<Result<Vec<_>>>()?;
                if vs.len() != g.n() {
                    return Err(line.err(0, format!("order lists {} of {} vertices", vs.len(), g.n())));
                }
                Labeling::from_order(&vs).map_err(|e| line.err(0, e.to_string()))?;
                order = Some(vs);
            }
            "order" => return Err(line.err(0, "second `order` line")),
            "color" => {
                line.expect_args(3)?;
                let (u, v) = (vertices.resolve(line, 1)?, vertices.resolve(line, 2)?);
                if u == v {
                    return Err(line.err(2, "a pair needs two vertices"));
                }
                let c = Color::parse(line.tokens[3].text)
                    .ok_or_else(|| line.err(3, "color must be red, blue or green"))?;
                if coloring.set(u, v, c).is_some() {
                    return Err(line.err(1, "pair colored twice"));
                }
            }
            other => return Err(line.err(0, format!("unknown directive `{other}`"))),
        }
    }
    let order = order.ok_or_else(|| Error::parse(1, 1, "missing `order` line"))?;
    Ok(UniformZeroCertificate {
        sigma: Labeling::from_order(&order)?,
        coloring,
    })
}

fn parse_layered(text: &str, g: &ThreeGraph) -> Result<LayerFunction> {
    let lines = lines_after_header(text, LAYERED_HEADER)?;
    let vertices = graph_vertices(g);
    let mut values: BTreeMap<Vertex, usize> = BTreeMap::new();
    for line in &lines {
        if line.keyword() != "layer" {
            return Err(line.err(0, format!("unknown directive `{}`", line.keyword())));
        }
        line.expect_args(2)?;
        let v = vertices.resolve(line, 1)?;
        let layer = line.tokens[2]
            .text
            .parse::<usize>()
            .ok()
            .filter(|&i| i >= 1)
            .ok_or_else(|| line.err(2, "layer must be a positive integer"))?;
        if values.insert(v, layer).is_some() {
            return Err(line.err(1, "vertex given two layers"));
        }
    }
    if let Some(v) = (0..g.n()).find(|v| !values.contains_key(v)) {
        return Err(Error::parse(
            lines.last().map_or(1, |l| l.number),
            1,
            format!("vertex `{}` has no layer", g.name(v)),
        ));
    }
    Ok(LayerFunction::new(&values.into_values().collect::<Vec<_>>()))
}

pub fn serialize_certificate(cert: &Certificate, g: &ThreeGraph) -> Result<String> {
    let names: Vec<String> = (0..g.n()).map(|v| g.name(v)).collect();
    for name in &names {
        check_token(name)?;
    }
    let mut out = String::new();
    match cert {
        Certificate::UniformZero(c) => {
            if c.sigma.n() != g.n() {
                return Err(Error::ShapeMismatch("labeling size".into()));
            }
            writeln!(out, "{UNIFORM_HEADER}").unwrap();
            out.push_str("order");
            for v in c.sigma.order() {
                write!(out, " {}", names[v]).unwrap();
            }
            out.push('\n');
            for ((u, v), color) in c.coloring.iter() {
                if u.max(v) >= g.n() {
                    return Err(Error::OutOfRange { index: u.max(v), n: g.n() });
                }
                writeln!(out, "color {} {} {color}", names[u], names[v]).unwrap();
            }
        }
        Certificate::Layered(lf) => {
            if lf.n() != g.n() {
                return Err(Error::ShapeMismatch("layer function size".into()));
            }
            writeln!(out, "{LAYERED_HEADER}").unwrap();
            for (v, name) in names.iter().enumerate() {
                writeln!(out, "layer {name} {}", lf.value(v)).unwrap();
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;
    use crate::uniform::certify_uniform_zero_b2;

    #[test]
    fn round_trip_named_graphs() {
        for g in [
            named::c_minus(5).unwrap(),
            named::fano_minus(),
            named::f_union(),
            named::z_minus(3).unwrap(),
            ThreeGraph::empty(0),
            ThreeGraph::empty(3),
            ThreeGraph::new(5, [[0, 1, 4], [1, 2, 3]]).unwrap(),
        ] {
            let text = serialize_graph(&g).unwrap();
            let back = parse_graph(&text).unwrap();
            assert_eq!(back, g);
            assert_eq!(serialize_graph(&back).unwrap(), text);
        }
    }

    #[test]
    fn exact_text() {
        let g = ThreeGraph::new(4, [[3, 1, 0], [0, 1, 2]]).unwrap();
        assert_eq!(
            serialize_graph(&g).unwrap(),
            "%3graph v1\nvertices 0 1 2 3\nedge 0 1 2\nedge 0 1 3\n"
        );
    }

    #[test]
    fn lenient_input_canonicalizes() {
        let text = "# a comment\n\n%3graph   v1\n  # another\nedge 2 1 0\nedge 3 0 1\n";
        assert_eq!(
            canonicalize_graph(text).unwrap(),
            "%3graph v1\nvertices 0 1 2 3\nedge 0 1 2\nedge 0 1 3\n"
        );
        let named = "%3graph v1\nvertices b a c\nedge c a b\n";
        assert_eq!(
            canonicalize_graph(named).unwrap(),
            "%3graph v1\nvertices b a c\nedge b a c\n"
        );
    }

    fn parse_error(text: &str) -> (usize, usize) {
        match parse_graph(text) {
            Err(Error::Parse { line, col, .. }) => (line, col),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_locations() {
        assert_eq!(parse_error("%3graph v1\nedge 0 1 2\nedge 2 0 1\n"), (3, 1));
        assert_eq!(parse_error("%3graph v2\n"), (1, 1));
        assert_eq!(parse_error(""), (1, 1));
        assert_eq!(parse_error("%3graph v1\nvertices a b c\nedge a b  d\n"), (3, 11));
        assert_eq!(parse_error("%3graph v1\nedge 0 1\n"), (2, 1));
        assert_eq!(parse_error("%3graph v1\nedge 0 1 1\n"), (2, 6));
        assert_eq!(parse_error("%3graph v1\nedge 0 1 x\n"), (2, 10));
        assert_eq!(parse_error("%3graph v1\nvertices a a\n"), (2, 12));
        assert_eq!(parse_error("%3graph v1\nedge 0 1 2\nvertices 0 1 2\n"), (3, 1));
        assert_eq!(parse_error("%3graph v1\nfoo\n"), (2, 1));
        assert_eq!(parse_error("%3graph v1\nedge 0 1 99999999999\n"), (2, 10));
    }

    #[test]
    fn unwritable_names_are_rejected() {
        let g = ThreeGraph::new(3, [[0, 1, 2]])
            .unwrap()
            .with_names(vec!["a b".into(), "c".into(), "d".into()])
            .unwrap();
        assert!(matches!(serialize_graph(&g), Err(Error::BadParams(_))));
    }

    #[test]
    fn uniform_certificate_round_trip() {
        let g = named::c_minus(5).unwrap();
        let cert = Certificate::UniformZero(certify_uniform_zero_b2(&g).unwrap().found.unwrap());
        let text = serialize_certificate(&cert, &g).unwrap();
        assert!(text.starts_with("%certificate uniform-zero\norder "));
        assert_eq!(parse_certificate(&text, &g).unwrap(), cert);
    }

    #[test]
    fn layered_certificate_round_trip() {
        let g = named::f1();
        let lf = LayerFunction::new(&[1, 1, 2, 2, 3]);
        let cert = Certificate::Layered(lf);
        let text = serialize_certificate(&cert, &g).unwrap();
        assert_eq!(
            text,
            "%certificate layered\nlayer a 1\nlayer b 1\nlayer c 2\nlayer d 2\nlayer e 3\n"
        );
        assert_eq!(parse_certificate(&text, &g).unwrap(), cert);
    }

    #[test]
    fn certificate_errors() {
        let g = named::single_edge();
        let bad = [
            "%certificate layered\nlayer 0 1\nlayer 1 1\n",
            "%certificate layered\nlayer 0 1\nlayer 0 2\nlayer 1 1\nlayer 2 1\n",
            "%certificate layered\nlayer 0 0\n",
            "%certificate uniform-zero\norder 0 1\n",
            "%certificate uniform-zero\norder 0 1 1\n",
            "%certificate uniform-zero\norder 0 1 2\ncolor 0 1 purple\n",
            "%certificate uniform-zero\norder 0 1 2\ncolor 0 1 red\ncolor 1 0 red\n",
            "%certificate uniform-zero\ncolor 0 1 red\n",
            "%certificate other\n",
        ];
        for text in bad {
            assert!(
                matches!(parse_certificate(text, &g), Err(Error::Parse { .. })),
                "accepted {text:?}"
            );
        }
    }

    #[test]
    fn ordered_graph_round_trip() {
        let (b, sigma) = crate::orderings::complete_half_bipartite(3);
        let text = serialize_ordered_graph(&b, Some(&sigma));
        let (g, s) = parse_ordered_graph(&text).unwrap();
        assert_eq!(g, b);
        assert_eq!(s, Some(sigma));
        assert!(text.starts_with("%2graph v1\nvertices 0 1 2 3 4 5\norder 0 1 2 3 4 5\n"));
    }
}
