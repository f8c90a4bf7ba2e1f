//! The reproduction suite: twelve deterministic checks, each with a fixed
//! time limit, reported as PASS/FAIL with a one-line detail.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::constructions::{
    build_tensor_counterexample, density_estimates, enumerate_min_codegree_family,
    homomorphism_images, pattern_homomorphism, rb_construction, twelve_part_construction,
    twelve_part_pattern,
};
use crate::corpus::{random_corpus, small_classes, tripartite_corpus};
use crate::embed::{find_embedding, EmbeddingMode, EmbeddingProblem};
use crate::error::{Error, Result};
use crate::format::{parse_certificate, serialize_certificate, Certificate};
use crate::hypergraph::{is_isomorphic, Graph, ThreeGraph};
use crate::layered::{
    find_layered_function, find_layered_function_with, layer_decomposition, linearize_vertex,
    reduce_semi_layered, semi_layered_functions, validate_layer_function, LayeredLimits,
};
use crate::named;
use crate::orderings::{complete_half_bipartite, embed_into_complete_half_bipartite, is_half_bipartite, Labeling};
use crate::uniform::{
    certify_uniform_zero_b2, certify_uniform_zero_links, check_uniform_zero, verify_uniform_certificate,
    UniformLimits, UniformMethod,
};

/// Item numbers and titles.
pub const ITEMS: [(usize, &str); 12] = [
    (1, "positive-certification"),
    (2, "negative-certification"),
    (3, "criterion-equivalence"),
    (4, "layeredness"),
    (5, "linearization"),
    (6, "semi-layered-reduction"),
    (7, "linked-pairs"),
    (8, "twelve-part"),
    (9, "red-blue"),
    (10, "family-tensor"),
    (11, "half-bipartite"),
    (12, "blowup-containment"),
];

#[derive(Debug, Clone)]
pub struct ItemResult {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for ItemResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:>2} {} ({:.2}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// Items whose number or title contains `filter`.
pub fn selected(filter: Option<&str>) -> Vec<usize> {
    ITEMS
        .iter()
        .filter(|(id, title)| filter.is_none_or(|s| id.to_string() == s || title.contains(s)))
        .map(|(id, _)| *id)
        .collect()
}

pub fn run_item(id: usize) -> ItemResult {
    let title = ITEMS
        .iter()
        .find(|(i, _)| *i == id)
        .map_or("unknown", |(_, t)| *t);
    let start = Instant::now();
    let outcome = match id {
        1 => positive_certification(),
        2 => negative_certification(),
        3 => criterion_equivalence(),
        4 => layeredness(),
        5 => linearization(),
        6 => semi_layered_reduction(),
        7 => linked_pairs(),
        8 => twelve_part(),
        9 => red_blue(),
        10 => family_tensor(),
        11 => half_bipartite(),
        12 => blowup_containment(),
        _ => Err(Error::BadParams(format!("no item {id}"))),
    };
    let elapsed = start.elapsed();
    let (passed, detail) = match outcome {
        Ok(Check { passed, detail, limit }) => {
            let in_time = elapsed <= limit;
            let detail = if in_time {
                detail
            } else {
                format!("{detail}; over the {}s limit", limit.as_secs())
            };
            (passed && in_time, detail)
        }
        Err(e) => (false, format!("error: {e}")),
    };
    ItemResult {
        id,
        title,
        passed,
        detail,
        elapsed,
    }
}

pub fn run(filter: Option<&str>) -> Vec<ItemResult> {
    selected(filter).into_iter().map(run_item).collect()
}

struct Check {
    passed: bool,
    detail: String,
    limit: Duration,
}

fn check(passed: bool, detail: String, secs: u64) -> Result<Check> {
    Ok(Check {
        passed,
        detail,
        limit: Duration::from_secs(secs),
    })
}

/// Certifies `f` with the coloring method and checks the certificate
/// through its text form too.
fn certified(f: &ThreeGraph) -> Result<bool> {
    let out = check_uniform_zero(f, UniformMethod::B2, UniformLimits::default())?;
    let Some(cert) = out.found else {
        return Ok(false);
    };
    let text = serialize_certificate(&Certificate::UniformZero(cert), f)?;
    match parse_certificate(&text, f)? {
        Certificate::UniformZero(back) => verify_uniform_certificate(f, &back),
        Certificate::Layered(_) => Ok(false),
    }
}

fn positive_certification() -> Result<Check> {
    let mut named_cases = vec![
        ("edge", named::single_edge()),
        ("C5-", named::c_minus(5)?),
        ("Z3-", named::z_minus(3)?),
        ("Z4-", named::z_minus(4)?),
        ("fano-", named::fano_minus()),
    ];
    let tripartite = tripartite_corpus(6)?;
    named_cases.extend(tripartite.into_iter().map(|g| ("tripartite", g)));
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    let total = named_cases.len();
    for (name, g) in named_cases {
        let t = Instant::now();
        let ok = certified(&g)?;
        let took = t.elapsed();
        slowest = slowest.max(took);
        if !ok || took > Duration::from_secs(5) {
            failures.push(name);
        }
    }
    check(
        failures.is_empty(),
        format!(
            "{} of {total} graphs certified and re-verified, slowest {:.3}s{}",
            total - failures.len(),
            slowest.as_secs_f64(),
            if failures.is_empty() { String::new() } else { format!(", failed: {failures:?}") }
        ),
        5 * total as u64,
    )
}

fn negative_certification() -> Result<Check> {
    let mut details = Vec::new();
    let mut passed = true;
    for (name, g) in [("K4-", named::k4_minus()), ("K4", named::k4())] {
        let t = Instant::now();
        let out = check_uniform_zero(&g, UniformMethod::B2, UniformLimits::default())?;
        let ok = out.is_proven_absent() && t.elapsed() <= Duration::from_secs(5);
        passed &= ok;
        details.push(format!("{name}: {}", if ok { "complete no" } else { "not refuted" }));
    }
    check(passed, details.join(", "), 10)
}

fn criterion_equivalence() -> Result<Check> {
    let mut corpus = small_classes(5)?;
    corpus.extend(random_corpus(200, 6, 7, &[0.1, 0.2, 0.3, 0.4], 2024)?);
    let disagreements: usize = corpus
        .par_iter()
        .map(|g| -> Result<usize> {
            let b2 = certify_uniform_zero_b2(g)?;
            let links = certify_uniform_zero_links(g)?;
            let complete = b2.stats.complete && links.stats.complete;
            Ok(usize::from(!complete || b2.found.is_some() != links.found.is_some()))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    check(
        disagreements == 0,
        format!("{} graphs, {disagreements} disagreements", corpus.len()),
        600,
    )
}

fn layeredness() -> Result<Check> {
    let mut passed = true;
    let mut details = Vec::new();
    for (name, g) in [
        ("F1", named::f1()),
        ("F2", named::f2()),
        ("Z3-", named::z_minus(3)?),
        ("Z4-", named::z_minus(4)?),
        ("C5-", named::c_minus(5)?),
    ] {
        let out = find_layered_function(&g)?;
        let ok = match &out.found {
            Some(lf) => validate_layer_function(&g, lf)?.is_layered(),
            None => false,
        };
        passed &= ok;
        details.push(format!("{name} {}", if ok { "layered" } else { "no witness" }));
    }
    let f = find_layered_function(&named::f_union())?;
    let refuted = f.is_proven_absent();
    passed &= refuted;
    details.push(format!("F {}", if refuted { "not layered (complete)" } else { "not refuted" }));
    check(passed, details.join(", "), 60)
}

fn linearization() -> Result<Check> {
    let corpus = random_corpus(50, 4, 6, &[0.15, 0.25, 0.35], 77)?;
    let limits = LayeredLimits {
        max_vertices: 256,
        ..LayeredLimits::default()
    };
    let results = corpus
        .par_iter()
        .map(|g| -> Result<(usize, usize)> {
            let base = find_layered_function_with(g, limits)?;
            let mut checked = 0;
            let mut bad = 0;
            for v in (0..g.n()).filter(|&v| g.degree(v) > 0) {
                let lin = find_layered_function_with(&linearize_vertex(g, v)?, limits)?;
                checked += 1;
                let complete = base.stats.complete && lin.stats.complete;
                if !complete || base.found.is_some() != lin.found.is_some() {
                    bad += 1;
                }
            }
            Ok((checked, bad))
        })
        .collect::<Result<Vec<_>>>()?;
    let checked: usize = results.iter().map(|r| r.0).sum();
    let bad: usize = results.iter().map(|r| r.1).sum();
    check(
        bad == 0,
        format!("50 graphs, {checked} vertices linearized, {bad} discrepancies"),
        120,
    )
}

fn semi_layered_reduction() -> Result<Check> {
    let corpus = small_classes(5)?;
    let results = corpus
        .par_iter()
        .map(|g| -> Result<(usize, usize)> {
            let (functions, complete) = semi_layered_functions(g, usize::MAX)?;
            let mut bad = usize::from(!complete);
            for lf in &functions {
                let r = reduce_semi_layered(g, lf)?;
                let decreasing = r.cardinalities.windows(2).all(|w| w[1] < w[0]);
                let layered = validate_layer_function(g, &r.function)?.is_layered();
                bad += usize::from(!(decreasing && layered));
            }
            Ok((functions.len(), bad))
        })
        .collect::<Result<Vec<_>>>()?;
    let total: usize = results.iter().map(|r| r.0).sum();
    let bad: usize = results.iter().map(|r| r.1).sum();
    check(
        bad == 0,
        format!("{total} semi-layered functions over {} graphs, {bad} failures", corpus.len()),
        120,
    )
}

fn linked_pairs() -> Result<Check> {
    let mut corpus = small_classes(5)?;
    corpus.extend(tripartite_corpus(6)?);
    corpus.extend([
        named::z_minus(3)?,
        named::z_minus(4)?,
        named::c_minus(5)?,
        named::f1(),
        named::f2(),
        named::fano_minus(),
    ]);
    let results = corpus
        .par_iter()
        .map(|g| -> Result<(usize, usize)> {
            let Some(lf) = find_layered_function(g)?.found else {
                return Ok((0, 0));
            };
            let whole = certify_uniform_zero_links(g)?;
            let d = layer_decomposition(g, &lf)?;
            let mut all_parts = true;
            let mut complete = whole.stats.complete;
            for &(i, j) in &d.linked_pairs {
                let (sub, _) = d.pair_subgraph(i, j)?;
                let part = certify_uniform_zero_links(&sub)?;
                complete &= part.stats.complete;
                all_parts &= part.found.is_some();
            }
            let agree = complete && whole.found.is_some() == all_parts;
            Ok((1, usize::from(!agree)))
        })
        .collect::<Result<Vec<_>>>()?;
    let layered: usize = results.iter().map(|r| r.0).sum();
    let bad: usize = results.iter().map(|r| r.1).sum();
    check(
        bad == 0,
        format!("{layered} layered graphs, {bad} discrepancies"),
        120,
    )
}

fn twelve_part() -> Result<Check> {
    let pattern = twelve_part_pattern();
    let coverage = pattern.pair_coverage();
    let coverage_ok = coverage.len() == 78 && coverage.values().all(|&c| c == 1);

    let f1 = named::f1();
    let e1 = f1.index_of("e").expect("F1 has e");
    let img1 = homomorphism_images(&f1, &pattern, e1);
    let f1_ok = !img1.is_empty() && img1.iter().all(|&p| p < 5);

    let f2 = named::f2();
    let e2 = f2.index_of("e").expect("F2 has e");
    let img2 = homomorphism_images(&f2, &pattern, e2);
    let f2_ok = !img2.is_empty() && img2.iter().all(|&p| p >= 5);

    let f_ok = pattern_homomorphism(&named::f_union(), &pattern).is_none();

    let mut measured = Vec::new();
    for m in 3..=8 {
        let (_, g) = twelve_part_construction(m)?;
        measured.push((m, g.min_codegree()));
    }
    let codegree_ok = measured.iter().all(|&(m, d)| d == m - 2);
    check(
        coverage_ok && f1_ok && f2_ok && f_ok && codegree_ok,
        format!(
            "coverage {}, F1 e-images {:?}, F2 e-images {:?}, F {}, codegree (m, measured, expected m-2): {}",
            if coverage_ok { "ok" } else { "wrong" },
            img1.iter().map(|&p| pattern.label(p)).collect::<Vec<_>>(),
            img2.iter().map(|&p| pattern.label(p)).collect::<Vec<_>>(),
            if f_ok { "absent" } else { "present" },
            measured
                .iter()
                .map(|(m, d)| format!("({m},{d},{})", m - 2))
                .collect::<Vec<_>>()
                .join(" ")
        ),
        60,
    )
}

fn red_blue() -> Result<Check> {
    const TARGET: f64 = 4.0 / 27.0;
    let k4 = named::k4();
    let rows = (0..20u64)
        .into_par_iter()
        .map(|seed| -> Result<(bool, f64, f64)> {
            let h = rb_construction(60, seed)?;
            let free = find_embedding(&EmbeddingProblem::new(&k4, &h)).is_proven_absent();
            let report = density_estimates(&h, 200, 0.25, seed)?;
            Ok((free, report.edge_density, report.uniform_estimate.d_hat))
        })
        .collect::<Result<Vec<_>>>()?;
    let free = rows.iter().filter(|r| r.0).count();
    let mean = rows.iter().map(|r| r.1).sum::<f64>() / rows.len() as f64;
    let dense = rows.iter().filter(|r| r.2 >= TARGET - 0.05).count();
    let min_d_hat = rows.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    check(
        free == 20 && (mean - TARGET).abs() <= 0.02 && dense >= 18,
        format!(
            "K4-free {free}/20, mean edge density {mean:.4} (target {TARGET:.4}), d_hat >= {:.4} on {dense}/20 (least {min_d_hat:.4})",
            TARGET - 0.05
        ),
        300,
    )
}

fn family_tensor() -> Result<Check> {
    let f4 = enumerate_min_codegree_family(4)?;
    let family_ok = f4.len() == 1 && is_isomorphic(&f4[0], &named::k4())?.is_some();
    let tensor_ok = is_isomorphic(&build_tensor_counterexample(4)?, &named::k4())?.is_some();
    let f5 = enumerate_min_codegree_family(5)?.len() as u32;
    let expected = 5u128.pow(f5);
    let (guard_ok, guard) = match build_tensor_counterexample(5) {
        Err(Error::TooLarge { requested, .. }) => (requested == expected, format!("TooLarge reporting {requested}")),
        Err(e) => (false, format!("error {e}")),
        Ok(g) => (false, format!("built {} vertices, {} edges (no guard)", g.n(), g.edge_count())),
    };
    check(
        family_ok && tensor_ok && guard_ok,
        format!(
            "family(4) = {{K4}}: {family_ok}, tensor(4) ~ K4: {tensor_ok}, |family(5)| = {f5}, k = 5: {guard}"
        ),
        60,
    )
}

fn half_bipartite() -> Result<Check> {
    let (b6, _) = complete_half_bipartite(6);
    let mut half = 0u64;
    let mut exceptions = 0u64;
    for n in 1..=6usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let sigma = Labeling::identity(n);
        let (h, e) = (0..1u32 << pairs.len())
            .into_par_iter()
            .map(|mask| -> Result<(u64, u64)> {
                let g = Graph::new(
                    n,
                    pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| *p),
                )?;
                if !is_half_bipartite(&g, &sigma) {
                    return Ok((0, 0));
                }
                let image = embed_into_complete_half_bipartite(&g, &sigma)?;
                let order_kept = image.windows(2).all(|w| w[0] < w[1]);
                let into_b6 = g.edges().iter().all(|&(u, v)| b6.has_edge(image[u], image[v]));
                let ok = order_kept && into_b6 && g.is_bipartite();
                Ok((1, u64::from(!ok)))
            })
            .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
        half += h;
        exceptions += e;
    }
    check(
        exceptions == 0,
        format!("{half} half-bipartite labeled graphs on <= 6 vertices, {exceptions} exceptions"),
        60,
    )
}

fn blowup_containment() -> Result<Check> {
    let c5 = named::c_minus(5)?;
    let mut passed = true;
    let mut details = Vec::new();
    for l in 5..=8 {
        let cl = named::c_minus(l)?;
        let mut least = None;
        let mut complete = true;
        for t in 1..=2 {
            let host = c5.blowup(&[t; 5])?;
            let r = find_embedding(&EmbeddingProblem::new(&cl, &host).with_mode(EmbeddingMode::Find));
            complete &= r.complete;
            if r.found.is_some() {
                least = Some(t);
                break;
            }
        }
        passed &= complete && least.is_some();
        details.push(match least {
            Some(t) => format!("C{l}-: t = {t}"),
            None => format!("C{l}-: not found for t <= 2"),
        });
    }
    check(passed, details.join(", "), 60)
}
