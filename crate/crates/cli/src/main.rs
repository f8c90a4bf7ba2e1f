//! `hgt`: command-line driver for hgt-core.
//!
//! Exit codes: 0 for a positive answer, 1 for a negative answer from a
//! complete search, 2 for errors and for searches cut off by a budget.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hgt_core::constructions::{density_estimates, rb_construction, twelve_part_construction};
use hgt_core::embed::{find_embedding, EmbeddingMode, EmbeddingProblem};
use hgt_core::format::{
    parse_certificate, parse_graph, serialize_certificate, serialize_graph, serialize_ordered_graph,
    Certificate,
};
use hgt_core::hypergraph::{tensor_product, ThreeGraph};
use hgt_core::layered::{
    find_layered_function_with, is_linear, linearize_all, linearize_vertex, validate_layer_function,
    LayeredLimits,
};
use hgt_core::named::{generate_named, Named, Params};
use hgt_core::uniform::{check_uniform_zero, verify_uniform_certificate, UniformLimits, UniformMethod};
use hgt_core::{reproduce, DEFAULT_BUDGET};

#[derive(Parser)]
#[command(name = "hgt", version, about = "Certify structural properties of 3-uniform hypergraphs")]
struct Cli {
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true, env = "HGT_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a named 3-graph (or the ordered graph B) in the text format.
    Gen {
        name: String,
        /// Generator parameter, e.g. `--param l=7`.
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    #[command(subcommand)]
    Check(CheckCommand),
    /// Check a certificate against a graph without searching.
    Verify { graph: PathBuf, cert: PathBuf },
    #[command(subcommand)]
    Transform(TransformCommand),
    #[command(subcommand)]
    Construct(ConstructCommand),
    /// Search for a copy of PATTERN in HOST.
    Embed {
        pattern: PathBuf,
        host: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Find)]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Edge density, minimum codegree and a sampled uniform density.
    Stats {
        file: PathBuf,
        #[arg(long = "uniform-samples", default_value_t = 100)]
        samples: usize,
        #[arg(long = "min-frac", default_value_t = 0.25)]
        min_frac: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the reproduction suite.
    Reproduce {
        /// Run only items whose number or title matches.
        #[arg(long)]
        filter: Option<String>,
    },
}

#[derive(Args)]
struct SearchArgs {
    /// Search node (or conflict) budget.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Refuse inputs with more vertices than this.
    #[arg(long = "max-vertices")]
    max_vertices: Option<usize>,
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Decide whether the uniform Turán density vanishes.
    UniformZero {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::B2)]
        method: Method,
        #[arg(long)]
        cert: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Decide whether the graph is layered.
    Layered {
        file: PathBuf,
        #[arg(long)]
        cert: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Whether every pair of vertices lies in at most one edge.
    Linear { file: PathBuf },
}

#[derive(Subcommand)]
enum TransformCommand {
    /// Linearize one vertex, or every vertex until the graph is linear.
    Linearize {
        file: PathBuf,
        #[arg(long)]
        vertex: Option<String>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Replace every vertex by `t` copies.
    Blowup {
        file: PathBuf,
        #[arg(long)]
        factor: usize,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Tensor product of the given graphs, in order.
    Tensor {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ConstructCommand {
    /// Random red/blue construction.
    Rb {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Twelve-part blow-up.
    Twelve {
        #[arg(long = "part-size")]
        part_size: usize,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    B2,
    Links,
    #[value(name = "21type")]
    TwoOne,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Decide,
    Find,
    Count,
}

/// Outcome of a command: an exit code and what to print on stdout.
struct Answer {
    code: u8,
    text: String,
}

impl Answer {
    fn yes(text: impl Into<String>) -> Self {
        Answer { code: 0, text: text.into() }
    }

    fn no(text: impl Into<String>) -> Self {
        Answer { code: 1, text: text.into() }
    }

    fn incomplete(text: impl Into<String>) -> Self {
        Answer { code: 2, text: text.into() }
    }
}

/// Prints a line, ignoring a closed stdout.
fn say(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn read_graph(path: &Path) -> Result<ThreeGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .map_err(|e| anyhow!("writing {}: {}", path.display(), e.error))?;
    Ok(())
}

/// Sends `contents` to `output`, or returns it for stdout.
fn emit(output: Option<&Path>, contents: String) -> Result<String> {
    match output {
        Some(path) => {
            write_atomic(path, &contents)?;
            Ok(format!("wrote {}", path.display()))
        }
        None => Ok(contents.trim_end().to_string()),
    }
}

fn parse_params(raw: &[String]) -> Result<Params> {
    let mut params = Params::new();
    for p in raw {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| anyhow!("parameter {p:?} is not of the form key=value"))?;
        let v: usize = v
            .trim()
            .parse()
            .with_context(|| format!("parameter {k} needs a non-negative integer"))?;
        if params.insert(k.trim().to_string(), v).is_some() {
            bail!("parameter {k} given twice");
        }
    }
    Ok(params)
}

fn uniform_limits(search: &SearchArgs) -> UniformLimits {
    let mut limits = UniformLimits {
        budget: search.budget.max(1),
        ..UniformLimits::default()
    };
    if let Some(m) = search.max_vertices {
        limits.max_vertices = m;
    }
    limits
}

fn layered_limits(search: &SearchArgs) -> LayeredLimits {
    let mut limits = LayeredLimits {
        budget: search.budget.max(1),
        ..LayeredLimits::default()
    };
    if let Some(m) = search.max_vertices {
        limits.max_vertices = m;
    }
    limits
}

fn run_check(cmd: CheckCommand) -> Result<Answer> {
    match cmd {
        CheckCommand::UniformZero {
            file,
            method,
            cert,
            search,
        } => {
            let g = read_graph(&file)?;
            let method = match method {
                Method::B2 => UniformMethod::B2,
                Method::Links => UniformMethod::Links,
                Method::TwoOne => UniformMethod::TwoOne,
            };
            let out = check_uniform_zero(&g, method, uniform_limits(&search))?;
            match out.found {
                Some(c) => {
                    let mut text = "uniform-zero (certificate verified)".to_string();
                    if let Some(path) = cert {
                        write_atomic(&path, &serialize_certificate(&Certificate::UniformZero(c), &g)?)?;
                        text.push_str(&format!("; wrote {}", path.display()));
                    }
                    Ok(Answer::yes(text))
                }
                None if out.stats.complete => Ok(Answer::no("not uniform-zero (search complete)")),
                None => Ok(Answer::incomplete(format!(
                    "undecided: budget exhausted after {} nodes",
                    out.stats.nodes
                ))),
            }
        }
        CheckCommand::Layered { file, cert, search } => {
            let g = read_graph(&file)?;
            let out = find_layered_function_with(&g, layered_limits(&search))?;
            match out.found {
                Some(lf) => {
                    let mut text = format!("layered ({} layers)", lf.layer_count());
                    if let Some(path) = cert {
                        write_atomic(&path, &serialize_certificate(&Certificate::Layered(lf), &g)?)?;
                        text.push_str(&format!("; wrote {}", path.display()));
                    }
                    Ok(Answer::yes(text))
                }
                None if out.stats.complete => Ok(Answer::no("not layered (search complete)")),
                None => Ok(Answer::incomplete(format!(
                    "undecided: budget exhausted after {} conflicts",
                    out.stats.nodes
                ))),
            }
        }
        CheckCommand::Linear { file } => {
            let g = read_graph(&file)?;
            Ok(if is_linear(&g) {
                Answer::yes("linear")
            } else {
                Answer::no("not linear")
            })
        }
    }
}

fn run_verify(graph: &Path, cert: &Path) -> Result<Answer> {
    let g = read_graph(graph)?;
    let text = fs::read_to_string(cert).with_context(|| format!("reading {}", cert.display()))?;
    let cert = parse_certificate(&text, &g).with_context(|| format!("parsing {}", cert.display()))?;
    match cert {
        Certificate::UniformZero(c) => Ok(if verify_uniform_certificate(&g, &c)? {
            Answer::yes("valid uniform-zero certificate")
        } else {
            Answer::no("invalid uniform-zero certificate")
        }),
        Certificate::Layered(lf) => {
            let report = validate_layer_function(&g, &lf)?;
            Ok(if report.is_layered() {
                Answer::yes("valid layered certificate")
            } else {
                Answer::no(format!(
                    "invalid layered certificate: {} A1, {} A2, {} A3 violations",
                    report.a1_violations.len(),
                    report.a2_violations.len(),
                    report.a3_violations.len()
                ))
            })
        }
    }
}

fn run_transform(cmd: TransformCommand) -> Result<Answer> {
    let (g, output) = match cmd {
        TransformCommand::Linearize { file, vertex, output } => {
            let f = read_graph(&file)?;
            let g = match vertex {
                Some(name) => {
                    let v = f
                        .index_of(&name)
                        .ok_or_else(|| anyhow!("no vertex named {name:?}"))?;
                    linearize_vertex(&f, v)?
                }
                None => linearize_all(&f)?,
            };
            (g, output)
        }
        TransformCommand::Blowup { file, factor, output } => {
            let f = read_graph(&file)?;
            (f.blowup(&vec![factor; f.n()])?, output)
        }
        TransformCommand::Tensor { files, output } => {
            let factors = files.iter().map(|p| read_graph(p)).collect::<Result<Vec<_>>>()?;
            (tensor_product(&factors)?, output)
        }
    };
    Ok(Answer::yes(emit(output.as_deref(), serialize_graph(&g)?)?))
}

fn run_construct(cmd: ConstructCommand) -> Result<Answer> {
    let (g, output) = match cmd {
        ConstructCommand::Rb { n, seed, output } => (rb_construction(n, seed)?, output),
        ConstructCommand::Twelve { part_size, output } => (twelve_part_construction(part_size)?.1, output),
    };
    Ok(Answer::yes(emit(output.as_deref(), serialize_graph(&g)?)?))
}

fn run_embed(pattern: &Path, host: &Path, mode: Mode, budget: u64) -> Result<Answer> {
    let (p, h) = (read_graph(pattern)?, read_graph(host)?);
    let mode = match mode {
        Mode::Decide => EmbeddingMode::Decide,
        Mode::Find => EmbeddingMode::Find,
        Mode::Count => EmbeddingMode::Count,
    };
    let r = find_embedding(&EmbeddingProblem::new(&p, &h).with_mode(mode).with_budget(budget));
    if !r.complete && r.found.is_none() {
        return Ok(Answer::incomplete(format!(
            "undecided: budget exhausted after {} nodes",
            r.nodes
        )));
    }
    if let Some(c) = r.count {
        let text = format!("embeddings={}\ncopies={}", c.embeddings, c.copies);
        return Ok(if c.embeddings > 0 { Answer::yes(text) } else { Answer::no(text) });
    }
    Ok(match (r.found, mode) {
        (Some(map), EmbeddingMode::Find) => {
            let lines: Vec<String> = map
                .iter()
                .enumerate()
                .map(|(v, &x)| format!("{} -> {}", p.name(v), h.name(x)))
                .collect();
            Answer::yes(format!("found\n{}", lines.join("\n")))
        }
        (Some(_), _) => Answer::yes("found"),
        (None, _) => Answer::no("absent (search complete)"),
    })
}

fn run(cli: Cli) -> Result<Answer> {
    match cli.command {
        Command::Gen { name, params, output } => {
            let text = match generate_named(&name, &parse_params(&params)?)? {
                Named::Three(g) => serialize_graph(&g)?,
                Named::Ordered(g, sigma) => serialize_ordered_graph(&g, Some(&sigma)),
            };
            Ok(Answer::yes(emit(output.as_deref(), text)?))
        }
        Command::Check(c) => run_check(c),
        Command::Verify { graph, cert } => run_verify(&graph, &cert),
        Command::Transform(t) => run_transform(t),
        Command::Construct(c) => run_construct(c),
        Command::Embed {
            pattern,
            host,
            mode,
            budget,
        } => run_embed(&pattern, &host, mode, budget),
        Command::Stats {
            file,
            samples,
            min_frac,
            seed,
        } => {
            let g = read_graph(&file)?;
            let report = density_estimates(&g, samples, min_frac, seed)?;
            Ok(Answer::yes(report.to_string().trim_end()))
        }
        Command::Reproduce { filter } => {
            let ids = reproduce::selected(filter.as_deref());
            if ids.is_empty() {
                bail!("no reproduction item matches {:?}", filter.unwrap_or_default());
            }
            let mut all = true;
            for id in ids {
                let r = reproduce::run_item(id);
                all &= r.passed;
                say(&r.to_string());
            }
            Ok(if all {
                Answer::yes("all items passed")
            } else {
                Answer::no("some items failed")
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: setting up {t} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(answer) => {
            if !answer.text.is_empty() {
                say(&answer.text);
            }
            ExitCode::from(answer.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
