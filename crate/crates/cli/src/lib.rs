//! Command-line front end: instance files, solver commands and report rendering.

pub mod bench;
pub mod input;

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;
use ulcode_core::driver::{resolve_k, solve_with, Method, DEFAULT_BUDGET};
use ulcode_core::oracles::default_depth_cap;
use ulcode_core::rational::{format_rational, parse_rational, to_f64};
use ulcode_core::{
    build_cost_graph, exact_optimal, normalize, CodeAssignment, CodeReport, Rational,
    SolveOptions,
};

use input::{parse_instance, LoadedInstance, ParseError};

#[derive(Debug, Parser)]
#[command(name = "ulcode", version, about = "Near-optimal prefix codes for letters of unequal cost")]
pub struct Cli {
    /// Worker threads for the guess search (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a near-optimal prefix code.
    Solve {
        path: PathBuf,
        #[arg(long, default_value = "1/2", value_parser = rational_arg)]
        epsilon: Rational,
        /// Threshold k; must be 1 + m*epsilon' for an integer m >= 1.
        #[arg(long, value_parser = rational_arg)]
        k: Option<Rational>,
        /// Search nodes allowed before giving up.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Emit::Table)]
        emit: Emit,
    },
    /// Optimal code by exhaustive search (at most 10 words).
    Exact { path: PathBuf },
    /// Compare the approximate code against the optimum.
    Verify {
        path: PathBuf,
        #[arg(long, default_value = "1/2", value_parser = rational_arg)]
        epsilon: Rational,
    },
    /// Size of the cost graph against its node and arc bounds.
    GraphStats {
        path: PathBuf,
        #[arg(long, default_value = "1/2", value_parser = rational_arg)]
        epsilon: Rational,
    },
    /// Runtime ladders, e.g. `n:1024..16384` or `inv-eps:2..32`.
    Bench { spec: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Table,
    Tsv,
}

fn rational_arg(text: &str) -> Result<Rational, String> {
    parse_rational(text).ok_or_else(|| format!("`{text}` is not a number"))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Core(#[from] ulcode_core::Error),
    #[error("ratio {ratio} exceeds the bound {bound}")]
    VerifyFailed { ratio: String, bound: String },
    #[error("bad bench spec `{0}`; expected n:A..B or inv-eps:A..B")]
    BenchSpec(String),
    #[error("{0}")]
    Output(#[from] io::Error),
    #[error("thread pool: {0}")]
    Pool(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(ulcode_core::Error::BudgetExceeded { .. }) => 2,
            _ => 1,
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| CliError::Pool(e.to_string()))?;
    let (result, buffer) = pool.install(|| {
        let mut buffer = Vec::new();
        (dispatch(cli.command, &mut buffer), buffer)
    });
    out.write_all(&buffer)?;
    result
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Solve {
            path,
            epsilon,
            k,
            budget,
            emit,
        } => cmd_solve(&path, epsilon, SolveOptions { k, budget }, emit, out),
        Command::Exact { path } => cmd_exact(&path, out),
        Command::Verify { path, epsilon } => cmd_verify(&path, epsilon, out),
        Command::GraphStats { path, epsilon } => cmd_graph_stats(&path, epsilon, out),
        Command::Bench { spec } => bench::cmd_bench(&spec, out),
    }
}

pub fn load(path: &Path, epsilon: Rational) -> Result<LoadedInstance, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: shown.clone(),
        source,
    })?;
    let file = parse_instance(&text).map_err(|source| CliError::Parse {
        path: shown,
        source,
    })?;
    Ok(file.load(epsilon)?)
}

/// Exact value followed by a fixed-precision decimal.
fn both(value: &Rational) -> String {
    if value.is_integer() {
        format_rational(value)
    } else {
        format!("{} ({:.6})", format_rational(value), to_f64(value))
    }
}

fn method_name(method: Method) -> &'static str {
    match method {
        Method::SingleWord => "single word",
        Method::Leveled => "leveled search",
        Method::SmallLetter => "small cheapest letter",
    }
}

fn write_table(rows: &[Vec<String>], out: &mut dyn Write) -> io::Result<()> {
    let columns = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..columns)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c + 1 == row.len() {
                line.push_str(cell);
            } else {
                line.push_str(&format!("{cell:<w$}  ", w = widths[c]));
            }
        }
        writeln!(out, "{}", line.trim_end())?;
    }
    Ok(())
}

/// Per-word rows in input order: index, frequency, codeword, cost, cost / l_2.
fn word_rows(loaded: &LoadedInstance, code: &CodeAssignment) -> Vec<Vec<String>> {
    let letters = loaded.instance.letters();
    let ell2 = letters.cost(1);
    loaded
        .sorted_position()
        .iter()
        .enumerate()
        .map(|(i, &j)| {
            let word = &code.codewords()[j];
            let cost = word.cost(letters);
            vec![
                (i + 1).to_string(),
                format_rational(&loaded.weights[i]),
                word.render(&loaded.glyphs),
                format_rational(&cost),
                format_rational(&(&cost / ell2)),
            ]
        })
        .collect()
}

fn summary_rows(report: &CodeReport, epsilon: &Rational) -> Vec<(&'static str, String)> {
    let mut rows = vec![
        ("method", method_name(report.method).to_string()),
        ("epsilon", format_rational(epsilon)),
    ];
    if let Some(e) = &report.epsilon_prime {
        rows.push(("epsilon'", format_rational(e)));
    }
    if let Some(k) = &report.k {
        rows.push(("k", format_rational(k)));
    }
    rows.extend([
        ("total cost", both(&report.total_cost)),
        ("normalized cost", both(&report.normalized_cost)),
        ("lower bound", both(&report.lower_bound)),
        ("ratio bound", both(&report.ratio_bound)),
        ("guesses", report.guess_count.to_string()),
        ("search nodes", report.search_nodes.to_string()),
    ]);
    rows
}

pub fn cmd_solve(
    path: &Path,
    epsilon: Rational,
    options: SolveOptions,
    emit: Emit,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let loaded = load(path, epsilon.clone())?;
    let report = solve_with(&loaded.instance, &options)?;
    let words = word_rows(&loaded, &report.code);
    let summary = summary_rows(&report, &epsilon);
    match emit {
        Emit::Table => {
            let mut rows = vec![["word", "frequency", "codeword", "cost", "cost/l2"]
                .map(String::from)
                .to_vec()];
            rows.extend(words);
            write_table(&rows, out)?;
            writeln!(out)?;
            let summary: Vec<Vec<String>> =
                summary.into_iter().map(|(k, v)| vec![k.to_string(), v]).collect();
            write_table(&summary, out)?;
        }
        Emit::Tsv => {
            writeln!(out, "word\tfrequency\tcodeword\tcost\tnormalized_cost")?;
            for row in words {
                writeln!(out, "{}", row.join("\t"))?;
            }
            for (key, value) in summary {
                let value = match key {
                    "total cost" => format_rational(&report.total_cost),
                    "normalized cost" => format_rational(&report.normalized_cost),
                    "lower bound" => format_rational(&report.lower_bound),
                    "ratio bound" => format_rational(&report.ratio_bound),
                    _ => value,
                };
                writeln!(out, "# {}\t{}", key.replace(' ', "_"), value)?;
            }
        }
    }
    Ok(())
}

pub fn cmd_exact(path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let loaded = load(path, Rational::from_integer(1.into()))?;
    let inst = &loaded.instance;
    let result = exact_optimal(inst, default_depth_cap(inst.n()))?;
    let mut rows = vec![["word", "frequency", "codeword", "cost", "cost/l2"]
        .map(String::from)
        .to_vec()];
    rows.extend(word_rows(&loaded, &result.optimal_code));
    write_table(&rows, out)?;
    writeln!(out)?;
    let normalized = &result.optimal_cost / (inst.total_weight() * inst.letters().cost(1));
    write_table(
        &[
            vec!["optimal cost".into(), both(&result.optimal_cost)],
            vec!["normalized cost".into(), both(&normalized)],
            vec!["nodes explored".into(), result.nodes_explored.to_string()],
        ],
        out,
    )?;
    Ok(())
}

pub fn cmd_verify(path: &Path, epsilon: Rational, out: &mut dyn Write) -> Result<(), CliError> {
    let loaded = load(path, epsilon)?;
    let inst = &loaded.instance;
    let report = solve_with(inst, &SolveOptions::default())?;
    let exact = exact_optimal(inst, default_depth_cap(inst.n()))?;
    let ratio = &report.total_cost / &exact.optimal_cost;
    write_table(
        &[
            vec!["approximate cost".into(), both(&report.total_cost)],
            vec!["optimal cost".into(), both(&exact.optimal_cost)],
            vec!["ratio".into(), both(&ratio)],
            vec!["bound".into(), both(&report.ratio_bound)],
        ],
        out,
    )?;
    if ratio > report.ratio_bound {
        return Err(CliError::VerifyFailed {
            ratio: format_rational(&ratio),
            bound: format_rational(&report.ratio_bound),
        });
    }
    Ok(())
}

pub fn cmd_graph_stats(path: &Path, epsilon: Rational, out: &mut dyn Write) -> Result<(), CliError> {
    let loaded = load(path, epsilon)?;
    let n = loaded.instance.n();
    let norm = normalize(&loaded.instance)?;
    let k = resolve_k(&norm, None)?;
    let graph = build_cost_graph(&norm, &k)?;
    let (node_bound, arc_bound) = graph.size_bounds(n);
    let nodes = Rational::from_integer(graph.node_count().into());
    let arcs = Rational::from_integer(graph.arc_count().into());
    write_table(
        &[
            vec!["words".into(), n.to_string()],
            vec!["epsilon'".into(), format_rational(&norm.epsilon_prime)],
            vec!["k".into(), format_rational(&k)],
            vec!["levels".into(), graph.level_count().to_string()],
            vec!["nodes".into(), graph.node_count().to_string()],
            vec!["node bound nk/eps".into(), both(&node_bound)],
            vec!["arcs".into(), graph.arc_count().to_string()],
            vec!["arc bound d*nk/eps".into(), both(&arc_bound)],
            vec![
                "within bounds".into(),
                if nodes <= node_bound && arcs <= arc_bound { "yes" } else { "no" }.into(),
            ],
        ],
        out,
    )?;
    Ok(())
}
