//! `pspec`: generate graphs, estimate spectral radii, build decompositions
//! and check bounds from the command line.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use planar_spectra::decompose::{decompose, verify_decomposition, DecomposeError, Variant};
use planar_spectra::generators::{gen_hkd, gen_named, gen_tessellation, Family, FamilyParams, GenError};
use planar_spectra::graph::orient_max_indegree;
use planar_spectra::io::{read_graph_doc, GraphDoc, IoError};
use planar_spectra::spectral::{rho_power, SpectralError, SpectralEstimate};
use planar_spectra::tessellation::{analyze_patch, TessError};
use planar_spectra::verify::{default_corpus, min_orienting_k, named_corpus, verify_corpus, VerificationRow};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "pspec",
    version,
    about = "Spectral radius bounds for planar, bounded-genus and tessellation graphs"
)]
struct Cli {
    /// Power-iteration tolerance on the certified interval width.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Reserved; every generator is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Corpus {
    Default,
    Named,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph as JSON.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Certified spectral radius interval of a graph file.
    Rho { input: PathBuf },
    /// Decompose a graph and check the result.
    Decompose {
        input: PathBuf,
        #[arg(long, default_value = "a")]
        variant: Variant,
        /// Euler genus of a surface the graph embeds in.
        #[arg(long, default_value_t = 0)]
        genus: usize,
        /// `K_{2,k}`-freeness parameter for variant c.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Orient edges with bounded indegree.
    Orient {
        input: PathBuf,
        /// Indegree bound; the smallest feasible one by default.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Layer, earthworm and forest analysis of a tessellation patch.
    TessAnalyze {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        r: usize,
    },
    /// Check every applicable bound on a graph corpus.
    Verify {
        #[arg(long, value_enum, default_value_t = Corpus::Default)]
        corpus: Corpus,
        /// Leave out rows for this bound id (repeatable).
        #[arg(long)]
        exclude_bound: Vec<String>,
        /// Add per-graph wall-clock times (output is then not reproducible).
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// The layered graph `H^{k,d}_i`.
    Hkd {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        i: usize,
    },
    /// A ball of the `{p,q}` tessellation with `r` face layers.
    Tess {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        r: usize,
    },
    /// A named family.
    Named {
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        arity: usize,
        #[arg(long, default_value_t = 0)]
        depth: usize,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Read { path: String, source: io::Error },
    #[error("writing output: {0}")]
    Write(#[from] io::Error),
    #[error(transparent)]
    Input(#[from] IoError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Tess(#[from] TessError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("--format csv is only available for verify")]
    CsvUnsupported,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    params: Value,
    result: T,
}

#[derive(Serialize)]
struct RhoReport {
    n: usize,
    m: usize,
    max_degree: usize,
    lower: f64,
    upper: f64,
    converged: bool,
    iterations: usize,
    component_size: usize,
    tolerance: f64,
}

impl RhoReport {
    fn new(doc: &GraphDoc, max_degree: usize, est: &SpectralEstimate, converged: bool) -> Self {
        RhoReport {
            n: doc.n,
            m: doc.edges.len(),
            max_degree,
            lower: est.lower,
            upper: est.upper,
            converged,
            iterations: est.iterations,
            component_size: est.component.len(),
            tolerance: est.tolerance,
        }
    }
}

/// One CSV line per row; params are embedded as a JSON string.
#[derive(Serialize)]
struct CsvRow<'a> {
    graph_id: &'a str,
    family: &'a str,
    params: String,
    max_degree: usize,
    genus: Option<usize>,
    rho_lower: f64,
    rho_upper: f64,
    bound_id: &'a str,
    bound_value: f64,
    satisfied: bool,
    runtime_ms: Option<u64>,
}

struct Out {
    path: Option<PathBuf>,
}

impl Out {
    fn write(&self, text: &str) -> Result<(), CliError> {
        match &self.path {
            Some(p) => fs::write(p, text)?,
            None => io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn json<T: Serialize>(&self, command: &str, params: Value, result: T) -> Result<(), CliError> {
        let env = Envelope {
            tool: "pspec",
            version: VERSION,
            command,
            params,
            result,
        };
        let mut text = serde_json::to_string_pretty(&env)?;
        text.push('\n');
        self.write(&text)
    }
}

fn read_input(path: &Path) -> Result<GraphDoc, CliError> {
    let mut text = String::new();
    let read = if path == Path::new("-") {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })?;
    Ok(read_graph_doc(&text)?)
}

fn params(pairs: &[(&str, usize)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|&(k, v)| (k.to_string(), json!(v))).collect()
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let out = Out {
        path: cli.output.clone(),
    };
    if cli.format == Format::Csv && !matches!(cli.command, Command::Verify { .. }) {
        return Err(CliError::CsvUnsupported);
    }
    let tol = cli.tol;
    match cli.command {
        Command::Gen(gen) => {
            let doc = match gen {
                GenCommand::Hkd { k, d, i } => {
                    let h = gen_hkd(k, d, i)?;
                    GraphDoc::from_layered(&h).with_params(params(&[("k", k), ("d", d), ("i", i)]))
                }
                GenCommand::Tess { p, q, r } => {
                    let t = gen_tessellation(p, q, r)?;
                    GraphDoc::from_patch(&t).with_params(params(&[("p", p), ("q", q), ("radius", r)]))
                }
                GenCommand::Named {
                    family,
                    n,
                    m,
                    arity,
                    depth,
                    rounds,
                } => {
                    let g = gen_named(
                        family,
                        FamilyParams {
                            n,
                            m,
                            arity,
                            depth,
                            rounds,
                        },
                    )?;
                    let mut ps = params(&[
                        ("n", n),
                        ("m", m),
                        ("arity", arity),
                        ("depth", depth),
                        ("rounds", rounds),
                    ]);
                    ps.insert("family".into(), json!(family.to_string()));
                    GraphDoc::from_graph(&g).with_params(ps)
                }
            };
            let mut text = serde_json::to_string(&doc)?;
            text.push('\n');
            out.write(&text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Rho { input } => {
            let doc = read_input(&input)?;
            let g = doc.graph()?;
            let (est, converged) = match rho_power(&g, tol) {
                Ok(est) => (est, true),
                Err(SpectralError::IterationLimit { last, .. }) => (*last, false),
                Err(e) => return Err(e.into()),
            };
            let report = RhoReport::new(&doc, g.max_degree(), &est, converged);
            out.json("rho", json!({ "input": input, "tol": tol }), report)?;
            Ok(if converged {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Decompose {
            input,
            variant,
            genus,
            k,
        } => {
            let doc = read_input(&input)?;
            let g = doc.graph()?;
            let d = match decompose(&g, genus, variant, k) {
                Ok(d) => d,
                Err(e @ DecomposeError::NoReductionApplies { .. }) => {
                    eprintln!("error: {e}");
                    return Ok(ExitCode::from(2));
                }
                Err(e) => return Err(e.into()),
            };
            let report = verify_decomposition(&g, &d);
            let passed = report.passed;
            let params = json!({ "input": input, "variant": variant, "genus": genus, "k": d.k });
            out.json("decompose", params, json!({ "decomposition": d, "report": report }))?;
            Ok(if passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Orient { input, k } => {
            let doc = read_input(&input)?;
            let g = doc.graph()?;
            let k = k.unwrap_or_else(|| min_orienting_k(&g));
            let params = json!({ "input": input, "k": k });
            match orient_max_indegree(&g, k) {
                Ok(o) => {
                    let max_indegree = o.max_indegree(g.vertex_count());
                    out.json(
                        "orient",
                        params,
                        json!({ "k": k, "max_indegree": max_indegree, "arcs": o.arcs }),
                    )?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    out.json(
                        "orient",
                        params,
                        json!({ "k": k, "error": e.to_string(), "dense_set": e.dense_set, "edges": e.edges }),
                    )?;
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        Command::TessAnalyze { p, q, r } => {
            let patch = gen_tessellation(p, q, r)?;
            let report = analyze_patch(&patch, tol)?;
            let passed = report.passed;
            out.json(
                "tess-analyze",
                json!({ "p": p, "q": q, "radius": r, "tol": tol }),
                report,
            )?;
            Ok(if passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Verify {
            corpus,
            exclude_bound,
            timings,
        } => {
            let entries = match corpus {
                Corpus::Default => default_corpus(),
                Corpus::Named => named_corpus(),
            };
            let rows: Vec<VerificationRow> = verify_corpus(&entries, tol, timings)?
                .into_iter()
                .filter(|r| !exclude_bound.contains(&r.bound_id))
                .collect();
            let ok = rows.iter().all(|r| r.satisfied);
            match cli.format {
                Format::Json => {
                    let corpus_name = match corpus {
                        Corpus::Default => "default",
                        Corpus::Named => "named",
                    };
                    let params = json!({ "corpus": corpus_name, "tol": tol, "exclude_bound": exclude_bound });
                    out.json("verify", params, &rows)?;
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    for r in &rows {
                        w.serialize(CsvRow {
                            graph_id: &r.graph_id,
                            family: &r.family,
                            params: serde_json::to_string(&r.params)?,
                            max_degree: r.max_degree,
                            genus: r.genus,
                            rho_lower: r.rho_lower,
                            rho_upper: r.rho_upper,
                            bound_id: &r.bound_id,
                            bound_value: r.bound_value,
                            satisfied: r.satisfied,
                            runtime_ms: r.runtime_ms,
                        })?;
                    }
                    let bytes = w.into_inner().map_err(|e| e.into_error())?;
                    out.write(&String::from_utf8_lossy(&bytes))?;
                }
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
