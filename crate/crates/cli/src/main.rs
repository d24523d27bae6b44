//! `arborpack` command-line front end.
//!
//! JSON goes to stdout, diagnostics to stderr. Exit status: 0 on success,
//! 1 when the answer is negative (infeasible, no packing, rejected
//! certificate, failed hypothesis), 2 on usage, input or size-guard errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use arborpack::edge_list::{parse_edge_list, write_digraph, write_graph, ParsedGraph};
use arborpack::feasibility::{self, Verdict, Violation};
use arborpack::sharpness::{verify_sharp, SharpInstance, SharpReport};
use arborpack::solver::{self, PackingCertificate, ProofOptions, VerificationReport};
use arborpack::uncross::{self, PieoTrace};
use arborpack::{limits, partitions, Digraph, Error, SubPartition, VertexSet};

#[derive(Parser)]
#[command(name = "arborpack", version, about = "Exact arborescence and branching packing on small multi-digraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fractional packing number with a minimizing subpartition (partition for undirected input).
    NuF { file: PathBuf },
    /// Fractional arboricity with a maximizing vertex set (directed input uses the underlying graph).
    GammaF { file: PathBuf },
    /// Decide k spanning arborescences, or with --c, k arborescences plus a c-root branching.
    Feasibility {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        c: Option<usize>,
        /// Comma-separated forced roots of the extra branching.
        #[arg(long, requires = "c")]
        roots: Option<String>,
        file: PathBuf,
    },
    /// Build and self-check k spanning arborescences plus a large branching.
    Pack {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        /// Follow the inductive construction and include its trace.
        #[arg(long)]
        proof_trace: bool,
        file: PathBuf,
    },
    /// Check a packing certificate against a digraph.
    Verify {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        file: PathBuf,
        cert: PathBuf,
    },
    /// Generate and certify the extremal instance for (k, d).
    Sharpness {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        /// Also write the edge list and report into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Uncross two subpartitions (syntax `0,1;2`) and show the in-degree chain.
    UncrossDemo { file: PathBuf, p1: String, p2: String },
}

/// A run that completed; `positive` selects exit 0 or 1.
struct Outcome {
    json: String,
    positive: bool,
}

impl Outcome {
    fn yes(value: impl Serialize) -> Result<Self> {
        Ok(Outcome { json: serde_json::to_string(&value)?, positive: true })
    }

    fn no(value: impl Serialize) -> Result<Self> {
        Ok(Outcome { json: serde_json::to_string(&value)?, positive: false })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = limits::max_vertices_from_env()
        .map_err(anyhow::Error::from)
        .and_then(|_| run(cli.command));
    match result {
        Ok(out) => {
            println!("{}", out.json);
            ExitCode::from(if out.positive { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::NuF { file } => nu_f(&file),
        Command::GammaF { file } => gamma_f(&file),
        Command::Feasibility { k, c, roots, file } => feasibility(&file, k, c, roots.as_deref()),
        Command::Pack { k, d, proof_trace, file } => pack(&file, k, d, proof_trace),
        Command::Verify { k, d, file, cert } => verify(&file, &cert, k, d),
        Command::Sharpness { k, d, out } => sharpness(k, d, out.as_deref()),
        Command::UncrossDemo { file, p1, p2 } => uncross_demo(&file, &p1, &p2),
    }
}

fn read_graph(path: &Path) -> Result<ParsedGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_edge_list(&text).with_context(|| format!("{}", path.display()))
}

fn read_digraph(path: &Path) -> Result<Digraph> {
    match read_graph(path)? {
        ParsedGraph::Directed(d) => Ok(d),
        ParsedGraph::Undirected(_) => bail!("{}: a directed graph is required", path.display()),
    }
}

#[derive(Serialize)]
struct RatioOut {
    value: String,
    witness: SubPartition,
}

fn nu_f(file: &Path) -> Result<Outcome> {
    let w = match read_graph(file)? {
        ParsedGraph::Directed(d) => partitions::nu_f_digraph(&d)?,
        ParsedGraph::Undirected(g) => partitions::nu_f_graph(&g)?,
    };
    Outcome::yes(RatioOut { value: w.value.to_string(), witness: w.witness })
}

#[derive(Serialize)]
struct DensityOut {
    value: String,
    set: VertexSet,
}

fn gamma_f(file: &Path) -> Result<Outcome> {
    let g = match read_graph(file)? {
        ParsedGraph::Directed(d) => d.underlying(),
        ParsedGraph::Undirected(g) => g,
    };
    let w = partitions::gamma_f(&g)?;
    Outcome::yes(DensityOut { value: w.value.to_string(), set: w.set })
}

fn parse_vertex_list(text: &str) -> Result<VertexSet> {
    let mut set = VertexSet::EMPTY;
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let v: usize = tok.parse().with_context(|| format!("{tok:?} is not a vertex"))?;
        if v >= 64 {
            bail!("vertex {v} out of range");
        }
        set.insert(v);
    }
    Ok(set)
}

fn parse_subpartition(text: &str, n: usize) -> Result<SubPartition> {
    let parts = text
        .split(';')
        .filter(|p| !p.trim().is_empty())
        .map(parse_vertex_list)
        .collect::<Result<Vec<_>>>()?;
    let sp = SubPartition::new(parts).with_context(|| format!("{text:?}"))?;
    if !sp.within(n) {
        bail!("{text:?} uses a vertex outside 0..{n}");
    }
    Ok(sp)
}

#[derive(Serialize)]
struct FeasibilityOut {
    feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<Violation>,
}

fn feasibility(file: &Path, k: usize, c: Option<usize>, roots: Option<&str>) -> Result<Outcome> {
    let d = read_digraph(file)?;
    let verdict = match c {
        None => feasibility::check_spanning_arborescences(&d, k)?,
        Some(c) => {
            let forced = roots.map(parse_vertex_list).transpose()?.unwrap_or_default();
            feasibility::check_k_plus_extra(&d, k, c, forced)?
        }
    };
    match verdict {
        Verdict::Feasible => Outcome::yes(FeasibilityOut { feasible: true, violation: None }),
        Verdict::Infeasible(v) => Outcome::no(FeasibilityOut { feasible: false, violation: Some(v) }),
    }
}

#[derive(Serialize)]
struct Refusal {
    ok: bool,
    explanation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<SubPartition>,
}

fn pack(file: &Path, k: usize, d: usize, proof_trace: bool) -> Result<Outcome> {
    let g = read_digraph(file)?;
    if d == 0 {
        bail!("--d must be at least 1");
    }
    let nu = partitions::nu_f_digraph(&g)?;
    let bound = partitions::packing_bound(k, d);
    if nu.value <= bound {
        let relation = if nu.value == bound { "=" } else { "<" };
        let explanation = format!("hypothesis fails: nu_f = {} {relation} k+(d-1)/d = {bound}", nu.value);
        eprintln!("{explanation}");
        return Outcome::no(Refusal { ok: false, explanation, witness: Some(nu.witness) });
    }
    let cert = if proof_trace {
        let (mut cert, trace) = solver::solve_theorem7_traced(&g, k, d, ProofOptions::default())?;
        for why in &trace.divergences {
            eprintln!("divergence: {why}");
        }
        cert.trace = Some(trace);
        cert
    } else {
        match solver::solve_exhaustive(&g, k, d)? {
            Some(cert) => cert,
            None => {
                let explanation = "no packing exists".to_string();
                eprintln!("{explanation}");
                return Outcome::no(Refusal { ok: false, explanation, witness: None });
            }
        }
    };
    let report = solver::verify_theorem7(&g, k, d, &cert);
    if !report.ok {
        bail!("internal error: produced certificate fails verification: {report}");
    }
    Outcome::yes(cert)
}

fn verify(file: &Path, cert_path: &Path, k: usize, d: usize) -> Result<Outcome> {
    let g = read_digraph(file)?;
    let text = fs::read_to_string(cert_path)
        .with_context(|| format!("cannot read {}", cert_path.display()))?;
    let cert: PackingCertificate = serde_json::from_str(&text)
        .with_context(|| format!("{}: not a packing certificate", cert_path.display()))?;
    let report: VerificationReport = solver::verify_theorem7(&g, k, d, &cert);
    if report.ok {
        Outcome::yes(report)
    } else {
        eprintln!("{report}");
        Outcome::no(report)
    }
}

#[derive(Serialize)]
struct SharpOut {
    k: usize,
    d: usize,
    edge_list: String,
    undirected_edge_list: String,
    forests: Vec<Vec<usize>>,
    roots: Vec<VertexSet>,
    component_counts: Vec<usize>,
    report: SharpReport,
}

fn sharpness(k: usize, d: usize, out: Option<&Path>) -> Result<Outcome> {
    let inst = match SharpInstance::build(k, d) {
        Ok(inst) => inst,
        Err(e @ Error::Construction(_)) => {
            eprintln!("{e}");
            return Outcome::no(Refusal { ok: false, explanation: e.to_string(), witness: None });
        }
        Err(e) => return Err(e.into()),
    };
    let report = verify_sharp(&inst.digraph, k, d);
    let result = SharpOut {
        k,
        d,
        edge_list: write_digraph(&inst.digraph),
        undirected_edge_list: write_graph(&inst.graph),
        component_counts: inst.component_counts(),
        forests: inst.forests,
        roots: inst.roots,
        report,
    };
    if let Some(dir) = out {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        let stem = format!("sharp_k{k}_d{d}");
        fs::write(dir.join(format!("{stem}.txt")), &result.edge_list)?;
        fs::write(dir.join(format!("{stem}.json")), serde_json::to_string_pretty(&result)?)?;
    }
    if result.report.ok {
        Outcome::yes(result)
    } else {
        for f in &result.report.failures {
            eprintln!("{f}");
        }
        Outcome::no(result)
    }
}

#[derive(Serialize)]
struct UncrossOut {
    trace: PieoTrace,
    in_degree_chain: Vec<usize>,
    all_steps_equal: bool,
}

fn uncross_demo(file: &Path, p1: &str, p2: &str) -> Result<Outcome> {
    let g = read_digraph(file)?;
    let a = parse_subpartition(p1, g.n())?;
    let b = parse_subpartition(p2, g.n())?;
    let trace = uncross::pieo_run(&a, &b);
    let all_steps_equal = uncross::submodular_chain_check(&g, &trace);
    let in_degree_chain = uncross::chain_sums(&g, &trace);
    Outcome::yes(UncrossOut { trace, in_degree_chain, all_steps_equal })
}
