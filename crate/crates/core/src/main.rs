use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use bicircular_lpm::bicircular::{bicircular, classify_circuit, BicircularError};
use bicircular_lpm::catalog::{
    excluded_minor, family_generate, family_member, CatalogError, ChainSpec, EndBlock, EndEdge, ExcludedMinorName,
    FamilySpec,
};
use bicircular_lpm::latticepath::{
    enumerate_lpms, is_lpm, lattice_path_matroid, standard_presentation, BoundedPathPair, LpmError,
    MAX_ORACLE_GROUND,
};
use bicircular_lpm::matroid::{Matroid, MatroidError, MAX_GROUND};
use bicircular_lpm::multigraph::{connected_multigraphs, GraphError, Multigraph};
use bicircular_lpm::recognizer::{
    cross_check_all, decide_lpm_via_minors_within, decide_lpm_with, Certificate, DecideOptions, Decision,
    RecognizerError, CROSS_CHECK_MAX_EDGES, DEFAULT_MINOR_BUDGET,
};

#[derive(Parser)]
#[command(name = "bclpm", version, about = "Bicircular matroids and lattice path matroid recognition")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel commands (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Add wall-clock milliseconds to the output (JSON key `timing_ms`).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether B(G) is a lattice path matroid.
    Recognize {
        file: PathBuf,
        /// Use the excluded-minor characterisation instead of the families.
        #[arg(long)]
        via_minors: bool,
        /// Decide each component of a disconnected B(G) and conjoin.
        #[arg(long)]
        per_component: bool,
        /// Edge budget for the excluded-minor route.
        #[arg(long, default_value_t = DEFAULT_MINOR_BUDGET)]
        max_edges: usize,
    },
    /// List the circuits of B(G) with their shapes.
    Circuits { file: PathBuf },
    /// Exhaustive lattice path test of a matroid in exchange format.
    IsLpm { file: PathBuf },
    /// Lattice path matroid tools.
    Lpm {
        #[command(subcommand)]
        action: LpmAction,
    },
    /// Print an excluded minor's presentation graph and matroid.
    Excluded {
        name: String,
        /// Also run the lattice path oracle on it.
        #[arg(long)]
        check_lpm: bool,
    },
    /// Graph family tools.
    Family {
        #[command(subcommand)]
        action: FamilyAction,
    },
    /// List lattice path matroids of a given rank and corank.
    Enumerate {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        corank: usize,
        /// Keep one matroid per isomorphism class.
        #[arg(long)]
        dedupe: bool,
    },
    /// Compare the three decision routes on all small connected multigraphs.
    Crosscheck {
        #[arg(long, default_value_t = 7)]
        max_edges: usize,
        /// Only graphs whose bicircular matroid is connected.
        #[arg(long)]
        connected_only: bool,
    },
    /// Timing runs.
    Bench {
        #[command(subcommand)]
        action: BenchAction,
    },
}

#[derive(Subcommand)]
enum LpmAction {
    /// Build M[P,Q] from `P=... Q=...`.
    Build { pair: Vec<String> },
}

#[derive(Subcommand)]
enum FamilyAction {
    /// Generate a graph from a family spec (JSON file).
    Gen { spec: PathBuf },
    /// Test family membership of a graph.
    Check { file: PathBuf },
}

#[derive(Subcommand)]
enum BenchAction {
    /// Time the family route on generated graphs.
    Recognize {
        #[arg(long, default_value = "F4")]
        family: String,
        #[arg(long)]
        blocks: usize,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
    },
}

/// A failed command and the exit code it maps to.
enum Failure {
    Parse(String),
    Budget(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 3,
            Failure::Budget(_) => 4,
            Failure::Other(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Parse(_) => "parse",
            Failure::Budget(_) => "budget",
            Failure::Other(_) => "failed",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Budget(m) | Failure::Other(m) => m,
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Parse { .. } => Failure::Parse(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

impl From<MatroidError> for Failure {
    fn from(e: MatroidError) -> Self {
        match e {
            MatroidError::Parse { .. } => Failure::Parse(e.to_string()),
            MatroidError::TooLarge(_) => Failure::Budget(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

impl From<LpmError> for Failure {
    fn from(e: LpmError) -> Self {
        match e {
            LpmError::BadStep(_) | LpmError::BadPair(_) | LpmError::EndpointMismatch | LpmError::Crossing(_) => {
                Failure::Parse(e.to_string())
            }
            LpmError::TooLarge(_) => Failure::Budget(e.to_string()),
            LpmError::Matroid(m) => m.into(),
            _ => Failure::Other(e.to_string()),
        }
    }
}

impl From<BicircularError> for Failure {
    fn from(e: BicircularError) -> Self {
        match e {
            BicircularError::Graph(g) => g.into(),
            BicircularError::Matroid(m) => m.into(),
            _ => Failure::Other(e.to_string()),
        }
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::UnknownName(_) | CatalogError::InvalidSpec(_) | CatalogError::IllegalRole { .. } => {
                Failure::Parse(e.to_string())
            }
            CatalogError::Graph(g) => g.into(),
            CatalogError::Matroid(m) => m.into(),
            CatalogError::Disconnected => Failure::Other(e.to_string()),
        }
    }
}

impl From<RecognizerError> for Failure {
    fn from(e: RecognizerError) -> Self {
        match e {
            RecognizerError::Budget { .. } => Failure::Budget(e.to_string()),
            RecognizerError::Catalog(c) => c.into(),
            RecognizerError::Bicircular(b) => b.into(),
            RecognizerError::Lpm(l) => l.into(),
            RecognizerError::NotConnected => Failure::Other(e.to_string()),
        }
    }
}

/// Command output: the JSON payload and its text rendering.
struct Output {
    payload: Value,
    text: String,
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Multigraph, Failure> {
    Ok(read(path)?.parse::<Multigraph>()?)
}

fn matroid_json(m: &Matroid) -> Value {
    json!({
        "ground": m.ground(),
        "rank": m.rank(),
        "bases": m.bases().collect::<Vec<_>>(),
    })
}

fn decision_text(d: &Decision) -> String {
    let verdict = if d.verdict.is_yes() { "yes" } else { "no" };
    let detail = match &d.certificate {
        Certificate::Family { witness } => format!("family {}", witness.family()),
        Certificate::FamilyMiss { trace } => format!("no family: {}", trace.reason),
        Certificate::ExcludedMinor { name, embedding } => format!(
            "contains {name} (delete {:?}, contract {:?})",
            embedding.delete, embedding.contract
        ),
        Certificate::MinorFree { .. } => "no excluded minor embeds".to_string(),
        Certificate::PathPair { witness } => format!("path pair {}", witness.pair),
        Certificate::NoPathPair { component } => format!("no path pair for component {component:?}"),
        Certificate::PerComponent { parts } => format!("{} components decided separately", parts.len()),
    };
    format!("{verdict}: {detail}")
}

fn recognize(file: &Path, via_minors: bool, per_component: bool, max_edges: usize) -> Result<Output, Failure> {
    let g = read_graph(file)?;
    let d = if via_minors {
        decide_lpm_via_minors_within(&g, max_edges)?
    } else {
        decide_lpm_with(&g, DecideOptions { per_component })?
    };
    Ok(Output { text: decision_text(&d), payload: to_value(&d) })
}

fn circuits(file: &Path) -> Result<Output, Failure> {
    let g = read_graph(file)?;
    let m = bicircular(&g)?;
    let mut list = Vec::new();
    let mut text = String::new();
    for c in m.circuits() {
        let kind = classify_circuit(&g, &c)?;
        text.push_str(&format!("{:<15} {:?}\n", kind.name(), c));
        list.push(json!({ "edges": c, "shape": kind }));
    }
    text.push_str(&format!("{} circuits, rank {}", list.len(), m.rank()));
    Ok(Output { payload: json!({ "rank": m.rank(), "circuits": list }), text })
}

fn oracle(file: &Path) -> Result<Output, Failure> {
    let m: Matroid = read(file)?.parse()?;
    let w = is_lpm(&m)?;
    let text = match &w {
        Some(w) => format!("yes: path pair {}, order {:?}", w.pair, w.order),
        None => "no".to_string(),
    };
    Ok(Output { payload: json!({ "is_lpm": w.is_some(), "witness": w }), text })
}

fn lpm_build(words: &[String]) -> Result<Output, Failure> {
    let pair: BoundedPathPair = words.join(" ").parse()?;
    let sys = standard_presentation(&pair);
    let m = lattice_path_matroid(&pair)?;
    let text = format!(
        "{pair}\nsets {:?}\nrank {} on {} elements, {} bases\n{}",
        sys.sets,
        m.rank(),
        m.len(),
        m.basis_count(),
        m.to_exchange().trim_end()
    );
    Ok(Output { payload: json!({ "pair": pair, "presentation": sys, "matroid": matroid_json(&m) }), text })
}

fn excluded(name: &str, check_lpm: bool) -> Result<Output, Failure> {
    let name: ExcludedMinorName = name.parse()?;
    let (g, m) = excluded_minor(name);
    let mut payload = json!({
        "name": name,
        "graph": g.to_mg(),
        "matroid": matroid_json(m),
    });
    // the text form is a valid .mg file, so it can be fed back to `recognize`
    let mut text = format!("# {name}: rank {} on {} elements\n", m.rank(), m.len());
    if check_lpm {
        let lpm = is_lpm(m)?.is_some();
        payload["is_lpm"] = json!(lpm);
        text.push_str(&format!("# lattice path matroid: {lpm}\n"));
    }
    text.push_str(g.to_mg().trim_end());
    Ok(Output { payload, text })
}

fn family_gen(spec: &Path) -> Result<Output, Failure> {
    let spec: FamilySpec = serde_json::from_str(&read(spec)?).map_err(|e| Failure::Parse(e.to_string()))?;
    let tagged = family_generate(&spec)?;
    let colours: Vec<Value> =
        tagged.colours.iter().map(|(e, c)| json!({ "edge": e, "colour": c })).collect();
    Ok(Output {
        text: tagged.graph.to_mg().trim_end().to_string(),
        payload: json!({ "family": spec.family(), "graph": tagged.graph.to_mg(), "colours": colours }),
    })
}

fn family_check(file: &Path) -> Result<Output, Failure> {
    let g = read_graph(file)?;
    let w = family_member(&g.without_isolated_vertices())?;
    let text = match &w {
        Some(w) => format!("member of {}: {}", w.family(), serde_json::to_string(&w.spec).unwrap_or_default()),
        None => "not a member of any family".to_string(),
    };
    Ok(Output { payload: json!({ "member": w.is_some(), "family": w.as_ref().map(|w| w.family()), "witness": w }), text })
}

fn enumerate(rank: usize, corank: usize, dedupe: bool) -> Result<Output, Failure> {
    if rank + corank > MAX_ORACLE_GROUND {
        return Err(Failure::Budget(format!(
            "{} elements exceed the enumeration budget of {MAX_ORACLE_GROUND}",
            rank + corank
        )));
    }
    let mut found: Vec<(BoundedPathPair, usize)> =
        enumerate_lpms(rank, corank, dedupe).into_iter().map(|(p, m)| (p, m.basis_count())).collect();
    found.sort();
    let text = found.iter().map(|(p, b)| format!("{p}  bases={b}")).collect::<Vec<_>>().join("\n");
    let list: Vec<Value> = found.iter().map(|(p, b)| json!({ "pair": p, "bases": b })).collect();
    Ok(Output {
        text: format!("{text}\n{} matroids", found.len()),
        payload: json!({ "rank": rank, "corank": corank, "dedupe": dedupe, "count": found.len(), "matroids": list }),
    })
}

fn crosscheck(max_edges: usize, connected_only: bool) -> Result<Output, Failure> {
    if max_edges > CROSS_CHECK_MAX_EDGES {
        return Err(Failure::Budget(format!(
            "--max-edges {max_edges} exceeds the cross-check budget of {CROSS_CHECK_MAX_EDGES}"
        )));
    }
    let graphs: Vec<Multigraph> = connected_multigraphs(max_edges)
        .into_iter()
        .flatten()
        .filter(|g| !connected_only || g.bicircular_is_connected())
        .collect();
    let report = cross_check_all(&graphs)?;
    let text = format!(
        "{} graphs, {} with a lattice path bicircular matroid, {} agreements, {} disagreements",
        report.checked,
        report.yes,
        report.agreements,
        report.disagreements.len()
    );
    Ok(Output { payload: to_value(&report), text })
}

/// An F4 chain with `blocks` middle blocks and two triangle end blocks.
fn bench_chain(blocks: usize) -> FamilySpec {
    let end = EndBlock { xq: 2, pq: 2, subdivided: EndEdge::Pq, len: 2, q_loops: 0 };
    FamilySpec::F4(ChainSpec {
        start: Some(end),
        middle: (0..blocks).map(|i| 1 + i % 3).collect(),
        end: Some(end),
        loops: (0..=blocks).map(|i| i % 2).collect(),
    })
}

fn bench(family: &str, blocks: usize, repeats: usize) -> Result<Output, Failure> {
    if !family.eq_ignore_ascii_case("F4") {
        return Err(Failure::Parse(format!("benchmarks are defined for F4 chains only, not `{family}`")));
    }
    let g = family_generate(&bench_chain(blocks))?.graph;
    let mut times = Vec::with_capacity(repeats.max(1));
    let mut verdict = None;
    for _ in 0..repeats.max(1) {
        let t = Instant::now();
        let d = decide_lpm_with(&g, DecideOptions::default())?;
        times.push(t.elapsed().as_secs_f64() * 1e3);
        verdict = Some(d.verdict);
    }
    times.sort_by(f64::total_cmp);
    let median = times[times.len() / 2];
    Ok(Output {
        text: format!("F4 chain, {blocks} middle blocks, {} edges: median {median:.3} ms", g.edge_count()),
        payload: json!({
            "family": "F4",
            "blocks": blocks,
            "edges": g.edge_count(),
            "verdict": verdict,
            "median_ms": median,
            "runs_ms": times,
        }),
    })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Recognize { file, via_minors, per_component, max_edges } => {
            recognize(file, *via_minors, *per_component, (*max_edges).min(MAX_GROUND))
        }
        Command::Circuits { file } => circuits(file),
        Command::IsLpm { file } => oracle(file),
        Command::Lpm { action: LpmAction::Build { pair } } => lpm_build(pair),
        Command::Excluded { name, check_lpm } => excluded(name, *check_lpm),
        Command::Family { action: FamilyAction::Gen { spec } } => family_gen(spec),
        Command::Family { action: FamilyAction::Check { file } } => family_check(file),
        Command::Enumerate { rank, corank, dedupe } => enumerate(*rank, *corank, *dedupe),
        Command::Crosscheck { max_edges, connected_only } => crosscheck(*max_edges, *connected_only),
        Command::Bench { action: BenchAction::Recognize { family, blocks, repeats } } => {
            bench(family, *blocks, *repeats)
        }
    }
}

/// Print a line to stdout; a closed pipe is not an error.
fn emit(line: &dyn std::fmt::Display) {
    let _ = writeln!(io::stdout().lock(), "{line}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // a second initialisation can only fail if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let start = Instant::now();
    let result = run(&cli);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    match result {
        Ok(out) => {
            if cli.json {
                let mut payload = out.payload;
                if let Value::Object(map) = &mut payload {
                    map.insert("status".into(), json!("ok"));
                    if cli.timing {
                        map.insert("timing_ms".into(), json!(elapsed_ms));
                    }
                }
                emit(&payload);
            } else {
                emit(&out.text);
                if cli.timing {
                    eprintln!("{elapsed_ms:.3} ms");
                }
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            if cli.json {
                emit(&json!({ "status": "error", "error": { "kind": f.kind(), "message": f.message() } }));
            } else {
                eprintln!("error: {}", f.message());
            }
            ExitCode::from(f.code())
        }
    }
}
