//! Command-line analyser for finite higher-rank graph presentations.

#![forbid(unsafe_code)]

use std::collections::BTreeMap;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kga::format::{self, ParseError};
use kga::report::{self, Report};
use kga::dot;
use kgraph::classify::{self, AfStatus, StructureOutcome};
use kgraph::constructions::{self, Functor};
use kgraph::cycles;
use kgraph::ideals;
use kgraph::ktheory;
use kgraph::traces;
use kgraph::{Degree, Error as KError, Limits, Skeleton};

#[derive(Parser)]
#[command(name = "kga", version, about = "Analyse finite higher-rank graph presentations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a presentation: square bijectivity, the rank-3 cube condition,
    /// local convexity, and source bookkeeping.
    Validate(FileArgs),
    /// Cycles, generalised cycles, and entrances, up to a degree bound.
    Analyze(BoundedArgs),
    /// AF verdict with certificates.
    Classify(BoundedArgs),
    /// Structure report: matrix summands, infinite projections, or torus
    /// classes.
    Structure(BoundedArgs),
    /// Graph-trace solution space and the normalised faithful trace.
    Trace(FileArgs),
    /// K-groups (rank at most two) and the vertex-class criterion.
    Ktheory(FileArgs),
    /// Hereditary-quotient sweep for generalised cycles.
    Sweep(BoundedArgs),
    /// Construct a graph and write it as a `.kg` file.
    Build {
        #[command(subcommand)]
        what: BuildCommand,
    },
    /// Write a DOT rendering of the skeleton.
    ExportDot {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// List the fixture catalogue.
    Fixtures,
}

#[derive(Args)]
struct FileArgs {
    file: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BoundedArgs {
    file: PathBuf,
    /// Degree bound, one coordinate or a comma list (default 2 per colour).
    #[arg(long)]
    max_degree: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum BuildCommand {
    /// A fixture from the built-in catalogue.
    Fixture {
        name: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// The grid category on points below --max.
    Omega {
        #[arg(long)]
        rank: usize,
        /// Comma-separated maximum point.
        #[arg(long)]
        max: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Pullback of BASE along the colour map (one base colour per new
    /// colour, e.g. --map 1,1).
    Pullback {
        base: PathBuf,
        #[arg(long)]
        map: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Product of two presentations.
    Product {
        left: PathBuf,
        right: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Window of the skew product of BASE by an edge functor.
    Skew {
        base: PathBuf,
        /// Edge assignment, e.g. "e1=0,1;e2=1,1;f1=-1,1;f2=0,1".
        #[arg(long)]
        functor: String,
        #[arg(long, allow_hyphen_values = true)]
        lo: String,
        #[arg(long, allow_hyphen_values = true)]
        hi: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Length-functor construction over a one-colour BASE.
    Example42 {
        base: PathBuf,
        #[arg(long)]
        colours: usize,
        /// Per-edge twist, e.g. "a=1;b=0" (0 means the zero vector).
        #[arg(long)]
        c0: String,
        #[arg(short, long)]
        output: PathBuf,
    },
}

enum CliError {
    Parse(String),
    Validation(String),
    Limit(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Limit(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Validation(m) | CliError::Limit(m) => m,
        }
    }
}

impl From<KError> for CliError {
    fn from(e: KError) -> Self {
        match e {
            KError::LimitExceeded(_) => CliError::Limit(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn load(path: &FsPath) -> Result<Skeleton, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let sk = format::parse(&text).map_err(|e| match e {
        ParseError::Syntax { .. } => CliError::Parse(format!("{}: {e}", path.display())),
        ParseError::Build(err) => CliError::Validation(format!("{}: {err}", path.display())),
    })?;
    Ok(apply_env_limits(sk))
}

fn apply_env_limits(sk: Skeleton) -> Skeleton {
    match std::env::var("KGA_MAX_STATES")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        Some(max_states) => {
            let limits = Limits {
                max_states,
                ..*sk.limits()
            };
            sk.with_limits(limits)
        }
        None => sk,
    }
}

fn load_accepted(path: &FsPath) -> Result<Skeleton, CliError> {
    let sk = load(path)?;
    let v = sk.validate();
    if !v.accepted {
        return Err(CliError::Validation(format!(
            "{}: presentation rejected\n{}",
            path.display(),
            v.describe(&sk)
        )));
    }
    Ok(sk)
}

fn parse_degree(spec: &Option<String>, rank: usize) -> Result<Degree, CliError> {
    match spec {
        None => Ok(Degree::constant(rank, 2)),
        Some(s) => {
            let parts: Vec<&str> = s.split(',').collect();
            let coords: Result<Vec<u32>, _> = parts.iter().map(|p| p.trim().parse()).collect();
            let coords =
                coords.map_err(|_| CliError::Parse(format!("bad degree bound `{s}`")))?;
            match coords.len() {
                1 => Ok(Degree::constant(rank, coords[0])),
                n if n == rank => Ok(Degree::new(coords)),
                _ => Err(CliError::Parse(format!(
                    "degree bound `{s}` does not match rank {rank}"
                ))),
            }
        }
    }
}

fn parse_signed_vec(s: &str, rank: usize) -> Result<Vec<i64>, CliError> {
    let coords: Result<Vec<i64>, _> = s.split(',').map(|p| p.trim().parse()).collect();
    let coords = coords.map_err(|_| CliError::Parse(format!("bad vector `{s}`")))?;
    if coords.len() != rank {
        return Err(CliError::Parse(format!(
            "vector `{s}` does not match rank {rank}"
        )));
    }
    Ok(coords)
}

fn emit(report: Report, json: bool, human: String) {
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serialisable"));
    } else {
        print!("{human}");
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate(args) => {
            let sk = load(&args.file)?;
            let v = sk.validate();
            let accepted = v.accepted;
            let report = Report {
                graph: report::summarize(&sk),
                checks: serde_json::json!({
                    "validation": v.describe(&sk).lines().collect::<Vec<_>>(),
                }),
                verdict: None,
                certificates: Vec::new(),
                bounds: report::bounds_json(&sk, &Degree::zero(sk.rank())),
                version: report::VERSION,
            };
            emit(report, args.json, v.describe(&sk));
            if !accepted {
                return Err(CliError::Validation("presentation rejected".into()));
            }
            Ok(())
        }
        Command::Analyze(args) => {
            let sk = load_accepted(&args.file)?;
            let bound = parse_degree(&args.max_degree, sk.rank())?;
            let cycle = cycles::has_conventional_cycle(&sk);
            let gen_cycles = cycles::find_generalised_cycles(&sk, &bound, false)?;
            let mut human = String::new();
            let mut certificates = Vec::new();
            match &cycle {
                Some(c) => {
                    human.push_str(&format!("conventional cycle: {}\n", c.display(&sk)));
                    let entrance = cycles::cycle_has_entrance(&sk, c)?;
                    match &entrance {
                        Some(e) => human.push_str(&format!("  entrance: {}\n", e.display(&sk))),
                        None => human.push_str("  no entrance\n"),
                    }
                    certificates.push(report::CertificateJson::ConventionalCycle {
                        cycle: report::path_json(&sk, c),
                    });
                }
                None => human.push_str("no conventional cycle\n"),
            }
            human.push_str(&format!(
                "generalised cycles up to {bound} (reduced pairs): {}\n",
                gen_cycles.len()
            ));
            for g in &gen_cycles {
                human.push_str(&format!(
                    "  ({}, {}){}\n",
                    g.mu.display(&sk),
                    g.nu.display(&sk),
                    if g.has_entrance {
                        format!(
                            " with entrance {}",
                            g.entrance.as_ref().expect("witness").display(&sk)
                        )
                    } else {
                        " without entrance".to_string()
                    }
                ));
                certificates.push(report::gen_cycle_json(&sk, g));
            }
            let report = Report {
                graph: report::summarize(&sk),
                checks: serde_json::json!({
                    "conventional_cycle": cycle.as_ref().map(|c| report::path_json(&sk, c)),
                    "generalised_cycles": gen_cycles.len(),
                }),
                verdict: None,
                certificates,
                bounds: report::bounds_json(&sk, &bound),
                version: report::VERSION,
            };
            emit(report, args.json, human);
            Ok(())
        }
        Command::Classify(args) => {
            let sk = load_accepted(&args.file)?;
            let bound = parse_degree(&args.max_degree, sk.rank())?;
            let verdict = classify::classify_af(&sk, &bound)?;
            let mut human = format!(
                "status: {}\n",
                match verdict.status {
                    AfStatus::Af => "AF",
                    AfStatus::NotAf => "NotAF",
                    AfStatus::Unknown => "Unknown",
                }
            );
            if verdict.status == AfStatus::Af {
                if let Ok(summands) = classify::finite_dim_decomposition(&sk) {
                    human.push_str("finite-dimensional decomposition:\n");
                    for (v, dim) in &summands {
                        human.push_str(&format!(
                            "  M_{dim} at vertex {}\n",
                            sk.vertex_name(*v)
                        ));
                    }
                }
            }
            let certificates: Vec<_> = verdict
                .reasons
                .iter()
                .map(|c| report::certificate_json(&sk, c))
                .collect();
            for c in &verdict.reasons {
                match c {
                    classify::Certificate::ConventionalCycle { cycle } => {
                        human.push_str(&format!("cycle: {}\n", cycle.display(&sk)));
                    }
                    classify::Certificate::GeneralisedCycle { gen_cycle } => {
                        human.push_str(&format!(
                            "generalised cycle: ({}, {})\n",
                            gen_cycle.mu.display(&sk),
                            gen_cycle.nu.display(&sk)
                        ));
                    }
                    classify::Certificate::QuotientGenCycle {
                        hereditary,
                        gen_cycle,
                        quotient,
                    } => {
                        human.push_str(&format!(
                            "quotient generalised cycle: H = {{{}}}, ({}, {})\n",
                            hereditary.names(&sk).join(", "),
                            gen_cycle.mu.display(quotient),
                            gen_cycle.nu.display(quotient)
                        ));
                    }
                }
            }
            let report = Report {
                graph: report::summarize(&sk),
                checks: serde_json::json!({}),
                verdict: Some(report::verdict_json(&verdict)),
                certificates,
                bounds: report::bounds_json(&sk, &bound),
                version: report::VERSION,
            };
            emit(report, args.json, human);
            Ok(())
        }
        Command::Structure(args) => {
            let sk = load_accepted(&args.file)?;
            let bound = parse_degree(&args.max_degree, sk.rank())?;
            let structure = classify::structure_report(&sk, &bound)?;
            let mut human = String::new();
            match &structure.outcome {
                StructureOutcome::FiniteDimensional {
                    summands,
                    unique_source,
                } => {
                    human.push_str("finite-dimensional\n");
                    for (v, dim) in summands {
                        human.push_str(&format!("  M_{dim} at {}\n", sk.vertex_name(*v)));
                    }
                    if *unique_source {
                        human.push_str("  unique source\n");
                    }
                }
                StructureOutcome::InfiniteProjection {
                    cycle,
                    entrance,
                    cofinal_proxy,
                    purely_infinite,
                    aperiodicity,
                } => {
                    human.push_str(&format!(
                        "contains an infinite projection (cycle {} with entrance {})\n",
                        cycle.display(&sk),
                        entrance.display(&sk)
                    ));
                    human.push_str(&format!("  cofinality proxy: {cofinal_proxy}\n"));
                    human.push_str(&format!("  aperiodicity: {aperiodicity:?}\n"));
                    if *purely_infinite {
                        human.push_str("  purely infinite\n");
                    }
                }
                StructureOutcome::ToriDecomposition { classes } => {
                    human.push_str("no cycle has an entrance; torus decomposition:\n");
                    for c in classes {
                        human.push_str(&format!(
                            "  C(T^{}) class of {} on {{{}}}\n",
                            c.torus_rank,
                            c.cycle.display(&sk),
                            c.orbit
                                .iter()
                                .map(|&v| sk.vertex_name(v))
                                .collect::<Vec<_>>()
                                .join(", ")
                        ));
                    }
                }
            }
            human.push_str(&format!(
                "cycle search bound: {}\n",
                structure.cycle_search_bound
            ));
            let report = Report {
                graph: report::summarize(&sk),
                checks: serde_json::json!({
                    "structure": report::structure_outcome_json(&sk, &structure.outcome),
                    "cycle_search_bound": structure.cycle_search_bound.coords(),
                }),
                verdict: None,
                certificates: Vec::new(),
                bounds: report::bounds_json(&sk, &bound),
                version: report::VERSION,
            };
            emit(report, args.json, human);
            Ok(())
        }
        Command::Trace(args) => {
            let sk = load_accepted(&args.file)?;
            let basis = traces::graph_trace_space(&sk);
            let trace = traces::normalized_faithful_trace(&sk);
            let mut human = format!("trace space dimension: {}\n", basis.len());
            match &trace {
                Some(t) => {
                    human.push_str("normalised faithful trace:\n");
                    for (v, val) in &t.values {
                        human.push_str(&format!("  {} = {}\n", sk.vertex_name(*v), val));
                    }
                }
                None => human.push_str("no normalised faithful trace\n"),
            }
            let report = Report {
                graph: report::summarize(&sk),
                checks: serde_json::json!({
                    "trace_space_dimension": basis.len(),
                    "faithful_trace": trace.as_ref().map(|t| {
                        t.values.iter().map(|(v, val)| {
                            serde_json::json!({
                                "vertex": sk.vertex_name(*v),
                                "value": val.to_string(),
                            })
                        }).collect::<Vec<_>>()
                    }),
                }),
                verdict: None,
                certificates: Vec::new(),
                bounds: report::bounds_json(&sk, &Degree::zero(sk.rank())),
                version: report::VERSION,
            };
            emit(report, args.json, human);
            Ok(())
        }
        Command::Ktheory(args) => {
            let sk = load_accepted(&args.file)?;
            let k = ktheory::kgroups(&sk)?;
            let criterion = if sk.rank() == 2 {
                Some(ktheory::vertex_class_criterion(&sk)?)
            } else {
                None
            };
            let mut human = format!("K_0 = {}\nK_1 = {}\n", k.k0, k.k1);
            if let Some(c) = criterion {
                human.push_str(&format!("vertex classes generate K_0: {c}\n"));
            }
            let report = Report {
                graph: report::summarize(&sk),
                checks: serde_json::json!({
                    "k0": k.k0.to_string(),
                    "k1": k.k1.to_string(),
                    "generators_from_vertices": k.generators_from_vertices,
                    "vertex_class_criterion": criterion,
                }),
                verdict: None,
                certificates: Vec::new(),
                bounds: report::bounds_json(&sk, &Degree::zero(sk.rank())),
                version: report::VERSION,
            };
            emit(report, args.json, human);
            Ok(())
        }
        Command::Sweep(args) => {
            let sk = load_accepted(&args.file)?;
            let bound = parse_degree(&args.max_degree, sk.rank())?;
            let hits = ideals::quotient_gencycle_sweep(&sk, &bound)?;
            let mut human = format!("hereditary sweep hits: {}\n", hits.len());
            let mut certificates = Vec::new();
            for hit in &hits {
                human.push_str(&format!(
                    "  H = {{{}}}: ({}, {})\n",
                    hit.hereditary.names(&sk).join(", "),
                    hit.gen_cycle.mu.display(&hit.quotient),
                    hit.gen_cycle.nu.display(&hit.quotient)
                ));
                certificates.push(report::CertificateJson::QuotientGenCycle {
                    hereditary: hit.hereditary.names(&sk),
                    saturation_bound: hit
                        .hereditary
                        .saturation_bound
                        .as_ref()
                        .map(|d| d.coords().to_vec())
                        .unwrap_or_default(),
                    mu: report::path_json(&hit.quotient, &hit.gen_cycle.mu),
                    nu: report::path_json(&hit.quotient, &hit.gen_cycle.nu),
                });
            }
            let report = Report {
                graph: report::summarize(&sk),
                checks: serde_json::json!({ "hits": hits.len() }),
                verdict: None,
                certificates,
                bounds: report::bounds_json(&sk, &bound),
                version: report::VERSION,
            };
            emit(report, args.json, human);
            Ok(())
        }
        Command::Build { what } => build(what),
        Command::ExportDot { file, output } => {
            let sk = load(&file)?;
            std::fs::write(&output, dot::export(&sk))
                .map_err(|e| CliError::Parse(format!("{}: {e}", output.display())))?;
            println!("wrote {}", output.display());
            Ok(())
        }
        Command::Fixtures => {
            for name in constructions::fixture_names() {
                println!("{name}");
            }
            Ok(())
        }
    }
}

fn write_skeleton(sk: &Skeleton, output: &FsPath) -> Result<(), CliError> {
    std::fs::write(output, format::print(sk))
        .map_err(|e| CliError::Parse(format!("{}: {e}", output.display())))?;
    println!(
        "wrote {} ({} vertices, {} edges, {} squares)",
        output.display(),
        sk.vertex_count(),
        sk.edge_count(),
        sk.squares().len()
    );
    Ok(())
}

fn parse_functor(sk: &Skeleton, spec: &str) -> Result<Functor, CliError> {
    let mut values = BTreeMap::new();
    for item in spec.split(';') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (name, vec) = item
            .split_once('=')
            .ok_or_else(|| CliError::Parse(format!("bad functor item `{item}`")))?;
        let e = sk
            .edge(name.trim())
            .ok_or_else(|| CliError::Parse(format!("unknown edge `{}`", name.trim())))?;
        values.insert(e, parse_signed_vec(vec, sk.rank())?);
    }
    Ok(Functor::new(sk.rank(), values))
}

fn build(what: BuildCommand) -> Result<(), CliError> {
    match what {
        BuildCommand::Fixture { name, output } => match constructions::fixture(&name) {
            Some(sk) => write_skeleton(&sk, &output),
            None => {
                let known = constructions::fixture_names().join(", ");
                Err(CliError::Parse(format!(
                    "unknown fixture `{name}`; known: {known}"
                )))
            }
        },
        BuildCommand::Omega { rank, max, output } => {
            let coords: Result<Vec<u32>, _> = max.split(',').map(|p| p.trim().parse()).collect();
            let coords = coords.map_err(|_| CliError::Parse(format!("bad point `{max}`")))?;
            if coords.len() != rank {
                return Err(CliError::Parse(format!(
                    "point `{max}` does not match rank {rank}"
                )));
            }
            let sk = constructions::build_omega(rank, &Degree::new(coords));
            write_skeleton(&sk, &output)
        }
        BuildCommand::Pullback { base, map, output } => {
            let base = load_accepted(&base)?;
            let columns: Result<Vec<usize>, _> =
                map.split(',').map(|p| p.trim().parse()).collect();
            let columns = columns.map_err(|_| CliError::Parse(format!("bad map `{map}`")))?;
            let sk = constructions::build_pullback(&base, &columns)?;
            write_skeleton(&sk, &output)
        }
        BuildCommand::Product {
            left,
            right,
            output,
        } => {
            let left = load_accepted(&left)?;
            let right = load_accepted(&right)?;
            let sk = constructions::build_product(&left, &right)?;
            write_skeleton(&sk, &output)
        }
        BuildCommand::Skew {
            base,
            functor,
            lo,
            hi,
            output,
        } => {
            let base = load_accepted(&base)?;
            let c = parse_functor(&base, &functor)?;
            let lo = parse_signed_vec(&lo, base.rank())?;
            let hi = parse_signed_vec(&hi, base.rank())?;
            let built = constructions::build_skew_window(&base, &c, &lo, &hi)?;
            println!(
                "window repair: {} boundary edges skipped, {} edges deleted, {} squares dropped",
                built.skipped_boundary_edges, built.repaired_edges, built.dropped_squares
            );
            write_skeleton(&built.skeleton, &output)
        }
        BuildCommand::Example42 {
            base,
            colours,
            c0,
            output,
        } => {
            let base = load_accepted(&base)?;
            let mut map = BTreeMap::new();
            for item in c0.split(';') {
                let item = item.trim();
                if item.is_empty() {
                    continue;
                }
                let (name, j) = item
                    .split_once('=')
                    .ok_or_else(|| CliError::Parse(format!("bad c0 item `{item}`")))?;
                let j: usize = j
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Parse(format!("bad c0 value in `{item}`")))?;
                map.insert(name.trim().to_string(), j);
            }
            let g = constructions::build_length_functor_graph(&base, &map, colours)?;
            let identities = constructions::verify_skew_identities(&g, 2)?;
            println!(
                "twist identities: {} pairs, {} quadruples, {}",
                identities.equal_source_pairs,
                identities.degree_quadruples,
                if identities.all_pass() { "pass" } else { "FAIL" }
            );
            write_skeleton(&g.pullback, &output)
        }
    }
}
