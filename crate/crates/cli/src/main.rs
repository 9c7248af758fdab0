use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use starkit::formats::{
    read_graph, to_json_line, write_dimacs, write_dimacs_labels, write_edgelist, CertificateDoc,
    ExactResultDoc, IsoWitnessDoc, SplitMapDoc,
};
use starkit::parallel::{run_exact, worker_count, Driven};
use starkit::report::{write_report, ReportOptions};
use starkit::seed::candidate_from_certificate;
use starkit::{CliError, CliResult};
use starkit_core::cuts::{build_cuts_from_x, build_fragment_x, verify_certificate, Verdict};
use starkit_core::formulas::{
    an_formula, kappa_nkstar_formula, lambda_nkstar_formula, star_formula, FamilyParams,
};
use starkit_core::iso::{edge_sets_equal, isomorphic};
use starkit_core::oracle::OracleOptions;
use starkit_core::split::{split_graph, split_nkstar, MatchingRule};
use starkit_core::topology::{build_alternating_network, build_nkstar, build_star};
use starkit_core::{Error, Graph, Measure};

/// Permutation-network topologies, exact h-super connectivity, and
/// verifiable cut certificates.
#[derive(Parser)]
#[command(name = "starkit", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a graph family instance and write it to a file or stdout.
    Gen(GenArgs),
    /// Evaluate a closed-form connectivity value.
    Formula(FormulaArgs),
    /// Build the optimal cut certificate for an (n,k)-star instance.
    Cut(CutArgs),
    /// Check a certificate against a graph file.
    Verify(VerifyArgs),
    /// Run the exact oracle on a graph file.
    Exact(ExactArgs),
    /// Split a graph: every vertex becomes t copies, every edge a matching.
    Split(SplitArgs),
    /// Compare two graphs, by aligned labels or by isomorphism search.
    Iso(IsoArgs),
    /// Formula-versus-oracle reproduction table as CSV.
    Report(ReportArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Graph family: star | nkstar | an
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: u8,
    /// Arrangement length (nkstar only)
    #[arg(long)]
    k: Option<u8>,
    /// Output format: edgelist | dimacs
    #[arg(long, default_value = "edgelist")]
    format: String,
    /// Output path; stdout if omitted (edgelist only)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FormulaArgs {
    /// Family: nkstar | star | an
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    h: u32,
    /// kappa | lambda; required where the measures differ
    #[arg(long)]
    measure: Option<String>,
}

#[derive(Args)]
struct CutArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    h: u32,
    /// vertex | edge
    #[arg(long)]
    kind: String,
    /// Output path; stdout if omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: String,
    #[arg(long)]
    cert: PathBuf,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long)]
    graph: String,
    #[arg(long)]
    h: u32,
    /// kappa | lambda
    #[arg(long)]
    measure: String,
    /// Restrict fragments to those containing rank 0 (caller asserts
    /// vertex-transitivity)
    #[arg(long)]
    symmetry: bool,
    /// Largest fragment size to enumerate; lowering it below |V|/2 turns
    /// the run into a flagged non-exhaustive bound
    #[arg(long)]
    cap: Option<usize>,
    /// Wall-clock budget in seconds
    #[arg(long, default_value_t = 600)]
    timeout: u64,
    /// Seed the search with a verified certificate file
    #[arg(long)]
    seed_cert: Option<PathBuf>,
}

#[derive(Args)]
struct SplitArgs {
    /// Build the suffix split of an (n,k)-star (with --k)
    #[arg(long)]
    n: Option<u8>,
    #[arg(long)]
    k: Option<u8>,
    /// Split an arbitrary graph file (with --t)
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    t: Option<usize>,
    /// Matching rule for --graph mode: parallel
    #[arg(long, default_value = "parallel")]
    rule: String,
    /// Output path for the split graph; stdout if omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output path for the block map JSON
    #[arg(long)]
    map_out: Option<PathBuf>,
}

#[derive(Args)]
struct IsoArgs {
    /// labels | search
    #[arg(long)]
    mode: String,
    /// First graph file ('-' reads an edgelist from stdin)
    a: String,
    /// Second graph file
    b: String,
    /// Node budget for the search mode
    #[arg(long, default_value_t = 50_000_000)]
    budget: u64,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    n_max: u32,
    /// Comma-separated: kappa,lambda
    #[arg(long, default_value = "kappa,lambda")]
    measures: String,
    #[arg(long)]
    symmetry: bool,
    /// Per-oracle-run budget in seconds
    #[arg(long, default_value_t = 600)]
    timeout: u64,
    /// Output path; stdout if omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> CliResult<i32> {
    match cli.cmd {
        Cmd::Gen(args) => cmd_gen(args),
        Cmd::Formula(args) => cmd_formula(args),
        Cmd::Cut(args) => cmd_cut(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Exact(args) => cmd_exact(args),
        Cmd::Split(args) => cmd_split(args),
        Cmd::Iso(args) => cmd_iso(args),
        Cmd::Report(args) => cmd_report(args),
    }
}

fn parse_measure(s: &str) -> CliResult<Measure> {
    Measure::from_str(s).ok_or_else(|| CliError::domain(format!("unknown measure {s:?}")))
}

fn build_family(family: &str, n: u8, k: Option<u8>) -> CliResult<Graph> {
    match family {
        "star" => Ok(build_star(n)?),
        "an" => Ok(build_alternating_network(n)?),
        "nkstar" => {
            let k = k.ok_or_else(|| CliError::domain("--k is required for family nkstar"))?;
            Ok(build_nkstar(n, k)?)
        }
        other => Err(CliError::domain(format!("unknown family {other:?}"))),
    }
}

fn cmd_gen(args: GenArgs) -> CliResult<i32> {
    let g = build_family(&args.family, args.n, args.k)?;
    let counts = format!("nv={} ne={}", g.vertex_count(), g.edge_count());
    match args.format.as_str() {
        "edgelist" => match &args.out {
            Some(path) => {
                let mut f = std::fs::File::create(path)?;
                write_edgelist(&g, &mut f)?;
                println!("{counts}");
            }
            None => {
                write_edgelist(&g, &mut std::io::stdout().lock())?;
                eprintln!("{counts}");
            }
        },
        "dimacs" => {
            let path = args
                .out
                .as_ref()
                .ok_or_else(|| CliError::domain("dimacs output requires --out"))?;
            let mut f = std::fs::File::create(path)?;
            write_dimacs(&g, &mut f)?;
            let labels_path = format!("{}.labels.json", path.display());
            let mut lf = std::fs::File::create(&labels_path)?;
            write_dimacs_labels(&g, &mut lf)?;
            println!("{counts}");
        }
        other => return Err(CliError::domain(format!("unknown format {other:?}"))),
    }
    Ok(0)
}

fn cmd_formula(args: FormulaArgs) -> CliResult<i32> {
    let measure = args.measure.as_deref().map(parse_measure).transpose()?;
    let result = match args.family.as_str() {
        "nkstar" => {
            let k = args
                .k
                .ok_or_else(|| CliError::domain("--k is required for family nkstar"))?;
            let p = FamilyParams::new(args.n, k, args.h)?;
            match measure
                .ok_or_else(|| CliError::domain("--measure is required for family nkstar"))?
            {
                Measure::Kappa => kappa_nkstar_formula(&p)?,
                Measure::Lambda => lambda_nkstar_formula(&p)?,
            }
        }
        "star" => star_formula(args.n, args.h)?,
        "an" => {
            let measure = match measure {
                Some(m) => m,
                None if args.h >= 2 => Measure::Kappa, // measures agree there
                None => {
                    return Err(CliError::domain(
                        "--measure is required for family an with h < 2",
                    ))
                }
            };
            an_formula(args.n, args.h, measure)?
        }
        other => return Err(CliError::domain(format!("unknown family {other:?}"))),
    };
    println!("{} ({})", result.value, result.branch);
    Ok(0)
}

fn cmd_cut(args: CutArgs) -> CliResult<i32> {
    let p = FamilyParams::new(args.n, args.k, args.h)?;
    let n = u8::try_from(args.n).map_err(|_| CliError::domain("n out of range"))?;
    let k = u8::try_from(args.k).map_err(|_| CliError::domain("k out of range"))?;
    let g = build_nkstar(n, k)?;
    let x = build_fragment_x(&p)?;
    let (vertex_cert, edge_cert) = build_cuts_from_x(&g, &p, &x)?;
    let cert = match args.kind.as_str() {
        "vertex" => vertex_cert,
        "edge" => edge_cert,
        other => return Err(CliError::domain(format!("unknown cut kind {other:?}"))),
    };
    let json = to_json_line(&CertificateDoc::from_core(&cert))?;
    match &args.out {
        Some(path) => std::fs::write(path, json)?,
        None => print!("{json}"),
    }
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> CliResult<i32> {
    let g = read_graph(&args.graph)?;
    let text = std::fs::read_to_string(&args.cert)?;
    let doc: CertificateDoc = serde_json::from_str(&text)
        .map_err(|e| CliError::domain(format!("bad certificate json: {e}")))?;
    let cert = doc.to_core()?;
    match verify_certificate(&g, &cert)? {
        Verdict::Valid => {
            println!("valid kind={} size={}", cert.cut.kind().as_str(), cert.claimed_size);
            Ok(0)
        }
        Verdict::Invalid(reason) => {
            println!("invalid: {reason}");
            Ok(1)
        }
    }
}

fn cmd_exact(args: ExactArgs) -> CliResult<i32> {
    let g = read_graph(&args.graph)?;
    let measure = parse_measure(&args.measure)?;
    let seed = match &args.seed_cert {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let doc: CertificateDoc = serde_json::from_str(&text)
                .map_err(|e| CliError::domain(format!("bad certificate json: {e}")))?;
            let cert = doc.to_core()?;
            if cert.params.h != args.h {
                return Err(CliError::domain(format!(
                    "seed certificate is for h={}, run is for h={}",
                    cert.params.h, args.h
                )));
            }
            Some(candidate_from_certificate(&g, &cert)?)
        }
        None => None,
    };
    let opts = OracleOptions {
        symmetry: args.symmetry,
        fragment_cap: args.cap,
        seed,
    };
    let workers = worker_count()?;
    match run_exact(
        &g,
        measure,
        args.h,
        &opts,
        workers,
        Some(Duration::from_secs(args.timeout)),
    )? {
        Driven::Done(result, _) => {
            print!("{}", to_json_line(&ExactResultDoc::from_core(&result, &g))?);
            Ok(0)
        }
        Driven::TimedOut(took) => Err(CliError::Core(Error::resource(format!(
            "oracle run timed out after {took:.2?}"
        )))),
    }
}

fn cmd_split(args: SplitArgs) -> CliResult<i32> {
    let (split, map, base) = match (&args.n, &args.graph) {
        (Some(n), None) => {
            let k = args
                .k
                .ok_or_else(|| CliError::domain("--k is required with --n"))?;
            if args.t.is_some() {
                return Err(CliError::domain(
                    "--t is implied by the suffix construction; drop it",
                ));
            }
            let base = build_nkstar(*n, k)?;
            let (split, map) = split_nkstar(*n, k)?;
            (split, map, base)
        }
        (None, Some(path)) => {
            let base = read_graph(path)?;
            let t = args
                .t
                .ok_or_else(|| CliError::domain("--t is required with --graph"))?;
            let rule = MatchingRule::from_str(&args.rule)
                .ok_or_else(|| CliError::domain(format!("unknown rule {:?}", args.rule)))?;
            let (split, map) = split_graph(&base, t, rule)?;
            (split, map, base)
        }
        _ => {
            return Err(CliError::domain(
                "pass either --n with --k, or --graph with --t",
            ))
        }
    };
    let counts = format!("nv={} ne={}", split.vertex_count(), split.edge_count());
    match &args.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            write_edgelist(&split, &mut f)?;
            println!("{counts}");
        }
        None => {
            write_edgelist(&split, &mut std::io::stdout().lock())?;
            eprintln!("{counts}");
        }
    }
    if let Some(path) = &args.map_out {
        let doc = SplitMapDoc::from_core(&map, &base, &split);
        std::fs::write(path, to_json_line(&doc)?)?;
    }
    Ok(0)
}

fn cmd_iso(args: IsoArgs) -> CliResult<i32> {
    if args.a == "-" && args.b == "-" {
        return Err(CliError::domain("only one input may be stdin"));
    }
    let ga = read_graph(&args.a)?;
    let gb = read_graph(&args.b)?;
    match args.mode.as_str() {
        "labels" => {
            if edge_sets_equal(&ga, &gb) {
                println!("equal");
                Ok(0)
            } else {
                println!("not equal");
                Ok(1)
            }
        }
        "search" => match isomorphic(&ga, &gb, args.budget)? {
            Some(witness) => {
                print!("{}", to_json_line(&IsoWitnessDoc::from_core(&witness, &ga, &gb))?);
                Ok(0)
            }
            None => {
                println!("not isomorphic");
                Ok(1)
            }
        },
        other => Err(CliError::domain(format!("unknown mode {other:?}"))),
    }
}

fn cmd_report(args: ReportArgs) -> CliResult<i32> {
    let measures: Vec<Measure> = args
        .measures
        .split(',')
        .map(|s| parse_measure(s.trim()))
        .collect::<CliResult<_>>()?;
    if measures.is_empty() {
        return Err(CliError::domain("no measures requested"));
    }
    let opts = ReportOptions {
        n_max: args.n_max,
        measures,
        symmetry: args.symmetry,
        timeout: Duration::from_secs(args.timeout),
        workers: worker_count()?,
    };
    match &args.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            write_report(&opts, &mut f)?;
            f.flush()?;
        }
        None => write_report(&opts, &mut std::io::stdout().lock())?,
    }
    Ok(0)
}
