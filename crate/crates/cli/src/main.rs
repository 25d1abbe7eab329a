//! Batch entry point: one action per invocation, flags only, JSON on stdout
//! (the machine contract), human logs on stderr, atomic file outputs.
//! Exit codes: 0 ran to completion (verdicts live in the JSON), 1 usage
//! error, 2 malformed input, 3 cap exceeded.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use uturan_core::audit;
use uturan_core::certificate::ColoringCertificate;
use uturan_core::colorability::{
    check_fixed_ordering, search_colorable, verify_certificate, CertificateCheck,
    FixedOrderingOutcome, SearchMode, SearchOptions, SearchOutcome, DEFAULT_EXHAUSTIVE_CAP,
    DEFAULT_HEURISTIC_TRIES,
};
use uturan_core::constructions::{
    affine_lines, fan_expansion, fan_expansion_random, greedy_linear, growth_and_union_bound,
    phi3_witness, random_palette_hypergraph, FanChoice,
};
use uturan_core::error::Error;
use uturan_core::hypergraph::Hypergraph;
use uturan_core::palette::Palette;
use uturan_core::audit::triad_product_check;
use uturan_core::partitioned::{
    embed_search, extract_phi3_skeleton, random_partitioned_from_palette, role_host_from_palette,
    verify_embedding,
    Embedding, PartitionedHypergraph, SkeletonOutcome,
};
use uturan_core::rational::{parse_decimal, to_decimal_12, Rat};
use uturan_core::rng::SplitMix64;

const VERSION_LINE: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    " (formats hg/1 phg/1 cert/1 palette/1)"
);

#[derive(Parser)]
#[command(name = "uturan", version = VERSION_LINE)]
#[command(about = "Palette colorability, constructions, and uniform density audits for 3-uniform hypergraphs")]
struct Cli {
    /// Cap on worker threads for parallel scans
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate hypergraphs and hosts
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Check properties and verify artifacts
    Check {
        #[command(subcommand)]
        what: CheckCommand,
    },
    /// Density audits
    Audit {
        #[command(subcommand)]
        what: AuditCommand,
    },
    /// Search for an embedding of a guest into a partitioned host
    Embed(EmbedArgs),
    /// Run the seven-color skeleton extraction pipeline on a host
    ExtractSkeleton(ExtractArgs),
}

#[derive(Subcommand)]
enum GenCommand {
    /// Random pair-coloring construction from a palette
    PaletteRandom(GenPaletteRandomArgs),
    /// Line hypergraph of the d-dimensional affine space of order 5
    Affine(GenAffineArgs),
    /// Edge-maximal 5-uniform linear hypergraph, greedy over a seeded order
    GreedyLinear(GenGreedyArgs),
    /// Expand each 5-edge into the three triples through a chosen pair
    FanExpand(GenFanArgs),
    /// Random partitioned host from per-vertex palette colors
    PartitionedRandom(GenPartitionedArgs),
}

#[derive(Args)]
struct GenPaletteRandomArgs {
    /// Built-in palette name (phi0, phi3, phi8) or a palette file
    #[arg(long)]
    palette: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
    /// Also write the identity-ordering pair coloring as a certificate
    #[arg(long)]
    emit_certificate: Option<PathBuf>,
}

#[derive(Args)]
struct GenAffineArgs {
    /// Dimension d, 1..=5
    #[arg(long)]
    dim: usize,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct GenGreedyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct GenFanArgs {
    /// 5-uniform linear hypergraph file
    #[arg(long)]
    input: PathBuf,
    /// Accept non-canonical input files and re-canonicalize
    #[arg(long)]
    normalize: bool,
    /// Read the chosen pairs from a file (lines `<edge-index> <v> <v'>`)
    /// instead of drawing them
    #[arg(long)]
    choices: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
    /// Write the chosen pairs, one line per 5-edge
    #[arg(long)]
    emit_choices: Option<PathBuf>,
    /// Write the seven-color witness coloring (identity ordering)
    #[arg(long)]
    emit_certificate: Option<PathBuf>,
}

#[derive(Args)]
struct GenPartitionedArgs {
    #[arg(long)]
    palette: String,
    #[arg(long)]
    parts: usize,
    /// Ignored with --role-host (the part size is then the color count)
    #[arg(long, default_value_t = 1, conflicts_with = "role_host")]
    part_size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Deterministic role host: one vertex per palette color per part,
    /// vertex v carrying color v
    #[arg(long)]
    role_host: bool,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Decide palette colorability by ordering search (or one fixed ordering)
    Colorable(CheckColorableArgs),
    /// Verify a coloring certificate against a hypergraph and palette
    Certificate(CheckCertificateArgs),
    /// Evaluate the n! < (10/9)^m growth bound in log space
    Growth(CheckGrowthArgs),
    /// Linearity and pair-coverage of a hypergraph
    Linear(CheckLinearArgs),
    /// Verify an embedding file against a host and guest
    Embedding(CheckEmbeddingArgs),
}

#[derive(Args)]
struct CheckColorableArgs {
    #[arg(long)]
    palette: String,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    normalize: bool,
    /// exhaustive or heuristic
    #[arg(long, default_value = "exhaustive")]
    mode: String,
    /// Check a single fixed ordering (comma-separated vertex labels)
    /// instead of searching
    #[arg(long)]
    ordering: Option<String>,
    /// Vertex-count cap for exhaustive search
    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
    cap: usize,
    /// Orderings tried in heuristic mode
    #[arg(long, default_value_t = DEFAULT_HEURISTIC_TRIES)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sequential canonical enumeration; first certificate in canonical order
    #[arg(long)]
    deterministic: bool,
    #[arg(long)]
    emit_certificate: Option<PathBuf>,
}

#[derive(Args)]
struct CheckCertificateArgs {
    #[arg(long)]
    palette: String,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    normalize: bool,
    #[arg(long)]
    certificate: PathBuf,
}

#[derive(Args)]
struct CheckGrowthArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    m: u64,
}

#[derive(Args)]
struct CheckLinearArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    normalize: bool,
}

#[derive(Args)]
struct CheckEmbeddingArgs {
    #[arg(long)]
    host: PathBuf,
    #[arg(long)]
    guest: PathBuf,
    #[arg(long)]
    normalize: bool,
    #[arg(long)]
    embedding: PathBuf,
}

#[derive(Subcommand)]
enum AuditCommand {
    /// Minimum subset density, sampled or exact
    Density(AuditDensityArgs),
    /// Per-triad product bound check on a partitioned host
    Triads(AuditTriadsArgs),
}

#[derive(Args)]
struct AuditDensityArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    normalize: bool,
    /// Decimal in (0, 1]
    #[arg(long)]
    epsilon: String,
    /// sampled or exact
    #[arg(long, default_value = "sampled")]
    mode: String,
    #[arg(long, default_value_t = 100)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Vertex-count cap for exact mode
    #[arg(long, default_value_t = audit::DEFAULT_EXACT_CAP)]
    cap: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AuditTriadsArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    normalize: bool,
    /// Decimal in (0, 1)
    #[arg(long)]
    epsilon: String,
}

#[derive(Args)]
struct EmbedArgs {
    #[arg(long)]
    host: PathBuf,
    #[arg(long)]
    guest: PathBuf,
    #[arg(long)]
    normalize: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExtractArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    normalize: bool,
    /// Decimal density surplus; the pipeline threshold eps is delta/20
    #[arg(long)]
    delta: String,
    /// Fail any stage that retains fewer indices than this
    #[arg(long, default_value_t = 3)]
    min_size: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let usage_ok = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = err.print();
            std::process::exit(if usage_ok { 0 } else { 1 });
        }
    };
    if let Some(threads) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build_global();
    }
    match run(cli.command) {
        Ok(value) => {
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(exit_code(&err));
        }
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::CapExceeded(_) => 3,
        _ => 2,
    }
}

fn run(command: Command) -> Result<serde_json::Value, Error> {
    match command {
        Command::Gen { what } => run_gen(what),
        Command::Check { what } => run_check(what),
        Command::Audit { what } => run_audit(what),
        Command::Embed(args) => run_embed(args),
        Command::ExtractSkeleton(args) => run_extract(args),
    }
}

// ----------------------------------------------------------------------
// helpers
// ----------------------------------------------------------------------

fn load_palette(name_or_path: &str) -> Result<Palette, Error> {
    if let Some(p) = Palette::builtin(name_or_path) {
        return Ok(p);
    }
    let text = std::fs::read_to_string(name_or_path)?;
    Palette::parse(&text)
}

fn load_hypergraph(path: &Path, normalize: bool) -> Result<Hypergraph, Error> {
    let text = std::fs::read_to_string(path)?;
    Hypergraph::parse(&text, !normalize)
}

fn load_partitioned(path: &Path, normalize: bool) -> Result<PartitionedHypergraph, Error> {
    let text = std::fs::read_to_string(path)?;
    PartitionedHypergraph::parse(&text, !normalize)
}

/// Write via a temp file in the target directory plus rename.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Error> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(dir) => tempfile::NamedTempFile::new_in(dir)?,
        None => tempfile::NamedTempFile::new_in(".")?,
    };
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn parse_eps(s: &str) -> Result<Rat, Error> {
    parse_decimal(s)
}

fn cert_json_with_palette(cert: &ColoringCertificate) -> serde_json::Value {
    cert.to_json()
}

fn parse_ordering(s: &str, n: usize) -> Result<Vec<u32>, Error> {
    let ordering: Vec<u32> = s
        .split(',')
        .map(|w| {
            w.trim()
                .parse()
                .map_err(|_| Error::malformed(format!("bad ordering entry {w:?}")))
        })
        .collect::<Result<_, _>>()?;
    if ordering.len() != n {
        return Err(Error::malformed(format!(
            "ordering has {} entries for {n} vertices",
            ordering.len()
        )));
    }
    Ok(ordering)
}

fn choices_to_text(choice: &FanChoice) -> String {
    let mut out = String::new();
    for (idx, (v, w)) in choice.pairs.iter().enumerate() {
        out.push_str(&format!("{idx} {v} {w}\n"));
    }
    out
}

fn choices_from_text(text: &str, edge_count: usize) -> Result<FanChoice, Error> {
    let mut pairs = vec![None; edge_count];
    for line in text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
    {
        let vals: Vec<u32> = line
            .split_ascii_whitespace()
            .map(|w| {
                w.parse()
                    .map_err(|_| Error::malformed(format!("bad choice field {w:?}")))
            })
            .collect::<Result<_, _>>()?;
        if vals.len() != 3 {
            return Err(Error::malformed(format!(
                "choice line {line:?} must be `<edge-index> <v> <v'>`"
            )));
        }
        let idx = vals[0] as usize;
        if idx >= edge_count {
            return Err(Error::malformed(format!(
                "choice references edge {idx}, hypergraph has {edge_count}"
            )));
        }
        let (v, w) = (vals[1].min(vals[2]), vals[1].max(vals[2]));
        if vals[1] == vals[2] {
            return Err(Error::malformed(format!("choice for edge {idx} repeats a vertex")));
        }
        pairs[idx] = Some((v, w));
    }
    let pairs: Option<Vec<(u32, u32)>> = pairs.into_iter().collect();
    match pairs {
        Some(pairs) => Ok(FanChoice { pairs }),
        None => Err(Error::malformed("choices file misses some edge index".to_string())),
    }
}

// ----------------------------------------------------------------------
// gen
// ----------------------------------------------------------------------

fn run_gen(cmd: GenCommand) -> Result<serde_json::Value, Error> {
    match cmd {
        GenCommand::PaletteRandom(args) => {
            let palette = load_palette(&args.palette)?;
            let mut rng = SplitMix64::new(args.seed);
            let (h, cert) = random_palette_hypergraph(&palette, args.n, &mut rng)?;
            write_atomic(&args.output, &h.to_text())?;
            if let Some(cert_path) = &args.emit_certificate {
                write_atomic(cert_path, &cert.to_json_string())?;
            }
            eprintln!(
                "palette-random: n={} m={} seed={} -> {}",
                h.vertex_count(),
                h.edge_count(),
                args.seed,
                args.output.display()
            );
            Ok(json!({
                "action": "gen palette-random",
                "palette": args.palette,
                "k": h.uniformity(),
                "n": h.vertex_count(),
                "m": h.edge_count(),
                "seed": args.seed,
                "output": args.output,
            }))
        }
        GenCommand::Affine(args) => {
            let h = affine_lines(args.dim)?;
            write_atomic(&args.output, &h.to_text())?;
            eprintln!(
                "affine: dim={} n={} m={} -> {}",
                args.dim,
                h.vertex_count(),
                h.edge_count(),
                args.output.display()
            );
            Ok(json!({
                "action": "gen affine",
                "dim": args.dim,
                "k": h.uniformity(),
                "n": h.vertex_count(),
                "m": h.edge_count(),
                "output": args.output,
            }))
        }
        GenCommand::GreedyLinear(args) => {
            let mut rng = SplitMix64::new(args.seed);
            let h = greedy_linear(args.n, &mut rng)?;
            write_atomic(&args.output, &h.to_text())?;
            eprintln!(
                "greedy-linear: n={} m={} seed={} -> {}",
                h.vertex_count(),
                h.edge_count(),
                args.seed,
                args.output.display()
            );
            Ok(json!({
                "action": "gen greedy-linear",
                "k": h.uniformity(),
                "n": h.vertex_count(),
                "m": h.edge_count(),
                "seed": args.seed,
                "output": args.output,
            }))
        }
        GenCommand::FanExpand(args) => {
            let h5 = load_hypergraph(&args.input, args.normalize)?;
            let (h3, choice) = match &args.choices {
                Some(path) => {
                    let text = std::fs::read_to_string(path)?;
                    let choice = choices_from_text(&text, h5.edge_count())?;
                    (fan_expansion(&h5, &choice)?, choice)
                }
                None => {
                    let mut rng = SplitMix64::new(args.seed);
                    fan_expansion_random(&h5, &mut rng)?
                }
            };
            write_atomic(&args.output, &h3.to_text())?;
            if let Some(path) = &args.emit_choices {
                write_atomic(path, &choices_to_text(&choice))?;
            }
            if let Some(path) = &args.emit_certificate {
                let ordering: Vec<u32> = (0..h5.vertex_count() as u32).collect();
                let cert = phi3_witness(&h5, &choice, &ordering)?;
                write_atomic(path, &cert.to_json_string())?;
            }
            eprintln!(
                "fan-expand: {} 5-edges -> {} triples -> {}",
                h5.edge_count(),
                h3.edge_count(),
                args.output.display()
            );
            Ok(json!({
                "action": "gen fan-expand",
                "k": 3,
                "n": h3.vertex_count(),
                "m": h3.edge_count(),
                "source_edges": h5.edge_count(),
                "seed": args.seed,
                "output": args.output,
            }))
        }
        GenCommand::PartitionedRandom(args) => {
            let palette = load_palette(&args.palette)?;
            let ph = if args.role_host {
                role_host_from_palette(&palette, args.parts)?
            } else {
                let mut rng = SplitMix64::new(args.seed);
                random_partitioned_from_palette(&palette, args.parts, args.part_size, &mut rng)?
            };
            write_atomic(&args.output, &ph.to_text())?;
            eprintln!(
                "partitioned-random: N={} s={} edges={} seed={} -> {}",
                ph.n_parts(),
                ph.part_size(),
                ph.edge_count(),
                args.seed,
                args.output.display()
            );
            Ok(json!({
                "action": "gen partitioned-random",
                "palette": args.palette,
                "parts": ph.n_parts(),
                "part_size": ph.part_size(),
                "edges": ph.edge_count(),
                "seed": args.seed,
                "output": args.output,
            }))
        }
    }
}

// ----------------------------------------------------------------------
// check
// ----------------------------------------------------------------------

fn run_check(cmd: CheckCommand) -> Result<serde_json::Value, Error> {
    match cmd {
        CheckCommand::Colorable(args) => {
            let palette = load_palette(&args.palette)?;
            let h = load_hypergraph(&args.input, args.normalize)?;
            if let Some(ordering) = &args.ordering {
                let ordering = parse_ordering(ordering, h.vertex_count())?;
                return match check_fixed_ordering(&h, &palette, &ordering)? {
                    FixedOrderingOutcome::Feasible(cert) => {
                        if let Some(path) = &args.emit_certificate {
                            write_atomic(path, &cert.to_json_string())?;
                        }
                        eprintln!("fixed ordering: feasible");
                        Ok(json!({
                            "action": "check colorable",
                            "colorable": true,
                            "fixed_ordering": ordering,
                            "certificate": cert_json_with_palette(&cert),
                        }))
                    }
                    FixedOrderingOutcome::Infeasible(w) => {
                        eprintln!("fixed ordering: infeasible at pair {:?}", w.pair);
                        let constraints: Vec<serde_json::Value> = w
                            .constraints
                            .iter()
                            .map(|c| {
                                json!({
                                    "edge": c.edge,
                                    "role": format!("{:?}", c.role),
                                    "domain": c.domain,
                                })
                            })
                            .collect();
                        Ok(json!({
                            "action": "check colorable",
                            "colorable": false,
                            "fixed_ordering": ordering,
                            "witness": {
                                "pair": [w.pair.0, w.pair.1],
                                "constraints": constraints,
                            },
                        }))
                    }
                };
            }
            let mode = match args.mode.as_str() {
                "exhaustive" => SearchMode::Exhaustive,
                "heuristic" => SearchMode::Heuristic,
                other => {
                    return Err(Error::malformed(format!(
                        "mode must be exhaustive or heuristic, got {other:?}"
                    )))
                }
            };
            let options = SearchOptions {
                mode,
                exhaustive_cap: args.cap,
                heuristic_tries: args.budget,
                deterministic: args.deterministic,
                seed: args.seed,
            };
            match search_colorable(&h, &palette, &options)? {
                SearchOutcome::Colorable(cert) => {
                    if let Some(path) = &args.emit_certificate {
                        write_atomic(path, &cert.to_json_string())?;
                    }
                    eprintln!("colorable; ordering {:?}", cert.ordering());
                    Ok(json!({
                        "action": "check colorable",
                        "colorable": true,
                        "mode": args.mode,
                        "certificate": cert_json_with_palette(&cert),
                    }))
                }
                SearchOutcome::NotColorable => {
                    eprintln!("not colorable (exhausted all orderings)");
                    Ok(json!({
                        "action": "check colorable",
                        "colorable": false,
                        "mode": args.mode,
                    }))
                }
                SearchOutcome::Unknown { tried_orderings } => {
                    eprintln!("unknown after {tried_orderings} orderings");
                    Ok(json!({
                        "action": "check colorable",
                        "colorable": null,
                        "mode": args.mode,
                        "tried_orderings": tried_orderings,
                    }))
                }
            }
        }
        CheckCommand::Certificate(args) => {
            let palette = load_palette(&args.palette)?;
            let h = load_hypergraph(&args.input, args.normalize)?;
            let cert = ColoringCertificate::from_json_str(&std::fs::read_to_string(
                &args.certificate,
            )?)?;
            match verify_certificate(&h, &palette, &cert)? {
                CertificateCheck::Valid => {
                    eprintln!("certificate valid");
                    Ok(json!({"action": "check certificate", "valid": true}))
                }
                CertificateCheck::Violated { edge, triple } => {
                    eprintln!("certificate violated at edge {edge:?}");
                    Ok(json!({
                        "action": "check certificate",
                        "valid": false,
                        "violating_edge": edge,
                        "triple": triple,
                    }))
                }
            }
        }
        CheckCommand::Growth(args) => {
            let bound = growth_and_union_bound(args.n, args.m);
            eprintln!(
                "growth: log_margin = {:.6} -> {}",
                bound.log_margin,
                if bound.holds { "holds" } else { "fails" }
            );
            Ok(json!({
                "action": "check growth",
                "n": args.n,
                "m": args.m,
                "holds": bound.holds,
                "log_margin": bound.log_margin,
            }))
        }
        CheckCommand::Linear(args) => {
            let h = load_hypergraph(&args.input, args.normalize)?;
            let linear = h.is_linear();
            let exact_cover = h.covers_every_pair_exactly_once();
            eprintln!("linear: {linear}, every pair exactly once: {exact_cover}");
            Ok(json!({
                "action": "check linear",
                "k": h.uniformity(),
                "n": h.vertex_count(),
                "m": h.edge_count(),
                "linear": linear,
                "covers_every_pair_exactly_once": exact_cover,
            }))
        }
        CheckCommand::Embedding(args) => {
            let ph = load_partitioned(&args.host, args.normalize)?;
            let guest = load_hypergraph(&args.guest, args.normalize)?;
            let emb = Embedding::from_json_str(&std::fs::read_to_string(&args.embedding)?)?;
            let valid = verify_embedding(&ph, &guest, &emb);
            eprintln!("embedding valid: {valid}");
            Ok(json!({"action": "check embedding", "valid": valid}))
        }
    }
}

// ----------------------------------------------------------------------
// audit
// ----------------------------------------------------------------------

fn run_audit(cmd: AuditCommand) -> Result<serde_json::Value, Error> {
    match cmd {
        AuditCommand::Density(args) => {
            let h = load_hypergraph(&args.input, args.normalize)?;
            let eps = parse_eps(&args.epsilon)?;
            let report = match args.mode.as_str() {
                "sampled" => audit::sampled_min_density(&h, &eps, args.samples, args.seed)?,
                "exact" => audit::exact_min_density(&h, &eps, args.cap)?,
                other => {
                    return Err(Error::malformed(format!(
                        "mode must be sampled or exact, got {other:?}"
                    )))
                }
            };
            let text = report.to_json_string();
            if let Some(path) = &args.output {
                write_atomic(path, &text)?;
            }
            eprintln!(
                "min density {} over subsets of size {}",
                to_decimal_12(&report.min_density_exact),
                report.argmin_subset.len()
            );
            Ok(serde_json::from_str(&text)?)
        }
        AuditCommand::Triads(args) => {
            let ph = load_partitioned(&args.input, args.normalize)?;
            let eps = parse_eps(&args.epsilon)?;
            let report = triad_product_check(&ph, &eps)?;
            let rows: Vec<serde_json::Value> = report
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "triad": [r.triad.0, r.triad.1, r.triad.2],
                        "density": {"num": *r.density.numer(), "den": *r.density.denom()},
                        "density_decimal": to_decimal_12(&r.density),
                        "a": {"num": *r.a.numer(), "den": *r.a.denom()},
                        "b": {"num": *r.b.numer(), "den": *r.b.denom()},
                        "c": {"num": *r.c.numer(), "den": *r.c.denom()},
                        "slack": {"num": *r.slack.numer(), "den": *r.slack.denom()},
                        "violated": r.violated,
                    })
                })
                .collect();
            eprintln!(
                "triad product bound: {} triads, {} violations",
                report.rows.len(),
                report.violations
            );
            Ok(json!({
                "action": "audit triads",
                "epsilon": {"num": *report.epsilon.numer(), "den": *report.epsilon.denom()},
                "triads": report.rows.len(),
                "violations": report.violations,
                "rows": rows,
            }))
        }
    }
}

// ----------------------------------------------------------------------
// embed / extract-skeleton
// ----------------------------------------------------------------------

fn run_embed(args: EmbedArgs) -> Result<serde_json::Value, Error> {
    let ph = load_partitioned(&args.host, args.normalize)?;
    let guest = load_hypergraph(&args.guest, args.normalize)?;
    match embed_search(&ph, &guest)? {
        Some(emb) => {
            debug_assert!(verify_embedding(&ph, &guest, &emb));
            let value = emb.to_json();
            if let Some(path) = &args.output {
                write_atomic(path, &serde_json::to_string_pretty(&value)?)?;
            }
            eprintln!("embedding found: indices {:?}", emb.indices);
            Ok(json!({
                "action": "embed",
                "found": true,
                "embedding": value,
            }))
        }
        None => {
            eprintln!("no embedding");
            Ok(json!({"action": "embed", "found": false}))
        }
    }
}

fn run_extract(args: ExtractArgs) -> Result<serde_json::Value, Error> {
    let ph = load_partitioned(&args.input, args.normalize)?;
    let delta = parse_decimal(&args.delta)?;
    match extract_phi3_skeleton(&ph, &delta, args.min_size)? {
        SkeletonOutcome::Success(sk) => {
            let pair_map = |m: &BTreeMap<(usize, usize), u16>| -> serde_json::Value {
                let obj: serde_json::Map<String, serde_json::Value> = m
                    .iter()
                    .map(|(&(p, q), &v)| (format!("{p},{q}"), serde_json::Value::from(v)))
                    .collect();
                serde_json::Value::Object(obj)
            };
            let value = json!({
                "action": "extract-skeleton",
                "success": true,
                "indices": sk.indices,
                "surplus_holds": sk.surplus_holds,
                "window": {
                    "a": to_decimal_12(&sk.window.0),
                    "b": to_decimal_12(&sk.window.1),
                    "c": to_decimal_12(&sk.window.2),
                },
                "omega": pair_map(&sk.omega),
                "alpha1": pair_map(&sk.alpha1),
                "beta1": pair_map(&sk.beta1),
                "alpha2": pair_map(&sk.alpha2),
                "gamma2": pair_map(&sk.gamma2),
                "beta3": pair_map(&sk.beta3),
                "gamma3": pair_map(&sk.gamma3),
            });
            if let Some(path) = &args.output {
                write_atomic(path, &serde_json::to_string_pretty(&value)?)?;
            }
            eprintln!("skeleton extracted over {} indices", sk.indices.len());
            Ok(value)
        }
        SkeletonOutcome::Failed { stage, detail } => {
            eprintln!("skeleton failed at {}: {detail}", stage.name());
            Ok(json!({
                "action": "extract-skeleton",
                "success": false,
                "stage": stage.name(),
                "detail": detail,
            }))
        }
    }
}
