//! `tvg` — command-line front end for time-varying-graph analysis.
//!
//! Every subcommand reads contact plans (CSV) or TVG files (JSON), writes
//! plot-ready `.dat`/CSV/JSON outputs with a `#` metadata header echoing the
//! resolved configuration, and uses `-` for stdin/stdout. Exit codes:
//! 0 ok, 2 usage, 3 parse/input, 4 semantic, 5 resource limit.

use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tvg_core::barcode::MatchP;
use tvg_core::gen::{
    gen_random_tvg, gen_sphere_constellation, gen_two_class_corpus, RandomTvgParams, SphereParams,
};
use tvg_core::io::{
    matrix_to_json, parse_tvg_text, CorpusManifest, ManifestEntry, ParsedTvg,
};
use tvg_core::knn::{split_runner, LabeledCorpus};
use tvg_core::metrics::SearchMode;
use tvg_core::semiring::{
    axioms_check, BoolSemiring, ContactSemiring, DelaySemiring, EndoSemiring, LifetimeSemiring,
    PathSemiring, Semiring, TropicalSemiring,
};
use tvg_core::zigzag::{barcode_lines, zigzag_barcode};
use tvg_core::{Error, IntervalSet, MatrixSemiring, Scalar};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "tvg", version, about = "Semi-ring algebra and topology for time-varying graphs")]
struct Cli {
    /// Worker threads for distance matrices and corpora (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the k-cumulant of a TVG and write it as JSON.
    Cumulant(CumulantArgs),
    /// Iterate cumulants until the Kleene star converges or a budget runs out.
    Star(StarArgs),
    /// Lifetime curves: per-k measures of multi-hop connectivity windows.
    Curve(CurveArgs),
    /// Temporal diameter: per-snapshot shortest paths maximized over time.
    Diameter(DiameterArgs),
    /// Strong-connectivity check over an analysis window.
    Connected(ConnectedArgs),
    /// Propagate a ping from a source node and report first arrivals per k.
    Ping(PingArgs),
    /// Distances between TVGs (or their barcodes).
    Dist(DistArgs),
    /// Zigzag persistence barcode of a lifetime TVG.
    Zigzag(ZigzagArgs),
    /// KNN classification over a corpus manifest.
    Knn(KnnArgs),
    /// Synthetic TVG and corpus generators.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Randomized semi-ring axiom suites.
    CheckAxioms(CheckAxiomsArgs),
}

#[derive(Args, Debug)]
struct CumulantArgs {
    /// Input contact plan (CSV) or TVG (JSON); `-` for stdin.
    input: String,
    /// Cumulant index k.
    #[arg(long, short = 'k')]
    k: usize,
    /// Output path (JSON TVG); `-` for stdout.
    #[arg(long, short = 'o', default_value = "-")]
    output: String,
}

#[derive(Args, Debug)]
struct StarArgs {
    input: String,
    /// Iteration budget; default 4n.
    #[arg(long)]
    max_k: Option<usize>,
    /// Assert the input's semi-ring.
    #[arg(long)]
    semiring: Option<SemiringTag>,
    /// Output path for the star matrix (JSON TVG); omit to skip.
    #[arg(long, short = 'o')]
    output: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum SemiringTag {
    Lifetime,
    Delay,
    Contact,
}

#[derive(Args, Debug)]
struct CurveArgs {
    input: String,
    #[arg(long)]
    k_max: usize,
    /// Analysis window `a,b`.
    #[arg(long)]
    window: String,
    /// Include one column per node pair after the average column.
    #[arg(long)]
    per_pair: bool,
    #[arg(long, short = 'o', default_value = "-")]
    output: String,
}

#[derive(Args, Debug)]
struct DiameterArgs {
    input: String,
    /// Output path for the per-pair hop matrix (CSV); omit to skip.
    #[arg(long, short = 'o')]
    output: Option<String>,
}

#[derive(Args, Debug)]
struct ConnectedArgs {
    input: String,
    #[arg(long)]
    window: String,
}

#[derive(Args, Debug)]
struct PingArgs {
    input: String,
    /// Source node label.
    #[arg(long)]
    source: String,
    /// Emission time.
    #[arg(long, default_value = "0")]
    t0: String,
    #[arg(long, default_value_t = 8)]
    k_max: usize,
    #[arg(long, short = 'o', default_value = "-")]
    output: String,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Metric {
    Hausdorff,
    Disconnect,
    Symhausdorff,
    Bottleneck,
    Wasserstein,
}

#[derive(Args, Debug)]
struct DistArgs {
    /// Two or more inputs; with more than two, a distance matrix is emitted.
    #[arg(required = true, num_args = 2..)]
    files: Vec<String>,
    #[arg(long, value_enum)]
    metric: Metric,
    /// Matching exponent p (integer or `inf`).
    #[arg(long, default_value = "inf")]
    p: String,
    /// Aggregation exponent q for the disconnect distance.
    #[arg(long, default_value = "inf")]
    q: String,
    /// Analysis window `a,b` (disconnect distance only).
    #[arg(long)]
    window: Option<String>,
    /// Homology degree for barcode metrics.
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Relabeling search for the symmetrized distance.
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[arg(long, short = 'o')]
    output: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Mode {
    Exact,
    Greedy,
}

#[derive(Args, Debug)]
struct ZigzagArgs {
    input: String,
    /// Homology degree (0 or 1).
    #[arg(long)]
    dim: usize,
    #[arg(long, short = 'o', default_value = "-")]
    output: String,
}

#[derive(Args, Debug)]
struct KnnArgs {
    /// Corpus manifest JSON: `{ "samples": [{"file":..,"label":..}] }`.
    manifest: String,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, default_value = "2")]
    p: String,
    #[arg(long, default_value_t = 10)]
    k_max: usize,
    #[arg(long, default_value_t = 100)]
    splits: usize,
    #[arg(long, default_value_t = 0.8)]
    train_frac: f64,
    /// RNG seed; falls back to TVG_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, short = 'o', default_value = "-")]
    output: String,
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// Random lifetime TVG within a window.
    Random(GenRandomArgs),
    /// Sphere-sampled constellation with angular connectivity.
    Sphere(GenSphereArgs),
    /// Two-class synthetic corpus plus manifest for the KNN harness.
    Corpus(GenCorpusArgs),
}

#[derive(Args, Debug)]
struct GenRandomArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    window: String,
    #[arg(long, default_value_t = 3)]
    max_contacts: usize,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long)]
    symmetric: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, short = 'o', default_value = "-")]
    output: String,
}

#[derive(Args, Debug)]
struct GenSphereArgs {
    #[arg(long)]
    n: usize,
    /// Connectivity angle in radians.
    #[arg(long)]
    theta: f64,
    #[arg(long, default_value = "86400")]
    duration: String,
    /// Max rotation rate in radians/second; omit for a static constellation.
    #[arg(long)]
    rotation: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    steps: u32,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, short = 'o', default_value = "-")]
    output: String,
}

#[derive(Args, Debug)]
struct GenCorpusArgs {
    #[arg(long)]
    per_class: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for sample files and `manifest.json`.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args, Debug)]
struct CheckAxiomsArgs {
    /// Ring to check, or `all`.
    #[arg(long, default_value = "all")]
    ring: String,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    // die quietly when a downstream pipe closes (e.g. `tvg ... | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // best effort; the pool can only be configured once per process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("tvg: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::ScalarParse(_)
        | Error::IntervalParse(_)
        | Error::ValueParse { .. }
        | Error::Csv(_)
        | Error::Json(_)
        | Error::Io(_)
        | Error::InvalidContact { .. }
        | Error::EmptyContactPlan
        | Error::UnknownSemiring(_) => 3,
        Error::WalkBudgetExceeded { .. } | Error::ExactSearchTooLarge { .. } => 5,
        _ => 4,
    }
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("TVG_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(0)
}

fn read_input(path: &str) -> Result<String, Error> {
    let raw = if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        std::fs::read_to_string(path)?
    };
    // outputs of other tvg runs carry `#` metadata headers
    Ok(raw
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n"))
}

fn write_output(path: &str, content: &str) -> Result<(), Error> {
    if path == "-" {
        print!("{content}");
        Ok(())
    } else {
        std::fs::write(path, content)?;
        Ok(())
    }
}

fn header(config: &str) -> String {
    format!("# tvg {VERSION}\n# config: {config}\n")
}

fn parse_window(text: &str) -> Result<IntervalSet, Error> {
    let (a, b) = text.split_once(',').ok_or_else(|| Error::ValueParse {
        kind: "window",
        text: text.to_string(),
    })?;
    let lo: Scalar = a.parse()?;
    let hi: Scalar = b.parse()?;
    if lo > hi {
        return Err(Error::ValueParse {
            kind: "window",
            text: text.to_string(),
        });
    }
    Ok(IntervalSet::interval(lo, hi))
}

fn load_tvg(path: &str) -> Result<ParsedTvg, Error> {
    parse_tvg_text(&read_input(path)?)
}

fn scalar_dat(v: &Scalar) -> String {
    if v.is_finite() {
        format!("{}", v.to_f64())
    } else {
        "inf".to_string()
    }
}

/// Zeroes the diagonal of any parsed TVG (adjacency convention).
fn adjacency_of(tvg: ParsedTvg) -> ParsedTvg {
    match tvg {
        ParsedTvg::Lifetime(m) => ParsedTvg::Lifetime(m.to_adjacency()),
        ParsedTvg::Delay(m) => {
            let ring = DelaySemiring::default();
            let z = ring.zero();
            ParsedTvg::Delay(m.map_entries(ring, |i, j, v| if i == j { z.clone() } else { v.clone() }))
        }
        ParsedTvg::Contact(m) => {
            let z = ContactSemiring.zero();
            ParsedTvg::Contact(m.map_entries(ContactSemiring, |i, j, v| {
                if i == j {
                    z.clone()
                } else {
                    v.clone()
                }
            }))
        }
    }
}

fn run(cmd: &Command) -> Result<(), Error> {
    match cmd {
        Command::Cumulant(args) => {
            let out = match adjacency_of(load_tvg(&args.input)?) {
                ParsedTvg::Lifetime(a) => ParsedTvg::Lifetime(a.cumulant(args.k)?),
                ParsedTvg::Delay(a) => ParsedTvg::Delay(a.cumulant(args.k)?),
                ParsedTvg::Contact(a) => ParsedTvg::Contact(a.cumulant(args.k)?),
            };
            let body = matrix_to_json(&out)?;
            write_output(
                &args.output,
                &format!("{}{}\n", header(&format!("{args:?}")), body),
            )
        }
        Command::Star(args) => {
            let tvg = load_tvg(&args.input)?;
            if let Some(tag) = args.semiring {
                let want = match tag {
                    SemiringTag::Lifetime => "lifetime",
                    SemiringTag::Delay => "delay",
                    SemiringTag::Contact => "contact",
                };
                if tvg.semiring_tag() != want {
                    return Err(Error::InvalidInput(format!(
                        "input is a {} TVG, expected {}",
                        tvg.semiring_tag(),
                        want
                    )));
                }
            }
            let (converged, star) = match adjacency_of(tvg) {
                ParsedTvg::Lifetime(a) => {
                    let budget = args.max_k.unwrap_or(4 * a.n().max(1));
                    let (star, at) = a.kleene_star(budget)?;
                    (at, ParsedTvg::Lifetime(star))
                }
                ParsedTvg::Delay(a) => {
                    let budget = args.max_k.unwrap_or(4 * a.n().max(1));
                    let (star, at) = a.kleene_star(budget)?;
                    (at, ParsedTvg::Delay(star))
                }
                ParsedTvg::Contact(a) => {
                    let budget = args.max_k.unwrap_or(4 * a.n().max(1));
                    let (star, at) = a.kleene_star(budget)?;
                    (at, ParsedTvg::Contact(star))
                }
            };
            match converged {
                Some(k) => println!("converged: {k}"),
                None => println!("converged: none"),
            }
            if let Some(out) = &args.output {
                let body = matrix_to_json(&star)?;
                write_output(out, &format!("{}{}\n", header(&format!("{args:?}")), body))?;
            }
            Ok(())
        }
        Command::Curve(args) => {
            let m = load_tvg(&args.input)?.expect_lifetime()?.with_full_diagonal();
            let w = parse_window(&args.window)?;
            let curve = m.lifetime_curve(args.k_max, &w)?;
            let mut body = header(&format!("{args:?}"));
            if args.per_pair {
                let names: Vec<String> = curve
                    .labels
                    .iter()
                    .flat_map(|a| curve.labels.iter().map(move |b| format!("{a}->{b}")))
                    .collect();
                let _ = writeln!(body, "# columns: k average {}", names.join(" "));
            } else {
                let _ = writeln!(body, "# columns: k average");
            }
            for k in 0..=args.k_max {
                let _ = write!(body, "{k} {}", scalar_dat(&curve.average[k]));
                if args.per_pair {
                    for cell in &curve.pairs {
                        let _ = write!(body, " {}", scalar_dat(&cell[k]));
                    }
                }
                body.push('\n');
            }
            write_output(&args.output, &body)
        }
        Command::Diameter(args) => {
            let m = load_tvg(&args.input)?.expect_lifetime()?;
            let (pairs, diameter) = m.temporal_diameter();
            println!("diameter: {diameter}");
            if let Some(out) = &args.output {
                let mut body = header(&format!("{args:?}"));
                let _ = writeln!(body, "node,{}", m.labels().join(","));
                for (i, row) in pairs.iter().enumerate() {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|c| c.map_or("-".to_string(), |v| v.to_string()))
                        .collect();
                    let _ = writeln!(body, "{},{}", m.labels()[i], cells.join(","));
                }
                write_output(out, &body)?;
            }
            Ok(())
        }
        Command::Connected(args) => {
            let m = load_tvg(&args.input)?.expect_lifetime()?.to_adjacency();
            let w = parse_window(&args.window)?;
            let ok = m.strongly_connected(&w)?;
            println!("strongly-connected: {ok}");
            Ok(())
        }
        Command::Ping(args) => {
            let tvg = adjacency_of(load_tvg(&args.input)?);
            let t0: Scalar = args.t0.parse()?;
            let mut body = header(&format!("{args:?}"));
            match tvg {
                ParsedTvg::Delay(a) => {
                    let source = a.label_index(&args.source).ok_or_else(|| {
                        Error::InvalidInput(format!("unknown source node {:?}", args.source))
                    })?;
                    let seed = tvg_core::DelayedLifetime::new(
                        IntervalSet::point(t0.clone()),
                        Scalar::zero(),
                    );
                    let rows = a.ping(source, seed, args.k_max)?;
                    let _ = writeln!(
                        body,
                        "# columns: k then first arrival per node ({})",
                        a.labels().join(" ")
                    );
                    for (k, row) in rows.iter().enumerate() {
                        let _ = write!(body, "{k}");
                        for e in row {
                            let arrival = if e.lifetime.is_empty() {
                                "inf".to_string()
                            } else {
                                scalar_dat(&e.lifetime.intervals()[0].0.add(&e.delay))
                            };
                            let _ = write!(body, " {arrival}");
                        }
                        body.push('\n');
                    }
                }
                ParsedTvg::Contact(a) => {
                    let source = a.label_index(&args.source).ok_or_else(|| {
                        Error::InvalidInput(format!("unknown source node {:?}", args.source))
                    })?;
                    let seed =
                        tvg_core::ContactMap::from_lifetime(&IntervalSet::point(t0.clone()));
                    let rows = a.ping(source, seed, args.k_max)?;
                    let _ = writeln!(
                        body,
                        "# columns: k then first arrival per node ({})",
                        a.labels().join(" ")
                    );
                    let t0r = t0.expect_finite().clone();
                    for (k, row) in rows.iter().enumerate() {
                        let _ = write!(body, "{k}");
                        for e in row {
                            let delays = e.eval(&t0r);
                            let arrival = if delays.is_empty() {
                                "inf".to_string()
                            } else {
                                scalar_dat(&delays.intervals()[0].0.add(&t0))
                            };
                            let _ = write!(body, " {arrival}");
                        }
                        body.push('\n');
                    }
                }
                ParsedTvg::Lifetime(_) => {
                    return Err(Error::InvalidInput(
                        "ping needs a delay or contact TVG".to_string(),
                    ))
                }
            }
            write_output(&args.output, &body)
        }
        Command::Dist(args) => run_dist(args),
        Command::Zigzag(args) => {
            let m = load_tvg(&args.input)?.expect_lifetime()?.to_adjacency();
            let barcode = zigzag_barcode(&m, args.dim)?;
            let mut body = header(&format!("{args:?}"));
            body.push_str("# columns: k birth death open_l open_r multiplicity\n");
            body.push_str(&barcode_lines(args.dim, &barcode));
            write_output(&args.output, &body)
        }
        Command::Knn(args) => {
            let manifest_dir = if args.manifest == "-" {
                PathBuf::from(".")
            } else {
                Path::new(&args.manifest)
                    .parent()
                    .map(|p| p.to_path_buf())
                    .unwrap_or_else(|| PathBuf::from("."))
            };
            let manifest: CorpusManifest = serde_json::from_str(&read_input(&args.manifest)?)?;
            if manifest.samples.is_empty() {
                return Err(Error::InvalidInput("empty corpus manifest".to_string()));
            }
            let mut tvgs = Vec::new();
            for entry in &manifest.samples {
                let path = manifest_dir.join(&entry.file);
                let m = load_tvg(path.to_str().unwrap_or(&entry.file))?
                    .expect_lifetime()?
                    .to_adjacency();
                tvgs.push(tvg_core::gen::CorpusTvg {
                    id: entry.file.clone(),
                    label: entry.label.clone(),
                    matrix: m,
                });
            }
            let p: MatchP = args.p.parse()?;
            let corpus = LabeledCorpus::from_tvgs(&tvgs, args.dim)?;
            let dm = corpus.distance_matrix(p);
            let seed = resolve_seed(args.seed);
            let curves = split_runner(
                &dm,
                &corpus.labels,
                args.train_frac,
                args.splits,
                args.k_max,
                seed,
            )?;
            let mut body = header(&format!("{args:?}"));
            body.push_str("# columns: k mean-accuracy\n");
            for (k, acc) in curves {
                let _ = writeln!(body, "{k} {acc}");
            }
            write_output(&args.output, &body)
        }
        Command::Gen(sub) => run_gen(sub),
        Command::CheckAxioms(args) => {
            use rand::SeedableRng;
            let seed = resolve_seed(args.seed);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let report_one = |name: &str, rep: tvg_core::AxiomReport| {
                if rep.passed() {
                    println!("{name}: pass ({} trials)", rep.trials);
                } else {
                    println!("{name}: FAIL ({} trials)", rep.trials);
                    for v in &rep.violations {
                        println!("  {}: witness {}", v.law, v.witness);
                    }
                }
            };
            let all = args.ring == "all";
            let want = |n: &str| all || args.ring == n;
            if want("boolean") {
                report_one("boolean", axioms_check(&BoolSemiring, args.trials, &mut rng)?);
            }
            if want("lifetime") {
                report_one("lifetime", axioms_check(&LifetimeSemiring, args.trials, &mut rng)?);
            }
            if want("tropical") {
                report_one("tropical", axioms_check(&TropicalSemiring, args.trials, &mut rng)?);
            }
            if want("endo") {
                report_one("endo", axioms_check(&EndoSemiring, args.trials, &mut rng)?);
            }
            if want("delay") {
                report_one(
                    "delay",
                    axioms_check(&DelaySemiring::default(), args.trials, &mut rng)?,
                );
            }
            if want("delay-raw") {
                report_one(
                    "delay-raw",
                    axioms_check(&DelaySemiring::raw(), args.trials, &mut rng)?,
                );
            }
            if want("path") {
                report_one(
                    "path",
                    axioms_check(&PathSemiring::new(4, 64), args.trials, &mut rng)?,
                );
            }
            if want("contact") {
                report_one("contact", axioms_check(&ContactSemiring, args.trials, &mut rng)?);
            }
            if want("matrix-lifetime") {
                report_one(
                    "matrix-lifetime",
                    axioms_check(
                        &MatrixSemiring::new(LifetimeSemiring, 3),
                        args.trials,
                        &mut rng,
                    )?,
                );
            }
            Ok(())
        }
    }
}

fn run_dist(args: &DistArgs) -> Result<(), Error> {
    let p: MatchP = args.p.parse()?;
    let q: MatchP = args.q.parse()?;
    let matrices: Vec<tvg_core::LifetimeMatrix> = args
        .files
        .iter()
        .map(|f| Ok(load_tvg(f)?.expect_lifetime()?.to_adjacency()))
        .collect::<Result<_, Error>>()?;
    let n = matrices.len();
    let mut table = vec![vec![String::new(); n]; n];
    let value_of = |a: usize, b: usize| -> Result<String, Error> {
        let (ma, mb) = (&matrices[a], &matrices[b]);
        Ok(match args.metric {
            Metric::Hausdorff => tvg_core::tvg_hausdorff(ma, mb)?.to_f64().to_string(),
            Metric::Disconnect => {
                let w = parse_window(args.window.as_deref().ok_or_else(|| {
                    Error::InvalidInput("disconnect distance needs --window".to_string())
                })?)?;
                tvg_core::disconnect_distance(ma, mb, p, q, &w)?
                    .to_f64()
                    .to_string()
            }
            Metric::Symhausdorff => {
                let mode = match args.mode {
                    Mode::Exact => SearchMode::Exact,
                    Mode::Greedy => SearchMode::Greedy,
                };
                let (d, _) = tvg_core::symmetrized_hausdorff(ma, mb, mode)?;
                d.to_f64().to_string()
            }
            Metric::Bottleneck => {
                tvg_core::zigzag::barcode_feature_distance(ma, mb, args.dim, MatchP::Infinity)?
                    .to_f64()
                    .to_string()
            }
            Metric::Wasserstein => tvg_core::zigzag::barcode_feature_distance(ma, mb, args.dim, p)?
                .to_f64()
                .to_string(),
        })
    };
    for a in 0..n {
        table[a][a] = "0".to_string();
        for b in (a + 1)..n {
            let v = value_of(a, b)?;
            table[a][b] = v.clone();
            table[b][a] = v;
        }
    }
    if n == 2 {
        println!("distance: {}", table[0][1]);
    }
    if let Some(out) = &args.output {
        let mut body = header(&format!("{args:?}"));
        let _ = writeln!(body, "file,{}", args.files.join(","));
        for (a, row) in table.iter().enumerate() {
            let _ = writeln!(body, "{},{}", args.files[a], row.join(","));
        }
        write_output(out, &body)?;
    } else if n > 2 {
        for (a, row) in table.iter().enumerate() {
            println!("{},{}", args.files[a], row.join(","));
        }
    }
    Ok(())
}

fn run_gen(cmd: &GenCommand) -> Result<(), Error> {
    match cmd {
        GenCommand::Random(args) => {
            let params = RandomTvgParams {
                n: args.n,
                window: parse_window(&args.window)?,
                max_contacts: args.max_contacts,
                density: args.density,
                symmetric: args.symmetric,
                seed: resolve_seed(args.seed),
            };
            let m = gen_random_tvg(&params)?.with_full_diagonal();
            let body = matrix_to_json(&ParsedTvg::Lifetime(m))?;
            write_output(
                &args.output,
                &format!("{}{}\n", header(&format!("{args:?}")), body),
            )
        }
        GenCommand::Sphere(args) => {
            let params = SphereParams {
                n: args.n,
                theta: args.theta,
                duration: args.duration.parse()?,
                rotation: args.rotation,
                steps: args.steps,
                seed: resolve_seed(args.seed),
            };
            let m = gen_sphere_constellation(&params)?.with_full_diagonal();
            let body = matrix_to_json(&ParsedTvg::Lifetime(m))?;
            write_output(
                &args.output,
                &format!("{}{}\n", header(&format!("{args:?}")), body),
            )
        }
        GenCommand::Corpus(args) => {
            let seed = resolve_seed(args.seed);
            let corpus = gen_two_class_corpus(args.per_class, seed)?;
            std::fs::create_dir_all(&args.out_dir)?;
            let mut entries = Vec::new();
            for sample in &corpus {
                let file = format!("{}.json", sample.id);
                let body =
                    matrix_to_json(&ParsedTvg::Lifetime(sample.matrix.with_full_diagonal()))?;
                std::fs::write(args.out_dir.join(&file), format!("{body}\n"))?;
                entries.push(ManifestEntry {
                    file,
                    label: sample.label.clone(),
                });
            }
            let manifest = CorpusManifest { samples: entries };
            std::fs::write(
                args.out_dir.join("manifest.json"),
                serde_json::to_string_pretty(&manifest)?,
            )?;
            println!(
                "wrote {} samples and manifest.json to {}",
                corpus.len(),
                args.out_dir.display()
            );
            Ok(())
        }
    }
}
