use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::AtomicBool;
use std::sync::Arc;

use agstar::betti::{betti_table, graded_type_column, hilbert_numerator_check};
use agstar::classify::is_cm;
use agstar::ridge::decompose;
use agstar::search::{Predicate, Search, SearchOutcome, SearchSpec, SearchState, DEFAULT_MAX_FAMILIES};
use agstar::{classify, ClassificationReport, ClassifyOptions, EtaPolynomial, FieldSpec, RidgeDecomposition};
use agstar_cli::file::{facet_lists, ComplexFile};
use agstar_cli::records::*;
use clap::{Args, Parser, Subcommand};

const EXIT_USAGE: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_VERIFICATION: u8 = 4;
const EXIT_INTERRUPTED: u8 = 130;

#[derive(Parser)]
#[command(name = "agstar", version, about = "Classify simplicial complexes: CM, uniformly CM, Gorenstein*, almost Gorenstein*")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a complex and print its invariants.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        /// Re-check uniform CM by definition and the type/delta inequality.
        #[arg(long)]
        slow_verify: bool,
    },
    /// Split an almost Gorenstein* complex into indecomposable pieces.
    Decompose {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Graded Betti numbers via Hochster's formula.
    Betti {
        #[command(flatten)]
        input: InputArgs,
        /// The whole table (default).
        #[arg(long, conflicts_with = "type_only")]
        full: bool,
        /// Only the last column, which gives the type.
        #[arg(long)]
        type_only: bool,
        /// Largest vertex count accepted for a full table.
        #[arg(long, default_value_t = 16)]
        max_n: usize,
    },
    /// Enumerate pure complexes on [n] and stream those matching a predicate.
    Search(SearchArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Facet-list file.
    file: PathBuf,
    /// Coefficient field: q, f2, f3, fp:<p>.
    #[arg(long, default_value = "q")]
    field: FieldSpec,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long, default_value = "q")]
    field: FieldSpec,
    /// uniformly_cm, ag_star, ag_star_indecomposable or gorenstein_star.
    #[arg(long, default_value = "ag_star")]
    predicate: Predicate,
    /// Keep only hits with this eta polynomial, e.g. "2t" or "0,2,0".
    #[arg(long)]
    eta: Option<EtaPolynomial>,
    /// Report the histogram of delta and every odd value.
    #[arg(long)]
    delta_parity: bool,
    /// One representative per isomorphism class (n <= 8).
    #[arg(long)]
    iso: bool,
    /// Stop after this many hits in total.
    #[arg(long)]
    limit: Option<u64>,
    /// Continue from a checkpoint file.
    #[arg(long)]
    resume: Option<PathBuf>,
    /// Write progress here (defaults to the --resume file).
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Refuse searches over more facet families than this.
    #[arg(long, default_value_t = DEFAULT_MAX_FAMILIES)]
    max_families: u64,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<agstar::Error> for Failure {
    fn from(e: agstar::Error) -> Self {
        use agstar::Error::*;
        let code = match &e {
            ResourceCap(_) => EXIT_RESOURCE,
            VertexOutOfRange { .. } | BadUniverse(_) | NotPrime(_) => EXIT_USAGE,
            Verification(_) | Internal(_) => EXIT_VERIFICATION,
            _ => EXIT_PRECONDITION,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    if let Ok(t) = std::env::var("AGSTAR_THREADS") {
        match t.parse::<usize>() {
            Ok(k) if k > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
            _ => {
                eprintln!("agstar: ignoring AGSTAR_THREADS={t:?}");
            }
        }
    }
    let out = io::stdout();
    let mut out = BufWriter::new(out.lock());
    let result = match cli.command {
        Command::Analyze { input, slow_verify } => analyze(&input, slow_verify, &mut out),
        Command::Decompose { input } => run_decompose(&input, &mut out),
        Command::Betti { input, type_only, max_n, .. } => betti(&input, type_only, max_n, &mut out),
        Command::Search(args) => search(args, &mut out),
    };
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(code), Ok(())) => ExitCode::from(code),
        (Err(f), _) => {
            eprintln!("agstar: {}", f.message);
            ExitCode::from(f.code)
        }
        (Ok(_), Err(e)) => {
            eprintln!("agstar: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn load(path: &Path) -> Result<(Vec<u8>, ComplexFile), Failure> {
    let bytes = fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|_| usage(format!("{}: not UTF-8", path.display())))?;
    let file = ComplexFile::parse(text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok((bytes, file))
}

fn list(v: &[impl ToString]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn write_report(out: &mut impl Write, r: &ClassificationReport, indent: &str) -> io::Result<()> {
    writeln!(out, "{indent}dimension: {}", r.dim)?;
    writeln!(out, "{indent}f-vector: ({})", list(&r.f_vector))?;
    match &r.h_vector {
        Some(h) => writeln!(out, "{indent}h-vector: ({})", list(h))?,
        None => writeln!(out, "{indent}h-vector: undefined")?,
    }
    let hom: Vec<String> = r.homology.iter().enumerate().map(|(i, v)| format!("{}:{v}", i as isize - 1)).collect();
    writeln!(out, "{indent}reduced homology: {}", hom.join(" "))?;
    writeln!(out, "{indent}pure: {}", yes_no(r.pure))?;
    writeln!(out, "{indent}strongly connected: {}", yes_no(r.strongly_connected))?;
    writeln!(out, "{indent}cohen-macaulay: {}", yes_no(r.cm))?;
    writeln!(out, "{indent}2-cm: {}", yes_no(r.two_cm))?;
    writeln!(out, "{indent}uniformly cm: {}", yes_no(r.uniformly_cm))?;
    if let Some(t) = r.cm_type {
        writeln!(out, "{indent}type: {t}")?;
    }
    if let (Some(d), Some(e)) = (r.delta, &r.eta_text) {
        writeln!(out, "{indent}delta: {d}")?;
        writeln!(out, "{indent}eta: {e}")?;
    }
    writeln!(out, "{indent}gorenstein*: {}", yes_no(r.gorenstein_star))?;
    writeln!(out, "{indent}almost gorenstein*: {}", yes_no(r.almost_gorenstein_star))?;
    if let Some(i) = r.indecomposable {
        writeln!(out, "{indent}indecomposable: {}", yes_no(i))?;
    }
    for note in &r.notes {
        writeln!(out, "{indent}note: {note}")?;
    }
    Ok(())
}

fn analyze(input: &InputArgs, slow_verify: bool, out: &mut impl Write) -> Outcome {
    let (bytes, file) = load(&input.file)?;
    let mut report = classify(&file.complex, input.field, ClassifyOptions { slow_verify })?;
    if file.dropped > 0 {
        report.notes.push(format!("{} non-maximal or repeated input faces dropped", file.dropped));
    }
    if input.json {
        let rec = AnalyzeJson {
            provenance: Provenance::new("analyze", Some(&bytes), input.field),
            input: InputJson::new(&file),
            report,
        };
        serde_json::to_writer_pretty(&mut *out, &rec)?;
        writeln!(out)?;
    } else {
        let c = &file.complex;
        let facets = if c.is_empty_face_only() { 0 } else { c.facets().len() };
        writeln!(out, "complex: n={}, {facets} facets", c.n())?;
        writeln!(out, "field: {} (characteristic {})", report.field, report.characteristic)?;
        write_report(out, &report, "")?;
        if slow_verify {
            writeln!(out, "slow verification: passed")?;
        }
    }
    Ok(0)
}

fn write_tree(out: &mut impl Write, node: &RidgeDecomposition, field: FieldSpec, depth: usize) -> Outcome {
    let pad = "  ".repeat(depth);
    match node {
        RidgeDecomposition::Split { ridge, left, right } => {
            writeln!(out, "{pad}split W={ridge}")?;
            write_tree(out, left, field, depth + 1)?;
            write_tree(out, right, field, depth + 1)?;
        }
        RidgeDecomposition::Leaf(c) => {
            let facets: Vec<String> = c.facets().iter().map(|f| f.to_string()).collect();
            writeln!(out, "{pad}leaf {}", facets.join(" "))?;
            let r = classify(c, field, ClassifyOptions::default())?;
            let h = r.h_vector.as_deref().map(list).unwrap_or_default();
            writeln!(
                out,
                "{pad}  h=({h}) top homology {} gorenstein* {}",
                r.top_homology,
                yes_no(r.gorenstein_star)
            )?;
        }
    }
    Ok(0)
}

fn run_decompose(input: &InputArgs, out: &mut impl Write) -> Outcome {
    let (bytes, file) = load(&input.file)?;
    let tree = decompose(&file.complex, input.field)?;
    if input.json {
        let rec = DecomposeJson {
            provenance: Provenance::new("decompose", Some(&bytes), input.field),
            input: InputJson::new(&file),
            leaves: tree.leaf_count(),
            tree: NodeJson::build(&tree, input.field)?,
        };
        serde_json::to_writer_pretty(&mut *out, &rec)?;
        writeln!(out)?;
    } else {
        writeln!(out, "leaves: {}", tree.leaf_count())?;
        write_tree(out, &tree, input.field, 0)?;
    }
    Ok(0)
}

fn betti(input: &InputArgs, type_only: bool, max_n: usize, out: &mut impl Write) -> Outcome {
    let (bytes, file) = load(&input.file)?;
    let c = &file.complex;
    let field = input.field;
    if c.dim() < 0 {
        return Err(agstar::Error::DimensionTooSmall { required: 0, actual: c.dim() }.into());
    }
    if !type_only && c.n() > max_n {
        return Err(Failure {
            code: EXIT_RESOURCE,
            message: format!("full Betti table for n={} exceeds --max-n {max_n}", c.n()),
        });
    }
    let d = (c.dim() + 1) as usize;
    let col = graded_type_column(c, field)?;
    let cm_type: usize = col.values().sum();
    let cm = is_cm(c, field);
    let full = if type_only { None } else { Some(betti_table(c, field)?) };
    let check = if type_only { None } else { Some(hilbert_numerator_check(c, field)?) };
    if input.json {
        let (entries, graded) = match &full {
            Some(t) => {
                let (e, g) = betti_entries(t);
                (Some(e), Some(g))
            }
            None => (None, None),
        };
        let rec = BettiJson {
            provenance: Provenance::new("betti", Some(&bytes), field),
            input: InputJson::new(&file),
            mode: if type_only { "type_only" } else { "full" },
            d,
            cm,
            entries,
            graded,
            projective_dimension: full.as_ref().map(|t| t.projective_dimension()),
            hilbert_check: check,
            type_column: type_column(&col),
            cm_type,
        };
        serde_json::to_writer_pretty(&mut *out, &rec)?;
        writeln!(out)?;
        return Ok(0);
    }
    writeln!(out, "complex: n={}, d={d}, field {field}", c.n())?;
    if let Some(t) = &full {
        writeln!(out, "graded betti numbers beta_(i,j):")?;
        for ((i, j), v) in t.graded() {
            writeln!(out, "  beta_({i},{j}) = {v}")?;
        }
        writeln!(out, "multigraded betti numbers beta_(i,F):")?;
        for (i, f, v) in t.entries() {
            writeln!(out, "  beta_({i},{f}) = {v}")?;
        }
        writeln!(out, "projective dimension: {}", t.projective_dimension())?;
    }
    writeln!(out, "last column (i = {}):", c.n() - d)?;
    for (j, v) in &col {
        writeln!(out, "  degree {j}: {v}")?;
    }
    writeln!(out, "type: {cm_type}{}", if cm { "" } else { " (complex is not CM)" })?;
    if let Some(ok) = check {
        writeln!(out, "hilbert numerator check: {}", if ok { "passed" } else { "FAILED" })?;
        if !ok {
            return Ok(EXIT_VERIFICATION);
        }
    }
    Ok(0)
}

fn write_checkpoint(path: &Path, spec: &SearchSpec, state: &SearchState) -> io::Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, state.to_text(spec))?;
    fs::rename(&tmp, path)
}

fn search(args: SearchArgs, out: &mut impl Write) -> Outcome {
    let spec = SearchSpec {
        n: args.n,
        d: args.d,
        field: args.field,
        predicate: args.predicate,
        eta_filter: args.eta,
        delta_parity_scan: args.delta_parity,
        up_to_iso: args.iso,
        limit: args.limit,
        max_families: args.max_families,
    };
    spec.validate().map_err(|e| match e {
        agstar::Error::ResourceCap(_) => Failure::from(e),
        _ => usage(e.to_string()),
    })?;
    let resume = match &args.resume {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            Some(SearchState::from_text(&text, &spec).map_err(|e| usage(e.to_string()))?)
        }
        None => None,
    };
    let ckpt = args.checkpoint.or(args.resume);
    let mut search = Search::new(spec.clone(), resume)?;
    let stop = Arc::new(AtomicBool::new(false));
    {
        let stop = Arc::clone(&stop);
        let _ = ctrlc::set_handler(move || stop.store(true, std::sync::atomic::Ordering::SeqCst));
    }
    let mut odd: Vec<Vec<Vec<u32>>> = Vec::new();
    let outcome = search.run(
        &stop,
        |hit| {
            if spec.delta_parity_scan && hit.report.delta.is_some_and(|d| d % 2 != 0) {
                odd.push(facet_lists(&hit.complex));
            }
            let rec = HitJson::new(hit, spec.field);
            serde_json::to_writer(&mut *out, &rec).map_err(|e| agstar::Error::Internal(e.to_string()))?;
            writeln!(out).map_err(|e| agstar::Error::Internal(e.to_string()))
        },
        |state| match &ckpt {
            Some(p) => write_checkpoint(p, &spec, state).map_err(|e| agstar::Error::Internal(e.to_string())),
            None => Ok(()),
        },
    )?;
    let label = match outcome {
        SearchOutcome::Completed => "completed",
        SearchOutcome::LimitReached => "limit_reached",
        SearchOutcome::Interrupted => "interrupted",
    };
    let summary = SummaryJson::new(&spec, search.state(), label, spec.delta_parity_scan.then_some(odd));
    serde_json::to_writer(&mut *out, &summary)?;
    writeln!(out)?;
    Ok(if outcome == SearchOutcome::Interrupted { EXIT_INTERRUPTED } else { 0 })
}
