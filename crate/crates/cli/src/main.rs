use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num::{BigInt, BigRational};

use ectf_core::refutation::{refute, Outcome, ParamMode, Pivot, RefutationError, RefutationParams};
use ectf_core::search::{self, GraphStream, Predicate};
use ectf_core::separating::{
    covering_measure_exact, covering_measure_sample, find_unseparated, measure_domination_check,
};
use ectf_core::{
    ectf_level, find_violation, write_graph6, BipartiteView, Graph, Mode, VertexSet,
    ViolationCertificate,
};

#[derive(Parser)]
#[command(
    name = "ectf",
    version,
    about = "Extension properties of triangle-free graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a graph as graph6.
    Gen(GenArgs),
    /// Check k-ECTF (with --tf) or k-existential completeness.
    Verify(VerifyArgs),
    /// Print the ECTF level of each input graph.
    Level(SourceArgs),
    /// Run the refutation engine against a claimed level.
    Refute(RefuteArgs),
    /// Covering measure of a bipartite view, exact or sampled.
    Measure(MeasureArgs),
    /// Check whether B is (s,t)-separating for A.
    Separating(SeparatingArgs),
    /// Filter a graph stream by named predicates.
    Search(SearchArgs),
    /// Exhaustive f(n) table as CSV.
    Table(TableArgs),
    /// Completeness levels of G(n,1/2) samples as CSV.
    Gnp(GnpArgs),
}

#[derive(Args)]
struct SourceArgs {
    /// c5 | k2 | petersen | path:<n> | cycle:<n>
    #[arg(long, conflicts_with = "graph")]
    family: Option<String>,
    /// File of graph6 lines; standard input when neither source is given.
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, conflicts_with_all = ["random_mtf", "gnp"])]
    family: Option<String>,
    /// Random maximal triangle-free graph on this many vertices.
    #[arg(long, requires = "seed", conflicts_with = "gnp")]
    random_mtf: Option<usize>,
    /// Binomial random graph on this many vertices.
    #[arg(long, requires = "seed")]
    gnp: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    k: usize,
    /// Triangle-free extension property instead of general completeness.
    #[arg(long)]
    tf: bool,
    /// Check this certificate file instead of searching.
    #[arg(long)]
    certificate: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LogLevel {
    Outcome,
    Full,
}

#[derive(Args)]
struct RefuteArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    level: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Heaviness threshold, as a fraction or decimal.
    #[arg(long, conflicts_with = "eps")]
    theta: Option<String>,
    /// Sets theta = eps^2.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Derive every constant from n and the level; refused unless the
    /// asymptotic inequalities hold.
    #[arg(long, conflicts_with_all = ["theta", "eps", "alpha"])]
    strict: bool,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    pivot: Option<usize>,
    /// Tuples with pairwise distinct entries.
    #[arg(long)]
    distinct: bool,
    #[arg(long, value_enum, default_value = "full")]
    log: LogLevel,
}

#[derive(Args)]
struct ViewArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Comma-separated vertices of A.
    #[arg(long)]
    a: String,
    /// Comma-separated vertices of B; all vertices outside A by default.
    #[arg(long)]
    b: Option<String>,
}

#[derive(Args)]
struct MeasureArgs {
    #[command(flatten)]
    view: ViewArgs,
    #[arg(long)]
    s: usize,
    /// Monte Carlo estimate with this many samples.
    #[arg(long, requires = "seed")]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also check the domination inequality for this subset of B.
    #[arg(long)]
    bprime: Option<String>,
}

#[derive(Args)]
struct SeparatingArgs {
    #[command(flatten)]
    view: ViewArgs,
    #[arg(long)]
    s: usize,
    #[arg(long, default_value_t = 0)]
    t: usize,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Enumerate all graphs on n vertices instead of reading input.
    #[arg(long, conflicts_with_all = ["family", "graph", "random_mtf"])]
    enumerate: Option<usize>,
    #[arg(long, requires = "enumerate")]
    dedup: bool,
    #[arg(long, requires = "seed", conflicts_with_all = ["family", "graph"])]
    random_mtf: Option<usize>,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// triangle-free | maximal-triangle-free | twin-free | k-ectf:<k> | level>=:<k>
    #[arg(long = "filter")]
    filters: Vec<String>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    max_n: usize,
    /// Output path, `-` for standard output.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct GnpArgs {
    /// Vertex counts, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value = "-")]
    out: String,
}

/// Failures that map to exit code 2.
#[derive(Debug)]
struct Failure(anyhow::Error);

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let rendered = e.to_string();
            let line: Vec<&str> = rendered
                .lines()
                .take_while(|l| !l.is_empty() && !l.starts_with("Usage:"))
                .map(str::trim)
                .collect();
            eprintln!("{}", line.join(" "));
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(e)) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.into())
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    let mut out = io::stdout().lock();
    let code = match command {
        Command::Gen(a) => gen(a, &mut out)?,
        Command::Verify(a) => verify(a, &mut out)?,
        Command::Level(a) => {
            for g in load_all(&a)? {
                writeln!(out, "{}", ectf_level(&g)?)?;
            }
            0
        }
        Command::Refute(a) => refute_cmd(a, &mut out)?,
        Command::Measure(a) => measure(a, &mut out)?,
        Command::Separating(a) => separating(a, &mut out)?,
        Command::Search(a) => search_cmd(a, &mut out)?,
        Command::Table(a) => {
            let rows = search::f_table(a.max_n)?;
            emit(&a.out, &search::f_table_csv(&rows), &mut out)?;
            0
        }
        Command::Gnp(a) => {
            let exp = search::gnp_completeness_experiment(&a.n, a.trials, a.seed)?;
            emit(&a.out, &exp.to_csv(), &mut out)?;
            0
        }
    };
    out.flush()?;
    Ok(code)
}

fn family(name: &str) -> Result<Graph> {
    let sized = |prefix: &str| -> Result<Option<usize>> {
        match name.strip_prefix(prefix) {
            Some(n) => Ok(Some(
                n.parse().with_context(|| format!("bad size in {name:?}"))?,
            )),
            None => Ok(None),
        }
    };
    Ok(match name {
        "c5" => Graph::cycle(5),
        "k2" => Graph::complete(2),
        "petersen" => Graph::petersen(),
        _ => {
            if let Some(n) = sized("path:")? {
                Graph::path(n)
            } else if let Some(n) = sized("cycle:")? {
                if n < 3 {
                    bail!("cycle needs at least 3 vertices");
                }
                Graph::cycle(n)
            } else {
                bail!("unknown family {name:?}")
            }
        }
    })
}

fn stream(source: &SourceArgs) -> Result<GraphStream> {
    if let Some(name) = &source.family {
        return Ok(GraphStream::from_graphs(vec![family(name)?]));
    }
    if let Some(path) = &source.graph {
        let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
        return Ok(GraphStream::from_graph6(BufReader::new(file)));
    }
    Ok(GraphStream::from_graph6(BufReader::new(io::stdin())))
}

fn load_all(source: &SourceArgs) -> Result<Vec<Graph>> {
    let graphs = stream(source)?.collect_graphs()?;
    if graphs.is_empty() {
        bail!("no input graph");
    }
    Ok(graphs)
}

fn load_one(source: &SourceArgs) -> Result<Graph> {
    let mut graphs = load_all(source)?;
    if graphs.len() > 1 {
        bail!("expected one graph, got {}", graphs.len());
    }
    Ok(graphs.remove(0))
}

fn graph6_line(g: &Graph) -> Result<String> {
    Ok(write_graph6(g)?)
}

fn gen(a: GenArgs, out: &mut impl Write) -> Result<u8> {
    let graphs: Vec<Graph> = match (a.family, a.random_mtf, a.gnp, a.seed) {
        (Some(name), None, None, _) => vec![family(&name)?],
        (None, Some(n), None, Some(seed)) => {
            if n < 2 {
                bail!("random maximal triangle-free graphs need n >= 2");
            }
            GraphStream::random_maximal_triangle_free(n, a.count, seed).collect_graphs()?
        }
        (None, None, Some(n), Some(seed)) => {
            if !(0.0..=1.0).contains(&a.p) {
                bail!("p must lie in [0, 1]");
            }
            GraphStream::gnp(n, a.p, a.count, seed).collect_graphs()?
        }
        _ => bail!("give one of --family, --random-mtf or --gnp"),
    };
    for g in &graphs {
        writeln!(out, "{}", graph6_line(g)?)?;
    }
    Ok(0)
}

fn verify(a: VerifyArgs, out: &mut impl Write) -> Result<u8> {
    if a.k == 0 {
        bail!("k must be at least 1");
    }
    let mode = if a.tf {
        Mode::TriangleFree
    } else {
        Mode::General
    };
    if let Some(path) = &a.certificate {
        let g = load_one(&a.source)?;
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        let cert = ViolationCertificate::from_json(text.trim()).context("malformed certificate")?;
        if cert.level > a.k {
            bail!("certificate level {} exceeds k = {}", cert.level, a.k);
        }
        cert.verify(&g, mode)
            .map_err(|e| anyhow!("certificate rejected: {e}"))?;
        writeln!(out, "certificate valid {}", cert.to_json())?;
        return Ok(1);
    }
    let mut code = 0;
    for g in load_all(&a.source)? {
        match find_violation(&g, a.k, mode)? {
            Some(cert) => {
                writeln!(out, "{}", cert.to_json())?;
                code = 1;
            }
            None => writeln!(out, "holds k={} mode={}", a.k, mode_name(mode))?,
        }
    }
    Ok(code)
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::TriangleFree => "triangle-free",
        Mode::General => "general",
    }
}

/// `p/q`, an integer, or a terminating decimal, read exactly.
fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    if let Some((int, frac)) = t.split_once('.') {
        let digits = format!("{int}{frac}");
        let num = BigInt::from_str(&digits).with_context(|| format!("bad number {text:?}"))?;
        let den = num::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(num, den));
    }
    BigRational::from_str(t).map_err(|_| anyhow!("bad number {text:?}"))
}

fn refute_cmd(a: RefuteArgs, out: &mut impl Write) -> Result<u8> {
    let g = load_one(&a.source)?;
    let mut params = if a.strict {
        let mut p = RefutationParams::parametric(a.m.max(1), BigRational::from_integer(1.into()));
        p.mode = ParamMode::StrictPaper;
        p
    } else if let Some(eps) = a.eps {
        if !(eps > 0.0 && eps <= 1.0) {
            bail!("eps must lie in (0, 1]");
        }
        RefutationParams::from_eps(a.m, eps).ok_or_else(|| anyhow!("eps is not finite"))?
    } else {
        let theta = parse_rational(a.theta.as_deref().unwrap_or("1/4"))?;
        RefutationParams::parametric(a.m, theta)
    };
    if let Some(alpha) = a.alpha {
        params.alpha = alpha;
    }
    if let Some(b) = a.budget {
        params.search_budget = b;
    }
    if let Some(v) = a.pivot {
        params.pivot = Pivot::Vertex(v);
    }
    params.distinct_entries = a.distinct;
    let trace = match refute(&g, a.level, &params) {
        Ok(t) => t,
        Err(RefutationError::StrictRefused(report)) => {
            writeln!(out, "outcome=refused {report}")?;
            eprintln!("strict mode refused: {report}");
            return Ok(3);
        }
        Err(e) => return Err(e.into()),
    };
    match a.log {
        LogLevel::Full => write!(out, "{}", trace.to_log())?,
        LogLevel::Outcome => writeln!(out, "{}", trace.outcome_line())?,
    }
    Ok(match trace.outcome {
        Outcome::Certificate { .. } => 1,
        Outcome::Inconclusive(_) | Outcome::VertexOverflow(_) => 3,
    })
}

fn vertex_list(text: &str, n: usize) -> Result<VertexSet> {
    let mut set = VertexSet::empty(n);
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let v: usize = part
            .parse()
            .with_context(|| format!("bad vertex {part:?}"))?;
        if v >= n {
            bail!("vertex {v} out of range for n = {n}");
        }
        set.insert(v);
    }
    Ok(set)
}

fn view_sets(v: &ViewArgs, g: &Graph) -> Result<(VertexSet, VertexSet)> {
    let a = vertex_list(&v.a, g.n())?;
    let b = match &v.b {
        Some(b) => vertex_list(b, g.n())?,
        None => a.complement(),
    };
    Ok((a, b))
}

fn measure(args: MeasureArgs, out: &mut impl Write) -> Result<u8> {
    let g = load_one(&args.view.source)?;
    let (a, b) = view_sets(&args.view, &g)?;
    let bip = BipartiteView::new(&g, a, b)?;
    match (args.samples, args.seed) {
        (Some(samples), Some(seed)) => {
            let mu = covering_measure_sample(&bip, args.s, samples, seed)?;
            write!(out, "{}", mu.to_records())?;
        }
        _ => write!(
            out,
            "{}",
            covering_measure_exact(&bip, args.s)?.to_records()
        )?,
    }
    if let Some(text) = &args.bprime {
        let bprime = vertex_list(text, g.n())?;
        if !bprime.is_subset(bip.b()) {
            bail!("--bprime must be a subset of B");
        }
        let d = measure_domination_check(&bip, args.s, &bprime)?;
        writeln!(out, "domination lhs={} rhs={} ok={}", d.lhs, d.rhs, d.ok)?;
        if !d.ok {
            return Ok(1);
        }
    }
    Ok(0)
}

fn separating(args: SeparatingArgs, out: &mut impl Write) -> Result<u8> {
    let g = load_one(&args.view.source)?;
    let (a, b) = view_sets(&args.view, &g)?;
    let bip = BipartiteView::new(&g, a, b)?;
    match find_unseparated(&bip, args.s, args.t) {
        None => {
            writeln!(out, "separating s={} t={}", args.s, args.t)?;
            Ok(0)
        }
        Some((s, t)) => {
            writeln!(out, "unseparated S={s:?} T={t:?}")?;
            Ok(1)
        }
    }
}

fn search_cmd(a: SearchArgs, out: &mut impl Write) -> Result<u8> {
    let predicates: Vec<Predicate> = search::parse_predicates(&a.filters)?;
    let source = match (a.enumerate, a.random_mtf, a.seed) {
        (Some(n), _, _) => search::enumerate_graphs(n, a.dedup)?,
        (None, Some(n), Some(seed)) => {
            if n < 2 {
                bail!("random maximal triangle-free graphs need n >= 2");
            }
            GraphStream::random_maximal_triangle_free(n, a.count, seed)
        }
        _ => stream(&a.source)?,
    };
    for g in source.filter_by(predicates) {
        writeln!(out, "{}", graph6_line(&g?)?)?;
    }
    Ok(0)
}

fn emit(path: &str, text: &str, out: &mut impl Write) -> Result<()> {
    if path == "-" {
        out.write_all(text.as_bytes())?;
    } else {
        std::fs::write(path, text).with_context(|| format!("cannot write {path}"))?;
    }
    Ok(())
}
