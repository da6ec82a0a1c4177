use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use spectraff::constructions::{AllColors, Ambient, Family, FamilySpec, FormChoice, LambdaSel};
use spectraff::experiments::acceptance::{self, certified_grid, CRITERIA};
use spectraff::experiments::{
    coverage_experiment, equation_experiment, mixing_grid, pinned_experiment, sumproduct_experiment,
    system_experiment, CoverageConfig, EquationConfig, ExperimentReport, MixingConfig, PinnedConfig,
    SumProductConfig, SystemKind, SystemSpec,
};
use spectraff::io::{write_colored_edge_list, write_edge_list, CertRecord};
use spectraff::{Caps, Error};

/// Seed used when `--seed` is not given.
const DEFAULT_SEED: u64 = 42;

#[derive(Parser, Debug)]
#[command(name = "spectraff", version, about = "Spectral certification of graphs over finite fields")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Base seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
    /// Worker threads; all cores when absent.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Lower the vertex cap.
    #[arg(long, global = true, env = "SPECTRAFF_MAX_VERTICES")]
    max_vertices: Option<usize>,
    /// Lower the tuple-visit budget.
    #[arg(long, global = true)]
    tuple_budget: Option<u64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Edge list of one construction.
    Construct(FamilyArgs),
    /// Spectral certificate of one graph, or of every color class.
    Certify {
        #[command(flatten)]
        family: FamilyArgs,
        /// Certify against half the claimed eigenvalue bound.
        #[arg(long)]
        halve_claim: bool,
    },
    /// Certification plus mixing, variance, path and double-counting checks.
    Mix {
        #[command(flatten)]
        family: FamilyArgs,
        /// Run the full certified grid instead of one construction.
        #[arg(long, conflicts_with_all = ["family", "spec"])]
        grid: bool,
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        #[arg(long, default_value_t = 50)]
        kst_pairs: usize,
        #[arg(long)]
        halve_claim: bool,
    },
    /// Solution counts of the pair equation, or of a system with `--t`.
    Count {
        #[command(flatten)]
        family: FamilyArgs,
        /// Unknowns of the system.
        #[arg(long)]
        t: Option<usize>,
        /// Pair values in order (0,1), (0,2), ..., with `*` for a free pair.
        /// One value applies to every pair.
        #[arg(long, value_delimiter = ',')]
        values: Vec<String>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Colored clique coverage on random subsets.
    Coverage {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 3)]
        t: usize,
        /// Sample from the unit sphere.
        #[arg(long)]
        sphere: bool,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Pinned value sets and the star indicator chain.
    Pinned {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Sum-product inequality on random subsets of F_q.
    Sumprod {
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, default_value_t = 100)]
        sets: usize,
        /// Largest set volume for the edge count; 0 disables it.
        #[arg(long, default_value_t = 200_000)]
        edge_budget: u64,
    },
    /// The acceptance grid, one line per criterion.
    Acceptance {
        /// Criteria to run; all when absent.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u32>,
    },
}

#[derive(Args, Debug)]
struct FamilyArgs {
    /// Construction parameters as JSON, one object or an array.
    #[arg(long, conflicts_with_all = ["family", "q", "n", "d"])]
    spec: Option<PathBuf>,
    #[arg(long)]
    family: Option<Family>,
    #[arg(long)]
    q: Option<u32>,
    /// Extension degree, norm family.
    #[arg(long)]
    n: Option<u32>,
    /// Dimension, other families.
    #[arg(long)]
    d: Option<u32>,
    /// A color value, or `all`.
    #[arg(long, default_value = "all", value_parser = parse_lambda)]
    lambda: LambdaSel,
    /// `identity`, `coupled`, or matrix rows such as `1 0/0 2`.
    #[arg(long, default_value = "identity", value_parser = parse_form)]
    form: FormChoice,
    /// Strip loops.
    #[arg(long)]
    simple: bool,
}

#[derive(Args, Debug)]
struct Sampling {
    /// Subset sizes; a quarter, half and all of the vertices when absent.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    trials: usize,
}

fn parse_lambda(s: &str) -> Result<LambdaSel, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(LambdaSel::All(AllColors::All));
    }
    s.parse().map(LambdaSel::Value).map_err(|_| format!("expected a color value or `all`, got {s:?}"))
}

fn parse_form(s: &str) -> Result<FormChoice, String> {
    match s {
        "identity" => Ok(FormChoice::Identity),
        "coupled" => Ok(FormChoice::Coupled),
        other => {
            let body = other.strip_prefix("matrix[").and_then(|b| b.strip_suffix(']')).unwrap_or(other);
            let rows: Result<Vec<Vec<u32>>, _> = body
                .split('/')
                .map(|row| row.split_whitespace().map(str::parse).collect())
                .collect();
            match rows {
                Ok(rows) if !rows.is_empty() && rows.iter().all(|r| !r.is_empty()) => Ok(FormChoice::Matrix(rows)),
                _ => Err(format!("expected identity, coupled or matrix rows, got {s:?}")),
            }
        }
    }
}

/// Process outcome, mapped to the exit code.
enum Failure {
    Usage(String),
    Cap(String),
    Assertion(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Assertion(_) | Failure::Runtime(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Cap(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Cap(m) | Failure::Assertion(m) | Failure::Runtime(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            e if e.is_cap_violation() => Failure::Cap(e.to_string()),
            Error::Io(_) | Error::Csv(_) => Failure::Runtime(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let g = &cli.global;
    if let Some(t) = g.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    let mut caps = Caps::default();
    if let Some(v) = g.max_vertices {
        caps = caps.shrink_vertices(v);
    }
    if let Some(b) = g.tuple_budget {
        caps = caps.shrink_budget(b);
    }
    match &cli.command {
        Command::Construct(fa) => construct(g, fa, &caps),
        Command::Certify { family, halve_claim } => certify(g, family, *halve_claim, &caps),
        Command::Mix { family, grid, pairs, kst_pairs, halve_claim } => {
            let specs = if *grid { certified_grid()? } else { expand_colors(family.specs()?, &caps)? };
            let cfg = MixingConfig { pairs: *pairs, kst_pairs: *kst_pairs, seed: g.seed, halve_claim: *halve_claim };
            emit_report(g, &mixing_grid(&specs, &cfg, &caps)?)
        }
        Command::Count { family, t, values, sampling } => {
            let spec = family.single()?;
            let cfg = EquationConfig { sizes: sampling.sizes(&spec, &caps)?, trials: sampling.trials, seed: g.seed };
            let rep = match *t {
                None if values.is_empty() => equation_experiment(&spec, &cfg, &caps)?,
                None => return Err(Failure::Usage("--values needs --t".into())),
                Some(t) => system_experiment(&system_spec(&spec, t, values)?, &cfg, &caps)?,
            };
            emit_report(g, &rep)
        }
        Command::Coverage { family, t, sphere, sampling } => {
            let spec = family.single()?;
            let cfg = CoverageConfig {
                t: *t,
                sizes: sampling.sizes(&spec, &caps)?,
                trials: sampling.trials,
                seed: g.seed,
                sphere: *sphere,
            };
            emit_report(g, &coverage_experiment(&spec, &cfg, &caps)?)
        }
        Command::Pinned { family, sampling } => {
            let spec = family.single()?;
            let cfg = PinnedConfig { sizes: sampling.sizes(&spec, &caps)?, trials: sampling.trials, seed: g.seed };
            emit_report(g, &pinned_experiment(&spec, &cfg, &caps)?)
        }
        Command::Sumprod { q, d, sets, edge_budget } => {
            let cfg = SumProductConfig { q: *q, d: *d, sets: *sets, seed: g.seed, edge_budget: *edge_budget };
            emit_report(g, &sumproduct_experiment(&cfg, &caps)?)
        }
        Command::Acceptance { criteria } => run_acceptance(g, criteria),
    }
}

impl FamilyArgs {
    fn specs(&self) -> Result<Vec<FamilySpec>, Failure> {
        if let Some(path) = &self.spec {
            let text = std::fs::read_to_string(path)?;
            let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(e.to_string()))?;
            let specs: Vec<FamilySpec> = match value {
                serde_json::Value::Array(_) => serde_json::from_value(value),
                _ => serde_json::from_value(value).map(|s| vec![s]),
            }
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            return Ok(specs);
        }
        let family = self.family.ok_or_else(|| Failure::Usage("--family or --spec is required".into()))?;
        let q = self.q.ok_or_else(|| Failure::Usage("--q is required".into()))?;
        let dim = match family {
            Family::Norm => {
                if self.d.is_some() {
                    return Err(Failure::Usage("the norm family takes --n, not --d".into()));
                }
                self.n.ok_or_else(|| Failure::Usage("--n is required for the norm family".into()))?
            }
            _ => {
                if self.n.is_some() {
                    return Err(Failure::Usage(format!("the {} family takes --d, not --n", family.name())));
                }
                self.d.ok_or_else(|| Failure::Usage(format!("--d is required for the {} family", family.name())))?
            }
        };
        let mut spec = FamilySpec::new(family, q, dim, self.lambda)?.with_form(self.form.clone());
        spec.simple = self.simple;
        Ok(vec![spec])
    }

    fn single(&self) -> Result<FamilySpec, Failure> {
        let mut specs = self.specs()?;
        if specs.len() != 1 {
            return Err(Failure::Usage(format!("expected one construction, got {}", specs.len())));
        }
        Ok(specs.remove(0))
    }
}

impl Sampling {
    fn sizes(&self, spec: &FamilySpec, caps: &Caps) -> Result<Vec<usize>, Failure> {
        if !self.sizes.is_empty() {
            return Ok(self.sizes.clone());
        }
        let n = Ambient::from_spec(spec, caps)?.n();
        let mut sizes: Vec<usize> = [n / 4, n / 2, n].into_iter().filter(|&s| s > 0).collect();
        sizes.dedup();
        Ok(sizes)
    }
}

/// One spec per palette color for every `lambda = all` entry.
fn expand_colors(specs: Vec<FamilySpec>, caps: &Caps) -> Result<Vec<FamilySpec>, Failure> {
    let mut out = Vec::new();
    for spec in specs {
        match spec.lambda {
            LambdaSel::Value(_) => out.push(spec),
            LambdaSel::All(_) => {
                for l in Ambient::from_spec(&spec, caps)?.palette() {
                    let mut s = spec.clone();
                    s.lambda = LambdaSel::Value(l);
                    out.push(s);
                }
            }
        }
    }
    Ok(out)
}

fn system_spec(spec: &FamilySpec, t: usize, values: &[String]) -> Result<SystemSpec, Failure> {
    let kind = SystemKind::of_family(spec.family)
        .ok_or_else(|| Failure::Usage(format!("no pair system for the {} family", spec.family.name())))?;
    let pairs = t * t.saturating_sub(1) / 2;
    let parsed: Vec<Option<u32>> = values
        .iter()
        .map(|v| match v.trim() {
            "*" => Ok(None),
            s => s.parse().map(Some).map_err(|_| Failure::Usage(format!("bad pair value {s:?}"))),
        })
        .collect::<Result<_, _>>()?;
    let lambdas = match parsed.len() {
        0 => return Err(Failure::Usage("--values is required with --t".into())),
        1 => vec![parsed[0]; pairs],
        _ => parsed,
    };
    Ok(SystemSpec::new(kind, t, lambdas, spec.clone())?)
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn construct(g: &Global, fa: &FamilyArgs, caps: &Caps) -> Outcome {
    let spec = fa.single()?;
    let amb = Ambient::from_spec(&spec, caps)?;
    let mut out = open_output(g.output.as_deref())?;
    match (spec.lambda, g.format.unwrap_or(Format::Csv)) {
        (LambdaSel::Value(l), Format::Csv) => write_edge_list(&mut out, &spec, &simple(amb.graph(l)?, &spec))?,
        (LambdaSel::All(_), Format::Csv) => write_colored_edge_list(&mut out, &spec, &amb.colored())?,
        (LambdaSel::Value(l), Format::Json) => {
            let graph = simple(amb.graph(l)?, &spec);
            let edges: Vec<[usize; 2]> = graph.edges().into_iter().map(|(u, v)| [u, v]).collect();
            let doc = json!({ "family": spec.family, "params": spec.params(), "vertices": amb.n(), "edges": edges });
            serde_json::to_writer_pretty(&mut out, &doc).map_err(Error::from)?;
            writeln!(out)?;
        }
        (LambdaSel::All(_), Format::Json) => {
            let cg = amb.colored();
            let mut edges = Vec::new();
            for u in 0..cg.n() {
                for v in u..cg.n() {
                    if let Some(c) = cg.color_label(u, v) {
                        edges.push([u as u64, v as u64, c as u64]);
                    }
                }
            }
            let doc = json!({ "family": spec.family, "params": spec.params(), "vertices": amb.n(), "edges": edges });
            serde_json::to_writer_pretty(&mut out, &doc).map_err(Error::from)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn simple(g: spectraff::Graph, spec: &FamilySpec) -> spectraff::Graph {
    if spec.simple {
        g.without_loops()
    } else {
        g
    }
}

fn certify(g: &Global, fa: &FamilyArgs, halve: bool, caps: &Caps) -> Outcome {
    let spec = fa.single()?;
    let amb = Ambient::from_spec(&spec, caps)?;
    let colors = match spec.lambda {
        LambdaSel::Value(l) => vec![l],
        LambdaSel::All(_) => amb.palette(),
    };
    let mut records = Vec::new();
    for l in colors {
        let mut one = spec.clone();
        one.lambda = LambdaSel::Value(l);
        let graph = simple(amb.graph(l)?, &spec);
        let claim = amb.claim(l)?;
        let bound = if halve { claim.lambda.halved() } else { claim.lambda };
        let cert = amb.certify_graph(&graph, l, bound, caps)?;
        records.push(CertRecord::new(&one, &claim, &cert));
    }
    let mut out = open_output(g.output.as_deref())?;
    match g.format.unwrap_or(Format::Json) {
        Format::Json => {
            let text = if records.len() == 1 {
                serde_json::to_string_pretty(&records[0])
            } else {
                serde_json::to_string_pretty(&records)
            }
            .map_err(Error::from)?;
            writeln!(out, "{text}")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["family", "q", "n", "d", "lambda_value", "d_claim", "lambda_claim", "lambda_measured", "satisfied"])
                .map_err(Error::from)?;
            for r in &records {
                let lambda = serde_json::to_value(r.lambda_value).map_err(Error::from)?;
                w.write_record([
                    r.family.name().to_string(),
                    r.q.to_string(),
                    r.n.map(|v| v.to_string()).unwrap_or_default(),
                    r.d.map(|v| v.to_string()).unwrap_or_default(),
                    lambda.to_string().trim_matches('"').to_string(),
                    r.d_claim.to_string(),
                    format!("{:.6}", r.lambda_claim),
                    format!("{:.6}", r.lambda_measured),
                    r.satisfied.to_string(),
                ])
                .map_err(Error::from)?;
            }
            w.flush()?;
        }
    }
    out.flush()?;
    let failed = records.iter().filter(|r| !r.satisfied).count();
    if failed > 0 {
        return Err(Failure::Assertion(format!("{failed} of {} certificates unsatisfied", records.len())));
    }
    Ok(())
}

fn emit_report(g: &Global, rep: &ExperimentReport) -> Outcome {
    let mut out = open_output(g.output.as_deref())?;
    match g.format.unwrap_or(Format::Csv) {
        Format::Csv => rep.write_csv(&mut out)?,
        Format::Json => {
            rep.write_json(&mut out)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    let summary = rep.summary();
    let text = serde_json::to_string_pretty(&summary).map_err(Error::from)?;
    match &g.output {
        Some(p) => {
            let mut name = p.as_os_str().to_owned();
            name.push(".summary.json");
            std::fs::write(PathBuf::from(name), format!("{text}\n"))?;
        }
        None => eprintln!("{text}"),
    }
    if summary.hard_failures > 0 {
        return Err(Failure::Assertion(format!("{} of {} hard checks failed", summary.hard_failures, summary.hard_checks)));
    }
    Ok(())
}

fn run_acceptance(g: &Global, criteria: &[u32]) -> Outcome {
    let ids: Vec<u32> = if criteria.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { criteria.to_vec() };
    let mut results = Vec::new();
    for id in ids {
        let r = acceptance::run(id, g.seed)?;
        println!("{}", r.line());
        for d in &r.details {
            println!("    {d}");
        }
        results.push(r);
    }
    if let Some(path) = &g.output {
        let mut out = open_output(Some(path))?;
        match g.format.unwrap_or(Format::Json) {
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &results).map_err(Error::from)?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(["criterion", "name", "passed", "seconds"]).map_err(Error::from)?;
                for r in &results {
                    w.write_record([r.id.to_string(), r.name.clone(), r.passed.to_string(), format!("{:.3}", r.seconds)])
                        .map_err(Error::from)?;
                }
                w.flush()?;
            }
        }
        out.flush()?;
    }
    let failed: Vec<String> = results.iter().filter(|r| !r.passed).map(|r| r.id.to_string()).collect();
    if !failed.is_empty() {
        return Err(Failure::Assertion(format!("criteria failed: {}", failed.join(", "))));
    }
    Ok(())
}
