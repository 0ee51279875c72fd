//! `sortrep`: build, query and benchmark sorted range indexes.

mod query;
mod workload;

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sorted_range::model::parse_points;
use sorted_range::probe::{self, ProbeCounts};
use sorted_range::{
    AnyIndex, BuildConfig, IndexFile, IndexKind, Optimal2DIndex, OptimalConfig, Point,
    StridePolicy, SuccessorIndex, TextIndex, ThreeSidedIndex,
};

use query::{Answer, CliError, Engine, Query};
use workload::Family;

const MEMORY_BUDGET_ENV: &str = "SORTREP_MEMORY_BUDGET";

#[derive(Parser)]
#[command(name = "sortrep", version, about = "Sorted orthogonal range reporting and text search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index from a points file (`x,y` per line) or a text file.
    Build(BuildArgs),
    /// Answer queries against a saved index.
    Query(QueryArgs),
    /// Measure probe counts and wall-clock time over a random workload.
    Bench(BenchArgs),
    /// Check every structure against the brute-force oracles.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum InputKind {
    Points,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Args, Clone, Copy)]
struct Knobs {
    /// Materialization stride of the compact range tree.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    stride: Option<u32>,
    /// Points per group in the optimal-2d structure.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    group_size: Option<u64>,
    /// Warn when the estimated index size exceeds this many bytes.
    #[arg(long, env = MEMORY_BUDGET_ENV, default_value_t = 1 << 30,
          value_parser = clap::value_parser!(u64).range(1..))]
    memory_budget: u64,
}

#[derive(Args)]
struct BuildArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, value_enum, default_value = "points")]
    kind: InputKind,
    /// successor, three-sided or optimal-2d (points input only).
    #[arg(long, default_value = "successor")]
    structure: String,
    #[command(flatten)]
    knobs: Knobs,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
}

#[derive(Args)]
struct QueryArgs {
    index: PathBuf,
    /// One query, e.g. `succ 2 1 3` or `find abra`.
    #[arg(num_args = 0.., allow_negative_numbers = true)]
    query: Vec<String>,
    /// File with one query per line; blank lines and `#` comments skipped.
    #[arg(long, conflicts_with = "query")]
    queries: Option<PathBuf>,
    /// Report at most this many results per query.
    #[arg(short)]
    k: Option<usize>,
    /// Recheck every answer against the brute-force oracle.
    #[arg(long)]
    verify: bool,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    /// Worker threads for query batches.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
}

#[derive(Args)]
struct BenchArgs {
    /// Benchmark a saved index.
    #[arg(long, conflicts_with = "sizes")]
    index: Option<PathBuf>,
    /// Build random indexes of 2^s points (or text bytes) for each s.
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u32).range(1..31))]
    sizes: Vec<u32>,
    #[arg(long, value_enum, default_value = "succ")]
    family: Family,
    /// Structure for synthetic indexes; defaults by family.
    #[arg(long)]
    structure: Option<String>,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    count: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Result limits; one record per value. Omitted: unlimited.
    #[arg(short, long, value_delimiter = ',')]
    k: Vec<usize>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    repetitions: u64,
    #[command(flatten)]
    knobs: Knobs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Queries per structure and family.
    #[arg(long, default_value_t = 300, value_parser = clap::value_parser!(u64).range(1..))]
    queries: u64,
}

fn io_err(path: &Path, e: io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

enum Input<'a> {
    Points(&'a [Point]),
    Text(&'a [u8]),
}

fn build_index(
    input: Input<'_>,
    structure: IndexKind,
    knobs: &Knobs,
    quiet: bool,
) -> Result<IndexFile, CliError> {
    let n = match input {
        Input::Points(p) => p.len(),
        Input::Text(t) => t.len(),
    };
    let estimate = workload::estimated_bytes(structure, n);
    if !quiet && estimate > knobs.memory_budget as u128 {
        eprintln!(
            "sortrep: warning: a {structure} index over {n} entries needs about {estimate} bytes, \
             over the {} byte budget ({MEMORY_BUDGET_ENV})",
            knobs.memory_budget
        );
    }
    let stride = knobs.stride.unwrap_or(match structure {
        IndexKind::Optimal2D => 1,
        _ => StridePolicy::LogLog.resolve(n),
    });
    let index = match (input, structure) {
        (Input::Text(t), _) => AnyIndex::Text(TextIndex::with_stride(t, stride)?),
        (Input::Points(p), IndexKind::Successor) => AnyIndex::Successor(SuccessorIndex::build(p, stride)?),
        (Input::Points(p), IndexKind::ThreeSided) => AnyIndex::ThreeSided(ThreeSidedIndex::build(p)?),
        (Input::Points(p), IndexKind::Optimal2D) => {
            let cfg = OptimalConfig { group_size: knobs.group_size.map(|g| g as usize), stride };
            AnyIndex::Optimal2D(Optimal2DIndex::with_config(p, cfg)?)
        }
        (Input::Points(_), IndexKind::Text) => {
            return Err(CliError::Usage("a text index needs --kind text".into()))
        }
    };
    Ok(IndexFile { config: BuildConfig { stride, group_size: knobs.group_size }, index })
}

fn cmd_build(args: BuildArgs) -> Result<(), CliError> {
    let raw = fs::read(&args.input).map_err(|e| io_err(&args.input, e))?;
    let started = Instant::now();
    let file = match args.kind {
        InputKind::Text => {
            if raw.is_empty() {
                return Err(CliError::Io(format!("{}: text is empty", args.input.display())));
            }
            build_index(Input::Text(&raw), IndexKind::Text, &args.knobs, false)?
        }
        InputKind::Points => {
            let structure: IndexKind = args.structure.parse()?;
            let text = String::from_utf8(raw)
                .map_err(|e| CliError::Io(format!("{}: not UTF-8: {e}", args.input.display())))?;
            let points = parse_points(&text)
                .map_err(|e| CliError::Io(format!("{}: {e}", args.input.display())))?;
            build_index(Input::Points(&points), structure, &args.knobs, false)?
        }
    };
    let build_ms = started.elapsed().as_secs_f64() * 1e3;
    file.save(&args.output).map_err(|e| CliError::Io(format!("{}: {e}", args.output.display())))?;
    let summary = json!({
        "structure": file.index.kind().name(),
        "n": file.index.len(),
        "build_ms": build_ms,
        "size_bytes": file.index.size_in_bytes(),
        "stride": file.config.stride,
        "group_size": file.config.group_size,
        "output": args.output.display().to_string(),
    });
    match args.format {
        Format::Json => println!("{summary}"),
        Format::Human => {
            println!("structure  {}", file.index.kind());
            println!("n          {}", file.index.len());
            println!("build      {build_ms:.1} ms");
            println!("size       {} bytes", file.index.size_in_bytes());
            println!("written    {}", args.output.display());
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct QueryRecord {
    seq: usize,
    query: String,
    answer: Answer,
    probes: ProbeCounts,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
}

fn read_queries(args: &QueryArgs, text: bool) -> Result<Vec<Query>, CliError> {
    match &args.queries {
        Some(path) => {
            let body = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            body.lines()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
                .map(|(i, l)| {
                    Query::parse(l, text).map_err(|e| {
                        CliError::Usage(format!("{} line {}: {e}", path.display(), i + 1))
                    })
                })
                .collect()
        }
        None if args.query.is_empty() => {
            Err(CliError::Usage("give a query or --queries FILE".into()))
        }
        None => Ok(vec![Query::parse(&args.query.join(" "), text)?]),
    }
}

fn cmd_query(args: QueryArgs) -> Result<(), CliError> {
    let file = IndexFile::load(&args.index)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.index.display())))?;
    let engine = Engine::new(file.index);
    let queries = read_queries(&args, engine.is_text())?;
    let batch = args.queries.is_some();

    let answer_one = |(seq, q): (usize, &Query)| -> Result<QueryRecord, CliError> {
        let (answer, probes) = probe::measure(|| engine.run(q, args.k));
        let answer = answer?;
        let verified = if args.verify {
            Some(engine.oracle(q, args.k)? == answer)
        } else {
            None
        };
        Ok(QueryRecord { seq, query: q.to_string(), answer, probes, verified })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads.unwrap_or(0) as usize)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    // par_iter keeps input order in the collected records
    let records: Vec<QueryRecord> =
        pool.install(|| queries.par_iter().enumerate().map(answer_one).collect::<Result<_, _>>())?;

    let mut out = BufWriter::new(io::stdout().lock());
    let mut mismatches = Vec::new();
    for r in &records {
        if r.verified == Some(false) {
            mismatches.push(format!("#{} `{}`", r.seq, r.query));
        }
        let written = match args.format {
            Format::Json => writeln!(out, "{}", serde_json::to_string(r).expect("serializable")),
            Format::Human => {
                if batch {
                    writeln!(out, "# {}", r.query)
                        .and_then(|_| r.answer.human().iter().try_for_each(|l| writeln!(out, "{l}")))
                } else {
                    r.answer.human().iter().try_for_each(|l| writeln!(out, "{l}"))
                }
            }
        };
        written.map_err(|e| CliError::Io(e.to_string()))?;
    }
    out.flush().map_err(|e| CliError::Io(e.to_string()))?;
    if !mismatches.is_empty() {
        return Err(CliError::Mismatch(format!(
            "{} of {} answers differ from the oracle: {}",
            mismatches.len(),
            records.len(),
            mismatches.join(", ")
        )));
    }
    Ok(())
}

/// Mean and 99th percentile of every counter.
fn summarize(samples: &[ProbeCounts]) -> (BTreeMap<String, f64>, BTreeMap<String, u64>) {
    let mut columns: BTreeMap<String, Vec<u64>> = BTreeMap::new();
    for s in samples {
        if let Value::Object(map) = serde_json::to_value(s).expect("counters serialize") {
            for (k, v) in map {
                columns.entry(k).or_default().push(v.as_u64().unwrap_or(0));
            }
        }
    }
    let mut mean = BTreeMap::new();
    let mut p99 = BTreeMap::new();
    for (k, mut col) in columns {
        col.sort_unstable();
        let m = col.iter().sum::<u64>() as f64 / col.len().max(1) as f64;
        let idx = ((col.len() as f64 * 0.99).ceil() as usize).clamp(1, col.len()) - 1;
        mean.insert(k.clone(), m);
        p99.insert(k, col[idx]);
    }
    (mean, p99)
}

fn run_bench(
    engine: &Engine,
    family: Family,
    args: &BenchArgs,
    build_ms: Option<f64>,
    out: &mut impl Write,
) -> Result<(), CliError> {
    if !Family::for_kind(engine.index.kind()).contains(&family) {
        return Err(CliError::Usage(format!(
            "a {} index has no `{}` workload",
            engine.index.kind(),
            family.to_possible_value().expect("named").get_name()
        )));
    }
    let ks: Vec<Option<usize>> =
        if args.k.is_empty() { vec![None] } else { args.k.iter().map(|&k| Some(k)).collect() };
    for k in ks {
        for rep in 0..args.repetitions {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let queries: Vec<Query> =
                (0..args.count).map(|_| workload::random_query(family, engine, &mut rng)).collect();
            let mut samples = Vec::with_capacity(queries.len());
            let mut results = 0usize;
            let started = Instant::now();
            for q in &queries {
                let (answer, counts) = probe::measure(|| engine.run(q, k));
                results += answer?.len();
                samples.push(counts);
            }
            let ns = started.elapsed().as_nanos() as f64 / queries.len() as f64;
            let (mean, p99) = summarize(&samples);
            let per_result: BTreeMap<&String, f64> = mean
                .iter()
                .map(|(key, m)| (key, if results == 0 { 0.0 } else { m * queries.len() as f64 / results as f64 }))
                .collect();
            let record = json!({
                "family": family,
                "structure": engine.index.kind().name(),
                "n": engine.index.len(),
                "k": k,
                "rep": rep,
                "queries": queries.len(),
                "results_per_query": results as f64 / queries.len() as f64,
                "ns_per_query": ns,
                "build_ms": build_ms,
                "mean": mean,
                "p99": p99,
                "per_result": per_result,
            });
            let written = match args.format {
                Format::Json => writeln!(out, "{record}"),
                Format::Human => writeln!(
                    out,
                    "{:<9} n={:<8} k={:<6} rep={rep}  nodes mean {:>7.2} p99 {:>4}  results/query {:>8.2}  {:>9.0} ns/query",
                    engine.index.kind().name(),
                    engine.index.len(),
                    k.map_or("all".into(), |k| k.to_string()),
                    record["mean"]["nodes_visited"].as_f64().unwrap_or(0.0),
                    record["p99"]["nodes_visited"],
                    record["results_per_query"].as_f64().unwrap_or(0.0),
                    ns,
                ),
            };
            written.map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    let mut out = BufWriter::new(io::stdout().lock());
    if let Some(path) = &args.index {
        let file = IndexFile::load(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        run_bench(&Engine::new(file.index), args.family, &args, None, &mut out)?;
    } else {
        if args.sizes.is_empty() {
            return Err(CliError::Usage("give --index FILE or --sizes LIST".into()));
        }
        let structure = match &args.structure {
            Some(s) => s.parse()?,
            None => args.family.default_structure(),
        };
        for &s in &args.sizes {
            let n = 1usize << s;
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed ^ s as u64);
            let started = Instant::now();
            let file = if structure == IndexKind::Text {
                let text = workload::random_text(n, b"acgt", &mut rng);
                build_index(Input::Text(&text), structure, &args.knobs, false)?
            } else {
                let points = workload::permutation_points(n, &mut rng);
                build_index(Input::Points(&points), structure, &args.knobs, false)?
            };
            let build_ms = started.elapsed().as_secs_f64() * 1e3;
            run_bench(&Engine::new(file.index), args.family, &args, Some(build_ms), &mut out)?;
        }
    }
    out.flush().map_err(|e| CliError::Io(e.to_string()))
}

fn cmd_selftest(args: SelftestArgs) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let knobs = Knobs { stride: None, group_size: None, memory_budget: u64::MAX };
    let mut engines = Vec::new();
    for n in [1usize, 40, 700] {
        let points = workload::grid_points(n, (n as i64 / 2).max(1), &mut rng);
        for structure in [IndexKind::Successor, IndexKind::ThreeSided, IndexKind::Optimal2D] {
            let knobs = Knobs { group_size: Some(5), ..knobs };
            engines.push(build_index(Input::Points(&points), structure, &knobs, true)?);
        }
        engines.push(build_index(Input::Points(&points), IndexKind::Optimal2D, &knobs, true)?);
    }
    engines.push(build_index(Input::Text(b"abracadabra"), IndexKind::Text, &knobs, true)?);
    let text = workload::random_text(900, b"ab", &mut rng);
    engines.push(build_index(Input::Text(&text), IndexKind::Text, &knobs, true)?);

    let mut failures = Vec::new();
    let mut checked = 0;
    for file in engines {
        let engine = Engine::new(file.index);
        for &family in Family::for_kind(engine.index.kind()) {
            for _ in 0..args.queries {
                let q = workload::random_query(family, &engine, &mut rng);
                let k = if rng.gen_bool(0.5) { None } else { Some(rng.gen_range(0..20)) };
                let got = engine.run(&q, k)?;
                let want = engine.oracle(&q, k)?;
                checked += 1;
                if got != want && failures.len() < 10 {
                    failures.push(format!(
                        "{} n={} `{q}` k={k:?}: got {got:?}, want {want:?}",
                        engine.index.kind(),
                        engine.index.len()
                    ));
                }
            }
        }
    }
    if failures.is_empty() {
        println!("selftest: {checked} queries match the oracles");
        Ok(())
    } else {
        for f in &failures {
            eprintln!("{f}");
        }
        Err(CliError::Mismatch(format!("{} mismatching queries shown above", failures.len())))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Query(a) => cmd_query(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Selftest(a) => cmd_selftest(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sortrep: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
