//! Command-line driver. Exit codes: 0 on success, 2 when some queries
//! failed, 1 on fatal errors.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::bench::{loglog_slope, run_bench, Component};
use crate::caratheodory::gls_decompose;
use crate::error::ExpoError;
use crate::io::{
    parse_distribution_file, parse_front_file, parse_queries, to_json, AggregateRow, DistributionFile, FrontFile,
    FrontPointRecord, ModelSpec, QueryDistribution, QueryFailure, QueryFormat, QueryFront, QueryRecord,
    SCHEMA_VERSION,
};
use crate::metrics::{ndcg, normalized_unfairness};
use crate::pareto::{feasible_target, pareto_front_with, scalarization_match, ParetoConfig, UTILITY_TOL};
use crate::scheduler::{deliver_indices, DeliveryMode, DEFAULT_WARMUP};
use crate::simulation::{simulate_query, PolicyKind, SimulationConfig};
use crate::types::{ExposureVector, ParetoFront};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: ExpoError },
    #[error(transparent)]
    Expo(#[from] ExpoError),
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "expohedron", version, about = "Pareto-optimal fair rankings in the expohedron")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trace the utility/unfairness Pareto front of every query.
    Pareto(ParetoArgs),
    /// Decompose front points (or a given exposure) into ranking distributions.
    Decompose(DecomposeArgs),
    /// Deliver ranking distributions over a horizon.
    Schedule(ScheduleArgs),
    /// Run a delivery policy on every query and report averaged trajectories.
    Simulate(SimulateArgs),
    /// Time the endpoint, front and decomposition on random queries.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelFlag {
    /// 1 / log2(k + 2)
    Dcg,
    /// 1 / log2(k + 1)
    DcgUnit,
    /// (1 - p) p^(k - 1)
    Rbp,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value_t = ModelFlag::Dcg)]
    pub model: ModelFlag,
    /// Persistence of the RBP model.
    #[arg(long, default_value_t = 0.8)]
    pub rbp_p: f64,
}

impl ModelArgs {
    fn spec(&self) -> ModelSpec {
        match self.model {
            ModelFlag::Dcg => ModelSpec::Dcg,
            ModelFlag::DcgUnit => ModelSpec::DcgUnit,
            ModelFlag::Rbp => ModelSpec::Rbp { p: self.rbp_p },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatFlag {
    /// Pick from the file extension (.jsonl/.ndjson/.json, else CSV).
    Auto,
    Csv,
    Jsonl,
}

#[derive(Debug, Args)]
pub struct QueryInput {
    /// Query file: CSV `query_id,item_id,relevance` or JSONL.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatFlag::Auto)]
    pub format: FormatFlag,
    /// Warn about queries with more items than this.
    #[arg(long, default_value_t = 100)]
    pub max_items: usize,
}

#[derive(Debug, Args)]
pub struct ParetoArgs {
    #[command(flatten)]
    pub input: QueryInput,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Relative utility gap at which tracing stops.
    #[arg(long, default_value_t = UTILITY_TOL)]
    pub utility_tol: f64,
    /// Number of scalarization weights in [0, 1] used for aggregation.
    #[arg(long, default_value_t = 11)]
    pub alpha_steps: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Front file written by `pareto`.
    #[arg(long, conflicts_with = "exposure", required_unless_present = "exposure")]
    pub input: Option<PathBuf>,
    /// Front point to decompose: `fairness`, `utility`, `alpha=<a>` or `index=<i>`.
    #[arg(long, default_value = "fairness")]
    pub point: String,
    /// Comma-separated exposure vector to decompose instead of a front file.
    #[arg(long, allow_hyphen_values = true)]
    pub exposure: Option<String>,
    /// Model for `--exposure`; front files carry their own.
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    /// Distribution file written by `decompose`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub horizon: usize,
    #[arg(long, value_enum, default_value_t = ModeFlag::Balanced)]
    pub mode: ModeFlag,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Balanced-word steps discarded before output.
    #[arg(long, default_value_t = DEFAULT_WARMUP)]
    pub warmup: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeFlag {
    Balanced,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyFlag {
    /// Front point decomposition delivered as a balanced word.
    ExpoBw,
    /// Front point decomposition sampled i.i.d.
    ExpoSampled,
    /// Plackett-Luce sampling with temperature.
    Pl,
    /// Deficit-bonus controller.
    Ctrl,
}

impl From<PolicyFlag> for PolicyKind {
    fn from(p: PolicyFlag) -> Self {
        match p {
            PolicyFlag::ExpoBw => Self::ExpoBalanced,
            PolicyFlag::ExpoSampled => Self::ExpoSampled,
            PolicyFlag::Pl => Self::PlackettLuce,
            PolicyFlag::Ctrl => Self::Controller,
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub input: QueryInput,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum)]
    pub policy: PolicyFlag,
    /// Scalarization weight (expo policies, default 0), temperature (pl,
    /// default 1) or gain (ctrl, default 1).
    #[arg(long)]
    pub param: Option<f64>,
    #[arg(long)]
    pub horizon: usize,
    /// Seeds averaged for randomized policies.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    /// First seed; run `k` uses `seed + k`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report every k-th step (the last step is always reported).
    #[arg(long, default_value_t = 1)]
    pub every: usize,
    #[arg(long, default_value_t = DEFAULT_WARMUP)]
    pub warmup: usize,
    #[arg(long, default_value_t = UTILITY_TOL)]
    pub utility_tol: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated item counts.
    #[arg(long, value_delimiter = ',', default_value = "10,25,50,100")]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub repetitions: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Whether every query succeeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Complete,
    Partial,
}

impl Outcome {
    fn from_failures(failures: &[QueryFailure]) -> Self {
        if failures.iter().any(|f| !f.skipped) {
            Self::Partial
        } else {
            Self::Complete
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Self::Complete => 0,
            Self::Partial => 2,
        }
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Pareto(args) => cmd_pareto(args),
        Command::Decompose(args) => cmd_decompose(args),
        Command::Schedule(args) => cmd_schedule(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn emit(output: Option<&Path>, text: &str) -> CliResult<()> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn input_error(path: &Path) -> impl FnOnce(ExpoError) -> CliError + '_ {
    move |source| CliError::Input {
        path: path.to_owned(),
        source,
    }
}

fn failure(query_id: &str, skipped: bool, e: &ExpoError) -> QueryFailure {
    let kind = if skipped { "skipping" } else { "failed" };
    eprintln!("warning: query {query_id:?} {kind}: {e}");
    QueryFailure {
        query_id: query_id.to_owned(),
        skipped,
        reason: e.to_string(),
    }
}

/// Read queries, drop uninteresting ones (recorded as skipped) and sort by id.
fn load_queries(input: &QueryInput) -> CliResult<(Vec<QueryRecord>, Vec<QueryFailure>)> {
    let text = read(&input.input)?;
    let format = match input.format {
        FormatFlag::Auto => QueryFormat::from_path(&input.input),
        FormatFlag::Csv => QueryFormat::Csv,
        FormatFlag::Jsonl => QueryFormat::Jsonl,
    };
    let mut queries = parse_queries(&text, format).map_err(input_error(&input.input))?;
    queries.sort_by(|a, b| a.query_id.cmp(&b.query_id));
    if let Some(w) = queries.windows(2).find(|w| w[0].query_id == w[1].query_id) {
        return Err(CliError::Input {
            path: input.input.clone(),
            source: ExpoError::InvalidInput(format!("query id {:?} appears twice", w[0].query_id)),
        });
    }
    let mut kept = Vec::with_capacity(queries.len());
    let mut skipped = Vec::new();
    for q in queries {
        match q.check_interesting() {
            Ok(()) => {
                if q.relevances.len() > input.max_items {
                    eprintln!(
                        "warning: query {:?} has {} items (cap {})",
                        q.query_id,
                        q.relevances.len(),
                        input.max_items
                    );
                }
                kept.push(q)
            }
            Err(e) => skipped.push(failure(&q.query_id, true, &e)),
        }
    }
    Ok((kept, skipped))
}

fn alpha_grid(steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..steps).map(|k| k as f64 / (steps - 1) as f64).collect(),
    }
}

fn front_for_query(q: &QueryRecord, spec: ModelSpec, config: &ParetoConfig) -> crate::error::Result<QueryFront> {
    let model = spec.build(q.relevances.len())?;
    let target = feasible_target(&model, &q.relevances)?;
    let front = pareto_front_with(&model, &target.exposure, &q.relevances, config)?;
    let points = front
        .points
        .iter()
        .map(|p| {
            Ok(FrontPointRecord {
                exposure: p.exposure.values().to_vec(),
                utility: p.utility,
                unfairness: p.unfairness,
                normalized_unfairness: p.unfairness / model.total(),
                ndcg: ndcg(&p.exposure, &q.relevances, &model)?,
            })
        })
        .collect::<crate::error::Result<Vec<_>>>()?;
    Ok(QueryFront {
        query_id: q.query_id.clone(),
        item_ids: q.item_ids.clone(),
        relevances: q.relevances.values().to_vec(),
        target: target.exposure.into_inner(),
        blend: target.blend,
        iterations: front.iterations,
        points,
    })
}

fn aggregate(fronts: &[QueryFront], spec: ModelSpec, steps: usize) -> crate::error::Result<Vec<AggregateRow>> {
    let prepared = fronts
        .iter()
        .map(|q| {
            let model = spec.build(q.relevances.len())?;
            let rho = crate::types::RelevanceVector::new(q.relevances.clone())?;
            Ok((model, rho, q.to_front()))
        })
        .collect::<crate::error::Result<Vec<_>>>()?;
    alpha_grid(steps)
        .into_iter()
        .map(|alpha| {
            let (mut sum_ndcg, mut sum_unfair) = (0.0, 0.0);
            for (model, rho, front) in &prepared {
                let x = scalarization_match(front, alpha)?.exposure;
                sum_ndcg += ndcg(&x, rho, model)?;
                sum_unfair += normalized_unfairness(&x, &front.target, model)?;
            }
            let count = prepared.len();
            let mean = |s: f64| if count == 0 { 0.0 } else { s / count as f64 };
            Ok(AggregateRow {
                alpha,
                mean_ndcg: mean(sum_ndcg),
                mean_normalized_unfairness: mean(sum_unfair),
                queries: count,
            })
        })
        .collect()
}

fn cmd_pareto(args: &ParetoArgs) -> CliResult<Outcome> {
    let (queries, mut failures) = load_queries(&args.input)?;
    let spec = args.model.spec();
    spec.build(2)?;
    let config = ParetoConfig {
        utility_tol: args.utility_tol,
    };
    let results: Vec<_> = queries
        .par_iter()
        .map(|q| front_for_query(q, spec, &config).map_err(|e| (q.query_id.clone(), e)))
        .collect();
    let mut fronts = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(front) => fronts.push(front),
            Err((id, e)) => failures.push(failure(&id, false, &e)),
        }
    }
    failures.sort_by(|a, b| a.query_id.cmp(&b.query_id));
    let file = FrontFile {
        schema_version: SCHEMA_VERSION,
        model: spec,
        utility_tol: args.utility_tol,
        aggregate: aggregate(&fronts, spec, args.alpha_steps)?,
        queries: fronts,
        failures,
    };
    emit(args.output.as_deref(), &to_json(&file)?)?;
    Ok(Outcome::from_failures(&file.failures))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum PointSelector {
    Fairness,
    Utility,
    Alpha(f64),
    Index(usize),
}

impl std::str::FromStr for PointSelector {
    type Err = ExpoError;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        let bad = || ExpoError::InvalidInput(format!("invalid point selector {s:?}"));
        match s {
            "fairness" => Ok(Self::Fairness),
            "utility" => Ok(Self::Utility),
            _ => match s.split_once('=') {
                Some(("alpha", v)) => v.parse().map(Self::Alpha).map_err(|_| bad()),
                Some(("index", v)) => v.parse().map(Self::Index).map_err(|_| bad()),
                _ => Err(bad()),
            },
        }
    }
}

fn select_point(front: &ParetoFront, selector: PointSelector) -> crate::error::Result<ExposureVector> {
    match selector {
        PointSelector::Fairness => Ok(front.first().exposure.clone()),
        PointSelector::Utility => Ok(front.last().exposure.clone()),
        PointSelector::Alpha(a) => Ok(scalarization_match(front, a)?.exposure),
        PointSelector::Index(i) => front.points.get(i).map(|p| p.exposure.clone()).ok_or_else(|| {
            ExpoError::InvalidInput(format!("front has {} points, index {i} requested", front.len()))
        }),
    }
}

fn decompose_point(
    query_id: &str,
    item_ids: Option<Vec<String>>,
    x: ExposureVector,
    spec: ModelSpec,
) -> crate::error::Result<QueryDistribution> {
    let model = spec.build(x.len())?;
    let dist = gls_decompose(&x, &model)?;
    let max_abs_error = dist.expectation(&model)?.max_abs_diff(&x);
    Ok(QueryDistribution {
        query_id: query_id.to_owned(),
        item_ids,
        point: x.into_inner(),
        entries: dist.entries().to_vec(),
        max_abs_error,
    })
}

fn cmd_decompose(args: &DecomposeArgs) -> CliResult<Outcome> {
    let (spec, results) = if let Some(raw) = &args.exposure {
        let values = raw
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|e| ExpoError::InvalidInput(format!("exposure entry {v:?}: {e}")))
            })
            .collect::<crate::error::Result<Vec<_>>>()?;
        let spec = args.model.spec();
        let x = ExposureVector::from(values);
        if !x.is_finite() {
            return Err(ExpoError::InvalidInput("exposure must be finite".into()).into());
        }
        (spec, vec![decompose_point("exposure", None, x, spec).map_err(|e| ("exposure".to_owned(), e))])
    } else {
        let path = args.input.as_ref().expect("clap enforces --input or --exposure");
        let file = parse_front_file(&read(path)?).map_err(input_error(path))?;
        let selector: PointSelector = args.point.parse()?;
        let results = file
            .queries
            .par_iter()
            .map(|q| {
                select_point(&q.to_front(), selector)
                    .and_then(|x| decompose_point(&q.query_id, q.item_ids.clone(), x, file.model))
                    .map_err(|e| (q.query_id.clone(), e))
            })
            .collect();
        (file.model, results)
    };
    if results.len() == 1 && args.exposure.is_some() {
        if let Err((_, e)) = &results[0] {
            return Err(e.clone().into());
        }
    }
    let mut distributions = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(d) => distributions.push(d),
            Err((id, e)) => failures.push(failure(&id, false, &e)),
        }
    }
    distributions.sort_by(|a, b| a.query_id.cmp(&b.query_id));
    let file = DistributionFile {
        schema_version: SCHEMA_VERSION,
        model: spec,
        distributions,
        failures,
    };
    emit(args.output.as_deref(), &to_json(&file)?)?;
    Ok(Outcome::from_failures(&file.failures))
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().from_writer(Vec::new())
}

fn finish_csv(writer: csv::Writer<Vec<u8>>) -> CliResult<String> {
    let bytes = writer
        .into_inner()
        .map_err(|e| ExpoError::InvalidInput(format!("csv output: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn csv_err(e: csv::Error) -> CliError {
    ExpoError::InvalidInput(format!("csv output: {e}")).into()
}

fn cmd_schedule(args: &ScheduleArgs) -> CliResult<Outcome> {
    if args.horizon == 0 {
        return Err(ExpoError::InvalidInput("horizon must be at least 1".into()).into());
    }
    let file = parse_distribution_file(&read(&args.input)?).map_err(input_error(&args.input))?;
    let mode = match args.mode {
        ModeFlag::Balanced => DeliveryMode::Balanced,
        ModeFlag::Sampled => DeliveryMode::Sampled,
    };
    let mut writer = csv_writer();
    writer
        .write_record(["query_id", "step", "entry", "ranking"])
        .map_err(csv_err)?;
    let mut failures = Vec::new();
    for q in &file.distributions {
        let dist = q.distribution()?;
        let indices = match deliver_indices(&dist, args.horizon, mode, args.seed, args.warmup) {
            Ok(i) => i,
            Err(e) => {
                failures.push(failure(&q.query_id, false, &e));
                continue;
            }
        };
        let labels: Vec<String> = dist
            .entries()
            .iter()
            .map(|e| {
                e.ranking
                    .order()
                    .iter()
                    .map(|&i| match &q.item_ids {
                        Some(ids) => ids[i].clone(),
                        None => i.to_string(),
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        for (step, entry) in indices.into_iter().enumerate() {
            writer
                .write_record([q.query_id.as_str(), &step.to_string(), &entry.to_string(), &labels[entry]])
                .map_err(csv_err)?;
        }
    }
    emit(args.output.as_deref(), &finish_csv(writer)?)?;
    Ok(Outcome::from_failures(&failures))
}

fn cmd_simulate(args: &SimulateArgs) -> CliResult<Outcome> {
    if args.horizon == 0 {
        return Err(ExpoError::InvalidInput("horizon must be at least 1".into()).into());
    }
    if args.every == 0 || args.seeds == 0 {
        return Err(ExpoError::InvalidInput("--every and --seeds must be at least 1".into()).into());
    }
    let (queries, mut failures) = load_queries(&args.input)?;
    let spec = args.model.spec();
    spec.build(2)?;
    let policy = PolicyKind::from(args.policy);
    let param = args.param.unwrap_or(policy.default_param());
    let seeds: Vec<u64> = if policy.is_seeded() {
        (0..args.seeds).map(|k| args.seed.wrapping_add(k)).collect()
    } else {
        vec![args.seed]
    };
    let results: Vec<_> = queries
        .par_iter()
        .map(|q| {
            let run = || -> crate::error::Result<(Vec<f64>, Vec<f64>)> {
                let model = spec.build(q.relevances.len())?;
                let mut ndcg = vec![0.0; args.horizon];
                let mut unfair = vec![0.0; args.horizon];
                for &seed in &seeds {
                    let config = SimulationConfig {
                        horizon: args.horizon,
                        seed,
                        warmup: args.warmup,
                        pareto: ParetoConfig {
                            utility_tol: args.utility_tol,
                        },
                    };
                    let report = simulate_query(policy, param, &model, &q.relevances, &config)?;
                    ndcg.iter_mut().zip(&report.ndcg).for_each(|(a, b)| *a += b);
                    unfair
                        .iter_mut()
                        .zip(&report.normalized_unfairness)
                        .for_each(|(a, b)| *a += b);
                }
                Ok((ndcg, unfair))
            };
            run().map_err(|e| (q.query_id.clone(), e))
        })
        .collect();
    let mut sum_ndcg = vec![0.0; args.horizon];
    let mut sum_unfair = vec![0.0; args.horizon];
    let mut ok = 0usize;
    for r in results {
        match r {
            Ok((n, u)) => {
                ok += 1;
                sum_ndcg.iter_mut().zip(n).for_each(|(a, b)| *a += b);
                sum_unfair.iter_mut().zip(u).for_each(|(a, b)| *a += b);
            }
            Err((id, e)) => failures.push(failure(&id, false, &e)),
        }
    }
    let runs = (ok * seeds.len()) as f64;
    let mut writer = csv_writer();
    writer
        .write_record(["policy", "param", "step", "mean_ndcg", "mean_normalized_unfairness", "queries"])
        .map_err(csv_err)?;
    if ok > 0 {
        for t in (0..args.horizon).filter(|t| (t + 1) % args.every == 0 || t + 1 == args.horizon) {
            writer
                .write_record([
                    policy.to_string(),
                    param.to_string(),
                    (t + 1).to_string(),
                    (sum_ndcg[t] / runs).to_string(),
                    (sum_unfair[t] / runs).to_string(),
                    ok.to_string(),
                ])
                .map_err(csv_err)?;
        }
    }
    emit(args.output.as_deref(), &finish_csv(writer)?)?;
    Ok(Outcome::from_failures(&failures))
}

fn cmd_bench(args: &BenchArgs) -> CliResult<Outcome> {
    let rows = run_bench(&args.n, args.repetitions, args.seed, args.model.spec())?;
    let mut writer = csv_writer();
    writer
        .write_record(["n", "component", "mean_s", "median_s", "q025_s", "q975_s"])
        .map_err(csv_err)?;
    for r in &rows {
        writer
            .write_record([
                r.n.to_string(),
                r.component.name().to_owned(),
                r.mean.to_string(),
                r.median.to_string(),
                r.q025.to_string(),
                r.q975.to_string(),
            ])
            .map_err(csv_err)?;
    }
    emit(args.output.as_deref(), &finish_csv(writer)?)?;
    if args.n.len() >= 2 {
        let (x, y): (Vec<f64>, Vec<f64>) = rows
            .iter()
            .filter(|r| r.component == Component::EndpointGls)
            .map(|r| (r.n as f64, r.median))
            .unzip();
        eprintln!("endpoint+gls log-log slope: {:.3}", loglog_slope(&x, &y));
    }
    Ok(Outcome::Complete)
}
