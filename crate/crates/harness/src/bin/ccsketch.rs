//! `ccsketch`: build, merge and query sketches, and run accuracy experiments.
//!
//! Exit status: 0 on success, 1 for usage errors, 2 for data errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ccharness::{
    emit_csv, load_sparse_vectors, load_stream, min_mse_curves, read_csv, run_mse_experiment, synthesize_zipf,
    write_sparse_vectors, ExperimentConfig, HarnessError, Target, ZipfSpec,
};
use ccsketch::{
    shannon_via, EntropyTarget, EstimatorKind, MomentEstimator, ProjectionMode, ProjectionSketch, Route, Skewness,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "ccsketch", version, about = "Skewed stable sketches for frequency moments and entropy")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build or combine sketch files.
    #[command(subcommand)]
    Sketch(SketchCommand),
    /// Estimate the frequency moment F_alpha from a sketch file.
    Estimate(EstimateArgs),
    /// Estimate an entropy from a sketch file.
    Entropy(EntropyArgs),
    /// Monte-Carlo accuracy experiments.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
    /// Synthetic signals.
    #[command(subcommand)]
    Synth(SynthCommand),
}

#[derive(Subcommand)]
enum SketchCommand {
    /// Sketch a stream of `index<TAB>increment` lines.
    Build(BuildArgs),
    /// Add sketches built with identical parameters.
    Merge(MergeArgs),
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 100)]
    k: usize,
    /// `skewed` or `symmetric`.
    #[arg(long, default_value = "skewed")]
    kind: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1 << 16)]
    dimension: u64,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct MergeArgs {
    /// Sketch files; give the flag once per file.
    #[arg(long, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long)]
    input: PathBuf,
    /// gm, hm, oq or sym-gm; defaults to oq (or gm) for skewed sketches and sym-gm for symmetric ones.
    #[arg(long)]
    estimator: Option<String>,
}

#[derive(Args)]
struct EntropyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    estimator: Option<String>,
    /// Entropy family used for the Shannon estimate.
    #[arg(long, default_value = "renyi")]
    route: String,
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Run the MSE grid and write a CSV report.
    Run(RunArgs),
    /// Reduce a report to the minimum MSE over alpha.
    MinCurves(MinCurvesArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Vector file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Synthetic signal `D,s,M`; may be repeated.
    #[arg(long)]
    zipf: Vec<String>,
    /// Seed for the positions of synthetic signals.
    #[arg(long, default_value_t = 0)]
    zipf_seed: u64,
    #[arg(long, value_delimiter = ',')]
    alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    k: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    estimator: Vec<String>,
    /// moment, renyi, tsallis, shannon_via_renyi or shannon_via_tsallis.
    #[arg(long, value_delimiter = ',')]
    target: Vec<String>,
    /// Adds the Shannon-via-route target for each route given.
    #[arg(long, value_delimiter = ',')]
    route: Vec<String>,
    #[arg(long, default_value_t = ExperimentConfig::DEFAULT_REPETITIONS)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `streamed` or `distributional`.
    #[arg(long, default_value = "streamed")]
    projection: String,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct MinCurvesArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Subcommand)]
enum SynthCommand {
    /// Write a Zipf signal in the vector-file format.
    Zipf(ZipfArgs),
}

#[derive(Args)]
struct ZipfArgs {
    #[arg(long)]
    zipf: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    output: PathBuf,
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(m) => Failure::Usage(m),
            other => Failure::Data(other.to_string()),
        }
    }
}

impl From<ccsketch::Error> for Failure {
    fn from(e: ccsketch::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn usage<T, E: ToString>(r: Result<T, E>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Usage(e.to_string()))
}

fn read_sketch(path: &Path) -> Result<ProjectionSketch, Failure> {
    let bytes = fs::read(path).map_err(|e| HarnessError::io(path, e))?;
    ProjectionSketch::from_bytes(&bytes).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn write_sketch(path: &Path, sketch: &ProjectionSketch) -> Outcome {
    fs::write(path, sketch.to_bytes()).map_err(|e| HarnessError::io(path, e).into())
}

fn pick_estimator(name: Option<&str>, sketch: &ProjectionSketch) -> Result<MomentEstimator, Failure> {
    let kind = match name {
        Some(n) => usage(n.parse::<EstimatorKind>())?,
        None => match sketch.skew() {
            Skewness::Symmetric => EstimatorKind::GmSym,
            Skewness::MaxSkewed if EstimatorKind::Oq.supports(sketch.alpha()) => EstimatorKind::Oq,
            Skewness::MaxSkewed => EstimatorKind::Gm,
        },
    };
    if kind.skew() != sketch.skew() {
        return Err(Failure::Usage(format!("{kind} needs a {} sketch, got {}", kind.skew(), sketch.skew())));
    }
    usage(MomentEstimator::new(kind, sketch.alpha(), sketch.k()))
}

fn build(a: BuildArgs) -> Outcome {
    let kind: Skewness = usage(a.kind.parse())?;
    let mut sketch = usage(ProjectionSketch::new(a.alpha, kind, a.k, a.seed, a.dimension))?;
    sketch.extend(load_stream(&a.input)?)?;
    write_sketch(&a.output, &sketch)
}

fn merge(a: MergeArgs) -> Outcome {
    let mut paths = a.input.iter();
    let first = paths.next().expect("clap requires one input");
    let mut acc = read_sketch(first)?;
    for p in paths {
        acc.merge_from(&read_sketch(p)?).map_err(|e| Failure::Data(format!("{}: {e}", p.display())))?;
    }
    write_sketch(&a.output, &acc)
}

fn estimate(a: EstimateArgs) -> Outcome {
    let sketch = read_sketch(&a.input)?;
    let est = pick_estimator(a.estimator.as_deref(), &sketch)?;
    let m = est.estimate(&sketch)?;
    println!("estimator\t{}", m.kind);
    println!("alpha\t{}", m.alpha);
    println!("k\t{}", m.k);
    println!("f_alpha\t{}", m.value);
    println!("relative_variance\t{}", m.predicted_relative_variance);
    println!("f1\t{}", sketch.f1());
    Ok(())
}

fn entropy(a: EntropyArgs) -> Outcome {
    let sketch = read_sketch(&a.input)?;
    let route: Route = usage(a.route.parse())?;
    let est = pick_estimator(a.estimator.as_deref(), &sketch)?;
    let m = est.estimate(&sketch)?;
    let h = shannon_via(&m, sketch.f1(), route, None)?;
    let family = match route {
        Route::Renyi => EntropyTarget::Renyi,
        Route::Tsallis => EntropyTarget::Tsallis,
    };
    println!("estimator\t{}", h.kind);
    println!("alpha\t{}", h.alpha);
    println!("k\t{}", h.k);
    println!("{family}\t{}", h.value);
    println!("shannon\t{}", h.value);
    println!("variance\t{}", h.predicted_variance);
    Ok(())
}

fn run(a: RunArgs) -> Outcome {
    let mut vectors = Vec::new();
    if let Some(path) = &a.input {
        vectors.extend(load_sparse_vectors(path)?);
    }
    for z in &a.zipf {
        let spec: ZipfSpec = z.parse()?;
        vectors.push((format!("zipf({spec})"), synthesize_zipf(spec, a.zipf_seed)));
    }
    if vectors.is_empty() {
        return Err(Failure::Usage("give --input or --zipf".into()));
    }
    let mut cfg = ExperimentConfig::new(vectors);
    if !a.alpha.is_empty() {
        cfg.alphas = a.alpha;
    }
    if !a.k.is_empty() {
        cfg.ks = a.k;
    }
    if !a.estimator.is_empty() {
        cfg.estimators = usage(a.estimator.iter().map(|e| e.parse()).collect())?;
    }
    if !a.target.is_empty() || !a.route.is_empty() {
        let mut targets: Vec<Target> = usage(a.target.iter().map(|t| t.parse()).collect())?;
        for r in &a.route {
            let t = match usage(r.parse::<Route>())? {
                Route::Renyi => Target::ShannonViaRenyi,
                Route::Tsallis => Target::ShannonViaTsallis,
            };
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        cfg.targets = targets;
    }
    cfg.repetitions = a.reps;
    cfg.seed = a.seed;
    cfg.mode = usage(a.projection.parse::<ProjectionMode>())?;
    let report = run_mse_experiment(&cfg)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    emit_csv(&report, &a.output)?;
    Ok(())
}

fn min_curves(a: MinCurvesArgs) -> Outcome {
    let report = read_csv(&a.input)?;
    let curves = min_mse_curves(&report).map_err(|e| Failure::Data(e.to_string()))?;
    emit_csv(&curves, &a.output)?;
    Ok(())
}

fn zipf(a: ZipfArgs) -> Outcome {
    let spec: ZipfSpec = a.zipf.parse()?;
    let name = a.name.unwrap_or_else(|| format!("zipf({spec})"));
    write_sparse_vectors(&a.output, &[(name, synthesize_zipf(spec, a.seed))])?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Sketch(SketchCommand::Build(a)) => build(a),
        Command::Sketch(SketchCommand::Merge(a)) => merge(a),
        Command::Estimate(a) => estimate(a),
        Command::Entropy(a) => entropy(a),
        Command::Experiment(ExperimentCommand::Run(a)) => run(a),
        Command::Experiment(ExperimentCommand::MinCurves(a)) => min_curves(a),
        Command::Synth(SynthCommand::Zipf(a)) => zipf(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Data(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
