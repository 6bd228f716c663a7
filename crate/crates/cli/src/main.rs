//! `persym` command-line tool.
//!
//! Errors are reported on stderr as one tab-separated line,
//! `error<TAB>kind<TAB>message`. The exit status is 2 for malformed command
//! lines and 1 for every other failure.

mod config;
mod files;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use persym::synthetic::synthetic_database;
use persym::{
    compute_distance_matrix, downsample_blocks, evaluate, grid_to_graph, leave_one_out_knn, optimize_weights,
    retrieval_accuracy, vectorize_all, zero_dim_persistence, Connectivity, DistanceMatrix, DistanceMethod, Execution,
    FilteredGraph, Grid, Items, PersistenceDiagram, DEFAULT_K,
};
use serde::Serialize;

use config::{set, FileConfig, Method};
use files::{collect_inputs, read_diagram, stem, warn, write_atomic};

const THREADS_VAR: &str = "PERSYM_THREADS";

#[derive(Parser)]
#[command(
    name = "persym",
    version,
    about = "Persistence diagram retrieval with symmetric-function signatures"
)]
struct Cli {
    /// JSON file whose fields override the command-line flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Compute on the calling thread only
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute normalized, finitized 0-dimensional diagrams from graph (.json) or grid (.csv) files
    ComputeDiagrams(ComputeArgs),
    /// Turn diagram files into symmetric-function vectors (.json)
    Vectorize(VectorizeArgs),
    /// Pairwise distance matrix of a set of diagram files
    Distmat(DistmatArgs),
    /// Leave-one-out retrieval evaluation on one or more distance matrices
    Retrieve(RetrieveArgs),
    /// Write seeded synthetic diagram files
    GenSynthetic(SyntheticArgs),
    /// Time full distance matrices for all three methods
    Bench(BenchArgs),
}

#[derive(Args)]
struct ComputeArgs {
    /// Input files or directories
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(short, long)]
    output: PathBuf,
    /// Grid adjacency
    #[arg(long, default_value = "4")]
    connectivity: Connectivity,
    /// Average grids over square blocks of this side before building the graph
    #[arg(long, default_value_t = 1)]
    block: usize,
    /// Filtration range mapped onto [0, 1]; defaults to the range over all inputs
    #[arg(long, value_delimiter = ',', num_args = 2, value_names = ["MIN", "MAX"])]
    range: Option<Vec<f64>>,
    /// Class label written into every output file
    #[arg(long)]
    label: Option<String>,
}

#[derive(Args)]
struct VectorizeArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, default_value = "R")]
    method: Method,
    #[arg(long, default_value_t = DEFAULT_K)]
    k: usize,
}

#[derive(Args)]
struct DistmatArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Matrix CSV to write
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, default_value = "bottleneck")]
    method: Method,
    #[arg(long, default_value_t = DEFAULT_K)]
    k: usize,
}

#[derive(Args)]
struct RetrieveArgs {
    /// Matrix CSV files over the same items
    #[arg(required = true)]
    matrices: Vec<PathBuf>,
    /// Report JSON to write
    #[arg(short, long)]
    output: PathBuf,
    /// One weight per matrix
    #[arg(long, value_delimiter = ',', conflicts_with = "optimize")]
    weights: Option<Vec<f64>>,
    /// Search the weight simplex for the best leave-one-out accuracy
    #[arg(long)]
    optimize: bool,
    #[arg(long, default_value_t = persym::retrieval::DEFAULT_GRID_STEP)]
    grid_step: f64,
    /// Label counted as the positive class
    #[arg(long)]
    positive: Option<String>,
    /// Neighbors in the majority vote
    #[arg(long, default_value_t = 1)]
    neighbors: usize,
}

#[derive(Args)]
struct SyntheticArgs {
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value_t = 1000)]
    points: usize,
    #[arg(long, default_value_t = 0.9)]
    noise_fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    label: Option<String>,
    #[arg(long, default_value = "synthetic")]
    prefix: String,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_K)]
    k: usize,
    /// Report JSON to write instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) if !err.use_stderr() => {
            let _ = err.print();
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            let rendered = err.to_string();
            let message = rendered.lines().next().unwrap_or("invalid arguments");
            let message = message.trim_start_matches("error: ");
            eprintln!("error\tusage\t{message}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let kind = err
                .chain()
                .find_map(|e| e.downcast_ref::<persym::Error>())
                .map(persym::Error::kind)
                .or_else(|| {
                    err.chain()
                        .find_map(|e| e.downcast_ref::<std::io::Error>())
                        .map(|_| "io")
                })
                .unwrap_or("usage");
            let message = format!("{err:#}").replace(['\n', '\t'], " ");
            eprintln!("error\t{kind}\t{message}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let file = FileConfig::load(cli.config.as_deref())?;
    configure_threads()?;
    let sequential = file.sequential.unwrap_or(cli.sequential);
    let exec = if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match cli.command {
        Command::ComputeDiagrams(mut a) => {
            set(&mut a.connectivity, file.connectivity);
            set(&mut a.block, file.block);
            if let Some(r) = file.range {
                a.range = Some(r.to_vec());
            }
            if file.label.is_some() {
                a.label = file.label;
            }
            compute_diagrams(a, exec)
        }
        Command::Vectorize(mut a) => {
            set(&mut a.method, file.method);
            set(&mut a.k, file.k);
            vectorize(a, exec)
        }
        Command::Distmat(mut a) => {
            set(&mut a.method, file.method);
            set(&mut a.k, file.k);
            distmat(a, exec)
        }
        Command::Retrieve(mut a) => {
            if file.weights.is_some() {
                a.weights = file.weights;
            }
            set(&mut a.optimize, file.optimize);
            set(&mut a.grid_step, file.grid_step);
            set(&mut a.neighbors, file.neighbors);
            if file.positive.is_some() {
                a.positive = file.positive;
            }
            retrieve(a)
        }
        Command::GenSynthetic(mut a) => {
            set(&mut a.count, file.count);
            set(&mut a.points, file.points);
            set(&mut a.noise_fraction, file.noise_fraction);
            set(&mut a.seed, file.seed);
            if file.label.is_some() {
                a.label = file.label;
            }
            set(&mut a.prefix, file.prefix);
            gen_synthetic(a)
        }
        Command::Bench(mut a) => {
            set(&mut a.k, file.k);
            bench(a, exec)
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .map_err(|_| persym::Error::Config(format!("{THREADS_VAR}=`{value}` is not a thread count")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| persym::Error::Config(e.to_string()))?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn load_graph(path: &Path, connectivity: Connectivity, block: usize) -> anyhow::Result<FilteredGraph> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let graph = match ext {
        "json" => {
            let text = fs::read_to_string(path)?;
            FilteredGraph::from_json(&text)?
        }
        "csv" => {
            let grid = Grid::read_csv(fs::File::open(path)?)?;
            grid_to_graph(&downsample_blocks(&grid, block)?, connectivity)?
        }
        _ => bail!(persym::Error::InvalidArgument(format!(
            "unsupported input `{}`, expected .json graph or .csv grid",
            path.display()
        ))),
    };
    Ok(graph)
}

fn compute_diagrams(a: ComputeArgs, exec: Execution) -> anyhow::Result<()> {
    if a.block == 0 {
        bail!(persym::Error::InvalidArgument("--block must be at least 1".into()));
    }
    let inputs = collect_inputs(&a.inputs, &["json", "csv"])?;
    if inputs.is_empty() {
        warn("empty-input", "no graph or grid files found; nothing written");
        return Ok(());
    }
    let graphs = exec.try_map(&inputs, |p| {
        load_graph(p, a.connectivity, a.block).with_context(|| format!("{}", p.display()))
    })?;
    let (lo, hi) = match a.range.as_deref() {
        Some(&[lo, hi]) => (lo, hi),
        Some(_) => bail!(persym::Error::InvalidArgument("--range needs MIN,MAX".into())),
        None => graphs
            .iter()
            .flat_map(|g| g.values().iter().copied())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x))),
    };
    // a constant filtration has no scale; shift it to start at 0
    let hi = if a.range.is_none() && lo == hi { lo + 1.0 } else { hi };
    let diagrams = exec.try_map(&graphs, |g| -> anyhow::Result<PersistenceDiagram> {
        let d = zero_dim_persistence(g)?
            .normalize_filtration(lo, hi)?
            .finitize_cornerlines();
        Ok(match &a.label {
            Some(label) => d.with_label(label.clone()),
            None => d,
        })
    });
    let diagrams = diagrams?;
    for (path, d) in inputs.iter().zip(&diagrams) {
        let out = a.output.join(format!("{}.csv", stem(path)));
        write_atomic(&out, d.to_csv_string().as_bytes())?;
    }
    Ok(())
}

fn load_diagrams(inputs: &[PathBuf]) -> anyhow::Result<(Vec<PathBuf>, Vec<PersistenceDiagram>)> {
    let paths = collect_inputs(inputs, &["csv"])?;
    let diagrams = paths
        .iter()
        .map(|p| read_diagram(p))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok((paths, diagrams))
}

fn vectorize(a: VectorizeArgs, exec: Execution) -> anyhow::Result<()> {
    let Some(transform) = a.method.transform() else {
        bail!(persym::Error::InvalidArgument("vectorize needs --method T or R".into()));
    };
    let (paths, diagrams) = load_diagrams(&a.inputs)?;
    if paths.is_empty() {
        warn("empty-input", "no diagram files found; nothing written");
        return Ok(());
    }
    let vectors = vectorize_all(&diagrams, transform, a.k, exec)?;
    for (path, v) in paths.iter().zip(&vectors) {
        let out = a.output.join(format!("{}.json", stem(path)));
        write_atomic(&out, v.to_json()?.as_bytes())?;
    }
    Ok(())
}

fn matrix_for(
    diagrams: &[PersistenceDiagram],
    method: Method,
    k: usize,
    exec: Execution,
) -> persym::Result<DistanceMatrix> {
    let matrix = match method.transform() {
        None => compute_distance_matrix(Items::Diagrams(diagrams), DistanceMethod::Bottleneck, exec)?,
        Some(t) => {
            let vectors = vectorize_all(diagrams, t, k, exec)?;
            compute_distance_matrix(Items::Vectors(&vectors), DistanceMethod::VectorD, exec)?
        }
    };
    let labels: Option<Vec<String>> = diagrams.iter().map(|d| d.label.clone()).collect();
    match labels {
        Some(labels) if matrix.labels().is_none() => matrix.with_labels(labels),
        _ => Ok(matrix),
    }
}

fn distmat(a: DistmatArgs, exec: Execution) -> anyhow::Result<()> {
    let (paths, diagrams) = load_diagrams(&a.inputs)?;
    if paths.is_empty() {
        bail!(persym::Error::EmptyInput);
    }
    let ids = paths.iter().map(|p| stem(p)).collect();
    let matrix = matrix_for(&diagrams, a.method, a.k, exec)?.with_ids(ids)?;
    write_atomic(&a.output, matrix.to_csv_string()?.as_bytes())
}

#[derive(Serialize)]
struct ItemReport {
    id: String,
    label: String,
    predicted: String,
    neighbor: String,
}

#[derive(Serialize)]
struct RetrievalReport {
    matrices: Vec<String>,
    weights: Vec<f64>,
    neighbors: usize,
    positive_class: String,
    accuracy: f64,
    sensitivity: f64,
    specificity: f64,
    true_positives: usize,
    false_negatives: usize,
    true_negatives: usize,
    false_positives: usize,
    label_accuracy: f64,
    items: Vec<ItemReport>,
}

fn read_matrix(path: &Path) -> anyhow::Result<DistanceMatrix> {
    let file = fs::File::open(path).with_context(|| format!("{}", path.display()))?;
    DistanceMatrix::read_csv(file).with_context(|| format!("{}", path.display()))
}

fn retrieve(a: RetrieveArgs) -> anyhow::Result<()> {
    let matrices = a
        .matrices
        .iter()
        .map(|p| read_matrix(p))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let first = &matrices[0];
    if let Some((path, _)) = a.matrices.iter().zip(&matrices).find(|(_, m)| m.ids() != first.ids()) {
        bail!(persym::Error::Config(format!(
            "{} lists different items than {}",
            path.display(),
            a.matrices[0].display()
        )));
    }
    let labels = first.labels().ok_or(persym::Error::MissingLabels)?.to_vec();
    let matrices: Vec<DistanceMatrix> = matrices
        .into_iter()
        .map(|m| m.with_labels(labels.clone()))
        .collect::<persym::Result<_>>()?;

    let weights = match (a.weights, a.optimize) {
        (_, true) => optimize_weights(&matrices, a.grid_step)?,
        (Some(w), false) => w,
        (None, false) if matrices.len() == 1 => vec![1.0],
        (None, false) => bail!(persym::Error::InvalidArgument(
            "several matrices need --weights or --optimize".into()
        )),
    };
    let combined = persym::combine_matrices(&matrices, &weights)?;
    let predictions = leave_one_out_knn(&combined, a.neighbors)?;
    let predicted: Vec<String> = predictions.iter().map(|p| p.predicted.clone()).collect();
    let positive = match a.positive {
        Some(p) => p,
        None => bail!(persym::Error::InvalidArgument("--positive CLASS is required".into())),
    };
    let eval = evaluate(&predicted, &labels, &positive)?;
    let ids = combined.ids();
    let items = predictions
        .iter()
        .enumerate()
        .map(|(i, p)| ItemReport {
            id: ids[i].clone(),
            label: labels[i].clone(),
            predicted: p.predicted.clone(),
            neighbor: ids[p.neighbor].clone(),
        })
        .collect();
    let report = RetrievalReport {
        matrices: a.matrices.iter().map(|p| p.display().to_string()).collect(),
        weights,
        neighbors: a.neighbors,
        positive_class: positive,
        accuracy: eval.accuracy,
        sensitivity: eval.sensitivity,
        specificity: eval.specificity,
        true_positives: eval.true_positives,
        false_negatives: eval.false_negatives,
        true_negatives: eval.true_negatives,
        false_positives: eval.false_positives,
        label_accuracy: 100.0 * retrieval_accuracy(&combined)?,
        items,
    };
    write_atomic(&a.output, serde_json::to_string_pretty(&report)?.as_bytes())
}

fn gen_synthetic(a: SyntheticArgs) -> anyhow::Result<()> {
    let db = synthetic_database(a.count, a.points, a.noise_fraction, a.seed)?;
    let width = (a.count - 1).to_string().len().max(3);
    for (i, d) in db.into_iter().enumerate() {
        let d = match &a.label {
            Some(label) => d.with_label(label.clone()),
            None => d,
        };
        let out = a.output.join(format!("{}_{:0width$}.csv", a.prefix, i));
        write_atomic(&out, d.to_csv_string().as_bytes())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct Timing {
    method: &'static str,
    seconds: f64,
    speedup_vs_bottleneck: f64,
}

#[derive(Serialize)]
struct BenchReport {
    diagrams: usize,
    cornerpoints: usize,
    k: usize,
    parallel: bool,
    timings: Vec<Timing>,
}

fn bench(a: BenchArgs, exec: Execution) -> anyhow::Result<()> {
    let (_, diagrams) = load_diagrams(&a.inputs)?;
    if diagrams.len() < 2 {
        bail!(persym::Error::InvalidArgument("bench needs at least 2 diagrams".into()));
    }
    let mut seconds = Vec::new();
    for method in [Method::Bottleneck, Method::T, Method::R] {
        let start = Instant::now();
        std::hint::black_box(matrix_for(&diagrams, method, a.k, exec)?);
        seconds.push((method.name(), start.elapsed().as_secs_f64()));
    }
    let base = seconds[0].1;
    let report = BenchReport {
        diagrams: diagrams.len(),
        cornerpoints: diagrams.iter().map(PersistenceDiagram::count).sum(),
        k: a.k,
        parallel: exec.is_parallel(),
        timings: seconds
            .into_iter()
            .map(|(method, s)| Timing {
                method,
                seconds: s,
                speedup_vs_bottleneck: base / s,
            })
            .collect(),
    };
    let text = serde_json::to_string_pretty(&report)?;
    match a.output {
        Some(path) => write_atomic(&path, text.as_bytes()),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
