//! Command-line front end: `embed`, `eval-distance`, `eval-cluster` and
//! `benchmark`. Every file is written to a temporary sibling and renamed
//! into place, so a failed run leaves no partial outputs.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::embedding::Embedding;
use crate::error::{invalid, Result};
use crate::evaluation::{distortion_report, kmeans, modularity, ClusterMetrics, DistortionMetrics};
use crate::graph::Graph;
use crate::pipeline::{embed, EmbedParams};
use crate::sampler::{generate_corpus, generate_walk_corpus, Corpus, CorpusConfig};
use crate::trainer::default_workers;

#[derive(Debug, Parser)]
#[command(name = "diffusion-embed", version, about = "Diffusion-tree node embeddings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Embed a graph and write the embedding CSV.
    Embed(EmbedArgs),
    /// Shortest-path distortion of an embedding.
    EvalDistance(EvalDistanceArgs),
    /// k-means clustering of an embedding, scored by modularity.
    EvalCluster(EvalClusterArgs),
    /// Time diffusion and random-walk sequence generation.
    Benchmark(BenchmarkArgs),
}

#[derive(Debug, Clone, Args)]
pub struct EmbedArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long = "dim", default_value_t = 128)]
    pub dim: usize,
    #[arg(long, default_value_t = 3)]
    pub window: usize,
    #[arg(long, default_value_t = 40)]
    pub diffusion_size: usize,
    #[arg(long, default_value_t = 10)]
    pub diffusion_count: usize,
    #[arg(long, default_value_t = 5)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.025)]
    pub alpha0: f64,
    /// Defaults to the available parallelism.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Manifest path; defaults to `<output>.manifest.json`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Also dump the sequence corpus, one labelled sequence per line.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Also dump dense hitting frequency vectors as CSV.
    #[arg(long)]
    pub features: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalDistanceArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub embedding: PathBuf,
    /// Metrics JSON; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub num_sources: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Per-pair errors as CSV.
    #[arg(long)]
    pub errors: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalClusterArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub embedding: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 300)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Per-vertex cluster ids as CSV.
    #[arg(long)]
    pub clusters: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchmarkArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 40)]
    pub diffusion_size: usize,
    #[arg(long, default_value_t = 10)]
    pub diffusion_count: usize,
    /// Defaults to the Euler walk length of a full tree, `2l - 1`.
    #[arg(long)]
    pub walk_length: Option<usize>,
    /// Defaults to the diffusion count.
    #[arg(long)]
    pub walks_per_node: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

/// Resolved parameters and per-stage timings of one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub parameters: BTreeMap<&'static str, Value>,
    pub timings: BTreeMap<&'static str, f64>,
}

impl RunManifest {
    fn new(command: &'static str) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            parameters: BTreeMap::new(),
            timings: BTreeMap::new(),
        }
    }

    fn param(&mut self, key: &'static str, value: impl Serialize) -> &mut Self {
        self.parameters.insert(key, json!(value));
        self
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Embed(args) => run_embed(&args).map(drop),
        Command::EvalDistance(args) => run_eval_distance(&args).map(drop),
        Command::EvalCluster(args) => run_eval_cluster(&args).map(drop),
        Command::Benchmark(args) => run_benchmark(&args).map(drop),
    }
}

/// Writes `bytes` to a temporary file beside `path`, then renames it.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn sibling_manifest(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn manifest_path(explicit: &Option<PathBuf>, output: Option<&PathBuf>) -> Option<PathBuf> {
    explicit.clone().or_else(|| output.map(|p| sibling_manifest(p)))
}

fn load_graph(path: &Path, manifest: &mut RunManifest) -> Result<Graph> {
    let t = Instant::now();
    let g = Graph::from_edge_list(&fs::read_to_string(path)?)?;
    manifest.timings.insert("load", t.elapsed().as_secs_f64());
    Ok(g)
}

fn emit_json(value: &impl Serialize, output: Option<&PathBuf>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match output {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn write_manifest(manifest: &RunManifest, path: Option<PathBuf>) -> Result<()> {
    if let Some(path) = path {
        let mut text = serde_json::to_string_pretty(manifest)?;
        text.push('\n');
        write_atomic(&path, text.as_bytes())?;
    }
    Ok(())
}

fn resolve_workers(workers: Option<usize>) -> Result<usize> {
    match workers {
        Some(0) => Err(invalid("workers must be at least 1")),
        Some(w) => Ok(w),
        None => Ok(default_workers()),
    }
}

pub fn run_embed(args: &EmbedArgs) -> Result<RunManifest> {
    let params = EmbedParams {
        dim: args.dim,
        window: args.window,
        diffusion_size: args.diffusion_size,
        diffusion_count: args.diffusion_count,
        epochs: args.epochs,
        alpha0: args.alpha0,
        workers: resolve_workers(args.workers)?,
        seed: args.seed,
    };
    let mut manifest = RunManifest::new("embed");
    manifest
        .param("input", &args.input)
        .param("output", &args.output)
        .param("dim", params.dim)
        .param("window", params.window)
        .param("diffusion_size", params.diffusion_size)
        .param("diffusion_count", params.diffusion_count)
        .param("epochs", params.epochs)
        .param("alpha0", params.alpha0)
        .param("alpha_min", params.train_config().alpha_min)
        .param("workers", params.workers)
        .param("seed", params.seed);

    let g = load_graph(&args.input, &mut manifest)?;
    let out = embed(&g, &params)?;
    manifest.timings.insert("sample", out.timings.sample);
    manifest.timings.insert("extract", out.timings.extract);
    manifest.timings.insert("train", out.timings.train);

    let mut csv = Vec::new();
    out.embedding().write_csv(&g, &mut csv)?;
    if let Some(path) = &args.corpus {
        let mut dump = Vec::new();
        out.corpus.write_labelled(&g, &mut dump)?;
        write_atomic(path, &dump)?;
    }
    if let Some(path) = &args.features {
        let mut dump = Vec::new();
        out.counts.write_dense_csv(&g, &mut dump)?;
        write_atomic(path, &dump)?;
    }
    write_atomic(&args.output, &csv)?;
    write_manifest(&manifest, manifest_path(&args.manifest, Some(&args.output)))?;
    Ok(manifest)
}

fn load_embedding(g: &Graph, path: &Path) -> Result<Embedding> {
    Embedding::read_csv(g, &fs::read_to_string(path)?)
}

pub fn run_eval_distance(args: &EvalDistanceArgs) -> Result<DistortionMetrics> {
    let mut manifest = RunManifest::new("eval-distance");
    manifest
        .param("input", &args.input)
        .param("embedding", &args.embedding)
        .param("num_sources", args.num_sources)
        .param("seed", args.seed);
    let g = load_graph(&args.input, &mut manifest)?;
    let embedding = load_embedding(&g, &args.embedding)?;

    let t = Instant::now();
    let report = distortion_report(&g, &embedding, args.num_sources, args.seed)?;
    manifest.timings.insert("evaluate", t.elapsed().as_secs_f64());

    if let Some(path) = &args.errors {
        let mut csv = String::from("u,v,graph_distance,embedding_distance,error\n");
        for e in &report.errors {
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                g.label(e.u),
                g.label(e.v),
                e.graph_distance,
                e.embedding_distance,
                e.error
            ));
        }
        write_atomic(path, csv.as_bytes())?;
    }
    let metrics = report.metrics();
    emit_json(&metrics, args.output.as_ref())?;
    write_manifest(&manifest, manifest_path(&args.manifest, args.output.as_ref()))?;
    Ok(metrics)
}

pub fn run_eval_cluster(args: &EvalClusterArgs) -> Result<ClusterMetrics> {
    let mut manifest = RunManifest::new("eval-cluster");
    manifest
        .param("input", &args.input)
        .param("embedding", &args.embedding)
        .param("k", args.k)
        .param("max_iters", args.max_iters)
        .param("restarts", args.restarts)
        .param("seed", args.seed);
    let g = load_graph(&args.input, &mut manifest)?;
    let embedding = load_embedding(&g, &args.embedding)?;
    if args.k > g.vertex_count() {
        return Err(invalid(format!(
            "k = {} exceeds vertex count {}",
            args.k,
            g.vertex_count()
        )));
    }

    let t = Instant::now();
    let result = kmeans(&embedding, args.k, args.max_iters, args.restarts, args.seed)?;
    let q = modularity(&g, &result.clusters)?;
    manifest.timings.insert("evaluate", t.elapsed().as_secs_f64());

    if let Some(path) = &args.clusters {
        let mut csv = String::from("id,cluster\n");
        for (v, c) in result.clusters.assignment.iter().enumerate() {
            csv.push_str(&format!("{},{c}\n", g.label(v)));
        }
        write_atomic(path, csv.as_bytes())?;
    }
    let metrics = ClusterMetrics {
        k: args.k,
        modularity: q,
        wcss: result.wcss,
        cluster_sizes: result.clusters.cluster_sizes(),
    };
    emit_json(&metrics, args.output.as_ref())?;
    write_manifest(&manifest, manifest_path(&args.manifest, args.output.as_ref()))?;
    Ok(metrics)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkParams {
    pub diffusion_size: usize,
    pub diffusion_count: usize,
    pub walk_length: usize,
    pub walks_per_node: usize,
    pub repeats: usize,
    pub workers: usize,
    pub seed: u64,
}

impl BenchmarkParams {
    /// Walk settings matched to the diffusion output volume.
    pub fn matched(diffusion_size: usize, diffusion_count: usize) -> Self {
        BenchmarkParams {
            diffusion_size,
            diffusion_count,
            walk_length: 2 * diffusion_size.max(1) - 1,
            walks_per_node: diffusion_count,
            repeats: 3,
            workers: default_workers(),
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorTiming {
    /// Mean seconds spent building the structures the generator walks on.
    pub preprocessing_seconds: f64,
    pub preprocessing_median_seconds: f64,
    /// Mean seconds spent emitting sequences.
    pub generation_seconds: f64,
    pub generation_median_seconds: f64,
    pub sequences: usize,
    pub vertices_emitted: usize,
    pub adjacency_observations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkReport {
    pub vertices: usize,
    pub edges: usize,
    pub repeats: usize,
    pub diffusion: GeneratorTiming,
    pub random_walk: GeneratorTiming,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn median(xs: &[f64]) -> f64 {
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    let mid = s.len() / 2;
    if s.len() % 2 == 1 {
        s[mid]
    } else {
        0.5 * (s[mid - 1] + s[mid])
    }
}

/// Times graph construction and corpus generation for both generators.
/// Neither generator precomputes anything beyond the adjacency structure,
/// so preprocessing is the graph build in both cases.
pub fn benchmark_generators(edge_list: &str, params: &BenchmarkParams) -> Result<BenchmarkReport> {
    if params.repeats == 0 {
        return Err(invalid("repeats must be at least 1"));
    }
    let mut load = Vec::new();
    let mut diffusion = Vec::new();
    let mut walks = Vec::new();
    let mut last: Option<(Graph, Corpus, Corpus)> = None;

    let cfg_of = |seed| CorpusConfig {
        diffusion_size: params.diffusion_size,
        diffusion_count: params.diffusion_count,
        seed,
        workers: params.workers,
    };
    for rep in 0..params.repeats {
        let seed = params.seed.wrapping_add(rep as u64);
        let t = Instant::now();
        let g = Graph::from_edge_list(edge_list)?;
        load.push(t.elapsed().as_secs_f64());

        let t = Instant::now();
        let dc = generate_corpus(&g, &cfg_of(seed))?;
        diffusion.push(t.elapsed().as_secs_f64());

        let t = Instant::now();
        let wc = generate_walk_corpus(&g, params.walk_length, params.walks_per_node, seed, params.workers)?;
        walks.push(t.elapsed().as_secs_f64());
        last = Some((g, dc, wc));
    }

    let (g, dc, wc) = last.unwrap();
    let timing = |gen: &[f64], corpus: &Corpus| GeneratorTiming {
        preprocessing_seconds: mean(&load),
        preprocessing_median_seconds: median(&load),
        generation_seconds: mean(gen),
        generation_median_seconds: median(gen),
        sequences: corpus.sequences.len(),
        vertices_emitted: corpus.total_len(),
        adjacency_observations: corpus.adjacency_observations(),
    };
    Ok(BenchmarkReport {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        repeats: params.repeats,
        diffusion: timing(&diffusion, &dc),
        random_walk: timing(&walks, &wc),
    })
}

pub fn run_benchmark(args: &BenchmarkArgs) -> Result<BenchmarkReport> {
    let mut params = BenchmarkParams::matched(args.diffusion_size, args.diffusion_count);
    params.walk_length = args.walk_length.unwrap_or(params.walk_length);
    params.walks_per_node = args.walks_per_node.unwrap_or(params.walks_per_node);
    params.repeats = args.repeats;
    params.workers = resolve_workers(args.workers)?;
    params.seed = args.seed;

    let mut manifest = RunManifest::new("benchmark");
    manifest
        .param("input", &args.input)
        .param("diffusion_size", params.diffusion_size)
        .param("diffusion_count", params.diffusion_count)
        .param("walk_length", params.walk_length)
        .param("walks_per_node", params.walks_per_node)
        .param("repeats", params.repeats)
        .param("workers", params.workers)
        .param("seed", params.seed);

    let text = fs::read_to_string(&args.input)?;
    let report = benchmark_generators(&text, &params)?;
    manifest.timings.insert("load", report.diffusion.preprocessing_seconds);
    manifest.timings.insert("sample", report.diffusion.generation_seconds);
    manifest.timings.insert("baseline_sample", report.random_walk.generation_seconds);
    emit_json(&report, args.output.as_ref())?;
    write_manifest(&manifest, manifest_path(&args.manifest, args.output.as_ref()))?;
    Ok(report)
}
