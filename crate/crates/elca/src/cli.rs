//! Command-line front-end: reproducible fitting, selection, simulation,
//! and size-distribution export.
//!
//! Every command resolves its flags (defaults included), does its work,
//! and writes a `manifest.json` next to its outputs recording the
//! command, inputs, resolved flags, seed, artifact version, and wall
//! time. `replay --manifest <path>` re-executes the recorded command
//! from those resolved flags; because every computation is seeded and
//! every reduction has a fixed order, the regenerated outputs are
//! byte-identical to the originals regardless of `--threads`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::em::{self, FitDocument};
use crate::hypergraph::{
    parse_bipartite_edges, parse_dense_csv, parse_hyperedge_list, write_hyperedge_list,
    IncidenceMatrix,
};
use crate::model::{ElcaParams, LcaParams, ParamsDocument};
use crate::selection::{greedy_search, CvConfig};
use crate::sizedist::{moments, size_pmf_elca, size_pmf_lca, Pmf};
use crate::{Error, Result};

/// Extended latent class analysis for hypergraphs.
#[derive(Debug, Parser)]
#[command(name = "elca", version, about = "Cluster hyperedges with extended latent class analysis")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit the model to a hypergraph and export parameters, assignments,
    /// and per-edge cluster probabilities.
    Fit(FitArgs),
    /// Search over cluster counts by cross-validated likelihood.
    Select(SelectArgs),
    /// Draw a hypergraph from the generative model.
    Simulate(SimulateArgs),
    /// Export observed and model hyperedge-size distributions.
    Sizedist(SizedistArgs),
    /// Re-execute a recorded run from its manifest.
    Replay(ReplayArgs),
}

/// Input file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// One hyperedge per line as whitespace-separated vertex labels.
    Edges,
    /// One `vertex edge` incidence pair per line.
    Bipartite,
    /// Dense 0/1 incidence matrix, optionally labeled.
    Csv,
}

impl Format {
    fn as_str(self) -> &'static str {
        match self {
            Format::Edges => "edges",
            Format::Bipartite => "bipartite",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Args)]
struct FitArgs {
    /// Hypergraph file to fit.
    #[arg(long)]
    input: PathBuf,
    /// How to parse the input file.
    #[arg(long, value_enum)]
    format: Format,
    /// Number of clusters G.
    #[arg(long)]
    clusters: usize,
    /// Number of additional clusters K (1 = plain latent class analysis).
    #[arg(long)]
    extra: usize,
    /// Convergence tolerance on the log-likelihood change.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Iteration cap per restart.
    #[arg(long, default_value_t = 2000)]
    max_iter: usize,
    /// Number of random restarts.
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    /// Seed for the random restarts.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Include full responsibilities in fit.json.
    #[arg(long)]
    resp: bool,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Cap on worker threads (0 = all cores). Outputs do not depend on it.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Debug, Args)]
struct SelectArgs {
    /// Hypergraph file to select a model for.
    #[arg(long)]
    input: PathBuf,
    /// How to parse the input file.
    #[arg(long, value_enum)]
    format: Format,
    /// Number of cross-validation replicates.
    #[arg(long = "ncv", default_value_t = 20)]
    ncv: usize,
    /// Probability that an edge lands in the training split.
    #[arg(long, default_value_t = 0.7)]
    q: f64,
    /// Convergence tolerance on the log-likelihood change.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Iteration cap per restart.
    #[arg(long, default_value_t = 2000)]
    max_iter: usize,
    /// Number of random restarts per fit.
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    /// Master seed for splits and restarts.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Cap on worker threads (0 = all cores). Outputs do not depend on it.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Parameter document to simulate from (alternative to
    /// --vertices/--clusters/--extra, which draw random parameters).
    #[arg(long, conflicts_with_all = ["vertices", "clusters", "extra"])]
    params: Option<PathBuf>,
    /// Number of vertices for randomly drawn parameters.
    #[arg(long, requires = "clusters", requires = "extra")]
    vertices: Option<usize>,
    /// Number of clusters for randomly drawn parameters.
    #[arg(long, requires = "vertices")]
    clusters: Option<usize>,
    /// Number of additional clusters for randomly drawn parameters.
    #[arg(long, requires = "vertices")]
    extra: Option<usize>,
    /// Number of hyperedges to draw.
    #[arg(long)]
    edges: usize,
    /// Seed: drives the parameter draw (when random) and the edge draw.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SizedistArgs {
    /// Hypergraph file for the observed size histogram.
    #[arg(long)]
    input: PathBuf,
    /// How to parse the input file.
    #[arg(long, value_enum)]
    format: Format,
    /// Fitted model parameters; adds the model pmf column and moments.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Fitted plain-LCA parameters (a params document with K = 1). When
    /// absent but --params is given, the LCA comparison marginalizes the
    /// fitted model instead.
    #[arg(long)]
    lca_params: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ReplayArgs {
    /// Manifest of the run to re-execute.
    #[arg(long)]
    manifest: PathBuf,
    /// Output directory override (defaults to the recorded one).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Thread-cap override for the replayed run.
    #[arg(long)]
    threads: Option<usize>,
}

/// Record of one command execution: what ran, on what, with which
/// resolved flags, and what it wrote.
///
/// Re-running the recorded command with the recorded flags reproduces
/// every listed output byte-for-byte; only this manifest's wall-clock
/// duration differs between a run and its replay.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    /// Subcommand name.
    pub command: String,
    /// Input files consumed.
    pub inputs: Vec<String>,
    /// Every flag with its resolved value (defaults filled in).
    pub flags: BTreeMap<String, String>,
    /// The seed the run used.
    pub seed: u64,
    /// Version of this tool.
    pub artifact_version: String,
    /// Wall-clock duration of the run in seconds.
    pub duration_seconds: f64,
    /// Files written, relative to the output directory, manifest aside.
    pub outputs: Vec<String>,
}

impl RunManifest {
    fn new(command: &str, inputs: Vec<String>, flags: BTreeMap<String, String>, seed: u64) -> Self {
        Self {
            command: command.into(),
            inputs,
            flags,
            seed,
            artifact_version: env!("CARGO_PKG_VERSION").into(),
            duration_seconds: 0.0,
            outputs: Vec::new(),
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    /// Parses a manifest written by [`RunManifest::to_json`].
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Parses a hypergraph file in the given format.
pub fn read_input(path: &Path, format: Format) -> Result<IncidenceMatrix> {
    let text = fs::read_to_string(path)?;
    match format {
        Format::Edges => parse_hyperedge_list(&text),
        Format::Bipartite => parse_bipartite_edges(&text),
        Format::Csv => parse_dense_csv(&text),
    }
}

/// Collects written files so the manifest can list them and exit status
/// can reflect "all outputs written".
struct OutputDir {
    dir: PathBuf,
    written: Vec<String>,
}

impl OutputDir {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, content: &str) -> Result<()> {
        fs::write(self.dir.join(name), content)?;
        self.written.push(name.to_string());
        Ok(())
    }

    fn finish(mut self, mut manifest: RunManifest, started: Instant) -> Result<()> {
        manifest.outputs = std::mem::take(&mut self.written);
        manifest.duration_seconds = started.elapsed().as_secs_f64();
        fs::write(self.dir.join("manifest.json"), manifest.to_json())?;
        Ok(())
    }
}

fn run_in_pool<F>(threads: usize, f: F) -> Result<()>
where
    F: FnOnce() -> Result<()> + Send,
{
    if threads == 0 {
        f()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Numerical(format!("could not build thread pool: {e}")))?;
        pool.install(f)
    }
}

fn display_path(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

fn cmd_fit(args: &FitArgs) -> Result<()> {
    let started = Instant::now();
    let matrix = read_input(&args.input, args.format)?;
    let mut flags = BTreeMap::new();
    flags.insert("input".into(), display_path(&args.input));
    flags.insert("format".into(), args.format.as_str().into());
    flags.insert("clusters".into(), args.clusters.to_string());
    flags.insert("extra".into(), args.extra.to_string());
    flags.insert("tol".into(), args.tol.to_string());
    flags.insert("max-iter".into(), args.max_iter.to_string());
    flags.insert("restarts".into(), args.restarts.to_string());
    flags.insert("seed".into(), args.seed.to_string());
    flags.insert("resp".into(), args.resp.to_string());
    flags.insert("out".into(), display_path(&args.out));
    flags.insert("threads".into(), args.threads.to_string());
    let manifest = RunManifest::new(
        "fit",
        vec![display_path(&args.input)],
        flags,
        args.seed,
    );

    run_in_pool(args.threads, || {
        let fit = em::fit_restarts(
            &matrix,
            args.clusters,
            args.extra,
            args.tol,
            args.max_iter,
            args.restarts,
            args.seed,
        )?;
        let mut out = OutputDir::new(&args.out)?;
        let params_doc = ParamsDocument::new(&fit.params, matrix.vertex_labels())?;
        out.write("params.json", &params_doc.to_json()?)?;
        out.write(
            "fit.json",
            &FitDocument::new(&fit, matrix.vertex_labels(), args.resp).to_json(),
        )?;

        let mut trace = String::from("iteration,loglik\n");
        for (it, ll) in fit.loglik_trace.iter().enumerate() {
            trace.push_str(&format!("{it},{ll}\n"));
        }
        out.write("loglik_trace.csv", &trace)?;

        let (z1, z2) = fit.resp.hard_labels();
        let mut assignments = String::from("edge,z1,z2\n");
        for (j, label) in matrix.edge_labels().iter().enumerate() {
            assignments.push_str(&format!("{label},{},{}\n", z1[j], z2[j]));
        }
        out.write("assignments.csv", &assignments)?;

        let mut probs = String::from("edge");
        for g in 1..=args.clusters {
            probs.push_str(&format!(",g{g}"));
        }
        for k in 1..=args.extra {
            probs.push_str(&format!(",k{k}"));
        }
        probs.push('\n');
        for (j, label) in matrix.edge_labels().iter().enumerate() {
            probs.push_str(label);
            for v in fit.resp.cluster_marginals(j) {
                probs.push_str(&format!(",{v}"));
            }
            for v in fit.resp.extra_marginals(j) {
                probs.push_str(&format!(",{v}"));
            }
            probs.push('\n');
        }
        out.write("cluster_probs.csv", &probs)?;
        out.finish(manifest, started)
    })
}

fn cmd_select(args: &SelectArgs) -> Result<()> {
    let started = Instant::now();
    let matrix = read_input(&args.input, args.format)?;
    let cfg = CvConfig {
        n_cv: args.ncv,
        q: args.q,
        tol: args.tol,
        max_iter: args.max_iter,
        n_restarts: args.restarts,
        seed: args.seed,
    };
    let mut flags = BTreeMap::new();
    flags.insert("input".into(), display_path(&args.input));
    flags.insert("format".into(), args.format.as_str().into());
    flags.insert("ncv".into(), args.ncv.to_string());
    flags.insert("q".into(), args.q.to_string());
    flags.insert("tol".into(), args.tol.to_string());
    flags.insert("max-iter".into(), args.max_iter.to_string());
    flags.insert("restarts".into(), args.restarts.to_string());
    flags.insert("seed".into(), args.seed.to_string());
    flags.insert("out".into(), display_path(&args.out));
    flags.insert("threads".into(), args.threads.to_string());
    let manifest = RunManifest::new(
        "select",
        vec![display_path(&args.input)],
        flags,
        args.seed,
    );

    run_in_pool(args.threads, || {
        let selection = greedy_search(&matrix, &cfg)?;
        let mut out = OutputDir::new(&args.out)?;
        out.write("cv_table.csv", &selection.to_csv())?;
        let mut summary = serde_json::to_string_pretty(&selection)?;
        summary.push('\n');
        out.write("selection.json", &summary)?;
        out.finish(manifest, started)
    })
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let started = Instant::now();
    if args.edges == 0 {
        return Err(Error::InvalidFlag(
            "edges must be at least 1; an empty hypergraph is not representable".into(),
        ));
    }
    let mut flags = BTreeMap::new();
    let mut inputs = Vec::new();
    let params = match &args.params {
        Some(path) => {
            let doc = ParamsDocument::from_json(&fs::read_to_string(path)?)?;
            flags.insert("params".into(), display_path(path));
            inputs.push(display_path(path));
            doc.params()?
        }
        None => {
            let (n, g, k) = match (args.vertices, args.clusters, args.extra) {
                (Some(n), Some(g), Some(k)) => (n, g, k),
                _ => {
                    return Err(Error::InvalidFlag(
                        "provide either --params or all of --vertices, --clusters, --extra".into(),
                    ))
                }
            };
            if n == 0 || g == 0 || k == 0 {
                return Err(Error::InvalidFlag(
                    "vertices and cluster counts must be at least 1".into(),
                ));
            }
            flags.insert("vertices".into(), n.to_string());
            flags.insert("clusters".into(), g.to_string());
            flags.insert("extra".into(), k.to_string());
            ElcaParams::random_init(n, g, k, args.seed)
        }
    };
    flags.insert("edges".into(), args.edges.to_string());
    flags.insert("seed".into(), args.seed.to_string());
    flags.insert("out".into(), display_path(&args.out));
    let manifest = RunManifest::new("simulate", inputs, flags, args.seed);

    // The edge draw gets its own stream so that the same seed drives both
    // the (optional) parameter draw and the sampling without reuse.
    let sample = params.sample(args.edges, args.seed.wrapping_add(0x9e37_79b9_7f4a_7c15))?;
    let mut out = OutputDir::new(&args.out)?;
    out.write("hypergraph.edges", &write_hyperedge_list(&sample.matrix))?;
    let mut labels = String::from("edge,z1,z2\n");
    for (j, label) in sample.matrix.edge_labels().iter().enumerate() {
        labels.push_str(&format!("{label},{},{}\n", sample.z1[j], sample.z2[j]));
    }
    out.write("labels.csv", &labels)?;
    let doc = ParamsDocument::new(&params, sample.matrix.vertex_labels())?;
    out.write("params.json", &doc.to_json()?)?;
    out.finish(manifest, started)
}

fn load_lca_document(path: &Path) -> Result<LcaParams> {
    let doc = ParamsDocument::from_json(&fs::read_to_string(path)?)?;
    let params = doc.params()?;
    if params.n_extra() != 1 {
        return Err(Error::InvalidParams(format!(
            "--lca-params expects a single additional cluster (K = 1), got K = {}",
            params.n_extra()
        )));
    }
    Ok(params.implied_lca())
}

fn cmd_sizedist(args: &SizedistArgs) -> Result<()> {
    let started = Instant::now();
    let matrix = read_input(&args.input, args.format)?;
    let mut flags = BTreeMap::new();
    let mut inputs = vec![display_path(&args.input)];
    flags.insert("input".into(), display_path(&args.input));
    flags.insert("format".into(), args.format.as_str().into());
    let elca = match &args.params {
        Some(path) => {
            flags.insert("params".into(), display_path(path));
            inputs.push(display_path(path));
            Some(ParamsDocument::from_json(&fs::read_to_string(path)?)?.params()?)
        }
        None => None,
    };
    let lca = match &args.lca_params {
        Some(path) => {
            flags.insert("lca-params".into(), display_path(path));
            inputs.push(display_path(path));
            Some(load_lca_document(path)?)
        }
        None => None,
    };
    flags.insert("out".into(), display_path(&args.out));
    let manifest = RunManifest::new("sizedist", inputs, flags, 0);

    let hist = matrix.size_histogram();
    let empirical = Pmf::from_histogram(&hist, matrix.n_vertices())?;
    let elca_pmf = elca.as_ref().map(size_pmf_elca).transpose()?;
    let lca_for_comparison = lca.or_else(|| elca.as_ref().map(|p| p.implied_lca()));
    let lca_pmf = lca_for_comparison.as_ref().map(size_pmf_lca).transpose()?;

    let mut out = OutputDir::new(&args.out)?;
    out.write("size_histogram.csv", &hist.to_csv())?;

    let mut columns: Vec<(&str, &Pmf)> = vec![("empirical", &empirical)];
    if let Some(p) = &elca_pmf {
        columns.push(("elca", p));
    }
    if let Some(p) = &lca_pmf {
        columns.push(("lca", p));
    }
    let rows = columns.iter().map(|(_, p)| p.max_size()).max().unwrap_or(0) + 1;
    let mut pmfs = String::from("size");
    for (name, _) in &columns {
        pmfs.push_str(&format!(",{name}"));
    }
    pmfs.push('\n');
    for s in 0..rows {
        pmfs.push_str(&s.to_string());
        for (_, pmf) in &columns {
            let v = pmf.probs().get(s).copied().unwrap_or(0.0);
            pmfs.push_str(&format!(",{v}"));
        }
        pmfs.push('\n');
    }
    out.write("size_pmfs.csv", &pmfs)?;

    if let (Some(elca), Some(lca)) = (&elca, &lca_for_comparison) {
        match moments(lca, elca) {
            Ok(report) => {
                let mut text = serde_json::to_string_pretty(&report)?;
                text.push('\n');
                out.write("moments.json", &text)?;
            }
            Err(Error::ConditionViolated(msg)) => {
                eprintln!("warning: moment comparison skipped: {msg}");
            }
            Err(e) => return Err(e),
        }
    }
    out.finish(manifest, started)
}

fn cmd_replay(args: &ReplayArgs) -> Result<()> {
    let manifest = RunManifest::from_json(&fs::read_to_string(&args.manifest)?)?;
    let mut argv: Vec<String> = vec!["elca".into(), manifest.command.clone()];
    for (key, value) in &manifest.flags {
        match key.as_str() {
            "out" | "threads" => {}
            "resp" => {
                if value == "true" {
                    argv.push("--resp".into());
                }
            }
            _ => {
                argv.push(format!("--{key}"));
                argv.push(value.clone());
            }
        }
    }
    let out = match &args.out {
        Some(dir) => display_path(dir),
        None => manifest
            .flags
            .get("out")
            .cloned()
            .ok_or_else(|| Error::InvalidFlag("manifest records no output directory".into()))?,
    };
    argv.push("--out".into());
    argv.push(out);
    let threads = args
        .threads
        .map(|t| t.to_string())
        .or_else(|| manifest.flags.get("threads").cloned());
    if let Some(t) = threads {
        // simulate and sizedist run sequentially and take no thread cap.
        if matches!(manifest.command.as_str(), "fit" | "select") {
            argv.push("--threads".into());
            argv.push(t);
        }
    }
    run(argv)
}

/// Parses an argument vector (including the program name) and executes
/// the selected command. This is the whole CLI behind a callable seam;
/// the binary's `main` delegates here.
pub fn run<I, T>(argv: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::InvalidFlag(e.to_string()))?;
    match &cli.command {
        Command::Fit(args) => cmd_fit(args),
        Command::Select(args) => cmd_select(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Sizedist(args) => cmd_sizedist(args),
        Command::Replay(args) => cmd_replay(args),
    }
}

/// Entry point for the binary: runs the CLI and converts the outcome to
/// an exit code, printing a one-line diagnostic on failure.
pub fn main_entry() -> i32 {
    // Let clap handle --help/--version printing and exit codes itself.
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Fit(args) => cmd_fit(args),
        Command::Select(args) => cmd_select(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Sizedist(args) => cmd_sizedist(args),
        Command::Replay(args) => cmd_replay(args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
