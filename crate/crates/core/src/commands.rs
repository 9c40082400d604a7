//! Command-line front end. Every subcommand reads plain-text inputs, runs one
//! library stage and writes its outputs under `--out-dir`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bench::{self, emit_heatmaps, emit_report, paper_context, Arm, ReportFormat, Scenario};
use crate::collection::{estimate_density, GraphCollection};
use crate::distance::{distance_matrix, DistanceMatrix, DistanceOptions, LayerSplit};
use crate::embedding::{embed_1d, EmbedOptions};
use crate::error::{Error, Result};
use crate::io;
use crate::model::{sample, MultiGraphonSpec, SampleParams, SamplingMode};
use crate::netstats::{resample_stats, ConstantPredictor, EdgeProbability, ResampleOptions};
use crate::smoother::{
    bootstrap_ci, fit_multigraphon, fit_per_edge, fit_per_network, fit_replicated, select_regime, BootstrapOptions,
    FitResult, Regime, SmootherConfig,
};

#[derive(Debug, Parser)]
#[command(name = "multigraphon", version, about = "Multi-graphon estimation from collections of networks")]
pub struct Cli {
    /// Master random seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
    /// Flat key=value file supplying defaults for unset options.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a graph collection from a built-in or gridded kernel.
    Simulate(SimulateArgs),
    /// Estimate pairwise node distances from an edge list.
    Distance(DistanceArgs),
    /// Embed nodes on a line from a distance matrix or an edge list.
    Embed(EmbedArgs),
    /// Fit edge probabilities for every node pair and layer.
    Fit(FitArgs),
    /// Run a simulation scenario and report MSE per estimator arm.
    Bench(BenchArgs),
    /// Resample networks from a fit and summarize small-world statistics.
    Resample(ResampleArgs),
    /// Subsampling-bootstrap bands for one node pair.
    Ci(CiArgs),
}

#[derive(Debug, Args, Default)]
pub struct ModelArgs {
    /// f1, f2, f3 or grid.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Grid value file for kind=grid.
    #[arg(long)]
    pub grid: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Sparsity; defaults to 1 / sup f.
    #[arg(long)]
    pub rho: Option<f64>,
    /// replicated, dynamic or cross_section.
    #[arg(long)]
    pub mode: Option<String>,
    /// Covariate noise standard deviation.
    #[arg(long)]
    pub sigma: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct DataArgs {
    /// Edge list with rows `layer i j [weight]`, 1-indexed.
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// Number of nodes when isolated nodes exist.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Number of layers when empty layers exist.
    #[arg(long)]
    pub layers: Option<usize>,
}

#[derive(Debug, Args, Default)]
pub struct SmootherArgs {
    /// nadaraya_watson or local_linear.
    #[arg(long)]
    pub method: Option<String>,
    /// uniform, epanechnikov or gaussian.
    #[arg(long)]
    pub kernel: Option<String>,
    /// Node bandwidth or `auto`.
    #[arg(long = "bw-x")]
    pub bw_x: Option<String>,
    /// Network bandwidth or `auto`.
    #[arg(long = "bw-z")]
    pub bw_z: Option<String>,
    /// identity or logit.
    #[arg(long)]
    pub link: Option<String>,
    /// Pick a bandwidth multiplier by 5-fold cross-validation over layers.
    #[arg(long)]
    pub cv: bool,
}

#[derive(Debug, Args, Default)]
pub struct EmbedFlags {
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Seed of the embedding restarts (defaults to --seed).
    #[arg(long = "embed-seed")]
    pub embed_seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Half path length.
    #[arg(long)]
    pub e: Option<u32>,
    /// Split layers at random with this seed instead of first half / rest.
    #[arg(long)]
    pub split_seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// Distance matrix file; otherwise distances are estimated from --edges.
    #[arg(long)]
    pub distance: Option<PathBuf>,
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub embed: EmbedFlags,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Per-layer network positions `layer value`; omit for a replicated fit.
    #[arg(long)]
    pub covariates: Option<PathBuf>,
    /// Node positions `node position`; estimated when omitted.
    #[arg(long)]
    pub positions: Option<PathBuf>,
    /// auto, standard, per_edge or per_network.
    #[arg(long)]
    pub regime: Option<String>,
    #[command(flatten)]
    pub smoother: SmootherArgs,
    #[command(flatten)]
    pub embed: EmbedFlags,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Comma-separated arms.
    #[arg(long)]
    pub arms: Option<String>,
    #[arg(long)]
    pub reps: Option<usize>,
    /// Append published SBA/SAS scores, labeled source=paper.
    #[arg(long)]
    pub with_paper_context: bool,
    /// table or kv.
    #[arg(long)]
    pub format: Option<String>,
    /// Write grayscale heatmaps of the first replication's estimates.
    #[arg(long)]
    pub heatmaps: bool,
    /// Include per-replication runtimes (reports then differ run to run).
    #[arg(long)]
    pub runtime: bool,
    #[command(flatten)]
    pub smoother: SmootherArgs,
    #[command(flatten)]
    pub embed: EmbedFlags,
}

#[derive(Debug, Args)]
pub struct ResampleArgs {
    /// Resample an Erdős–Rényi graph with this edge probability instead of a fit.
    #[arg(long)]
    pub constant: Option<f64>,
    #[command(flatten)]
    pub fit: FitArgs,
    /// Comma-separated network positions.
    #[arg(long, default_value = "0.5")]
    pub z: String,
    #[arg(long)]
    pub draws: Option<usize>,
    #[arg(long)]
    pub level: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CiArgs {
    #[command(flatten)]
    pub fit: FitArgs,
    /// 1-indexed node pair, e.g. `3,7`.
    #[arg(long)]
    pub pair: String,
    /// Comma-separated network positions.
    #[arg(long, default_value = "0.1,0.3,0.5,0.7,0.9")]
    pub zgrid: String,
    /// Bootstrap replicates.
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub level: Option<f64>,
}

/// Option lookup: explicit flag first, then the config file.
struct Settings {
    config: BTreeMap<String, String>,
}

impl Settings {
    fn get<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.config.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|_| Error::InvalidInput(format!("config value {key}={v} is invalid"))),
        }
    }

    fn require<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<T> {
        self.get(flag, key)?
            .ok_or_else(|| Error::InvalidInput(format!("missing --{} (or {key}= in the config)", key.replace('_', "-"))))
    }

    fn path(&self, flag: &Option<PathBuf>, key: &str) -> Option<PathBuf> {
        flag.clone().or_else(|| self.config.get(key).map(PathBuf::from))
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|_| Error::InvalidInput(format!("bad {what} '{t}'"))))
        .collect()
}

fn write(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, text)?;
    Ok(path)
}

fn model_spec(st: &Settings, a: &ModelArgs) -> Result<MultiGraphonSpec> {
    let kind: String = st.require(a.kind.clone(), "kind")?;
    let beta: f64 = st.get(a.beta, "beta")?.unwrap_or(0.0);
    let spec = match kind.as_str() {
        "f1" => MultiGraphonSpec::f1(beta),
        "f2" => MultiGraphonSpec::f2(beta),
        "f3" => MultiGraphonSpec::f3(beta),
        "grid" => {
            let file = st
                .path(&a.grid, "file")
                .ok_or_else(|| Error::InvalidSpec("grid kind needs --grid".into()))?;
            MultiGraphonSpec::Grid(io::parse_grid_values(&fs::read_to_string(file)?)?)
        }
        other => return Err(Error::InvalidSpec(format!("unknown kind '{other}'"))),
    };
    spec.validate()?;
    Ok(spec)
}

fn load_graph(st: &Settings, d: &DataArgs) -> Result<GraphCollection> {
    let path = st
        .path(&d.edges, "edges")
        .ok_or_else(|| Error::InvalidInput("missing --edges".into()))?;
    io::read_edge_list(&path, st.get(d.nodes, "nodes")?, st.get(d.layers, "layers")?)
}

fn smoother_config(st: &Settings, a: &SmootherArgs) -> Result<SmootherConfig> {
    let mut c = SmootherConfig::default();
    if let Some(v) = st.get::<String>(a.method.clone(), "method")? {
        c.method = v.parse()?;
    }
    if let Some(v) = st.get::<String>(a.kernel.clone(), "kernel")? {
        c.kernel = v.parse()?;
    }
    if let Some(v) = st.get::<String>(a.bw_x.clone(), "bw_x")? {
        c.bandwidth_x = v.parse()?;
    }
    if let Some(v) = st.get::<String>(a.bw_z.clone(), "bw_z")? {
        c.bandwidth_z = v.parse()?;
    }
    if let Some(v) = st.get::<String>(a.link.clone(), "link")? {
        c.link = v.parse()?;
    }
    c.cross_validate = a.cv || st.get::<bool>(None, "cv")?.unwrap_or(false);
    Ok(c)
}

fn embed_options(st: &Settings, a: &EmbedFlags, seed: u64) -> Result<EmbedOptions> {
    let mut o = EmbedOptions::default();
    if let Some(r) = st.get(a.restarts, "restarts")? {
        if r == 0 {
            return Err(Error::InvalidInput("--restarts must be positive".into()));
        }
        o.restarts = r;
    }
    o.seed = st.get(a.embed_seed, "embed_seed")?.unwrap_or(seed);
    Ok(o)
}

fn estimate_positions(g: &GraphCollection, opts: &EmbedOptions) -> Result<Vec<f64>> {
    let d = distance_matrix(g, DistanceOptions::default())?;
    Ok(embed_1d(&d, opts)?.positions)
}

fn run_fit(st: &Settings, a: &FitArgs, seed: u64) -> Result<FitResult> {
    let g = load_graph(st, &a.data)?;
    let cfg = smoother_config(st, &a.smoother)?;
    let netpos = match st.path(&a.covariates, "covariates") {
        Some(p) => Some(io::read_covariates(&p, g.m())?),
        None => None,
    };
    let regime = match st.get::<String>(a.regime.clone(), "regime")?.as_deref() {
        None | Some("auto") => select_regime(g.n(), g.m(), estimate_density(&g)?),
        Some("standard") => Regime::Standard,
        Some("per_edge") => Regime::PerEdge,
        Some("per_network") => Regime::PerNetwork,
        Some(other) => return Err(Error::InvalidInput(format!("unknown regime '{other}'"))),
    };
    let positions = || -> Result<Vec<f64>> {
        match st.path(&a.positions, "positions") {
            Some(p) => io::parse_embedding(&fs::read_to_string(p)?),
            None => estimate_positions(&g, &embed_options(st, &a.embed, seed)?),
        }
    };
    match (regime, netpos) {
        (Regime::PerEdge, Some(z)) => fit_per_edge(&g, &z, &cfg),
        (Regime::PerNetwork, Some(z)) => fit_per_network(&g, &z, &cfg),
        (Regime::Standard, Some(z)) => fit_multigraphon(&g, &positions()?, &z, &cfg),
        (Regime::Standard, None) => fit_replicated(&g, &positions()?, &cfg),
        (r, None) => Err(Error::InvalidInput(format!("the {} regime needs --covariates", r.name()))),
    }
}

fn scenario(st: &Settings, a: &BenchArgs, seed: u64) -> Result<Scenario> {
    let spec = model_spec(st, &a.model)?;
    let mode: SamplingMode = st.get::<String>(a.model.mode.clone(), "mode")?.unwrap_or("replicated".into()).parse()?;
    let n = st.get(a.model.n, "n")?.unwrap_or(150);
    let m = st.get(a.model.m, "m")?.unwrap_or(150);
    let id = format!("{}_b{}_n{}_m{}_{}", spec.kind_name(), spec.beta(), n, m, mode.name());
    let mut s = Scenario::new(id, spec, n, m, mode);
    s.rho = st.get(a.model.rho, "rho")?;
    s.sigma_cov = st.get(a.model.sigma, "sigma")?.unwrap_or(if mode == SamplingMode::CrossSection { 0.28 } else { 0.0 });
    if let Some(arms) = st.get::<String>(a.arms.clone(), "arms")? {
        s.arms = parse_list::<Arm>(&arms, "arm")?;
    } else {
        s.arms = match mode {
            SamplingMode::Replicated => vec![Arm::Proposed, Arm::OracleRep, Arm::Usvt, Arm::Nbs],
            SamplingMode::Dynamic => vec![Arm::Proposed, Arm::Oracle1, Arm::Usvt, Arm::Nbs],
            SamplingMode::CrossSection => vec![Arm::Proposed, Arm::Oracle1, Arm::Oracle2, Arm::Usvt, Arm::Nbs],
        };
    }
    s.replications = st.get(a.reps, "reps")?.unwrap_or(5);
    s.seed = seed;
    s.smoother = smoother_config(st, &a.smoother)?;
    s.embed = embed_options(st, &a.embed, seed)?;
    s.keep_fits = a.heatmaps;
    Ok(s)
}

/// Runs a parsed command line; returns the files written.
pub fn run(cli: Cli) -> Result<Vec<PathBuf>> {
    if cli.threads > 0 {
        // ignore the error raised when a global pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let config = match &cli.config {
        Some(p) => io::parse_kv(&fs::read_to_string(p)?)?,
        None => BTreeMap::new(),
    };
    let st = Settings { config };
    let seed = st.get(cli.seed, "seed")?.unwrap_or(0);
    let out = &cli.out_dir;
    let mut written = Vec::new();

    match &cli.command {
        Command::Simulate(a) => {
            let spec = model_spec(&st, &a.model)?;
            let mode: SamplingMode = st.get::<String>(a.model.mode.clone(), "mode")?.unwrap_or("replicated".into()).parse()?;
            let params = SampleParams {
                n: st.require(a.model.n, "n")?,
                m: st.require(a.model.m, "m")?,
                rho: st.get(a.model.rho, "rho")?.unwrap_or_else(|| spec.default_rho()),
                sigma_cov: st.get(a.model.sigma, "sigma")?.unwrap_or(0.0),
                mode,
                seed,
            };
            let (g, latent) = sample(&spec, &params)?;
            written.push(write(out, "edges.tsv", &io::format_edge_list(&g))?);
            written.push(write(out, "covariates.tsv", &io::format_covariates(latent.observed_netpos()))?);
            written.push(write(out, "latent_x.tsv", &io::format_embedding(&latent.x))?);
            written.push(write(out, "latent_z.tsv", &io::format_covariates(&latent.z))?);
            let spec_path = out.join("spec.cfg");
            io::write_spec_config(&spec, &spec_path)?;
            written.push(spec_path);
        }
        Command::Distance(a) => {
            let g = load_graph(&st, &a.data)?;
            let split = match st.get(a.split_seed, "split_seed")? {
                Some(s) => LayerSplit::SeededRandom(s),
                None => LayerSplit::FirstHalf,
            };
            let opts = DistanceOptions { split, e: st.get(a.e, "e")?.unwrap_or(1) };
            let d = distance_matrix(&g, opts)?;
            written.push(write(out, "distance.txt", &io::format_matrix(&d.values))?);
        }
        Command::Embed(a) => {
            let d = match st.path(&a.distance, "distance") {
                Some(p) => DistanceMatrix::from_matrix(io::parse_matrix(&fs::read_to_string(p)?)?)?,
                None => distance_matrix(&load_graph(&st, &a.data)?, DistanceOptions::default())?,
            };
            let e = embed_1d(&d, &embed_options(&st, &a.embed, seed)?)?;
            written.push(write(out, "embedding.tsv", &io::format_embedding(&e.positions))?);
            written.push(write(
                out,
                "embedding_info.txt",
                &format!(
                    "stress={}\nrestarts={}\nviolated_fraction={}\nmargin={}\n",
                    e.stress, e.restarts_used, e.violated_fraction, e.margin
                ),
            )?);
        }
        Command::Fit(a) => {
            let fit = run_fit(&st, a, seed)?;
            written.push(write(out, "positions.tsv", &io::format_embedding(&fit.positions))?);
            written.push(io::write_fit(&fit, &out.join("fit"))?);
        }
        Command::Bench(a) => {
            let s = scenario(&st, a, seed)?;
            let result = bench::run_scenario(&s)?;
            let mut records = result.records;
            if a.with_paper_context {
                let heterogeneous = s.spec.beta() > 0.0;
                records.extend(paper_context(&s.id, s.spec.kind_name(), heterogeneous, s.n, s.m));
            }
            let format: ReportFormat = st.get::<String>(a.format.clone(), "format")?.unwrap_or("table".into()).parse()?;
            written.push(emit_report(&records, format, out, a.runtime)?);
            if a.heatmaps {
                let dir = out.join("heatmaps");
                written.extend(emit_heatmaps("truth", &result.truth, &dir)?);
                for (arm, f_hat) in &result.fits {
                    written.extend(emit_heatmaps(arm.name(), f_hat, &dir)?);
                }
            }
        }
        Command::Resample(a) => {
            let zs = parse_list::<f64>(&a.z, "z value")?;
            let opts = ResampleOptions {
                draws: st.get(a.draws, "draws")?.unwrap_or(10_000),
                level: st.get(a.level, "level")?.unwrap_or(0.95),
                seed,
            };
            let model: Box<dyn EdgeProbability> = match st.get(a.constant, "constant")? {
                Some(p) => Box::new(ConstantPredictor { n: st.require(a.fit.data.nodes, "nodes")?, p }),
                None => Box::new(run_fit(&st, &a.fit, seed)?),
            };
            let summaries = zs
                .iter()
                .map(|&z| resample_stats(model.as_ref(), z, &opts))
                .collect::<Result<Vec<_>>>()?;
            written.push(write(out, "resample.tsv", &io::format_resample_table(&summaries))?);
        }
        Command::Ci(a) => {
            let g = load_graph(&st, &a.fit.data)?;
            let z = io::read_covariates(
                &st.path(&a.fit.covariates, "covariates")
                    .ok_or_else(|| Error::InvalidInput("ci needs --covariates".into()))?,
                g.m(),
            )?;
            let positions = match st.path(&a.fit.positions, "positions") {
                Some(p) => io::parse_embedding(&fs::read_to_string(p)?)?,
                None => estimate_positions(&g, &embed_options(&st, &a.fit.embed, seed)?)?,
            };
            let pair = parse_list::<usize>(&a.pair, "node")?;
            if pair.len() != 2 || pair.contains(&0) {
                return Err(Error::InvalidInput("--pair takes two 1-indexed nodes, e.g. 3,7".into()));
            }
            let opts = BootstrapOptions {
                replicates: st.get(a.reps, "reps")?.unwrap_or(200),
                level: st.get(a.level, "level")?.unwrap_or(0.95),
                seed,
            };
            let cfg = smoother_config(&st, &a.fit.smoother)?;
            let zgrid = parse_list::<f64>(&a.zgrid, "z value")?;
            let band = bootstrap_ci(&g, &positions, &z, &cfg, (pair[0] - 1, pair[1] - 1), &zgrid, &opts)?;
            written.push(write(out, "band.tsv", &io::format_band(&band))?);
        }
    }
    Ok(written)
}
