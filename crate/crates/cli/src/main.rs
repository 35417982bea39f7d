use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use conet_core::degree::{degree_sequence_of, distribution_tsv, emit_pdf_ccdf, fit_power_law};
use conet_core::experiment::{
    analyze, load_manifest, run_matrix_to_disk, CorpusPart, ExperimentConfig, MetricsMode,
    DEFAULT_EXACT_THRESHOLD, DEFAULT_SAMPLE_SOURCES, HUB_COUNT,
};
use conet_core::text::{corpus_stats, load_stopwords, Corpus, NormalizationRules, StopwordList};
use conet_core::{build_network, edgelist, DistanceMode, WeightedDigraph, WindowConfig};

#[derive(Parser)]
#[command(
    name = "conet",
    version,
    about = "Word co-occurrence networks from plain text"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Corpus statistics: word count, unique words, stopwords present.
    Stats(StatsArgs),
    /// Build one network and write it as an edge list.
    Build(BuildArgs),
    /// Full metric set of one network.
    Metrics(MetricsArgs),
    /// Power-law fit of a saved network's degree distribution.
    Fit(FitArgs),
    /// Run the whole experiment matrix.
    Matrix(MatrixArgs),
}

#[derive(Args)]
struct CorpusInput {
    /// Text files, read in order.
    files: Vec<PathBuf>,
    /// JSON manifest of named corpus parts; the last part is used where one
    /// corpus is expected.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

impl CorpusInput {
    fn parts(&self) -> Result<Vec<CorpusPart>> {
        match (&self.manifest, self.files.is_empty()) {
            (Some(m), true) => Ok(load_manifest(m)?),
            (None, false) => Ok(vec![CorpusPart {
                name: "corpus".into(),
                files: self.files.clone(),
            }]),
            (Some(_), false) => bail!("give either text files or --manifest, not both"),
            (None, true) => bail!("no input: give text files or --manifest"),
        }
    }

    fn corpus(&self) -> Result<Corpus> {
        let parts = self.parts()?;
        let part = parts.last().context("manifest has no parts")?;
        Ok(Corpus::from_files(
            &part.files,
            NormalizationRules::default(),
        )?)
    }
}

#[derive(Args)]
struct StopwordArgs {
    /// Stopword list, one form per line. Stopwords are removed unless
    /// --keep-stopwords is given.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    #[arg(long)]
    keep_stopwords: bool,
}

impl StopwordArgs {
    fn list(&self) -> Result<StopwordList> {
        Ok(match &self.stopwords {
            Some(p) => load_stopwords(p)?,
            None => StopwordList::new(),
        })
    }

    fn include(&self) -> bool {
        self.keep_stopwords || self.stopwords.is_none()
    }
}

#[derive(Args)]
struct ModeArgs {
    /// Exact all-pairs distances regardless of size.
    #[arg(long, conflicts_with = "sample")]
    exact: bool,
    /// Estimate distances from this many BFS sources.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ModeArgs {
    fn mode(&self, nodes: usize) -> DistanceMode {
        match (self.exact, self.sample) {
            (true, _) => DistanceMode::Exact,
            (false, Some(sources)) => DistanceMode::Sampled {
                sources,
                seed: self.seed,
            },
            (false, None) if nodes <= DEFAULT_EXACT_THRESHOLD => DistanceMode::Exact,
            (false, None) => DistanceMode::Sampled {
                sources: DEFAULT_SAMPLE_SOURCES,
                seed: self.seed,
            },
        }
    }
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    input: CorpusInput,
    #[arg(long)]
    stopwords: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    input: CorpusInput,
    #[arg(long, default_value_t = 2)]
    window: usize,
    #[command(flatten)]
    stops: StopwordArgs,
    /// Edge-list output; a `.json` sidecar is written next to it.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MetricsArgs {
    #[command(flatten)]
    input: CorpusInput,
    /// Measure a saved edge list instead of building from text.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    window: usize,
    #[command(flatten)]
    stops: StopwordArgs,
    #[command(flatten)]
    mode: ModeArgs,
    /// Directory for metrics.json and hubs.tsv.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Saved edge list.
    graph: PathBuf,
    /// Directory for fit.json and dist.tsv.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MatrixArgs {
    /// Config JSON; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// JSON manifest of named corpus parts.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Window sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    window: Vec<usize>,
    // With a stopword list both policies are run; --keep-stopwords runs
    // only the one that keeps them.
    #[command(flatten)]
    stops: StopwordArgs,
    /// Exact distances in every cell.
    #[arg(long, conflicts_with = "sample")]
    exact: bool,
    /// Sampled distances from this many BFS sources in every cell.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)? + "\n")
        .with_context(|| format!("writing {}", path.display()))
}

fn stats(args: StatsArgs) -> Result<()> {
    let stops = match &args.stopwords {
        Some(p) => load_stopwords(p)?,
        None => StopwordList::new(),
    };
    let parts = args.input.parts()?;
    if args.input.manifest.is_none() {
        let corpus = Corpus::from_files(&parts[0].files, NormalizationRules::default())?;
        println!(
            "{}",
            serde_json::to_string_pretty(&corpus_stats(&corpus, &stops))?
        );
        return Ok(());
    }
    let mut out = serde_json::Map::new();
    for part in parts {
        let corpus = Corpus::from_files(&part.files, NormalizationRules::default())?;
        out.insert(
            part.name,
            serde_json::to_value(corpus_stats(&corpus, &stops))?,
        );
    }
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn build_from(input: &CorpusInput, window: usize, stops: &StopwordArgs) -> Result<WeightedDigraph> {
    let corpus = input.corpus()?;
    let cfg = WindowConfig::new(window, stops.include(), stops.list()?)?;
    let (g, diag) = build_network(&corpus, &cfg)?;
    eprintln!("{}", serde_json::to_string(&diag)?);
    Ok(g)
}

fn build(args: BuildArgs) -> Result<()> {
    let g = build_from(&args.input, args.window, &args.stops)?;
    edgelist::save(&g, &args.out)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&edgelist::GraphSidecar::for_graph(&g).summary())?
    );
    Ok(())
}

fn metrics(args: MetricsArgs) -> Result<ExitCode> {
    let g = match &args.graph {
        Some(path) => edgelist::load(path)?,
        None => build_from(&args.input, args.window, &args.stops)?,
    };
    let analysis = analyze(&g, args.mode.mode(g.node_count()), HUB_COUNT);
    println!("{}", serde_json::to_string_pretty(&analysis.metrics)?);
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
        write_json(&dir.join("metrics.json"), &analysis.metrics)?;
        let mut hubs = String::from("rank\tword\tdegree\n");
        for (i, h) in analysis.hubs.iter().enumerate() {
            hubs.push_str(&format!("{}\t{}\t{}\n", i + 1, h.word, h.degree));
        }
        fs::write(dir.join("hubs.tsv"), hubs)?;
    }
    if let Some(e) = analysis.error {
        eprintln!("error: {e}");
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn fit(args: FitArgs) -> Result<()> {
    let g = edgelist::load(&args.graph)?;
    let seq = degree_sequence_of(&g.undirected_view());
    let fit = fit_power_law(&seq)?;
    println!("{}", serde_json::to_string_pretty(&fit)?);
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
        write_json(&dir.join("fit.json"), &fit)?;
        fs::write(
            dir.join("dist.tsv"),
            distribution_tsv(&emit_pdf_ccdf(&seq)?),
        )?;
    }
    Ok(())
}

fn matrix(args: MatrixArgs) -> Result<ExitCode> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str::<ExperimentConfig>(&text)
                .with_context(|| format!("parsing {}", path.display()))?
        }
        None => ExperimentConfig::new(Vec::new(), PathBuf::new()),
    };
    if let Some(m) = &args.manifest {
        cfg.corpus_parts = load_manifest(m)?;
    }
    if !args.window.is_empty() {
        cfg.window_sizes = args.window.clone();
    }
    if let Some(s) = &args.stops.stopwords {
        cfg.stopword_file = Some(s.clone());
    }
    if args.stops.keep_stopwords {
        cfg.stopword_policies = vec![true];
    }
    if args.exact {
        cfg.metrics_mode = MetricsMode::Exact;
    }
    if let Some(k) = args.sample {
        cfg.metrics_mode = MetricsMode::Sampled;
        cfg.sample_sources = k;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.output_dir = out.clone();
    }
    if cfg.output_dir.as_os_str().is_empty() {
        bail!("no output directory: pass --out or set output_dir in the config");
    }

    let report = run_matrix_to_disk(&cfg)?;
    let failed: Vec<_> = report
        .records
        .iter()
        .filter(|r| r.error.is_some())
        .collect();
    eprintln!(
        "{} cells, {} failed; output in {}",
        report.records.len(),
        failed.len(),
        cfg.output_dir.display()
    );
    for r in &failed {
        eprintln!(
            "  {} n={} stopwords={}: {}",
            r.part,
            r.n,
            r.include_stopwords,
            r.error.as_deref().unwrap_or("")
        );
    }
    Ok(if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Stats(a) => stats(a).map(|_| ExitCode::SUCCESS),
        Command::Build(a) => build(a).map(|_| ExitCode::SUCCESS),
        Command::Metrics(a) => metrics(a),
        Command::Fit(a) => fit(a).map(|_| ExitCode::SUCCESS),
        Command::Matrix(a) => matrix(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
