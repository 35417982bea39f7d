//! Experiment matrix: every (corpus part, window size, stopword policy)
//! combination is built, measured and written out as JSON and TSV tables.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::build::{BuildDiagnostics, NetworkBuilder, NetworkSummary};
use crate::degree::{
    degree_sequence_of, distribution_tsv, emit_pdf_ccdf, fit_power_law, DistributionRow,
};
use crate::edgelist;
use crate::error::{Error, Result};
use crate::graph::{components, WeightedDigraph};
use crate::metrics::{
    average_clustering_with, distance_stats_with, top_hubs_in, DistanceMode, HubEntry,
};
use crate::text::{
    corpus_stats, filter_stopwords, load_stopwords, read_document, resolve_paths, tokenize, Corpus,
    CorpusStats, NormalizationRules, StopwordList, Token,
};

pub const DEFAULT_WINDOWS: [usize; 5] = [2, 3, 4, 5, 6];
pub const DEFAULT_EXACT_THRESHOLD: usize = 20_000;
pub const DEFAULT_SAMPLE_SOURCES: usize = 1_000;
pub const HUB_COUNT: usize = 10;

/// Placeholder for missing table cells.
pub const MISSING: &str = "—";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusPart {
    pub name: String,
    pub files: Vec<PathBuf>,
}

/// Reads a manifest (JSON list of `{name, files}`); relative file paths are
/// resolved against the manifest's directory.
pub fn load_manifest(path: &Path) -> Result<Vec<CorpusPart>> {
    let text = read_document(path)?;
    let mut parts: Vec<CorpusPart> = serde_json::from_str(&text)?;
    let base = path.parent().unwrap_or(Path::new("."));
    for part in &mut parts {
        part.files = resolve_paths(base, &part.files);
    }
    Ok(parts)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricsMode {
    /// Exact up to `exact_threshold` nodes, sampled above.
    #[default]
    Auto,
    Exact,
    Sampled,
}

fn default_windows() -> Vec<usize> {
    DEFAULT_WINDOWS.to_vec()
}

fn default_policies() -> Vec<bool> {
    vec![true, false]
}

fn default_threshold() -> usize {
    DEFAULT_EXACT_THRESHOLD
}

fn default_sources() -> usize {
    DEFAULT_SAMPLE_SOURCES
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub corpus_parts: Vec<CorpusPart>,
    #[serde(default = "default_windows")]
    pub window_sizes: Vec<usize>,
    /// `true` keeps stopwords, `false` removes them.
    #[serde(default = "default_policies")]
    pub stopword_policies: Vec<bool>,
    #[serde(default)]
    pub stopword_file: Option<PathBuf>,
    #[serde(default)]
    pub metrics_mode: MetricsMode,
    #[serde(default = "default_threshold")]
    pub exact_threshold: usize,
    #[serde(default = "default_sources")]
    pub sample_sources: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn new(corpus_parts: Vec<CorpusPart>, output_dir: impl Into<PathBuf>) -> Self {
        ExperimentConfig {
            corpus_parts,
            window_sizes: default_windows(),
            stopword_policies: default_policies(),
            stopword_file: None,
            metrics_mode: MetricsMode::Auto,
            exact_threshold: DEFAULT_EXACT_THRESHOLD,
            sample_sources: DEFAULT_SAMPLE_SOURCES,
            seed: 0,
            output_dir: output_dir.into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.corpus_parts.is_empty() {
            return Err(Error::Config("at least one corpus part is required".into()));
        }
        if self.window_sizes.is_empty() || self.stopword_policies.is_empty() {
            return Err(Error::Config(
                "window sizes and stopword policies must be non-empty".into(),
            ));
        }
        if let Some(&n) = self.window_sizes.iter().find(|&&n| n < 2) {
            return Err(Error::Config(format!("window size {n} is below 2")));
        }
        if self.stopword_policies.contains(&false) && self.stopword_file.is_none() {
            return Err(Error::Config(
                "excluding stopwords needs a stopword file".into(),
            ));
        }
        if self.metrics_mode != MetricsMode::Exact && self.sample_sources == 0 {
            return Err(Error::Config("sample_sources must be positive".into()));
        }
        Ok(())
    }

    /// Distance mode for a network of `nodes` nodes.
    pub fn distance_mode(&self, nodes: usize) -> DistanceMode {
        let sampled = DistanceMode::Sampled {
            sources: self.sample_sources,
            seed: self.seed,
        };
        match self.metrics_mode {
            MetricsMode::Exact => DistanceMode::Exact,
            MetricsMode::Sampled => sampled,
            MetricsMode::Auto if nodes <= self.exact_threshold => DistanceMode::Exact,
            MetricsMode::Auto => sampled,
        }
    }
}

/// Headline metrics of one network, as emitted by the `metrics` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsSummary {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "L")]
    pub l: Option<f64>,
    #[serde(rename = "D")]
    pub d: Option<u32>,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    pub omega: usize,
    pub exact: bool,
    pub sampled_sources: Option<usize>,
    pub seed: Option<u64>,
}

/// Everything measured on one network.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkAnalysis {
    pub metrics: MetricsSummary,
    pub hubs: Vec<HubEntry>,
    pub fit: Option<crate::degree::PowerLawFit>,
    pub distribution: Vec<DistributionRow>,
    /// First failing stage, if any.
    pub error: Option<String>,
}

/// Runs the full metric suite; stops at the first failing stage and keeps
/// whatever was computed before it.
pub fn analyze(g: &WeightedDigraph, mode: DistanceMode, hub_count: usize) -> NetworkAnalysis {
    let view = g.undirected_view();
    let parts = components(&view);
    let mut out = NetworkAnalysis {
        metrics: MetricsSummary {
            n: g.node_count(),
            k: g.link_count(),
            l: None,
            d: None,
            c: None,
            omega: parts.omega,
            exact: matches!(mode, DistanceMode::Exact),
            sampled_sources: None,
            seed: None,
        },
        hubs: Vec::new(),
        fit: None,
        distribution: Vec::new(),
        error: None,
    };
    let mut stages = || -> Result<()> {
        let dist = distance_stats_with(&view, &parts, mode)?;
        out.metrics.l = Some(dist.average_path_length);
        out.metrics.d = Some(dist.diameter);
        out.metrics.exact = dist.exact;
        out.metrics.sampled_sources = dist.sampled_sources;
        out.metrics.seed = dist.seed;
        out.metrics.c = Some(average_clustering_with(&view, &parts)?.average);
        out.hubs = top_hubs_in(&view, g.words(), hub_count)?;
        let seq = degree_sequence_of(&view);
        out.distribution = emit_pdf_ccdf(&seq)?;
        out.fit = Some(fit_power_law(&seq)?);
        Ok(())
    };
    if let Err(e) = stages() {
        out.error = Some(e.to_string());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartReport {
    pub name: String,
    pub files: Vec<PathBuf>,
    pub stats: CorpusStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub part: String,
    pub n: usize,
    pub include_stopwords: bool,
    #[serde(flatten)]
    pub metrics: MetricsSummary,
    pub alpha: Option<f64>,
    pub x_min: Option<usize>,
    pub ks: Option<f64>,
    pub n_tail: Option<usize>,
    pub hubs: Vec<HubEntry>,
    pub diagnostics: BuildDiagnostics,
    pub error: Option<String>,
}

impl CellRecord {
    pub fn summary(&self) -> NetworkSummary {
        NetworkSummary {
            n: self.metrics.n,
            k: self.metrics.k,
            omega: self.metrics.omega,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub parts: Vec<PartReport>,
    pub records: Vec<CellRecord>,
}

impl ExperimentReport {
    pub fn all_ok(&self) -> bool {
        self.records.iter().all(|r| r.error.is_none())
    }

    pub fn cell(&self, part: &str, n: usize, include_stopwords: bool) -> Option<&CellRecord> {
        self.records
            .iter()
            .find(|r| r.part == part && r.n == n && r.include_stopwords == include_stopwords)
    }
}

/// Per-cell artifacts besides the report record.
#[derive(Debug, Clone)]
pub struct CellArtifacts {
    pub graph: WeightedDigraph,
    pub distribution: Vec<DistributionRow>,
}

pub fn policy_label(include_stopwords: bool) -> &'static str {
    if include_stopwords {
        "sw"
    } else {
        "nosw"
    }
}

type DocCache = HashMap<PathBuf, Vec<Vec<Token>>>;

fn tokenized<'a>(cache: &'a mut DocCache, path: &Path) -> Result<&'a Vec<Vec<Token>>> {
    if !cache.contains_key(path) {
        let text = read_document(path)?;
        cache.insert(
            path.to_path_buf(),
            tokenize(&text, NormalizationRules::default()),
        );
    }
    Ok(&cache[path])
}

/// Runs every cell and calls `sink` with each finished record and its
/// artifacts, in report order. Nested parts reuse the partial build of the
/// previous part when its file list is a prefix of the next one.
pub fn run_matrix_with<F>(cfg: &ExperimentConfig, mut sink: F) -> Result<ExperimentReport>
where
    F: FnMut(&CellRecord, &CellArtifacts) -> Result<()>,
{
    cfg.validate()?;
    let stops = match &cfg.stopword_file {
        Some(p) => load_stopwords(p)?,
        None => StopwordList::new(),
    };

    let mut raw: DocCache = HashMap::new();
    let mut filtered: DocCache = HashMap::new();
    let mut parts = Vec::with_capacity(cfg.corpus_parts.len());
    for part in &cfg.corpus_parts {
        let mut corpus = Corpus::new();
        for f in &part.files {
            let sentences = tokenized(&mut raw, f)?.clone();
            corpus.append_sentences(f.display().to_string(), sentences);
        }
        parts.push(PartReport {
            name: part.name.clone(),
            files: part.files.clone(),
            stats: corpus_stats(&corpus, &stops),
        });
        if cfg.stopword_policies.contains(&false) {
            for f in &part.files {
                if !filtered.contains_key(f) {
                    let doc = Corpus::from_sentences("", raw[f].clone());
                    let kept = filter_stopwords(&doc, &stops).sentences().to_vec();
                    filtered.insert(f.clone(), kept);
                }
            }
        }
    }

    let cell_index = |p: usize, w: usize, s: usize| {
        (p * cfg.window_sizes.len() + w) * cfg.stopword_policies.len() + s
    };
    let total = cfg.corpus_parts.len() * cfg.window_sizes.len() * cfg.stopword_policies.len();
    let mut cells: Vec<Option<(CellRecord, CellArtifacts)>> = (0..total).map(|_| None).collect();

    for (s, &include) in cfg.stopword_policies.iter().enumerate() {
        let docs = if include { &raw } else { &filtered };
        for (w, &n) in cfg.window_sizes.iter().enumerate() {
            let mut builder = NetworkBuilder::new(n, include)?;
            let mut ingested: Vec<PathBuf> = Vec::new();
            for (p, part) in cfg.corpus_parts.iter().enumerate() {
                if !part.files.starts_with(&ingested) {
                    builder = NetworkBuilder::new(n, include)?;
                    ingested.clear();
                }
                for f in &part.files[ingested.len()..] {
                    builder.add_sentences(&docs[f]);
                    ingested.push(f.clone());
                }
                let graph = builder.graph().clone();
                let analysis = analyze(&graph, cfg.distance_mode(graph.node_count()), HUB_COUNT);
                log::info!(
                    "{} n={} {}: N={} K={} {}",
                    part.name,
                    n,
                    policy_label(include),
                    analysis.metrics.n,
                    analysis.metrics.k,
                    analysis.error.as_deref().unwrap_or("ok")
                );
                let record = CellRecord {
                    part: part.name.clone(),
                    n,
                    include_stopwords: include,
                    metrics: analysis.metrics,
                    alpha: analysis.fit.map(|f| f.alpha),
                    x_min: analysis.fit.map(|f| f.x_min),
                    ks: analysis.fit.map(|f| f.ks_statistic),
                    n_tail: analysis.fit.map(|f| f.n_tail),
                    hubs: analysis.hubs,
                    diagnostics: builder.diagnostics(),
                    error: analysis.error,
                };
                let artifacts = CellArtifacts {
                    graph,
                    distribution: analysis.distribution,
                };
                cells[cell_index(p, w, s)] = Some((record, artifacts));
            }
        }
    }

    let mut records = Vec::with_capacity(total);
    for (record, artifacts) in cells.into_iter().flatten() {
        sink(&record, &artifacts)?;
        records.push(record);
    }
    Ok(ExperimentReport { parts, records })
}

pub fn run_matrix(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    run_matrix_with(cfg, |_, _| Ok(()))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Runs the matrix and writes every output under `cfg.output_dir`.
pub fn run_matrix_to_disk(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let out = &cfg.output_dir;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    write_file(
        &out.join("config.json"),
        &(serde_json::to_string_pretty(cfg)? + "\n"),
    )?;
    for sub in ["networks", "dist"] {
        let dir = out.join(sub);
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    }

    let report = run_matrix_with(cfg, |record, artifacts| {
        let stem = format!(
            "{}_{}_{}",
            record.part,
            record.n,
            policy_label(record.include_stopwords)
        );
        edgelist::save(
            &artifacts.graph,
            &out.join("networks").join(format!("{stem}.edges")),
        )?;
        if !artifacts.distribution.is_empty() {
            write_file(
                &out.join("dist").join(format!("{stem}.tsv")),
                &distribution_tsv(&artifacts.distribution),
            )?;
        }
        Ok(())
    })?;

    write_file(
        &out.join("report.json"),
        &(serde_json::to_string_pretty(&report)? + "\n"),
    )?;
    for table in render_tables(&report) {
        write_file(
            &out.join("tables").join(format!("{}.tsv", table.part)),
            &table.measures,
        )?;
        write_file(
            &out.join("hubs").join(format!("{}.tsv", table.part)),
            &table.hubs,
        )?;
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderedTables {
    pub part: String,
    pub measures: String,
    pub hubs: String,
}

/// Row labels of the measures table, in order: `(label, include_stopwords)`.
pub const MEASURE_ROWS: [(&str, bool); 12] = [
    ("N_sw", true),
    ("N", false),
    ("K_sw", true),
    ("K", false),
    ("L_sw", true),
    ("L", false),
    ("D_sw", true),
    ("D", false),
    ("C_sw", true),
    ("C", false),
    ("ω_sw", true),
    ("ω", false),
];

fn measure_cell(label: &str, rec: &CellRecord) -> Option<String> {
    let m = &rec.metrics;
    match label.trim_end_matches("_sw") {
        "N" => Some(m.n.to_string()),
        "K" => Some(m.k.to_string()),
        "L" => m.l.map(|v| format!("{v:.2}")),
        "D" => m.d.map(|v| v.to_string()),
        "C" => m.c.map(|v| format!("{v:.2}")),
        "ω" => Some(m.omega.to_string()),
        _ => None,
    }
}

/// Window sizes in the order they first appear in the records.
fn windows_of(report: &ExperimentReport) -> Vec<usize> {
    let mut windows: Vec<usize> = Vec::new();
    for r in &report.records {
        if !windows.contains(&r.n) {
            windows.push(r.n);
        }
    }
    windows
}

pub fn render_tables(report: &ExperimentReport) -> Vec<RenderedTables> {
    let windows = windows_of(report);
    report
        .parts
        .iter()
        .map(|part| RenderedTables {
            part: part.name.clone(),
            measures: render_measures(report, &part.name, &windows),
            hubs: render_hubs(report, &part.name, &windows),
        })
        .collect()
}

fn render_measures(report: &ExperimentReport, part: &str, windows: &[usize]) -> String {
    let mut out = String::from("measure");
    for n in windows {
        write!(out, "\tm_{n}").unwrap();
    }
    out.push('\n');
    for (label, include) in MEASURE_ROWS {
        out.push_str(label);
        for &n in windows {
            let cell = report
                .cell(part, n, include)
                .and_then(|rec| measure_cell(label, rec))
                .unwrap_or_else(|| MISSING.to_owned());
            write!(out, "\t{cell}").unwrap();
        }
        out.push('\n');
    }
    out
}

fn render_hubs(report: &ExperimentReport, part: &str, windows: &[usize]) -> String {
    let mut ends: Vec<usize> = Vec::new();
    if let (Some(&lo), Some(&hi)) = (windows.iter().min(), windows.iter().max()) {
        ends.push(lo);
        if hi != lo {
            ends.push(hi);
        }
    }
    let groups: Vec<(bool, usize)> = [true, false]
        .into_iter()
        .flat_map(|inc| ends.iter().map(move |&n| (inc, n)))
        .collect();

    let mut out = String::from("rank");
    for &(inc, n) in &groups {
        let label = policy_label(inc);
        write!(out, "\t{label}_m_{n}_word\t{label}_m_{n}_degree").unwrap();
    }
    out.push('\n');
    let columns: Vec<&[HubEntry]> = groups
        .iter()
        .map(|&(inc, n)| report.cell(part, n, inc).map_or(&[][..], |r| &r.hubs[..]))
        .collect();
    let depth = columns.iter().map(|c| c.len()).max().unwrap_or(0);
    for rank in 0..depth {
        write!(out, "{}", rank + 1).unwrap();
        for col in &columns {
            match col.get(rank) {
                Some(h) => write!(out, "\t{}\t{}", h.word, h.degree).unwrap(),
                None => write!(out, "\t{MISSING}\t{MISSING}").unwrap(),
            }
        }
        out.push('\n');
    }
    out
}

/// Parsed measures table: row label to cells (`None` for missing).
#[derive(Debug, Clone, PartialEq)]
pub struct MeasuresTable {
    pub windows: Vec<usize>,
    pub rows: Vec<(String, Vec<Option<f64>>)>,
}

impl MeasuresTable {
    pub fn row(&self, label: &str) -> Option<&[Option<f64>]> {
        self.rows
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, v)| v.as_slice())
    }
}

pub fn parse_measures(tsv: &str) -> Result<MeasuresTable> {
    let err = |line: usize, message: String| Error::Parse {
        path: PathBuf::from("<table>"),
        line,
        message,
    };
    let mut lines = tsv.lines();
    let header = lines.next().ok_or_else(|| err(1, "empty table".into()))?;
    let windows = header
        .split('\t')
        .skip(1)
        .map(|h| {
            h.strip_prefix("m_")
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| err(1, format!("bad column {h:?}")))
        })
        .collect::<Result<Vec<usize>>>()?;
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let mut fields = line.split('\t');
        let label = fields.next().unwrap_or_default().to_owned();
        let cells = fields
            .map(|f| {
                if f == MISSING {
                    Ok(None)
                } else {
                    f.parse::<f64>()
                        .map(Some)
                        .map_err(|_| err(i + 2, format!("bad cell {f:?}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        if cells.len() != windows.len() {
            return Err(err(i + 2, "column count mismatch".into()));
        }
        rows.push((label, cells));
    }
    Ok(MeasuresTable { windows, rows })
}
