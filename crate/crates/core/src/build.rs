//! Sliding-window network construction.
//!
//! For a window of size `n`, every token links forward to each of the next
//! `n - 1` tokens of the same sentence. Windows never cross sentence
//! boundaries, every pair occurrence adds one to the link weight, and a word
//! repeated inside its own window is skipped (and counted) rather than
//! stored as a self-loop.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{weak_components, NodeId, WeightedDigraph};
use crate::text::{filter_stopwords, Corpus, StopwordList, Token};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowConfig {
    window: usize,
    pub include_stopwords: bool,
    pub stopwords: StopwordList,
}

impl WindowConfig {
    pub fn new(window: usize, include_stopwords: bool, stopwords: StopwordList) -> Result<Self> {
        check_window(window)?;
        Ok(WindowConfig {
            window,
            include_stopwords,
            stopwords,
        })
    }

    /// Window `n` keeping every token.
    pub fn with_stopwords(window: usize) -> Result<Self> {
        Self::new(window, true, StopwordList::new())
    }

    pub fn window(&self) -> usize {
        self.window
    }
}

fn check_window(window: usize) -> Result<()> {
    if window < 2 {
        return Err(Error::Config(format!(
            "window size must be at least 2, got {window}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildDiagnostics {
    pub sentences: usize,
    pub tokens: usize,
    pub self_loops_skipped: usize,
    pub n: usize,
    pub include_stopwords: bool,
}

/// Incremental builder; sentences may be fed document by document and the
/// graph inspected (or cloned) between documents.
#[derive(Debug, Clone)]
pub struct NetworkBuilder {
    graph: WeightedDigraph,
    diagnostics: BuildDiagnostics,
    ids: Vec<NodeId>,
}

impl NetworkBuilder {
    pub fn new(window: usize, include_stopwords: bool) -> Result<Self> {
        check_window(window)?;
        Ok(NetworkBuilder {
            graph: WeightedDigraph::new(),
            diagnostics: BuildDiagnostics {
                n: window,
                include_stopwords,
                ..Default::default()
            },
            ids: Vec::new(),
        })
    }

    pub fn add_sentence(&mut self, sentence: &[Token]) {
        if sentence.is_empty() {
            return;
        }
        let window = self.diagnostics.n;
        self.ids.clear();
        self.ids
            .extend(sentence.iter().map(|t| self.graph.add_node(&t.normalized)));
        for (p, &source) in self.ids.iter().enumerate() {
            let end = (p + window).min(self.ids.len());
            for &target in &self.ids[p + 1..end] {
                if !self.graph.add_link_ids(source, target, 1) {
                    self.diagnostics.self_loops_skipped += 1;
                }
            }
        }
        self.diagnostics.sentences += 1;
        self.diagnostics.tokens += sentence.len();
    }

    pub fn add_sentences<'a, I>(&mut self, sentences: I)
    where
        I: IntoIterator<Item = &'a Vec<Token>>,
    {
        for s in sentences {
            self.add_sentence(s);
        }
    }

    pub fn graph(&self) -> &WeightedDigraph {
        &self.graph
    }

    pub fn diagnostics(&self) -> BuildDiagnostics {
        self.diagnostics
    }

    pub fn finish(self) -> (WeightedDigraph, BuildDiagnostics) {
        (self.graph, self.diagnostics)
    }
}

/// Builds the network for `corpus`. When stopwords are excluded the corpus
/// is filtered first, so windows span the filtered sequence.
pub fn build_network(
    corpus: &Corpus,
    cfg: &WindowConfig,
) -> Result<(WeightedDigraph, BuildDiagnostics)> {
    let mut builder = NetworkBuilder::new(cfg.window, cfg.include_stopwords)?;
    if cfg.include_stopwords {
        builder.add_sentences(corpus.sentences());
    } else {
        let filtered = filter_stopwords(corpus, &cfg.stopwords);
        builder.add_sentences(filtered.sentences());
    }
    Ok(builder.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkSummary {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub omega: usize,
}

pub fn network_summary(g: &WeightedDigraph) -> NetworkSummary {
    NetworkSummary {
        n: g.node_count(),
        k: g.link_count(),
        omega: weak_components(g).omega,
    }
}
