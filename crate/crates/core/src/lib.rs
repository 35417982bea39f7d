//! Word co-occurrence networks from plain text.
//!
//! The pipeline runs from raw UTF-8 documents ([`text`]) through sliding
//! window construction ([`build`]) to a weighted directed graph ([`graph`]),
//! whose undirected projection feeds the structural metrics ([`metrics`])
//! and degree distribution fits ([`degree`]). [`experiment`] sweeps window
//! sizes, stopword policies and nested corpus parts and renders the results.

pub mod build;
pub mod degree;
pub mod edgelist;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod metrics;
pub mod text;

pub use build::{
    build_network, network_summary, BuildDiagnostics, NetworkBuilder, NetworkSummary, WindowConfig,
};
pub use degree::{
    degree_sequence, emit_pdf_ccdf, fit_power_law, DegreeSequence, DistributionRow, PowerLawFit,
};
pub use error::{Error, Result};
pub use experiment::{run_matrix, run_matrix_to_disk, ExperimentConfig, ExperimentReport};
pub use graph::{
    max_weight, weak_components, ComponentPartition, NodeId, UndirectedView, WeightedDigraph,
};
pub use metrics::{
    average_clustering, bfs_distances, distance_stats, node_clustering, top_hubs, ClusteringStats,
    DistanceMode, DistanceStats, HubEntry,
};
pub use text::{
    corpus_stats, filter_stopwords, load_stopwords, tokenize, Corpus, CorpusStats,
    NormalizationRules, StopwordList, Token,
};
