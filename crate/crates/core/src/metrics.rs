//! Structural metrics on the undirected projection: hop distances, average
//! path length, diameter, weighted clustering and hubs.
//!
//! Distances and path statistics are restricted to the largest weak
//! component so that every pair used is reachable. The per-node average
//! distance divides by `component size - 1`, and the diameter is the largest
//! hop distance over the same pairs.
//!
//! Weighted clustering uses the geometric mean of the three max-normalized
//! weights of each closed triangle around a node, summed over ordered
//! neighbor pairs and divided by `k (k - 1)`. Nodes of degree below two get
//! zero.

use std::collections::BTreeMap;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{components, ComponentPartition, NodeId, UndirectedView, WeightedDigraph};

const UNSEEN: u32 = u32::MAX;

/// Hop counts from `source` to every reachable node.
pub fn bfs_distances(view: &UndirectedView, source: NodeId) -> Result<BTreeMap<NodeId, u32>> {
    if source as usize >= view.node_count() {
        return Err(Error::UnknownNode(source as usize));
    }
    let mut scratch = BfsScratch::new(view.node_count());
    scratch.run(view, source);
    let out = scratch
        .queue
        .iter()
        .map(|&v| (v, scratch.dist[v as usize]))
        .collect();
    scratch.reset();
    Ok(out)
}

struct BfsScratch {
    dist: Vec<u32>,
    queue: Vec<NodeId>,
}

impl BfsScratch {
    fn new(n: usize) -> Self {
        BfsScratch {
            dist: vec![UNSEEN; n],
            queue: Vec::new(),
        }
    }

    /// Runs a BFS leaving visited nodes in `queue`, in visit order.
    fn run(&mut self, view: &UndirectedView, source: NodeId) {
        self.queue.clear();
        self.dist[source as usize] = 0;
        self.queue.push(source);
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head];
            head += 1;
            let du = self.dist[u as usize] + 1;
            for &v in view.neighbors(u) {
                let dv = &mut self.dist[v as usize];
                if *dv == UNSEEN {
                    *dv = du;
                    self.queue.push(v);
                }
            }
        }
    }

    /// Returns (sum of distances, eccentricity, reached) of the last run.
    fn summary(&self) -> (u64, u32, usize) {
        let mut sum = 0u64;
        let mut max = 0u32;
        for &v in &self.queue {
            let d = self.dist[v as usize];
            sum += d as u64;
            max = max.max(d);
        }
        (sum, max, self.queue.len())
    }

    fn reset(&mut self) {
        for &v in &self.queue {
            self.dist[v as usize] = UNSEEN;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMode {
    Exact,
    Sampled { sources: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceStats {
    pub average_path_length: f64,
    /// Exact diameter, or a lower bound when `exact` is false.
    pub diameter: u32,
    /// Mean distance from each BFS root to the rest of its component.
    pub per_node_avg: BTreeMap<NodeId, f64>,
    pub pair_count_used: u64,
    pub exact: bool,
    pub sampled_sources: Option<usize>,
    pub seed: Option<u64>,
    pub component_size: usize,
}

/// Path statistics over the largest weak component.
pub fn distance_stats(view: &UndirectedView, mode: DistanceMode) -> Result<DistanceStats> {
    distance_stats_with(view, &components(view), mode)
}

pub fn distance_stats_with(
    view: &UndirectedView,
    parts: &ComponentPartition,
    mode: DistanceMode,
) -> Result<DistanceStats> {
    if view.edge_count() == 0 {
        return Err(Error::DegenerateGraph(
            "no links, path lengths undefined".into(),
        ));
    }
    let nodes = &parts.largest_component;
    let size = nodes.len();

    let (roots, exact, sampled_sources, seed): (Vec<NodeId>, bool, _, _) = match mode {
        DistanceMode::Exact => (nodes.clone(), true, None, None),
        DistanceMode::Sampled { sources: 0, .. } => {
            return Err(Error::Config(
                "sampled mode needs at least one source".into(),
            ))
        }
        DistanceMode::Sampled { sources, seed } if sources >= size => {
            (nodes.clone(), true, Some(sources), Some(seed))
        }
        DistanceMode::Sampled { sources, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picks = index::sample(&mut rng, size, sources).into_vec();
            picks.sort_unstable();
            let roots = picks.into_iter().map(|p| nodes[p]).collect();
            (roots, false, Some(sources), Some(seed))
        }
    };

    let rows: Vec<(u64, u32, usize)> = roots
        .par_iter()
        .map_init(
            || BfsScratch::new(view.node_count()),
            |scratch, &root| {
                scratch.run(view, root);
                let row = scratch.summary();
                scratch.reset();
                row
            },
        )
        .collect();

    let others = (size - 1) as u64;
    let mut total = 0u64;
    let mut diameter = 0u32;
    let mut per_node_avg = BTreeMap::new();
    for (&root, &(sum, ecc, reached)) in roots.iter().zip(&rows) {
        debug_assert_eq!(reached, size);
        total += sum;
        diameter = diameter.max(ecc);
        per_node_avg.insert(root, sum as f64 / others as f64);
    }
    let pair_count_used = roots.len() as u64 * others;
    Ok(DistanceStats {
        average_path_length: total as f64 / pair_count_used as f64,
        diameter,
        per_node_avg,
        pair_count_used,
        exact,
        sampled_sources,
        seed,
        component_size: size,
    })
}

/// Per-thread marker for the neighbors of the node being scored.
struct Marks {
    weight: Vec<u64>,
}

impl Marks {
    fn new(n: usize) -> Self {
        Marks { weight: vec![0; n] }
    }
}

fn clustering_kernel(view: &UndirectedView, max_weight: f64, i: NodeId, marks: &mut Marks) -> f64 {
    let ki = view.degree(i);
    if ki < 2 {
        return 0.0;
    }
    let nbrs = view.neighbors(i);
    let wts = view.neighbor_weights(i);
    for (&k, &w) in nbrs.iter().zip(wts) {
        marks.weight[k as usize] = w;
    }
    let norm = |w: u64| w as f64 / max_weight;
    let term = |wij: u64, wik: u64, wjk: u64| (norm(wij) * norm(wik) * norm(wjk)).cbrt();

    let mut sum = 0.0;
    for (&j, &wij) in nbrs.iter().zip(wts) {
        if view.degree(j) <= ki {
            for (&k, &wjk) in view.neighbors(j).iter().zip(view.neighbor_weights(j)) {
                let wik = marks.weight[k as usize];
                if k != i && wik != 0 {
                    sum += term(wij, wik, wjk);
                }
            }
        } else {
            for (&k, &wik) in nbrs.iter().zip(wts) {
                if k == j {
                    continue;
                }
                if let Some(wjk) = view.weight(j, k) {
                    sum += term(wij, wik, wjk);
                }
            }
        }
    }
    for &k in nbrs {
        marks.weight[k as usize] = 0;
    }
    sum / (ki as f64 * (ki as f64 - 1.0))
}

/// Weighted clustering of node `i`; `max_weight` is the largest merged
/// weight of the whole network.
pub fn node_clustering(view: &UndirectedView, max_weight: u64, i: NodeId) -> Result<f64> {
    if i as usize >= view.node_count() {
        return Err(Error::UnknownNode(i as usize));
    }
    let mut marks = Marks::new(view.node_count());
    Ok(clustering_kernel(view, max_weight as f64, i, &mut marks))
}

/// Clustering coefficients of the given nodes, in the given order.
pub fn clustering_of(view: &UndirectedView, nodes: &[NodeId]) -> Vec<f64> {
    let Some(max) = view.max_weight() else {
        return vec![0.0; nodes.len()];
    };
    nodes
        .par_iter()
        .map_init(
            || Marks::new(view.node_count()),
            |marks, &i| clustering_kernel(view, max as f64, i, marks),
        )
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringStats {
    pub average: f64,
    pub per_node: BTreeMap<NodeId, f64>,
    /// Component averaged over; the largest one when there are several.
    pub component_used: u32,
}

pub fn average_clustering(g: &WeightedDigraph) -> Result<ClusteringStats> {
    let view = g.undirected_view();
    average_clustering_with(&view, &components(&view))
}

pub fn average_clustering_with(
    view: &UndirectedView,
    parts: &ComponentPartition,
) -> Result<ClusteringStats> {
    let component_used = parts.largest_id().ok_or(Error::EmptyGraph)?;
    let nodes: Vec<NodeId> = if parts.omega > 1 {
        parts.largest_component.clone()
    } else {
        (0..view.node_count() as NodeId).collect()
    };
    let values = clustering_of(view, &nodes);
    let average = values.iter().sum::<f64>() / values.len() as f64;
    Ok(ClusteringStats {
        average,
        per_node: nodes.into_iter().zip(values).collect(),
        component_used,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HubEntry {
    pub word: String,
    pub degree: usize,
}

/// Highest-degree nodes, ties broken by word.
pub fn top_hubs_in(view: &UndirectedView, words: &[String], k: usize) -> Result<Vec<HubEntry>> {
    if k == 0 {
        return Err(Error::Config("hub count must be at least 1".into()));
    }
    let mut order: Vec<NodeId> = (0..view.node_count() as NodeId).collect();
    let key = |&v: &NodeId| {
        (
            std::cmp::Reverse(view.degree(v)),
            words[v as usize].as_str(),
        )
    };
    let k = k.min(order.len());
    if k < order.len() {
        order.select_nth_unstable_by(k, |a, b| key(a).cmp(&key(b)));
        order.truncate(k);
    }
    order.sort_unstable_by(|a, b| key(a).cmp(&key(b)));
    Ok(order
        .into_iter()
        .map(|v| HubEntry {
            word: words[v as usize].clone(),
            degree: view.degree(v),
        })
        .collect())
}

pub fn top_hubs(g: &WeightedDigraph, k: usize) -> Result<Vec<HubEntry>> {
    top_hubs_in(&g.undirected_view(), g.words(), k)
}
