//! Weighted directed co-occurrence graph, its undirected projection, and
//! weak component analysis.

use std::collections::hash_map::{DefaultHasher, Entry};
use std::collections::{HashMap, VecDeque};
use std::hash::BuildHasherDefault;

use crate::error::{Error, Result};

/// Dense node index assigned in first-insertion order.
pub type NodeId = u32;

// Fixed-key hasher so iteration order is identical across processes.
type StableMap<K, V> = HashMap<K, V, BuildHasherDefault<DefaultHasher>>;

/// Words as nodes, directed links carrying positive integer weights.
/// Self-loops are never stored.
#[derive(Debug, Clone, Default)]
pub struct WeightedDigraph {
    words: Vec<String>,
    index: StableMap<String, NodeId>,
    out: Vec<StableMap<NodeId, u64>>,
    link_count: usize,
}

impl WeightedDigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of `word`, inserting it if absent.
    pub fn add_node(&mut self, word: &str) -> NodeId {
        if let Some(&id) = self.index.get(word) {
            return id;
        }
        let id = NodeId::try_from(self.words.len()).expect("node count exceeds u32");
        self.words.push(word.to_owned());
        self.index.insert(word.to_owned(), id);
        self.out.push(StableMap::default());
        id
    }

    /// Counts one co-occurrence of `source` followed by `target`. Both nodes
    /// are inserted; returns `false` (and stores nothing) for a self-loop.
    pub fn add_cooccurrence(&mut self, source: &str, target: &str) -> bool {
        let s = self.add_node(source);
        let t = self.add_node(target);
        self.add_link_ids(s, t, 1)
    }

    /// Adds `weight` to the link `source -> target`. Returns `false` for a
    /// self-loop or zero weight.
    pub fn add_link_ids(&mut self, source: NodeId, target: NodeId, weight: u64) -> bool {
        if source == target || weight == 0 {
            return false;
        }
        assert!((target as usize) < self.words.len(), "unknown target node");
        match self.out[source as usize].entry(target) {
            Entry::Occupied(mut e) => *e.get_mut() += weight,
            Entry::Vacant(e) => {
                e.insert(weight);
                self.link_count += 1;
            }
        }
        true
    }

    pub fn node_count(&self) -> usize {
        self.words.len()
    }

    pub fn link_count(&self) -> usize {
        self.link_count
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, id: NodeId) -> &str {
        &self.words[id as usize]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn node_id(&self, word: &str) -> Option<NodeId> {
        self.index.get(word).copied()
    }

    pub fn weight(&self, source: NodeId, target: NodeId) -> Option<u64> {
        self.out.get(source as usize)?.get(&target).copied()
    }

    pub fn weight_of(&self, source: &str, target: &str) -> Option<u64> {
        self.weight(self.node_id(source)?, self.node_id(target)?)
    }

    /// Outgoing links of `source` as `(target, weight)`, in unspecified order.
    pub fn out_links(&self, source: NodeId) -> impl Iterator<Item = (NodeId, u64)> + '_ {
        self.out[source as usize].iter().map(|(&t, &w)| (t, w))
    }

    /// All links sorted by `(source, target)` id.
    pub fn links(&self) -> Vec<(NodeId, NodeId, u64)> {
        let mut links = Vec::with_capacity(self.link_count);
        for (s, targets) in self.out.iter().enumerate() {
            let start = links.len();
            links.extend(targets.iter().map(|(&t, &w)| (s as NodeId, t, w)));
            links[start..].sort_unstable_by_key(|&(_, t, _)| t);
        }
        links
    }

    pub fn undirected_view(&self) -> UndirectedView {
        UndirectedView::from_digraph(self)
    }
}

/// Symmetric adjacency in compressed sparse row form. The merged weight of
/// `{i, j}` is `w(i, j) + w(j, i)`. Neighbor lists are sorted by id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UndirectedView {
    offsets: Vec<usize>,
    neighbors: Vec<NodeId>,
    weights: Vec<u64>,
}

impl UndirectedView {
    pub fn from_digraph(g: &WeightedDigraph) -> Self {
        let n = g.node_count();
        let edges: Vec<(NodeId, NodeId, u64)> = (0..n as NodeId)
            .flat_map(|s| g.out_links(s).map(move |(t, w)| (s, t, w)))
            .collect();
        Self::from_edges(n, edges)
    }

    /// Builds a view over `node_count` nodes from (possibly repeated, either
    /// orientation) undirected edges. Self-loops are ignored.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId, u64)> + Clone,
    {
        let mut degree = vec![0usize; node_count];
        for (a, b, _) in edges.clone() {
            if a != b {
                degree[a as usize] += 1;
                degree[b as usize] += 1;
            }
        }
        let mut offsets = Vec::with_capacity(node_count + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let total = *offsets.last().unwrap();
        let mut cursor = offsets[..node_count].to_vec();
        let mut slots = vec![(0 as NodeId, 0u64); total];
        for (a, b, w) in edges {
            if a == b {
                continue;
            }
            slots[cursor[a as usize]] = (b, w);
            cursor[a as usize] += 1;
            slots[cursor[b as usize]] = (a, w);
            cursor[b as usize] += 1;
        }

        // sort each row, then merge duplicate neighbors
        let mut neighbors = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        let mut merged_offsets = Vec::with_capacity(node_count + 1);
        merged_offsets.push(0);
        for i in 0..node_count {
            let row = &mut slots[offsets[i]..offsets[i + 1]];
            row.sort_unstable_by_key(|&(j, _)| j);
            for &(j, w) in row.iter() {
                if neighbors.len() > *merged_offsets.last().unwrap()
                    && *neighbors.last().unwrap() == j
                {
                    *weights.last_mut().unwrap() += w;
                } else {
                    neighbors.push(j);
                    weights.push(w);
                }
            }
            merged_offsets.push(neighbors.len());
        }
        neighbors.shrink_to_fit();
        weights.shrink_to_fit();
        UndirectedView {
            offsets: merged_offsets,
            neighbors,
            weights,
        }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.node_count() == 0
    }

    pub fn neighbors(&self, i: NodeId) -> &[NodeId] {
        let i = i as usize;
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn neighbor_weights(&self, i: NodeId) -> &[u64] {
        let i = i as usize;
        &self.weights[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn degree(&self, i: NodeId) -> usize {
        let i = i as usize;
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn weight(&self, i: NodeId, j: NodeId) -> Option<u64> {
        let row = self.neighbors(i);
        row.binary_search(&j)
            .ok()
            .map(|k| self.neighbor_weights(i)[k])
    }

    pub fn max_weight(&self) -> Option<u64> {
        self.weights.iter().copied().max()
    }
}

/// Largest merged undirected link weight.
pub fn max_weight(g: &WeightedDigraph) -> Result<u64> {
    g.undirected_view().max_weight().ok_or(Error::NoLinks)
}

/// Weakly connected components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    /// Component id per node. Ids are numbered by each component's smallest
    /// node id.
    pub assignment: Vec<u32>,
    pub omega: usize,
    pub sizes: Vec<usize>,
    /// Nodes of the largest component in increasing id order. Ties go to
    /// the component holding the smallest node id.
    pub largest_component: Vec<NodeId>,
}

impl ComponentPartition {
    pub fn largest_id(&self) -> Option<u32> {
        self.largest_component
            .first()
            .map(|&n| self.assignment[n as usize])
    }
}

pub fn components(view: &UndirectedView) -> ComponentPartition {
    let n = view.node_count();
    let mut assignment = vec![u32::MAX; n];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for root in 0..n {
        if assignment[root] != u32::MAX {
            continue;
        }
        let cid = sizes.len() as u32;
        assignment[root] = cid;
        queue.push_back(root as NodeId);
        let mut size = 0;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for &v in view.neighbors(u) {
                if assignment[v as usize] == u32::MAX {
                    assignment[v as usize] = cid;
                    queue.push_back(v);
                }
            }
        }
        sizes.push(size);
    }
    // first maximum wins, which is the component with the smallest root
    let largest = sizes
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, usize)>, (c, &s)| match best {
            Some((_, bs)) if bs >= s => best,
            _ => Some((c, s)),
        })
        .map(|(c, _)| c as u32);
    let largest_component = match largest {
        Some(c) => (0..n as NodeId)
            .filter(|&v| assignment[v as usize] == c)
            .collect(),
        None => Vec::new(),
    };
    ComponentPartition {
        assignment,
        omega: sizes.len(),
        sizes,
        largest_component,
    }
}

pub fn weak_components(g: &WeightedDigraph) -> ComponentPartition {
    components(&g.undirected_view())
}
