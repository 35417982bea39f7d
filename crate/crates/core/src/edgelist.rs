//! Edge-list serialization: `source<TAB>target<TAB>weight`, one link per
//! line, with a JSON sidecar holding the headline counts and the node list
//! in id order (which also carries isolated nodes).

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::build::NetworkSummary;
use crate::error::{Error, Result};
use crate::graph::{weak_components, WeightedDigraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSidecar {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub omega: usize,
    pub nodes: Vec<String>,
}

impl GraphSidecar {
    pub fn for_graph(g: &WeightedDigraph) -> Self {
        GraphSidecar {
            n: g.node_count(),
            k: g.link_count(),
            omega: weak_components(g).omega,
            nodes: g.words().to_vec(),
        }
    }

    pub fn summary(&self) -> NetworkSummary {
        NetworkSummary {
            n: self.n,
            k: self.k,
            omega: self.omega,
        }
    }
}

pub fn sidecar_path(edges: &Path) -> PathBuf {
    let mut p = edges.as_os_str().to_owned();
    p.push(".json");
    PathBuf::from(p)
}

pub fn write_edges<W: Write>(g: &WeightedDigraph, mut out: W) -> std::io::Result<()> {
    for (s, t, w) in g.links() {
        writeln!(out, "{}\t{}\t{}", g.word(s), g.word(t), w)?;
    }
    out.flush()
}

/// Writes `path` and its sidecar `path.json`.
pub fn save(g: &WeightedDigraph, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_edges(g, std::io::BufWriter::new(file)).map_err(|e| Error::io(path, e))?;
    let side = sidecar_path(path);
    let json = serde_json::to_string_pretty(&GraphSidecar::for_graph(g))?;
    fs::write(&side, json + "\n").map_err(|e| Error::io(side, e))
}

/// Reads edges into `g`. Nodes already present keep their ids.
pub fn read_edges_into<R: BufRead>(g: &mut WeightedDigraph, input: R, path: &Path) -> Result<()> {
    for (lineno, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: lineno + 1,
            message,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        let [source, target, weight] = fields[..] else {
            return Err(parse_err(format!(
                "expected 3 fields, found {}",
                fields.len()
            )));
        };
        let weight: u64 = weight
            .parse()
            .map_err(|_| parse_err(format!("bad weight {weight:?}")))?;
        if weight == 0 {
            return Err(parse_err("weight must be positive".into()));
        }
        if source.is_empty() || target.is_empty() {
            return Err(parse_err("empty node name".into()));
        }
        if source == target {
            return Err(parse_err("self-loop".into()));
        }
        let (s, t) = (g.add_node(source), g.add_node(target));
        if g.weight(s, t).is_some() {
            return Err(parse_err(format!("duplicate link {source} -> {target}")));
        }
        g.add_link_ids(s, t, weight);
    }
    Ok(())
}

/// Loads an edge list. When the sidecar exists, node ids and isolated nodes
/// are restored from it and its counts are checked.
pub fn load(path: &Path) -> Result<WeightedDigraph> {
    let mut g = WeightedDigraph::new();
    let side = sidecar_path(path);
    let sidecar: Option<GraphSidecar> = if side.exists() {
        let text = fs::read_to_string(&side).map_err(|e| Error::io(&side, e))?;
        Some(serde_json::from_str(&text)?)
    } else {
        None
    };
    if let Some(sc) = &sidecar {
        for w in &sc.nodes {
            g.add_node(w);
        }
    }
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_edges_into(&mut g, BufReader::new(file), path)?;
    if let Some(sc) = sidecar {
        let omega = weak_components(&g).omega;
        if (sc.n, sc.k, sc.omega) != (g.node_count(), g.link_count(), omega) {
            return Err(Error::Parse {
                path: side,
                line: 0,
                message: format!(
                    "sidecar counts N={} K={} omega={} disagree with edges N={} K={} omega={}",
                    sc.n,
                    sc.k,
                    sc.omega,
                    g.node_count(),
                    g.link_count(),
                    omega
                ),
            });
        }
    }
    Ok(g)
}
