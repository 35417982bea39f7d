//! Brute-force reference implementations shared by the integration tests.
//! None of these call into the library's metric code.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeSet;

use conet_core::{UndirectedView, WeightedDigraph};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const INF: u32 = u32::MAX;

/// Undirected simple graph with symmetric weights, 0 meaning no edge.
#[derive(Debug, Clone)]
pub struct Dense {
    pub n: usize,
    pub w: Vec<Vec<u64>>,
}

impl Dense {
    pub fn random(rng: &mut ChaCha8Rng, n: usize, p: f64, max_w: u64) -> Self {
        let mut w = vec![vec![0u64; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(p) {
                    let x = rng.gen_range(1..=max_w);
                    w[i][j] = x;
                    w[j][i] = x;
                }
            }
        }
        Dense { n, w }
    }

    pub fn edges(&self) -> Vec<(u32, u32, u64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.w[i][j] > 0 {
                    out.push((i as u32, j as u32, self.w[i][j]));
                }
            }
        }
        out
    }

    pub fn view(&self) -> UndirectedView {
        UndirectedView::from_edges(self.n, self.edges())
    }

    pub fn degree(&self, i: usize) -> usize {
        self.w[i].iter().filter(|&&x| x > 0).count()
    }
}

pub fn floyd_warshall(g: &Dense) -> Vec<Vec<u32>> {
    let n = g.n;
    let mut d = vec![vec![INF; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if g.w[i][j] > 0 {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] != INF && d[k][j] != INF && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Largest connected component from the distance matrix, ties going to the
/// component holding the smallest node.
pub fn largest_component(d: &[Vec<u32>]) -> Vec<usize> {
    let n = d.len();
    let mut seen = vec![false; n];
    let mut best: Vec<usize> = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let comp: Vec<usize> = (0..n).filter(|&t| d[s][t] != INF).collect();
        for &t in &comp {
            seen[t] = true;
        }
        if comp.len() > best.len() {
            best = comp;
        }
    }
    best
}

/// (L, D) over ordered pairs of distinct nodes in `comp`.
pub fn path_stats(d: &[Vec<u32>], comp: &[usize]) -> (f64, u32) {
    let mut sum = 0u64;
    let mut max = 0u32;
    for &i in comp {
        for &j in comp {
            if i != j {
                sum += d[i][j] as u64;
                max = max.max(d[i][j]);
            }
        }
    }
    let pairs = comp.len() * (comp.len() - 1);
    (sum as f64 / pairs as f64, max)
}

/// Weighted clustering by enumerating every ordered pair of neighbors.
pub fn clustering_brute(g: &Dense, i: usize) -> f64 {
    let k = g.degree(i);
    if k < 2 {
        return 0.0;
    }
    let max = g.w.iter().flatten().copied().max().unwrap() as f64;
    let mut sum = 0.0;
    for j in 0..g.n {
        for h in 0..g.n {
            if j == h || j == i || h == i {
                continue;
            }
            let (a, b, c) = (g.w[i][j], g.w[i][h], g.w[j][h]);
            if a > 0 && b > 0 && c > 0 {
                sum += (a as f64 / max * b as f64 / max * c as f64 / max).cbrt();
            }
        }
    }
    sum / (k * (k - 1)) as f64
}

/// Classic 2T/(k(k-1)).
pub fn clustering_unweighted(g: &Dense, i: usize) -> f64 {
    let k = g.degree(i);
    if k < 2 {
        return 0.0;
    }
    let mut t = 0usize;
    for j in 0..g.n {
        for h in j + 1..g.n {
            if g.w[i][j] > 0 && g.w[i][h] > 0 && g.w[j][h] > 0 {
                t += 1;
            }
        }
    }
    2.0 * t as f64 / (k * (k - 1)) as f64
}

/// Exact sampler for P(X = k) ∝ k^-alpha on k ≥ x_min. The CDF is tabulated
/// up to `table_len` values; the remaining mass (below 1e-7 for the
/// parameters used here) falls back to the continuous approximation.
pub struct PowerLawSampler {
    x_min: u64,
    alpha: f64,
    cdf: Vec<f64>,
}

impl PowerLawSampler {
    pub fn new(alpha: f64, x_min: u64, table_len: usize) -> Self {
        // normalizer: direct sum over the table plus an integral tail
        let last = x_min + table_len as u64;
        let mut head = 0.0;
        let mut terms = Vec::with_capacity(table_len);
        for k in x_min..last {
            let t = (k as f64).powf(-alpha);
            terms.push(t);
            head += t;
        }
        let tail = (last as f64 - 0.5).powf(1.0 - alpha) / (alpha - 1.0);
        let total = head + tail;
        let mut acc = 0.0;
        let cdf = terms
            .into_iter()
            .map(|t| {
                acc += t;
                acc / total
            })
            .collect();
        PowerLawSampler { x_min, alpha, cdf }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> u64 {
        let r: f64 = rng.gen();
        let idx = self.cdf.partition_point(|&c| c < r);
        if idx < self.cdf.len() {
            return self.x_min + idx as u64;
        }
        let last = self.x_min as f64 + self.cdf.len() as f64;
        let u: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
        ((last - 0.5) * u.powf(-1.0 / (self.alpha - 1.0)) + 0.5).floor() as u64
    }
}

/// Word for vocabulary rank `r`: letters only, so tokenization keeps it whole.
pub fn synthetic_word(mut r: usize) -> String {
    let mut s = String::from("q");
    loop {
        s.push((b'a' + (r % 26) as u8) as char);
        r /= 26;
        if r == 0 {
            break;
        }
    }
    s
}

/// Zipf(1) text over `vocab` ranks: `tokens` words split into sentences of
/// 5..=30 words.
pub fn zipf_text(rng: &mut ChaCha8Rng, tokens: usize, vocab: usize) -> String {
    let mut cdf = Vec::with_capacity(vocab);
    let mut acc = 0.0;
    for r in 1..=vocab {
        acc += 1.0 / r as f64;
        cdf.push(acc);
    }
    let words: Vec<String> = (0..vocab).map(synthetic_word).collect();
    let mut out = String::with_capacity(tokens * 8);
    let mut left = tokens;
    while left > 0 {
        let len = rng.gen_range(5..=30).min(left);
        for p in 0..len {
            let r = rng.gen::<f64>() * acc;
            let idx = cdf.partition_point(|&c| c < r).min(vocab - 1);
            if p > 0 {
                out.push(' ');
            }
            out.push_str(&words[idx]);
        }
        out.push_str(".\n");
        left -= len;
    }
    out
}

/// Forward pairs of one sentence under window `n`, self-pairs included.
pub fn window_pairs(sentence: &[String], n: usize) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for p in 0..sentence.len() {
        for q in p + 1..(p + n).min(sentence.len()) {
            out.push((sentence[p].clone(), sentence[q].clone()));
        }
    }
    out
}

pub fn link_set(g: &WeightedDigraph) -> BTreeSet<(String, String, u64)> {
    g.links()
        .into_iter()
        .map(|(s, t, w)| (g.word(s).to_string(), g.word(t).to_string(), w))
        .collect()
}
