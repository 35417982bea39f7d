//! Degree distributions and discrete power-law fitting.
//!
//! The fit follows the usual discrete maximum-likelihood recipe: for every
//! candidate lower cutoff `x_min` the exponent is the maximizer of
//! `-n ln ζ(α, x_min) - α Σ ln k`, and the cutoff whose fitted model has the
//! smallest Kolmogorov–Smirnov distance to the empirical tail wins.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{UndirectedView, WeightedDigraph};

/// Minimum number of positive observations accepted by [`fit_power_law`].
pub const MIN_OBSERVATIONS: usize = 10;

/// Candidate cutoffs are capped at this quantile of the positive degrees.
pub const XMIN_QUANTILE: f64 = 0.95;

const ALPHA_LO: f64 = 1.0 + 1e-9;
const ALPHA_HI: f64 = 50.0;
const ALPHA_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSequence {
    pub degrees: Vec<usize>,
}

impl DegreeSequence {
    pub fn n_obs(&self) -> usize {
        self.degrees.len()
    }

    fn positive_counts(&self) -> (Vec<usize>, Vec<usize>) {
        let mut pos: Vec<usize> = self.degrees.iter().copied().filter(|&d| d > 0).collect();
        pos.sort_unstable();
        let mut values: Vec<usize> = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        for d in pos {
            if values.last() == Some(&d) {
                *counts.last_mut().unwrap() += 1;
            } else {
                values.push(d);
                counts.push(1);
            }
        }
        (values, counts)
    }
}

impl FromIterator<usize> for DegreeSequence {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        DegreeSequence {
            degrees: iter.into_iter().collect(),
        }
    }
}

/// Distinct-neighbor degree of every node, in node id order.
pub fn degree_sequence_of(view: &UndirectedView) -> DegreeSequence {
    (0..view.node_count() as u32)
        .map(|v| view.degree(v))
        .collect()
}

pub fn degree_sequence(g: &WeightedDigraph) -> DegreeSequence {
    degree_sequence_of(&g.undirected_view())
}

/// Hurwitz zeta `Σ_{k≥0} (k + q)^-s` for `s > 1`, `q ≥ 1`.
///
/// The first terms are summed directly; the remainder uses the
/// Euler–Maclaurin tail, whose truncation error is far below 1e-10 once the
/// direct part covers 16 terms.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    debug_assert!(s > 1.0 && q >= 1.0);
    const DIRECT: usize = 16;
    let mut sum = 0.0;
    for k in 0..DIRECT {
        sum += (q + k as f64).powf(-s);
    }
    let n = q + DIRECT as f64;
    let fn_ = n.powf(-s);
    let tail = n * fn_ / (s - 1.0) + 0.5 * fn_ + s * fn_ / (12.0 * n)
        - s * (s + 1.0) * (s + 2.0) * fn_ / (720.0 * n.powi(3))
        + s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * fn_ / (30240.0 * n.powi(5));
    sum + tail
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub x_min: usize,
    #[serde(rename = "ks")]
    pub ks_statistic: f64,
    pub n_tail: usize,
}

/// Prefix view of the tail starting at one candidate cutoff.
struct Tail<'a> {
    values: &'a [usize],
    counts: &'a [usize],
    n: usize,
    sum_ln: f64,
}

impl Tail<'_> {
    fn x_min(&self) -> usize {
        self.values[0]
    }

    fn mean_ln(&self) -> f64 {
        self.sum_ln / self.n as f64
    }

    /// Per-observation log-likelihood of exponent `alpha`.
    fn log_likelihood(&self, alpha: f64) -> f64 {
        -hurwitz_zeta(alpha, self.x_min() as f64).ln() - alpha * self.mean_ln()
    }

    fn mle_alpha(&self) -> f64 {
        // the log-likelihood is concave in alpha; golden-section search
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (ALPHA_LO, ALPHA_HI);
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let mut fc = self.log_likelihood(c);
        let mut fd = self.log_likelihood(d);
        while b - a > ALPHA_TOL {
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = self.log_likelihood(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = self.log_likelihood(d);
            }
        }
        (a + b) / 2.0
    }

    /// Largest gap between the empirical and fitted CDFs over the tail.
    fn ks_distance(&self, alpha: f64) -> f64 {
        let norm = hurwitz_zeta(alpha, self.x_min() as f64);
        let mut model_mass = 0.0;
        let mut k = self.x_min();
        let mut cum = 0usize;
        let mut worst = 0.0f64;
        for (&v, &c) in self.values.iter().zip(self.counts) {
            while k <= v {
                model_mass += (k as f64).powf(-alpha);
                k += 1;
            }
            cum += c;
            let empirical = cum as f64 / self.n as f64;
            let model = (model_mass / norm).min(1.0);
            worst = worst.max((empirical - model).abs());
        }
        worst
    }
}

pub fn fit_power_law(seq: &DegreeSequence) -> Result<PowerLawFit> {
    let (values, counts) = seq.positive_counts();
    let n_pos: usize = counts.iter().sum();
    if n_pos < MIN_OBSERVATIONS {
        return Err(Error::InsufficientData(format!(
            "{n_pos} positive observations, need at least {MIN_OBSERVATIONS}"
        )));
    }
    if values.len() < 2 {
        return Err(Error::DegenerateSequence(format!(
            "all {n_pos} positive degrees equal {}",
            values[0]
        )));
    }

    // suffix sums so each candidate's tail statistics are O(1)
    let m = values.len();
    let mut suffix_n = vec![0usize; m + 1];
    let mut suffix_ln = vec![0.0f64; m + 1];
    for i in (0..m).rev() {
        suffix_n[i] = suffix_n[i + 1] + counts[i];
        suffix_ln[i] = suffix_ln[i + 1] + counts[i] as f64 * (values[i] as f64).ln();
    }

    // smallest value whose empirical CDF reaches the quantile
    let mut cum = 0usize;
    let cap = values
        .iter()
        .zip(&counts)
        .find(|&(_, &c)| {
            cum += c;
            cum as f64 >= XMIN_QUANTILE * n_pos as f64
        })
        .map(|(&v, _)| v)
        .unwrap_or(values[m - 1]);
    // a cutoff at the maximum leaves a single-valued tail with no finite MLE
    let candidates: Vec<usize> = (0..m - 1).filter(|&i| values[i] <= cap).collect();

    let fits: Vec<PowerLawFit> = candidates
        .par_iter()
        .map(|&i| {
            let tail = Tail {
                values: &values[i..],
                counts: &counts[i..],
                n: suffix_n[i],
                sum_ln: suffix_ln[i],
            };
            let alpha = tail.mle_alpha();
            PowerLawFit {
                alpha,
                x_min: values[i],
                ks_statistic: tail.ks_distance(alpha),
                n_tail: tail.n,
            }
        })
        .collect();

    // candidates are in increasing x_min; strict comparison keeps the smaller on ties
    let best = fits
        .into_iter()
        .reduce(|best, f| {
            if f.ks_statistic < best.ks_statistic {
                f
            } else {
                best
            }
        })
        .expect("at least one candidate cutoff");
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistributionRow {
    pub k: usize,
    pub pdf: f64,
    pub ccdf: f64,
}

/// Empirical `p(X = k)` and `p(X ≥ k)` over the positive degrees.
pub fn emit_pdf_ccdf(seq: &DegreeSequence) -> Result<Vec<DistributionRow>> {
    let (values, counts) = seq.positive_counts();
    let n: usize = counts.iter().sum();
    if n == 0 {
        return Err(Error::InsufficientData("no positive degrees".into()));
    }
    let mut remaining = n;
    let rows = values
        .into_iter()
        .zip(counts)
        .map(|(k, c)| {
            let row = DistributionRow {
                k,
                pdf: c as f64 / n as f64,
                ccdf: remaining as f64 / n as f64,
            };
            remaining -= c;
            row
        })
        .collect();
    Ok(rows)
}

pub fn distribution_tsv(rows: &[DistributionRow]) -> String {
    let mut out = String::from("k\tpdf\tccdf\n");
    for r in rows {
        out.push_str(&format!("{}\t{}\t{}\n", r.k, r.pdf, r.ccdf));
    }
    out
}
