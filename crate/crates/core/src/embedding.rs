//! Random 1-Lipschitz line embeddings: distance to a random subset sampled
//! at a random density scale.
//!
//! With `k = ⌈log₂ n⌉`, a scale `j` is drawn uniformly from `0..=k`, every
//! vertex joins `A` with probability `2^-j`, and `f(u) = d(u, A)`. An empty
//! `A` gives `f ≡ 0`.
//!
//! For a fixed pair `u ≠ v` and `Δ = d(u,v) / (2k − 1)`, the event
//! `|f(u) − f(v)| ≥ Δ` has probability at least `c₁ / (k + 1)`: one scale
//! out of `k + 1` matches the size of a ball whose successor at most doubles
//! it, and at that scale `A` meets the smaller ball and misses the larger
//! one with probability at least
//! `c₁ = (1 − e^{−1/2}) / 16 ≈ 0.0246`
//! (take `|X| ≥ 1/(2p)` hit with probability `≥ 1 − e^{−1/2}` and
//! `|Y| ≤ 2/p` missed with probability `≥ (1 − p)^{2/p} ≥ 1/16` for
//! `p ≤ 1/2`). The tests use the rounded-down bound `0.02 / (k + 1)`.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::metrics::MetricMatrix;
use crate::{seeds, Error, Result};

/// `(1 − e^{−1/2}) / 16`.
pub fn c1() -> f64 {
    (1.0 - (-0.5f64).exp()) / 16.0
}

/// Lower bound on the per-pair success probability used in checks.
pub fn success_bound(k: u32) -> f64 {
    0.02 / (k as f64 + 1.0)
}

/// `⌈log₂ n⌉`.
pub fn scale_count(n: usize) -> u32 {
    n.max(1).next_power_of_two().trailing_zeros()
}

pub fn default_trials(n: usize) -> usize {
    50 * (scale_count(n) as usize + 1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Embedding {
    pub f: Vec<f64>,
    pub seed: u64,
    /// Scale index `j`; anchors were sampled with probability `2^-j`.
    pub scale: u32,
    pub anchors: Vec<usize>,
}

impl Embedding {
    /// `Σ_pairs |f(u) − f(v)|`.
    pub fn spread(&self) -> f64 {
        pair_spread(&self.f)
    }
}

pub fn pair_spread(f: &[f64]) -> f64 {
    let n = f.len();
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .map(|(u, v)| (f[u] - f[v]).abs())
        .sum()
}

/// First pair with `|f(u) − f(v)| > d(u,v) + tol`.
pub fn lipschitz_violation(d: &MetricMatrix, f: &[f64], tol: f64) -> Option<(usize, usize)> {
    let n = d.n();
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .find(|&(u, v)| (f[u] - f[v]).abs() > d.get(u, v) + tol)
}

pub fn bourgain_sample(d: &MetricMatrix, seed: u64) -> Embedding {
    let n = d.n();
    let k = scale_count(n);
    let mut rng = seeds::rng(seed);
    let scale = rng.gen_range(0..=k);
    let p = 0.5f64.powi(scale as i32);
    let anchors: Vec<usize> = (0..n).filter(|_| rng.gen_bool(p)).collect();
    let f = if anchors.is_empty() {
        vec![0.0; n]
    } else {
        (0..n)
            .map(|u| anchors.iter().map(|&a| d.get(u, a)).fold(f64::INFINITY, f64::min))
            .collect()
    };
    Embedding { f, seed, scale, anchors }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestEmbedding {
    pub embedding: Embedding,
    pub trial: usize,
    pub spread: f64,
    /// False when every trial produced a constant `f`.
    pub non_constant: bool,
}

/// Runs `trials` samples with seeds `derive(seed, t)` and keeps the one with
/// the largest spread, the lowest trial index winning ties.
pub fn best_embedding(d: &MetricMatrix, trials: usize, seed: u64) -> Result<BestEmbedding> {
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be at least 1".into()));
    }
    if d.pair_sum() <= 0.0 {
        return Err(Error::InvalidParams("metric is identically zero".into()));
    }
    let samples: Vec<Embedding> = (0..trials as u64)
        .into_par_iter()
        .map(|t| bourgain_sample(d, seeds::derive(seed, t)))
        .collect();
    let mut best = 0;
    let mut best_spread = samples[0].spread();
    for (t, e) in samples.iter().enumerate().skip(1) {
        let s = e.spread();
        if s > best_spread {
            best = t;
            best_spread = s;
        }
    }
    let embedding = samples.into_iter().nth(best).expect("trial exists");
    let non_constant = embedding.f.iter().any(|&x| x != embedding.f[0]);
    Ok(BestEmbedding { embedding, trial: best, spread: best_spread, non_constant })
}
