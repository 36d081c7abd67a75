//! Randomized drawing experiment, the pair-crossing lower bound for complete
//! graphs, the even-subword search, and duality reports.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::congestion::{congestion, Caps, Mode, PathFlow};
use crate::cuts::find_separator;
use crate::graph::Graph;
use crate::metrics::{edge_sparsity_exact, vertex_sparsity_exact};
use crate::{seeds, Error, Rational, Result};

/// `C(n,5) / (n − 4)`, a lower bound on the pair-crossing number of `K_n`.
pub fn pcr_lower_bound(n: u64) -> Result<Rational> {
    if n < 5 {
        return Err(Error::InvalidParams(format!("n must be at least 5, got {n}")));
    }
    let mut c: u128 = 1;
    for i in 0..5u128 {
        c = c * (n as u128 - i) / (i + 1);
    }
    let c = i64::try_from(c).map_err(|_| Error::InvalidParams(format!("C({n},5) overflows")))?;
    Ok(Rational::new(c, n as i64 - 4))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConflictStats {
    pub trials: usize,
    /// Number of related commodity pairs in each trial.
    pub counts: Vec<u64>,
    pub mean: f64,
    /// Unbiased sample variance (0 for a single trial).
    pub variance: f64,
    pub vcong: f64,
    /// `8 m vcong²`.
    pub upper_bound: f64,
    /// `C(n,5)/(n − 4)` for `n ≥ 5`.
    pub lower_bound: Option<f64>,
}

impl ConflictStats {
    pub fn stddev(&self) -> f64 {
        self.variance.sqrt()
    }
}

type Bits = Vec<u64>;

fn bits_with(n: usize, vs: impl Iterator<Item = usize>) -> Bits {
    let mut b = vec![0u64; n.div_ceil(64)];
    for v in vs {
        b[v / 64] |= 1 << (v % 64);
    }
    b
}

fn meets(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

/// Samples one path per commodity from `phi` in each trial and counts the
/// unordered pairs of commodities whose paths are related: some vertex of
/// one equals or neighbors some vertex of the other. Trial `t` draws from
/// the stream `derive(seed, t)`.
pub fn drawing_conflict_experiment(
    g: &Graph,
    phi: &PathFlow,
    vcong: f64,
    trials: usize,
    seed: u64,
) -> Result<ConflictStats> {
    let n = g.n();
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be at least 1".into()));
    }
    if n < 2 || !g.is_connected() {
        return Err(Error::InvalidParams("graph must be connected with n >= 2".into()));
    }
    phi.validate(g)?;
    // Closed neighborhoods of the candidate paths, computed once.
    let prepared: Vec<Vec<(f64, Bits, Bits)>> = phi
        .commodities
        .iter()
        .map(|c| {
            let mut acc = 0.0;
            c.paths
                .iter()
                .map(|(p, w)| {
                    acc += w;
                    let own = bits_with(n, p.iter().copied());
                    let near = bits_with(n, p.iter().flat_map(|&v| std::iter::once(v).chain(g.neighbors(v).iter().copied())));
                    (acc, own, near)
                })
                .collect()
        })
        .collect();
    let counts: Vec<u64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = seeds::rng(seeds::derive(seed, t));
            let chosen: Vec<&(f64, Bits, Bits)> = prepared
                .iter()
                .map(|opts| {
                    let total = opts.last().expect("commodity has a path").0;
                    let r = rng.gen::<f64>() * total;
                    opts.iter().find(|o| o.0 > r).unwrap_or(opts.last().unwrap())
                })
                .collect();
            let mut x = 0;
            for i in 0..chosen.len() {
                for j in i + 1..chosen.len() {
                    if meets(&chosen[i].2, &chosen[j].1) {
                        x += 1;
                    }
                }
            }
            x
        })
        .collect();
    let mean = counts.iter().sum::<u64>() as f64 / trials as f64;
    let variance = if trials > 1 {
        counts.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / (trials - 1) as f64
    } else {
        0.0
    };
    let lower_bound = pcr_lower_bound(n as u64).ok().map(crate::cuts::ratio_f64);
    Ok(ConflictStats {
        trials,
        counts,
        mean,
        variance,
        vcong,
        upper_bound: 8.0 * g.m() as f64 * vcong * vcong,
        lower_bound,
    })
}

/// Finds a nonempty factor in which every symbol occurs an even number of
/// times. Returns half-open bounds `(start, end)` of the repeat of prefix
/// parity vectors with the smallest `end`.
pub fn even_subword<T: Ord + Clone>(word: &[T]) -> Option<(usize, usize)> {
    let mut index: BTreeMap<T, usize> = BTreeMap::new();
    for s in word {
        let k = index.len();
        index.entry(s.clone()).or_insert(k);
    }
    let mut parity = vec![0u64; index.len().div_ceil(64).max(1)];
    let mut first_seen: HashMap<Vec<u64>, usize> = HashMap::from([(parity.clone(), 0)]);
    for (i, s) in word.iter().enumerate() {
        let k = index[s];
        parity[k / 64] ^= 1 << (k % 64);
        if let Some(&start) = first_seen.get(&parity) {
            return Some((start, i + 1));
        }
        first_seen.insert(parity.clone(), i + 1);
    }
    None
}

/// Every symbol of `word` occurs an even number of times.
pub fn all_counts_even<T: Ord>(word: &[T]) -> bool {
    let mut counts: BTreeMap<&T, usize> = BTreeMap::new();
    for s in word {
        *counts.entry(s).or_default() += 1;
    }
    counts.values().all(|c| c % 2 == 0)
}

pub const REPORT_HEADER: &str = "graph,n,m,econg,espars,vcong,vspars,sep_size,prod_edge,prod_vertex";

#[derive(Debug, Clone, PartialEq)]
pub struct DualityRow {
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub econg: f64,
    pub espars: Rational,
    pub vcong: f64,
    /// `None` for complete graphs, which have no vertex cut.
    pub vspars: Option<Rational>,
    pub sep_size: usize,
}

impl DualityRow {
    /// `espars · econg`.
    pub fn prod_edge(&self) -> f64 {
        crate::cuts::ratio_f64(self.espars) * self.econg
    }

    /// `4 · vspars · vcong`.
    pub fn prod_vertex(&self) -> Option<f64> {
        self.vspars.map(|v| 4.0 * crate::cuts::ratio_f64(v) * self.vcong)
    }

    pub fn to_csv(&self) -> String {
        let opt = |x: Option<f64>| x.map_or("inf".to_string(), |v| format!("{v:.6}"));
        format!(
            "{},{},{},{:.6},{:.6},{:.6},{},{},{:.6},{}",
            self.graph,
            self.n,
            self.m,
            self.econg,
            crate::cuts::ratio_f64(self.espars),
            self.vcong,
            opt(self.vspars.map(crate::cuts::ratio_f64)),
            self.sep_size,
            self.prod_edge(),
            opt(self.prod_vertex()),
        )
    }
}

/// Congestions, exact sparsities and a pipeline separator of `g`.
pub fn duality_report(name: &str, g: &Graph, caps: Caps, seed: u64) -> Result<DualityRow> {
    let econg = congestion(g, Mode::Edge, caps)?.congestion;
    let vcong = congestion(g, Mode::Vertex, caps)?.congestion;
    let (espars, _) = edge_sparsity_exact(g)?;
    let vspars = match vertex_sparsity_exact(g) {
        Ok((v, _)) => Some(v),
        Err(Error::NoVertexCut) => None,
        Err(e) => return Err(e),
    };
    let sep_size = find_separator(g, seed)?.size();
    Ok(DualityRow {
        graph: name.to_string(),
        n: g.n(),
        m: g.m(),
        econg,
        espars,
        vcong,
        vspars,
        sep_size,
    })
}
