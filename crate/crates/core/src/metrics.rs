//! Shortest-path metrics, ratio functionals, and exact sparsity by
//! enumeration.

use std::cmp::Ordering;

use serde::Serialize;

use crate::congestion::Mode;
use crate::graph::{EdgeCut, Graph, VertexCut};
use crate::{Error, Rational, Result};

/// Enumeration cap for the exact sparsity oracles.
pub const SPARSITY_MAX_N: usize = 20;

/// Symmetric matrix of pairwise distances with zero diagonal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricMatrix {
    n: usize,
    d: Vec<f64>,
}

impl MetricMatrix {
    /// Builds a metric from a full row-major matrix; checks shape, symmetry,
    /// zero diagonal and nonnegativity.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParams("metric matrix must be square".into()));
        }
        for u in 0..n {
            if rows[u][u] != 0.0 {
                return Err(Error::InvalidParams(format!("d({u},{u}) must be 0")));
            }
            for v in 0..n {
                let x = rows[u][v];
                if !(x >= 0.0 && x.is_finite()) || x != rows[v][u] {
                    return Err(Error::InvalidParams(format!("d({u},{v}) is not a symmetric nonnegative value")));
                }
            }
        }
        Ok(MetricMatrix { n, d: rows.into_iter().flatten().collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.d[u * self.n + v]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.d.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Σ over unordered pairs.
    pub fn pair_sum(&self) -> f64 {
        (0..self.n)
            .flat_map(|u| (u + 1..self.n).map(move |v| (u, v)))
            .map(|(u, v)| self.get(u, v))
            .sum()
    }

    /// First triple `(u, v, w)` with `d(u,w) > d(u,v) + d(v,w) + tol`.
    pub fn triangle_violation(&self, tol: f64) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    if self.get(u, w) > self.get(u, v) + self.get(v, w) + tol {
                        return Some((u, v, w));
                    }
                }
            }
        }
        None
    }
}

/// All-pairs shortest paths under nonnegative edge weights `w`
/// (indexed like [`Graph::edges`]).
pub fn shortest_path_metric(g: &Graph, w: &[f64]) -> Result<MetricMatrix> {
    let n = g.n();
    if w.len() != g.m() {
        return Err(Error::InvalidParams(format!("{} weights for {} edges", w.len(), g.m())));
    }
    if let Some(x) = w.iter().find(|x| !(**x >= 0.0 && x.is_finite())) {
        return Err(Error::InvalidParams(format!("edge weight {x} is not a nonnegative number")));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut d = vec![f64::INFINITY; n * n];
    for v in 0..n {
        d[v * n + v] = 0.0;
    }
    for (&(u, v), &x) in g.edges().iter().zip(w) {
        d[u * n + v] = d[u * n + v].min(x);
        d[v * n + u] = d[v * n + u].min(x);
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k];
            if dik == f64::INFINITY {
                continue;
            }
            for j in 0..n {
                let via = dik + d[k * n + j];
                if via < d[i * n + j] {
                    d[i * n + j] = via;
                }
            }
        }
    }
    Ok(MetricMatrix { n, d })
}

/// `w({u,v}) = (s(u) + s(v)) / 2` for every edge.
pub fn derived_edge_weights(g: &Graph, s: &[f64]) -> Vec<f64> {
    assert_eq!(s.len(), g.n(), "one weight per vertex");
    g.edges().iter().map(|&(u, v)| (s[u] + s[v]) / 2.0).collect()
}

/// The metric `d_s` induced by vertex weights.
pub fn vertex_weight_metric(g: &Graph, s: &[f64]) -> Result<MetricMatrix> {
    if s.len() != g.n() {
        return Err(Error::InvalidParams(format!("{} weights for {} vertices", s.len(), g.n())));
    }
    shortest_path_metric(g, &derived_edge_weights(g, s))
}

/// Edge mode: `Σ_E d_w / Σ_pairs d_w` for edge weights `w`.
/// Vertex mode: `Σ_V s / Σ_pairs d_s` for vertex weights `s`.
pub fn ratio_functional(g: &Graph, mode: Mode, weights: &[f64]) -> Result<f64> {
    let (num, d) = match mode {
        Mode::Edge => {
            let d = shortest_path_metric(g, weights)?;
            (g.edges().iter().map(|&(u, v)| d.get(u, v)).sum::<f64>(), d)
        }
        Mode::Vertex => (weights.iter().sum(), vertex_weight_metric(g, weights)?),
    };
    let den = d.pair_sum();
    if den <= 0.0 {
        return Err(Error::InvalidParams("all distances are zero".into()));
    }
    Ok(num / den)
}

/// `|E(A, V∖A)| / (|A| |V∖A|)`.
pub fn edge_cut_sparsity(g: &Graph, cut: &EdgeCut) -> Rational {
    let a = cut.a.len() as i64;
    Rational::new(cut.crossing_edges(g) as i64, a * (g.n() as i64 - a))
}

/// `|S| / (|A ∪ S| |B ∪ S|)`.
pub fn vertex_cut_sparsity(cut: &VertexCut) -> Rational {
    let s = cut.s.len() as i64;
    Rational::new(s, (cut.a.len() as i64 + s) * (cut.b.len() as i64 + s))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Cut {
    Edge(EdgeCut),
    Vertex(VertexCut),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSparsity {
    pub value: Rational,
    pub cut: Cut,
}

fn check_cap(g: &Graph) -> Result<()> {
    if g.n() > SPARSITY_MAX_N {
        return Err(Error::CapExceeded(format!(
            "exact sparsity limited to n <= {SPARSITY_MAX_N} (got {})",
            g.n()
        )));
    }
    Ok(())
}

fn bits(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

pub fn sparsity_exact(g: &Graph, mode: Mode) -> Result<ExactSparsity> {
    match mode {
        Mode::Edge => edge_sparsity_exact(g).map(|(value, c)| ExactSparsity { value, cut: Cut::Edge(c) }),
        Mode::Vertex => vertex_sparsity_exact(g).map(|(value, c)| ExactSparsity { value, cut: Cut::Vertex(c) }),
    }
}

/// Minimum edge sparsity over all nonempty proper `A`. Since `A` and its
/// complement give the same value, only sides containing vertex 0 are tried;
/// ties go to the lexicographically smallest side.
pub fn edge_sparsity_exact(g: &Graph) -> Result<(Rational, EdgeCut)> {
    check_cap(g)?;
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidParams("edge sparsity needs at least two vertices".into()));
    }
    let full = (1u32 << n) - 1;
    let mut best: Option<(Rational, u32)> = None;
    for mask in (1..full).step_by(2) {
        let crossing = g
            .edges()
            .iter()
            .filter(|&&(u, v)| (mask >> u ^ mask >> v) & 1 == 1)
            .count() as i64;
        let a = mask.count_ones() as i64;
        let value = Rational::new(crossing, a * (n as i64 - a));
        let better = match &best {
            None => true,
            Some((bv, bm)) => match value.cmp(bv) {
                Ordering::Less => true,
                Ordering::Equal => bits(mask, n) < bits(*bm, n),
                Ordering::Greater => false,
            },
        };
        if better {
            best = Some((value, mask));
        }
    }
    let (value, mask) = best.expect("n >= 2 has a proper cut");
    Ok((value, EdgeCut::new(bits(mask, n), n)?))
}

/// Minimum of `|S| / (|A ∪ S| |B ∪ S|)` over vertex cuts with nonempty
/// `A`, `B` and no `A`–`B` edge.
///
/// For fixed `S` the best split of the components of `G − S` is the most
/// balanced one, found by subset sum over component sizes. The component of
/// the smallest vertex outside `S` always goes to `A`. Ties between
/// different `S` go to the lexicographically smallest `(S, A)`.
pub fn vertex_sparsity_exact(g: &Graph) -> Result<(Rational, VertexCut)> {
    check_cap(g)?;
    let n = g.n();
    if g.is_complete() {
        return Err(Error::NoVertexCut);
    }
    let mut best: Option<(Rational, VertexCut)> = None;
    let mut removed = vec![false; n];
    for mask in 0u32..(1 << n) {
        let s_count = mask.count_ones() as usize;
        if s_count + 2 > n {
            continue;
        }
        for (v, r) in removed.iter_mut().enumerate() {
            *r = mask >> v & 1 == 1;
        }
        let comps = g.components_avoiding(&removed);
        if comps.len() < 2 {
            continue;
        }
        let Some(cut) = balanced_grouping(&comps, bits(mask, n)) else {
            continue;
        };
        let value = vertex_cut_sparsity(&cut);
        let better = match &best {
            None => true,
            Some((bv, bc)) => match value.cmp(bv) {
                Ordering::Less => true,
                Ordering::Equal => (&cut.s, &cut.a) < (&bc.s, &bc.a),
                Ordering::Greater => false,
            },
        };
        if better {
            best = Some((value, cut));
        }
    }
    best.ok_or(Error::NoVertexCut)
}

/// Splits components into nonempty `A`, `B` with `|A|` as close to half of
/// their total as possible; the first component is always in `A`, and among
/// equally balanced choices the smaller `|A|` wins.
pub(crate) fn balanced_grouping(comps: &[Vec<usize>], s: Vec<usize>) -> Option<VertexCut> {
    let total: usize = comps.iter().map(Vec::len).sum();
    let first = comps[0].len();
    // reach[i][x]: sum x reachable using components 1..i (on top of the first).
    let rest = &comps[1..];
    let mut reach = vec![vec![false; total + 1]];
    reach[0][first] = true;
    for c in rest {
        let prev = reach.last().unwrap();
        let mut next = prev.clone();
        for x in 0..=total - c.len() {
            if prev[x] {
                next[x + c.len()] = true;
            }
        }
        reach.push(next);
    }
    let last = reach.last().unwrap();
    let a = (1..total)
        .filter(|&x| last[x])
        .min_by_key(|&x| (x.abs_diff(total - x), x))?;
    let mut a_side = comps[0].clone();
    let mut b_side = Vec::new();
    let mut x = a;
    for i in (0..rest.len()).rev() {
        // reach[i + 1][x] holds; leave component i out whenever possible.
        if reach[i][x] {
            b_side.extend(&rest[i]);
        } else {
            a_side.extend(&rest[i]);
            x -= rest[i].len();
        }
    }
    debug_assert_eq!(x, first);
    Some(VertexCut::new(a_side, b_side, s))
}

/// Best threshold cut `{v : f(v) ≤ t}` of `f`, with the earliest threshold
/// winning ties.
pub fn line_to_cut_sweep(g: &Graph, f: &[f64]) -> Result<(EdgeCut, Rational)> {
    let n = g.n();
    if f.len() != n {
        return Err(Error::InvalidParams(format!("{} values for {n} vertices", f.len())));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&u, &v| f[u].total_cmp(&f[v]).then(u.cmp(&v)));
    if n < 2 || f[order[0]] == f[order[n - 1]] {
        return Err(Error::InvalidParams("f is constant".into()));
    }
    let mut best: Option<(Rational, EdgeCut)> = None;
    for i in 1..n {
        if f[order[i - 1]] == f[order[i]] {
            continue;
        }
        let cut = EdgeCut::new(order[..i].to_vec(), n)?;
        let value = edge_cut_sparsity(g, &cut);
        if best.as_ref().is_none_or(|(bv, _)| value < *bv) {
            best = Some((value, cut));
        }
    }
    let (value, cut) = best.expect("f is non-constant");
    Ok((cut, value))
}

/// `Σ_E |Δf| / Σ_pairs |Δf|`.
pub fn line_ratio(g: &Graph, f: &[f64]) -> f64 {
    let n = g.n();
    let num: f64 = g.edges().iter().map(|&(u, v)| (f[u] - f[v]).abs()).sum();
    let den: f64 = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .map(|(u, v)| (f[u] - f[v]).abs())
        .sum();
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, gnp_connected, grid, path};
    use proptest::prelude::*;

    #[test]
    fn metric_examples() {
        let d = shortest_path_metric(&path(3), &[1.0, 1.0]).unwrap();
        assert_eq!(d.rows(), vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]]);
        let d = shortest_path_metric(&complete(3), &[1.0; 3]).unwrap();
        assert_eq!(d.pair_sum(), 3.0);
        let d = shortest_path_metric(&path(3), &[3.0, 5.0]).unwrap();
        assert_eq!(d.get(0, 2), 8.0);
        let two = Graph::new(3, [(0, 1)]).unwrap();
        assert_eq!(shortest_path_metric(&two, &[1.0]).unwrap_err(), Error::Disconnected);
        assert!(shortest_path_metric(&path(3), &[1.0, -1.0]).is_err());
    }

    #[test]
    fn derived_weight_examples() {
        assert_eq!(derived_edge_weights(&path(3), &[2.0, 4.0, 6.0]), vec![3.0, 5.0]);
        assert_eq!(derived_edge_weights(&cycle(5), &[0.0; 5]), vec![0.0; 5]);
        assert_eq!(derived_edge_weights(&complete(3), &[1.0; 3]), vec![1.0; 3]);
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(ratio_functional(&path(3), Mode::Edge, &[1.0, 1.0]).unwrap(), 0.5);
        assert_eq!(ratio_functional(&complete(3), Mode::Edge, &[1.0; 3]).unwrap(), 1.0);
        assert_eq!(ratio_functional(&path(3), Mode::Vertex, &[1.0; 3]).unwrap(), 0.75);
        assert!(ratio_functional(&path(3), Mode::Edge, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn sparsity_examples() {
        let (v, c) = edge_sparsity_exact(&path(3)).unwrap();
        assert_eq!((v, c.a), (Rational::new(1, 2), vec![0]));
        assert_eq!(edge_sparsity_exact(&complete(5)).unwrap().0, Rational::from(1));
        let (v, c) = vertex_sparsity_exact(&path(3)).unwrap();
        assert_eq!(v, Rational::new(1, 4));
        assert_eq!(c, VertexCut::new(vec![0], vec![2], vec![1]));
        assert_eq!(vertex_sparsity_exact(&complete(4)).unwrap_err(), Error::NoVertexCut);
        assert!(matches!(edge_sparsity_exact(&path(21)), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn disconnected_vertex_sparsity_is_zero() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let (v, c) = vertex_sparsity_exact(&g).unwrap();
        assert_eq!(v, Rational::from(0));
        assert_eq!(c, VertexCut::new(vec![0, 1], vec![2, 3], vec![]));
    }

    #[test]
    fn sweep_examples() {
        let (c, v) = line_to_cut_sweep(&path(3), &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!((c.a, v), (vec![0], Rational::new(1, 2)));
        let (c, v) = line_to_cut_sweep(&complete(4), &[0.0, 0.0, 1.0, 1.0]).unwrap();
        assert_eq!((c.a, v), (vec![0, 1], Rational::from(1)));
        let (c, v) = line_to_cut_sweep(&cycle(4), &[0.0, 0.0, 1.0, 1.0]).unwrap();
        assert_eq!((c.a, v), (vec![0, 1], Rational::new(1, 2)));
        assert!(line_to_cut_sweep(&path(3), &[1.0; 3]).is_err());
    }

    /// Independent oracle: recount every balanced split by brute force over
    /// all (S, A) assignments.
    fn vspars_brute(g: &Graph) -> Rational {
        let n = g.n();
        let mut best: Option<Rational> = None;
        let mut label = vec![0u8; n];
        let total = 3usize.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            for l in label.iter_mut() {
                *l = (c % 3) as u8;
                c /= 3;
            }
            let count = |t| label.iter().filter(|&&l| l == t).count() as i64;
            let (a, b, s) = (count(0), count(1), count(2));
            if a == 0 || b == 0 {
                continue;
            }
            if g.edges().iter().any(|&(u, v)| label[u] + label[v] == 1) {
                continue;
            }
            let value = Rational::new(s, (a + s) * (b + s));
            if best.is_none_or(|x| value < x) {
                best = Some(value);
            }
        }
        best.unwrap()
    }

    #[test]
    fn vertex_sparsity_matches_brute_force() {
        for seed in 0..12 {
            let g = gnp_connected(7, 0.35, seed).unwrap();
            if g.is_complete() {
                continue;
            }
            let (v, cut) = vertex_sparsity_exact(&g).unwrap();
            assert_eq!(v, vspars_brute(&g), "seed {seed}");
            assert!(cut.crossing_edge(&g).is_none());
            cut.check_partition(g.n()).unwrap();
        }
        assert_eq!(vertex_sparsity_exact(&grid(2, 3)).unwrap().0, vspars_brute(&grid(2, 3)));
    }

    proptest! {
        #[test]
        fn sweep_beats_line_ratio(seed in 0u64..1000, vals in proptest::collection::vec(-5i32..6, 8)) {
            let g = gnp_connected(8, 0.4, seed).unwrap();
            let f: Vec<f64> = vals.iter().map(|&x| x as f64).collect();
            prop_assume!(f.iter().any(|&x| x != f[0]));
            let (_, v) = line_to_cut_sweep(&g, &f).unwrap();
            let v = *v.numer() as f64 / *v.denom() as f64;
            prop_assert!(v <= line_ratio(&g, &f) + 1e-12);
        }

        #[test]
        fn metrics_are_metrics(seed in 0u64..1000, w in proptest::collection::vec(0u32..10, 28)) {
            let g = gnp_connected(8, 0.5, seed).unwrap();
            let w: Vec<f64> = w[..g.m().min(28)].iter().map(|&x| x as f64).chain(std::iter::repeat(1.0)).take(g.m()).collect();
            let d = shortest_path_metric(&g, &w).unwrap();
            prop_assert!(d.triangle_violation(1e-9).is_none());
        }
    }
}
