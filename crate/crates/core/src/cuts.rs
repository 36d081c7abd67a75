//! Vertex cuts by max-flow, the threshold sweep over a line embedding, and
//! the recursive separator pipeline built from them.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::embedding::{best_embedding, default_trials};
use crate::graph::{balance_limit, check_separator, EdgeCut, Graph, VertexCut};
use crate::metrics::{
    balanced_grouping, edge_sparsity_exact, vertex_cut_sparsity, vertex_weight_metric,
};
use crate::{seeds, Error, Rational, Result};

/// Lipschitz tolerance accepted by [`fhl_sweep`].
pub const LIPSCHITZ_TOL: f64 = 1e-9;
/// Enumeration cap of [`min_separator_exact`].
pub const EXACT_SEPARATOR_MAX_N: usize = 16;

struct Arc {
    to: usize,
    cap: usize,
    rev: usize,
}

/// Residual network with unit-capacity augmenting by BFS.
struct FlowNet {
    adj: Vec<Vec<Arc>>,
}

impl FlowNet {
    fn new(nodes: usize) -> Self {
        FlowNet { adj: (0..nodes).map(|_| Vec::new()).collect() }
    }

    fn add(&mut self, a: usize, b: usize, cap: usize) {
        let (ra, rb) = (self.adj[b].len(), self.adj[a].len());
        self.adj[a].push(Arc { to: b, cap, rev: ra });
        self.adj[b].push(Arc { to: a, cap: 0, rev: rb });
    }

    /// Parent pointers `(node, arc index)` of a BFS tree over residual arcs.
    fn bfs(&self, s: usize) -> Vec<Option<(usize, usize)>> {
        let mut parent = vec![None; self.adj.len()];
        parent[s] = Some((s, usize::MAX));
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for (i, a) in self.adj[v].iter().enumerate() {
                if a.cap > 0 && parent[a.to].is_none() {
                    parent[a.to] = Some((v, i));
                    queue.push_back(a.to);
                }
            }
        }
        parent
    }

    fn max_flow(&mut self, s: usize, t: usize) -> usize {
        let mut flow = 0;
        loop {
            let parent = self.bfs(s);
            if parent[t].is_none() {
                return flow;
            }
            let mut bottleneck = usize::MAX;
            let mut v = t;
            while v != s {
                let (u, i) = parent[v].unwrap();
                bottleneck = bottleneck.min(self.adj[u][i].cap);
                v = u;
            }
            let mut v = t;
            while v != s {
                let (u, i) = parent[v].unwrap();
                self.adj[u][i].cap -= bottleneck;
                let r = self.adj[u][i].rev;
                self.adj[v][r].cap += bottleneck;
                v = u;
            }
            flow += bottleneck;
        }
    }
}

/// A minimum vertex cut together with as many vertex-disjoint paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MengerCertificate {
    pub cut: Vec<usize>,
    pub paths: Vec<Vec<usize>>,
}

impl MengerCertificate {
    /// Checks the certificate against `g`, `x`, `y`: the cut separates,
    /// paths are disjoint `X`–`Y` paths of `g`, one per cut vertex, each
    /// meeting the cut once.
    pub fn verify(&self, g: &Graph, x: &[usize], y: &[usize]) -> Result<()> {
        let n = g.n();
        let fail = |m: String| Err(Error::Contract(m));
        if self.paths.len() != self.cut.len() {
            return fail(format!("{} paths for a cut of size {}", self.paths.len(), self.cut.len()));
        }
        let mut in_cut = vec![false; n];
        for &v in &self.cut {
            in_cut[v] = true;
        }
        let mut used = vec![false; n];
        for p in &self.paths {
            let ok_ends = p.first().is_some_and(|v| x.contains(v)) && p.last().is_some_and(|v| y.contains(v));
            let ok_edges = p.windows(2).all(|s| g.has_edge(s[0], s[1]));
            let hits = p.iter().filter(|&&v| in_cut[v]).count();
            if !ok_ends || !ok_edges || hits != 1 {
                return fail(format!("path {p:?} is not a valid certificate path"));
            }
            for &v in p {
                if std::mem::replace(&mut used[v], true) {
                    return fail(format!("paths share vertex {v}"));
                }
            }
        }
        // Separation: no X–Y path avoids the cut.
        let mut seen = in_cut.clone();
        let mut queue: VecDeque<usize> = x.iter().copied().filter(|&v| !in_cut[v]).collect();
        for &v in &queue {
            seen[v] = true;
        }
        while let Some(v) = queue.pop_front() {
            if y.contains(&v) {
                return fail(format!("vertex {v} of Y is reachable from X"));
            }
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        Ok(())
    }
}

/// Minimum set of vertices meeting every `X`–`Y` path (vertices of `X`
/// and `Y` may be cut), via node-split max-flow. The cut is the one closest
/// to `X`.
pub fn min_vertex_cut(g: &Graph, x: &[usize], y: &[usize]) -> Result<MengerCertificate> {
    let n = g.n();
    if x.is_empty() || y.is_empty() {
        return Err(Error::InvalidParams("X and Y must be nonempty".into()));
    }
    let mut side = vec![0u8; n];
    for (set, tag) in [(x, 1u8), (y, 2u8)] {
        for &v in set {
            if v >= n {
                return Err(Error::InvalidParams(format!("vertex {v} out of range")));
            }
            side[v] |= tag;
        }
    }
    if let Some(v) = side.iter().position(|&t| t == 3) {
        return Err(Error::Contract(format!("vertex {v} is in both X and Y")));
    }
    let inf = n + 1;
    let (src, sink) = (2 * n, 2 * n + 1);
    let mut net = FlowNet::new(2 * n + 2);
    for v in 0..n {
        net.add(2 * v, 2 * v + 1, 1);
    }
    for &(u, v) in g.edges() {
        net.add(2 * u + 1, 2 * v, inf);
        net.add(2 * v + 1, 2 * u, inf);
    }
    for (v, &t) in side.iter().enumerate() {
        match t {
            1 => net.add(src, 2 * v, inf),
            2 => net.add(2 * v + 1, sink, inf),
            _ => {}
        }
    }
    net.max_flow(src, sink);

    let reach = net.bfs(src);
    let cut: Vec<usize> = (0..n)
        .filter(|&v| reach[2 * v].is_some() && reach[2 * v + 1].is_none())
        .collect();

    // Each vertex carries at most one unit, so following flow from the
    // source traces disjoint paths.
    let flow_on = |net: &FlowNet, a: usize, i: usize| {
        let arc = &net.adj[a][i];
        net.adj[arc.to][arc.rev].cap
    };
    let mut paths = Vec::new();
    for i in 0..net.adj[src].len() {
        if flow_on(&net, src, i) == 0 {
            continue;
        }
        let mut v = net.adj[src][i].to / 2;
        let mut path = vec![v];
        loop {
            let out = 2 * v + 1;
            let next = (0..net.adj[out].len())
                .find(|&j| net.adj[out][j].to != 2 * v && flow_on(&net, out, j) > 0 && net.adj[out][j].cap < inf)
                .map(|j| net.adj[out][j].to)
                .expect("flow leaves every used vertex");
            if next == sink {
                break;
            }
            v = next / 2;
            path.push(v);
        }
        paths.push(path);
    }
    paths.sort();
    Ok(MengerCertificate { cut, paths })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepStep {
    /// Number of vertices on the low side of the threshold.
    pub i: usize,
    pub cut: VertexCut,
    #[serde(serialize_with = "ser_ratio")]
    pub sparsity: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub best: SweepStep,
    pub steps: Vec<SweepStep>,
    /// `Σ s / Σ_pairs |Δf|`, the guaranteed upper bound on the sparsity.
    pub bound: f64,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Sweeps the thresholds of `f` and returns the sparsest of the minimum
/// vertex cuts between `{v_1..v_i}` and `{v_{i+1}..v_n}`.
///
/// `f` must be non-constant and 1-Lipschitz for the metric induced by the
/// vertex weights `s`. The minimum is taken over `(sparsity, i)`, except
/// that a cut with both sides nonempty is preferred over an equally sparse
/// one with an empty side.
pub fn fhl_sweep(g: &Graph, s: &[f64], f: &[f64]) -> Result<SweepResult> {
    let n = g.n();
    if f.len() != n || s.len() != n {
        return Err(Error::InvalidParams("one value of s and f per vertex".into()));
    }
    if f.iter().all(|&v| v == f[0]) {
        return Err(Error::InvalidParams("f is constant".into()));
    }
    let d = vertex_weight_metric(g, s)?;
    for u in 0..n {
        for v in u + 1..n {
            let gap = (f[u] - f[v]).abs() - d.get(u, v);
            if gap > LIPSCHITZ_TOL {
                return Err(Error::Contract(format!(
                    "f is not 1-Lipschitz: |f({u}) - f({v})| exceeds d_s({u},{v}) by {gap:e}"
                )));
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&u, &v| f[u].total_cmp(&f[v]).then(u.cmp(&v)));

    let steps = (1..n)
        .into_par_iter()
        .map(|i| {
            let (x, y) = order.split_at(i);
            let cert = min_vertex_cut(g, x, y)?;
            let mut in_cut = vec![false; n];
            for &v in &cert.cut {
                in_cut[v] = true;
            }
            let a = x.iter().copied().filter(|&v| !in_cut[v]).collect();
            let b = y.iter().copied().filter(|&v| !in_cut[v]).collect();
            let cut = VertexCut::new(a, b, cert.cut);
            let sparsity = vertex_cut_sparsity(&cut);
            Ok(SweepStep { i, cut, sparsity })
        })
        .collect::<Result<Vec<_>>>()?;

    let min = steps.iter().map(|st| st.sparsity).min().expect("n >= 2");
    let best = steps
        .iter()
        .filter(|st| st.sparsity == min)
        .find(|st| !st.cut.a.is_empty() && !st.cut.b.is_empty())
        .or_else(|| steps.iter().find(|st| st.sparsity == min))
        .expect("minimum attained")
        .clone();
    let bound = s.iter().sum::<f64>() / crate::embedding::pair_spread(f);
    Ok(SweepResult { best, steps, bound })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEntry {
    /// Vertices of the component that was split.
    pub size: usize,
    /// Vertices moved into the separator.
    pub removed: usize,
    pub sparsity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparatorResult {
    #[serde(flatten)]
    pub cut: VertexCut,
    pub sparsity_trace: Vec<TraceEntry>,
}

impl SeparatorResult {
    pub fn size(&self) -> usize {
        self.cut.s.len()
    }

    /// `(|A|, |B|, n)`.
    pub fn balance(&self) -> (usize, usize, usize) {
        let c = &self.cut;
        (c.a.len(), c.b.len(), c.a.len() + c.b.len() + c.s.len())
    }
}

/// Hop distance from vertex 0; used when every sampled embedding of a
/// component is constant.
fn bfs_levels(h: &Graph) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; h.n()];
    dist[0] = 0.0;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for &w in h.neighbors(v) {
            if dist[w] == f64::INFINITY {
                dist[w] = dist[v] + 1.0;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Splits the components left after removing `s` into the two sides,
/// larger side first.
fn assemble(comps: &[Vec<usize>], s: Vec<usize>) -> VertexCut {
    let cut = match comps.len() {
        0 => VertexCut::new(vec![], vec![], s),
        1 => VertexCut::new(comps[0].clone(), vec![], s),
        _ => balanced_grouping(comps, s).expect("two or more components split"),
    };
    if cut.b.len() > cut.a.len() {
        VertexCut::new(cut.b, cut.a, cut.s)
    } else {
        cut
    }
}

/// Balanced separator by repeated sweeps: while a component of `G − S` has
/// more than `⌈2n/3⌉` vertices, embed it by the random line embedding of
/// its unit-weight metric, sweep, and add the sweep's cut to `S`.
pub fn find_separator(g: &Graph, seed: u64) -> Result<SeparatorResult> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidParams("separator needs at least two vertices".into()));
    }
    let limit = balance_limit(n);
    let mut removed = vec![false; n];
    let mut trace = Vec::new();
    for round in 0u64.. {
        let comps = g.components_avoiding(&removed);
        let Some(big) = comps.iter().filter(|c| c.len() > limit).max_by_key(|c| (c.len(), std::cmp::Reverse(c[0])))
        else {
            let s: Vec<usize> = (0..n).filter(|&v| removed[v]).collect();
            let cut = assemble(&comps, s);
            let check = check_separator(g, &cut)?;
            if !check.valid {
                return Err(Error::Contract(format!(
                    "assembled separator is invalid: {}",
                    check.reason.unwrap_or_default()
                )));
            }
            return Ok(SeparatorResult { cut, sparsity_trace: trace });
        };
        let h = g.induced(big);
        let ones = vec![1.0; h.n()];
        let d = vertex_weight_metric(&h, &ones)?;
        let emb = best_embedding(&d, default_trials(h.n()), seeds::derive(seed, round))?;
        let f = if emb.non_constant { emb.embedding.f } else { bfs_levels(&h) };
        let sweep = fhl_sweep(&h, &ones, &f)?;
        for &v in &sweep.best.cut.s {
            removed[big[v]] = true;
        }
        trace.push(TraceEntry {
            size: h.n(),
            removed: sweep.best.cut.s.len(),
            sparsity: ratio_f64(sweep.best.sparsity),
        });
    }
    unreachable!("every round removes at least one vertex")
}

/// Smallest separator by enumeration of `S` in order of size, then
/// lexicographically.
pub fn min_separator_exact(g: &Graph) -> Result<(usize, VertexCut)> {
    let n = g.n();
    if n > EXACT_SEPARATOR_MAX_N {
        return Err(Error::CapExceeded(format!(
            "exact separator limited to n <= {EXACT_SEPARATOR_MAX_N} (got {n})"
        )));
    }
    let limit = balance_limit(n);
    let mut removed = vec![false; n];
    for k in 0..=n {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            removed.iter_mut().for_each(|r| *r = false);
            for &v in &combo {
                removed[v] = true;
            }
            let comps = g.components_avoiding(&removed);
            if comps.iter().all(|c| c.len() <= limit) {
                let cut = assemble(&comps, combo.clone());
                if cut.a.len() <= limit && cut.b.len() <= limit {
                    return Ok((k, cut));
                }
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }
    unreachable!("S = V is always a separator")
}

/// Advances `c` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeelStep {
    /// Vertices left before this step.
    pub remaining: usize,
    pub peeled: Vec<usize>,
    #[serde(serialize_with = "ser_ratio")]
    pub sparsity: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalancedEdgeCut {
    pub cut: EdgeCut,
    pub crossing_edges: usize,
    /// `β n²`.
    #[serde(serialize_with = "ser_ratio")]
    pub bound: Rational,
    pub trail: Vec<PeelStep>,
    /// Steps whose remaining subgraph had edge sparsity above β.
    pub violations: Vec<String>,
}

/// Balanced edge cut by peeling: while `|A| < n/3`, take the exact sparsest
/// cut of `G[V ∖ A]` and add its smaller side to `A`. The result satisfies
/// `n/3 ≤ |A| < 2n/3`. Steps whose subgraph has sparsity above `beta`
/// (the hypothesis that bounds the cut size) are listed in `violations`.
pub fn balanced_edge_cut(g: &Graph, beta: Rational) -> Result<BalancedEdgeCut> {
    let n = g.n();
    if n < 3 {
        return Err(Error::InvalidParams("balanced edge cut needs n >= 3".into()));
    }
    if beta <= Rational::from(0) {
        return Err(Error::InvalidParams("beta must be positive".into()));
    }
    let mut in_a = vec![false; n];
    let mut size = 0;
    let mut trail = Vec::new();
    let mut violations = Vec::new();
    while 3 * size < n {
        let rest: Vec<usize> = (0..n).filter(|&v| !in_a[v]).collect();
        let h = g.induced(&rest);
        let (sparsity, cut) = edge_sparsity_exact(&h)?;
        let side = if 2 * cut.a.len() <= h.n() {
            cut.a
        } else {
            let inside = cut.membership(h.n());
            (0..h.n()).filter(|&v| !inside[v]).collect()
        };
        if sparsity > beta {
            violations.push(format!(
                "subgraph on {} vertices has edge sparsity {sparsity} > {beta}",
                h.n()
            ));
        }
        let peeled: Vec<usize> = side.iter().map(|&v| rest[v]).collect();
        for &v in &peeled {
            in_a[v] = true;
        }
        size += peeled.len();
        trail.push(PeelStep { remaining: rest.len(), peeled, sparsity });
    }
    let cut = EdgeCut::new((0..n).filter(|&v| in_a[v]).collect(), n)?;
    Ok(BalancedEdgeCut {
        crossing_edges: cut.crossing_edges(g),
        cut,
        bound: beta * Rational::from((n * n) as i64),
        trail,
        violations,
    })
}
