//! Edge and vertex congestion of small graphs through multicommodity-flow
//! linear programs, and decomposition of the optimal flows into paths.
//!
//! One commodity per unordered pair `{u, v}`, oriented from `u < v`, needs
//! one unit routed. The LP aggregates the commodities that share a source:
//! for every `u` a single flow leaves `u` and delivers one unit to each
//! `v > u`. Loads are linear in the flows, so this has the same optimum as
//! the per-pair program, and the per-pair flows are recovered afterwards by
//! splitting each aggregated flow into paths.
//!
//! Vertex loads use `½ (inflow + outflow)` summed over commodities. On a path
//! this is 1 at interior vertices and ½ at the two ends; cycles only add load,
//! so the optimum matches the path-based definition.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::lp::{lp_solve, LpProblem, LpStatus, Relation, Sense};
use crate::{Error, Result};

/// Tolerance on conservation and demand checks.
pub const FLOW_TOL: f64 = 1e-6;
/// Arc flows at or below this are treated as zero during decomposition.
const ARC_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Edge,
    Vertex,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Edge => "edge",
            Mode::Vertex => "vertex",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge" => Ok(Mode::Edge),
            "vertex" => Ok(Mode::Vertex),
            _ => Err(Error::InvalidParams(format!("mode must be edge or vertex, got {s:?}"))),
        }
    }
}

/// Size limits for the dense LP.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_n: usize,
    pub max_m: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_n: 12, max_m: 30 }
    }
}

impl Caps {
    pub const UNLIMITED: Caps = Caps { max_n: usize::MAX, max_m: usize::MAX };

    pub fn check(&self, g: &Graph) -> Result<()> {
        if g.n() > self.max_n || g.m() > self.max_m {
            return Err(Error::CapExceeded(format!(
                "flow LP limited to n <= {}, m <= {} (got n = {}, m = {})",
                self.max_n,
                self.max_m,
                g.n(),
                g.m()
            )));
        }
        Ok(())
    }
}

/// Directed arc flows of the commodity `{source, sink}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Commodity {
    pub source: usize,
    pub sink: usize,
    /// `(from, to, amount)` with `{from, to}` an edge; sorted, positive.
    pub flow: Vec<(usize, usize, f64)>,
}

impl Commodity {
    fn net_out(&self, n: usize) -> Vec<f64> {
        let mut net = vec![0.0; n];
        for &(a, b, x) in &self.flow {
            net[a] += x;
            net[b] -= x;
        }
        net
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowSolution {
    pub mode: Mode,
    pub congestion: f64,
    pub commodities: Vec<Commodity>,
    /// Optimal dual weights: one per edge in edge mode, one per vertex in
    /// vertex mode. They sum to 1.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub dual_weights: Vec<f64>,
}

impl FlowSolution {
    /// Total two-direction flow on each edge, indexed like [`Graph::edges`].
    pub fn edge_loads(&self, g: &Graph) -> Vec<f64> {
        let mut load = vec![0.0; g.m()];
        for c in &self.commodities {
            for &(a, b, x) in &c.flow {
                load[g.edge_index(a, b).expect("flow on a non-edge")] += x;
            }
        }
        load
    }

    /// `½ Σ (inflow + outflow)` at each vertex.
    pub fn vertex_loads(&self, n: usize) -> Vec<f64> {
        let mut load = vec![0.0; n];
        for c in &self.commodities {
            for &(a, b, x) in &c.flow {
                load[a] += x / 2.0;
                load[b] += x / 2.0;
            }
        }
        load
    }
}

/// Paths of one commodity with their weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommodityPaths {
    pub source: usize,
    pub sink: usize,
    pub paths: Vec<(Vec<usize>, f64)>,
}

impl CommodityPaths {
    pub fn total(&self) -> f64 {
        self.paths.iter().map(|p| p.1).sum()
    }
}

/// A multicommodity flow given by weights on paths, one entry per unordered
/// pair in lexicographic order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathFlow {
    pub n: usize,
    pub commodities: Vec<CommodityPaths>,
}

impl PathFlow {
    /// Path-based vertex loads: 1 for interior visits, ½ for the two ends.
    pub fn vertex_loads(&self) -> Vec<f64> {
        let mut load = vec![0.0; self.n];
        for c in &self.commodities {
            for (p, w) in &c.paths {
                for (i, &v) in p.iter().enumerate() {
                    load[v] += if i == 0 || i + 1 == p.len() { w / 2.0 } else { *w };
                }
            }
        }
        load
    }

    pub fn edge_loads(&self, g: &Graph) -> Vec<f64> {
        let mut load = vec![0.0; g.m()];
        for c in &self.commodities {
            for (p, w) in &c.paths {
                for s in p.windows(2) {
                    load[g.edge_index(s[0], s[1]).expect("path uses a non-edge")] += w;
                }
            }
        }
        load
    }

    /// Checks that every pair is present, every path is a simple path of
    /// `g` between the commodity's ends, and weights sum to 1.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let n = g.n();
        if self.n != n || self.commodities.len() != n * (n - 1) / 2 {
            return Err(Error::Contract(format!(
                "path flow covers {} commodities, expected {}",
                self.commodities.len(),
                n * (n - 1) / 2
            )));
        }
        let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        for (c, (u, v)) in self.commodities.iter().zip(pairs) {
            if (c.source, c.sink) != (u, v) {
                return Err(Error::Contract(format!("missing commodity {{{u},{v}}}")));
            }
            for (p, w) in &c.paths {
                let mut seen = vec![false; n];
                let simple = p.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true));
                let joined = p.first() == Some(&u) && p.last() == Some(&v);
                let along = p.windows(2).all(|s| g.has_edge(s[0], s[1]));
                if !(simple && joined && along && *w > 0.0) {
                    return Err(Error::Contract(format!("invalid path {p:?} for commodity {{{u},{v}}}")));
                }
            }
            if (c.total() - 1.0).abs() > FLOW_TOL {
                return Err(Error::Contract(format!(
                    "commodity {{{u},{v}}} carries {} instead of 1",
                    c.total()
                )));
            }
        }
        Ok(())
    }
}

pub fn edge_congestion(g: &Graph) -> Result<FlowSolution> {
    congestion(g, Mode::Edge, Caps::default())
}

pub fn vertex_congestion(g: &Graph) -> Result<FlowSolution> {
    congestion(g, Mode::Vertex, Caps::default())
}

/// Solves the congestion LP of `g`. Disconnected graphs have unbounded
/// congestion and yield [`Error::Disconnected`].
pub fn congestion(g: &Graph, mode: Mode, caps: Caps) -> Result<FlowSolution> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidParams("congestion needs at least two vertices".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    caps.check(g)?;
    let m = g.m();
    let sources = n - 1;
    let arcs = 2 * m;
    // Variable layout: source u, arc a -> u * arcs + a; arc 2e is the edge in
    // its stored direction, 2e + 1 reversed. λ is last.
    let lambda = sources * arcs;
    let arc = |e: usize, rev: bool| {
        let (a, b) = g.edges()[e];
        if rev { (b, a) } else { (a, b) }
    };
    let mut objective = vec![0.0; lambda + 1];
    objective[lambda] = 1.0;
    let mut lp = LpProblem::new(Sense::Min, objective);
    for u in 0..sources {
        for v in (0..n).filter(|&v| v != u) {
            let mut terms = Vec::new();
            for e in 0..m {
                for rev in [false, true] {
                    let (a, b) = arc(e, rev);
                    let col = u * arcs + 2 * e + usize::from(rev);
                    if b == v {
                        terms.push((col, 1.0));
                    } else if a == v {
                        terms.push((col, -1.0));
                    }
                }
            }
            let demand = if v > u { 1.0 } else { 0.0 };
            lp.add_sparse(&terms, Relation::Eq, demand);
        }
    }
    let first_load_row = lp.constraints.len();
    match mode {
        Mode::Edge => {
            for e in 0..m {
                let mut terms: Vec<_> = (0..sources)
                    .flat_map(|u| [(u * arcs + 2 * e, 1.0), (u * arcs + 2 * e + 1, 1.0)])
                    .collect();
                terms.push((lambda, -1.0));
                lp.add_sparse(&terms, Relation::Le, 0.0);
            }
        }
        Mode::Vertex => {
            for v in 0..n {
                let mut terms = Vec::new();
                for e in 0..m {
                    let (a, b) = g.edges()[e];
                    if a == v || b == v {
                        for u in 0..sources {
                            terms.push((u * arcs + 2 * e, 0.5));
                            terms.push((u * arcs + 2 * e + 1, 0.5));
                        }
                    }
                }
                terms.push((lambda, -1.0));
                lp.add_sparse(&terms, Relation::Le, 0.0);
            }
        }
    }
    let sol = lp_solve(&lp);
    if sol.status != LpStatus::Optimal {
        return Err(Error::Lp(format!("congestion LP ended {}", sol.status)));
    }
    let dual_weights: Vec<f64> = sol.duals[first_load_row..].iter().map(|y| (-y).max(0.0)).collect();

    let mut commodities = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..sources {
        let mut flow = BTreeMap::new();
        for e in 0..m {
            for rev in [false, true] {
                let x = sol.x[u * arcs + 2 * e + usize::from(rev)];
                if x > ARC_EPS {
                    flow.insert(arc(e, rev), x);
                }
            }
        }
        let demands: Vec<_> = (u + 1..n).map(|v| (v, 1.0)).collect();
        let paths = split_into_paths(n, &mut flow, u, &demands)?;
        for (v, ps) in paths {
            let mut per_pair: BTreeMap<(usize, usize), f64> = BTreeMap::new();
            for (p, w) in &ps {
                for s in p.windows(2) {
                    *per_pair.entry((s[0], s[1])).or_default() += w;
                }
            }
            commodities.push(Commodity {
                source: u,
                sink: v,
                flow: per_pair.into_iter().map(|((a, b), x)| (a, b, x)).collect(),
            });
        }
    }
    Ok(FlowSolution { mode, congestion: sol.objective, commodities, dual_weights })
}

type WeightedPaths = Vec<(Vec<usize>, f64)>;

/// Peels paths from `source` off `flow` until every sink has received its
/// demand. Leftover circulation stays in `flow` and is dropped by callers.
/// Returns the paths for each sink in the order of `demands`.
fn split_into_paths(
    n: usize,
    flow: &mut BTreeMap<(usize, usize), f64>,
    source: usize,
    demands: &[(usize, f64)],
) -> Result<Vec<(usize, WeightedPaths)>> {
    let mut out = Vec::with_capacity(demands.len());
    for &(sink, demand) in demands {
        let mut remaining = demand;
        let mut paths: Vec<(Vec<usize>, f64)> = Vec::new();
        while remaining > ARC_EPS {
            let Some(path) = bfs_path(n, flow, source, sink) else {
                if remaining > FLOW_TOL {
                    return Err(Error::Contract(format!(
                        "flow from {source} reaches {sink} with {} short",
                        remaining
                    )));
                }
                break;
            };
            let bottleneck = path
                .windows(2)
                .map(|s| flow[&(s[0], s[1])])
                .fold(remaining, f64::min);
            for s in path.windows(2) {
                let x = flow.get_mut(&(s[0], s[1])).unwrap();
                *x -= bottleneck;
                if *x <= ARC_EPS {
                    flow.remove(&(s[0], s[1]));
                }
            }
            remaining -= bottleneck;
            match paths.iter_mut().find(|(p, _)| *p == path) {
                Some(entry) => entry.1 += bottleneck,
                None => paths.push((path, bottleneck)),
            }
        }
        // Rescale away the sub-tolerance shortfall so totals are exactly the demand.
        let total: f64 = paths.iter().map(|p| p.1).sum();
        if total > 0.0 {
            for p in &mut paths {
                p.1 *= demand / total;
            }
        }
        out.push((sink, paths));
    }
    Ok(out)
}

/// Shortest path from `s` to `t` along arcs with positive flow.
fn bfs_path(n: usize, flow: &BTreeMap<(usize, usize), f64>, s: usize, t: usize) -> Option<Vec<usize>> {
    let mut out_arcs = vec![Vec::new(); n];
    for (&(a, b), &x) in flow {
        if x > ARC_EPS {
            out_arcs[a].push(b);
        }
    }
    let mut prev = vec![usize::MAX; n];
    prev[s] = s;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        if v == t {
            let mut path = vec![t];
            let mut x = t;
            while x != s {
                x = prev[x];
                path.push(x);
            }
            path.reverse();
            return Some(path);
        }
        for &w in &out_arcs[v] {
            if prev[w] == usize::MAX {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Splits the per-pair flows of `flows` into weighted simple paths,
/// discarding circulations.
pub fn decompose_to_paths(g: &Graph, flows: &FlowSolution) -> Result<PathFlow> {
    let n = g.n();
    let mut commodities = Vec::with_capacity(flows.commodities.len());
    for c in &flows.commodities {
        if c.source >= n || c.sink >= n || c.source == c.sink {
            return Err(Error::Contract(format!("bad commodity ({}, {})", c.source, c.sink)));
        }
        for &(a, b, x) in &c.flow {
            if !g.has_edge(a, b) || x < -FLOW_TOL {
                return Err(Error::Contract(format!("invalid arc flow {a}->{b} = {x}")));
            }
        }
        let net = c.net_out(n);
        for (v, &x) in net.iter().enumerate() {
            let want = if v == c.source {
                1.0
            } else if v == c.sink {
                -1.0
            } else {
                0.0
            };
            if (x - want).abs() > FLOW_TOL {
                return Err(Error::Contract(format!(
                    "commodity ({}, {}) violates conservation at vertex {v}: net outflow {x}",
                    c.source, c.sink
                )));
            }
        }
        let mut flow: BTreeMap<_, _> = c
            .flow
            .iter()
            .filter(|f| f.2 > ARC_EPS)
            .map(|&(a, b, x)| ((a, b), x))
            .collect();
        let (_, paths) = split_into_paths(n, &mut flow, c.source, &[(c.sink, 1.0)])?
            .pop()
            .expect("one sink");
        commodities.push(CommodityPaths { source: c.source, sink: c.sink, paths });
    }
    commodities.sort_by_key(|c| (c.source, c.sink));
    Ok(PathFlow { n, commodities })
}


#[cfg(test)]
mod dual_tests {
    use super::*;
    use crate::graph::gnp_connected;
    use crate::metrics::ratio_functional;

    #[test]
    fn dual_weights_attain_inverse_congestion() {
        for seed in 0..6 {
            let g = gnp_connected(8, 0.4, seed).unwrap();
            let sol = edge_congestion(&g).unwrap();
            let r = ratio_functional(&g, Mode::Edge, &sol.dual_weights).unwrap();
            assert!((r - 1.0 / sol.congestion).abs() < 1e-6, "seed {seed}");
            let ones = ratio_functional(&g, Mode::Edge, &vec![1.0; g.m()]).unwrap();
            assert!(ones >= 1.0 / sol.congestion - 1e-6);
        }
    }
}
