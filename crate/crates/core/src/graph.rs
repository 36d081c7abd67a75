//! Simple undirected graphs on dense vertex ids, generators for the test
//! families, and separator checking.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{seeds, Error, Result};

/// Simple undirected graph on vertices `0..n`.
///
/// Edges are stored normalized (`u < v`) and sorted, so two graphs with the
/// same edge set compare equal regardless of input order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParams(format!(
                    "edge {{{u},{v}}} has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidParams(format!("self-loop at vertex {u}")));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidParams(format!(
                "duplicate edge {{{},{}}}",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_sorted(n, list))
    }

    fn from_sorted(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Index of edge `{u, v}` in [`Graph::edges`].
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn is_complete(&self) -> bool {
        self.m() == self.n * self.n.saturating_sub(1) / 2
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_avoiding(&vec![false; self.n])
    }

    /// Components of the graph with the `removed` vertices deleted.
    pub fn components_avoiding(&self, removed: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = removed.to_vec();
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            stack.push(start);
            let mut comp = Vec::new();
            while let Some(x) = stack.pop() {
                comp.push(x);
                for &y in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Subgraph induced by `vertices`; vertex `i` of the result is
    /// `vertices[i]` of `self`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            if index[u] != usize::MAX && index[v] != usize::MAX {
                let (a, b) = (index[u], index[v]);
                edges.push((a.min(b), a.max(b)));
            }
        }
        edges.sort_unstable();
        Self::from_sorted(vertices.len(), edges)
    }

    /// Serialization in the graph-file format, edges sorted.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.m());
        for &(u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_graph(s)
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_pair(line_no: usize, line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let a = it.next().ok_or_else(|| parse_err(line_no, "expected two integers"))?;
    let b = it.next().ok_or_else(|| parse_err(line_no, "expected two integers"))?;
    if it.next().is_some() {
        return Err(parse_err(line_no, "trailing tokens"));
    }
    let a = a.parse().map_err(|_| parse_err(line_no, format!("bad integer {a:?}")))?;
    let b = b.parse().map_err(|_| parse_err(line_no, format!("bad integer {b:?}")))?;
    Ok((a, b))
}

/// Parses the graph-file format: a header `n m` followed by `m` lines `u v`.
/// Blank lines are ignored. Errors carry 1-based line numbers.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let (graph, rest) = parse_graph_block(text.lines().enumerate())?;
    if let Some((i, line)) = rest.into_iter().find(|(_, l)| !l.trim().is_empty()) {
        return Err(parse_err(i + 1, format!("unexpected content {line:?}")));
    }
    Ok(graph)
}

/// Parses a graph block from the front of `lines`, returning the remaining
/// lines. Shared with the weak-realization file reader.
pub(crate) fn parse_graph_block<'a>(
    lines: impl Iterator<Item = (usize, &'a str)>,
) -> Result<(Graph, Vec<(usize, &'a str)>)> {
    let mut lines = lines.filter(|(_, l)| !l.trim().is_empty());
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header \"n m\""))?;
    let (n, m) = parse_pair(hl + 1, header)?;
    let mut seen = BTreeSet::new();
    let mut edges = Vec::with_capacity(m);
    for k in 0..m {
        let (i, line) = lines
            .next()
            .ok_or_else(|| parse_err(hl + 2 + k, format!("expected {m} edge lines, found {k}")))?;
        let (u, v) = parse_pair(i + 1, line)?;
        if u >= n || v >= n {
            return Err(parse_err(i + 1, format!("vertex id out of range 0..{n}")));
        }
        if u == v {
            return Err(parse_err(i + 1, format!("self-loop at vertex {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(parse_err(i + 1, format!("duplicate edge {{{u},{v}}}")));
        }
        edges.push((u, v));
    }
    Ok((Graph::new(n, edges)?, lines.collect()))
}

/// Vertex partition `(A, B, S)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexCut {
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<usize>,
    #[serde(rename = "S")]
    pub s: Vec<usize>,
}

impl VertexCut {
    pub fn new(mut a: Vec<usize>, mut b: Vec<usize>, mut s: Vec<usize>) -> Self {
        a.sort_unstable();
        b.sort_unstable();
        s.sort_unstable();
        VertexCut { a, b, s }
    }

    /// Checks that the three sets partition `0..n`.
    pub fn check_partition(&self, n: usize) -> Result<()> {
        let mut owner = vec![false; n];
        for &v in self.a.iter().chain(&self.b).chain(&self.s) {
            if v >= n {
                return Err(Error::Contract(format!("vertex {v} out of range 0..{n}")));
            }
            if owner[v] {
                return Err(Error::Contract(format!("vertex {v} appears twice in the cut")));
            }
            owner[v] = true;
        }
        match owner.iter().position(|&o| !o) {
            Some(v) => Err(Error::Contract(format!("vertex {v} is not covered by the cut"))),
            None => Ok(()),
        }
    }

    /// First edge joining A and B, if any.
    pub fn crossing_edge(&self, g: &Graph) -> Option<(usize, usize)> {
        let mut side = vec![0u8; g.n()];
        for &v in &self.a {
            side[v] = 1;
        }
        for &v in &self.b {
            side[v] = 2;
        }
        g.edges()
            .iter()
            .copied()
            .find(|&(u, v)| side[u] | side[v] == 3)
    }
}

/// Edge cut `(A, V \ A)`; only `A` is stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCut {
    #[serde(rename = "A")]
    pub a: Vec<usize>,
}

impl EdgeCut {
    pub fn new(mut a: Vec<usize>, n: usize) -> Result<Self> {
        a.sort_unstable();
        a.dedup();
        if a.is_empty() || a.len() >= n || a.iter().any(|&v| v >= n) {
            return Err(Error::Contract(format!(
                "edge cut side must be a nonempty proper subset of 0..{n}"
            )));
        }
        Ok(EdgeCut { a })
    }

    pub fn membership(&self, n: usize) -> Vec<bool> {
        let mut inside = vec![false; n];
        for &v in &self.a {
            inside[v] = true;
        }
        inside
    }

    pub fn crossing_edges(&self, g: &Graph) -> usize {
        let inside = self.membership(g.n());
        g.edges().iter().filter(|&&(u, v)| inside[u] != inside[v]).count()
    }
}

/// Largest side allowed in a separator: `⌈2n/3⌉`.
pub fn balance_limit(n: usize) -> usize {
    (2 * n).div_ceil(3)
}

/// Outcome of [`check_separator`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatorCheck {
    pub valid: bool,
    pub reason: Option<String>,
}

/// A separator has no A–B edge and both sides of size at most `⌈2n/3⌉`.
pub fn check_separator(g: &Graph, cut: &VertexCut) -> Result<SeparatorCheck> {
    cut.check_partition(g.n())?;
    if let Some((u, v)) = cut.crossing_edge(g) {
        return Ok(SeparatorCheck {
            valid: false,
            reason: Some(format!("edge {{{u},{v}}} joins A and B")),
        });
    }
    let limit = balance_limit(g.n());
    for (name, side) in [("A", &cut.a), ("B", &cut.b)] {
        if side.len() > limit {
            return Ok(SeparatorCheck {
                valid: false,
                reason: Some(format!("|{name}| = {} exceeds {limit}", side.len())),
            });
        }
    }
    Ok(SeparatorCheck { valid: true, reason: None })
}

/// Generator families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Complete,
    Path,
    Cycle,
    Grid,
    GnpConnected,
    SubdividedComplete,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "complete" => Family::Complete,
            "path" => Family::Path,
            "cycle" => Family::Cycle,
            "grid" => Family::Grid,
            "gnp_connected" => Family::GnpConnected,
            "subdivided_complete" => Family::SubdividedComplete,
            other => return Err(Error::InvalidParams(format!("unknown graph family {other:?}"))),
        })
    }
}

const GNP_RETRIES: usize = 1000;

/// Generates a member of `family`.
///
/// Parameters: `complete`, `path`, `cycle` and `subdivided_complete` take
/// `[n]`; `grid` takes `[rows, cols]`; `gnp_connected` takes `[n, p_percent]`
/// and uses `seed`.
pub fn generate(family: Family, params: &[usize], seed: Option<u64>) -> Result<Graph> {
    let want = |k: usize| -> Result<()> {
        if params.len() == k {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "{family:?} takes {k} parameter(s), got {}",
                params.len()
            )))
        }
    };
    match family {
        Family::Complete => {
            want(1)?;
            Ok(complete(params[0]))
        }
        Family::Path => {
            want(1)?;
            if params[0] < 1 {
                return Err(Error::InvalidParams("path needs n >= 1".into()));
            }
            Ok(path(params[0]))
        }
        Family::Cycle => {
            want(1)?;
            if params[0] < 3 {
                return Err(Error::InvalidParams("cycle needs n >= 3".into()));
            }
            Ok(cycle(params[0]))
        }
        Family::Grid => {
            want(2)?;
            if params[0] < 1 || params[1] < 1 {
                return Err(Error::InvalidParams("grid sides must be >= 1".into()));
            }
            Ok(grid(params[0], params[1]))
        }
        Family::SubdividedComplete => {
            want(1)?;
            Ok(subdivided_complete(params[0]))
        }
        Family::GnpConnected => {
            want(2)?;
            let (n, pct) = (params[0], params[1]);
            if n < 1 || pct > 100 {
                return Err(Error::InvalidParams("gnp_connected needs n >= 1, p in 0..=100".into()));
            }
            gnp_connected(n, pct as f64 / 100.0, seed.unwrap_or(0))
        }
    }
}

pub fn complete(n: usize) -> Graph {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Graph::from_sorted(n, edges)
}

pub fn path(n: usize) -> Graph {
    Graph::from_sorted(n, (1..n).map(|v| (v - 1, v)).collect())
}

pub fn cycle(n: usize) -> Graph {
    Graph::new(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle on n >= 3 vertices")
}

/// `rows × cols` grid; vertex `r * cols + c` sits at row `r`, column `c`.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::new(rows * cols, edges).expect("grid edges are valid")
}

/// `K_n` with every edge replaced by a path of length two. The subdivision
/// vertex of the `i`-th pair (lexicographic) is `n + i`.
pub fn subdivided_complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    let mut next = n;
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, next));
            edges.push((v, next));
            next += 1;
        }
    }
    Graph::new(next, edges).expect("subdivision edges are valid")
}

/// `G(n, p)` conditioned on connectivity by rejection sampling.
pub fn gnp_connected(n: usize, p: f64, seed: u64) -> Result<Graph> {
    let mut rng = seeds::rng(seed);
    for _ in 0..GNP_RETRIES {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_sorted(n, edges);
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Generation(format!(
        "no connected G({n}, {p}) sample within {GNP_RETRIES} attempts"
    )))
}
