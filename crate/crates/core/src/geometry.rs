//! Polygonal curves with integer coordinates, exact intersection predicates,
//! intersection graphs, and weak realizations of abstract topological graphs.
//!
//! Every predicate is exact: orientations are signs of `i128` determinants
//! and intersection points are kept as reduced rationals.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::graph::{parse_graph_block, Graph};
use crate::{seeds, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    fn sub(self, o: Point) -> (i128, i128) {
        (self.x as i128 - o.x as i128, self.y as i128 - o.y as i128)
    }

    fn offset(self, dx: i64, dy: i64) -> Point {
        Point::new(self.x + dx, self.y + dy)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

fn cross(a: (i128, i128), b: (i128, i128)) -> i128 {
    a.0 * b.1 - a.1 * b.0
}

/// Sign of the turn `p -> q -> r`: positive for counter-clockwise.
pub fn orient(p: Point, q: Point, r: Point) -> i32 {
    cross(q.sub(p), r.sub(p)).signum() as i32
}

/// `r` lies on the closed segment `pq`, given that the three are collinear.
fn within(p: Point, q: Point, r: Point) -> bool {
    p.x.min(q.x) <= r.x && r.x <= p.x.max(q.x) && p.y.min(q.y) <= r.y && r.y <= p.y.max(q.y)
}

pub fn on_segment(p: Point, q: Point, r: Point) -> bool {
    orient(p, q, r) == 0 && within(p, q, r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentRelation {
    Disjoint,
    /// Interiors cross transversally.
    ProperCrossing,
    /// A single shared point that is an endpoint of at least one segment.
    Touching,
    /// Collinear with a shared piece of positive length.
    Overlapping,
}

/// Classifies segments `pq` and `rs` (`p != q`, `r != s`).
pub fn segments_intersect(p: Point, q: Point, r: Point, s: Point) -> SegmentRelation {
    let o1 = orient(p, q, r);
    let o2 = orient(p, q, s);
    let o3 = orient(r, s, p);
    let o4 = orient(r, s, q);
    if o1 == 0 && o2 == 0 {
        // Collinear: compare the projections on the dominant axis.
        let key = |a: Point| if p.x != q.x { a.x } else { a.y };
        let (a0, a1) = (key(p).min(key(q)), key(p).max(key(q)));
        let (b0, b1) = (key(r).min(key(s)), key(r).max(key(s)));
        let lo = a0.max(b0);
        let hi = a1.min(b1);
        return match lo.cmp(&hi) {
            std::cmp::Ordering::Less => SegmentRelation::Overlapping,
            std::cmp::Ordering::Equal => SegmentRelation::Touching,
            std::cmp::Ordering::Greater => SegmentRelation::Disjoint,
        };
    }
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return SegmentRelation::ProperCrossing;
    }
    let touches = (o1 == 0 && within(p, q, r))
        || (o2 == 0 && within(p, q, s))
        || (o3 == 0 && within(r, s, p))
        || (o4 == 0 && within(r, s, q));
    if touches {
        SegmentRelation::Touching
    } else {
        SegmentRelation::Disjoint
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A point with rational coordinates `(x / den, y / den)`, kept reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatPoint {
    x: i128,
    y: i128,
    den: i128,
}

impl RatPoint {
    pub fn new(x: i128, y: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let s = den.signum();
        let g = gcd(gcd(x, y), den);
        RatPoint { x: s * x / g, y: s * y / g, den: s * den / g }
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x as f64 / self.den as f64, self.y as f64 / self.den as f64)
    }

    /// Squared Euclidean distance to an integer point, as `(num, den)`.
    fn dist2_to(&self, p: Point) -> (i128, i128) {
        let dx = self.x - p.x as i128 * self.den;
        let dy = self.y - p.y as i128 * self.den;
        (dx * dx + dy * dy, self.den * self.den)
    }
}

impl From<Point> for RatPoint {
    fn from(p: Point) -> Self {
        RatPoint { x: p.x as i128, y: p.y as i128, den: 1 }
    }
}

impl fmt::Display for RatPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "({}, {})", self.x, self.y)
        } else {
            write!(f, "({}/{}, {}/{})", self.x, self.den, self.y, self.den)
        }
    }
}

impl Serialize for RatPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The unique common point of two segments that touch or cross.
pub fn intersection_point(p: Point, q: Point, r: Point, s: Point) -> Option<RatPoint> {
    match segments_intersect(p, q, r, s) {
        SegmentRelation::Disjoint | SegmentRelation::Overlapping => None,
        SegmentRelation::ProperCrossing => {
            let d = q.sub(p);
            let e = s.sub(r);
            let den = cross(d, e);
            let t = cross(r.sub(p), e);
            Some(RatPoint::new(
                p.x as i128 * den + t * d.0,
                p.y as i128 * den + t * d.1,
                den,
            ))
        }
        SegmentRelation::Touching => [r, s, p, q]
            .into_iter()
            .zip([(p, q), (p, q), (r, s), (r, s)])
            .find(|&(pt, (a, b))| on_segment(a, b, pt))
            .map(|(pt, _)| pt.into()),
    }
}

/// Squared distance from `p` to segment `ab`, as a rational `(num, den)`.
fn point_segment_dist2(p: Point, a: Point, b: Point) -> (i128, i128) {
    let ab = b.sub(a);
    let ap = p.sub(a);
    let len2 = ab.0 * ab.0 + ab.1 * ab.1;
    let dot = ap.0 * ab.0 + ap.1 * ab.1;
    if dot <= 0 {
        return (ap.0 * ap.0 + ap.1 * ap.1, 1);
    }
    if dot >= len2 {
        let bp = p.sub(b);
        return (bp.0 * bp.0 + bp.1 * bp.1, 1);
    }
    // |ap x ab|^2 / |ab|^2
    let c = cross(ap, ab);
    (c * c, len2)
}

fn rat_lt(a: (i128, i128), b: (i128, i128)) -> bool {
    a.0 * b.1 < b.0 * a.1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct BBox {
    lo: Point,
    hi: Point,
}

impl BBox {
    fn of(points: &[Point]) -> BBox {
        let mut lo = points[0];
        let mut hi = points[0];
        for p in points {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        BBox { lo, hi }
    }

    fn meets(&self, o: &BBox) -> bool {
        self.lo.x <= o.hi.x && o.lo.x <= self.hi.x && self.lo.y <= o.hi.y && o.lo.y <= self.hi.y
    }
}

/// A simple polygonal curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolylineCurve {
    pub id: String,
    pub points: Vec<Point>,
}

impl PolylineCurve {
    pub fn new(id: impl Into<String>, points: Vec<Point>) -> Self {
        PolylineCurve { id: id.into(), points }
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    /// Checks the curve invariants: two or more points, no repeated
    /// consecutive points, and no self-intersection.
    pub fn check_simple(&self) -> std::result::Result<(), String> {
        check_simple_points(&self.points).map_err(|e| format!("curve {}: {e}", self.id))
    }
}

fn check_simple_points(points: &[Point]) -> std::result::Result<(), String> {
    if points.len() < 2 {
        return Err("needs at least two points".into());
    }
    if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
        return Err(format!("repeated consecutive point {}", w[0]));
    }
    let segs: Vec<_> = points.windows(2).map(|w| (w[0], w[1])).collect();
    let boxes: Vec<_> = segs.iter().map(|&(a, b)| BBox::of(&[a, b])).collect();
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            if !boxes[i].meets(&boxes[j]) {
                continue;
            }
            let rel = segments_intersect(segs[i].0, segs[i].1, segs[j].0, segs[j].1);
            let ok = if j == i + 1 {
                rel != SegmentRelation::Overlapping
            } else {
                rel == SegmentRelation::Disjoint
            };
            if !ok {
                return Err(format!("segments {i} and {j} intersect"));
            }
        }
    }
    Ok(())
}

/// All common points of two polylines; `Err` on a collinear overlap.
fn polyline_intersections(a: &[Point], b: &[Point]) -> std::result::Result<BTreeSet<RatPoint>, ()> {
    let mut out = BTreeSet::new();
    if !BBox::of(a).meets(&BBox::of(b)) {
        return Ok(out);
    }
    let bboxes: Vec<_> = b.windows(2).map(BBox::of).collect();
    for sa in a.windows(2) {
        let ba = BBox::of(sa);
        for (sb, bb) in b.windows(2).zip(&bboxes) {
            if !ba.meets(bb) {
                continue;
            }
            match segments_intersect(sa[0], sa[1], sb[0], sb[1]) {
                SegmentRelation::Disjoint => {}
                SegmentRelation::Overlapping => return Err(()),
                _ => {
                    out.insert(intersection_point(sa[0], sa[1], sb[0], sb[1]).expect("segments meet"));
                }
            }
        }
    }
    Ok(out)
}

fn polyline_contains(points: &[Point], p: Point) -> bool {
    points.windows(2).any(|w| on_segment(w[0], w[1], p))
}

/// Set of curves with distinct ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StringRepresentation {
    pub curves: Vec<PolylineCurve>,
}

/// Sort key for curve ids: integer ids first in numeric order, then the rest
/// lexicographically.
fn id_key(id: &str) -> (u8, i128, &str) {
    match id.parse::<i128>() {
        Ok(v) => (0, v, id),
        Err(_) => (1, 0, id),
    }
}

impl StringRepresentation {
    pub fn new(curves: Vec<PolylineCurve>) -> Self {
        StringRepresentation { curves }
    }

    /// Curves in vertex order (sorted by id).
    pub fn sorted(&self) -> Vec<&PolylineCurve> {
        let mut v: Vec<_> = self.curves.iter().collect();
        v.sort_by(|a, b| id_key(&a.id).cmp(&id_key(&b.id)));
        v
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in self.sorted() {
            s.push_str(&c.id);
            s.push(':');
            for p in &c.points {
                s.push_str(&format!(" {} {}", p.x, p.y));
            }
            s.push('\n');
        }
        s
    }
}

fn parse_coords(line_no: usize, text: &str) -> Result<Vec<Point>> {
    let nums = text
        .split_whitespace()
        .map(|t| {
            t.parse::<i64>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad coordinate {t:?}"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if nums.len() % 2 != 0 {
        return Err(Error::Parse { line: line_no, msg: "odd number of coordinates".into() });
    }
    Ok(nums.chunks(2).map(|c| Point::new(c[0], c[1])).collect())
}

/// Parses a strings file: one curve per line, `id: x0 y0 x1 y1 ...`.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_strings(text: &str) -> Result<StringRepresentation> {
    let mut curves = Vec::new();
    let mut ids = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (id, coords) = line.split_once(':').ok_or(Error::Parse {
            line: i + 1,
            msg: "expected \"id: x0 y0 ...\"".into(),
        })?;
        let id = id.trim();
        if id.is_empty() || !ids.insert(id.to_string()) {
            return Err(Error::Parse { line: i + 1, msg: format!("empty or duplicate id {id:?}") });
        }
        let curve = PolylineCurve::new(id, parse_coords(i + 1, coords)?);
        curve
            .check_simple()
            .map_err(|msg| Error::Parse { line: i + 1, msg })?;
        curves.push(curve);
    }
    Ok(StringRepresentation { curves })
}

/// Output of [`intersection_graph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionGraph {
    pub graph: Graph,
    /// Curve id of each vertex.
    pub ids: Vec<String>,
    /// Number of intersection points of each adjacent pair `(u, v)`, `u < v`.
    pub counts: BTreeMap<(usize, usize), usize>,
}

impl IntersectionGraph {
    pub fn total_intersections(&self) -> usize {
        self.counts.values().sum()
    }
}

/// Builds the intersection graph of a standard string representation.
///
/// Vertex `i` is the `i`-th curve in id order. Fails if a curve is not
/// simple, two curves overlap along a segment, or a point lies on three or
/// more curves.
pub fn intersection_graph(rep: &StringRepresentation) -> Result<IntersectionGraph> {
    let curves = rep.sorted();
    for w in curves.windows(2) {
        if w[0].id == w[1].id {
            return Err(Error::Standardness(format!("duplicate curve id {}", w[0].id)));
        }
    }
    for c in &curves {
        c.check_simple().map_err(Error::Standardness)?;
    }
    let n = curves.len();
    let mut counts = BTreeMap::new();
    let mut on_point: BTreeMap<RatPoint, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let pts = polyline_intersections(&curves[i].points, &curves[j].points).map_err(|_| {
                Error::Standardness(format!(
                    "curves {} and {} overlap along a segment",
                    curves[i].id, curves[j].id
                ))
            })?;
            if !pts.is_empty() {
                counts.insert((i, j), pts.len());
                for p in pts {
                    let owners = on_point.entry(p).or_default();
                    for k in [i, j] {
                        if !owners.contains(&k) {
                            owners.push(k);
                        }
                    }
                }
            }
        }
    }
    if let Some((p, owners)) = on_point.iter().find(|(_, o)| o.len() >= 3) {
        let names: Vec<_> = owners.iter().map(|&k| curves[k].id.as_str()).collect();
        return Err(Error::Standardness(format!(
            "point {p} lies on curves {}",
            names.join(", ")
        )));
    }
    let graph = Graph::new(n, counts.keys().copied())?;
    Ok(IntersectionGraph {
        graph,
        ids: curves.iter().map(|c| c.id.clone()).collect(),
        counts,
    })
}

/// A graph together with the set of independent edge pairs allowed to cross.
/// Edge indices refer to [`Graph::edges`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractTopologicalGraph {
    pub graph: Graph,
    pub allowed: BTreeSet<(usize, usize)>,
}

impl AbstractTopologicalGraph {
    pub fn new(graph: Graph, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let m = graph.m();
        let mut allowed = BTreeSet::new();
        for (e, f) in pairs {
            if e >= m || f >= m || e == f {
                return Err(Error::InvalidParams(format!("allowed pair ({e}, {f}) is not two distinct edges")));
            }
            allowed.insert((e.min(f), e.max(f)));
        }
        Ok(AbstractTopologicalGraph { graph, allowed })
    }

    pub fn is_allowed(&self, e: usize, f: usize) -> bool {
        self.allowed.contains(&(e.min(f), e.max(f)))
    }

    fn adjacent(&self, e: usize, f: usize) -> bool {
        let (a, b) = self.graph.edges()[e];
        let (c, d) = self.graph.edges()[f];
        a == c || a == d || b == c || b == d
    }
}

/// A polyline drawing of an abstract topological graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakRealization {
    pub atg: AbstractTopologicalGraph,
    pub vertex_points: Vec<Point>,
    /// One polyline per edge, running between the edge's endpoint coordinates.
    pub edge_curves: Vec<Vec<Point>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    ForbiddenCrossing { edges: (usize, usize), point: RatPoint },
    TriplePoint { point: RatPoint, edges: Vec<usize> },
    Overlap { edges: (usize, usize) },
    EdgeThroughVertex { edge: usize, vertex: usize },
    NonSimpleEdge { edge: usize, detail: String },
    CoincidentVertices { vertices: (usize, usize) },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Adjacent edges that cross away from their shared vertex.
    pub adjacent_crossings: Vec<(usize, usize)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl WeakRealization {
    fn check_endpoints(&self) -> Result<()> {
        let g = &self.atg.graph;
        if self.vertex_points.len() != g.n() || self.edge_curves.len() != g.m() {
            return Err(Error::Contract(format!(
                "realization has {} points and {} curves for a graph with n = {}, m = {}",
                self.vertex_points.len(),
                self.edge_curves.len(),
                g.n(),
                g.m()
            )));
        }
        for (i, (&(u, v), curve)) in g.edges().iter().zip(&self.edge_curves).enumerate() {
            let (pu, pv) = (self.vertex_points[u], self.vertex_points[v]);
            let (Some(&first), Some(&last)) = (curve.first(), curve.last()) else {
                return Err(Error::Contract(format!("edge {i} has an empty curve")));
            };
            if !((first == pu && last == pv) || (first == pv && last == pu)) {
                return Err(Error::Contract(format!(
                    "curve of edge {i} = {{{u},{v}}} does not run between its endpoints"
                )));
            }
        }
        Ok(())
    }

    /// Common points of edges `e` and `f`, minus any shared vertex point.
    fn edge_pair_points(&self, e: usize, f: usize) -> std::result::Result<BTreeSet<RatPoint>, ()> {
        let mut pts = polyline_intersections(&self.edge_curves[e], &self.edge_curves[f])?;
        let (a, b) = self.atg.graph.edges()[e];
        let (c, d) = self.atg.graph.edges()[f];
        for v in [a, b] {
            if v == c || v == d {
                pts.remove(&self.vertex_points[v].into());
            }
        }
        Ok(pts)
    }

    /// Number of points where edges `e` and `f` meet, not counting a shared
    /// endpoint.
    pub fn crossing_count(&self, e: usize, f: usize) -> usize {
        self.edge_pair_points(e, f).map(|p| p.len()).unwrap_or(usize::MAX)
    }

    pub fn total_crossings(&self) -> usize {
        let m = self.atg.graph.m();
        (0..m)
            .flat_map(|e| (e + 1..m).map(move |f| (e, f)))
            .map(|(e, f)| self.crossing_count(e, f))
            .sum()
    }
}

/// Lists everything that keeps `w` from being a standard weak realization
/// of its abstract topological graph.
pub fn validate_weak_realization(w: &WeakRealization) -> Result<ValidationReport> {
    w.check_endpoints()?;
    let g = &w.atg.graph;
    let mut violations = Vec::new();
    let mut adjacent_crossings = Vec::new();
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if w.vertex_points[u] == w.vertex_points[v] {
                violations.push(Violation::CoincidentVertices { vertices: (u, v) });
            }
        }
    }
    for (e, curve) in w.edge_curves.iter().enumerate() {
        if let Err(detail) = check_simple_points(curve) {
            violations.push(Violation::NonSimpleEdge { edge: e, detail });
        }
        let (a, b) = g.edges()[e];
        for (x, &p) in w.vertex_points.iter().enumerate() {
            if x != a && x != b && polyline_contains(curve, p) {
                violations.push(Violation::EdgeThroughVertex { edge: e, vertex: x });
            }
        }
    }
    let mut on_point: BTreeMap<RatPoint, BTreeSet<usize>> = BTreeMap::new();
    for e in 0..g.m() {
        for f in e + 1..g.m() {
            let Ok(pts) = w.edge_pair_points(e, f) else {
                violations.push(Violation::Overlap { edges: (e, f) });
                continue;
            };
            if pts.is_empty() {
                continue;
            }
            if w.atg.adjacent(e, f) {
                adjacent_crossings.push((e, f));
            } else if !w.atg.is_allowed(e, f) {
                violations.extend(pts.iter().map(|&point| Violation::ForbiddenCrossing { edges: (e, f), point }));
            }
            for p in pts {
                let owners = on_point.entry(p).or_default();
                owners.insert(e);
                owners.insert(f);
            }
        }
    }
    for (point, edges) in on_point {
        if edges.len() >= 3 {
            violations.push(Violation::TriplePoint { point, edges: edges.into_iter().collect() });
        }
    }
    Ok(ValidationReport { violations, adjacent_crossings })
}

/// Serializes a weak realization: the graph block, then `allow`, `vertex`
/// and `edge` lines.
pub fn weak_realization_to_text(w: &WeakRealization) -> String {
    let mut s = w.atg.graph.to_text();
    for &(e, f) in &w.atg.allowed {
        s.push_str(&format!("allow {e} {f}\n"));
    }
    for (v, p) in w.vertex_points.iter().enumerate() {
        s.push_str(&format!("vertex {v} {} {}\n", p.x, p.y));
    }
    for (e, curve) in w.edge_curves.iter().enumerate() {
        s.push_str(&format!("edge {e}:"));
        for p in curve {
            s.push_str(&format!(" {} {}", p.x, p.y));
        }
        s.push('\n');
    }
    s
}

/// Parses the weak-realization file format. Edge indices refer to the
/// lexicographically sorted edge list of the graph block.
pub fn parse_weak_realization(text: &str) -> Result<WeakRealization> {
    let (graph, rest) = parse_graph_block(text.lines().enumerate())?;
    let mut allowed = Vec::new();
    let mut points: Vec<Option<Point>> = vec![None; graph.n()];
    let mut curves: Vec<Option<Vec<Point>>> = vec![None; graph.m()];
    for (i, line) in rest {
        let line_no = i + 1;
        let bad = |msg: String| Error::Parse { line: line_no, msg };
        let line = line.trim();
        let int = |t: &str| t.parse::<i64>().map_err(|_| bad(format!("bad integer {t:?}")));
        let idx = |t: &str, bound: usize, what: &str| -> Result<usize> {
            let v = t.parse::<usize>().map_err(|_| bad(format!("bad {what} index {t:?}")))?;
            if v >= bound {
                return Err(bad(format!("{what} index {v} out of range")));
            }
            Ok(v)
        };
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("allow ") {
            let t: Vec<_> = rest.split_whitespace().collect();
            if t.len() != 2 {
                return Err(bad("expected \"allow ei ej\"".into()));
            }
            allowed.push((idx(t[0], graph.m(), "edge")?, idx(t[1], graph.m(), "edge")?));
        } else if let Some(rest) = line.strip_prefix("vertex ") {
            let t: Vec<_> = rest.split_whitespace().collect();
            if t.len() != 3 {
                return Err(bad("expected \"vertex v x y\"".into()));
            }
            let v = idx(t[0], graph.n(), "vertex")?;
            points[v] = Some(Point::new(int(t[1])?, int(t[2])?));
        } else if let Some(rest) = line.strip_prefix("edge ") {
            let (e, coords) = rest.split_once(':').ok_or_else(|| bad("expected \"edge ei: x0 y0 ...\"".into()))?;
            let e = idx(e.trim(), graph.m(), "edge")?;
            curves[e] = Some(parse_coords(line_no, coords)?);
        } else {
            return Err(bad(format!("unrecognized line {line:?}")));
        }
    }
    let missing = |what: &str, i: usize| Error::Parse { line: 0, msg: format!("missing {what} {i}") };
    let vertex_points = points
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| missing("vertex", i)))
        .collect::<Result<Vec<_>>>()?;
    let edge_curves = curves
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| missing("edge", i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(WeakRealization {
        atg: AbstractTopologicalGraph::new(graph, allowed)?,
        vertex_points,
        edge_curves,
    })
}

/// The family of abstract topological graphs that force exponentially many
/// crossings, with one explicit weak realization.
///
/// Vertices are `a`, `b` and, for every level `i = 1..=k`, `u_i`, `v_i`,
/// `u'_i`, `v'_i`. The planar part consists of the frame edge `{a,b}`, the
/// vertical edges `{u_i,u'_i}` and `{v_i,v'_i}`, and the nesting edges
/// `{u_{i-1},u_i}`, `{u_{i-1},v_i}`. On top of it sit the edges `{u_i,v_i}`,
/// each allowed to cross the dashed edges only: `{a,b}`, every `{v_j,v'_j}`
/// and every `{u_{j-1},v_j}`.
///
/// In the drawing, `{u_1,v_1}` is a vertical segment through `{a,b}`, and
/// `{u_i,v_i}` is a thin hairpin around `{u_{i-1},v_{i-1}}`, open at
/// `u_{i-1}` and closed around `v_{i-1}`. Going around the previous rung
/// doubles every crossing with `{a,b}`, so rung `i` crosses it exactly
/// `2^(i-1)` times.
#[derive(Debug, Clone)]
pub struct ExpoFamily {
    pub realization: WeakRealization,
    /// Vertex names (`a`, `b`, `u1`, `v1`, `u1'`, ...).
    pub labels: Vec<String>,
    /// Edge index of `{a,b}`.
    pub frame_edge: usize,
    /// Edge index of `{u_i,v_i}` for `i = 1..=k` (position `i - 1`).
    pub rungs: Vec<usize>,
    /// Edge indices of the dashed edges.
    pub dashed: Vec<usize>,
}

impl ExpoFamily {
    /// Crossing counts of each rung with the frame edge.
    pub fn rung_frame_crossings(&self) -> Vec<usize> {
        self.rungs
            .iter()
            .map(|&r| self.realization.crossing_count(r, self.frame_edge))
            .collect()
    }
}

pub const EXPO_MAX_K: usize = 12;

/// Offset tube around a rectilinear polyline: starts `delta` to the right of
/// the first point (and `2 delta` further along), runs down the right side,
/// around the far end, and back up the left side.
fn hairpin(prev: &[Point], delta: i64) -> Vec<Point> {
    let dir = |a: Point, b: Point| ((b.x - a.x).signum(), (b.y - a.y).signum());
    let left = |d: (i64, i64)| (-d.1, d.0);
    let dirs: Vec<_> = prev.windows(2).map(|w| dir(w[0], w[1])).collect();
    let d0 = dirs[0];
    let n0 = left(d0);
    let start = prev[0].offset(-delta * n0.0 + 2 * delta * d0.0, -delta * n0.1 + 2 * delta * d0.1);
    let end = prev[0].offset(delta * n0.0 + 2 * delta * d0.0, delta * n0.1 + 2 * delta * d0.1);
    let corner = |j: usize, side: i64| {
        let (a, b) = (left(dirs[j - 1]), left(dirs[j]));
        prev[j].offset(side * delta * (a.0 + b.0), side * delta * (a.1 + b.1))
    };
    let last = *prev.last().unwrap();
    let t = *dirs.last().unwrap();
    let nl = left(t);
    let mut out = vec![start];
    out.extend((1..prev.len() - 1).map(|j| corner(j, -1)));
    out.push(last.offset(-delta * nl.0 + delta * t.0, -delta * nl.1 + delta * t.1));
    out.push(last.offset(delta * nl.0 + delta * t.0, delta * nl.1 + delta * t.1));
    out.extend((1..prev.len() - 1).rev().map(|j| corner(j, 1)));
    out.push(end);
    out
}

/// Builds the family member of order `k` (`1 <= k <= 12`) together with its
/// weak realization.
pub fn expo_family(k: usize) -> Result<ExpoFamily> {
    if !(1..=EXPO_MAX_K).contains(&k) {
        return Err(Error::InvalidParams(format!("k must be in 1..={EXPO_MAX_K}, got {k}")));
    }
    let (a, b) = (0usize, 1usize);
    let u = |i: usize| 2 + 4 * (i - 1);
    let v = |i: usize| 3 + 4 * (i - 1);
    let up = |i: usize| 4 + 4 * (i - 1);
    let vp = |i: usize| 5 + 4 * (i - 1);
    let n = 2 + 4 * k;

    let mut labels = vec!["a".to_string(), "b".to_string()];
    for i in 1..=k {
        labels.extend([format!("u{i}"), format!("v{i}"), format!("u{i}'"), format!("v{i}'")]);
    }

    // Level offsets halve at each step so that all hairpins nest.
    let delta = |i: usize| -> i64 {
        if i == 1 {
            4 << (k - 1)
        } else {
            4 << (k - i)
        }
    };
    let height = 4 * delta(1);
    let mut pts = vec![Point::new(0, 0); n];
    pts[a] = Point::new(-2 * delta(1), 0);
    pts[b] = Point::new(2 * delta(1), 0);

    let mut curves: BTreeMap<(usize, usize), Vec<Point>> = BTreeMap::new();
    let mut add = |x: usize, y: usize, mut c: Vec<Point>| {
        if x > y {
            c.reverse();
        }
        curves.insert((x.min(y), x.max(y)), c);
    };
    add(a, b, vec![pts[a], pts[b]]);

    let mut rung = vec![Point::new(0, height), Point::new(0, -height)];
    for i in 1..=k {
        if i > 1 {
            rung = hairpin(&rung, delta(i));
        }
        pts[u(i)] = rung[0];
        pts[v(i)] = *rung.last().unwrap();
        // The first rung ends at the bottom, later ones are entered from below.
        let dir = if i == 1 { -1 } else { 1 };
        pts[up(i)] = pts[u(i)].offset(0, delta(i));
        pts[vp(i)] = pts[v(i)].offset(0, dir * delta(i));
        add(u(i), v(i), rung.clone());
        add(u(i), up(i), vec![pts[u(i)], pts[up(i)]]);
        add(v(i), vp(i), vec![pts[v(i)], pts[vp(i)]]);
        if i > 1 {
            add(u(i - 1), u(i), vec![pts[u(i - 1)], pts[u(i)]]);
            add(u(i - 1), v(i), vec![pts[u(i - 1)], pts[v(i)]]);
        }
    }

    let graph = Graph::new(n, curves.keys().copied())?;
    let idx = |x: usize, y: usize| graph.edge_index(x, y).expect("edge exists");
    let frame_edge = idx(a, b);
    let rungs: Vec<_> = (1..=k).map(|i| idx(u(i), v(i))).collect();
    let mut dashed = vec![frame_edge];
    for j in 1..=k {
        dashed.push(idx(v(j), vp(j)));
        if j > 1 {
            dashed.push(idx(u(j - 1), v(j)));
        }
    }
    let edges = graph.edges().to_vec();
    let independent = |e: usize, f: usize| {
        let (p, q) = edges[e];
        let (r, s) = edges[f];
        p != r && p != s && q != r && q != s
    };
    let allowed: Vec<_> = rungs
        .iter()
        .flat_map(|&r| dashed.iter().map(move |&d| (r, d)))
        .filter(|&(r, d)| independent(r, d))
        .collect();
    let edge_curves = edges.iter().map(|e| curves[e].clone()).collect();
    let atg = AbstractTopologicalGraph::new(graph, allowed)?;
    Ok(ExpoFamily {
        realization: WeakRealization { atg, vertex_points: pts, edge_curves },
        labels,
        frame_edge,
        rungs,
        dashed,
    })
}

/// Output of [`weak_to_strings`].
#[derive(Debug, Clone)]
pub struct WeakToStrings {
    /// Curve `i < n` is the vertex string of vertex `i`; curve `n + j` is the
    /// edge string of edge `j`.
    pub rep: StringRepresentation,
    /// The graph the representation should realize: vertices `0..n` are the
    /// drawing's vertices, `n + j` its edges.
    pub predicted: Graph,
    /// Coordinate scale applied to the drawing.
    pub scale: i64,
    /// Half-size of the square vertex strings (after scaling).
    pub radius: i64,
}

fn primitive_step(from: Point, to: Point) -> (i64, i64) {
    let (dx, dy) = (to.x - from.x, to.y - from.y);
    let g = gcd(dx as i128, dy as i128) as i64;
    (dx / g, dy / g)
}

/// Replaces every vertex by a small square-loop vertex string and every edge
/// by an edge string that reaches into the two loops of its endpoints.
///
/// The loops have clearance radius below half the distance from any vertex
/// to anything not incident to it, so the intersection graph of the output
/// has an edge exactly between a vertex and its incident edges, and between
/// two edges that cross in the drawing.
pub fn weak_to_strings(w: &WeakRealization) -> Result<WeakToStrings> {
    let report = validate_weak_realization(w)?;
    if !report.is_valid() {
        return Err(Error::Contract(format!(
            "weak realization is not standard: {:?}",
            report.violations[0]
        )));
    }
    let g = &w.atg.graph;
    let (n, m) = (g.n(), g.m());

    // Smallest squared distance between a vertex and anything it must avoid.
    let mut best: Option<(i128, i128)> = None;
    let mut consider = |d: (i128, i128)| {
        if best.is_none_or(|b| rat_lt(d, b)) {
            best = Some(d);
        }
    };
    for x in 0..n {
        for y in x + 1..n {
            consider((RatPoint::from(w.vertex_points[y])).dist2_to(w.vertex_points[x]));
        }
    }
    for (e, curve) in w.edge_curves.iter().enumerate() {
        let (p, q) = g.edges()[e];
        for (x, &pt) in w.vertex_points.iter().enumerate() {
            if x != p && x != q {
                for s in curve.windows(2) {
                    consider(point_segment_dist2(pt, s[0], s[1]));
                }
            }
        }
    }
    let mut crossings = Vec::new();
    for e in 0..m {
        for f in e + 1..m {
            let pts = w.edge_pair_points(e, f).expect("validated");
            if pts.is_empty() {
                continue;
            }
            crossings.push((e, f));
            let (a, b) = g.edges()[e];
            let (c, d) = g.edges()[f];
            for x in [a, b].into_iter().filter(|x| *x == c || *x == d) {
                for p in &pts {
                    consider(p.dist2_to(w.vertex_points[x]));
                }
            }
        }
    }

    let max_step = w
        .edge_curves
        .iter()
        .flat_map(|c| {
            let k = c.len();
            [primitive_step(c[0], c[1]), primitive_step(c[k - 1], c[k - 2])]
        })
        .map(|(dx, dy)| dx.abs().max(dy.abs()))
        .max()
        .unwrap_or(1);
    let radius = (max_step + 1).max(2);
    // Loops of half-size R stay within distance R * sqrt(2) of their center,
    // which must be below half the clearance: 8 R^2 < F^2 dist^2.
    let scale = match best {
        None => 3,
        Some((num, den)) => {
            let need = 8 * (radius as i128) * (radius as i128) * den;
            let mut f = ((need as f64 / num as f64).sqrt().floor() as i128).max(2);
            while f * f * num <= need {
                f += 1;
            }
            (f as i64).max(3)
        }
    };
    let sc = |p: Point| Point::new(p.x * scale, p.y * scale);

    let mut edge_strings = Vec::with_capacity(m);
    for curve in &w.edge_curves {
        let mut pts: Vec<Point> = curve.iter().map(|&p| sc(p)).collect();
        let k = pts.len();
        let s0 = primitive_step(pts[0], pts[1]);
        let s1 = primitive_step(pts[k - 1], pts[k - 2]);
        pts[0] = pts[0].offset(s0.0, s0.1);
        pts[k - 1] = pts[k - 1].offset(s1.0, s1.1);
        edge_strings.push(pts);
    }

    let mut curves = Vec::with_capacity(n + m);
    for x in 0..n {
        let c = sc(w.vertex_points[x]);
        let incident: Vec<usize> = (0..m)
            .filter(|&e| {
                let (p, q) = g.edges()[e];
                p == x || q == x
            })
            .collect();
        let loop_pts = open_square(c, radius, |a, b| {
            incident.iter().any(|&e| {
                edge_strings[e]
                    .windows(2)
                    .any(|s| segments_intersect(a, b, s[0], s[1]) != SegmentRelation::Disjoint)
            })
        })
        .ok_or_else(|| Error::Contract(format!("no free gap on the loop around vertex {x}")))?;
        curves.push(PolylineCurve::new(x.to_string(), loop_pts));
    }
    for (e, pts) in edge_strings.into_iter().enumerate() {
        curves.push(PolylineCurve::new((n + e).to_string(), pts));
    }

    let mut h_edges = Vec::new();
    for (e, &(p, q)) in g.edges().iter().enumerate() {
        h_edges.push((p, n + e));
        h_edges.push((q, n + e));
    }
    h_edges.extend(crossings.iter().map(|&(e, f)| (n + e, n + f)));
    Ok(WeakToStrings {
        rep: StringRepresentation::new(curves),
        predicted: Graph::new(n + m, h_edges)?,
        scale,
        radius,
    })
}

/// Boundary of the square of half-size `r` around `c`, with one unit gap
/// where `blocked` reports nothing crossing.
fn open_square(c: Point, r: i64, blocked: impl Fn(Point, Point) -> bool) -> Option<Vec<Point>> {
    let corners = [
        c.offset(r, r),
        c.offset(r, -r),
        c.offset(-r, -r),
        c.offset(-r, r),
    ];
    let side = 2 * r;
    let at = |t: i64| {
        let t = t.rem_euclid(4 * side);
        let (s, o) = ((t / side) as usize, t % side);
        let (a, b) = (corners[s], corners[(s + 1) % 4]);
        Point::new(a.x + (b.x - a.x).signum() * o, a.y + (b.y - a.y).signum() * o)
    };
    let gap = (0..4 * side).find(|&t| !blocked(at(t), at(t + 1)))?;
    let mut pts = vec![at(gap + 1)];
    for t in gap + 2..gap + 4 * side {
        if (t.rem_euclid(side)) == 0 {
            pts.push(at(t));
        }
    }
    pts.push(at(gap + 4 * side));
    pts.dedup();
    Some(pts)
}

/// Side of the coordinate box used by [`random_segment_instance`].
pub const SEGMENT_BOX: i64 = 100;
/// Largest coordinate offset between the two endpoints of a random segment.
pub const SEGMENT_SPAN: i64 = 40;
const SEGMENT_RETRIES: usize = 1000;

/// `count` random integer segments in a standard configuration: no collinear
/// overlaps, no point on three segments, all endpoints distinct.
pub fn random_segment_instance(count: usize, seed: u64) -> Result<StringRepresentation> {
    if count == 0 {
        return Err(Error::InvalidParams("segment count must be at least 1".into()));
    }
    let mut rng = seeds::rng(seed);
    let mut segs: Vec<(Point, Point)> = Vec::with_capacity(count);
    let mut endpoints = BTreeSet::new();
    let mut on_point: BTreeMap<RatPoint, usize> = BTreeMap::new();
    for i in 0..count {
        let mut placed = false;
        for _ in 0..SEGMENT_RETRIES {
            let p = Point::new(rng.gen_range(0..=SEGMENT_BOX), rng.gen_range(0..=SEGMENT_BOX));
            let q = Point::new(
                (p.x + rng.gen_range(-SEGMENT_SPAN..=SEGMENT_SPAN)).clamp(0, SEGMENT_BOX),
                (p.y + rng.gen_range(-SEGMENT_SPAN..=SEGMENT_SPAN)).clamp(0, SEGMENT_BOX),
            );
            if p == q || endpoints.contains(&p) || endpoints.contains(&q) {
                continue;
            }
            let mut new_points = Vec::new();
            let mut ok = true;
            for &(r, s) in &segs {
                match segments_intersect(p, q, r, s) {
                    SegmentRelation::Disjoint => {}
                    SegmentRelation::Overlapping => {
                        ok = false;
                        break;
                    }
                    _ => {
                        let x = intersection_point(p, q, r, s).expect("segments meet");
                        if on_point.contains_key(&x) || new_points.contains(&x) {
                            ok = false;
                            break;
                        }
                        new_points.push(x);
                    }
                }
            }
            if !ok {
                continue;
            }
            for x in new_points {
                on_point.insert(x, i);
            }
            endpoints.insert(p);
            endpoints.insert(q);
            segs.push((p, q));
            placed = true;
            break;
        }
        if !placed {
            return Err(Error::Generation(format!(
                "could not place segment {i} within {SEGMENT_RETRIES} attempts"
            )));
        }
    }
    Ok(StringRepresentation::new(
        segs.into_iter()
            .enumerate()
            .map(|(i, (p, q))| PolylineCurve::new(i.to_string(), vec![p, q]))
            .collect(),
    ))
}
