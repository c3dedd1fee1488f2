use serde::{Deserialize, Serialize};

use super::{
    convex_hull, orientation, point_segment_distance, project_to_segment, triangulate,
    GeometryError, Location, Point2, Polygon, Triangle,
};

/// Where the pursuer is allowed to move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PursuerModel {
    /// Boundary only.
    Moat,
    /// Boundary plus the exterior, truncated to the convex hull.
    Exterior,
}

impl std::str::FromStr for PursuerModel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "moat" => Ok(PursuerModel::Moat),
            "exterior" => Ok(PursuerModel::Exterior),
            other => Err(format!("unknown pursuer model `{other}` (expected moat or exterior)")),
        }
    }
}

/// Closed region a straight segment must stay in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Polygon interior plus boundary.
    Interior,
    /// Complement of the open interior.
    Exterior,
}

/// Which intrinsic metric an [`Anchor`] was prepared for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Escaper,
    Pursuer,
}

/// Shortest-path data over the polygon vertices for one side.
#[derive(Clone, Debug)]
struct VertexGraph {
    n: usize,
    dist: Vec<f64>,
    next: Vec<usize>,
}

impl VertexGraph {
    fn build(polygon: &Polygon, side: Side, ctx_visible: impl Fn(Point2, Point2, Side) -> bool) -> Self {
        let n = polygon.len();
        let mut dist = vec![f64::INFINITY; n * n];
        let mut next = vec![usize::MAX; n * n];
        for i in 0..n {
            dist[i * n + i] = 0.0;
            next[i * n + i] = i;
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (a, b) = (polygon.vertex(i), polygon.vertex(j));
                if adjacent || ctx_visible(a, b, side) {
                    let d = a.dist(b);
                    for (u, v) in [(i, j), (j, i)] {
                        dist[u * n + v] = d;
                        next[u * n + v] = v;
                    }
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                let dik = dist[i * n + k];
                if !dik.is_finite() {
                    continue;
                }
                for j in 0..n {
                    let cand = dik + dist[k * n + j];
                    if cand < dist[i * n + j] {
                        dist[i * n + j] = cand;
                        next[i * n + j] = next[i * n + k];
                    }
                }
            }
        }
        VertexGraph {
            n,
            dist,
            next,
        }
    }

    fn d(&self, u: usize, v: usize) -> f64 {
        self.dist[u * self.n + v]
    }

    fn route(&self, u: usize, v: usize) -> Vec<usize> {
        let mut out = vec![u];
        let mut cur = u;
        while cur != v {
            cur = self.next[cur * self.n + v];
            out.push(cur);
        }
        out
    }
}

/// A point prepared for repeated distance queries in one metric.
#[derive(Clone, Debug)]
pub struct Anchor {
    pub point: Point2,
    metric: Metric,
    /// Counterclockwise arc parameter (moat pursuer anchors only).
    arc: Option<f64>,
    visible: Vec<bool>,
    to_vertex: Vec<f64>,
}

/// A polygon together with the structures behind the escaper metric `d_h`
/// (interior geodesic) and the pursuer metric `d_z` (moat or exterior).
/// Immutable after construction.
#[derive(Clone, Debug)]
pub struct MetricContext {
    polygon: Polygon,
    model: PursuerModel,
    triangles: Vec<Triangle>,
    hull: Vec<Point2>,
    interior: VertexGraph,
    exterior: VertexGraph,
}

impl MetricContext {
    pub fn new(polygon: Polygon, model: PursuerModel) -> Self {
        let triangles = triangulate(&polygon);
        let hull = convex_hull(polygon.vertices());
        let probe = Probe { polygon: &polygon };
        let interior = VertexGraph::build(&polygon, Side::Interior, |a, b, s| probe.segment_in(a, b, s));
        let exterior = VertexGraph::build(&polygon, Side::Exterior, |a, b, s| probe.segment_in(a, b, s));
        MetricContext {
            polygon,
            model,
            triangles,
            hull,
            interior,
            exterior,
        }
    }

    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    pub fn model(&self) -> PursuerModel {
        self.model
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    /// Convex hull of the boundary, counterclockwise.
    pub fn hull(&self) -> &[Point2] {
        &self.hull
    }

    pub fn tolerance(&self) -> f64 {
        self.polygon.tolerance()
    }

    /// True when the closed segment `pq` stays in the closed region `side`.
    pub fn segment_in(&self, p: Point2, q: Point2, side: Side) -> bool {
        Probe {
            polygon: &self.polygon,
        }
        .segment_in(p, q, side)
    }

    pub fn in_hull(&self, p: Point2) -> bool {
        let m = self.hull.len();
        (0..m).all(|i| {
            let a = self.hull[i];
            let b = self.hull[(i + 1) % m];
            orientation(a, b, p, self.tolerance()) >= 0
                || point_segment_distance(p, a, b) <= self.tolerance()
        })
    }

    pub fn in_escaper_domain(&self, p: Point2) -> bool {
        self.polygon.locate(p) != Location::Outside
    }

    pub fn in_pursuer_domain(&self, p: Point2) -> bool {
        match self.model {
            PursuerModel::Moat => self.polygon.locate(p) == Location::Boundary,
            PursuerModel::Exterior => self.polygon.locate(p) != Location::Inside && self.in_hull(p),
        }
    }

    pub fn on_boundary(&self, p: Point2) -> bool {
        self.polygon.locate(p) == Location::Boundary
    }

    fn check(&self, p: Point2, metric: Metric) -> Result<(), GeometryError> {
        let ok = match metric {
            Metric::Escaper => self.in_escaper_domain(p),
            Metric::Pursuer => self.in_pursuer_domain(p),
        };
        if ok {
            Ok(())
        } else {
            Err(GeometryError::OutsideDomain {
                x: p.x,
                y: p.y,
                domain: match metric {
                    Metric::Escaper => "escaper",
                    Metric::Pursuer => "pursuer",
                },
            })
        }
    }

    fn side_of(&self, metric: Metric) -> Side {
        match metric {
            Metric::Escaper => Side::Interior,
            Metric::Pursuer => Side::Exterior,
        }
    }

    fn graph(&self, side: Side) -> &VertexGraph {
        match side {
            Side::Interior => &self.interior,
            Side::Exterior => &self.exterior,
        }
    }

    /// Prepares `p` for repeated queries; the caller guarantees domain membership.
    pub fn anchor(&self, p: Point2, metric: Metric) -> Anchor {
        if metric == Metric::Pursuer && self.model == PursuerModel::Moat {
            return Anchor {
                point: p,
                metric,
                arc: self.polygon.boundary_param(p),
                visible: Vec::new(),
                to_vertex: Vec::new(),
            };
        }
        let side = self.side_of(metric);
        let g = self.graph(side);
        let n = self.polygon.len();
        let visible: Vec<bool> = (0..n)
            .map(|v| self.segment_in(p, self.polygon.vertex(v), side))
            .collect();
        let mut to_vertex = vec![f64::INFINITY; n];
        for u in (0..n).filter(|&u| visible[u]) {
            let du = p.dist(self.polygon.vertex(u));
            for (v, slot) in to_vertex.iter_mut().enumerate() {
                let cand = du + g.d(u, v);
                if cand < *slot {
                    *slot = cand;
                }
            }
        }
        Anchor {
            point: p,
            metric,
            arc: None,
            visible,
            to_vertex,
        }
    }

    /// Distance between two anchors prepared for the same metric.
    pub fn anchored_distance(&self, a: &Anchor, b: &Anchor) -> f64 {
        debug_assert_eq!(a.metric, b.metric);
        if let (Some(s), Some(t)) = (a.arc, b.arc) {
            return self.polygon.arc_delta(s, t).abs();
        }
        if a.point == b.point {
            return 0.0;
        }
        let side = self.side_of(a.metric);
        if self.segment_in(a.point, b.point, side) {
            return a.point.dist(b.point);
        }
        let n = self.polygon.len();
        (0..n)
            .filter(|&v| b.visible[v])
            .map(|v| a.to_vertex[v] + b.point.dist(self.polygon.vertex(v)))
            .fold(f64::INFINITY, f64::min)
    }

    /// Interior geodesic distance `d_h`.
    pub fn interior_distance(&self, p: Point2, q: Point2) -> Result<f64, GeometryError> {
        self.distance(p, q, Metric::Escaper)
    }

    /// Pursuer-domain geodesic distance `d_z` for the configured model.
    pub fn pursuer_distance(&self, p: Point2, q: Point2) -> Result<f64, GeometryError> {
        self.distance(p, q, Metric::Pursuer)
    }

    /// Moat (boundary arc) distance regardless of the configured model.
    pub fn moat_distance(&self, p: Point2, q: Point2) -> Result<f64, GeometryError> {
        let s = self.polygon.boundary_param(p);
        let t = self.polygon.boundary_param(q);
        match (s, t) {
            (Some(s), Some(t)) => Ok(self.polygon.arc_delta(s, t).abs()),
            _ => {
                let bad = if s.is_none() { p } else { q };
                Err(GeometryError::OutsideDomain {
                    x: bad.x,
                    y: bad.y,
                    domain: "boundary",
                })
            }
        }
    }

    pub fn distance(&self, p: Point2, q: Point2, metric: Metric) -> Result<f64, GeometryError> {
        self.check(p, metric)?;
        self.check(q, metric)?;
        if p == q {
            return Ok(0.0);
        }
        if metric == Metric::Pursuer && self.model == PursuerModel::Moat {
            return self.moat_distance(p, q);
        }
        if self.segment_in(p, q, self.side_of(metric)) {
            return Ok(p.dist(q));
        }
        let a = self.anchor(p, metric);
        let b = self.anchor(q, metric);
        Ok(self.anchored_distance(&a, &b))
    }

    /// A shortest path from `p` to `q` in the given metric, as a polyline.
    pub fn shortest_path(&self, p: Point2, q: Point2, metric: Metric) -> Result<Vec<Point2>, GeometryError> {
        self.check(p, metric)?;
        self.check(q, metric)?;
        if metric == Metric::Pursuer && self.model == PursuerModel::Moat {
            return Ok(self.moat_path(p, q));
        }
        let side = self.side_of(metric);
        if p == q || self.segment_in(p, q, side) {
            return Ok(vec![p, q]);
        }
        let g = self.graph(side);
        let a = self.anchor(p, metric);
        let b = self.anchor(q, metric);
        let n = self.polygon.len();
        let mut best = (f64::INFINITY, 0, 0);
        for u in (0..n).filter(|&u| a.visible[u]) {
            let du = p.dist(self.polygon.vertex(u));
            for v in (0..n).filter(|&v| b.visible[v]) {
                let c = du + g.d(u, v) + q.dist(self.polygon.vertex(v));
                if c < best.0 {
                    best = (c, u, v);
                }
            }
        }
        let mut out = vec![p];
        out.extend(g.route(best.1, best.2).into_iter().map(|i| self.polygon.vertex(i)));
        out.push(q);
        out.dedup();
        Ok(out)
    }

    fn moat_path(&self, p: Point2, q: Point2) -> Vec<Point2> {
        let poly = &self.polygon;
        let s = poly.boundary_param(p).unwrap_or(0.0);
        let t = poly.boundary_param(q).unwrap_or(0.0);
        let delta = poly.arc_delta(s, t);
        let f = poly.perimeter();
        let mut out = vec![p];
        let n = poly.len();
        // vertices strictly between s and s + delta along the walk
        let mut stops: Vec<(f64, Point2)> = (0..n)
            .filter_map(|v| {
                let a = poly.arc_start(v);
                let off = if delta >= 0.0 {
                    (a - s).rem_euclid(f)
                } else {
                    (s - a).rem_euclid(f)
                };
                (off > 0.0 && off < delta.abs()).then(|| (off, poly.vertex(v)))
            })
            .collect();
        stops.sort_by(|x, y| x.0.total_cmp(&y.0));
        out.extend(stops.into_iter().map(|(_, v)| v));
        out.push(q);
        out.dedup();
        out
    }
}

struct Probe<'a> {
    polygon: &'a Polygon,
}

impl Probe<'_> {
    fn segment_in(&self, p: Point2, q: Point2, side: Side) -> bool {
        let poly = self.polygon;
        let tol = poly.tolerance();
        if p.dist(q) <= tol {
            return match side {
                Side::Interior => poly.locate(p) != Location::Outside,
                Side::Exterior => poly.locate(p) != Location::Inside,
            };
        }
        let mut cuts = vec![0.0, 1.0];
        for i in 0..poly.len() {
            let (a, b) = poly.edge(i);
            let o1 = orientation(p, q, a, tol);
            let o2 = orientation(p, q, b, tol);
            let o3 = orientation(a, b, p, tol);
            let o4 = orientation(a, b, q, tol);
            if o1 * o2 < 0 && o3 * o4 < 0 {
                return false;
            }
            let (proj, t) = project_to_segment(a, p, q);
            if a.dist(proj) <= tol && t > 0.0 && t < 1.0 {
                cuts.push(t);
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.windows(2).filter(|w| w[1] - w[0] > 1e-12).all(|w| {
            let mid = p.lerp(q, 0.5 * (w[0] + w[1]));
            match side {
                Side::Interior => poly.locate(mid) != Location::Outside,
                Side::Exterior => poly.locate(mid) != Location::Inside,
            }
        })
    }
}
