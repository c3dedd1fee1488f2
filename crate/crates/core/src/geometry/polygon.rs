use std::f64::consts::PI;

use super::{
    orientation, point_segment_distance, project_to_segment, segment_segment_distance,
    segments_intersect, GeometryError, Point2, RELATIVE_TOLERANCE,
};

/// Where a point sits relative to a polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// A validated simple polygon with counterclockwise vertex order.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point2>,
    /// Arc-length position of each vertex along the boundary, starting at 0.
    arc_starts: Vec<f64>,
    perimeter: f64,
    tolerance: f64,
}

/// Checks the simple-polygon invariants and returns a counterclockwise polygon.
pub fn validate_polygon(points: &[Point2]) -> Result<Polygon, GeometryError> {
    let n = points.len();
    if n < 3 {
        return Err(GeometryError::TooFewVertices(n));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    let tol = tolerance_for(points);
    for i in 0..n {
        let j = (i + 1) % n;
        if points[i].dist(points[j]) <= tol {
            return Err(GeometryError::DegenerateEdge(i, j));
        }
    }
    for i in 0..n {
        let (a, b) = (points[i], points[(i + 1) % n]);
        for j in (i + 1)..n {
            let (c, d) = (points[j], points[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Shared vertex is fine; folding back onto the neighbour is not.
                let (shared, other_a, other_b) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                let u = other_a - shared;
                let v = other_b - shared;
                if u.cross(v).abs() <= tol * u.norm().max(v.norm()) && u.dot(v) > 0.0 {
                    return Err(GeometryError::SelfIntersecting(i, j));
                }
                continue;
            }
            if segments_intersect(a, b, c, d, tol) {
                return Err(GeometryError::SelfIntersecting(i, j));
            }
        }
    }
    let area = signed_area(points);
    let perimeter: f64 = (0..n).map(|i| points[i].dist(points[(i + 1) % n])).sum();
    if area.abs() <= tol * perimeter {
        return Err(GeometryError::ZeroArea);
    }
    let mut vertices = points.to_vec();
    if area < 0.0 {
        vertices[1..].reverse();
    }
    Ok(Polygon::from_ccw(vertices, tol))
}

fn tolerance_for(points: &[Point2]) -> f64 {
    let (mut lo, mut hi) = (points[0], points[0]);
    for p in points {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    RELATIVE_TOLERANCE * lo.dist(hi)
}

pub(crate) fn signed_area(points: &[Point2]) -> f64 {
    let n = points.len();
    0.5 * (0..n)
        .map(|i| points[i].cross(points[(i + 1) % n]))
        .sum::<f64>()
}

impl Polygon {
    fn from_ccw(vertices: Vec<Point2>, tolerance: f64) -> Self {
        let n = vertices.len();
        let mut arc_starts = Vec::with_capacity(n);
        let mut acc = 0.0;
        for i in 0..n {
            arc_starts.push(acc);
            acc += vertices[i].dist(vertices[(i + 1) % n]);
        }
        Polygon {
            vertices,
            arc_starts,
            perimeter: acc,
            tolerance,
        }
    }

    /// Axis-aligned rectangle `[0, w] x [0, h]`.
    pub fn rectangle(w: f64, h: f64) -> Result<Self, GeometryError> {
        validate_polygon(&[
            Point2::new(0.0, 0.0),
            Point2::new(w, 0.0),
            Point2::new(w, h),
            Point2::new(0.0, h),
        ])
    }

    /// Regular `n`-gon inscribed in the circle of radius `radius` about the origin.
    pub fn regular(n: usize, radius: f64) -> Result<Self, GeometryError> {
        let pts: Vec<Point2> = (0..n)
            .map(|k| Point2::from_polar(radius, 2.0 * PI * k as f64 / n as f64))
            .collect();
        validate_polygon(&pts)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Point2 {
        self.vertices[i % self.vertices.len()]
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> (Point2, Point2) {
        (self.vertex(i), self.vertex(i + 1))
    }

    pub fn edge_length(&self, i: usize) -> f64 {
        let (a, b) = self.edge(i);
        a.dist(b)
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn bounding_box(&self) -> (Point2, Point2) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for p in &self.vertices {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (lo, hi)
    }

    pub fn arc_start(&self, vertex: usize) -> f64 {
        self.arc_starts[vertex % self.len()]
    }

    /// Interior angle at vertex `i`, in (0, 2π).
    pub fn interior_angle(&self, i: usize) -> f64 {
        let n = self.len();
        let v = self.vertex(i);
        let prev = self.vertex(i + n - 1);
        let next = self.vertex(i + 1);
        let a = next - v;
        let b = prev - v;
        let ang = a.cross(b).atan2(a.dot(b));
        if ang <= 0.0 {
            ang + 2.0 * PI
        } else {
            ang
        }
    }

    pub fn is_reflex(&self, i: usize) -> bool {
        let n = self.len();
        orientation(self.vertex(i + n - 1), self.vertex(i), self.vertex(i + 1), self.tolerance) < 0
    }

    pub fn is_convex(&self) -> bool {
        (0..self.len()).all(|i| !self.is_reflex(i))
    }

    pub fn min_interior_angle(&self) -> f64 {
        (0..self.len())
            .map(|i| self.interior_angle(i))
            .fold(f64::INFINITY, f64::min)
    }

    /// Minimum distance between boundary pieces that do not share a vertex:
    /// nonadjacent edge pairs and vertices against non-incident edges (the
    /// latter is what remains for triangles).
    pub fn min_feature_size(&self) -> f64 {
        let n = self.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            let (a, b) = self.edge(i);
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                let (c, d) = self.edge(j);
                best = best.min(segment_segment_distance(a, b, c, d));
            }
            for v in 0..n {
                if v == i || v == (i + 1) % n {
                    continue;
                }
                best = best.min(point_segment_distance(self.vertex(v), a, b));
            }
        }
        best
    }

    pub fn locate(&self, p: Point2) -> Location {
        let n = self.len();
        let mut inside = false;
        for i in 0..n {
            let (a, b) = self.edge(i);
            if point_segment_distance(p, a, b) <= self.tolerance {
                return Location::Boundary;
            }
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if x > p.x {
                    inside = !inside;
                }
            }
        }
        if inside {
            Location::Inside
        } else {
            Location::Outside
        }
    }

    /// Counterclockwise arc-length parameter of a boundary point, or `None`
    /// when `p` is farther than the tolerance from the boundary.
    pub fn boundary_param(&self, p: Point2) -> Option<f64> {
        let (edge, t, d) = self.closest_edge(p);
        (d <= self.tolerance).then(|| {
            let s = self.arc_starts[edge] + t * self.edge_length(edge);
            if s >= self.perimeter {
                s - self.perimeter
            } else {
                s
            }
        })
    }

    /// Index of the nearest edge, parameter along it, and the distance.
    pub fn closest_edge(&self, p: Point2) -> (usize, f64, f64) {
        let mut best = (0, 0.0, f64::INFINITY);
        for i in 0..self.len() {
            let (a, b) = self.edge(i);
            let (q, t) = project_to_segment(p, a, b);
            let d = p.dist(q);
            if d < best.2 {
                best = (i, t, d);
            }
        }
        best
    }

    pub fn nearest_boundary_point(&self, p: Point2) -> Point2 {
        let (e, t, _) = self.closest_edge(p);
        let (a, b) = self.edge(e);
        a.lerp(b, t)
    }

    /// Boundary point at counterclockwise arc length `s` (taken modulo the perimeter).
    pub fn point_at(&self, s: f64) -> Point2 {
        let (e, t) = self.edge_at(s);
        let (a, b) = self.edge(e);
        a.lerp(b, t)
    }

    /// Edge index and parameter for arc length `s`.
    pub fn edge_at(&self, s: f64) -> (usize, f64) {
        let s = s.rem_euclid(self.perimeter);
        let e = match self
            .arc_starts
            .binary_search_by(|a| a.total_cmp(&s))
        {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let len = self.edge_length(e);
        (e, ((s - self.arc_starts[e]) / len).clamp(0.0, 1.0))
    }

    /// Signed counterclockwise boundary displacement from `s0` to `s1`,
    /// reduced to the shorter way round.
    pub fn arc_delta(&self, s0: f64, s1: f64) -> f64 {
        let f = self.perimeter;
        let mut d = (s1 - s0).rem_euclid(f);
        if d > f / 2.0 {
            d -= f;
        }
        d
    }

    pub fn scaled(&self, s: f64) -> Polygon {
        let pts: Vec<Point2> = self.vertices.iter().map(|&p| p * s).collect();
        Polygon::from_ccw(pts, self.tolerance * s.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn pts(v: &[(f64, f64)]) -> Vec<Point2> {
        v.iter().map(|&(x, y)| Point2::new(x, y)).collect()
    }

    pub(crate) fn l_shape() -> Polygon {
        validate_polygon(&pts(&[
            (0.0, 0.0),
            (2.0, 0.0),
            (2.0, 1.0),
            (1.0, 1.0),
            (1.0, 2.0),
            (0.0, 2.0),
        ]))
        .unwrap()
    }

    #[test]
    fn unit_square_features() {
        let sq = validate_polygon(&pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])).unwrap();
        assert_eq!(sq.perimeter(), 4.0);
        assert_eq!(sq.min_feature_size(), 1.0);
        assert!((sq.min_interior_angle() - FRAC_PI_2).abs() < 1e-15);
        assert!(sq.area() > 0.0);
    }

    #[test]
    fn clockwise_input_is_reversed() {
        let cw = validate_polygon(&pts(&[(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)])).unwrap();
        assert!((cw.area() - 1.0).abs() < 1e-15);
        assert_eq!(cw.perimeter(), 4.0);
        assert!(cw.is_convex());
    }

    #[test]
    fn bowtie_is_rejected() {
        let err = validate_polygon(&pts(&[(0.0, 0.0), (2.0, 0.0), (0.0, 2.0), (2.0, 2.0)]));
        assert!(matches!(err, Err(GeometryError::SelfIntersecting(_, _))));
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            validate_polygon(&pts(&[(0.0, 0.0), (1.0, 0.0)])),
            Err(GeometryError::TooFewVertices(2))
        );
        assert!(matches!(
            validate_polygon(&pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 1.0)])),
            Err(GeometryError::DegenerateEdge(1, 2))
        ));
        assert!(matches!(
            validate_polygon(&pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)])),
            Err(GeometryError::SelfIntersecting(_, _))
        ));
        assert!(matches!(
            validate_polygon(&pts(&[(0.0, 0.0), (1.0, 0.0), (3.0, 0.0), (2.0, 0.0)])),
            Err(GeometryError::SelfIntersecting(_, _))
        ));
        // vertex touching a nonadjacent edge
        assert!(matches!(
            validate_polygon(&pts(&[(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (1.0, 0.0), (0.0, 2.0)])),
            Err(GeometryError::SelfIntersecting(_, _))
        ));
    }

    #[test]
    fn rectangle_feature_size() {
        let r = Polygon::rectangle(1.0, 10.0).unwrap();
        assert_eq!(r.min_feature_size(), 1.0);
    }

    #[test]
    fn l_shape_features() {
        let l = l_shape();
        assert_eq!(l.min_feature_size(), 1.0);
        assert!((l.min_interior_angle() - FRAC_PI_2).abs() < 1e-12);
        assert!((l.interior_angle(3) - 3.0 * FRAC_PI_2).abs() < 1e-12);
        assert!(l.is_reflex(3));
        assert!(!l.is_convex());
    }

    #[test]
    fn equilateral_triangle_feature_size_is_altitude() {
        let t = validate_polygon(&pts(&[(0.0, 0.0), (1.0, 0.0), (0.5, 3f64.sqrt() / 2.0)])).unwrap();
        assert!((t.min_feature_size() - 3f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn arc_parameters() {
        let sq = Polygon::rectangle(1.0, 1.0).unwrap();
        assert_eq!(sq.boundary_param(Point2::new(0.5, 0.0)), Some(0.5));
        assert_eq!(sq.boundary_param(Point2::new(0.5, 1.0)), Some(2.5));
        assert_eq!(sq.boundary_param(Point2::new(0.5, 0.5)), None);
        assert_eq!(sq.point_at(3.5), Point2::new(0.0, 0.5));
        assert_eq!(sq.point_at(4.25), Point2::new(0.25, 0.0));
        assert!((sq.arc_delta(3.5, 0.5) - 1.0).abs() < 1e-15);
        assert!((sq.arc_delta(0.5, 3.5) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn locate_points() {
        let l = l_shape();
        assert_eq!(l.locate(Point2::new(0.5, 0.5)), Location::Inside);
        assert_eq!(l.locate(Point2::new(1.5, 1.5)), Location::Outside);
        assert_eq!(l.locate(Point2::new(1.5, 1.0)), Location::Boundary);
        assert_eq!(l.locate(Point2::new(0.0, 0.0)), Location::Boundary);
    }
}
