use super::{orientation, Point2, Polygon};

/// Triangle given by polygon vertex indices, counterclockwise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Triangle {
    pub indices: [usize; 3],
    pub corners: [Point2; 3],
}

impl Triangle {
    pub fn area(&self) -> f64 {
        let [a, b, c] = self.corners;
        0.5 * (b - a).cross(c - a)
    }

    pub fn perimeter(&self) -> f64 {
        let [a, b, c] = self.corners;
        a.dist(b) + b.dist(c) + c.dist(a)
    }

    /// Area over semiperimeter.
    pub fn inradius(&self) -> f64 {
        2.0 * self.area() / self.perimeter()
    }
}

/// Ear-clipping triangulation; always returns `n - 2` triangles.
pub fn triangulate(polygon: &Polygon) -> Vec<Triangle> {
    let pts = polygon.vertices();
    let tol = polygon.tolerance();
    let mut ring: Vec<usize> = (0..pts.len()).collect();
    let mut out = Vec::with_capacity(pts.len().saturating_sub(2));

    while ring.len() > 3 {
        let m = ring.len();
        let ear = (0..m)
            .find(|&k| is_ear(pts, &ring, k, tol))
            // Only collinear runs remain; clipping a flat vertex keeps the count right.
            .or_else(|| {
                (0..m).find(|&k| {
                    let (a, b, c) = corner(pts, &ring, k);
                    orientation(a, b, c, tol) >= 0
                })
            })
            .unwrap_or(0);
        let prev = ring[(ear + m - 1) % m];
        let cur = ring[ear];
        let next = ring[(ear + 1) % m];
        out.push(make(pts, [prev, cur, next]));
        ring.remove(ear);
    }
    out.push(make(pts, [ring[0], ring[1], ring[2]]));
    out
}

fn corner(pts: &[Point2], ring: &[usize], k: usize) -> (Point2, Point2, Point2) {
    let m = ring.len();
    (pts[ring[(k + m - 1) % m]], pts[ring[k]], pts[ring[(k + 1) % m]])
}

fn is_ear(pts: &[Point2], ring: &[usize], k: usize, tol: f64) -> bool {
    let m = ring.len();
    let (a, b, c) = corner(pts, ring, k);
    if orientation(a, b, c, tol) <= 0 {
        return false;
    }
    let skip = [ring[(k + m - 1) % m], ring[k], ring[(k + 1) % m]];
    ring.iter().filter(|i| !skip.contains(i)).all(|&i| {
        let p = pts[i];
        if p == a || p == b || p == c {
            return true;
        }
        // Any other vertex inside or on the candidate triangle blocks the ear.
        !(orientation(a, b, p, tol) >= 0
            && orientation(b, c, p, tol) >= 0
            && orientation(c, a, p, tol) >= 0)
    })
}

fn make(pts: &[Point2], idx: [usize; 3]) -> Triangle {
    Triangle {
        indices: idx,
        corners: [pts[idx[0]], pts[idx[1]], pts[idx[2]]],
    }
}
