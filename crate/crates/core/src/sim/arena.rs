use std::f64::consts::PI;

use crate::geometry::{MetricContext, Point2};

/// Playing field: the two player domains, the exit set and both metrics.
pub trait Arena {
    fn escaper_distance(&self, a: Point2, b: Point2) -> f64;
    fn pursuer_distance(&self, a: Point2, b: Point2) -> f64;
    fn in_escaper_domain(&self, p: Point2) -> bool;
    fn in_pursuer_domain(&self, p: Point2) -> bool;
    fn is_exit(&self, p: Point2) -> bool;
    fn tolerance(&self) -> f64;
    fn shape(&self) -> ArenaShape;
}

/// What to draw for an arena.
#[derive(Clone, Debug, PartialEq)]
pub enum ArenaShape {
    Disk { center: Point2, radius: f64 },
    HalfPlane { direction: Point2 },
    Wedge { half_angle: f64 },
    Polygon(Vec<Point2>),
}

/// The whole plane with the Euclidean metric and no exits; used to check
/// free-space trajectories.
#[derive(Clone, Copy, Debug, Default)]
pub struct PlaneArena;

impl Arena for PlaneArena {
    fn escaper_distance(&self, a: Point2, b: Point2) -> f64 {
        a.dist(b)
    }

    fn pursuer_distance(&self, a: Point2, b: Point2) -> f64 {
        a.dist(b)
    }

    fn in_escaper_domain(&self, p: Point2) -> bool {
        p.is_finite()
    }

    fn in_pursuer_domain(&self, p: Point2) -> bool {
        p.is_finite()
    }

    fn is_exit(&self, _p: Point2) -> bool {
        false
    }

    fn tolerance(&self) -> f64 {
        1e-9
    }

    fn shape(&self) -> ArenaShape {
        ArenaShape::Polygon(Vec::new())
    }
}

/// Unit disk at the origin; the pursuer runs on the unit circle.
#[derive(Clone, Copy, Debug, Default)]
pub struct DiskArena;

pub const DISK_TOLERANCE: f64 = 1e-9;

impl Arena for DiskArena {
    fn escaper_distance(&self, a: Point2, b: Point2) -> f64 {
        a.dist(b)
    }

    fn pursuer_distance(&self, a: Point2, b: Point2) -> f64 {
        let d = (b.angle() - a.angle()).rem_euclid(2.0 * PI);
        d.min(2.0 * PI - d)
    }

    fn in_escaper_domain(&self, p: Point2) -> bool {
        p.norm() <= 1.0 + DISK_TOLERANCE
    }

    fn in_pursuer_domain(&self, p: Point2) -> bool {
        (p.norm() - 1.0).abs() <= DISK_TOLERANCE
    }

    fn is_exit(&self, p: Point2) -> bool {
        p.norm() >= 1.0 - DISK_TOLERANCE
    }

    fn tolerance(&self) -> f64 {
        DISK_TOLERANCE
    }

    fn shape(&self) -> ArenaShape {
        ArenaShape::Disk {
            center: Point2::ORIGIN,
            radius: 1.0,
        }
    }
}

/// Halfplane to the right of the line through the origin with unit
/// `direction`; for `direction = (cos θ, sin θ)` the boundary points are
/// `(y / tan θ, y)` and `(1, 0)` is an interior point.
#[derive(Clone, Copy, Debug)]
pub struct HalfPlaneArena {
    pub direction: Point2,
}

impl HalfPlaneArena {
    pub fn with_angle(theta: f64) -> Self {
        HalfPlaneArena {
            direction: Point2::from_polar(1.0, theta),
        }
    }

    fn offset(&self, p: Point2) -> f64 {
        // positive on the escaper side
        -self.direction.cross(p)
    }
}

impl Arena for HalfPlaneArena {
    fn escaper_distance(&self, a: Point2, b: Point2) -> f64 {
        a.dist(b)
    }

    fn pursuer_distance(&self, a: Point2, b: Point2) -> f64 {
        a.dist(b)
    }

    fn in_escaper_domain(&self, p: Point2) -> bool {
        self.offset(p) >= -self.tolerance()
    }

    fn in_pursuer_domain(&self, p: Point2) -> bool {
        self.offset(p).abs() <= self.tolerance()
    }

    fn is_exit(&self, p: Point2) -> bool {
        self.in_pursuer_domain(p)
    }

    fn tolerance(&self) -> f64 {
        1e-9
    }

    fn shape(&self) -> ArenaShape {
        ArenaShape::HalfPlane {
            direction: self.direction,
        }
    }
}

/// Wedge with apex at the origin, bisector along +x and the given half-angle
/// in (0, π/2]. The pursuer runs along the two boundary rays.
#[derive(Clone, Copy, Debug)]
pub struct WedgeArena {
    pub half_angle: f64,
}

impl WedgeArena {
    fn ray_side(&self, p: Point2) -> f64 {
        if p.norm() <= self.tolerance() {
            0.0
        } else {
            p.y.signum()
        }
    }
}

impl Arena for WedgeArena {
    fn escaper_distance(&self, a: Point2, b: Point2) -> f64 {
        a.dist(b)
    }

    fn pursuer_distance(&self, a: Point2, b: Point2) -> f64 {
        let (sa, sb) = (self.ray_side(a), self.ray_side(b));
        if sa == 0.0 || sb == 0.0 || sa == sb {
            a.dist(b)
        } else {
            a.norm() + b.norm()
        }
    }

    fn in_escaper_domain(&self, p: Point2) -> bool {
        let tol = self.tolerance();
        let (s, c) = self.half_angle.sin_cos();
        // distance to each boundary line, positive inside
        let upper = p.x * s - p.y * c;
        let lower = p.x * s + p.y * c;
        upper >= -tol && lower >= -tol
    }

    fn in_pursuer_domain(&self, p: Point2) -> bool {
        self.is_exit(p)
    }

    fn is_exit(&self, p: Point2) -> bool {
        let tol = self.tolerance();
        let (s, c) = self.half_angle.sin_cos();
        let upper = p.x * s - p.y * c;
        let lower = p.x * s + p.y * c;
        self.in_escaper_domain(p) && (upper.abs() <= tol || lower.abs() <= tol)
    }

    fn tolerance(&self) -> f64 {
        1e-9
    }

    fn shape(&self) -> ArenaShape {
        ArenaShape::Wedge {
            half_angle: self.half_angle,
        }
    }
}

impl Arena for MetricContext {
    fn escaper_distance(&self, a: Point2, b: Point2) -> f64 {
        self.interior_distance(a, b).unwrap_or(f64::INFINITY)
    }

    fn pursuer_distance(&self, a: Point2, b: Point2) -> f64 {
        MetricContext::pursuer_distance(self, a, b).unwrap_or(f64::INFINITY)
    }

    fn in_escaper_domain(&self, p: Point2) -> bool {
        MetricContext::in_escaper_domain(self, p)
    }

    fn in_pursuer_domain(&self, p: Point2) -> bool {
        MetricContext::in_pursuer_domain(self, p)
    }

    fn is_exit(&self, p: Point2) -> bool {
        self.on_boundary(p)
    }

    fn tolerance(&self) -> f64 {
        MetricContext::tolerance(self)
    }

    fn shape(&self) -> ArenaShape {
        ArenaShape::Polygon(self.polygon().vertices().to_vec())
    }
}
