//! Closed-form critical speed ratios for canonical shapes and the strategies
//! that realise them.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Point2;
use crate::sim::{Policy, Role, SimError, Strategy, View};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("angle {0} outside (0, π]")]
    InvalidAngle(f64),
    #[error("invalid halfplane configuration: {0}")]
    InvalidConfiguration(String),
    #[error("invalid APLO parameters: {0}")]
    InvalidAplo(String),
    #[error("speed ratio must be positive and finite, got {0}")]
    InvalidRatio(f64),
}

/// Critical ratio of a wedge with opening angle `full_angle`.
pub fn wedge_r_star(full_angle: f64) -> Result<f64, ExactError> {
    if !(full_angle > 0.0 && full_angle <= PI) {
        return Err(ExactError::InvalidAngle(full_angle));
    }
    Ok(csc(full_angle / 2.0))
}

/// Critical ratio of the halfplane `y >= 0` with prescribed starts. `s_z`
/// must lie on the x-axis. An escaper starting on the boundary gives 1 when
/// the starts coincide and infinity otherwise.
pub fn halfplane_r_star(s_h: Point2, s_z: Point2) -> Result<f64, ExactError> {
    let scale = 1e-12 * (1.0 + s_h.norm().max(s_z.norm()));
    if !s_h.is_finite() || !s_z.is_finite() {
        return Err(ExactError::InvalidConfiguration("non-finite start".into()));
    }
    if s_z.y.abs() > scale {
        return Err(ExactError::InvalidConfiguration("pursuer start off the boundary line".into()));
    }
    if s_h.y < -scale {
        return Err(ExactError::InvalidConfiguration("escaper start below the boundary line".into()));
    }
    if s_h.y <= scale {
        return Ok(if (s_h.x - s_z.x).abs() <= scale { 1.0 } else { f64::INFINITY });
    }
    // θ ∈ (0, π/2] is the angle at s_z between s_h and the foot h'
    let theta = s_h.y.atan2((s_h.x - s_z.x).abs());
    Ok(csc(theta))
}

/// `1/sin x` as `hypot(1, cot x)`, which rounds special angles such as
/// π/6 and π/2 to their exact values.
fn csc(x: f64) -> f64 {
    1f64.hypot(1.0 / x.tan())
}

fn disk_residual(phi: f64) -> f64 {
    phi.tan() - PI - phi
}

/// Root of `tan φ = π + φ` in (0, π/2).
pub fn disk_phi_star() -> f64 {
    let (mut lo, mut hi) = (1.2_f64, 1.5_f64);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if disk_residual(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut phi = 0.5 * (lo + hi);
    for _ in 0..4 {
        let c = phi.cos();
        let step = disk_residual(phi) / (1.0 / (c * c) - 1.0);
        let next = phi - step;
        if !(lo..=hi).contains(&next) {
            break;
        }
        phi = next;
    }
    phi
}

pub fn disk_r_star() -> f64 {
    1.0 / disk_phi_star().cos()
}

pub fn triangle_r_star() -> f64 {
    (3.0 + 5f64.sqrt()) * 2f64.sqrt()
}

pub fn square_r_star() -> f64 {
    (2.5 * (7.0 + 41f64.sqrt())).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalValue {
    pub shape: String,
    pub formula: String,
    pub r_star: f64,
}

/// Table of canonical values; the wedge row is evaluated at `wedge_angle`.
pub fn canonical_table(wedge_angle: f64) -> Result<Vec<CanonicalValue>, ExactError> {
    let row = |shape: &str, formula: &str, r_star: f64| CanonicalValue {
        shape: shape.into(),
        formula: formula.into(),
        r_star,
    };
    Ok(vec![
        row("halfplane", "1/sin(pi/2)", wedge_r_star(PI)?),
        row(
            &format!("wedge(2theta={wedge_angle:.6})"),
            "1/sin(theta)",
            wedge_r_star(wedge_angle)?,
        ),
        row("disk", "1/cos(phi*), tan(phi*) = pi + phi*", disk_r_star()),
        row("equilateral triangle", "(3+sqrt5)*sqrt2", triangle_r_star()),
        row("square", "sqrt(5/2*(7+sqrt41))", square_r_star()),
    ])
}

/// Net signed counterclockwise boundary progress of the pursuer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignedProgress(pub f64);

/// Parameters of an axially progressing, laterally opposing escaper run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AploParams {
    pub h0: Point2,
    pub axial: Point2,
    pub lateral: Point2,
    pub r_prime: f64,
    pub du: f64,
    pub dv: f64,
}

impl AploParams {
    pub fn new(h0: Point2, axial: Point2, r_prime: f64, du: f64, dv: f64) -> Result<Self, ExactError> {
        let len = axial.norm();
        if !h0.is_finite() || !(len > 0.0 && len.is_finite()) {
            return Err(ExactError::InvalidAplo("start and axis must be finite, axis nonzero".into()));
        }
        if !(r_prime > 0.0 && r_prime.is_finite()) {
            return Err(ExactError::InvalidAplo(format!("r' = {r_prime}")));
        }
        if !(du > 0.0 && dv > 0.0) || du.hypot(dv) > 1.0 + 1e-12 {
            return Err(ExactError::InvalidAplo(format!("du = {du}, dv = {dv}")));
        }
        let axial = axial * (1.0 / len);
        Ok(AploParams {
            h0,
            axial,
            lateral: axial.perp(),
            r_prime,
            du,
            dv,
        })
    }
}

/// `h0 + t·du·û + (D/r′)·dv·v̂`.
pub fn aplo_position(params: &AploParams, d: SignedProgress, t: f64) -> Point2 {
    params.h0 + params.axial * (t * params.du) + params.lateral * (d.0 / params.r_prime * params.dv)
}

/// Wedge projection pursuer, apex at the origin, bisector along +x.
pub fn wedge_pursuer_position(half_angle: f64, h: Point2) -> Point2 {
    Point2::new(h.y.abs() / half_angle.tan(), h.y)
}

/// Halfplane projection pursuer with `s_z` at the origin, `s_h = (1, 0)` and
/// boundary points `(y / tan θ, y)`.
pub fn halfplane_pursuer_position(theta: f64, h: Point2) -> Point2 {
    Point2::new(h.y / theta.tan(), h.y)
}

fn wrap_angle(a: f64) -> f64 {
    let w = (a + PI).rem_euclid(2.0 * PI) - PI;
    if w == -PI {
        PI
    } else {
        w
    }
}

/// Boundary of a wedge or halfplane through the origin, parametrised by the
/// signed distance `u` from the origin: `u >= 0` runs along angle `θ`, `u < 0`
/// along `-θ` (wedge) or `θ + π` (halfplane).
#[derive(Clone, Copy, Debug, PartialEq)]
enum Rays {
    Halfplane(f64),
    Wedge(f64),
}

impl Rays {
    fn angle(self) -> f64 {
        match self {
            Rays::Halfplane(t) | Rays::Wedge(t) => t,
        }
    }

    fn point(self, u: f64) -> Point2 {
        let theta = self.angle();
        match self {
            Rays::Wedge(_) if u < 0.0 => Point2::from_polar(-u, -theta),
            _ => Point2::from_polar(u, theta),
        }
    }

    fn target(self, h: Point2) -> f64 {
        h.y / self.angle().sin()
    }
}

/// Projection pursuer for a wedge or halfplane: heads along the boundary
/// for the point `(|y| / tan θ, y)` (wedge) or `(y / tan θ, y)` (halfplane)
/// at speed at most `speed`.
#[derive(Clone, Copy, Debug)]
pub struct ProjectionPursuer {
    rays: Rays,
    speed: f64,
}

impl ProjectionPursuer {
    pub fn halfplane(theta: f64, speed: f64) -> Self {
        ProjectionPursuer {
            rays: Rays::Halfplane(theta),
            speed,
        }
    }

    pub fn wedge(half_angle: f64, speed: f64) -> Self {
        ProjectionPursuer {
            rays: Rays::Wedge(half_angle),
            speed,
        }
    }
}

struct ProjectionPolicy {
    rays: Rays,
    speed: f64,
    u: f64,
}

impl Policy for ProjectionPolicy {
    fn position(&mut self, view: &View<'_>) -> Result<Point2, SimError> {
        let h = *view
            .opponent
            .last()
            .ok_or_else(|| SimError::StrategyFailed("pursuer needs the escaper start".into()))?;
        let target = self.rays.target(h);
        if view.k == 0 {
            self.u = target;
        } else {
            let step = self.speed * view.dt;
            self.u += (target - self.u).clamp(-step, step);
        }
        Ok(self.rays.point(self.u))
    }
}

impl Strategy for ProjectionPursuer {
    fn role(&self) -> Role {
        Role::Pursuer
    }

    fn max_speed(&self) -> f64 {
        self.speed
    }

    fn policy(&self) -> Box<dyn Policy + '_> {
        Box::new(ProjectionPolicy {
            rays: self.rays,
            speed: self.speed,
            u: 0.0,
        })
    }

    fn name(&self) -> String {
        format!("projection({:?}, r={})", self.rays, self.speed)
    }
}

/// Unit-speed walk through fixed waypoints, then standing still.
fn walk(waypoints: &[Point2], t: f64) -> Point2 {
    let mut left = t;
    for w in waypoints.windows(2) {
        let len = w[0].dist(w[1]);
        if left <= len {
            return if len == 0.0 { w[1] } else { w[0].lerp(w[1], left / len) };
        }
        left -= len;
    }
    *waypoints.last().expect("nonempty route")
}

/// Escaper running straight for the far side of the pursuer's start: in a
/// wedge from `(cos θ, 0)` to `(cos θ, ±sin θ)`, in the halfplane from
/// `(1, 0)` to `(1, tan θ)`, or via the origin to `(0, 1)` when θ = π/2.
/// Only the pursuer's start is consulted.
#[derive(Clone, Copy, Debug)]
pub struct StraightRunEscaper {
    rays: Rays,
}

impl StraightRunEscaper {
    pub fn halfplane(theta: f64) -> Self {
        StraightRunEscaper {
            rays: Rays::Halfplane(theta),
        }
    }

    pub fn wedge(half_angle: f64) -> Self {
        StraightRunEscaper {
            rays: Rays::Wedge(half_angle),
        }
    }

    pub fn start(&self) -> Point2 {
        match self.rays {
            Rays::Halfplane(_) => Point2::new(1.0, 0.0),
            Rays::Wedge(t) => Point2::new(t.cos(), 0.0),
        }
    }

    fn route(&self, s_z: Point2) -> Vec<Point2> {
        let start = self.start();
        let right_angle = (self.rays.angle() - FRAC_PI_2).abs() < 1e-12;
        match self.rays {
            Rays::Halfplane(_) if right_angle => vec![start, Point2::ORIGIN, Point2::new(0.0, 1.0)],
            Rays::Halfplane(t) => vec![start, Point2::new(1.0, t.tan())],
            Rays::Wedge(t) => {
                let side = if s_z.y <= 0.0 { 1.0 } else { -1.0 };
                let end = if right_angle {
                    Point2::new(0.0, side)
                } else {
                    Point2::new(t.cos(), side * t.sin())
                };
                vec![start, end]
            }
        }
    }
}

struct RoutePolicy {
    owner: StraightRunEscaper,
    route: Option<Vec<Point2>>,
}

impl Policy for RoutePolicy {
    fn position(&mut self, view: &View<'_>) -> Result<Point2, SimError> {
        if view.k == 0 {
            return Ok(self.owner.start());
        }
        let s_z = view.opponent[0];
        let owner = self.owner;
        let route = self.route.get_or_insert_with(|| owner.route(s_z));
        Ok(walk(route, view.t()))
    }
}

impl Strategy for StraightRunEscaper {
    fn role(&self) -> Role {
        Role::Escaper
    }

    fn max_speed(&self) -> f64 {
        1.0
    }

    fn policy(&self) -> Box<dyn Policy + '_> {
        Box::new(RoutePolicy {
            owner: *self,
            route: None,
        })
    }

    fn name(&self) -> String {
        format!("straight-run({:?})", self.rays)
    }
}

/// Largest lateral speed the disk escaper uses when told `r >= r*`.
pub const DISK_MAX_LATERAL: f64 = 0.999;
/// Slack on the pursuer's gate radius so that an escaper circling exactly on
/// `C` never triggers a chase through rounding.
const GATE_SLACK: f64 = 1e-12;
const MAX_REVOLUTIONS: f64 = 10.0;

/// Unit-disk pursuer: stands still while the escaper is within radius
/// `1/r*`, otherwise runs along the shorter arc toward the escaper's radial
/// projection at speed `r`.
#[derive(Clone, Copy, Debug)]
pub struct ArcChasingPursuer {
    pub speed: f64,
    gate: f64,
}

impl ArcChasingPursuer {
    pub fn new(speed: f64) -> Self {
        ArcChasingPursuer {
            speed,
            gate: 1.0 / disk_r_star(),
        }
    }
}

struct ArcChasePolicy {
    speed: f64,
    gate: f64,
}

impl Policy for ArcChasePolicy {
    fn position(&mut self, view: &View<'_>) -> Result<Point2, SimError> {
        let h = *view
            .opponent
            .last()
            .ok_or_else(|| SimError::StrategyFailed("pursuer needs the escaper start".into()))?;
        let Some(&z) = view.own.last() else {
            let n = h.norm();
            return Ok(if n > 0.0 { h * (1.0 / n) } else { Point2::new(1.0, 0.0) });
        };
        if h.norm() <= self.gate + GATE_SLACK {
            return Ok(z);
        }
        let gap = wrap_angle(h.angle() - z.angle());
        let step = self.speed * view.dt;
        if gap.abs() <= step {
            return Ok(Point2::from_polar(1.0, h.angle()));
        }
        Ok(Point2::from_polar(1.0, z.angle() + step.copysign(gap)))
    }
}

impl Strategy for ArcChasingPursuer {
    fn role(&self) -> Role {
        Role::Pursuer
    }

    fn max_speed(&self) -> f64 {
        self.speed
    }

    fn policy(&self) -> Box<dyn Policy + '_> {
        Box::new(ArcChasePolicy {
            speed: self.speed,
            gate: self.gate,
        })
    }

    fn name(&self) -> String {
        format!("arc-chasing(r={})", self.speed)
    }
}

/// Unit-disk escaper: starts at `(1/r*, 0)`, circles on radius `1/r*` until
/// antipodal to the pursuer, then runs APLO away from the pursuer with
/// `dv = r/r*` (capped at [`DISK_MAX_LATERAL`]) and `du = √(1 − dv²)`.
/// Steps are clipped to unit speed when the pursuer outruns the assumed `r`.
#[derive(Clone, Copy, Debug)]
pub struct DiskEscaper {
    pub assumed_speed: f64,
    pub dv: f64,
    pub du: f64,
    radius: f64,
}

impl DiskEscaper {
    pub fn new(r: f64) -> Self {
        let r_star = disk_r_star();
        let dv = (r / r_star).min(DISK_MAX_LATERAL);
        DiskEscaper {
            assumed_speed: r,
            dv,
            du: (1.0 - dv * dv).sqrt(),
            radius: 1.0 / r_star,
        }
    }

    pub fn start(&self) -> Point2 {
        Point2::new(self.radius, 0.0)
    }
}

enum DiskPhase {
    Circling { travelled: f64 },
    Aplo { params: AploParams, k0: usize, seen: usize, progress: f64, last: Point2 },
    Landed(Point2),
}

struct DiskEscaperPolicy {
    owner: DiskEscaper,
    phase: DiskPhase,
}

impl Policy for DiskEscaperPolicy {
    fn position(&mut self, view: &View<'_>) -> Result<Point2, SimError> {
        let o = self.owner;
        let Some(&h) = view.own.last() else {
            return Ok(o.start());
        };
        let z = *view
            .opponent
            .last()
            .ok_or_else(|| SimError::StrategyFailed("escaper step without pursuer history".into()))?;
        match &mut self.phase {
            DiskPhase::Landed(p) => Ok(*p),
            DiskPhase::Circling { travelled } => {
                let gap = wrap_angle(z.angle() + PI - h.angle());
                let step = view.dt / o.radius;
                if gap.abs() > step {
                    *travelled += step;
                    if *travelled > MAX_REVOLUTIONS * 2.0 * PI {
                        return Err(SimError::StrategyFailed("disk escaper never became antipodal".into()));
                    }
                    return Ok(Point2::from_polar(o.radius, h.angle() + step.copysign(gap)));
                }
                let h0 = Point2::from_polar(o.radius, z.angle() + PI);
                let params = AploParams::new(h0, h0 - z, o.assumed_speed, o.du, o.dv)
                    .map_err(|e| SimError::StrategyFailed(e.to_string()))?;
                self.phase = DiskPhase::Aplo {
                    params,
                    k0: view.k,
                    seen: view.opponent.len(),
                    progress: 0.0,
                    last: z,
                };
                Ok(h0)
            }
            DiskPhase::Aplo {
                params,
                k0,
                seen,
                progress,
                last,
            } => {
                for &zi in &view.opponent[*seen..] {
                    *progress += wrap_angle(zi.angle() - last.angle());
                    *last = zi;
                }
                *seen = view.opponent.len();
                let t = (view.k - *k0) as f64 * view.dt;
                let mut p = aplo_position(params, SignedProgress(*progress), t);
                // a pursuer faster than assumed cannot drag the escaper past unit speed
                let step = p - h;
                if step.norm() > view.dt {
                    p = h + step * (view.dt / step.norm());
                }
                let n = p.norm();
                if n >= 1.0 {
                    let landed = p * (1.0 / n);
                    self.phase = DiskPhase::Landed(landed);
                    return Ok(landed);
                }
                Ok(p)
            }
        }
    }
}

impl Strategy for DiskEscaper {
    fn role(&self) -> Role {
        Role::Escaper
    }

    fn max_speed(&self) -> f64 {
        1.0
    }

    fn policy(&self) -> Box<dyn Policy + '_> {
        Box::new(DiskEscaperPolicy {
            owner: *self,
            phase: DiskPhase::Circling { travelled: 0.0 },
        })
    }

    fn name(&self) -> String {
        format!("disk-aplo(r={})", self.assumed_speed)
    }
}

/// Canonical unit-disk strategy pair for pursuer speed `r`.
pub fn disk_strategies(r: f64) -> Result<(DiskEscaper, ArcChasingPursuer), ExactError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(ExactError::InvalidRatio(r));
    }
    Ok((DiskEscaper::new(r), ArcChasingPursuer::new(r)))
}
