use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Arena, MotionPath, Role, SimError, Strategy, View};
use crate::geometry::Point2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Outcome {
    EscaperEscaped { t: f64, exit: Point2, separation: f64 },
    NoEscapeByTmax,
}

/// Separations observed at grid times when the escaper stood on an exit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TouchStats {
    pub count: usize,
    pub min_separation: Option<f64>,
    pub max_separation: Option<f64>,
}

impl TouchStats {
    fn record(&mut self, s: f64) {
        self.count += 1;
        self.min_separation = Some(self.min_separation.map_or(s, |m| m.min(s)));
        self.max_separation = Some(self.max_separation.map_or(s, |m| m.max(s)));
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Playthrough {
    pub escaper_path: MotionPath,
    pub pursuer_path: MotionPath,
    pub outcome: Outcome,
    pub epsilon: f64,
    pub dt: f64,
    pub touches: TouchStats,
}

fn check_step(
    arena: &dyn Arena,
    role: Role,
    step: usize,
    prev: Option<Point2>,
    p: Point2,
    limit: f64,
    dt: f64,
) -> Result<(), SimError> {
    let inside = match role {
        Role::Escaper => arena.in_escaper_domain(p),
        Role::Pursuer => arena.in_pursuer_domain(p),
    };
    if !p.is_finite() || !inside {
        return Err(SimError::DomainViolation {
            role,
            step,
            x: p.x,
            y: p.y,
        });
    }
    if let Some(q) = prev {
        let distance = match role {
            Role::Escaper => arena.escaper_distance(q, p),
            Role::Pursuer => arena.pursuer_distance(q, p),
        };
        if distance > limit * dt + arena.tolerance() {
            return Err(SimError::SpeedViolation {
                role,
                step,
                distance,
                dt,
                limit,
            });
        }
    }
    Ok(())
}

/// Runs the staggered grid evaluation of a strategy pair until the escaper
/// stands on an exit at pursuer distance at least `epsilon`, or `t_max`.
pub fn playthrough(
    escaper: &dyn Strategy,
    pursuer: &dyn Strategy,
    dt: f64,
    t_max: f64,
    epsilon: f64,
    arena: &dyn Arena,
) -> Result<Playthrough, SimError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(SimError::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    if !(t_max >= 0.0) || !(epsilon > 0.0) {
        return Err(SimError::InvalidParameter(format!(
            "need tMax >= 0 and epsilon > 0, got {t_max} and {epsilon}"
        )));
    }
    if escaper.role() != Role::Escaper || pursuer.role() != Role::Pursuer {
        return Err(SimError::InvalidParameter("strategy roles are swapped".into()));
    }
    let steps = ((t_max / dt).floor() as usize).max(1);
    let (hs, zs) = (escaper.max_speed(), pursuer.max_speed());
    let mut hp = escaper.policy();
    let mut zp = pursuer.policy();
    let mut h: Vec<Point2> = Vec::with_capacity(steps + 1);
    let mut z: Vec<Point2> = Vec::with_capacity(steps + 1);
    let mut touches = TouchStats::default();
    let mut outcome = Outcome::NoEscapeByTmax;

    for k in 0..=steps {
        let hk = hp.position(&View {
            k,
            dt,
            own: &h,
            opponent: &z,
        })?;
        check_step(arena, Role::Escaper, k, h.last().copied(), hk, hs, dt)?;
        h.push(hk);
        let zk = zp.position(&View {
            k,
            dt,
            own: &z,
            opponent: &h,
        })?;
        check_step(arena, Role::Pursuer, k, z.last().copied(), zk, zs, dt)?;
        z.push(zk);
        if arena.is_exit(hk) {
            let separation = arena.pursuer_distance(hk, zk);
            touches.record(separation);
            if separation >= epsilon {
                outcome = Outcome::EscaperEscaped {
                    t: k as f64 * dt,
                    exit: hk,
                    separation,
                };
                break;
            }
        }
    }
    Ok(Playthrough {
        escaper_path: MotionPath::on_grid(h, dt, hs, Role::Escaper),
        pursuer_path: MotionPath::on_grid(z, dt, zs, Role::Pursuer),
        outcome,
        epsilon,
        dt,
        touches,
    })
}

/// Drives one strategy against a fixed opponent sequence on the grid.
/// For an escaper `opponent[k]` is the pursuer at index `k`; index `k` of the
/// result only sees `opponent[..k]` (escaper) or `opponent[..=k]` (pursuer).
pub fn respond(strategy: &dyn Strategy, opponent: &[Point2], dt: f64) -> Result<Vec<Point2>, SimError> {
    let mut policy = strategy.policy();
    let mut own = Vec::with_capacity(opponent.len());
    for k in 0..opponent.len() {
        let visible = match strategy.role() {
            Role::Escaper => &opponent[..k],
            Role::Pursuer => &opponent[..=k],
        };
        let p = policy.position(&View {
            k,
            dt,
            own: &own,
            opponent: visible,
        })?;
        own.push(p);
    }
    Ok(own)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpeedReport {
    pub max_speed: f64,
    pub limit: f64,
    pub pass: bool,
}

/// Largest observed speed over consecutive samples plus `random_pairs`
/// seeded random sample pairs.
pub fn validate_speed(path: &MotionPath, arena: &dyn Arena, random_pairs: usize, seed: u64) -> SpeedReport {
    let dist = |a: Point2, b: Point2| match path.domain {
        Role::Escaper => arena.escaper_distance(a, b),
        Role::Pursuer => arena.pursuer_distance(a, b),
    };
    let speed = |i: usize, j: usize| {
        let dt = (path.times[j] - path.times[i]).abs();
        if dt == 0.0 {
            0.0
        } else {
            dist(path.points[i], path.points[j]) / dt
        }
    };
    let n = path.len();
    let mut max_speed: f64 = 0.0;
    for i in 1..n {
        max_speed = max_speed.max(speed(i - 1, i));
    }
    if n > 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..random_pairs {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i != j {
                max_speed = max_speed.max(speed(i, j));
            }
        }
    }
    // τ on the distance scale, applied per unit time of the finest step
    let min_dt = path.times.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let slack = if min_dt.is_finite() { arena.tolerance() / min_dt } else { 0.0 };
    SpeedReport {
        max_speed,
        limit: path.max_speed,
        pass: max_speed <= path.max_speed + slack,
    }
}
