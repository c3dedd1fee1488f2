//! Continuous-game playthroughs on a uniform time grid.
//!
//! Strategies are driven step by step: the escaper's position at grid index
//! `k` sees the pursuer only up to index `k - 1`, the pursuer's position at
//! `k` sees the escaper up to `k`. That staggered flow realises the unique
//! playthrough of a strategy pair; [`obliviate`] adds an explicit delay.

mod arena;
mod engine;
mod oblivious;
mod scripted;
mod svg;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Point2;

pub use arena::{Arena, ArenaShape, DiskArena, HalfPlaneArena, PlaneArena, WedgeArena};
pub use engine::{playthrough, respond, validate_speed, Outcome, Playthrough, SpeedReport, TouchStats};
pub use oblivious::{obliviate, Obliviated};
pub use scripted::Scripted;
pub use svg::emit_svg;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Escaper,
    Pursuer,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("{role:?} moved {distance} in {dt} (limit {limit}) at step {step}")]
    SpeedViolation {
        role: Role,
        step: usize,
        distance: f64,
        dt: f64,
        limit: f64,
    },
    #[error("{role:?} left its domain at step {step}: ({x}, {y})")]
    DomainViolation { role: Role, step: usize, x: f64, y: f64 },
    #[error("strategy failed: {0}")]
    StrategyFailed(String),
    #[error("invalid simulation parameter: {0}")]
    InvalidParameter(String),
}

/// What a strategy may look at when choosing its position at grid index `k`.
#[derive(Clone, Copy, Debug)]
pub struct View<'a> {
    pub k: usize,
    pub dt: f64,
    /// Own positions at indices `0..k`.
    pub own: &'a [Point2],
    /// Visible opponent prefix.
    pub opponent: &'a [Point2],
}

impl View<'_> {
    pub fn t(&self) -> f64 {
        self.k as f64 * self.dt
    }
}

/// Per-run state of a strategy. Calls arrive with `k = 0, 1, 2, ...`; any
/// cached state must be a function of the prefixes seen so far.
pub trait Policy {
    fn position(&mut self, view: &View<'_>) -> Result<Point2, SimError>;
}

/// A player strategy: a factory of fresh [`Policy`] runs.
pub trait Strategy {
    fn role(&self) -> Role;
    fn max_speed(&self) -> f64;
    fn policy(&self) -> Box<dyn Policy + '_>;
    fn name(&self) -> String {
        "strategy".into()
    }
}

/// Timed piecewise-linear trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MotionPath {
    pub times: Vec<f64>,
    pub points: Vec<Point2>,
    pub max_speed: f64,
    pub domain: Role,
}

impl MotionPath {
    pub fn on_grid(points: Vec<Point2>, dt: f64, max_speed: f64, domain: Role) -> Self {
        let times = (0..points.len()).map(|k| k as f64 * dt).collect();
        MotionPath {
            times,
            points,
            max_speed,
            domain,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Linear interpolation at time `t` (clamped to the recorded range).
    pub fn at(&self, t: f64) -> Point2 {
        match self.times.iter().position(|&s| s >= t) {
            None => *self.points.last().expect("nonempty path"),
            Some(0) => self.points[0],
            Some(i) => {
                let (t0, t1) = (self.times[i - 1], self.times[i]);
                self.points[i - 1].lerp(self.points[i], (t - t0) / (t1 - t0))
            }
        }
    }
}
