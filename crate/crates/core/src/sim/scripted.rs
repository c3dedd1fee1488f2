use super::{Policy, Role, SimError, Strategy, View};
use crate::geometry::Point2;

/// Strategy that ignores the opponent and follows timed waypoints, linearly
/// interpolated and held at the last one.
#[derive(Clone, Debug, PartialEq)]
pub struct Scripted {
    role: Role,
    speed: f64,
    times: Vec<f64>,
    points: Vec<Point2>,
}

impl Scripted {
    /// `waypoints` must be nonempty with nondecreasing times starting at 0.
    pub fn new(role: Role, speed: f64, waypoints: Vec<(f64, Point2)>) -> Result<Self, SimError> {
        if waypoints.is_empty() || waypoints[0].0 != 0.0 {
            return Err(SimError::InvalidParameter("script must start at time 0".into()));
        }
        if waypoints.windows(2).any(|w| w[1].0 < w[0].0) {
            return Err(SimError::InvalidParameter("script times must not decrease".into()));
        }
        let (times, points) = waypoints.into_iter().unzip();
        Ok(Scripted {
            role,
            speed,
            times,
            points,
        })
    }

    pub fn at(&self, t: f64) -> Point2 {
        let i = self.times.partition_point(|&s| s <= t);
        if i == 0 {
            return self.points[0];
        }
        if i == self.times.len() {
            return *self.points.last().expect("nonempty script");
        }
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        self.points[i - 1].lerp(self.points[i], (t - t0) / (t1 - t0))
    }

    pub fn duration(&self) -> f64 {
        *self.times.last().expect("nonempty script")
    }
}

struct ScriptPolicy<'a>(&'a Scripted);

impl Policy for ScriptPolicy<'_> {
    fn position(&mut self, view: &View<'_>) -> Result<Point2, SimError> {
        Ok(self.0.at(view.t()))
    }
}

impl Strategy for Scripted {
    fn role(&self) -> Role {
        self.role
    }

    fn max_speed(&self) -> f64 {
        self.speed
    }

    fn policy(&self) -> Box<dyn Policy + '_> {
        Box::new(ScriptPolicy(self))
    }

    fn name(&self) -> String {
        format!("scripted({:?}, {} waypoints)", self.role, self.points.len())
    }
}
