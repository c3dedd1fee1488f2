use super::{Policy, Role, SimError, Strategy, View};
use crate::geometry::Point2;

/// Strategy that stands at the inner strategy's start for `delta` time and
/// then replays it against the opponent prefix delayed by `delta`.
pub struct Obliviated<S> {
    inner: S,
    delta: f64,
}

/// Wraps `strategy` so that its output at `t` depends on the opponent only
/// through the prefix up to `t - delta`. With pursuer speed `r` the usual
/// choice is `delta = ε / (2r)`.
pub fn obliviate<S: Strategy>(strategy: S, delta: f64) -> Obliviated<S> {
    assert!(delta > 0.0, "delay must be positive");
    Obliviated { inner: strategy, delta }
}

impl<S> Obliviated<S> {
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Delay in grid steps; the delay is rounded to the grid.
    pub fn delay_steps(&self, dt: f64) -> usize {
        ((self.delta / dt).round() as usize).max(1)
    }
}

impl<S: Strategy> Strategy for Obliviated<S> {
    fn role(&self) -> Role {
        self.inner.role()
    }

    fn max_speed(&self) -> f64 {
        self.inner.max_speed()
    }

    fn policy(&self) -> Box<dyn Policy + '_> {
        Box::new(DelayedPolicy {
            inner: self.inner.policy(),
            delta: self.delta,
            start: None,
        })
    }

    fn name(&self) -> String {
        format!("oblivious({}, {})", self.inner.name(), self.delta)
    }
}

struct DelayedPolicy<'a> {
    inner: Box<dyn Policy + 'a>,
    delta: f64,
    start: Option<Point2>,
}

impl Policy for DelayedPolicy<'_> {
    fn position(&mut self, view: &View<'_>) -> Result<Point2, SimError> {
        let m = ((self.delta / view.dt).round() as usize).max(1);
        if view.k == 0 {
            let p = self.inner.position(view)?;
            self.start = Some(p);
            return Ok(p);
        }
        let start = self.start.ok_or_else(|| SimError::StrategyFailed("queried before start".into()))?;
        if view.k <= m {
            return Ok(start);
        }
        let len = view.opponent.len();
        self.inner.position(&View {
            k: view.k - m,
            dt: view.dt,
            own: &view.own[m..],
            opponent: &view.opponent[..len - m],
        })
    }
}
