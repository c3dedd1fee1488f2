//! Approximation of `r*` by bisection over the discrete decider.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::discrete::{build_game_on, gamma_sample, solve_with, DiscreteError, SampleSet, SolveOptions};
use crate::geometry::{MetricContext, PursuerModel};
use crate::ratio::UPPER_BOUND_FACTOR;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchemeError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{states} states exceed the budget of {budget}")]
    BudgetExceeded { states: u64, budget: u64 },
    #[error(transparent)]
    Discrete(#[from] DiscreteError),
}

/// The three length-scale bounds whose minimum is `ε₀`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Epsilon0Bounds {
    /// Largest inradius over the triangulation.
    pub inradius: f64,
    /// `(f/4)²`: a disk of radius `2√ε` then meets no two nonincident edges.
    pub edge_disk: f64,
    /// `1 / (2 R_up²)`.
    pub ratio: f64,
}

impl Epsilon0Bounds {
    pub fn min(&self) -> f64 {
        self.inradius.min(self.edge_disk).min(self.ratio)
    }
}

pub fn epsilon0_bounds(ctx: &MetricContext) -> Epsilon0Bounds {
    let inradius = ctx.triangles().iter().map(|t| t.inradius()).fold(0.0, f64::max);
    let f = ctx.polygon().min_feature_size();
    let r_up = r_upper_bound_easy(ctx);
    Epsilon0Bounds {
        inradius,
        edge_disk: (f / 4.0).powi(2),
        ratio: 1.0 / (2.0 * r_up * r_up),
    }
}

pub fn epsilon0(ctx: &MetricContext) -> f64 {
    epsilon0_bounds(ctx).min()
}

/// `2(3+√6)·max(F/f, csc(θ_min/2))`.
pub fn r_upper_bound_easy(ctx: &MetricContext) -> f64 {
    let poly = ctx.polygon();
    let spread = poly.perimeter() / poly.min_feature_size();
    let corner = 1.0 / (poly.min_interior_angle() / 2.0).sin();
    UPPER_BOUND_FACTOR * spread.max(corner)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxParams {
    /// Relative accuracy in (0, 1].
    pub epsilon: f64,
    /// Largest state count a single probe may build.
    pub budget: u64,
    /// `(δ, γ)` used when the theoretical parameters exceed the budget.
    pub practical_override: Option<(f64, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub r: f64,
    pub delta: f64,
    pub gamma: f64,
    pub escaper_wins: bool,
    pub states: u64,
    /// Whether `γ` met both sampling conditions at this `r`.
    pub preconditions_hold: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Approximation {
    pub r_lo: f64,
    pub r_hi: f64,
    /// Set when the override replaced the theoretical `(δ, γ)`; no width
    /// guarantee applies then.
    pub heuristic: bool,
    pub epsilon: f64,
    pub epsilon0: f64,
    pub r_upper_easy: f64,
    pub probes: Vec<Probe>,
}

/// Largest admissible `γ/δ` at ratio `r`, with auxiliary slack `ε̂ = ε/10`.
pub fn gamma_fraction(r: f64, epsilon: f64) -> f64 {
    let hat = epsilon / 10.0;
    let secondary = epsilon / 4.0 * (1.0 + hat) - hat / 2.0;
    0.25_f64.min(r / 2.0).min(epsilon * r / 2.0).min(secondary)
}

fn preconditions_hold(r: f64, epsilon: f64, delta: f64, gamma: f64) -> bool {
    let hat = epsilon / 10.0;
    let strict = 0.25_f64.min(r / 2.0).min(epsilon * r / 2.0) * delta;
    gamma < strict && gamma <= delta * (epsilon / 4.0 * (1.0 + hat) - hat / 2.0)
}

/// Predicted state count of the game at `(δ, γ)` from areas and perimeter,
/// before any sampling.
pub fn estimate_states(ctx: &MetricContext, delta: f64, gamma: f64) -> f64 {
    let poly = ctx.polygon();
    let s = gamma / SQRT_2;
    let boundary = poly.perimeter() / gamma;
    let nh = poly.area() / (s * s) + boundary;
    let hull = ctx.hull();
    let hull_area = (0..hull.len())
        .map(|i| hull[i].cross(hull[(i + 1) % hull.len()]))
        .sum::<f64>()
        / 2.0;
    let nz = match ctx.model() {
        PursuerModel::Moat => boundary,
        PursuerModel::Exterior => (hull_area - poly.area()).max(0.0) / (s * s) + boundary,
    };
    let degree = std::f64::consts::PI * delta * delta / (s * s) + 1.0;
    (nh + nh * degree) * nz
}

struct Decider<'a> {
    ctx: &'a MetricContext,
    params: ApproxParams,
    heuristic: bool,
    fixed: Option<SampleSet>,
    probes: Vec<Probe>,
}

impl Decider<'_> {
    fn probe(&mut self, r: f64) -> Result<bool, SchemeError> {
        let eps = self.params.epsilon;
        let (delta, gamma, samples) = if let Some((d, g)) = self.params.practical_override.filter(|_| self.heuristic) {
            if self.fixed.is_none() {
                self.fixed = Some(gamma_sample(self.ctx, g)?);
            }
            (d, g, self.fixed.clone().expect("samples set above"))
        } else {
            let e0 = epsilon0(self.ctx);
            let delta = 2.0 * e0.powi(3) / r;
            let gamma = 0.99 * gamma_fraction(r, eps) * delta;
            (delta, gamma, gamma_sample(self.ctx, gamma)?)
        };
        let game = build_game_on(self.ctx, &samples, r, delta, self.params.budget).map_err(|e| match e {
            DiscreteError::TooManyStates { states, cap, .. } => SchemeError::BudgetExceeded { states, budget: cap },
            other => other.into(),
        })?;
        let escaper_wins = solve_with(&game, SolveOptions { stop_when_decided: true }).escaper_wins;
        self.probes.push(Probe {
            r,
            delta,
            gamma,
            escaper_wins,
            states: game.state_count(),
            preconditions_hold: preconditions_hold(r, eps, delta, gamma),
        });
        Ok(escaper_wins)
    }
}

/// Bisects `[1, R_up]` geometrically with the discrete decider until the
/// probed escaper-win and pursuer-win ratios are within a factor `1 + ε`.
/// An escaper win at `r` lifts the lower end to `(1 − ε)r`, a pursuer win
/// caps the upper end at `(1 + ε)r`.
pub fn approximate_r_star(ctx: &MetricContext, params: ApproxParams) -> Result<Approximation, SchemeError> {
    let eps = params.epsilon;
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(SchemeError::InvalidParameter(format!("epsilon must lie in (0, 1], got {eps}")));
    }
    if let Some((d, g)) = params.practical_override {
        if !(d > 0.0 && g > 0.0 && d.is_finite() && g.is_finite()) {
            return Err(SchemeError::InvalidParameter(format!("override must be positive, got ({d}, {g})")));
        }
    }
    let e0 = epsilon0(ctx);
    let r_up = r_upper_bound_easy(ctx);
    // the theoretical grid is finest at the top of the bracket
    let worst = {
        let delta = 2.0 * e0.powi(3) / r_up;
        estimate_states(ctx, delta, 0.99 * gamma_fraction(r_up, eps) * delta)
    };
    let heuristic = !(worst <= params.budget as f64);
    if heuristic && params.practical_override.is_none() {
        return Err(SchemeError::BudgetExceeded {
            states: worst.min(u64::MAX as f64) as u64,
            budget: params.budget,
        });
    }
    let mut decider = Decider {
        ctx,
        params,
        heuristic,
        fixed: None,
        probes: Vec::new(),
    };
    let (mut lo, mut hi) = (1.0_f64, r_up);
    let (mut won, mut lost) = (None::<f64>, None::<f64>);
    loop {
        let r = (lo * hi).sqrt();
        if decider.probe(r)? {
            won = Some(r);
            lo = r;
        } else {
            lost = Some(r);
            hi = r;
        }
        if hi / lo <= 1.0 + eps {
            break;
        }
    }
    let r_lo = won.map_or(1.0, |r| ((1.0 - eps) * r).max(1.0));
    let r_hi = lost.map_or(r_up, |r| ((1.0 + eps) * r).min(r_up)).max(r_lo);
    Ok(Approximation {
        r_lo,
        r_hi,
        heuristic,
        epsilon: eps,
        epsilon0: e0,
        r_upper_easy: r_up,
        probes: decider.probes,
    })
}
