use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::DiscreteError;
use crate::geometry::{Location, Metric, MetricContext, Point2, PursuerModel};

/// Sample points of both domains. The first `exit_count` entries of
/// `escaper` and of `pursuer` are the same boundary points, in the same
/// order; they form the exit samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub escaper: Vec<Point2>,
    pub pursuer: Vec<Point2>,
    pub exit_count: usize,
    pub gamma: f64,
}

impl SampleSet {
    pub fn exits(&self) -> &[Point2] {
        &self.escaper[..self.exit_count]
    }
}

/// Boundary points at arc spacing at most `gamma`, vertices included.
pub fn boundary_samples(ctx: &MetricContext, gamma: f64) -> Vec<Point2> {
    let poly = ctx.polygon();
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (a, b) = poly.edge(i);
        let segments = ((poly.edge_length(i) / gamma) - 1e-9).ceil().max(1.0) as usize;
        out.extend((0..segments).map(|k| a.lerp(b, k as f64 / segments as f64)));
    }
    out
}

/// Axis-aligned grid of spacing `gamma/√2` anchored at the bounding-box
/// minimum.
fn grid(ctx: &MetricContext, gamma: f64) -> impl Iterator<Item = Point2> {
    let (lo, hi) = ctx.polygon().bounding_box();
    let s = gamma / 2f64.sqrt();
    let nx = ((hi.x - lo.x) / s + 1e-9).floor() as usize;
    let ny = ((hi.y - lo.y) / s + 1e-9).floor() as usize;
    (0..=ny).flat_map(move |j| (0..=nx).map(move |i| Point2::new(lo.x + i as f64 * s, lo.y + j as f64 * s)))
}

/// Builds the escaper and pursuer sample sets at resolution `gamma`.
pub fn gamma_sample(ctx: &MetricContext, gamma: f64) -> Result<SampleSet, DiscreteError> {
    let limit = ctx.polygon().min_feature_size() / 2.0;
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(DiscreteError::InvalidParameter(format!("gamma must be positive, got {gamma}")));
    }
    if gamma > limit {
        return Err(DiscreteError::GammaTooCoarse { gamma, limit });
    }
    let poly = ctx.polygon();
    let tol = ctx.tolerance();
    let boundary = boundary_samples(ctx, gamma);
    let duplicate = |p: Point2| boundary.iter().any(|q| q.dist(p) <= tol);
    let mut escaper = boundary.clone();
    let mut pursuer = boundary.clone();
    for p in grid(ctx, gamma) {
        match poly.locate(p) {
            Location::Inside => escaper.push(p),
            Location::Boundary => {
                if !duplicate(p) {
                    escaper.push(p);
                }
            }
            Location::Outside => {
                if ctx.model() == PursuerModel::Exterior && ctx.in_hull(p) {
                    pursuer.push(p);
                }
            }
        }
    }
    Ok(SampleSet {
        exit_count: boundary.len(),
        escaper,
        pursuer,
        gamma,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetReport {
    pub escaper_gap: f64,
    pub pursuer_gap: f64,
}

impl NetReport {
    pub fn max_gap(&self) -> f64 {
        self.escaper_gap.max(self.pursuer_gap)
    }
}

fn nearest(ctx: &MetricContext, p: Point2, samples: &[Point2], metric: Metric) -> f64 {
    let mut order: Vec<(f64, usize)> = samples.iter().enumerate().map(|(i, q)| (q.dist(p), i)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = f64::INFINITY;
    for (euclid, i) in order {
        if euclid >= best {
            break;
        }
        if let Ok(d) = ctx.distance(p, samples[i], metric) {
            best = best.min(d);
        }
    }
    best
}

/// Largest intrinsic distance from `probes` seeded random points of each
/// domain to the nearest sample of that domain.
pub fn verify_net(ctx: &MetricContext, samples: &SampleSet, probes: usize, seed: u64) -> NetReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let poly = ctx.polygon();
    let (lo, hi) = poly.bounding_box();
    let in_box = |rng: &mut ChaCha8Rng| Point2::new(rng.gen_range(lo.x..=hi.x), rng.gen_range(lo.y..=hi.y));
    let mut escaper_gap: f64 = 0.0;
    for _ in 0..probes.max(1) {
        let p = loop {
            let p = in_box(&mut rng);
            if poly.locate(p) != Location::Outside {
                break p;
            }
        };
        escaper_gap = escaper_gap.max(nearest(ctx, p, &samples.escaper, Metric::Escaper));
    }
    let exterior_area = ctx.model() == PursuerModel::Exterior && hull_area(ctx.hull()) > poly.area() * (1.0 + 1e-9);
    let mut pursuer_gap: f64 = 0.0;
    for k in 0..probes.max(1) {
        let mut p = poly.point_at(rng.gen_range(0.0..poly.perimeter()));
        if exterior_area && k % 2 == 1 {
            for _ in 0..10_000 {
                let q = in_box(&mut rng);
                if ctx.in_pursuer_domain(q) {
                    p = q;
                    break;
                }
            }
        }
        pursuer_gap = pursuer_gap.max(nearest(ctx, p, &samples.pursuer, Metric::Pursuer));
    }
    NetReport {
        escaper_gap,
        pursuer_gap,
    }
}

fn hull_area(h: &[Point2]) -> f64 {
    let n = h.len();
    (0..n).map(|i| h[i].cross(h[(i + 1) % n])).sum::<f64>() / 2.0
}
