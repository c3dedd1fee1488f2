//! Constant-factor sandwich on the critical speed ratio of a polygon.
//!
//! Running straight from `p` to `q` shows `r* >= d_z(p, q) / d_h(p, q)` for
//! every boundary pair, and the medial-axis pursuer shows
//! `r* <= 2(3 + √6) · max d_z / d_h`. The maximum is located by dense
//! boundary sampling followed by local golden-section refinement; the upper
//! side uses a Lipschitz-inflated sample maximum over long chords and the
//! exact corner bound over short ones, so it stays conservative.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Anchor, GeometryError, Metric, MetricContext, Point2, PursuerModel, Side};

/// `2(3 + √6)`, the factor between the pair-ratio maximum and the
/// medial-axis pursuer bound.
pub const UPPER_BOUND_FACTOR: f64 = 2.0 * (3.0 + 2.449_489_742_783_178);

/// Sample spacing must not exceed this fraction of the minimum feature size.
pub const MAX_SPACING_FRACTION: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RatioError {
    #[error("points are too close for a ratio: d_h = {0}")]
    DegeneratePair(f64),
    #[error("spacing {spacing} exceeds f/10 = {limit}")]
    SpacingTooCoarse { spacing: f64, limit: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Result of the boundary-pair maximisation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioBound {
    /// Best pair ratio found; a valid lower bound on `r*`.
    pub lower: f64,
    /// `2(3 + √6)` times the inflated sample maximum.
    pub upper: f64,
    pub witness_p: Point2,
    pub witness_q: Point2,
    pub spacing: f64,
}

/// A boundary sample with its counterclockwise arc parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundarySample {
    pub arc: f64,
    pub point: Point2,
}

/// Samples every edge at a power-of-two subdivision with step at most
/// `spacing`, so a finer spacing always yields a superset. Vertices are
/// always included.
pub fn boundary_samples(ctx: &MetricContext, spacing: f64) -> Vec<BoundarySample> {
    let poly = ctx.polygon();
    let mut out = Vec::new();
    for e in 0..poly.len() {
        let len = poly.edge_length(e);
        let mut k: usize = 1;
        while len / (k as f64) > spacing {
            k *= 2;
        }
        let (a, b) = poly.edge(e);
        let s0 = poly.arc_start(e);
        for j in 0..k {
            let t = j as f64 / k as f64;
            out.push(BoundarySample {
                arc: s0 + t * len,
                point: if j == 0 { a } else { a.lerp(b, t) },
            });
        }
    }
    out
}

/// `d_z(p, q) / d_h(p, q)` for two boundary points.
pub fn ratio_of_pair(ctx: &MetricContext, p: Point2, q: Point2) -> Result<f64, RatioError> {
    for x in [p, q] {
        if !ctx.on_boundary(x) {
            return Err(GeometryError::OutsideDomain {
                x: x.x,
                y: x.y,
                domain: "boundary",
            }
            .into());
        }
    }
    let dh = ctx.interior_distance(p, q)?;
    if dh <= ctx.tolerance() {
        return Err(RatioError::DegeneratePair(dh));
    }
    Ok(ctx.pursuer_distance(p, q)? / dh)
}

struct PairScan {
    best: (f64, usize, usize),
    inflated: f64,
}

fn scan_pairs(ctx: &MetricContext, samples: &[BoundarySample], spacing: f64) -> PairScan {
    let tol = ctx.tolerance();
    let pursuer: Vec<Anchor> = match ctx.model() {
        PursuerModel::Moat => Vec::new(),
        PursuerModel::Exterior => samples
            .iter()
            .map(|s| ctx.anchor(s.point, Metric::Pursuer))
            .collect(),
    };
    let perimeter = ctx.polygon().perimeter();
    let poly = ctx.polygon();
    let convex = poly.is_convex();
    // Chords shorter than f join points of one edge or of two edges at a
    // vertex of angle θ, where d_z ≤ a + b ≤ csc(θ/2)·|pq|; only longer
    // chords need the Lipschitz inflation.
    let far = poly.min_feature_size() - spacing;
    let mut inflated = (0..poly.len())
        .filter(|&i| !poly.is_reflex(i))
        .map(|i| 1.0 / (poly.interior_angle(i) / 2.0).sin())
        .fold(1.0, f64::max);
    let mut best = (f64::NEG_INFINITY, 0, 0);
    for i in 0..samples.len() {
        for j in (i + 1)..samples.len() {
            let (p, q) = (samples[i].point, samples[j].point);
            // A bent interior path touches a sampled reflex vertex, and the
            // ratio of the pair is dominated by one of its two halves.
            if !convex && !ctx.segment_in(p, q, Side::Interior) {
                continue;
            }
            let dh = p.dist(q);
            if dh <= tol {
                continue;
            }
            let dz = match ctx.model() {
                PursuerModel::Moat => {
                    let d = (samples[j].arc - samples[i].arc).abs();
                    d.min(perimeter - d)
                }
                PursuerModel::Exterior => ctx.anchored_distance(&pursuer[i], &pursuer[j]),
            };
            let ratio = dz / dh;
            if ratio > best.0 {
                best = (ratio, i, j);
            }
            if dh >= far {
                inflated = inflated.max((dz + spacing) / (dh - spacing));
            }
        }
    }
    PairScan { best, inflated }
}

fn golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            if fc > best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            if fd > best.1 {
                best = (d, fd);
            }
        }
    }
    best
}

/// Maximises the pair ratio over boundary pairs sampled at `spacing`, then
/// refines the best pair locally.
pub fn max_ratio(ctx: &MetricContext, spacing: f64) -> Result<RatioBound, RatioError> {
    let limit = MAX_SPACING_FRACTION * ctx.polygon().min_feature_size();
    if !(spacing > 0.0) || spacing > limit * (1.0 + 1e-12) {
        return Err(RatioError::SpacingTooCoarse { spacing, limit });
    }
    let samples = boundary_samples(ctx, spacing);
    let scan = scan_pairs(ctx, &samples, spacing);
    let (sample_best, i, j) = scan.best;

    let poly = ctx.polygon();
    let eval = |a: f64, b: f64| -> f64 {
        ratio_of_pair(ctx, poly.point_at(a), poly.point_at(b)).unwrap_or(f64::NEG_INFINITY)
    };
    let (mut a, mut b) = (samples[i].arc, samples[j].arc);
    let mut value = sample_best;
    for _ in 0..6 {
        let (na, va) = golden_max(|x| eval(x, b), a - spacing, a + spacing, 48);
        if va > value {
            a = na;
            value = va;
        }
        let (nb, vb) = golden_max(|y| eval(a, y), b - spacing, b + spacing, 48);
        if vb > value {
            b = nb;
            value = vb;
        }
    }
    let (witness_p, witness_q) = if value > sample_best {
        (poly.point_at(a), poly.point_at(b))
    } else {
        (samples[i].point, samples[j].point)
    };
    let lower = value.max(sample_best);
    let upper = UPPER_BOUND_FACTOR * scan.inflated.max(lower);
    Ok(RatioBound {
        lower,
        upper,
        witness_p,
        witness_q,
        spacing,
    })
}

/// `(lower, upper)` bracket on `r*` from [`max_ratio`].
pub fn r_star_sandwich(ctx: &MetricContext, spacing: f64) -> Result<(f64, f64), RatioError> {
    let b = max_ratio(ctx, spacing)?;
    Ok((b.lower, b.upper))
}
