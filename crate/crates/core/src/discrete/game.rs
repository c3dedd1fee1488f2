use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::bits::{is_subset, BitRows};
use super::sample::{gamma_sample, SampleSet};
use super::DiscreteError;
use crate::geometry::{Metric, MetricContext, Point2, PursuerModel};

/// Default bound on the number of stored game states.
pub const DEFAULT_STATE_CAP: u64 = 50_000_000;

/// Symmetric adjacency in compressed rows; every row is sorted and contains
/// its own index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Adjacency {
    pub fn from_lists(lists: Vec<Vec<usize>>) -> Result<Self, DiscreteError> {
        let n = lists.len();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for (i, mut row) in lists.into_iter().enumerate() {
            row.sort_unstable();
            row.dedup();
            if row.last().is_some_and(|&j| j >= n) {
                return Err(DiscreteError::InvalidGraph(format!("row {i} points past {n}")));
            }
            if row.binary_search(&i).is_err() {
                return Err(DiscreteError::InvalidGraph(format!("row {i} lacks its self-loop")));
            }
            targets.extend(row.into_iter().map(|j| j as u32));
            offsets.push(targets.len());
        }
        let adj = Adjacency { offsets, targets };
        for i in 0..n {
            if let Some(&j) = adj.neighbors(i).iter().find(|&&j| !adj.contains(j as usize, i)) {
                return Err(DiscreteError::InvalidGraph(format!("edge {i}->{j} is not symmetric")));
            }
        }
        Ok(adj)
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.neighbors(i).binary_search(&(j as u32)).is_ok()
    }

    /// Directed edge count, self-loops included.
    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn is_only_self_loops(&self) -> bool {
        self.edge_count() == self.len()
    }
}

/// Stored states: escaper-turn pairs `(h, z)` plus pursuer-turn triples
/// `(h_threat, h_cur, z)` with `h_cur` adjacent to `h_threat`.
pub fn state_count(escaper: usize, pursuer: usize, escaper_edges: usize) -> u64 {
    (escaper as u64 + escaper_edges as u64) * pursuer as u64
}

/// The turn-based game on samples. Exit `e` is escaper index `e` and
/// pursuer index `e`.
#[derive(Clone, Debug)]
pub struct DiscreteGame {
    pub samples: Option<SampleSet>,
    pub move_h: Adjacency,
    pub move_z: Adjacency,
    pub exit_count: usize,
    pub r: f64,
    pub delta: f64,
    /// Exits within one escaper move of each escaper sample.
    pub(crate) threats: BitRows,
    /// Exits within one pursuer move of each pursuer sample.
    pub(crate) covers: BitRows,
    /// Pursuer samples whose cover contains the threat set of each escaper sample.
    pub(crate) safe: BitRows,
    /// Pursuer adjacency as bit rows.
    pub(crate) reach: BitRows,
}

impl DiscreteGame {
    /// Game from explicit move graphs; the first `exit_count` indices of both
    /// graphs are the shared exits.
    pub fn from_graphs(
        exit_count: usize,
        move_h: Adjacency,
        move_z: Adjacency,
        r: f64,
        delta: f64,
    ) -> Result<Self, DiscreteError> {
        if exit_count > move_h.len() || exit_count > move_z.len() {
            return Err(DiscreteError::InvalidGraph("more exits than samples".into()));
        }
        if move_h.is_empty() || move_z.is_empty() {
            return Err(DiscreteError::InvalidGraph("empty sample set".into()));
        }
        let (nh, nz) = (move_h.len(), move_z.len());
        let mut threats = BitRows::new(nh, exit_count);
        for h in 0..nh {
            for &x in move_h.neighbors(h) {
                if (x as usize) < exit_count {
                    threats.set(h, x as usize);
                }
            }
        }
        let mut covers = BitRows::new(nz, exit_count);
        let mut reach = BitRows::new(nz, nz);
        for z in 0..nz {
            for &x in move_z.neighbors(z) {
                if (x as usize) < exit_count {
                    covers.set(z, x as usize);
                }
                reach.set(z, x as usize);
            }
        }
        let mut safe = BitRows::new(nh, nz);
        let mut memo: HashMap<Vec<u64>, Vec<u64>> = HashMap::new();
        for h in 0..nh {
            let key = threats.row(h).to_vec();
            let row = memo.entry(key).or_insert_with_key(|t| {
                let mut row = BitRows::new(1, nz);
                for z in 0..nz {
                    if is_subset(t, covers.row(z)) {
                        row.set(0, z);
                    }
                }
                row.row(0).to_vec()
            });
            safe.row_mut(h).copy_from_slice(row);
        }
        Ok(DiscreteGame {
            samples: None,
            move_h,
            move_z,
            exit_count,
            r,
            delta,
            threats,
            covers,
            safe,
            reach,
        })
    }

    pub fn escaper_count(&self) -> usize {
        self.move_h.len()
    }

    pub fn pursuer_count(&self) -> usize {
        self.move_z.len()
    }

    pub fn state_count(&self) -> u64 {
        state_count(self.escaper_count(), self.pursuer_count(), self.move_h.edge_count())
    }

    /// True iff the pursuer standing at `z` right after its reply leaves
    /// some exit next to `h_threat` uncovered.
    pub fn escaper_win_predicate(&self, h_threat: usize, z: usize) -> bool {
        !is_subset(self.threats.row(h_threat), self.covers.row(z))
    }

    /// Exits within one escaper move of `h`.
    pub fn threatened_exits(&self, h: usize) -> Vec<usize> {
        super::bits::ones(self.threats.row(h)).collect()
    }
}

/// Neighbour lists of all pairs with `dist <= radius`, pruned by Euclidean
/// distance (a lower bound for both intrinsic metrics).
fn radius_graph(points: &[Point2], radius: f64, mut dist: impl FnMut(usize, usize) -> f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut lists: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    if n == 0 || radius <= 0.0 {
        return lists;
    }
    let (mut lo, mut hi) = (points[0], points[0]);
    for p in points {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let span = (hi.x - lo.x).max(hi.y - lo.y);
    let cell = radius.max(span / 1024.0).max(f64::MIN_POSITIVE);
    let key = |p: Point2| (((p.x - lo.x) / cell).floor() as i64, ((p.y - lo.y) / cell).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, &p) in points.iter().enumerate() {
        buckets.entry(key(p)).or_default().push(i);
    }
    let reach = (radius / cell).ceil() as i64;
    for i in 0..n {
        let (cx, cy) = key(points[i]);
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                let Some(cands) = buckets.get(&(cx + dx, cy + dy)) else {
                    continue;
                };
                for &j in cands {
                    if j > i && points[i].dist(points[j]) <= radius && dist(i, j) <= radius {
                        lists[i].push(j);
                        lists[j].push(i);
                    }
                }
            }
        }
    }
    lists
}

fn escaper_graph(ctx: &MetricContext, pts: &[Point2], delta: f64) -> Vec<Vec<usize>> {
    if ctx.polygon().is_convex() {
        return radius_graph(pts, delta, |_, _| 0.0);
    }
    let anchors: Vec<_> = pts.iter().map(|&p| ctx.anchor(p, Metric::Escaper)).collect();
    radius_graph(pts, delta, |i, j| ctx.anchored_distance(&anchors[i], &anchors[j]))
}

fn pursuer_graph(ctx: &MetricContext, pts: &[Point2], radius: f64) -> Vec<Vec<usize>> {
    let anchors: Vec<_> = pts.iter().map(|&p| ctx.anchor(p, Metric::Pursuer)).collect();
    match ctx.model() {
        PursuerModel::Moat if radius >= ctx.polygon().perimeter() / 2.0 => {
            let n = pts.len();
            (0..n).map(|_| (0..n).collect()).collect()
        }
        _ => radius_graph(pts, radius, |i, j| ctx.anchored_distance(&anchors[i], &anchors[j])),
    }
}

/// Game on an existing sample set. Refuses with `TooManyStates` before the
/// pursuer graph is built when the state count exceeds `cap`.
pub fn build_game_on(
    ctx: &MetricContext,
    samples: &SampleSet,
    r: f64,
    delta: f64,
    cap: u64,
) -> Result<DiscreteGame, DiscreteError> {
    if !(r >= 0.0 && r.is_finite()) || !(delta >= 0.0 && delta.is_finite()) {
        return Err(DiscreteError::InvalidParameter(format!("need finite r, delta >= 0, got {r}, {delta}")));
    }
    // ties at exactly δ or rδ count as moves
    let tol = ctx.tolerance();
    let move_h = Adjacency::from_lists(escaper_graph(ctx, &samples.escaper, delta + tol))?;
    let states = state_count(samples.escaper.len(), samples.pursuer.len(), move_h.edge_count());
    if states > cap {
        return Err(DiscreteError::TooManyStates {
            states,
            cap,
            escaper: samples.escaper.len(),
            pursuer: samples.pursuer.len(),
        });
    }
    let move_z = Adjacency::from_lists(pursuer_graph(ctx, &samples.pursuer, r * delta + tol))?;
    let mut game = DiscreteGame::from_graphs(samples.exit_count, move_h, move_z, r, delta)?;
    game.samples = Some(samples.clone());
    Ok(game)
}

/// Samples at `gamma` and builds the game with the default state cap.
pub fn build_game(ctx: &MetricContext, r: f64, delta: f64, gamma: f64) -> Result<DiscreteGame, DiscreteError> {
    let samples = gamma_sample(ctx, gamma)?;
    build_game_on(ctx, &samples, r, delta, DEFAULT_STATE_CAP)
}
