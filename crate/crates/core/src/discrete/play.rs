use serde::{Deserialize, Serialize};

use super::game::DiscreteGame;
use crate::geometry::{Metric, MetricContext, Point2};
use crate::sim::{Role, Scripted};
use super::solve::SolveResult;
use super::DiscreteError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Turn {
    pub h: usize,
    pub z: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub h0: usize,
    pub z0: usize,
    pub turns: Vec<Turn>,
    /// `(h_threat, z)` that triggered the win predicate, if any.
    pub decisive: Option<(usize, usize)>,
}

/// Replays the solved policies for up to `max_turns` turns. The escaper
/// follows its table from a winning start; otherwise it moves greedily and
/// the pursuer answers with safe replies into unmarked states.
pub fn play_discrete(game: &DiscreteGame, solved: &SolveResult, max_turns: usize) -> Result<Transcript, DiscreteError> {
    let h0 = solved.escaper_start().unwrap_or(0);
    let z0 = solved.pursuer_start(h0);
    let mut out = Transcript {
        h0,
        z0,
        turns: Vec::new(),
        decisive: None,
    };
    let (mut h, mut z) = (h0, z0);
    for _ in 0..max_turns {
        let b = if solved.is_escaper_win(h, z) {
            solved.escaper_move(game, h, z).ok_or_else(|| {
                DiscreteError::InconsistentTables(format!("no winning escaper move at marked state ({h}, {z})"))
            })?
        } else {
            greedy_move(game, solved, h, z)
        };
        let zn = if solved.pursuer_turn_is_escaper_win(game, h, b, z) {
            // every safe reply is lost; any reply will do
            game.move_z.neighbors(z).iter().map(|&x| x as usize).find(|&x| !game.escaper_win_predicate(h, x)).unwrap_or(z)
        } else {
            let zn = solved.pursuer_move(game, h, b, z).ok_or_else(|| {
                DiscreteError::InconsistentTables(format!("no pursuer reply at unmarked state ({h}, {b}, {z})"))
            })?;
            if solved.is_escaper_win(h, z) {
                return Err(DiscreteError::InconsistentTables(format!(
                    "marked state ({h}, {z}) let the pursuer escape into an unmarked state"
                )));
            }
            zn
        };
        out.turns.push(Turn { h: b, z: zn });
        if game.escaper_win_predicate(h, zn) {
            out.decisive = Some((h, zn));
            break;
        }
        h = b;
        z = zn;
    }
    Ok(out)
}

/// Escaper move leaving the pursuer the fewest safe replies into unmarked
/// states; ties go to the lowest index.
fn greedy_move(game: &DiscreteGame, solved: &SolveResult, h: usize, z: usize) -> usize {
    game.move_h
        .neighbors(h)
        .iter()
        .map(|&b| b as usize)
        .min_by_key(|&b| {
            game.move_z
                .neighbors(z)
                .iter()
                .filter(|&&x| !game.escaper_win_predicate(h, x as usize) && !solved.is_escaper_win(b, x as usize))
                .count()
        })
        .unwrap_or(h)
}

/// Continuous-time rendering of a transcript in the polygon: each turn takes
/// `2δ`, the escaper walking its geodesic at unit speed in the first half
/// and the pursuer walking its geodesic at speed `r` in the second. After a
/// decisive trigger the escaper runs for the nearest uncovered exit while
/// the pursuer holds.
pub fn continuous_replay(
    ctx: &MetricContext,
    game: &DiscreteGame,
    transcript: &Transcript,
) -> Result<(Scripted, Scripted), DiscreteError> {
    let samples = game
        .samples
        .as_ref()
        .ok_or_else(|| DiscreteError::InvalidParameter("replay needs a sampled game".into()))?;
    let delta = game.delta;
    let speed = game.r.max(f64::MIN_POSITIVE);
    let hp = |i: usize| samples.escaper[i];
    let zp = |i: usize| samples.pursuer[i];
    let mut h_way = vec![(0.0, hp(transcript.h0))];
    let mut z_way = vec![(0.0, zp(transcript.z0))];
    let (mut h, mut z) = (transcript.h0, transcript.z0);
    let walk = |way: &mut Vec<(f64, Point2)>, from: Point2, to: Point2, metric: Metric, t0: f64, v: f64| {
        let path = ctx.shortest_path(from, to, metric)?;
        let mut t = t0;
        way.push((t, from));
        for w in path.windows(2) {
            t += w[0].dist(w[1]) / v;
            way.push((t, w[1]));
        }
        Ok::<f64, DiscreteError>(t)
    };
    let mut clock = 0.0;
    for turn in &transcript.turns {
        walk(&mut h_way, hp(h), hp(turn.h), Metric::Escaper, clock, 1.0)?;
        walk(&mut z_way, zp(z), zp(turn.z), Metric::Pursuer, clock + delta, speed)?;
        clock += 2.0 * delta;
        h = turn.h;
        z = turn.z;
    }
    if let Some((threat, zt)) = transcript.decisive {
        let uncovered = super::bits::ones(game.threats.row(threat)).filter(|&x| !game.covers.get(zt, x));
        let target = uncovered
            .map(|x| (ctx.interior_distance(hp(h), hp(x)).unwrap_or(f64::INFINITY), x))
            .min_by(|a, b| a.0.total_cmp(&b.0));
        if let Some((_, x)) = target {
            walk(&mut h_way, hp(h), hp(x), Metric::Escaper, clock, 1.0)?;
        }
    }
    let escaper = Scripted::new(Role::Escaper, 1.0, h_way).map_err(|e| DiscreteError::InvalidParameter(e.to_string()))?;
    let pursuer = Scripted::new(Role::Pursuer, speed, z_way).map_err(|e| DiscreteError::InvalidParameter(e.to_string()))?;
    Ok((escaper, pursuer))
}
