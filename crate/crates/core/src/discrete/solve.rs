use serde::{Deserialize, Serialize};

use super::bits::{is_subset, is_zero, ones, BitRows};
use super::game::DiscreteGame;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Stop as soon as some escaper start wins against every pursuer start.
    /// The marking is then a prefix of the least fixpoint.
    pub stop_when_decided: bool,
}

/// Escaper-win marking of escaper-turn states `(h, z)`. A pursuer-turn state
/// `(h_threat, h_cur, z)` is an escaper win iff every safe pursuer reply
/// `z'` (one that covers all exits threatened from `h_threat`) leads to a
/// marked `(h_cur, z')`; its status is derived on demand.
#[derive(Clone, Debug)]
pub struct SolveResult {
    pub escaper_wins: bool,
    /// Escaper starts that beat every pursuer start.
    pub winning_starts: Vec<usize>,
    pub rounds: u32,
    /// False when the marking stopped early.
    pub complete: bool,
    nz: usize,
    win: BitRows,
    rank: Vec<u32>,
}

const UNMARKED: u32 = u32::MAX;

/// Least-fixpoint marking by rounds. Round `k` marks `(h, z)` when some
/// escaper move `h -> b` leaves the pursuer only replies `z'` with `(b, z')`
/// marked before round `k`. Only rows next to rows that grew are revisited.
pub fn solve_with(game: &DiscreteGame, options: SolveOptions) -> SolveResult {
    let nh = game.escaper_count();
    let nz = game.pursuer_count();
    let mut win = BitRows::new(nh, nz);
    let mut rank = vec![UNMARKED; nh * nz];
    let full = win.full();
    let words = win.words();
    let mut grew = vec![true; nh];
    let mut rounds = 0u32;
    let mut gained = vec![0u64; words];
    let mut remaining = vec![0u64; words];
    let mut bad = vec![0u64; words];
    let mut blocked = vec![0u64; words];
    let mut decided = false;

    loop {
        let mut updates: Vec<(usize, Vec<u64>)> = Vec::new();
        for h in 0..nh {
            let nbrs = game.move_h.neighbors(h);
            if !nbrs.iter().any(|&b| grew[b as usize]) {
                continue;
            }
            for w in 0..words {
                remaining[w] = full[w] & !win.row(h)[w];
            }
            if is_zero(&remaining) {
                continue;
            }
            gained.iter_mut().for_each(|w| *w = 0);
            let safe = game.safe.row(h);
            for &b in nbrs {
                let b = b as usize;
                if !grew[b] {
                    continue;
                }
                let wb = win.row(b);
                let mut bad_count = 0;
                let mut left = 0;
                for w in 0..words {
                    remaining[w] &= !gained[w];
                    bad[w] = safe[w] & !wb[w];
                    bad_count += bad[w].count_ones();
                    left += remaining[w].count_ones();
                }
                if left == 0 {
                    break;
                }
                if bad_count == 0 {
                    for w in 0..words {
                        gained[w] |= remaining[w];
                    }
                } else if bad_count <= left {
                    // pursuer samples with a safe reply outside W[b]
                    blocked.iter_mut().for_each(|w| *w = 0);
                    for z in ones(&bad) {
                        for (x, y) in blocked.iter_mut().zip(game.reach.row(z)) {
                            *x |= y;
                        }
                        if is_subset(&remaining, &blocked) {
                            break;
                        }
                    }
                    for w in 0..words {
                        gained[w] |= remaining[w] & !blocked[w];
                    }
                } else {
                    for z in ones(&remaining) {
                        let r = game.reach.row(z);
                        if r.iter().zip(&bad).all(|(x, y)| x & y == 0) {
                            gained[z / 64] |= 1 << (z % 64);
                        }
                    }
                }
            }
            if !is_zero(&gained) {
                updates.push((h, gained.clone()));
            }
        }
        if updates.is_empty() {
            break;
        }
        rounds += 1;
        grew.iter_mut().for_each(|g| *g = false);
        for (h, bits) in updates {
            for z in ones(&bits) {
                rank[h * nz + z] = rounds;
            }
            let row = win.row_mut(h);
            for (x, y) in row.iter_mut().zip(&bits) {
                *x |= y;
            }
            grew[h] = true;
            if row == full.as_slice() {
                decided = true;
            }
        }
        if decided && options.stop_when_decided {
            break;
        }
    }
    let complete = !(decided && options.stop_when_decided);
    let winning_starts: Vec<usize> = (0..nh).filter(|&h| win.row(h) == full.as_slice()).collect();
    SolveResult {
        escaper_wins: !winning_starts.is_empty(),
        winning_starts,
        rounds,
        complete,
        nz,
        win,
        rank,
    }
}

pub fn solve(game: &DiscreteGame) -> SolveResult {
    solve_with(game, SolveOptions::default())
}

/// One row of a strategy-table dump.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscaperEntry {
    pub h: usize,
    pub z: usize,
    pub rank: u32,
    pub to: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PursuerEntry {
    pub h_threat: usize,
    pub h_cur: usize,
    pub z: usize,
    pub to: usize,
}

impl SolveResult {
    pub fn is_escaper_win(&self, h: usize, z: usize) -> bool {
        self.win.get(h, z)
    }

    /// Round at which `(h, z)` was marked.
    pub fn rank(&self, h: usize, z: usize) -> Option<u32> {
        let r = self.rank[h * self.nz + z];
        (r != UNMARKED).then_some(r)
    }

    /// Number of marked escaper-turn states.
    pub fn win_count(&self) -> u64 {
        self.win.count_ones()
    }

    fn safe_replies<'a>(&self, game: &'a DiscreteGame, h_threat: usize, z: usize) -> impl Iterator<Item = usize> + 'a {
        let safe = game.safe.row(h_threat);
        game.move_z
            .neighbors(z)
            .iter()
            .map(|&x| x as usize)
            .filter(move |&x| safe[x / 64] >> (x % 64) & 1 == 1)
    }

    pub fn pursuer_turn_is_escaper_win(&self, game: &DiscreteGame, h_threat: usize, h_cur: usize, z: usize) -> bool {
        self.safe_replies(game, h_threat, z).all(|x| self.win.get(h_cur, x))
    }

    /// Rank-decreasing winning move from a marked state.
    pub fn escaper_move(&self, game: &DiscreteGame, h: usize, z: usize) -> Option<usize> {
        let k = self.rank(h, z)?;
        game.move_h.neighbors(h).iter().map(|&b| b as usize).find(|&b| {
            self.safe_replies(game, h, z)
                .all(|x| self.rank(b, x).is_some_and(|rb| rb < k))
        })
    }

    /// Safe reply into an unmarked state, if the pursuer has one.
    pub fn pursuer_move(&self, game: &DiscreteGame, h_threat: usize, h_cur: usize, z: usize) -> Option<usize> {
        self.safe_replies(game, h_threat, z).find(|&x| !self.win.get(h_cur, x))
    }

    /// Escaper start beating every pursuer start, quickest first.
    pub fn escaper_start(&self) -> Option<usize> {
        self.winning_starts
            .iter()
            .copied()
            .min_by_key(|&h| (0..self.nz).map(|z| self.rank(h, z).unwrap_or(UNMARKED)).max())
    }

    /// Pursuer start against `h0`: an unmarked state if one exists,
    /// otherwise the slowest loss.
    pub fn pursuer_start(&self, h0: usize) -> usize {
        (0..self.nz)
            .find(|&z| !self.win.get(h0, z))
            .unwrap_or_else(|| (0..self.nz).max_by_key(|&z| self.rank(h0, z)).unwrap_or(0))
    }

    /// Escaper moves for marked states, at most `limit` rows.
    pub fn escaper_table(&self, game: &DiscreteGame, limit: usize) -> Vec<EscaperEntry> {
        let nh = game.escaper_count();
        (0..nh)
            .flat_map(|h| (0..self.nz).map(move |z| (h, z)))
            .filter_map(|(h, z)| {
                let rank = self.rank(h, z)?;
                let to = self.escaper_move(game, h, z)?;
                Some(EscaperEntry { h, z, rank, to })
            })
            .take(limit)
            .collect()
    }

    /// Pursuer replies for unmarked pursuer-turn states, at most `limit` rows.
    pub fn pursuer_table(&self, game: &DiscreteGame, limit: usize) -> Vec<PursuerEntry> {
        let mut out = Vec::new();
        'outer: for h in 0..game.escaper_count() {
            for z in (0..self.nz).filter(|&z| !self.win.get(h, z)) {
                for &b in game.move_h.neighbors(h) {
                    let b = b as usize;
                    if let Some(to) = self.pursuer_move(game, h, b, z) {
                        if out.len() == limit {
                            break 'outer;
                        }
                        out.push(PursuerEntry {
                            h_threat: h,
                            h_cur: b,
                            z,
                            to,
                        });
                    }
                }
            }
        }
        out
    }
}
