//! Shared oracles for integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use pursuit_escape::discrete::{Adjacency, DiscreteGame};
use rand::Rng;

/// Plain adjacency lists of a tiny game; exits are the first `exits`
/// indices of both lists.
#[derive(Clone, Debug)]
pub struct ToyGame {
    pub exits: usize,
    pub h: Vec<Vec<usize>>,
    pub z: Vec<Vec<usize>>,
}

impl ToyGame {
    pub fn to_game(&self) -> DiscreteGame {
        DiscreteGame::from_graphs(
            self.exits,
            Adjacency::from_lists(self.h.clone()).unwrap(),
            Adjacency::from_lists(self.z.clone()).unwrap(),
            1.0,
            1.0,
        )
        .unwrap()
    }

    fn predicate(&self, h_threat: usize, z: usize) -> bool {
        (0..self.exits).any(|x| self.h[h_threat].contains(&x) && !self.z[z].contains(&x))
    }
}

/// Exhaustive depth-bounded minimax over the unfolded turn structure:
/// escaper at `(h, z)` picks `b`, pursuer picks `z'`, escaper wins when the
/// threat `h` is uncovered at `z'`.
pub struct Minimax<'a> {
    game: &'a ToyGame,
    memo_e: HashMap<(usize, usize, usize), bool>,
    memo_p: HashMap<(usize, usize, usize, usize), bool>,
}

impl<'a> Minimax<'a> {
    pub fn new(game: &'a ToyGame) -> Self {
        Minimax {
            game,
            memo_e: HashMap::new(),
            memo_p: HashMap::new(),
        }
    }

    pub fn escaper_turn(&mut self, h: usize, z: usize, depth: usize) -> bool {
        if depth == 0 {
            return false;
        }
        if let Some(&v) = self.memo_e.get(&(h, z, depth)) {
            return v;
        }
        let moves = self.game.h[h].clone();
        let v = moves.into_iter().any(|b| self.pursuer_turn(h, b, z, depth));
        self.memo_e.insert((h, z, depth), v);
        v
    }

    pub fn pursuer_turn(&mut self, h: usize, b: usize, z: usize, depth: usize) -> bool {
        if let Some(&v) = self.memo_p.get(&(h, b, z, depth)) {
            return v;
        }
        let replies = self.game.z[z].clone();
        let v = replies
            .into_iter()
            .all(|zn| self.game.predicate(h, zn) || self.escaper_turn(b, zn, depth - 1));
        self.memo_p.insert((h, b, z, depth), v);
        v
    }

    /// Winner with enough depth for every reachable win: the number of
    /// escaper-turn states plus one.
    pub fn escaper_wins(&mut self) -> bool {
        let (nh, nz) = (self.game.h.len(), self.game.z.len());
        let depth = nh * nz + 1;
        (0..nh).any(|h0| (0..nz).all(|z0| self.escaper_turn(h0, z0, depth)))
    }

    pub fn state_wins(&mut self, h: usize, z: usize) -> bool {
        let depth = self.game.h.len() * self.game.z.len() + 1;
        self.escaper_turn(h, z, depth)
    }
}

fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Vec<Vec<usize>> {
    let mut lists: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                lists[i].push(j);
                lists[j].push(i);
            }
        }
    }
    lists
}

/// Random tiny game with at most 12 distinct sample points.
pub fn random_toy(rng: &mut impl Rng) -> ToyGame {
    let exits = rng.gen_range(1..=4);
    let extra_h = rng.gen_range(0..=(8 - exits).min(5));
    let extra_z = rng.gen_range(1..=(12 - exits - extra_h).min(5));
    let p = rng.gen_range(0.15..0.7);
    let q = rng.gen_range(0.1..0.6);
    ToyGame {
        exits,
        h: random_graph(rng, exits + extra_h, p),
        z: random_graph(rng, exits + extra_z, q),
    }
}
