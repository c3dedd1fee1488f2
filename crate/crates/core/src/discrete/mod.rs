//! The (δ, γ)-discretized game: sampled domains, move graphs with escaper
//! steps up to δ and pursuer steps up to rδ, and an exact retrograde solver.
//!
//! A turn is an escaper move followed by a pursuer move. A threat posed by
//! the escaper at `h_j` is checked against the pursuer position `z_{j+1}`,
//! so the pursuer gets two replies per threat.

mod bits;
mod game;
mod play;
mod sample;
mod solve;

use thiserror::Error;

use crate::geometry::GeometryError;

pub use game::{build_game, build_game_on, state_count, Adjacency, DiscreteGame, DEFAULT_STATE_CAP};
pub use play::{continuous_replay, play_discrete, Transcript, Turn};
pub use sample::{boundary_samples, gamma_sample, verify_net, NetReport, SampleSet};
pub use solve::{solve, solve_with, EscaperEntry, PursuerEntry, SolveOptions, SolveResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiscreteError {
    #[error("gamma {gamma} exceeds half the feature size ({limit})")]
    GammaTooCoarse { gamma: f64, limit: f64 },
    #[error("{states} states exceed the cap of {cap} ({escaper} escaper samples, {pursuer} pursuer samples)")]
    TooManyStates {
        states: u64,
        cap: u64,
        escaper: usize,
        pursuer: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid move graph: {0}")]
    InvalidGraph(String),
    #[error("inconsistent strategy tables: {0}")]
    InconsistentTables(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
