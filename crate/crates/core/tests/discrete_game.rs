mod support;

use pursuit_escape::discrete::{
    build_game, build_game_on, gamma_sample, play_discrete, solve, solve_with, verify_net, Adjacency,
    DiscreteError, DiscreteGame, SampleSet, SolveOptions,
};
use pursuit_escape::geometry::{validate_polygon, MetricContext, Polygon, PursuerModel};
use pursuit_escape::Point2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::{random_toy, Minimax, ToyGame};

fn square(model: PursuerModel) -> MetricContext {
    MetricContext::new(Polygon::rectangle(1.0, 1.0).unwrap(), model)
}

fn l_shape() -> MetricContext {
    let p = validate_polygon(&[
        Point2::new(0.0, 0.0),
        Point2::new(2.0, 0.0),
        Point2::new(2.0, 1.0),
        Point2::new(1.0, 1.0),
        Point2::new(1.0, 2.0),
        Point2::new(0.0, 2.0),
    ])
    .unwrap();
    MetricContext::new(p, PursuerModel::Moat)
}

#[test]
fn square_sample_counts() {
    let ctx = square(PursuerModel::Moat);
    let s = gamma_sample(&ctx, 0.5).unwrap();
    assert_eq!(s.exit_count, 8);
    assert_eq!(s.pursuer.len(), 8);
    // the 3x3 grid shares only the corner (0, 0) with the boundary samples
    assert_eq!(s.escaper.len() - s.exit_count + 1, 9);
    assert_eq!(&s.escaper[..8], &s.pursuer[..]);
    let fine = gamma_sample(&ctx, 0.25).unwrap();
    assert!(fine.exit_count >= 2 * s.exit_count);
    assert!(matches!(gamma_sample(&ctx, 0.6), Err(DiscreteError::GammaTooCoarse { .. })));
}

#[test]
fn exterior_samples_cover_the_hull_gap() {
    let ctx = MetricContext::new(l_shape().polygon().clone(), PursuerModel::Exterior);
    let s = gamma_sample(&ctx, 0.2).unwrap();
    assert!(s.pursuer.len() > s.exit_count);
    assert!(s.pursuer[s.exit_count..].iter().all(|&p| ctx.in_pursuer_domain(p)));
    let rep = verify_net(&ctx, &s, 300, 5);
    assert!(rep.max_gap() <= 0.2, "{rep:?}");
}

#[test]
fn net_property_holds_and_fails_when_broken() {
    let ctx = square(PursuerModel::Moat);
    let s = gamma_sample(&ctx, 0.5).unwrap();
    let rep = verify_net(&ctx, &s, 1000, 1);
    assert!(rep.max_gap() <= 0.5, "{rep:?}");
    let corners = ctx.polygon().vertices().to_vec();
    let broken = SampleSet {
        escaper: corners.clone(),
        pursuer: corners,
        exit_count: 4,
        gamma: 0.05,
    };
    assert!(verify_net(&ctx, &broken, 200, 1).max_gap() > 0.05);
    assert!(verify_net(&ctx, &s, 1, 9).max_gap() >= 0.0);
    let l = l_shape();
    let s = gamma_sample(&l, 0.2).unwrap();
    assert!(verify_net(&l, &s, 500, 3).max_gap() <= 0.2);
}

#[test]
fn pursuer_moves_reach_r_delta_each_way() {
    let ctx = square(PursuerModel::Moat);
    let g = build_game(&ctx, 4.0, 0.5, 0.1).unwrap();
    let s = g.samples.as_ref().unwrap();
    let poly = ctx.polygon();
    for z in 0..g.pursuer_count() {
        let s0 = poly.boundary_param(s.pursuer[z]).unwrap();
        let deltas: Vec<f64> = g
            .move_z
            .neighbors(z)
            .iter()
            .map(|&x| poly.arc_delta(s0, poly.boundary_param(s.pursuer[x as usize]).unwrap()))
            .collect();
        let fwd = deltas.iter().cloned().fold(f64::MIN, f64::max);
        let back = deltas.iter().cloned().fold(f64::MAX, f64::min);
        assert!(fwd <= 2.0 + 1e-9 && fwd >= 2.0 - 0.1, "{fwd}");
        assert!(back >= -2.0 - 1e-9 && back <= -2.0 + 0.1, "{back}");
    }
}

#[test]
fn move_graphs_grow_with_r_and_collapse_at_zero_delta() {
    let ctx = l_shape();
    let s = gamma_sample(&ctx, 0.2).unwrap();
    let a = build_game_on(&ctx, &s, 2.0, 0.3, u64::MAX).unwrap();
    let b = build_game_on(&ctx, &s, 3.0, 0.3, u64::MAX).unwrap();
    for z in 0..a.pursuer_count() {
        assert!(a.move_z.neighbors(z).iter().all(|&x| b.move_z.contains(z, x as usize)));
    }
    let zero = build_game_on(&ctx, &s, 5.0, 0.0, u64::MAX).unwrap();
    assert!(zero.move_h.is_only_self_loops());
    assert!(zero.move_z.is_only_self_loops());
}

#[test]
fn escaper_moves_respect_the_interior_metric() {
    // points on both sides of the reflex corner are close in the plane only
    let ctx = l_shape();
    let s = SampleSet {
        escaper: vec![Point2::new(1.5, 0.0), Point2::new(1.5, 0.95), Point2::new(0.95, 1.5)],
        pursuer: vec![Point2::new(1.5, 0.0)],
        exit_count: 1,
        gamma: 0.1,
    };
    let g = build_game_on(&ctx, &s, 1.0, 0.8, u64::MAX).unwrap();
    assert!(!g.move_h.contains(1, 2));
    let g = build_game_on(&ctx, &s, 1.0, 0.11, u64::MAX).unwrap();
    assert!(!g.move_h.contains(0, 1));
}

#[test]
fn state_cap_is_enforced() {
    let ctx = square(PursuerModel::Moat);
    let s = gamma_sample(&ctx, 0.05).unwrap();
    let err = build_game_on(&ctx, &s, 4.0, 0.25, 1000).unwrap_err();
    assert!(matches!(err, DiscreteError::TooManyStates { cap: 1000, .. }));
}

#[test]
fn win_predicate_cases() {
    // exits 0, 1; escaper samples 2 (next to exit 0) and 3 (next to nothing)
    let toy = ToyGame {
        exits: 2,
        h: vec![vec![0, 2], vec![1], vec![2, 0], vec![3]],
        z: vec![vec![0], vec![1, 2], vec![2, 1]],
    };
    let g = toy.to_game();
    assert!(g.escaper_win_predicate(2, 1));
    assert!(g.escaper_win_predicate(2, 2));
    assert!(!g.escaper_win_predicate(2, 0));
    assert!(!g.escaper_win_predicate(3, 1));
    assert_eq!(g.threatened_exits(2), vec![0]);
}

#[test]
fn adjacency_validation() {
    assert!(Adjacency::from_lists(vec![vec![0, 1], vec![1]]).is_err());
    assert!(Adjacency::from_lists(vec![vec![1], vec![0, 1]]).is_err());
    assert!(Adjacency::from_lists(vec![vec![0, 2]]).is_err());
    assert!(Adjacency::from_lists(vec![vec![0, 1], vec![1, 0]]).is_ok());
}

#[test]
fn extreme_ratios_decide_the_square() {
    let ctx = square(PursuerModel::Moat);
    let fast = build_game(&ctx, 40.0, 0.5, 0.25).unwrap();
    assert!(!solve(&fast).escaper_wins);
    let frozen = build_game(&ctx, 0.0, 0.5, 0.25).unwrap();
    assert!(solve(&frozen).escaper_wins);
}

#[test]
fn five_point_toy_matches_minimax() {
    // V_h = {x, a, b}, V_z = {x, c, d}; a sees the exit, b only sees a
    let toy = ToyGame {
        exits: 1,
        h: vec![vec![0, 1], vec![0, 1, 2], vec![1, 2]],
        z: vec![vec![0, 1], vec![0, 1, 2], vec![1, 2]],
    };
    let g = toy.to_game();
    let res = solve(&g);
    let mut mm = Minimax::new(&toy);
    assert_eq!(res.escaper_wins, mm.escaper_wins());
    for h in 0..3 {
        for z in 0..3 {
            assert_eq!(res.is_escaper_win(h, z), mm.state_wins(h, z), "state ({h}, {z})");
        }
    }
}

#[test]
fn random_toys_match_minimax_statewise() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut escaper_wins = 0;
    for _ in 0..150 {
        let toy = random_toy(&mut rng);
        let g = toy.to_game();
        let res = solve(&g);
        let mut mm = Minimax::new(&toy);
        assert_eq!(res.escaper_wins, mm.escaper_wins(), "{toy:?}");
        escaper_wins += res.escaper_wins as usize;
        for h in 0..toy.h.len() {
            for z in 0..toy.z.len() {
                assert_eq!(res.is_escaper_win(h, z), mm.state_wins(h, z), "{toy:?} ({h}, {z})");
            }
        }
    }
    assert!(escaper_wins > 10 && escaper_wins < 140, "{escaper_wins}");
}

#[test]
fn early_stop_agrees_on_the_winner() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let g = random_toy(&mut rng).to_game();
        let full = solve(&g);
        let quick = solve_with(&g, SolveOptions { stop_when_decided: true });
        assert_eq!(full.escaper_wins, quick.escaper_wins);
        assert!(quick.win_count() <= full.win_count());
    }
}

fn replay_checks(g: &DiscreteGame) {
    let res = solve(g);
    let limit = (g.escaper_count() * g.pursuer_count() + 1) as usize;
    let t = play_discrete(g, &res, limit).unwrap();
    if res.escaper_wins {
        let (h, z) = t.decisive.expect("winning replay must trigger the predicate");
        assert!(g.escaper_win_predicate(h, z));
    } else {
        assert!(t.decisive.is_none());
        assert_eq!(t.turns.len(), limit);
    }
    assert!(play_discrete(g, &res, 0).unwrap().turns.is_empty());
}

#[test]
fn replays_follow_the_winner() {
    let ctx = square(PursuerModel::Moat);
    let s = gamma_sample(&ctx, 0.25).unwrap();
    for r in [0.5, 1.0, 2.0, 8.0] {
        replay_checks(&build_game_on(&ctx, &s, r, 0.25, u64::MAX).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        replay_checks(&random_toy(&mut rng).to_game());
    }
}

#[test]
fn tables_are_consistent_with_marking() {
    let ctx = square(PursuerModel::Moat);
    let g = build_game(&ctx, 1.5, 0.25, 0.125).unwrap();
    let res = solve(&g);
    for e in res.escaper_table(&g, 500) {
        assert!(g.move_h.contains(e.h, e.to));
        assert!(res.is_escaper_win(e.h, e.z));
        assert!(res.pursuer_turn_is_escaper_win(&g, e.h, e.to, e.z));
    }
    for p in res.pursuer_table(&g, 500) {
        assert!(g.move_z.contains(p.z, p.to));
        assert!(!g.escaper_win_predicate(p.h_threat, p.to));
        assert!(!res.is_escaper_win(p.h_cur, p.to));
    }
}

fn assert_single_flip(ctx: &MetricContext, gamma: f64, delta: f64, rs: &[f64]) {
    let s = gamma_sample(ctx, gamma).unwrap();
    let winners: Vec<bool> = rs
        .iter()
        .map(|&r| solve(&build_game_on(ctx, &s, r, delta, u64::MAX).unwrap()).escaper_wins)
        .collect();
    assert!(winners.windows(2).all(|w| w[0] || !w[1]), "{winners:?}");
}

#[test]
fn pursuer_wins_persist_as_r_grows() {
    let rs = [0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 10.0];
    assert_single_flip(&square(PursuerModel::Moat), 0.1, 0.25, &rs);
    assert_single_flip(&l_shape(), 0.2, 0.3, &rs);
    let tri = validate_polygon(&[Point2::new(0.0, 0.0), Point2::new(2.0, 0.0), Point2::new(1.0, 1.8)]).unwrap();
    assert_single_flip(&MetricContext::new(tri, PursuerModel::Moat), 0.15, 0.3, &rs);
}

#[test]
fn random_geometric_toys_match_minimax() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let ctx = square(PursuerModel::Moat);
    for _ in 0..40 {
        let exits: Vec<Point2> = (0..rng.gen_range(1..=4))
            .map(|_| ctx.polygon().point_at(rng.gen_range(0.0..4.0)))
            .collect();
        let mut escaper = exits.clone();
        escaper.extend((0..rng.gen_range(0..=3)).map(|_| Point2::new(rng.gen_range(0.1..0.9), rng.gen_range(0.1..0.9))));
        let mut pursuer = exits.clone();
        pursuer.extend((0..rng.gen_range(1..=3)).map(|_| ctx.polygon().point_at(rng.gen_range(0.0..4.0))));
        let s = SampleSet {
            exit_count: exits.len(),
            escaper,
            pursuer,
            gamma: 0.5,
        };
        let g = build_game_on(&ctx, &s, rng.gen_range(0.5..4.0), rng.gen_range(0.2..0.8), u64::MAX).unwrap();
        let toy = ToyGame {
            exits: g.exit_count,
            h: (0..g.escaper_count()).map(|i| g.move_h.neighbors(i).iter().map(|&x| x as usize).collect()).collect(),
            z: (0..g.pursuer_count()).map(|i| g.move_z.neighbors(i).iter().map(|&x| x as usize).collect()).collect(),
        };
        assert_eq!(solve(&g).escaper_wins, Minimax::new(&toy).escaper_wins());
    }
}
