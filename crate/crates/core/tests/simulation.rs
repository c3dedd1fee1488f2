use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use proptest::prelude::*;
use pursuit_escape::exact::{
    aplo_position, disk_r_star, disk_strategies, wedge_r_star, AploParams, ArcChasingPursuer, DiskEscaper,
    ProjectionPursuer, SignedProgress, StraightRunEscaper,
};
use pursuit_escape::sim::{
    emit_svg, obliviate, playthrough, respond, validate_speed, Arena, DiskArena, HalfPlaneArena, MotionPath,
    Outcome, PlaneArena, Policy, Role, SimError, Strategy, View, WedgeArena,
};
use pursuit_escape::Point2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct StandStill(Point2, Role);

struct StandPolicy(Point2);

impl Policy for StandPolicy {
    fn position(&mut self, _view: &View<'_>) -> Result<Point2, SimError> {
        Ok(self.0)
    }
}

impl Strategy for StandStill {
    fn role(&self) -> Role {
        self.1
    }
    fn max_speed(&self) -> f64 {
        1.0
    }
    fn policy(&self) -> Box<dyn Policy + '_> {
        Box::new(StandPolicy(self.0))
    }
}

/// Moves at twice its declared speed.
struct Cheater;

impl Strategy for Cheater {
    fn role(&self) -> Role {
        Role::Escaper
    }
    fn max_speed(&self) -> f64 {
        1.0
    }
    fn policy(&self) -> Box<dyn Policy + '_> {
        struct P;
        impl Policy for P {
            fn position(&mut self, view: &View<'_>) -> Result<Point2, SimError> {
                Ok(Point2::new(0.0, -0.5 + 2.0 * view.t()))
            }
        }
        Box::new(P)
    }
}

fn halfplane(theta: f64, r: f64) -> pursuit_escape::sim::Playthrough {
    playthrough(
        &StraightRunEscaper::halfplane(theta),
        &ProjectionPursuer::halfplane(theta, r),
        1e-4,
        4.0,
        0.05,
        &HalfPlaneArena::with_angle(theta),
    )
    .unwrap()
}

#[test]
fn halfplane_projection_holds_at_critical_ratio() {
    let pt = halfplane(FRAC_PI_2, 1.0);
    assert_eq!(pt.outcome, Outcome::NoEscapeByTmax);
    assert!(pt.touches.count > 0);
    assert!(pt.touches.max_separation.unwrap() <= 1.0 * 1e-4 + 1e-9);
}

#[test]
fn halfplane_straight_run_beats_slow_pursuer() {
    let pt = halfplane(FRAC_PI_2, 0.9);
    match pt.outcome {
        Outcome::EscaperEscaped { separation, exit, .. } => {
            assert!(separation >= 0.05);
            assert!(exit.x.abs() < 1e-9 && exit.y > 0.0 && exit.y <= 1.0);
        }
        other => panic!("expected escape, got {other:?}"),
    }
}

#[test]
fn oblique_halfplane_tracks_closed_form() {
    // r* = 1/sin θ for s_h = (1, 0), s_z = origin
    let theta: f64 = 0.5;
    let r_star = 1.0 / theta.sin();
    let slow = playthrough(
        &StraightRunEscaper::halfplane(theta),
        &ProjectionPursuer::halfplane(theta, 0.95 * r_star),
        1e-4,
        3.0,
        1e-3,
        &HalfPlaneArena::with_angle(theta),
    )
    .unwrap();
    assert!(matches!(slow.outcome, Outcome::EscaperEscaped { .. }));
    let fast = playthrough(
        &StraightRunEscaper::halfplane(theta),
        &ProjectionPursuer::halfplane(theta, r_star),
        1e-4,
        3.0,
        1e-3,
        &HalfPlaneArena::with_angle(theta),
    )
    .unwrap();
    assert_eq!(fast.outcome, Outcome::NoEscapeByTmax);
}

#[test]
fn wedge_scenarios_split_at_closed_form() {
    for half in [FRAC_PI_4, PI / 6.0, FRAC_PI_2] {
        let arena = WedgeArena { half_angle: half };
        let r_star = wedge_r_star(2.0 * half).unwrap();
        let run = |r: f64| {
            playthrough(
                &StraightRunEscaper::wedge(half),
                &ProjectionPursuer::wedge(half, r),
                1e-4,
                3.0,
                1e-3,
                &arena,
            )
            .unwrap()
            .outcome
        };
        assert!(matches!(run(0.9 * r_star), Outcome::EscaperEscaped { .. }), "half-angle {half}");
        assert_eq!(run(r_star), Outcome::NoEscapeByTmax, "half-angle {half}");
    }
}

#[test]
fn disk_escapes_below_critical_ratio() {
    let (e, z) = disk_strategies(4.4).unwrap();
    let coarse = playthrough(&e, &z, 1e-4, 10.0, 1e-3, &DiskArena).unwrap();
    let fine = playthrough(&e, &z, 5e-5, 10.0, 1e-3, &DiskArena).unwrap();
    let sep = |o: &Outcome| match o {
        Outcome::EscaperEscaped { separation, .. } => *separation,
        other => panic!("expected escape, got {other:?}"),
    };
    let (a, b) = (sep(&coarse.outcome), sep(&fine.outcome));
    assert!(a > 0.1, "separation {a}");
    assert!((a - b).abs() < 10.0 * 4.4 * 1e-4);
}

#[test]
fn arc_chasing_pursuer_holds_above_critical_ratio() {
    let r = 4.8;
    let dt = 1e-4;
    let pursuer = ArcChasingPursuer::new(r);
    let mut touched = 0;
    for assumed in [4.4, 4.6, 4.8, 6.0] {
        let pt = playthrough(&DiskEscaper::new(assumed), &pursuer, dt, 10.0, 5.0 * r * dt, &DiskArena).unwrap();
        assert_eq!(pt.outcome, Outcome::NoEscapeByTmax, "escaper assuming r = {assumed}");
        if let Some(s) = pt.touches.max_separation {
            assert!(s <= r * dt + 1e-9, "escaper assuming r = {assumed}: {s}");
            touched += 1;
        }
    }
    assert!(touched >= 2);
}

#[test]
fn obliviated_disk_pursuer_holds_with_widened_epsilon() {
    let r = 4.8;
    let dt = 1e-4;
    let eps = 0.02;
    let pursuer = obliviate(ArcChasingPursuer::new(r), eps / (2.0 * r));
    for assumed in [4.4, 4.8] {
        let pt = playthrough(&DiskEscaper::new(assumed), &pursuer, dt, 10.0, 1.5 * eps, &DiskArena).unwrap();
        assert_eq!(pt.outcome, Outcome::NoEscapeByTmax, "escaper assuming r = {assumed}");
    }
}

#[test]
fn pursuer_stays_put_while_escaper_sits_at_center() {
    let z = ArcChasingPursuer::new(4.8);
    let pt = playthrough(
        &StandStill(Point2::ORIGIN, Role::Escaper),
        &z,
        1e-3,
        1.0,
        1e-3,
        &DiskArena,
    )
    .unwrap();
    let first = pt.pursuer_path.points[0];
    assert!(pt.pursuer_path.points.iter().all(|&p| p == first));
}

#[test]
fn engine_rejects_speed_and_domain_violations() {
    let z = StandStill(Point2::new(1.0, 0.0), Role::Pursuer);
    let err = playthrough(&Cheater, &z, 0.01, 1.0, 1e-3, &DiskArena).unwrap_err();
    assert!(matches!(err, SimError::SpeedViolation { role: Role::Escaper, .. }));
    let outside = StandStill(Point2::new(2.0, 0.0), Role::Escaper);
    let err = playthrough(&outside, &z, 0.01, 1.0, 1e-3, &DiskArena).unwrap_err();
    assert!(matches!(err, SimError::DomainViolation { role: Role::Escaper, .. }));
    let inside_pursuer = StandStill(Point2::new(0.5, 0.0), Role::Pursuer);
    let err = playthrough(&StandStill(Point2::ORIGIN, Role::Escaper), &inside_pursuer, 0.01, 1.0, 1e-3, &DiskArena)
        .unwrap_err();
    assert!(matches!(err, SimError::DomainViolation { role: Role::Pursuer, .. }));
}

#[test]
fn coarse_step_gives_single_step() {
    let (e, z) = disk_strategies(4.4).unwrap();
    let pt = playthrough(&e, &z, 2.0, 1.0, 1e-3, &DiskArena);
    // one unit step from radius 1/r* would leave the disk only through circling
    let pt = pt.unwrap();
    assert_eq!(pt.escaper_path.len(), 2);
    assert_eq!(pt.outcome, Outcome::NoEscapeByTmax);
}

#[test]
fn playthroughs_are_deterministic() {
    let (e, z) = disk_strategies(4.4).unwrap();
    let a = playthrough(&e, &z, 1e-3, 5.0, 1e-3, &DiskArena).unwrap();
    let b = playthrough(&e, &z, 1e-3, 5.0, 1e-3, &DiskArena).unwrap();
    assert_eq!(a, b);
}

fn circle_walk(seed: u64, n: usize, speed: f64, dt: f64) -> Vec<Point2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a: f64 = rng.gen_range(0.0..2.0 * PI);
    (0..n)
        .map(|_| {
            a += rng.gen_range(-1.0..1.0) * speed * dt;
            Point2::from_polar(1.0, a)
        })
        .collect()
}

fn interior_walk(seed: u64, n: usize, dt: f64) -> Vec<Point2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = Point2::new(0.1, 0.0);
    (0..n)
        .map(|_| {
            p = p + Point2::from_polar(dt, rng.gen_range(0.0..2.0 * PI));
            if p.norm() > 0.9 {
                p = p * 0.5;
            }
            p
        })
        .collect()
}

/// Splices `b` after index `cut` of `a`.
fn diverge(a: &[Point2], b: &[Point2], cut: usize) -> Vec<Point2> {
    a[..=cut].iter().chain(&b[cut + 1..]).copied().collect()
}

fn check_no_lookahead(strategy: &dyn Strategy, a: &[Point2], b: &[Point2], dt: f64, delay: usize) {
    let n = a.len();
    for cut in [0, n / 7, n / 3, n / 2, n - 2] {
        let other = diverge(a, b, cut);
        let x = respond(strategy, a, dt).unwrap();
        let y = respond(strategy, &other, dt).unwrap();
        // escapers see one step less of the opponent than pursuers
        let safe = match strategy.role() {
            Role::Escaper => cut + 1,
            Role::Pursuer => cut,
        } + delay;
        let upto = safe.min(n - 1);
        assert_eq!(x[..=upto], y[..=upto], "{} cut {cut}", strategy.name());
    }
}

#[test]
fn built_in_strategies_do_not_look_ahead() {
    let dt = 1e-3;
    let n = 3000;
    let escapers: Vec<Box<dyn Strategy>> = vec![
        Box::new(DiskEscaper::new(4.4)),
        Box::new(DiskEscaper::new(5.0)),
        Box::new(StraightRunEscaper::halfplane(FRAC_PI_2)),
        Box::new(StraightRunEscaper::wedge(FRAC_PI_4)),
    ];
    let pursuers: Vec<Box<dyn Strategy>> = vec![
        Box::new(ArcChasingPursuer::new(4.8)),
        Box::new(ProjectionPursuer::halfplane(0.7, 2.0)),
        Box::new(ProjectionPursuer::wedge(FRAC_PI_4, 2.0)),
    ];
    for seed in 0..3 {
        let za = circle_walk(seed, n, 4.0, dt);
        let zb = circle_walk(seed + 100, n, 4.0, dt);
        let ha = interior_walk(seed, n, dt);
        let hb = interior_walk(seed + 100, n, dt);
        for s in &escapers {
            check_no_lookahead(s.as_ref(), &za, &zb, dt, 0);
        }
        for s in &pursuers {
            check_no_lookahead(s.as_ref(), &ha, &hb, dt, 0);
        }
    }
}

#[test]
fn obliviated_strategies_are_delta_oblivious() {
    let dt = 1e-3;
    let n = 2000;
    let delta: f64 = 0.05;
    let m = (delta / dt).round() as usize;
    let za = circle_walk(7, n, 4.0, dt);
    let zb = circle_walk(8, n, 4.0, dt);
    let ha = interior_walk(7, n, dt);
    let hb = interior_walk(8, n, dt);
    let e = obliviate(DiskEscaper::new(4.4), delta);
    let r = obliviate(StraightRunEscaper::halfplane(FRAC_PI_2), delta);
    let z = obliviate(ArcChasingPursuer::new(4.8), delta);
    let p = obliviate(ProjectionPursuer::wedge(FRAC_PI_4, 2.0), delta);
    check_no_lookahead(&e, &za, &zb, dt, m);
    check_no_lookahead(&r, &za, &zb, dt, m);
    check_no_lookahead(&z, &ha, &hb, dt, m);
    check_no_lookahead(&p, &ha, &hb, dt, m);
    // stands at its start point through [0, δ]
    let path = respond(&e, &za, dt).unwrap();
    assert!(path[..=m].iter().all(|&q| q == path[0]));
    assert_eq!(path[0], DiskEscaper::new(4.4).start());
}

#[test]
fn obliviated_output_replays_original_with_delay() {
    let dt = 1e-3;
    let delta = 0.02;
    let m = 20;
    let ha = interior_walk(3, 500, dt);
    let inner = ArcChasingPursuer::new(4.8);
    let plain = respond(&inner, &ha, dt).unwrap();
    let delayed = respond(&obliviate(inner, delta), &ha, dt).unwrap();
    for k in m + 1..ha.len() {
        assert_eq!(delayed[k], plain[k - m]);
    }
}

#[test]
fn speed_report_basics() {
    let still = MotionPath::on_grid(vec![Point2::new(0.3, 0.1); 10], 0.1, 1.0, Role::Escaper);
    let rep = validate_speed(&still, &PlaneArena, 50, 1);
    assert_eq!(rep.max_speed, 0.0);
    assert!(rep.pass);
    let line: Vec<Point2> = (0..100).map(|k| Point2::new(k as f64 * 0.01, 0.0)).collect();
    let rep = validate_speed(&MotionPath::on_grid(line, 0.01, 1.0, Role::Escaper), &PlaneArena, 200, 1);
    assert!((rep.max_speed - 1.0).abs() < 1e-9);
    assert!(rep.pass);
    let fast: Vec<Point2> = (0..100).map(|k| Point2::new(k as f64 * 0.02, 0.0)).collect();
    assert!(!validate_speed(&MotionPath::on_grid(fast, 0.01, 1.0, Role::Escaper), &PlaneArena, 0, 1).pass);
}

/// Random APLO run against a pursuer whose progress changes by at most
/// `r'·dt` per step.
fn aplo_path(seed: u64) -> MotionPath {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r_prime = rng.gen_range(0.5..20.0);
    let alpha: f64 = rng.gen_range(0.01..FRAC_PI_2 - 0.01);
    let shrink = rng.gen_range(0.5..1.0);
    let params = AploParams::new(
        Point2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        Point2::from_polar(1.0, rng.gen_range(0.0..2.0 * PI)),
        r_prime,
        shrink * alpha.cos(),
        shrink * alpha.sin(),
    )
    .unwrap();
    let dt = 1e-3;
    let mut d = 0.0;
    let mut drift = rng.gen_range(-1.0..1.0);
    let points = (0..2000)
        .map(|k| {
            if k > 0 {
                if rng.gen_bool(0.01) {
                    drift = rng.gen_range(-1.0..1.0);
                }
                // full-speed clockwise runs are included via |drift| = 1
                let v: f64 = if rng.gen_bool(0.3) { -1.0 } else { drift };
                d += v * r_prime * dt;
            }
            aplo_position(&params, SignedProgress(d), k as f64 * dt)
        })
        .collect();
    MotionPath::on_grid(points, dt, 1.0, Role::Escaper)
}

#[test]
fn aplo_paths_respect_speed_limit() {
    for seed in 0..100 {
        let rep = validate_speed(&aplo_path(seed), &PlaneArena, 500, seed);
        assert!(rep.pass, "seed {seed}: {rep:?}");
    }
}

proptest! {
    #[test]
    fn aplo_is_memoryless(t in 0.0..10.0f64, d in -50.0..50.0f64, du in 0.05..0.7f64, dv in 0.05..0.7f64) {
        let p = AploParams::new(Point2::new(0.1, 0.2), Point2::new(0.0, 1.0), 4.0, du, dv).unwrap();
        let a = aplo_position(&p, SignedProgress(d), t);
        let b = aplo_position(&p, SignedProgress(d), t);
        prop_assert_eq!(a, b);
        // two samples are at most their time gap apart once progress is admissible
        let later = aplo_position(&p, SignedProgress(d + 4.0 * 0.5), t + 0.5);
        prop_assert!(a.dist(later) <= 0.5 + 1e-12);
    }

    #[test]
    fn wedge_ratio_decreases_with_angle(a in 0.01..3.1f64, gap in 1e-6..0.5f64) {
        let b = (a + gap).min(PI);
        prop_assert!(wedge_r_star(a).unwrap() > wedge_r_star(b).unwrap());
    }
}

#[test]
fn svg_structure() {
    let (e, z) = disk_strategies(4.4).unwrap();
    let pt = playthrough(&e, &z, 1e-3, 10.0, 1e-3, &DiskArena).unwrap();
    let svg = emit_svg(&pt, &DiskArena);
    assert_eq!(svg.matches("<circle").count(), 1);
    assert_eq!(svg.matches("<polyline").count(), 2);
    let Outcome::EscaperEscaped { separation, .. } = pt.outcome else {
        panic!("expected escape")
    };
    assert!(svg.contains(&format!("separation={separation:.6}")));

    let still = playthrough(
        &StandStill(Point2::ORIGIN, Role::Escaper),
        &ArcChasingPursuer::new(4.8),
        1e-2,
        1.0,
        1e-3,
        &DiskArena,
    )
    .unwrap();
    let svg = emit_svg(&still, &DiskArena);
    assert_eq!(svg.matches("<polyline").count(), 0);
    assert_eq!(svg.matches("<rect").count(), 2);
}

#[test]
fn disk_constant_drives_the_gate() {
    let gate = 1.0 / disk_r_star();
    let z = ArcChasingPursuer::new(4.8);
    let ring = StandStill(Point2::new(0.0, gate), Role::Escaper);
    let pt = playthrough(&ring, &z, 1e-3, 0.5, 1e-3, &DiskArena).unwrap();
    assert!(pt.pursuer_path.points.iter().all(|&p| p == pt.pursuer_path.points[0]));
    let beyond = StandStill(Point2::new(0.0, gate * 1.01), Role::Escaper);
    let pt = playthrough(&beyond, &z, 1e-3, 0.5, 1e-3, &DiskArena).unwrap();
    assert!(pt.pursuer_path.points.last().unwrap().dist(Point2::new(0.0, 1.0)) < 1e-12);
    assert!(DiskArena.in_pursuer_domain(*pt.pursuer_path.points.last().unwrap()));
}
