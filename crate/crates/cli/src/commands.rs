use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use pursuit_escape::discrete::{
    build_game_on, continuous_replay, gamma_sample, play_discrete, solve, verify_net, DiscreteError, EscaperEntry,
    PursuerEntry, Transcript,
};
use pursuit_escape::exact::{
    canonical_table, disk_strategies, wedge_r_star, ProjectionPursuer, StraightRunEscaper,
};
use pursuit_escape::geometry::{read_polygon_file, validate_polygon};
use pursuit_escape::ratio::max_ratio;
use pursuit_escape::scheme::{approximate_r_star, ApproxParams, SchemeError};
use pursuit_escape::sim::{
    emit_svg, playthrough, Arena, DiskArena, HalfPlaneArena, Outcome, Playthrough, SimError, Strategy, WedgeArena,
};
use pursuit_escape::{MetricContext, Point2, Polygon, PursuerModel};

use crate::args::{Cli, Command, Common, Scenario};
use crate::Failure;

/// One result, in both renderings.
pub struct Document {
    pub json: Value,
    pub text: String,
}

/// Path points kept per side in a simulation transcript.
const TRANSCRIPT_POINTS: usize = 1000;

/// Strategy-table dump; carries enough to rebuild the game it came from.
#[derive(Debug, Serialize, Deserialize)]
pub struct TableDump {
    pub polygon: Vec<[f64; 2]>,
    pub model: PursuerModel,
    pub r: f64,
    pub delta: f64,
    pub gamma: f64,
    pub winner: String,
    pub escaper_start: Option<usize>,
    pub escaper_table: Vec<EscaperEntry>,
    pub pursuer_table: Vec<PursuerEntry>,
}

pub fn execute(cli: &Cli) -> Result<Document, Failure> {
    let c = &cli.common;
    if c.threads == Some(0) {
        return Err(Failure::validation("--threads", "must be at least 1"));
    }
    match &cli.command {
        Command::Ratio { spacing } => ratio(c, *spacing),
        Command::Exact { wedge_angle } => exact(*wedge_angle),
        Command::DiscreteSolve {
            r,
            delta,
            gamma,
            max_states,
            tables,
            table_limit,
            verify_net,
        } => discrete_solve(c, *r, *delta, *gamma, *max_states, tables.as_deref(), *table_limit, *verify_net),
        Command::Approximate {
            epsilon,
            budget,
            override_delta,
            override_gamma,
        } => approximate(c, *epsilon, *budget, override_delta.zip(*override_gamma)),
        Command::Simulate { .. } => simulate(c, &cli.command),
    }
}

fn positive(flag: &str, v: f64) -> Result<f64, Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::validation(flag, format!("must be positive and finite, got {v}")))
    }
}

fn context(c: &Common) -> Result<MetricContext, Failure> {
    let path = c.polygon.as_ref().ok_or_else(|| Failure::validation("--polygon", "required by this subcommand"))?;
    let poly = read_polygon_file(path).map_err(|e| Failure::validation(&format!("--polygon {}", path.display()), e))?;
    Ok(MetricContext::new(poly, c.model.into()))
}

fn vertices(poly: &Polygon) -> Vec<[f64; 2]> {
    poly.vertices().iter().map(|&p| p.into()).collect()
}

fn ratio(c: &Common, spacing: f64) -> Result<Document, Failure> {
    positive("--spacing", spacing)?;
    let ctx = context(c)?;
    let bound = max_ratio(&ctx, spacing).map_err(|e| Failure::validation("--spacing", e))?;
    let text = format!(
        "lower  {:.6}\nupper  {:.6}\nwitness ({:.6}, {:.6}) -> ({:.6}, {:.6})\nspacing {}\n",
        bound.lower, bound.upper, bound.witness_p.x, bound.witness_p.y, bound.witness_q.x, bound.witness_q.y, spacing
    );
    Ok(Document {
        json: json!({ "model": ctx.model(), "bound": bound }),
        text,
    })
}

fn exact(wedge_angle: f64) -> Result<Document, Failure> {
    let rows = canonical_table(wedge_angle).map_err(|e| Failure::validation("--wedge-angle", e))?;
    let mut text = format!("{:<22} {:<34} {:>12}\n", "shape", "formula", "r*");
    for row in &rows {
        let _ = writeln!(text, "{:<22} {:<34} {:>12.6}", row.shape, row.formula, row.r_star);
    }
    Ok(Document {
        json: json!({ "wedge_angle": wedge_angle, "rows": rows }),
        text,
    })
}

fn discrete_failure(e: DiscreteError) -> Failure {
    match e {
        DiscreteError::TooManyStates { .. } => Failure::budget(e),
        DiscreteError::GammaTooCoarse { .. } => Failure::validation("--gamma", e),
        DiscreteError::InvalidParameter(_) => Failure::validation("parameters", e),
        other => Failure::runtime(other),
    }
}

#[allow(clippy::too_many_arguments)]
fn discrete_solve(
    c: &Common,
    r: f64,
    delta: f64,
    gamma: f64,
    max_states: u64,
    tables: Option<&Path>,
    table_limit: usize,
    probes: usize,
) -> Result<Document, Failure> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Failure::validation("--r", format!("must be finite and non-negative, got {r}")));
    }
    positive("--delta", delta)?;
    positive("--gamma", gamma)?;
    let ctx = context(c)?;
    let started = Instant::now();
    let samples = gamma_sample(&ctx, gamma).map_err(discrete_failure)?;
    let game = build_game_on(&ctx, &samples, r, delta, max_states).map_err(discrete_failure)?;
    let solved = solve(&game);
    let elapsed = started.elapsed().as_secs_f64();
    let winner = if solved.escaper_wins { "escaper" } else { "pursuer" };
    let net = (probes > 0).then(|| verify_net(&ctx, &samples, probes, c.seed));
    if let Some(path) = tables {
        let dump = TableDump {
            polygon: vertices(ctx.polygon()),
            model: ctx.model(),
            r,
            delta,
            gamma,
            winner: winner.into(),
            escaper_start: solved.escaper_start(),
            escaper_table: solved.escaper_table(&game, table_limit),
            pursuer_table: solved.pursuer_table(&game, table_limit),
        };
        let body = serde_json::to_string(&dump).expect("tables serialize");
        std::fs::write(path, body).map_err(|e| Failure::validation("--tables", format!("{}: {e}", path.display())))?;
    }
    let mut text = format!(
        "winner      {winner}\n|V_h|       {}\n|V_z|       {}\nexits       {}\nstates      {}\n|winSet|    {}\nrounds      {}\nelapsed     {elapsed:.3} s\n",
        game.escaper_count(),
        game.pursuer_count(),
        game.exit_count,
        game.state_count(),
        solved.win_count(),
        solved.rounds,
    );
    if let Some(n) = net {
        let _ = writeln!(text, "net gap     {:.6} (escaper {:.6}, pursuer {:.6})", n.max_gap(), n.escaper_gap, n.pursuer_gap);
    }
    Ok(Document {
        json: json!({
            "winner": winner,
            "escaper_samples": game.escaper_count(),
            "pursuer_samples": game.pursuer_count(),
            "exits": game.exit_count,
            "states": game.state_count(),
            "win_set": solved.win_count(),
            "winning_starts": solved.winning_starts.len(),
            "rounds": solved.rounds,
            "elapsed": elapsed,
            "r": r,
            "delta": delta,
            "gamma": gamma,
            "model": ctx.model(),
            "net": net,
        }),
        text,
    })
}

fn approximate(c: &Common, epsilon: f64, budget: u64, practical: Option<(f64, f64)>) -> Result<Document, Failure> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Failure::validation("--epsilon", format!("must lie in (0, 1], got {epsilon}")));
    }
    if let Some((d, g)) = practical {
        positive("--override-delta", d)?;
        positive("--override-gamma", g)?;
    }
    let ctx = context(c)?;
    let params = ApproxParams {
        epsilon,
        budget,
        practical_override: practical,
    };
    let a = approximate_r_star(&ctx, params).map_err(|e| match e {
        SchemeError::BudgetExceeded { .. } => Failure::budget(format!("{e}; pass --override-delta/--override-gamma")),
        SchemeError::InvalidParameter(_) => Failure::validation("parameters", e),
        SchemeError::Discrete(d) => discrete_failure(d),
    })?;
    let mut text = format!(
        "r* in [{:.6}, {:.6}]{}\nepsilon0 {:.6e}  R_up {:.4}\n{:>10} {:>8} {:>8} {:>10} {:>12}\n",
        a.r_lo,
        a.r_hi,
        if a.heuristic { "  (heuristic)" } else { "" },
        a.epsilon0,
        a.r_upper_easy,
        "r",
        "delta",
        "gamma",
        "winner",
        "states"
    );
    for p in &a.probes {
        let _ = writeln!(
            text,
            "{:>10.5} {:>8.4} {:>8.4} {:>10} {:>12}",
            p.r,
            p.delta,
            p.gamma,
            if p.escaper_wins { "escaper" } else { "pursuer" },
            p.states
        );
    }
    Ok(Document {
        json: serde_json::to_value(&a).expect("approximation serializes"),
        text,
    })
}

fn sim_failure(e: SimError) -> Failure {
    match e {
        SimError::InvalidParameter(_) => Failure::validation("parameters", e),
        other => Failure::runtime(other),
    }
}

fn thin(path: &pursuit_escape::sim::MotionPath) -> Vec<[f64; 3]> {
    let n = path.len();
    let stride = n.div_ceil(TRANSCRIPT_POINTS).max(1);
    let mut idx: Vec<usize> = (0..n).step_by(stride).collect();
    if n > 0 && idx.last() != Some(&(n - 1)) {
        idx.push(n - 1);
    }
    idx.into_iter().map(|i| [path.times[i], path.points[i].x, path.points[i].y]).collect()
}

struct PolygonRun {
    ctx: MetricContext,
    transcript: Transcript,
    escaper: pursuit_escape::sim::Scripted,
    pursuer: pursuit_escape::sim::Scripted,
    r: f64,
    delta: f64,
}

fn polygon_run(
    c: &Common,
    tables: Option<&Path>,
    r: Option<f64>,
    delta: Option<f64>,
    gamma: Option<f64>,
) -> Result<PolygonRun, Failure> {
    let (ctx, r, delta, gamma) = match tables {
        Some(path) => {
            let flag = format!("--tables {}", path.display());
            let body = std::fs::read_to_string(path).map_err(|e| Failure::validation(&flag, e))?;
            let dump: TableDump = serde_json::from_str(&body).map_err(|e| Failure::validation(&flag, e))?;
            let pts: Vec<Point2> = dump.polygon.iter().map(|&p| p.into()).collect();
            let poly = validate_polygon(&pts).map_err(|e| Failure::validation(&flag, e))?;
            (MetricContext::new(poly, dump.model), dump.r, dump.delta, dump.gamma)
        }
        None => {
            let need = |flag: &str, v: Option<f64>| {
                v.ok_or_else(|| Failure::validation(flag, "required by the polygon scenario without --tables"))
            };
            let ctx = context(c)?;
            (ctx, need("--r", r)?, need("--delta", delta)?, need("--gamma", gamma)?)
        }
    };
    positive("--r", r)?;
    positive("--delta", delta)?;
    positive("--gamma", gamma)?;
    let samples = gamma_sample(&ctx, gamma).map_err(discrete_failure)?;
    let game = build_game_on(&ctx, &samples, r, delta, pursuit_escape::discrete::DEFAULT_STATE_CAP)
        .map_err(discrete_failure)?;
    let solved = solve(&game);
    let turns = game.state_count().min(100_000) as usize;
    let transcript = play_discrete(&game, &solved, turns).map_err(discrete_failure)?;
    let (escaper, pursuer) = continuous_replay(&ctx, &game, &transcript).map_err(discrete_failure)?;
    Ok(PolygonRun {
        ctx,
        transcript,
        escaper,
        pursuer,
        r,
        delta,
    })
}

fn simulate(c: &Common, cmd: &Command) -> Result<Document, Failure> {
    let Command::Simulate {
        scenario,
        r,
        dt,
        t_max,
        epsilon,
        theta,
        wedge_angle,
        tables,
        delta,
        gamma,
        svg,
    } = cmd
    else {
        unreachable!("dispatched on the simulate variant")
    };
    positive("--dt", *dt)?;
    if let Some(t) = t_max {
        positive("--t-max", *t)?;
    }
    if let Some(e) = epsilon {
        positive("--epsilon", *e)?;
    }
    let need_r = || r.ok_or_else(|| Failure::validation("--r", "required by this scenario"));
    let mut transcript = None;
    let (pt, arena, speed): (Playthrough, Box<dyn Arena>, f64) = match scenario {
        Scenario::Disk => {
            let r = positive("--r", need_r()?)?;
            let (e, z) = disk_strategies(r).map_err(|e| Failure::validation("--r", e))?;
            let eps = epsilon.unwrap_or(5.0 * r * dt);
            let pt = playthrough(&e, &z, *dt, t_max.unwrap_or(10.0), eps, &DiskArena).map_err(sim_failure)?;
            (pt, Box::new(DiskArena), r)
        }
        Scenario::Halfplane => {
            let r = positive("--r", need_r()?)?;
            if !(*theta > 0.0 && *theta < std::f64::consts::PI) {
                return Err(Failure::validation("--theta", format!("must lie in (0, pi), got {theta}")));
            }
            let arena = HalfPlaneArena::with_angle(*theta);
            let eps = epsilon.unwrap_or(5.0 * r * dt);
            let pt = playthrough(
                &StraightRunEscaper::halfplane(*theta),
                &ProjectionPursuer::halfplane(*theta, r),
                *dt,
                t_max.unwrap_or(3.0),
                eps,
                &arena,
            )
            .map_err(sim_failure)?;
            (pt, Box::new(arena), r)
        }
        Scenario::Wedge => {
            let r = positive("--r", need_r()?)?;
            wedge_r_star(*wedge_angle).map_err(|e| Failure::validation("--wedge-angle", e))?;
            let half = wedge_angle / 2.0;
            let arena = WedgeArena { half_angle: half };
            let eps = epsilon.unwrap_or(5.0 * r * dt);
            let pt = playthrough(
                &StraightRunEscaper::wedge(half),
                &ProjectionPursuer::wedge(half, r),
                *dt,
                t_max.unwrap_or(3.0),
                eps,
                &arena,
            )
            .map_err(sim_failure)?;
            (pt, Box::new(arena), r)
        }
        Scenario::Polygon => {
            let run = polygon_run(c, tables.as_deref(), *r, *delta, *gamma)?;
            let eps = epsilon.unwrap_or(5.0 * run.r * dt);
            let horizon = run.escaper.duration().max(run.pursuer.duration()) + 2.0 * run.delta;
            let pt = playthrough(&run.escaper, &run.pursuer, *dt, t_max.unwrap_or(horizon), eps, &run.ctx)
                .map_err(sim_failure)?;
            transcript = Some(run.transcript);
            let speed = run.pursuer.max_speed();
            (pt, Box::new(run.ctx), speed)
        }
    };
    if let Some(path) = svg {
        std::fs::write(path, emit_svg(&pt, arena.as_ref()))
            .map_err(|e| Failure::validation("--svg", format!("{}: {e}", path.display())))?;
    }
    let summary = match pt.outcome {
        Outcome::EscaperEscaped { t, exit, separation } => {
            format!("escaped at t={t:.6} through ({:.6}, {:.6}), separation {separation:.6}", exit.x, exit.y)
        }
        Outcome::NoEscapeByTmax => "no escape by t_max".to_string(),
    };
    let text = format!(
        "{summary}\nsteps {}  dt {}  epsilon {}\nexit touches {}  max separation {}\n",
        pt.escaper_path.len(),
        pt.dt,
        pt.epsilon,
        pt.touches.count,
        pt.touches.max_separation.map_or("-".into(), |s| format!("{s:.6}")),
    );
    Ok(Document {
        json: json!({
            "scenario": format!("{scenario:?}").to_lowercase(),
            "r": speed,
            "dt": pt.dt,
            "epsilon": pt.epsilon,
            "steps": pt.escaper_path.len(),
            "outcome": pt.outcome,
            "touches": pt.touches,
            "escaper": thin(&pt.escaper_path),
            "pursuer": thin(&pt.pursuer_path),
            "discrete": transcript,
        }),
        text,
    })
}
