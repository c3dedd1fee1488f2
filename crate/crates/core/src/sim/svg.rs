use std::fmt::Write;

use super::{Arena, ArenaShape, MotionPath, Outcome, Playthrough};
use crate::geometry::Point2;

const SIZE: f64 = 640.0;
const PAD: f64 = 24.0;

struct Frame {
    min: Point2,
    scale: f64,
    height: f64,
}

impl Frame {
    fn map(&self, p: Point2) -> (f64, f64) {
        let x = PAD + (p.x - self.min.x) * self.scale;
        let y = self.height - PAD - (p.y - self.min.y) * self.scale;
        (x, y)
    }
}

fn arena_points(shape: &ArenaShape, reach: f64) -> Vec<Point2> {
    match shape {
        ArenaShape::Disk { center, radius } => vec![
            *center - Point2::new(*radius, *radius),
            *center + Point2::new(*radius, *radius),
        ],
        ArenaShape::HalfPlane { direction } => vec![*direction * reach, *direction * -reach],
        ArenaShape::Wedge { half_angle } => vec![
            Point2::ORIGIN,
            Point2::from_polar(reach, *half_angle),
            Point2::from_polar(reach, -*half_angle),
        ],
        ArenaShape::Polygon(v) => v.clone(),
    }
}

fn path_element(out: &mut String, f: &Frame, path: &MotionPath, id: &str, from: &str, to: &str) {
    let first = path.points[0];
    let last = *path.points.last().expect("nonempty path");
    let moved = path.points.iter().any(|&p| p != first);
    if !moved {
        let (x, y) = f.map(first);
        let _ = writeln!(
            out,
            r#"<rect class="{id}" x="{:.3}" y="{:.3}" width="6" height="6" fill="{from}"/>"#,
            x - 3.0,
            y - 3.0
        );
        return;
    }
    let (x1, y1) = f.map(first);
    let (x2, y2) = f.map(last);
    let _ = writeln!(
        out,
        r#"<linearGradient id="{id}-time" gradientUnits="userSpaceOnUse" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"><stop offset="0" stop-color="{from}"/><stop offset="1" stop-color="{to}"/></linearGradient>"#
    );
    // thin long paths so the document stays small
    let stride = (path.len() / 4000).max(1);
    let mut pts = String::new();
    for (i, &p) in path.points.iter().enumerate() {
        if i % stride == 0 || i + 1 == path.len() {
            let (x, y) = f.map(p);
            let _ = write!(pts, "{x:.3},{y:.3} ");
        }
    }
    let _ = writeln!(
        out,
        r#"<polyline class="{id}" fill="none" stroke="url(#{id}-time)" stroke-width="2" points="{}"/>"#,
        pts.trim_end()
    );
}

/// Renders a playthrough as a standalone SVG document.
pub fn emit_svg(pt: &Playthrough, arena: &dyn Arena) -> String {
    let shape = arena.shape();
    let mut all: Vec<Point2> = pt.escaper_path.points.clone();
    all.extend_from_slice(&pt.pursuer_path.points);
    let reach = all.iter().map(|p| p.norm()).fold(1.0, f64::max) * 1.2;
    all.extend(arena_points(&shape, reach));
    let (mut lo, mut hi) = (all[0], all[0]);
    for p in &all {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-12);
    let scale = (SIZE - 2.0 * PAD) / span;
    let width = (hi.x - lo.x) * scale + 2.0 * PAD;
    let height = (hi.y - lo.y) * scale + 2.0 * PAD;
    let f = Frame { min: lo, scale, height };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.3} {height:.3}">"#
    );
    match &shape {
        ArenaShape::Disk { center, radius } => {
            let (cx, cy) = f.map(*center);
            let _ = writeln!(
                out,
                r##"<circle cx="{cx:.3}" cy="{cy:.3}" r="{:.3}" fill="#f4f4f4" stroke="#333"/>"##,
                radius * scale
            );
        }
        ArenaShape::HalfPlane { direction } => {
            let (x1, y1) = f.map(*direction * reach);
            let (x2, y2) = f.map(*direction * -reach);
            let _ = writeln!(out, r##"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="#333"/>"##);
        }
        ArenaShape::Wedge { .. } | ArenaShape::Polygon(_) => {
            let mut pts = String::new();
            for p in arena_points(&shape, reach) {
                let (x, y) = f.map(p);
                let _ = write!(pts, "{x:.3},{y:.3} ");
            }
            let _ = writeln!(
                out,
                r##"<polygon points="{}" fill="#f4f4f4" stroke="#333"/>"##,
                pts.trim_end()
            );
        }
    }
    path_element(&mut out, &f, &pt.escaper_path, "escaper", "#9ecae1", "#08519c");
    path_element(&mut out, &f, &pt.pursuer_path, "pursuer", "#fcae91", "#a50f15");
    let label = match &pt.outcome {
        Outcome::EscaperEscaped { t, exit, separation } => {
            let (x, y) = f.map(*exit);
            let _ = writeln!(
                out,
                r##"<path class="exit" d="M {:.3} {:.3} l 10 10 m 0 -10 l -10 10" stroke="#000" stroke-width="2"/>"##,
                x - 5.0,
                y - 5.0
            );
            format!("escaped at t={t:.4}, separation={separation:.6}")
        }
        Outcome::NoEscapeByTmax => match pt.touches.max_separation {
            Some(s) => format!("no escape; max boundary-touch separation={s:.6}"),
            None => "no escape; escaper never touched the boundary".to_string(),
        },
    };
    let _ = writeln!(out, r#"<text x="{PAD}" y="{:.0}" font-family="sans-serif" font-size="14">{label}</text>"#, PAD - 6.0);
    out.push_str("</svg>\n");
    out
}
