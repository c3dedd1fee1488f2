//! wasm-bindgen entry points for the static demo page in `www/`. Each
//! returns a JSON or SVG string so the page needs no glue beyond `JSON.parse`.

use serde_json::json;
use wasm_bindgen::prelude::*;

use pursuit_escape::exact::{canonical_table, disk_strategies};
use pursuit_escape::geometry::parse_polygon_json;
use pursuit_escape::ratio::max_ratio;
use pursuit_escape::sim::{emit_svg, playthrough, DiskArena};
use pursuit_escape::{MetricContext, PursuerModel};

fn fail(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Canonical table with the wedge row at `wedge_angle` radians.
#[wasm_bindgen]
pub fn exact_table(wedge_angle: f64) -> Result<String, JsValue> {
    exact_table_json(wedge_angle).map_err(fail)
}

/// `{lower, upper, witness_p, witness_q}` for a polygon given as `[[x, y], ...]`.
#[wasm_bindgen]
pub fn ratio_sandwich(polygon_json: &str, exterior: bool, spacing: f64) -> Result<String, JsValue> {
    ratio_sandwich_json(polygon_json, exterior, spacing).map_err(fail)
}

/// SVG trace of the unit-disk strategy pair at ratio `r`.
#[wasm_bindgen]
pub fn disk_trace(r: f64, dt: f64) -> Result<String, JsValue> {
    disk_trace_svg(r, dt).map_err(fail)
}

pub fn exact_table_json(wedge_angle: f64) -> Result<String, String> {
    let rows = canonical_table(wedge_angle).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&rows).expect("rows serialize"))
}

pub fn ratio_sandwich_json(polygon_json: &str, exterior: bool, spacing: f64) -> Result<String, String> {
    let poly = parse_polygon_json(polygon_json).map_err(|e| e.to_string())?;
    let model = if exterior { PursuerModel::Exterior } else { PursuerModel::Moat };
    let ctx = MetricContext::new(poly, model);
    let b = max_ratio(&ctx, spacing).map_err(|e| e.to_string())?;
    Ok(json!({
        "lower": b.lower,
        "upper": b.upper,
        "witness_p": [b.witness_p.x, b.witness_p.y],
        "witness_q": [b.witness_q.x, b.witness_q.y],
    })
    .to_string())
}

// coarse steps keep the page responsive; the trace is qualitative
pub fn disk_trace_svg(r: f64, dt: f64) -> Result<String, String> {
    if !(1e-4..=0.05).contains(&dt) {
        return Err(format!("dt must lie in [1e-4, 0.05], got {dt}"));
    }
    let (e, z) = disk_strategies(r).map_err(|e| e.to_string())?;
    let pt = playthrough(&e, &z, dt, 10.0, 5.0 * r * dt, &DiskArena).map_err(|e| e.to_string())?;
    Ok(emit_svg(&pt, &DiskArena))
}
