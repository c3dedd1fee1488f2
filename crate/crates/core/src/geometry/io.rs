use std::path::Path;

use super::{validate_polygon, GeometryError, Point2, Polygon};

/// Parses a JSON array of `[x, y]` pairs and validates the polygon.
pub fn parse_polygon_json(text: &str) -> Result<Polygon, GeometryError> {
    let raw: Vec<[f64; 2]> =
        serde_json::from_str(text).map_err(|e| GeometryError::Format(e.to_string()))?;
    let pts: Vec<Point2> = raw.into_iter().map(Point2::from).collect();
    validate_polygon(&pts)
}

pub fn polygon_to_json(polygon: &Polygon) -> String {
    let raw: Vec<[f64; 2]> = polygon.vertices().iter().map(|&p| p.into()).collect();
    serde_json::to_string(&raw).expect("coordinates serialize")
}

pub fn read_polygon_file(path: &Path) -> Result<Polygon, GeometryError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| GeometryError::Format(format!("{}: {e}", path.display())))?;
    parse_polygon_json(&text)
}

pub fn write_polygon_file(path: &Path, polygon: &Polygon) -> Result<(), GeometryError> {
    std::fs::write(path, polygon_to_json(polygon) + "\n")
        .map_err(|e| GeometryError::Format(format!("{}: {e}", path.display())))
}
