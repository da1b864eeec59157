//! Scene ingestion from a GeoJSON subset.
//!
//! Accepted shape: a `FeatureCollection` with a numeric `bbox` of 4 (or 6,
//! with z entries ignored) values giving the planar bounds, and Polygon
//! features carrying a positive numeric `height` property. Rings may be
//! closed or open; clockwise rings are normalized. Interior rings (holes),
//! self-intersecting footprints and non-positive heights are rejected with
//! the offending feature indices.

use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::scene::{Bounds, Building, Scene};

pub fn load_scene(path: &Path) -> Result<Scene> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let doc: Value =
        serde_json::from_str(&text).map_err(|e| Error::parse(path, format!("invalid JSON: {e}")))?;

    if doc.get("type").and_then(Value::as_str) != Some("FeatureCollection") {
        return Err(Error::parse(path, "expected a FeatureCollection"));
    }

    let bbox = doc
        .get("bbox")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse(path, "missing top-level bbox"))?;
    let nums: Vec<f64> = bbox.iter().filter_map(Value::as_f64).collect();
    let bounds = match nums.len() {
        4 => Bounds::new(nums[0], nums[1], nums[2], nums[3]),
        6 => Bounds::new(nums[0], nums[1], nums[3], nums[4]),
        n => {
            return Err(Error::parse(
                path,
                format!("bbox must hold 4 or 6 numbers, got {n}"),
            ))
        }
    };

    let features = match doc.get("features") {
        Some(Value::Array(f)) => f.as_slice(),
        Some(_) => return Err(Error::parse(path, "features must be an array")),
        None => &[],
    };

    let mut buildings = Vec::with_capacity(features.len());
    let mut issues = Vec::new();
    for (i, feature) in features.iter().enumerate() {
        match parse_feature(feature) {
            Ok(b) => buildings.push(b),
            Err(msg) => issues.push(format!("feature {i}: {msg}")),
        }
    }
    if !issues.is_empty() {
        return Err(Error::parse(path, issues.join("; ")));
    }

    Scene::new(bounds, buildings)
}

fn parse_feature(feature: &Value) -> std::result::Result<Building, String> {
    let height = feature
        .pointer("/properties/height")
        .and_then(Value::as_f64)
        .ok_or("missing numeric property \"height\"")?;
    let geometry = feature.get("geometry").ok_or("missing geometry")?;
    if geometry.get("type").and_then(Value::as_str) != Some("Polygon") {
        return Err("geometry must be a Polygon".into());
    }
    let rings = geometry
        .get("coordinates")
        .and_then(Value::as_array)
        .ok_or("missing Polygon coordinates")?;
    if rings.is_empty() {
        return Err("Polygon has no rings".into());
    }
    if rings.len() > 1 {
        return Err("interior rings (holes) are unsupported".into());
    }
    let ring = rings[0].as_array().ok_or("ring must be an array")?;
    let mut footprint = Vec::with_capacity(ring.len());
    for pos in ring {
        let coords = pos.as_array().ok_or("position must be an array")?;
        if coords.len() < 2 {
            return Err("position needs x and y".into());
        }
        let x = coords[0].as_f64().ok_or("x must be a number")?;
        let y = coords[1].as_f64().ok_or("y must be a number")?;
        footprint.push([x, y]);
    }
    Building::new(footprint, height).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(name: &str, content: &str) -> std::path::PathBuf {
        let path = std::env::temp_dir().join(format!("risplan-geojson-{}-{name}", std::process::id()));
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        path
    }

    #[test]
    fn empty_collection_with_bbox() {
        let path = write_temp(
            "empty.json",
            r#"{"type":"FeatureCollection","bbox":[0,0,100,50],"features":[]}"#,
        );
        let scene = load_scene(&path).unwrap();
        assert!(scene.buildings().is_empty());
        assert_eq!(scene.bounds().width(), 100.0);
        assert_eq!(scene.bounds().depth(), 50.0);
        std::fs::remove_file(path).ok();
    }

    #[test]
    fn single_square_footprint() {
        let path = write_temp(
            "square.json",
            r#"{"type":"FeatureCollection","bbox":[0,0,100,100],"features":[
                {"type":"Feature","properties":{"height":20.0},
                 "geometry":{"type":"Polygon","coordinates":[[[10,10],[30,10],[30,30],[10,30],[10,10]]]}}
            ]}"#,
        );
        let scene = load_scene(&path).unwrap();
        assert_eq!(scene.buildings().len(), 1);
        assert_eq!(scene.buildings()[0].height_m(), 20.0);
        assert_eq!(scene.buildings()[0].footprint().len(), 4);
        std::fs::remove_file(path).ok();
    }

    #[test]
    fn negative_height_names_the_feature() {
        let path = write_temp(
            "negheight.json",
            r#"{"type":"FeatureCollection","bbox":[0,0,100,100],"features":[
                {"type":"Feature","properties":{"height":-5},
                 "geometry":{"type":"Polygon","coordinates":[[[10,10],[30,10],[30,30],[10,30]]]}}
            ]}"#,
        );
        let err = load_scene(&path).unwrap_err().to_string();
        assert!(err.contains("feature 0"), "{err}");
        std::fs::remove_file(path).ok();
    }

    #[test]
    fn holes_are_rejected() {
        let path = write_temp(
            "holes.json",
            r#"{"type":"FeatureCollection","bbox":[0,0,100,100],"features":[
                {"type":"Feature","properties":{"height":10},
                 "geometry":{"type":"Polygon","coordinates":[
                    [[0,0],[40,0],[40,40],[0,40]],
                    [[10,10],[20,10],[20,20],[10,20]]]}}
            ]}"#,
        );
        let err = load_scene(&path).unwrap_err().to_string();
        assert!(err.contains("interior rings"), "{err}");
        std::fs::remove_file(path).ok();
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            load_scene(Path::new("/nonexistent/x.json")),
            Err(Error::Io { .. })
        ));
    }
}
