//! Raster artifacts: CSV map dumps and PNG heatmaps.

use std::io::BufWriter;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::point_in_polygon;
use crate::maps::PathLossMap;
use crate::scene::Scene;

/// What a color scale measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleKind {
    PathLoss,
    ObjectHeight,
}

/// Piecewise-linear color ramp; values outside the stop range clamp to the
/// end colors.
#[derive(Debug, Clone)]
pub struct ColorScale {
    kind: ScaleKind,
    stops: Vec<(f64, [u8; 3])>,
}

impl ColorScale {
    /// Path-loss ramp: 60 dB and below render green, 90 dB and above red.
    pub fn path_loss() -> Self {
        ColorScale {
            kind: ScaleKind::PathLoss,
            stops: vec![(60.0, [0, 255, 0]), (90.0, [255, 0, 0])],
        }
    }

    /// Object-height ramp: 10 m and below white, 45 m and above purple.
    pub fn object_height() -> Self {
        ColorScale {
            kind: ScaleKind::ObjectHeight,
            stops: vec![(10.0, [255, 255, 255]), (45.0, [128, 0, 128])],
        }
    }

    pub fn kind(&self) -> ScaleKind {
        self.kind
    }

    pub fn color_at(&self, value: f64) -> [u8; 3] {
        let first = self.stops.first().expect("scales have stops");
        let last = self.stops.last().expect("scales have stops");
        if value <= first.0 {
            return first.1;
        }
        if value >= last.0 {
            return last.1;
        }
        for pair in self.stops.windows(2) {
            let (v0, c0) = pair[0];
            let (v1, c1) = pair[1];
            if value <= v1 {
                let t = (value - v0) / (v1 - v0);
                let mut rgb = [0u8; 3];
                for (k, channel) in rgb.iter_mut().enumerate() {
                    *channel = (c0[k] as f64 + t * (c1[k] as f64 - c0[k] as f64)).round() as u8;
                }
                return rgb;
            }
        }
        last.1
    }
}

/// Color of points with no coverage (+inf loss).
const NO_COVERAGE_RGB: [u8; 3] = [0, 0, 0];

/// Writes a map as `x,y,pl_db,source` rows, y-major ascending then x
/// ascending. Losses carry 4 decimals; unreachable points serialize as the
/// literal `inf` with source `NONE`.
pub fn write_map_csv(map: &PathLossMap, path: &Path) -> Result<()> {
    let grid = map.grid();
    let mut out = String::with_capacity(grid.len() * 24 + 16);
    out.push_str("x,y,pl_db,source\n");
    for y in 0..grid.ny() {
        for x in 0..grid.nx() {
            let v = map.value(x, y);
            if v.is_finite() {
                let source = map
                    .source(x, y)
                    .map(|s| s.to_string())
                    .unwrap_or_else(|| "NONE".into());
                out.push_str(&format!("{x},{y},{v:.4},{source}\n"));
            } else {
                out.push_str(&format!("{x},{y},inf,NONE\n"));
            }
        }
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// One parsed row of a map CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct MapCsvRow {
    pub x: usize,
    pub y: usize,
    pub pl_db: f64,
    pub source: String,
}

/// Reads back a map CSV written by [`write_map_csv`].
pub fn read_map_csv(path: &Path) -> Result<Vec<MapCsvRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    match lines.next() {
        Some("x,y,pl_db,source") => {}
        _ => return Err(Error::parse(path, "expected header x,y,pl_db,source")),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::parse(path, format!("line {}: expected 4 fields", i + 2)));
        }
        let bad = |name: &str| Error::parse(path, format!("line {}: bad {name}", i + 2));
        rows.push(MapCsvRow {
            x: fields[0].parse().map_err(|_| bad("x"))?,
            y: fields[1].parse().map_err(|_| bad("y"))?,
            pl_db: if fields[2] == "inf" {
                f64::INFINITY
            } else {
                fields[2].parse().map_err(|_| bad("pl_db"))?
            },
            source: fields[3].to_string(),
        });
    }
    Ok(rows)
}

/// Renders a map as an 8-bit RGB PNG, one pixel per measurement point with
/// raster row 0 at the bottom edge. When `overlay` is given, pixels whose
/// center falls inside a building footprint are painted with the
/// object-height scale instead.
pub fn write_heatmap(
    map: &PathLossMap,
    scale: &ColorScale,
    overlay: Option<&Scene>,
    path: &Path,
) -> Result<()> {
    if scale.kind() != ScaleKind::PathLoss {
        return Err(Error::Config(
            "heatmap data is path loss but the scale measures object height".into(),
        ));
    }
    let grid = map.grid();
    let height_scale = ColorScale::object_height();
    let mut data = Vec::with_capacity(grid.len() * 3);
    for row in 0..grid.ny() {
        let y = grid.ny() - 1 - row; // image rows run top-down
        for x in 0..grid.nx() {
            let rgb = match overlay.and_then(|scene| roof_height_at(scene, grid.center(x, y))) {
                Some(h) => height_scale.color_at(h),
                None => {
                    let v = map.value(x, y);
                    if v.is_finite() {
                        scale.color_at(v)
                    } else {
                        NO_COVERAGE_RGB
                    }
                }
            };
            data.extend_from_slice(&rgb);
        }
    }

    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut encoder = png::Encoder::new(BufWriter::new(file), grid.nx() as u32, grid.ny() as u32);
    encoder.set_color(png::ColorType::Rgb);
    encoder.set_depth(png::BitDepth::Eight);
    let mut writer = encoder
        .write_header()
        .map_err(|e| Error::parse(path, format!("png encoding failed: {e}")))?;
    writer
        .write_image_data(&data)
        .map_err(|e| Error::parse(path, format!("png encoding failed: {e}")))?;
    Ok(())
}

fn roof_height_at(scene: &Scene, p: [f64; 2]) -> Option<f64> {
    scene
        .buildings()
        .iter()
        .filter(|b| point_in_polygon(p, b.footprint()))
        .map(|b| b.height_m())
        .fold(None, |acc, h| Some(acc.map_or(h, |a: f64| a.max(h))))
}
