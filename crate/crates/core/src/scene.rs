//! Urban scene model: building prisms in a local planar CRS, the measurement
//! grid, transmitter site descriptions and candidate RIS placements.
//!
//! Coordinates are meters in an arbitrary local planar frame; no geodesy.
//! Buildings are vertical prisms standing on flat ground. The scene and all
//! configuration types are immutable after construction and safe to share
//! across worker threads.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry;

/// Axis-aligned scene extent in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl Bounds {
    pub fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Self {
        Bounds {
            min_x,
            min_y,
            max_x,
            max_y,
        }
    }

    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn depth(&self) -> f64 {
        self.max_y - self.min_y
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        p[0] >= self.min_x && p[0] <= self.max_x && p[1] >= self.min_y && p[1] <= self.max_y
    }
}

/// A building footprint (simple polygon, counterclockwise, open ring)
/// extruded from ground level to `height_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Building {
    footprint: Vec<[f64; 2]>,
    height_m: f64,
}

impl Building {
    /// Validates and normalizes a footprint. A closing vertex equal to the
    /// first is dropped; clockwise rings are reversed.
    pub fn new(mut footprint: Vec<[f64; 2]>, height_m: f64) -> Result<Self> {
        if footprint.len() > 3 && footprint.first() == footprint.last() {
            footprint.pop();
        }
        if footprint.len() < 3 {
            return Err(Error::InvalidScene(format!(
                "footprint needs at least 3 vertices, got {}",
                footprint.len()
            )));
        }
        if !height_m.is_finite() || height_m <= 0.0 {
            return Err(Error::InvalidScene(format!(
                "building height must be positive, got {height_m}"
            )));
        }
        let area2 = geometry::polygon_signed_area2(&footprint);
        if area2 == 0.0 {
            return Err(Error::InvalidScene("footprint has zero area".into()));
        }
        if area2 < 0.0 {
            footprint.reverse();
        }
        if !geometry::polygon_is_simple(&footprint) {
            return Err(Error::InvalidScene(
                "footprint polygon is self-intersecting".into(),
            ));
        }
        Ok(Building {
            footprint,
            height_m,
        })
    }

    pub fn footprint(&self) -> &[[f64; 2]] {
        &self.footprint
    }

    pub fn height_m(&self) -> f64 {
        self.height_m
    }
}

/// The planar urban scene all geometric queries run against.
#[derive(Debug, Clone)]
pub struct Scene {
    bounds: Bounds,
    buildings: Vec<Building>,
    ground_height_m: f64,
}

impl Scene {
    pub fn new(bounds: Bounds, buildings: Vec<Building>) -> Result<Self> {
        if !(bounds.width() > 0.0) || !(bounds.depth() > 0.0) {
            return Err(Error::InvalidScene(format!(
                "bounds are degenerate: width {} x depth {}",
                bounds.width(),
                bounds.depth()
            )));
        }
        for (i, b) in buildings.iter().enumerate() {
            if let Some(v) = b.footprint.iter().find(|v| !bounds.contains(**v)) {
                return Err(Error::InvalidScene(format!(
                    "building {i} vertex ({}, {}) lies outside scene bounds",
                    v[0], v[1]
                )));
            }
        }
        Ok(Scene {
            bounds,
            buildings,
            ground_height_m: 0.0,
        })
    }

    pub fn with_ground_height(mut self, ground_height_m: f64) -> Self {
        self.ground_height_m = ground_height_m;
        self
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn buildings(&self) -> &[Building] {
        &self.buildings
    }

    pub fn ground_height_m(&self) -> f64 {
        self.ground_height_m
    }

    pub fn max_building_height_m(&self) -> f64 {
        self.buildings
            .iter()
            .map(|b| b.height_m)
            .fold(0.0, f64::max)
    }

    /// Marks the measurement points whose center lies inside a building
    /// footprint. Summaries include every finite point by default; this mask
    /// lets callers separate indoor cells when needed.
    pub fn footprint_mask(&self, grid: &MeasurementGrid) -> Vec<bool> {
        let mut mask = vec![false; grid.len()];
        for (idx, flag) in mask.iter_mut().enumerate() {
            let (x, y) = grid.coords(idx);
            let p = grid.center(x, y);
            *flag = self
                .buildings
                .iter()
                .any(|b| geometry::point_in_polygon(p, &b.footprint));
        }
        mask
    }

    /// Line-of-sight between two 3D points: true iff the open segment meets
    /// no building prism interior. Grazing a wall, roof plane or the ground
    /// counts as visible.
    pub fn is_los(&self, p_a: [f64; 3], p_b: [f64; 3]) -> Result<bool> {
        if p_a == p_b {
            return Err(Error::Domain(
                "line-of-sight query with coincident points".into(),
            ));
        }
        let ground = self.ground_height_m;
        if p_a[2] < ground || p_b[2] < ground {
            return Err(Error::Domain(format!(
                "line-of-sight endpoints must not be below ground ({ground} m)"
            )));
        }
        for b in &self.buildings {
            if geometry::prism_blocks_segment(
                &b.footprint,
                ground,
                ground + b.height_m,
                p_a,
                p_b,
            ) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Raster of measurement points (MPs). Cell (x, y) has its MP at the cell
/// center; x runs west to east, y south to north, both zero-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementGrid {
    origin: [f64; 2],
    resolution_m: f64,
    nx: usize,
    ny: usize,
    rx_height_m: f64,
}

impl MeasurementGrid {
    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn resolution_m(&self) -> f64 {
        self.resolution_m
    }

    pub fn rx_height_m(&self) -> f64 {
        self.rx_height_m
    }

    /// Planar position of the MP at raster cell (x, y).
    pub fn center(&self, x: usize, y: usize) -> [f64; 2] {
        [
            self.origin[0] + (x as f64 + 0.5) * self.resolution_m,
            self.origin[1] + (y as f64 + 0.5) * self.resolution_m,
        ]
    }

    /// Linear index of cell (x, y); rasters are stored row-major, y-major.
    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.nx + x
    }

    /// Inverse of [`MeasurementGrid::index`].
    pub fn coords(&self, index: usize) -> (usize, usize) {
        (index % self.nx, index / self.nx)
    }
}

/// Rasterizes the scene bounds into a measurement grid.
///
/// Cell counts are `ceil(extent / resolution)`; the raster is centered over
/// the bounds so the overhang (always less than one cell per axis) splits
/// evenly and every MP center stays inside the bounds.
pub fn build_grid(scene: &Scene, resolution_m: f64, rx_height_m: f64) -> Result<MeasurementGrid> {
    if !(resolution_m > 0.0) {
        return Err(Error::InvalidScene(format!(
            "grid resolution must be positive, got {resolution_m}"
        )));
    }
    if !(rx_height_m > 0.0) {
        return Err(Error::InvalidScene(format!(
            "receiver height must be positive, got {rx_height_m}"
        )));
    }
    let b = scene.bounds();
    let nx = (b.width() / resolution_m).ceil().max(1.0) as usize;
    let ny = (b.depth() / resolution_m).ceil().max(1.0) as usize;
    let origin = [
        b.min_x - (nx as f64 * resolution_m - b.width()) / 2.0,
        b.min_y - (ny as f64 * resolution_m - b.depth()) / 2.0,
    ];
    Ok(MeasurementGrid {
        origin,
        resolution_m,
        nx,
        ny,
        rx_height_m,
    })
}

/// Horizontal and full Euclidean distances between two 3D points.
pub fn distances(p_a: [f64; 3], p_b: [f64; 3]) -> (f64, f64) {
    let dx = p_b[0] - p_a[0];
    let dy = p_b[1] - p_a[1];
    let dz = p_b[2] - p_a[2];
    let d2 = dx * dx + dy * dy;
    ((d2).sqrt(), (d2 + dz * dz).sqrt())
}

/// Per-band transmitter description attached to a site.
///
/// The trailing optional block mirrors link-dimensioning inputs that travel
/// with cell configurations in the field; they are carried for configuration
/// fidelity but no map computation consumes them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellConfig {
    pub frequency_mhz: f64,
    pub bandwidth_mhz: f64,
    pub tx_power_dbm: f64,
    pub antenna_gain_dbi: f64,
    pub feeder_loss_db: f64,
    pub antenna_elements: u32,
    #[serde(default)]
    pub extra: ExtraCellParams,
}

impl CellConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.frequency_mhz > 0.0) {
            return Err(Error::Config(format!(
                "cell frequency must be positive, got {} MHz",
                self.frequency_mhz
            )));
        }
        if !self.tx_power_dbm.is_finite() {
            return Err(Error::Config(format!(
                "cell transmit power must be finite, got {} dBm",
                self.tx_power_dbm
            )));
        }
        Ok(())
    }

    /// Carrier wavelength in meters.
    pub fn wavelength_m(&self) -> f64 {
        crate::propagation::SPEED_OF_LIGHT / (self.frequency_mhz * 1e6)
    }
}

/// Stored-but-unused per-cell dimensioning parameters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ExtraCellParams {
    pub used_subcarriers: Option<f64>,
    pub total_subcarriers: Option<f64>,
    pub sampling_factor: Option<f64>,
    pub pilot_reuse_factor: Option<f64>,
    pub coherence_time_ms: Option<f64>,
    pub coherence_bandwidth_mhz: Option<f64>,
    pub spatial_duty_cycle_pct: Option<f64>,
    pub noise_factor_db: Option<f64>,
    pub interference_margin_db: Option<f64>,
    pub doppler_margin_db: Option<f64>,
    pub fade_margin_db: Option<f64>,
    pub shadow_margin_db: Option<f64>,
    pub implementation_loss_db: Option<f64>,
}

/// A base-station site: a mast position plus one cell per operated band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteConfig {
    pub site_id: String,
    pub position: [f64; 2],
    pub antenna_height_m: f64,
    pub cells: Vec<CellConfig>,
}

impl SiteConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.antenna_height_m > 0.0) {
            return Err(Error::Config(format!(
                "site {}: antenna height must be positive, got {}",
                self.site_id, self.antenna_height_m
            )));
        }
        for cell in &self.cells {
            cell.validate()
                .map_err(|e| Error::Config(format!("site {}: {e}", self.site_id)))?;
        }
        Ok(())
    }
}

/// Nominal mast height range of the urban-macro scenario; values outside it
/// are accepted with a warning.
pub const SITE_HEIGHT_RANGE_M: (f64, f64) = (27.0, 47.0);

/// Distance beyond which the urban-macro model is extrapolating.
pub const UMA_MAX_RANGE_M: f64 = 5_000.0;

/// Non-fatal scenario checks: mast heights outside the nominal range and
/// scenes large enough to push the propagation model past its validity range.
pub fn scenario_warnings(scene: &Scene, sites: &[SiteConfig]) -> Vec<String> {
    let mut warnings = Vec::new();
    for site in sites {
        let h = site.antenna_height_m;
        if h < SITE_HEIGHT_RANGE_M.0 || h > SITE_HEIGHT_RANGE_M.1 {
            warnings.push(format!(
                "site {}: antenna height {h} m is outside the nominal {}..{} m range",
                site.site_id, SITE_HEIGHT_RANGE_M.0, SITE_HEIGHT_RANGE_M.1
            ));
        }
    }
    let b = scene.bounds();
    let corners = [
        [b.min_x, b.min_y],
        [b.max_x, b.min_y],
        [b.min_x, b.max_y],
        [b.max_x, b.max_y],
    ];
    for site in sites {
        let reach = corners
            .iter()
            .map(|c| {
                let dx = c[0] - site.position[0];
                let dy = c[1] - site.position[1];
                (dx * dx + dy * dy).sqrt()
            })
            .fold(0.0, f64::max);
        if reach > UMA_MAX_RANGE_M {
            warnings.push(format!(
                "site {}: parts of the scene are {reach:.0} m away, beyond the {UMA_MAX_RANGE_M:.0} m model validity range",
                site.site_id
            ));
        }
    }
    warnings
}

/// One candidate position for mounting a reflective panel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RisPlacement {
    pub id: u32,
    pub position: [f64; 2],
    pub height_m: f64,
}

/// Candidate panel positions at the centers of a uniform `rows` x `cols`
/// partition of the scene bounds.
///
/// Ids scan row-major from the bottom-left corner: left to right, then up.
/// `rows == 0` or `cols == 0` yields an empty list (placement disabled).
/// Candidates falling inside a building footprint are kept; both reflection
/// hops are occluded there, so they simply never contribute a path.
pub fn generate_ris_candidates(
    scene: &Scene,
    rows: usize,
    cols: usize,
    height_m: f64,
) -> Vec<RisPlacement> {
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    let b = scene.bounds();
    let cell_w = b.width() / cols as f64;
    let cell_d = b.depth() / rows as f64;
    let mut out = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            out.push(RisPlacement {
                id: (r * cols + c) as u32,
                position: [
                    b.min_x + (c as f64 + 0.5) * cell_w,
                    b.min_y + (r as f64 + 0.5) * cell_d,
                ],
                height_m,
            });
        }
    }
    out
}
