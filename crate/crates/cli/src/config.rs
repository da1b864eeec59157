//! Run configuration schema.
//!
//! A run is described by one JSON document naming the input files, the grid,
//! the panel model and the output directory. Relative paths resolve against
//! the directory containing the config file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use risplan_core::propagation::{BeamAngles, RisPanel};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scene_path: PathBuf,
    pub sites_path: PathBuf,
    pub cells_path: PathBuf,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub ris: RisConfig,
    #[serde(default)]
    pub per_band_maps: bool,
    #[serde(default)]
    pub per_candidate_maps: bool,
    #[serde(default)]
    pub building_overlay: bool,
    #[serde(default)]
    pub threads: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub resolution_m: f64,
    pub rx_height_m: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            resolution_m: 5.0,
            rx_height_m: 1.5,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RisConfig {
    pub rows: usize,
    pub cols: usize,
    pub height_m: f64,
    pub panel: RisPanel,
    pub angles: BeamAngles,
}

impl Default for RisConfig {
    fn default() -> Self {
        RisConfig {
            rows: 8,
            cols: 8,
            height_m: 40.0,
            panel: RisPanel::default(),
            angles: BeamAngles::default(),
        }
    }
}

impl RunConfig {
    /// Parses and validates a config file; error messages name the offending
    /// field.
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut config: RunConfig =
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;

        let base = path.parent().unwrap_or(Path::new("."));
        for p in [
            &mut config.scene_path,
            &mut config.sites_path,
            &mut config.cells_path,
            &mut config.output_dir,
        ] {
            if p.is_relative() {
                *p = base.join(&p);
            }
        }

        for (field, p) in [
            ("scene_path", &config.scene_path),
            ("sites_path", &config.sites_path),
            ("cells_path", &config.cells_path),
        ] {
            if !p.is_file() {
                return Err(format!("{field}: no such file: {}", p.display()));
            }
        }
        if !(config.grid.resolution_m > 0.0) {
            return Err(format!(
                "grid.resolution_m: must be positive, got {}",
                config.grid.resolution_m
            ));
        }
        if !(config.grid.rx_height_m > 0.0) {
            return Err(format!(
                "grid.rx_height_m: must be positive, got {}",
                config.grid.rx_height_m
            ));
        }
        config.ris.panel.validate().map_err(|e| format!("ris.panel: {e}"))?;
        config.ris.angles.validate().map_err(|e| format!("ris.angles: {e}"))?;
        if config.ris.rows > 0 && config.ris.cols > 0 && !(config.ris.height_m > 0.0) {
            return Err(format!(
                "ris.height_m: must be positive, got {}",
                config.ris.height_m
            ));
        }
        Ok(config)
    }
}
