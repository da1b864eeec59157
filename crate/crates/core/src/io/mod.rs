//! Input loading and artifact writing.
//!
//! Normative formats: a GeoJSON subset for scenes (Polygon features with a
//! numeric `height` property and a top-level planar `bbox`), two CSV tables
//! for sites and cells, CSV rasters (`x,y,pl_db,source`), CDF CSVs
//! (`pl_db,fraction`), a JSON summary document, a ranked candidate table,
//! and PNG heatmaps with fixed color scales.

mod geojson;
mod raster;
mod reports;
mod tables;

pub use geojson::load_scene;
pub use raster::{read_map_csv, write_heatmap, write_map_csv, ColorScale, MapCsvRow, ScaleKind};
pub use reports::{
    read_summary, summary_doc, write_reports, ScenarioGains, ScenarioSummaries, SummaryDoc,
};
pub use tables::load_sites;
