//! Campaign report bundle: summary document, CDF tables, ranked candidate
//! table, map CSVs and heatmaps.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::campaign::CampaignResult;
use crate::error::{Error, Result};
use crate::io::raster::{write_heatmap, write_map_csv, ColorScale};
use crate::maps::PathLossMap;
use crate::metrics::{cdf, gains, summarize, GainReport, SummaryStats};
use crate::scene::Scene;

/// Per-scenario summary statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSummaries {
    pub bs: SummaryStats,
    pub ris: SummaryStats,
    pub ris_bs: SummaryStats,
    pub avg: SummaryStats,
}

/// Gains of each panel-enabled scenario over the baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioGains {
    pub ris: GainReport,
    pub ris_bs: GainReport,
    pub avg: GainReport,
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryDoc {
    pub p_tx_avg_dbm: f64,
    pub summaries: ScenarioSummaries,
    pub gains: ScenarioGains,
}

impl SummaryDoc {
    /// Largest deviation between the stored gains and gains recomputed from
    /// the stored summaries; a tampered or stale document shows up here.
    pub fn max_gain_inconsistency(&self) -> f64 {
        let mut worst = 0.0f64;
        for (stored, subject) in [
            (self.gains.ris, self.summaries.ris),
            (self.gains.ris_bs, self.summaries.ris_bs),
            (self.gains.avg, self.summaries.avg),
        ] {
            let Ok(fresh) = gains(&self.summaries.bs, &subject) else {
                return f64::INFINITY;
            };
            worst = worst
                .max((fresh.g_min_pct - stored.g_min_pct).abs())
                .max((fresh.g_max_pct - stored.g_max_pct).abs())
                .max((fresh.g_avg_pct - stored.g_avg_pct).abs());
        }
        worst
    }
}

/// Reduces a finished campaign to the summary document.
pub fn summary_doc(campaign: &CampaignResult) -> Result<SummaryDoc> {
    let bs = summarize(&campaign.bs_map)?;
    let ris = summarize(&campaign.ris_map)?;
    let ris_bs = summarize(&campaign.reinforced_map)?;
    let avg = summarize(&campaign.avg_map)?;
    Ok(SummaryDoc {
        p_tx_avg_dbm: campaign.p_tx_avg_dbm,
        summaries: ScenarioSummaries {
            bs,
            ris,
            ris_bs,
            avg,
        },
        gains: ScenarioGains {
            ris: gains(&bs, &ris)?,
            ris_bs: gains(&bs, &ris_bs)?,
            avg: gains(&bs, &avg)?,
        },
    })
}

pub fn read_summary(path: &Path) -> Result<SummaryDoc> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::parse(path, e.to_string()))
}

fn write_string(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| Error::io(path, e))
}

fn write_cdf_csv(map: &PathLossMap, path: &Path) -> Result<()> {
    let series = cdf(map)?;
    let mut out = String::from("pl_db,fraction\n");
    for (pl, fraction) in series.points() {
        out.push_str(&format!("{pl},{fraction}\n"));
    }
    write_string(path, &out)
}

/// Writes the full artifact set for one campaign into `dir`:
/// `summary.json`, `candidates.csv`, and per scenario `map_<s>.csv`,
/// `map_<s>.png` and `cdf_<s>.csv`. With `building_overlay` the heatmaps
/// paint building footprints with the object-height scale. Candidate maps
/// retained by the campaign land under `candidate_maps/`.
pub fn write_reports(
    campaign: &CampaignResult,
    scene: &Scene,
    dir: &Path,
    building_overlay: bool,
) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let overlay = building_overlay.then_some(scene);
    let pl_scale = ColorScale::path_loss();

    let maps = [
        &campaign.bs_map,
        &campaign.ris_map,
        &campaign.reinforced_map,
        &campaign.avg_map,
    ];
    for map in maps {
        let stem = map.scenario().file_stem();
        write_map_csv(map, &dir.join(format!("map_{stem}.csv")))?;
        write_heatmap(map, &pl_scale, overlay, &dir.join(format!("map_{stem}.png")))?;
        write_cdf_csv(map, &dir.join(format!("cdf_{stem}.csv")))?;
    }

    let doc = summary_doc(campaign)?;
    let json = serde_json::to_string_pretty(&doc)
        .map_err(|e| Error::parse(dir.join("summary.json"), e.to_string()))?;
    write_string(&dir.join("summary.json"), &format!("{json}\n"))?;

    let mut table = String::from(
        "rank,ris_id,x,y,ris_min_db,ris_max_db,ris_avg_db,ris_bs_min_db,ris_bs_max_db,ris_bs_avg_db,improved_fraction\n",
    );
    for (rank, id) in campaign.ranking.iter().enumerate() {
        let p = campaign
            .placements
            .iter()
            .find(|p| p.ris_id == *id)
            .expect("ranking permutes placement ids");
        table.push_str(&format!(
            "{},{},{:.3},{:.3},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4},{}\n",
            rank + 1,
            p.ris_id,
            p.position[0],
            p.position[1],
            p.ris_stats.pl_min_db,
            p.ris_stats.pl_max_db,
            p.ris_stats.pl_avg_db,
            p.reinforced_stats.pl_min_db,
            p.reinforced_stats.pl_max_db,
            p.reinforced_stats.pl_avg_db,
            p.coverage_delta,
        ));
    }
    write_string(&dir.join("candidates.csv"), &table)?;

    if let Some(kept) = &campaign.candidate_maps {
        let sub = dir.join("candidate_maps");
        std::fs::create_dir_all(&sub).map_err(|e| Error::io(&sub, e))?;
        for (placement, map) in campaign.placements.iter().zip(kept) {
            write_map_csv(map, &sub.join(format!("ris_candidate_{}.csv", placement.ris_id)))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::campaign::{run_campaign, CampaignConfig};
    use crate::scene::{build_grid, generate_ris_candidates, Bounds, Building, CellConfig, SiteConfig};

    fn fixture() -> (Scene, Vec<SiteConfig>) {
        let wall = Building::new(
            vec![[45.0, 10.0], [55.0, 10.0], [55.0, 90.0], [45.0, 90.0]],
            30.0,
        )
        .unwrap();
        let scene = Scene::new(Bounds::new(0.0, 0.0, 100.0, 100.0), vec![wall]).unwrap();
        let sites = vec![SiteConfig {
            site_id: "s0".into(),
            position: [10.0, 50.0],
            antenna_height_m: 30.0,
            cells: vec![CellConfig {
                frequency_mhz: 3500.0,
                bandwidth_mhz: 120.0,
                tx_power_dbm: 43.0,
                antenna_gain_dbi: 24.0,
                feeder_loss_db: 3.0,
                antenna_elements: 64,
                extra: Default::default(),
            }],
        }];
        (scene, sites)
    }

    #[test]
    fn report_bundle_contract() {
        let (scene, sites) = fixture();
        let grid = build_grid(&scene, 10.0, 1.5).unwrap();
        let candidates = generate_ris_candidates(&scene, 2, 2, 25.0);
        let campaign =
            run_campaign(&scene, &sites, &candidates, &grid, &CampaignConfig::default()).unwrap();
        let dir = std::env::temp_dir().join(format!("risplan-reports-{}", std::process::id()));
        write_reports(&campaign, &scene, &dir, true).unwrap();

        let mut pngs = 0;
        let mut cdfs = 0;
        let mut summaries = 0;
        let mut candidate_tables = 0;
        for entry in std::fs::read_dir(&dir).unwrap() {
            let name = entry.unwrap().file_name().into_string().unwrap();
            if name.ends_with(".png") {
                pngs += 1;
            }
            if name.starts_with("cdf_") {
                cdfs += 1;
            }
            if name == "summary.json" {
                summaries += 1;
            }
            if name == "candidates.csv" {
                candidate_tables += 1;
            }
        }
        assert_eq!((pngs, cdfs, summaries, candidate_tables), (4, 4, 1, 1));

        let table = std::fs::read_to_string(dir.join("candidates.csv")).unwrap();
        assert_eq!(table.lines().count(), 1 + candidates.len());

        let doc = read_summary(&dir.join("summary.json")).unwrap();
        assert!(doc.max_gain_inconsistency() <= 1e-9);
        assert_eq!(doc.p_tx_avg_dbm, 43.0);

        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn summary_doc_is_self_consistent() {
        let (scene, sites) = fixture();
        let grid = build_grid(&scene, 10.0, 1.5).unwrap();
        let campaign = run_campaign(&scene, &sites, &[], &grid, &CampaignConfig::default()).unwrap();
        let doc = summary_doc(&campaign).unwrap();
        assert!(doc.max_gain_inconsistency() <= 1e-9);
        // With no candidates every scenario equals the baseline.
        assert_eq!(doc.summaries.bs.pl_avg_db, doc.summaries.ris.pl_avg_db);
        assert_eq!(doc.gains.ris.g_avg_pct, 0.0);
    }

    #[test]
    fn tampered_summary_is_detected() {
        let (scene, sites) = fixture();
        let grid = build_grid(&scene, 10.0, 1.5).unwrap();
        let campaign = run_campaign(&scene, &sites, &[], &grid, &CampaignConfig::default()).unwrap();
        let mut doc = summary_doc(&campaign).unwrap();
        doc.gains.ris.g_avg_pct += 1.0;
        assert!(doc.max_gain_inconsistency() > 0.5);
    }
}
