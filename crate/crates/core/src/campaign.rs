//! Placement campaign: evaluates every candidate panel position, keeps the
//! running pointwise-best maps, and ranks candidates.
//!
//! Per-candidate rasters are summarized and dropped by default; only the
//! running minima survive to the final maps. The per-point merge is an
//! associative, commutative min with a total tie-break, so candidate
//! evaluation order cannot change any output.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::maps::{
    self, map_avg, merge_ris, reinforced_parts, ris_scenario_parts, PathLossMap, Scenario,
};
use crate::metrics::{summarize, SummaryStats};
use crate::propagation::{BeamAngles, RisPanel};
use crate::scene::{MeasurementGrid, RisPlacement, Scene, SiteConfig};

/// Panel model and campaign options.
#[derive(Debug, Clone, Default)]
pub struct CampaignConfig {
    pub panel: RisPanel,
    pub angles: BeamAngles,
    /// Retain the full min-selection raster of every candidate.
    pub keep_candidate_maps: bool,
}

/// Outcome of evaluating one candidate placement in isolation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlacementResult {
    pub ris_id: u32,
    pub position: [f64; 2],
    /// Stats of the min-selection map with only this candidate active.
    pub ris_stats: SummaryStats,
    /// Stats of the reinforced map with only this candidate active.
    pub reinforced_stats: SummaryStats,
    /// Fraction of finite points this candidate improves over the baseline.
    pub coverage_delta: f64,
    /// Ranking key: average path loss of the candidate's reinforced map.
    pub rank_key_db: f64,
}

/// All campaign outputs: the four scenario maps, per-candidate results and
/// the ranking.
#[derive(Debug, Clone)]
pub struct CampaignResult {
    pub bs_map: PathLossMap,
    pub ris_map: PathLossMap,
    pub reinforced_map: PathLossMap,
    pub avg_map: PathLossMap,
    pub placements: Vec<PlacementResult>,
    /// Candidate ids, best first, under the default criterion.
    pub ranking: Vec<u32>,
    pub candidate_maps: Option<Vec<PathLossMap>>,
    pub p_tx_avg_dbm: f64,
}

/// Ordering rule for [`rank_candidates`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankCriterion {
    /// Ascending average path loss of the reinforced map (default).
    AvgPathLoss,
    /// Descending fraction of improved points.
    ImprovedFraction,
}

/// Runs the full placement campaign.
pub fn run_campaign(
    scene: &Scene,
    sites: &[SiteConfig],
    candidates: &[RisPlacement],
    grid: &MeasurementGrid,
    config: &CampaignConfig,
) -> Result<CampaignResult> {
    config.panel.validate()?;
    config.angles.validate()?;
    let txs = maps::flatten_transmitters(scene, sites, grid)?;
    let all_cells: Vec<_> = sites.iter().flat_map(|s| s.cells.clone()).collect();
    let p_tx_avg_dbm = maps::avg_transmit_power(&all_cells)?;

    let direct = maps::direct_best(scene, &txs, grid)?;
    let (bs_values, bs_sources): (Vec<_>, Vec<_>) = direct
        .iter()
        .map(|c| (c.pl_db, Some(c.provenance())))
        .unzip();
    let bs_map = PathLossMap::new(grid.clone(), Scenario::Bs, bs_values, bs_sources);

    let mut global_ris = vec![None; grid.len()];
    let mut placements = Vec::with_capacity(candidates.len());
    let mut candidate_maps = config.keep_candidate_maps.then(Vec::new);

    for placement in candidates {
        let arr = maps::ris_only_best(scene, &txs, grid, placement, &config.panel, &config.angles)?;

        // This candidate alone against the direct baseline.
        let mut solo = vec![None; grid.len()];
        merge_ris(&mut solo, &arr, placement.id);
        let (ris_values, ris_sources) = ris_scenario_parts(&direct, &solo);
        let solo_ris_map = PathLossMap::new(grid.clone(), Scenario::Ris, ris_values, ris_sources);
        let (rb_values, rb_sources) = reinforced_parts(&direct, &solo, p_tx_avg_dbm);
        let solo_rb_map = PathLossMap::new(grid.clone(), Scenario::RisBs, rb_values, rb_sources);

        let improved = solo_rb_map
            .values()
            .iter()
            .zip(bs_map.values())
            .filter(|(rb, bs)| rb < bs)
            .count();
        let finite = bs_map.values().iter().filter(|v| v.is_finite()).count().max(1);
        let ris_stats = summarize(&solo_ris_map)?;
        let reinforced_stats = summarize(&solo_rb_map)?;
        placements.push(PlacementResult {
            ris_id: placement.id,
            position: placement.position,
            ris_stats,
            reinforced_stats,
            coverage_delta: improved as f64 / finite as f64,
            rank_key_db: reinforced_stats.pl_avg_db,
        });
        if let Some(kept) = candidate_maps.as_mut() {
            kept.push(solo_ris_map);
        }

        merge_ris(&mut global_ris, &arr, placement.id);
    }

    let (ris_values, ris_sources) = ris_scenario_parts(&direct, &global_ris);
    let ris_map = PathLossMap::new(grid.clone(), Scenario::Ris, ris_values, ris_sources);
    let (rb_values, rb_sources) = reinforced_parts(&direct, &global_ris, p_tx_avg_dbm);
    let reinforced_map = PathLossMap::new(grid.clone(), Scenario::RisBs, rb_values, rb_sources);
    let avg_map = map_avg(&bs_map, &ris_map)?;
    let ranking = rank_candidates(&placements, RankCriterion::AvgPathLoss);

    Ok(CampaignResult {
        bs_map,
        ris_map,
        reinforced_map,
        avg_map,
        placements,
        ranking,
        candidate_maps,
        p_tx_avg_dbm,
    })
}

/// Stable ranking of placement results; ties fall back to the lower id.
pub fn rank_candidates(results: &[PlacementResult], criterion: RankCriterion) -> Vec<u32> {
    let mut order: Vec<usize> = (0..results.len()).collect();
    match criterion {
        RankCriterion::AvgPathLoss => order.sort_by(|&a, &b| {
            results[a]
                .rank_key_db
                .partial_cmp(&results[b].rank_key_db)
                .unwrap()
                .then(results[a].ris_id.cmp(&results[b].ris_id))
        }),
        RankCriterion::ImprovedFraction => order.sort_by(|&a, &b| {
            results[b]
                .coverage_delta
                .partial_cmp(&results[a].coverage_delta)
                .unwrap()
                .then(results[a].ris_id.cmp(&results[b].ris_id))
        }),
    }
    order.into_iter().map(|i| results[i].ris_id).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::PathKind;
    use crate::scene::{build_grid, generate_ris_candidates, Bounds, Building, CellConfig, Scene};

    fn test_scene() -> Scene {
        let wall = Building::new(
            vec![[90.0, 10.0], [100.0, 10.0], [100.0, 190.0], [90.0, 190.0]],
            35.0,
        )
        .unwrap();
        Scene::new(Bounds::new(0.0, 0.0, 200.0, 200.0), vec![wall]).unwrap()
    }

    fn cell(freq_mhz: f64) -> CellConfig {
        CellConfig {
            frequency_mhz: freq_mhz,
            bandwidth_mhz: 100.0,
            tx_power_dbm: 43.0,
            antenna_gain_dbi: 16.0,
            feeder_loss_db: 2.0,
            antenna_elements: 1,
            extra: Default::default(),
        }
    }

    fn test_sites() -> Vec<SiteConfig> {
        vec![SiteConfig {
            site_id: "s0".into(),
            position: [20.0, 100.0],
            antenna_height_m: 30.0,
            cells: vec![cell(800.0), cell(3500.0)],
        }]
    }

    #[test]
    fn campaign_counts_and_shapes() {
        let scene = test_scene();
        let grid = build_grid(&scene, 20.0, 1.5).unwrap();
        let candidates = generate_ris_candidates(&scene, 8, 8, 40.0);
        let result =
            run_campaign(&scene, &test_sites(), &candidates, &grid, &CampaignConfig::default())
                .unwrap();
        assert_eq!(result.placements.len(), 64);
        assert_eq!(result.ranking.len(), 64);
        let mut sorted = result.ranking.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..64).collect::<Vec<_>>());
        assert!(result.candidate_maps.is_none());
        assert_eq!(result.p_tx_avg_dbm, 43.0);
    }

    #[test]
    fn campaign_without_candidates_collapses_to_baseline() {
        let scene = test_scene();
        let grid = build_grid(&scene, 20.0, 1.5).unwrap();
        let result =
            run_campaign(&scene, &test_sites(), &[], &grid, &CampaignConfig::default()).unwrap();
        assert_eq!(result.bs_map.values(), result.ris_map.values());
        assert_eq!(result.bs_map.values(), result.reinforced_map.values());
        assert_eq!(result.bs_map.values(), result.avg_map.values());
        assert!(result.placements.is_empty());
    }

    #[test]
    fn campaign_single_candidate_matches_its_solo_map() {
        let scene = test_scene();
        let grid = build_grid(&scene, 20.0, 1.5).unwrap();
        let candidates = generate_ris_candidates(&scene, 1, 1, 40.0);
        let config = CampaignConfig {
            keep_candidate_maps: true,
            ..Default::default()
        };
        let result = run_campaign(&scene, &test_sites(), &candidates, &grid, &config).unwrap();
        let kept = result.candidate_maps.as_ref().unwrap();
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].values(), result.ris_map.values());
    }

    #[test]
    fn campaign_improves_behind_the_wall() {
        let scene = test_scene();
        let grid = build_grid(&scene, 10.0, 1.5).unwrap();
        let candidates = generate_ris_candidates(&scene, 3, 3, 40.0);
        let result =
            run_campaign(&scene, &test_sites(), &candidates, &grid, &CampaignConfig::default())
                .unwrap();
        assert!(result
            .ris_map
            .sources()
            .iter()
            .any(|s| s.unwrap().kind == PathKind::Ris));
        assert!(result.placements.iter().any(|p| p.coverage_delta > 0.0));
        for p in &result.placements {
            assert!((0.0..=1.0).contains(&p.coverage_delta));
        }
    }

    #[test]
    fn adding_candidates_never_hurts() {
        let scene = test_scene();
        let grid = build_grid(&scene, 20.0, 1.5).unwrap();
        let all = generate_ris_candidates(&scene, 2, 2, 40.0);
        let some = &all[..2];
        let config = CampaignConfig::default();
        let small = run_campaign(&scene, &test_sites(), some, &grid, &config).unwrap();
        let big = run_campaign(&scene, &test_sites(), &all, &grid, &config).unwrap();
        for (s, b) in small.ris_map.values().iter().zip(big.ris_map.values()) {
            assert!(b <= s);
        }
    }

    #[test]
    fn campaign_is_order_independent() {
        let scene = test_scene();
        let grid = build_grid(&scene, 20.0, 1.5).unwrap();
        let forward = generate_ris_candidates(&scene, 2, 3, 40.0);
        let mut reversed = forward.clone();
        reversed.reverse();
        let config = CampaignConfig::default();
        let a = run_campaign(&scene, &test_sites(), &forward, &grid, &config).unwrap();
        let b = run_campaign(&scene, &test_sites(), &reversed, &grid, &config).unwrap();
        assert_eq!(a.ris_map.values(), b.ris_map.values());
        assert_eq!(a.ris_map.sources(), b.ris_map.sources());
        assert_eq!(a.reinforced_map.values(), b.reinforced_map.values());
        assert_eq!(a.ranking, b.ranking);
    }

    fn placement(id: u32, rank_key_db: f64, coverage_delta: f64) -> PlacementResult {
        let stats = SummaryStats {
            scenario: Scenario::RisBs,
            pl_min_db: 40.0,
            pl_max_db: 90.0,
            pl_avg_db: rank_key_db,
            finite_count: 1,
        };
        PlacementResult {
            ris_id: id,
            position: [0.0, 0.0],
            ris_stats: stats,
            reinforced_stats: stats,
            coverage_delta,
            rank_key_db,
        }
    }

    #[test]
    fn ranking_orders_by_average() {
        let results = vec![placement(0, 71.0, 0.1), placement(1, 70.0, 0.2)];
        assert_eq!(rank_candidates(&results, RankCriterion::AvgPathLoss), vec![1, 0]);
    }

    #[test]
    fn ranking_breaks_ties_by_id() {
        let results = vec![placement(3, 70.0, 0.5), placement(1, 70.0, 0.5)];
        assert_eq!(rank_candidates(&results, RankCriterion::AvgPathLoss), vec![1, 3]);
        assert_eq!(rank_candidates(&results, RankCriterion::ImprovedFraction), vec![1, 3]);
    }

    #[test]
    fn ranking_singleton() {
        let results = vec![placement(7, 70.0, 0.5)];
        assert_eq!(rank_candidates(&results, RankCriterion::AvgPathLoss), vec![7]);
    }

    #[test]
    fn ranking_by_improved_fraction_descends() {
        let results = vec![placement(0, 70.0, 0.1), placement(1, 75.0, 0.9)];
        assert_eq!(rank_candidates(&results, RankCriterion::ImprovedFraction), vec![1, 0]);
    }
}
