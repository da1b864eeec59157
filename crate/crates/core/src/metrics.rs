//! Map reductions: min/max/mean summaries, percentage gains against the
//! baseline scenario, and empirical CDFs.
//!
//! Unreachable points (+inf) are excluded from every reduction; the number
//! of finite points is reported alongside. The mean uses compensated
//! summation so reduction order cannot shift results.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{PathLossMap, Scenario};

/// Minimum, maximum, and mean path loss over the finite points of one map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub scenario: Scenario,
    pub pl_min_db: f64,
    pub pl_max_db: f64,
    pub pl_avg_db: f64,
    pub finite_count: usize,
}

/// Percentage reduction of each summary statistic relative to a reference
/// scenario. Negative gains mean the subject scenario is worse; no clamping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainReport {
    pub reference: Scenario,
    pub subject: Scenario,
    pub g_min_pct: f64,
    pub g_max_pct: f64,
    pub g_avg_pct: f64,
}

/// Empirical CDF: strictly increasing loss levels with the fraction of
/// finite points at or below each.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfSeries {
    points: Vec<(f64, f64)>,
}

impl CdfSeries {
    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Fraction of points with loss <= `pl_db`.
    pub fn fraction_at(&self, pl_db: f64) -> f64 {
        match self.points.partition_point(|(v, _)| *v <= pl_db) {
            0 => 0.0,
            k => self.points[k - 1].1,
        }
    }
}

/// Neumaier-compensated sum; immune to ordering effects at the 1e-9 level.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Reduces a map to its summary statistics over all finite points.
pub fn summarize(map: &PathLossMap) -> Result<SummaryStats> {
    reduce(map, |_| true)
}

/// Like [`summarize`] but skipping points where `exclude` is set, e.g. the
/// building-footprint mask from [`crate::scene::Scene::footprint_mask`].
pub fn summarize_masked(map: &PathLossMap, exclude: &[bool]) -> Result<SummaryStats> {
    if exclude.len() != map.values().len() {
        return Err(Error::Dimension(format!(
            "mask holds {} entries for a map of {} points",
            exclude.len(),
            map.values().len()
        )));
    }
    reduce(map, |i| !exclude[i])
}

fn reduce(map: &PathLossMap, keep: impl Fn(usize) -> bool) -> Result<SummaryStats> {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut count = 0usize;
    for (i, &v) in map.values().iter().enumerate() {
        if v.is_finite() && keep(i) {
            min = min.min(v);
            max = max.max(v);
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::EmptyCoverage(format!(
            "{} map has no finite points to summarize",
            map.scenario().label()
        )));
    }
    let sum = compensated_sum(
        map.values()
            .iter()
            .enumerate()
            .filter(|(i, v)| v.is_finite() && keep(*i))
            .map(|(_, v)| *v),
    );
    Ok(SummaryStats {
        scenario: map.scenario(),
        pl_min_db: min,
        pl_max_db: max,
        pl_avg_db: sum / count as f64,
        finite_count: count,
    })
}

/// Gain of `subject` over `reference`, statistic by statistic:
/// (1 - subject/reference) * 100.
pub fn gains(reference: &SummaryStats, subject: &SummaryStats) -> Result<GainReport> {
    for (name, v) in [
        ("minimum", reference.pl_min_db),
        ("maximum", reference.pl_max_db),
        ("average", reference.pl_avg_db),
    ] {
        if !(v > 0.0) {
            return Err(Error::Domain(format!(
                "gain is undefined for non-positive reference {name} path loss ({v} dB)"
            )));
        }
    }
    Ok(GainReport {
        reference: reference.scenario,
        subject: subject.scenario,
        g_min_pct: (1.0 - subject.pl_min_db / reference.pl_min_db) * 100.0,
        g_max_pct: (1.0 - subject.pl_max_db / reference.pl_max_db) * 100.0,
        g_avg_pct: (1.0 - subject.pl_avg_db / reference.pl_avg_db) * 100.0,
    })
}

/// Empirical CDF over the finite points of a map.
pub fn cdf(map: &PathLossMap) -> Result<CdfSeries> {
    let mut finite: Vec<f64> = map.values().iter().copied().filter(|v| v.is_finite()).collect();
    if finite.is_empty() {
        return Err(Error::EmptyCoverage(format!(
            "{} map has no finite points for a CDF",
            map.scenario().label()
        )));
    }
    finite.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = finite.len() as f64;
    let mut points: Vec<(f64, f64)> = Vec::new();
    let mut seen = 0usize;
    let mut i = 0usize;
    while i < finite.len() {
        let v = finite[i];
        while i < finite.len() && finite[i] == v {
            i += 1;
            seen += 1;
        }
        points.push((v, seen as f64 / n));
    }
    Ok(CdfSeries { points })
}
