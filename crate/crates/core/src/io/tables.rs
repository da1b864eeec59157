//! Site and cell tables.
//!
//! `sites.csv` header: `site_id,x,y,h_bs`.
//! `cells.csv` header: `site_id,freq_mhz,bw_mhz,tx_dbm,gain_dbi,feeder_db,elements`,
//! optionally followed by any of the stored-but-unused dimensioning columns
//! (`nsc_used`, `nsc_total`, `sampling_factor`, `pilot_reuse`,
//! `coherence_time_ms`, `coherence_bw_mhz`, `spatial_duty_pct`,
//! `noise_factor_db`, `interference_margin_db`, `doppler_margin_db`,
//! `fade_margin_db`, `shadow_margin_db`, `implementation_loss_db`).
//! Plain comma separation, no quoting.

use std::path::Path;

use crate::error::{Error, Result};
use crate::scene::{CellConfig, ExtraCellParams, SiteConfig};

const SITES_HEADER: [&str; 4] = ["site_id", "x", "y", "h_bs"];
const CELLS_HEADER: [&str; 7] = [
    "site_id", "freq_mhz", "bw_mhz", "tx_dbm", "gain_dbi", "feeder_db", "elements",
];
const EXTRA_COLUMNS: [&str; 13] = [
    "nsc_used",
    "nsc_total",
    "sampling_factor",
    "pilot_reuse",
    "coherence_time_ms",
    "coherence_bw_mhz",
    "spatial_duty_pct",
    "noise_factor_db",
    "interference_margin_db",
    "doppler_margin_db",
    "fade_margin_db",
    "shadow_margin_db",
    "implementation_loss_db",
];

fn split_rows(path: &Path) -> Result<Vec<Vec<String>>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(|f| f.trim().to_string()).collect())
        .collect())
}

fn parse_f64(path: &Path, line: usize, name: &str, raw: &str) -> Result<f64> {
    raw.parse::<f64>()
        .map_err(|_| Error::parse(path, format!("line {line}: {name} is not a number: {raw:?}")))
}

/// Loads the two tables and joins cells onto their sites. Site order follows
/// `sites.csv`; cell order within a site follows `cells.csv`.
pub fn load_sites(sites_path: &Path, cells_path: &Path) -> Result<Vec<SiteConfig>> {
    let rows = split_rows(sites_path)?;
    let Some((header, body)) = rows.split_first() else {
        return Err(Error::parse(sites_path, "empty file"));
    };
    if header.iter().map(String::as_str).ne(SITES_HEADER) {
        return Err(Error::parse(
            sites_path,
            format!("expected header {}", SITES_HEADER.join(",")),
        ));
    }

    let mut sites: Vec<SiteConfig> = Vec::new();
    for (i, row) in body.iter().enumerate() {
        let line = i + 2;
        if row.len() != SITES_HEADER.len() {
            return Err(Error::parse(
                sites_path,
                format!("line {line}: expected {} fields, got {}", SITES_HEADER.len(), row.len()),
            ));
        }
        if sites.iter().any(|s| s.site_id == row[0]) {
            return Err(Error::parse(
                sites_path,
                format!("line {line}: duplicate site_id {:?}", row[0]),
            ));
        }
        sites.push(SiteConfig {
            site_id: row[0].clone(),
            position: [
                parse_f64(sites_path, line, "x", &row[1])?,
                parse_f64(sites_path, line, "y", &row[2])?,
            ],
            antenna_height_m: parse_f64(sites_path, line, "h_bs", &row[3])?,
            cells: Vec::new(),
        });
    }

    let rows = split_rows(cells_path)?;
    let Some((header, body)) = rows.split_first() else {
        return Err(Error::parse(cells_path, "empty file"));
    };
    if header.len() < CELLS_HEADER.len()
        || header[..CELLS_HEADER.len()].iter().map(String::as_str).ne(CELLS_HEADER)
    {
        return Err(Error::parse(
            cells_path,
            format!("expected header to start with {}", CELLS_HEADER.join(",")),
        ));
    }
    let extras: Vec<&str> = header[CELLS_HEADER.len()..].iter().map(String::as_str).collect();
    if let Some(unknown) = extras.iter().find(|c| !EXTRA_COLUMNS.contains(c)) {
        return Err(Error::parse(
            cells_path,
            format!("unknown column {unknown:?}; optional columns are {}", EXTRA_COLUMNS.join(",")),
        ));
    }

    for (i, row) in body.iter().enumerate() {
        let line = i + 2;
        if row.len() != header.len() {
            return Err(Error::parse(
                cells_path,
                format!("line {line}: expected {} fields, got {}", header.len(), row.len()),
            ));
        }
        let mut extra = ExtraCellParams::default();
        for (name, raw) in extras.iter().zip(&row[CELLS_HEADER.len()..]) {
            if raw.is_empty() {
                continue;
            }
            let value = Some(parse_f64(cells_path, line, name, raw)?);
            match *name {
                "nsc_used" => extra.used_subcarriers = value,
                "nsc_total" => extra.total_subcarriers = value,
                "sampling_factor" => extra.sampling_factor = value,
                "pilot_reuse" => extra.pilot_reuse_factor = value,
                "coherence_time_ms" => extra.coherence_time_ms = value,
                "coherence_bw_mhz" => extra.coherence_bandwidth_mhz = value,
                "spatial_duty_pct" => extra.spatial_duty_cycle_pct = value,
                "noise_factor_db" => extra.noise_factor_db = value,
                "interference_margin_db" => extra.interference_margin_db = value,
                "doppler_margin_db" => extra.doppler_margin_db = value,
                "fade_margin_db" => extra.fade_margin_db = value,
                "shadow_margin_db" => extra.shadow_margin_db = value,
                "implementation_loss_db" => extra.implementation_loss_db = value,
                _ => unreachable!("validated above"),
            }
        }
        let cell = CellConfig {
            frequency_mhz: parse_f64(cells_path, line, "freq_mhz", &row[1])?,
            bandwidth_mhz: parse_f64(cells_path, line, "bw_mhz", &row[2])?,
            tx_power_dbm: parse_f64(cells_path, line, "tx_dbm", &row[3])?,
            antenna_gain_dbi: parse_f64(cells_path, line, "gain_dbi", &row[4])?,
            feeder_loss_db: parse_f64(cells_path, line, "feeder_db", &row[5])?,
            antenna_elements: row[6].parse::<u32>().map_err(|_| {
                Error::parse(cells_path, format!("line {line}: elements is not a count: {:?}", row[6]))
            })?,
            extra,
        };
        let site = sites.iter_mut().find(|s| s.site_id == row[0]).ok_or_else(|| {
            Error::parse(cells_path, format!("line {line}: unknown site_id {:?}", row[0]))
        })?;
        site.cells.push(cell);
    }

    for site in &sites {
        site.validate()?;
    }
    Ok(sites)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(name: &str, content: &str) -> std::path::PathBuf {
        let path = std::env::temp_dir().join(format!("risplan-tables-{}-{name}", std::process::id()));
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        path
    }

    #[test]
    fn loads_sites_and_cells() {
        let sites = write_temp("s.csv", "site_id,x,y,h_bs\na,10,20,30\nb,50,60,41.5\n");
        let cells = write_temp(
            "c.csv",
            "site_id,freq_mhz,bw_mhz,tx_dbm,gain_dbi,feeder_db,elements\n\
             a,800,80,43,16,2,1\na,3500,120,43,24,3,64\nb,2100,120,43,18,2,1\n",
        );
        let loaded = load_sites(&sites, &cells).unwrap();
        assert_eq!(loaded.len(), 2);
        assert_eq!(loaded[0].cells.len(), 2);
        assert_eq!(loaded[1].cells.len(), 1);
        assert_eq!(loaded[0].cells[1].antenna_elements, 64);
        assert_eq!(loaded[1].position, [50.0, 60.0]);
        std::fs::remove_file(sites).ok();
        std::fs::remove_file(cells).ok();
    }

    #[test]
    fn optional_extra_columns() {
        let sites = write_temp("s2.csv", "site_id,x,y,h_bs\na,0,0,30\n");
        let cells = write_temp(
            "c2.csv",
            "site_id,freq_mhz,bw_mhz,tx_dbm,gain_dbi,feeder_db,elements,shadow_margin_db,noise_factor_db\n\
             a,800,80,43,16,2,1,12.8,8\n",
        );
        let loaded = load_sites(&sites, &cells).unwrap();
        let extra = loaded[0].cells[0].extra;
        assert_eq!(extra.shadow_margin_db, Some(12.8));
        assert_eq!(extra.noise_factor_db, Some(8.0));
        assert_eq!(extra.fade_margin_db, None);
        std::fs::remove_file(sites).ok();
        std::fs::remove_file(cells).ok();
    }

    #[test]
    fn unknown_site_and_bad_header_fail() {
        let sites = write_temp("s3.csv", "site_id,x,y,h_bs\na,0,0,30\n");
        let cells = write_temp(
            "c3.csv",
            "site_id,freq_mhz,bw_mhz,tx_dbm,gain_dbi,feeder_db,elements\nzz,800,80,43,16,2,1\n",
        );
        assert!(load_sites(&sites, &cells).is_err());
        let bad = write_temp("s4.csv", "id,x,y\n1,2,3\n");
        assert!(load_sites(&bad, &cells).is_err());
        std::fs::remove_file(sites).ok();
        std::fs::remove_file(cells).ok();
        std::fs::remove_file(bad).ok();
    }
}
