//! Command-line front end: `run` executes a placement campaign and writes
//! all artifacts, `candidates` previews the generated panel positions, and
//! `report` re-renders the summary tables of a finished run.
//!
//! Exit codes: 0 success, 1 configuration error, 2 runtime error.

// Validation uses `!(x > 0.0)` on purpose: NaN must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod render;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use risplan_core::campaign::{run_campaign, CampaignConfig};
use risplan_core::io::{load_scene, load_sites, read_summary, summary_doc, write_reports};
use risplan_core::scene::{
    build_grid, generate_ris_candidates, scenario_warnings, SiteConfig,
};

use config::RunConfig;

#[derive(Parser)]
#[command(name = "risplan", version, about = "Coverage planner for RIS-assisted urban radio networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the placement campaign described by a config file
    Run {
        /// Path to the JSON run configuration
        config: PathBuf,
        /// Worker thread count (overrides config and RISPLAN_THREADS)
        #[arg(long)]
        threads: Option<usize>,
        /// Output directory (overrides config)
        #[arg(long)]
        output: Option<PathBuf>,
        /// Additionally write per-band map sets under band_<freq>mhz/
        #[arg(long)]
        per_band: bool,
    },
    /// Print the candidate placements (id,x,y,h_ris) without propagation
    Candidates {
        /// Path to the JSON run configuration
        config: PathBuf,
    },
    /// Re-render the summary tables from a finished run directory
    Report {
        /// Directory holding a prior run's summary.json
        dir: PathBuf,
    },
}

enum CliError {
    Config(String),
    Runtime(String),
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run {
            config,
            threads,
            output,
            per_band,
        } => cmd_run(&config, threads, output, per_band),
        Command::Candidates { config } => cmd_candidates(&config),
        Command::Report { dir } => cmd_report(&dir),
    };
    match outcome {
        Ok(()) => {}
        Err(CliError::Config(msg)) => {
            eprintln!("config error: {msg}");
            std::process::exit(1);
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    }
}

fn thread_count(cli_flag: Option<usize>, config_value: Option<usize>) -> Option<usize> {
    cli_flag
        .or_else(|| {
            std::env::var("RISPLAN_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .or(config_value)
}

fn init_thread_pool(threads: Option<usize>) -> Result<(), CliError> {
    let Some(n) = threads else { return Ok(()) };
    if n == 0 {
        return Err(CliError::Config("threads: must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))
}

fn cmd_run(
    config_path: &Path,
    threads: Option<usize>,
    output: Option<PathBuf>,
    per_band: bool,
) -> Result<(), CliError> {
    let config = RunConfig::load(config_path).map_err(CliError::Config)?;
    let output_dir = output.unwrap_or_else(|| config.output_dir.clone());
    init_thread_pool(thread_count(threads, config.threads))?;

    let scene = load_scene(&config.scene_path)
        .map_err(|e| CliError::Config(format!("scene_path: {e}")))?;
    let sites = load_sites(&config.sites_path, &config.cells_path)
        .map_err(|e| CliError::Config(format!("sites_path/cells_path: {e}")))?;
    let grid = build_grid(&scene, config.grid.resolution_m, config.grid.rx_height_m)
        .map_err(|e| CliError::Config(format!("grid: {e}")))?;
    for warning in scenario_warnings(&scene, &sites) {
        eprintln!("warning: {warning}");
    }
    let candidates =
        generate_ris_candidates(&scene, config.ris.rows, config.ris.cols, config.ris.height_m);

    let campaign_config = CampaignConfig {
        panel: config.ris.panel,
        angles: config.ris.angles,
        keep_candidate_maps: config.per_candidate_maps,
    };
    let campaign = run_campaign(&scene, &sites, &candidates, &grid, &campaign_config)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    write_reports(&campaign, &scene, &output_dir, config.building_overlay)
        .map_err(|e| CliError::Runtime(e.to_string()))?;

    if per_band || config.per_band_maps {
        for (freq, band_sites) in split_bands(&sites) {
            let band_dir = output_dir.join(format!("band_{freq}mhz"));
            let band_campaign =
                run_campaign(&scene, &band_sites, &candidates, &grid, &campaign_config)
                    .map_err(|e| CliError::Runtime(e.to_string()))?;
            write_reports(&band_campaign, &scene, &band_dir, config.building_overlay)
                .map_err(|e| CliError::Runtime(e.to_string()))?;
        }
    }

    let doc = summary_doc(&campaign).map_err(|e| CliError::Runtime(e.to_string()))?;
    print!("{}", render::render_tables(&doc));
    eprintln!("artifacts written to {}", output_dir.display());
    Ok(())
}

/// Distinct frequencies in ascending order, each with the sites restricted
/// to cells of that band.
fn split_bands(sites: &[SiteConfig]) -> Vec<(String, Vec<SiteConfig>)> {
    let mut freqs: Vec<f64> = sites
        .iter()
        .flat_map(|s| s.cells.iter().map(|c| c.frequency_mhz))
        .collect();
    freqs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    freqs.dedup();
    freqs
        .into_iter()
        .map(|freq| {
            let band_sites: Vec<SiteConfig> = sites
                .iter()
                .map(|s| SiteConfig {
                    site_id: s.site_id.clone(),
                    position: s.position,
                    antenna_height_m: s.antenna_height_m,
                    cells: s
                        .cells
                        .iter()
                        .filter(|c| c.frequency_mhz == freq)
                        .cloned()
                        .collect(),
                })
                .filter(|s| !s.cells.is_empty())
                .collect();
            let label = if freq.fract() == 0.0 {
                format!("{}", freq as u64)
            } else {
                format!("{freq}")
            };
            (label, band_sites)
        })
        .collect()
}

fn cmd_candidates(config_path: &Path) -> Result<(), CliError> {
    let config = RunConfig::load(config_path).map_err(CliError::Config)?;
    let scene = load_scene(&config.scene_path)
        .map_err(|e| CliError::Config(format!("scene_path: {e}")))?;
    let candidates =
        generate_ris_candidates(&scene, config.ris.rows, config.ris.cols, config.ris.height_m);
    for c in &candidates {
        println!("{},{:.3},{:.3},{:.3}", c.id, c.position[0], c.position[1], c.height_m);
    }
    Ok(())
}

fn cmd_report(dir: &Path) -> Result<(), CliError> {
    let summary_path = dir.join("summary.json");
    if !summary_path.is_file() {
        return Err(CliError::Config(format!(
            "no summary.json in {}",
            dir.display()
        )));
    }
    let doc = read_summary(&summary_path).map_err(|e| CliError::Config(e.to_string()))?;
    print!("{}", render::render_tables(&doc));
    let drift = doc.max_gain_inconsistency();
    if drift > 1e-9 {
        return Err(CliError::Runtime(format!(
            "summary.json is inconsistent: stored gains deviate from recomputed gains by up to {drift:.6} percentage points"
        )));
    }
    Ok(())
}
