//! Coverage planning engine for urban radio networks assisted by
//! reconfigurable reflective panels.
//!
//! The engine rasterizes an urban scene into measurement points, evaluates
//! direct base-station paths with the urban-macro LOS/NLOS model and
//! reflected two-hop paths with a far-field beamforming model, composes the
//! four scenario maps (baseline, min-selection, reinforced, averaged),
//! reduces them to summary/gain/CDF reports, and enumerates and ranks
//! candidate panel placements.
//!
//! Map composition is data-parallel over measurement points (rayon, behind
//! the default `parallel` feature) and deterministic: identical inputs give
//! byte-identical artifacts for any worker count.

// Validation uses `!(x > 0.0)` on purpose: NaN must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod campaign;
mod error;
mod geometry;
pub mod io;
pub mod maps;
pub mod metrics;
mod par;
pub mod propagation;
pub mod scene;

pub use error::{Error, Result};
