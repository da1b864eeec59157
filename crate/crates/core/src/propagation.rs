//! Pure path-loss kernels.
//!
//! Two models drive every map in the engine: the urban-macro (UMa) LOS/NLOS
//! closed forms for direct base-station paths, and a far-field beamforming
//! model for paths reflected off a passive panel. All kernels are stateless
//! and deterministic; equal inputs give bit-identical outputs.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// UMa distances below this floor are clamped before evaluation; the model
/// is not defined for arbitrarily small ranges and desk scenes may place
/// measurement points next to a mast.
pub const UMA_MIN_D2D_M: f64 = 10.0;

/// Inputs of the urban-macro path-loss closed forms.
///
/// `env_height_m` is the effective environment height. For receiver heights
/// up to 13 m it is the constant 1 m, which keeps the whole model
/// deterministic; that constant is the default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UmaParams {
    pub fc_ghz: f64,
    pub bs_height_m: f64,
    pub ut_height_m: f64,
    pub env_height_m: f64,
}

impl UmaParams {
    pub fn new(fc_ghz: f64, bs_height_m: f64, ut_height_m: f64) -> Self {
        UmaParams {
            fc_ghz,
            bs_height_m,
            ut_height_m,
            env_height_m: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fc_ghz > 0.0) {
            return Err(Error::Domain(format!(
                "carrier frequency must be positive, got {} GHz",
                self.fc_ghz
            )));
        }
        if !(self.bs_height_m > self.env_height_m) {
            return Err(Error::Domain(format!(
                "BS height {} m must exceed the effective environment height {} m",
                self.bs_height_m, self.env_height_m
            )));
        }
        if !(self.ut_height_m > self.env_height_m) {
            return Err(Error::Domain(format!(
                "terminal height {} m must exceed the effective environment height {} m",
                self.ut_height_m, self.env_height_m
            )));
        }
        Ok(())
    }
}

/// Breakpoint distance: where the LOS slope changes from 22 to 40 dB/decade.
///
/// d'_BP = 4 * (h_BS - h_E) * (h_UT - h_E) * f_Hz / c
pub fn uma_breakpoint(params: &UmaParams) -> Result<f64> {
    params.validate()?;
    let fc_hz = params.fc_ghz * 1e9;
    Ok(4.0 * (params.bs_height_m - params.env_height_m) * (params.ut_height_m - params.env_height_m)
        * fc_hz
        / SPEED_OF_LIGHT)
}

fn d3d_from(d2d: f64, params: &UmaParams) -> f64 {
    let dh = params.bs_height_m - params.ut_height_m;
    (d2d * d2d + dh * dh).sqrt()
}

/// UMa line-of-sight path loss in dB.
///
/// Below the breakpoint the slant distance attenuates at 22 dB/decade, above
/// it at 40 dB/decade with a breakpoint correction; the two branches meet
/// exactly at d'_BP. `d2d_m` below [`UMA_MIN_D2D_M`] is clamped.
pub fn uma_pl_los(d2d_m: f64, params: &UmaParams) -> Result<f64> {
    let bp = uma_breakpoint(params)?;
    let d2d = d2d_m.max(UMA_MIN_D2D_M);
    let d3d = d3d_from(d2d, params);
    let fc_term = 20.0 * params.fc_ghz.log10();
    if d2d <= bp {
        Ok(28.0 + 22.0 * d3d.log10() + fc_term)
    } else {
        let dh = params.bs_height_m - params.ut_height_m;
        Ok(28.0 + 40.0 * d3d.log10() + fc_term - 9.0 * (bp * bp + dh * dh).log10())
    }
}

/// UMa non-line-of-sight path loss in dB: the NLOS closed form floored by
/// the LOS value.
pub fn uma_pl_nlos(d2d_m: f64, params: &UmaParams) -> Result<f64> {
    let los = uma_pl_los(d2d_m, params)?;
    let d2d = d2d_m.max(UMA_MIN_D2D_M);
    let d3d = d3d_from(d2d, params);
    let nlos = 13.54 + 39.08 * d3d.log10() + 20.0 * params.fc_ghz.log10()
        - 0.6 * (params.ut_height_m - 1.5);
    Ok(los.max(nlos))
}

/// Physical description of a reflective panel: an M x N array of unit cells.
///
/// Gains are linear (1.0 = 0 dBi). The unit-cell radiation pattern is
/// F(theta) = cos^(2q)(theta) with `pattern_exponent` q.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RisPanel {
    pub column_elements: u32,
    pub row_elements: u32,
    pub column_width_m: f64,
    pub row_width_m: f64,
    pub amplitude_factor: f64,
    pub tx_gain: f64,
    pub rx_gain: f64,
    pub unit_cell_gain: f64,
    pub pattern_exponent: f64,
}

impl Default for RisPanel {
    /// 102 x 100 cells of 1 cm pitch with reflection amplitude 0.9; unity
    /// gains and a cos^3 pattern.
    fn default() -> Self {
        RisPanel {
            column_elements: 102,
            row_elements: 100,
            column_width_m: 0.01,
            row_width_m: 0.01,
            amplitude_factor: 0.9,
            tx_gain: 1.0,
            rx_gain: 1.0,
            unit_cell_gain: 1.0,
            pattern_exponent: 1.5,
        }
    }
}

impl RisPanel {
    pub fn validate(&self) -> Result<()> {
        if self.column_elements < 1 || self.row_elements < 1 {
            return Err(Error::Config("panel needs at least one element per axis".into()));
        }
        if !(self.column_width_m > 0.0) || !(self.row_width_m > 0.0) {
            return Err(Error::Config("panel element pitch must be positive".into()));
        }
        if !(self.amplitude_factor > 0.0 && self.amplitude_factor <= 1.0) {
            return Err(Error::Config(format!(
                "reflection amplitude factor must be in (0, 1], got {}",
                self.amplitude_factor
            )));
        }
        if !(self.tx_gain > 0.0) || !(self.rx_gain > 0.0) || !(self.unit_cell_gain > 0.0) {
            return Err(Error::Config("panel gains must be positive".into()));
        }
        if !(self.pattern_exponent >= 0.0) {
            return Err(Error::Config(format!(
                "pattern exponent must be non-negative, got {}",
                self.pattern_exponent
            )));
        }
        Ok(())
    }

    /// Largest physical dimension of the array in meters.
    pub fn largest_dimension_m(&self) -> f64 {
        let w = self.column_elements as f64 * self.column_width_m;
        let h = self.row_elements as f64 * self.row_width_m;
        w.max(h)
    }
}

/// Elevation/azimuth pairs of the incident (t) and reflected (r) waves
/// relative to the panel normal, in radians.
///
/// The azimuths are carried for configuration fidelity; the cos^(2q) pattern
/// depends on elevation only. Defaults are the fixed orientation that
/// maximizes the reflected power: theta = pi/4 on both sides, phi_t = pi,
/// phi_r = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamAngles {
    pub theta_t_rad: f64,
    pub phi_t_rad: f64,
    pub theta_r_rad: f64,
    pub phi_r_rad: f64,
}

impl Default for BeamAngles {
    fn default() -> Self {
        BeamAngles {
            theta_t_rad: PI / 4.0,
            phi_t_rad: PI,
            theta_r_rad: PI / 4.0,
            phi_r_rad: 0.0,
        }
    }
}

impl BeamAngles {
    pub fn validate(&self) -> Result<()> {
        for (name, theta) in [("theta_t", self.theta_t_rad), ("theta_r", self.theta_r_rad)] {
            if !(0.0..PI / 2.0).contains(&theta) {
                return Err(Error::Domain(format!(
                    "{name} must lie in [0, pi/2), got {theta} rad; the pattern is undefined behind the panel"
                )));
            }
        }
        Ok(())
    }
}

/// Far-field beamforming path loss of a reflected two-hop link, in dB.
///
/// PL = 10 log10( 64 pi^3 d1^2 d2^2
///              / (G_t G_r G M^2 N^2 d_m d_n lambda^2 F(theta_t) F(theta_r) A^2) )
///
/// `d1_m` is the transmitter-to-panel distance and `d2_m` the
/// panel-to-receiver distance; the expression is symmetric in the two.
pub fn ris_ffbc_pl(
    d1_m: f64,
    d2_m: f64,
    wavelength_m: f64,
    panel: &RisPanel,
    angles: &BeamAngles,
) -> Result<f64> {
    panel.validate()?;
    angles.validate()?;
    if !(d1_m > 0.0) || !(d2_m > 0.0) {
        return Err(Error::Domain(format!(
            "hop distances must be positive, got d1 = {d1_m} m, d2 = {d2_m} m"
        )));
    }
    if !(wavelength_m > 0.0) {
        return Err(Error::Domain(format!(
            "wavelength must be positive, got {wavelength_m} m"
        )));
    }
    let m = panel.column_elements as f64;
    let n = panel.row_elements as f64;
    let f_t = angles.theta_t_rad.cos().powf(2.0 * panel.pattern_exponent);
    let f_r = angles.theta_r_rad.cos().powf(2.0 * panel.pattern_exponent);
    // (d1*d2)^2 rather than d1^2*d2^2: commutativity makes the hop swap
    // bit-exact.
    let hop_product = d1_m * d2_m;
    let numerator = 64.0 * PI.powi(3) * (hop_product * hop_product);
    let denominator = panel.tx_gain
        * panel.rx_gain
        * panel.unit_cell_gain
        * m
        * m
        * n
        * n
        * panel.column_width_m
        * panel.row_width_m
        * wavelength_m
        * wavelength_m
        * f_t
        * f_r
        * panel.amplitude_factor
        * panel.amplitude_factor;
    Ok(10.0 * (numerator / denominator).log10())
}

/// Minimum range for which the far-field reflection model is valid:
/// 2 D^2 / lambda with D the largest panel dimension.
pub fn far_field_distance(panel: &RisPanel, wavelength_m: f64) -> f64 {
    let d = panel.largest_dimension_m();
    2.0 * d * d / wavelength_m
}
