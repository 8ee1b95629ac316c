//! Point-source (Arago spot) prediction for the field behind a circular obstacle.

use std::f64::consts::PI;

use crate::bessel::j0;
use crate::error::{invalid, Result};

/// Amplitude behind an obstacle of radius `r_b` relative to the undisturbed
/// wavefront, at distance `delta` and transverse radius `l`.
pub fn arago_relative_amplitude(r_b: f64, delta: f64, l: f64, wavelength: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(invalid("delta", format!("must be > 0, got {delta}")));
    }
    let prefactor = (r_b / delta).hypot(1.0).recip();
    Ok(prefactor * j0(2.0 * PI * r_b * l / (wavelength * delta)).abs())
}
