//! Two-dimensional Rayleigh–Sommerfeld integration of the source annulus.
//!
//! Slow validation oracle for [`super::fresnel`]. No production path calls it.
//!
//! `U(l, φ) = (Δ / iλ) ∫∫ U_src(r) e^{ik r₁₂} / r₁₂² r dr dθ`, with
//! `r₁₂² = Δ² + l² + r² − 2 r l cos(φ − θ)`. The carrier `e^{ikΔ}` is pulled
//! out and `r₁₂ − Δ` is formed as `ρ² / (r₁₂ + Δ)` to keep phase accuracy.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::SourceAnnulus;
use crate::beam::carrier_phase;
use crate::error::{invalid, Error, Result};
use crate::quadrature::{gk15, panel_edges};

/// Relative tolerance of the oracle against its magnitude scale.
pub const DIRECT_TOLERANCE: f64 = 1e-8;

/// Direct 2D evaluation at `(l, φ)` with the source truncated at
/// `truncation` spot sizes. Returns the field and its absolute error estimate.
pub fn rs_field_direct_with(
    source: &SourceAnnulus,
    distance: f64,
    l: f64,
    phi: f64,
    truncation: f64,
) -> Result<(Complex64, f64)> {
    source.validate()?;
    if !(distance > 0.0) || !distance.is_finite() {
        return Err(invalid("distance", format!("must be > 0, got {distance}")));
    }
    if !(l >= 0.0) {
        return Err(invalid("l", format!("must be >= 0, got {l}")));
    }
    let beam = &source.beam;
    let plane = beam.plane_params(source.plane_distance)?;
    let k = beam.wavenumber();
    let inner = source.inner_radius;
    let outer = source.working_outer(truncation);
    let w = plane.spot_size;
    let inv_r = plane.curvature.inverse();
    let dist2 = distance * distance;

    // Source field without its constant phase; that phase is restored below.
    let envelope = |r: f64| -> Complex64 {
        let mag = (-(r * r) / (w * w)).exp();
        Complex64::from_polar(mag, -0.5 * k * r * r * inv_r)
    };

    // Full θ circle; φ enters through cos(θ − φ).
    let angular = |r: f64| -> (Complex64, f64) {
        let base = l * l + r * r;
        let cross = 2.0 * r * l;
        let kernel = |theta: f64| -> Complex64 {
            let rho2 = base - cross * (theta - phi).cos();
            let r12 = (dist2 + rho2).sqrt();
            let excess = rho2 / (r12 + distance);
            Complex64::from_polar(1.0 / (r12 * r12), k * excess)
        };
        if cross == 0.0 {
            return (kernel(0.0) * (2.0 * PI), 0.0);
        }
        // stationary phase rate in θ is k r l sin θ / r₁₂ ≤ k r l / Δ
        let rate = k * r * l / distance;
        let width = if rate > 0.0 { (PI / rate).min(PI / 4.0) } else { PI / 4.0 };
        let edges = panel_edges(0.0, 2.0 * PI, &[], |_| width);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        for pair in edges.windows(2) {
            let (v, e) = gk15(&kernel, pair[0], pair[1]);
            sum += v;
            err += e;
        }
        (sum, err)
    };

    let chirp = 0.5 * k * (1.0 / distance - inv_r);
    let bessel_rate = k * l / distance;
    let gaussian_scale = 0.25 * w;
    let edges = panel_edges(inner, outer, &[], |r| {
        let rate = 2.0 * chirp.abs() * r + bessel_rate;
        if rate > 0.0 {
            (PI / rate).min(gaussian_scale)
        } else {
            gaussian_scale
        }
    });

    let mut total = Complex64::new(0.0, 0.0);
    let mut total_err = 0.0;
    let radial = |r: f64| -> Complex64 {
        let (ang, _) = angular(r);
        envelope(r) * ang * r
    };
    for pair in edges.windows(2) {
        let (v, e) = gk15(&radial, pair[0], pair[1]);
        total += v;
        total_err += e;
    }
    // angular error bound, sampled at the panel midpoints
    for pair in edges.windows(2) {
        let mid = 0.5 * (pair[0] + pair[1]);
        let (_, e) = angular(mid);
        total_err += e * (-(mid * mid) / (w * w)).exp() * mid * (pair[1] - pair[0]);
    }

    let scale = 2.0 * PI * ((-(inner * inner) / (w * w)).exp() - (-(outer * outer) / (w * w)).exp()) * w * w
        / (2.0 * dist2);
    if total_err > DIRECT_TOLERANCE * scale {
        return Err(Error::NonConvergence {
            estimate: total_err / scale,
            tolerance: DIRECT_TOLERANCE,
        });
    }

    // Δ/(iλ) · e^{ikΔ} · E0 W0/W · e^{-i(k L_src - ψ)}
    let phase = carrier_phase(distance, beam.wavelength) - PI / 2.0 - carrier_phase(source.plane_distance, beam.wavelength)
        + plane.gouy_phase;
    let magnitude = distance / beam.wavelength * beam.field_peak * beam.waist_radius / w;
    let pre = Complex64::from_polar(magnitude, phase);
    Ok((pre * total, magnitude * total_err))
}

/// Direct evaluation with the default 3W truncation.
pub fn rs_field_direct(source: &SourceAnnulus, distance: f64, l: f64, phi: f64) -> Result<Complex64> {
    rs_field_direct_with(source, distance, l, phi, super::DEFAULT_TRUNCATION).map(|(u, _)| u)
}
