//! Closed-form Gaussian beam quantities.
//!
//! All lengths are in meters and powers are in units of the total
//! transmitted power unless a beam is built with an explicit field peak.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Refractive index of the propagation medium (vacuum).
pub const VACUUM_INDEX: f64 = 1.0;

/// Transmitted Gaussian mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamParams {
    pub wavelength: f64,
    pub waist_radius: f64,
    pub field_peak: f64,
}

/// Wavefront curvature at a transverse plane. The waist plane is flat.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Curvature {
    Flat,
    Radius(f64),
}

impl Curvature {
    /// `1/R`, zero for a flat wavefront.
    pub fn inverse(self) -> f64 {
        match self {
            Curvature::Flat => 0.0,
            Curvature::Radius(r) => 1.0 / r,
        }
    }
}

/// Beam parameters at a plane `distance` meters from the waist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneField {
    pub distance: f64,
    pub spot_size: f64,
    pub curvature: Curvature,
    pub gouy_phase: f64,
}

impl BeamParams {
    /// Beam normalized to unit total power.
    pub fn normalized(wavelength: f64, waist_radius: f64) -> Result<Self> {
        if !(waist_radius > 0.0) || !waist_radius.is_finite() {
            return Err(invalid("waist_radius", format!("must be > 0, got {waist_radius}")));
        }
        Self::new(wavelength, waist_radius, (2.0 / (PI * waist_radius * waist_radius)).sqrt())
    }

    pub fn new(wavelength: f64, waist_radius: f64, field_peak: f64) -> Result<Self> {
        let beam = Self {
            wavelength,
            waist_radius,
            field_peak,
        };
        beam.validate()?;
        Ok(beam)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.wavelength > 0.0) || !self.wavelength.is_finite() {
            return Err(invalid("wavelength", format!("must be > 0, got {}", self.wavelength)));
        }
        if !(self.waist_radius > 0.0) || !self.waist_radius.is_finite() {
            return Err(invalid(
                "waist_radius",
                format!("must be > 0, got {}", self.waist_radius),
            ));
        }
        if !(self.field_peak > 0.0) || !self.field_peak.is_finite() {
            return Err(invalid("field_peak", format!("must be > 0, got {}", self.field_peak)));
        }
        Ok(())
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    pub fn rayleigh_length(&self) -> f64 {
        VACUUM_INDEX * PI * self.waist_radius * self.waist_radius / self.wavelength
    }

    /// Spot size `W(L)`; no precondition check, callers pass `L >= 0`.
    pub fn spot_size(&self, distance: f64) -> f64 {
        let ratio = distance / self.rayleigh_length();
        self.waist_radius * (1.0 + ratio * ratio).sqrt()
    }

    pub fn plane_params(&self, distance: f64) -> Result<PlaneField> {
        if !(distance >= 0.0) || !distance.is_finite() {
            return Err(invalid("distance", format!("must be >= 0, got {distance}")));
        }
        let z0 = self.rayleigh_length();
        let curvature = if distance == 0.0 {
            Curvature::Flat
        } else {
            Curvature::Radius(distance * (1.0 + (z0 / distance).powi(2)))
        };
        Ok(PlaneField {
            distance,
            spot_size: self.spot_size(distance),
            curvature,
            gouy_phase: (distance / z0).atan(),
        })
    }

    /// Complex field `U(r, L)` including carrier, curvature and Gouy phases.
    pub fn field_amplitude(&self, r: f64, distance: f64) -> Result<Complex64> {
        if !(r >= 0.0) {
            return Err(invalid("r", format!("must be >= 0, got {r}")));
        }
        let plane = self.plane_params(distance)?;
        Ok(self.field_at_plane(&plane, r))
    }

    /// Field at radius `r` on a precomputed plane.
    pub fn field_at_plane(&self, plane: &PlaneField, r: f64) -> Complex64 {
        let w = plane.spot_size;
        let k = self.wavenumber();
        let magnitude = self.field_peak * self.waist_radius / w * (-(r * r) / (w * w)).exp();
        let phase = carrier_phase(plane.distance, self.wavelength)
            + 0.5 * k * r * r * plane.curvature.inverse()
            - plane.gouy_phase;
        Complex64::from_polar(magnitude, -phase)
    }

    pub fn total_power(&self) -> f64 {
        self.field_peak * self.field_peak * PI * self.waist_radius * self.waist_radius / 2.0
    }

    /// Power inside a centered disk of `radius` at distance `L`.
    pub fn encircled_power(&self, distance: f64, radius: f64) -> Result<f64> {
        if !(radius >= 0.0) {
            return Err(invalid("radius", format!("must be >= 0, got {radius}")));
        }
        if !(distance >= 0.0) {
            return Err(invalid("distance", format!("must be >= 0, got {distance}")));
        }
        if radius.is_infinite() {
            return Ok(self.total_power());
        }
        let w = self.spot_size(distance);
        Ok(-self.total_power() * (-2.0 * radius * radius / (w * w)).exp_m1())
    }

    /// Power outside radius `inner` (up to `outer`) at distance `L`.
    pub fn annulus_power(&self, distance: f64, inner: f64, outer: f64) -> Result<f64> {
        Ok(self.encircled_power(distance, outer)? - self.encircled_power(distance, inner)?)
    }

    /// Same beam with a different field peak.
    pub fn with_field_peak(&self, field_peak: f64) -> Result<Self> {
        Self::new(self.wavelength, self.waist_radius, field_peak)
    }
}

/// `k L mod 2π`, reduced through `L/λ` so long paths keep phase accuracy.
pub fn carrier_phase(distance: f64, wavelength: f64) -> f64 {
    let cycles = distance / wavelength;
    2.0 * PI * (cycles - cycles.floor())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn beam() -> BeamParams {
        BeamParams::normalized(1550e-9, 0.1).unwrap()
    }

    #[test]
    fn rayleigh_length_matches_direct_evaluation() {
        // pi * 0.01 / 1.55e-6
        assert_relative_eq!(beam().rayleigh_length(), 20268.339, max_relative = 1e-6);
    }

    #[test]
    fn spot_size_doubles_area_at_rayleigh_length() {
        let b = beam();
        let p = b.plane_params(b.rayleigh_length()).unwrap();
        assert_relative_eq!(p.spot_size, 0.1 * 2f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(p.gouy_phase, PI / 4.0, max_relative = 1e-14);
        match p.curvature {
            Curvature::Radius(r) => assert_relative_eq!(r, 2.0 * b.rayleigh_length(), max_relative = 1e-14),
            Curvature::Flat => panic!("expected finite radius"),
        }
    }

    #[test]
    fn spot_size_at_sixty_km() {
        let w = beam().plane_params(60e3).unwrap().spot_size;
        assert!((w - 0.3124).abs() < 1e-4, "{w}");
    }

    #[test]
    fn waist_plane_is_flat() {
        let p = beam().plane_params(0.0).unwrap();
        assert_eq!(p.curvature, Curvature::Flat);
        assert_eq!(p.curvature.inverse(), 0.0);
        assert_eq!(p.spot_size, 0.1);
    }

    #[test]
    fn negative_distance_rejected() {
        assert!(beam().plane_params(-1.0).is_err());
        assert!(beam().field_amplitude(0.0, -3.0).is_err());
        assert!(beam().field_amplitude(-0.1, 3.0).is_err());
    }

    #[test]
    fn curvature_radius_never_below_twice_rayleigh() {
        let b = beam();
        let z0 = b.rayleigh_length();
        for i in 1..200 {
            let l = z0 * 0.05 * i as f64;
            if let Curvature::Radius(r) = b.plane_params(l).unwrap().curvature {
                assert!(r >= 2.0 * z0 * (1.0 - 1e-12));
            }
        }
    }

    #[test]
    fn field_magnitudes() {
        let b = beam();
        assert_relative_eq!(b.field_amplitude(0.0, 0.0).unwrap().norm(), b.field_peak, max_relative = 1e-15);
        let l = 35e3;
        let w = b.spot_size(l);
        let u = b.field_amplitude(w, l).unwrap().norm();
        assert_relative_eq!(u, b.field_peak * 0.1 / w * (-1f64).exp(), max_relative = 1e-13);
    }

    #[test]
    fn phase_on_axis_at_rayleigh_length() {
        let b = beam();
        let z0 = b.rayleigh_length();
        let u = b.field_amplitude(0.0, z0).unwrap();
        let expected = -(carrier_phase(z0, b.wavelength) - PI / 4.0);
        let diff = (u.arg() - expected).rem_euclid(2.0 * PI);
        assert!(diff < 1e-9 || 2.0 * PI - diff < 1e-9, "{diff}");
    }

    #[test]
    fn total_power_normalization() {
        assert_relative_eq!(beam().total_power(), 1.0, max_relative = 1e-15);
        let doubled = beam().with_field_peak(2.0 * beam().field_peak).unwrap();
        assert_relative_eq!(doubled.total_power(), 4.0, max_relative = 1e-14);
        let unit = BeamParams::new(1550e-9, 0.1, 1.0).unwrap();
        assert_relative_eq!(unit.total_power(), PI / 200.0, max_relative = 1e-15);
    }

    #[test]
    fn encircled_power_limits() {
        let b = beam();
        assert_eq!(b.encircled_power(20e3, 0.0).unwrap(), 0.0);
        assert_relative_eq!(b.encircled_power(20e3, f64::INFINITY).unwrap(), 1.0);
        assert_relative_eq!(b.encircled_power(20e3, 50.0).unwrap(), 1.0);
        let eta = b.encircled_power(20e3, 0.1).unwrap();
        assert!((eta - 0.637).abs() < 1e-3, "{eta}");
    }
}
