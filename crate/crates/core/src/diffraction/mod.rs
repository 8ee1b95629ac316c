//! Scalar diffraction of a Gaussian beam past a circular aperture or obstacle.
//!
//! [`fresnel`] is the production evaluator (Fresnel approximation reduced to a
//! one-dimensional Hankel-type integral). [`direct`] integrates the
//! Rayleigh–Sommerfeld kernel in two dimensions and exists only to validate
//! it. [`profile`] samples the field on a radial grid and integrates collected
//! power over displaced disks.

pub mod arago;
pub mod direct;
pub mod fresnel;
pub mod profile;

use serde::{Deserialize, Serialize};

use crate::beam::BeamParams;
use crate::error::{invalid, Result};

pub use arago::arago_relative_amplitude;
pub use direct::rs_field_direct;
pub use fresnel::{fresnel_field_bessel, FresnelKernel};
pub use profile::{disk_power, propagate_profile, FieldProfile, GridPolicy};

/// Default working outer radius of a source, in spot sizes at the source plane.
pub const DEFAULT_TRUNCATION: f64 = 3.0;

/// Portion of the beam that continues propagating past a plane: everything
/// between `inner_radius` and `outer_radius` (infinite for a cropped beam).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceAnnulus {
    pub beam: BeamParams,
    pub plane_distance: f64,
    pub inner_radius: f64,
    pub outer_radius: f64,
}

impl SourceAnnulus {
    pub fn new(beam: BeamParams, plane_distance: f64, inner_radius: f64, outer_radius: f64) -> Result<Self> {
        let s = Self {
            beam,
            plane_distance,
            inner_radius,
            outer_radius,
        };
        s.validate()?;
        Ok(s)
    }

    /// Beam outside Bob's aperture of radius `r_b` at distance `l_ab`.
    pub fn cropped(beam: BeamParams, l_ab: f64, r_b: f64) -> Result<Self> {
        Self::new(beam, l_ab, r_b, f64::INFINITY)
    }

    /// Beam passing around an absorbing disk of radius `r_e` at distance `l_ae`.
    pub fn blocked(beam: BeamParams, l_ae: f64, r_e: f64) -> Result<Self> {
        Self::new(beam, l_ae, r_e, f64::INFINITY)
    }

    /// Unobstructed beam at a plane.
    pub fn full(beam: BeamParams, plane_distance: f64) -> Result<Self> {
        Self::new(beam, plane_distance, 0.0, f64::INFINITY)
    }

    pub fn validate(&self) -> Result<()> {
        self.beam.validate()?;
        if !(self.plane_distance >= 0.0) || !self.plane_distance.is_finite() {
            return Err(invalid("plane_distance", format!("must be >= 0, got {}", self.plane_distance)));
        }
        if !(self.inner_radius >= 0.0) || !self.inner_radius.is_finite() {
            return Err(invalid("inner_radius", format!("must be >= 0, got {}", self.inner_radius)));
        }
        if !(self.outer_radius > self.inner_radius) {
            return Err(invalid(
                "outer_radius",
                format!("must exceed inner radius {}, got {}", self.inner_radius, self.outer_radius),
            ));
        }
        Ok(())
    }

    pub fn spot_size(&self) -> f64 {
        self.beam.spot_size(self.plane_distance)
    }

    /// Outer radius actually integrated: `min(outer, truncation * W)`.
    pub fn working_outer(&self, truncation: f64) -> f64 {
        self.outer_radius.min(truncation * self.spot_size())
    }

    /// Power carried by the annulus (untruncated).
    pub fn power(&self) -> f64 {
        self.beam
            .annulus_power(self.plane_distance, self.inner_radius, self.outer_radius)
            .unwrap_or(0.0)
    }
}

/// Circular collector of `radius` whose center sits `offset` from the axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskSpec {
    pub radius: f64,
    pub offset: f64,
}

impl DiskSpec {
    pub fn new(radius: f64, offset: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(invalid("radius", format!("must be > 0, got {radius}")));
        }
        if !(offset >= 0.0) || !offset.is_finite() {
            return Err(invalid("offset", format!("must be >= 0, got {offset}")));
        }
        Ok(Self { radius, offset })
    }

    pub fn on_axis(radius: f64) -> Result<Self> {
        Self::new(radius, 0.0)
    }

    /// Largest distance from the axis touched by the disk.
    pub fn reach(&self) -> f64 {
        self.offset + self.radius
    }
}

/// Fresnel validity check: `Δ³ ≫ (81π / 4λ) W⁴` with "≫" read as a factor 10.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelValidity {
    pub valid: bool,
    pub margin: f64,
}

pub const FRESNEL_MARGIN: f64 = 10.0;

pub fn fresnel_valid(src: &SourceAnnulus, distance: f64) -> FresnelValidity {
    let w = src.spot_size();
    let bound = 81.0 * std::f64::consts::PI / (4.0 * src.beam.wavelength) * w.powi(4);
    let margin = if distance > 0.0 { distance.powi(3) / bound } else { 0.0 };
    FresnelValidity {
        valid: margin >= FRESNEL_MARGIN,
        margin,
    }
}
