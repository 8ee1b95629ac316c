//! Wiretap-channel parameters `(eta, kappa, n_e)` for an eavesdropper behind
//! or before the legitimate receiver.
//!
//! `eta` is the fraction of the transmitted power that lands on Bob's
//! aperture and `kappa` is the fraction of the remainder that Eve collects.
//! Eve's aperture is a perfect absorber: behind Bob she sees the beam cropped
//! by Bob's aperture, and before Bob her aperture casts a shadow on Bob.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::beam::BeamParams;
use crate::diffraction::{DiskSpec, FieldProfile, GridPolicy, SourceAnnulus};
use crate::error::{invalid, Error, Result};

const PLANCK: f64 = 6.626e-34;
const BOLTZMANN: f64 = 1.380_648_52e-23;
const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Excess of `kappa` over 1 tolerated as quadrature noise.
pub const KAPPA_TOLERANCE: f64 = 1e-3;

/// Mean blackbody photon number per mode, `1 / (exp(hf/kT) - 1)`.
///
/// Evaluated as `exp(-x - ln(1 - exp(-x)))` so optical frequencies at a few
/// kelvin underflow cleanly to zero.
pub fn thermal_occupation(frequency: f64, temperature: f64) -> Result<f64> {
    if !(frequency > 0.0) || !frequency.is_finite() {
        return Err(invalid("frequency", format!("must be finite and > 0, got {frequency}")));
    }
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(invalid("temperature", format!("must be finite and > 0, got {temperature}")));
    }
    let x = PLANCK * frequency / (BOLTZMANN * temperature);
    let log_n = -x - (-(-x).exp()).ln_1p();
    Ok(log_n.exp())
}

/// Carrier frequency of light at `wavelength` in vacuum.
pub fn optical_frequency(wavelength: f64) -> f64 {
    SPEED_OF_LIGHT / wavelength
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Eve sits `l_be` past Bob and collects what his aperture misses.
    BehindBob,
    /// Eve sits `l_be` in front of Bob, at `l_ae = l_ab - l_be` from Alice.
    BeforeBob,
}

/// Link geometry. Lengths in meters.
///
/// `offset` is Eve's displacement from the beam axis; it is only meaningful
/// behind Bob, since before Bob the on-axis position is already optimal for
/// Eve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub scenario: Scenario,
    pub l_ab: f64,
    pub l_be: f64,
    #[serde(default)]
    pub offset: f64,
    pub r_a: f64,
    pub r_b: f64,
    pub r_e: f64,
}

impl Geometry {
    pub fn behind_bob(l_ab: f64, l_be: f64, r_a: f64, r_b: f64, r_e: f64) -> Result<Self> {
        let g = Self {
            scenario: Scenario::BehindBob,
            l_ab,
            l_be,
            offset: 0.0,
            r_a,
            r_b,
            r_e,
        };
        g.validate()?;
        Ok(g)
    }

    /// Eve at `l_ae` from Alice, in front of Bob.
    pub fn before_bob(l_ab: f64, l_ae: f64, r_a: f64, r_b: f64, r_e: f64) -> Result<Self> {
        let g = Self {
            scenario: Scenario::BeforeBob,
            l_ab,
            l_be: l_ab - l_ae,
            offset: 0.0,
            r_a,
            r_b,
            r_e,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn with_offset(self, offset: f64) -> Result<Self> {
        let g = Self { offset, ..self };
        g.validate()?;
        Ok(g)
    }

    pub fn with_l_be(self, l_be: f64) -> Result<Self> {
        let g = Self { l_be, ..self };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("l_ab", self.l_ab),
            ("l_be", self.l_be),
            ("r_a", self.r_a),
            ("r_b", self.r_b),
            ("r_e", self.r_e),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(name, format!("must be finite and > 0, got {v}")));
            }
        }
        if !(self.offset >= 0.0) || !self.offset.is_finite() {
            return Err(invalid("offset", format!("must be finite and >= 0, got {}", self.offset)));
        }
        if self.scenario == Scenario::BeforeBob {
            if self.l_be >= self.l_ab {
                return Err(invalid(
                    "l_be",
                    format!("Eve before Bob needs l_be < l_ab, got {} >= {}", self.l_be, self.l_ab),
                ));
            }
            if self.offset != 0.0 {
                return Err(invalid("offset", "Eve before Bob is modeled on axis only"));
            }
        }
        Ok(())
    }

    /// Alice to Eve.
    pub fn l_ae(&self) -> f64 {
        match self.scenario {
            Scenario::BehindBob => self.l_ab + self.l_be,
            Scenario::BeforeBob => self.l_ab - self.l_be,
        }
    }

    /// The obstructed plane the diffracted field starts from.
    pub fn source(&self, beam: BeamParams) -> Result<SourceAnnulus> {
        match self.scenario {
            Scenario::BehindBob => SourceAnnulus::cropped(beam, self.l_ab, self.r_b),
            Scenario::BeforeBob => SourceAnnulus::blocked(beam, self.l_ae(), self.r_e),
        }
    }

    /// The aperture that receives the diffracted field.
    pub fn diffracted_collector(&self) -> Result<DiskSpec> {
        match self.scenario {
            Scenario::BehindBob => DiskSpec::new(self.r_e, self.offset),
            Scenario::BeforeBob => DiskSpec::on_axis(self.r_b),
        }
    }

    fn check_beam(&self, beam: &BeamParams) -> Result<()> {
        if (beam.waist_radius - self.r_a).abs() > 1e-12 * self.r_a {
            return Err(invalid(
                "r_a",
                format!("waist radius {} must equal the transmitter aperture {}", beam.waist_radius, self.r_a),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub eta: f64,
    pub kappa: f64,
    pub n_e: f64,
    pub p_bob: f64,
    pub p_eve: f64,
}

impl ChannelParams {
    /// Builds the parameters from raw fractions, for rate studies that do not
    /// start from a geometry.
    pub fn new(eta: f64, kappa: f64, n_e: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(invalid("eta", format!("must lie in [0, 1], got {eta}")));
        }
        if !(0.0..=1.0).contains(&kappa) {
            return Err(invalid("kappa", format!("must lie in [0, 1], got {kappa}")));
        }
        if !(n_e >= 0.0) || !n_e.is_finite() {
            return Err(invalid("n_e", format!("must be finite and >= 0, got {n_e}")));
        }
        Ok(Self {
            eta,
            kappa,
            n_e,
            p_bob: eta,
            p_eve: kappa * (1.0 - eta),
        })
    }

    pub fn with_noise(self, n_e: f64) -> Result<Self> {
        Self::new(self.eta, self.kappa, n_e).map(|c| Self { n_e: c.n_e, ..self })
    }
}

/// Source of diffracted field profiles, so callers can cache them.
pub trait ProfileProvider: Sync {
    fn profile(&self, source: &SourceAnnulus, distance: f64, coverage: f64) -> Result<Arc<FieldProfile>>;
}

impl<P: ProfileProvider + ?Sized> ProfileProvider for &P {
    fn profile(&self, source: &SourceAnnulus, distance: f64, coverage: f64) -> Result<Arc<FieldProfile>> {
        (**self).profile(source, distance, coverage)
    }
}

/// Computes every profile afresh.
#[derive(Debug, Clone, Copy, Default)]
pub struct Uncached {
    pub policy: GridPolicy,
}

impl ProfileProvider for Uncached {
    fn profile(&self, source: &SourceAnnulus, distance: f64, coverage: f64) -> Result<Arc<FieldProfile>> {
        FieldProfile::compute(source, distance, coverage, self.policy).map(Arc::new)
    }
}

/// Bit patterns of everything that determines a profile under a fixed grid
/// policy.
pub fn profile_fingerprint(source: &SourceAnnulus, distance: f64, coverage: f64) -> [u64; 8] {
    [
        source.beam.wavelength,
        source.beam.waist_radius,
        source.beam.field_peak,
        source.plane_distance,
        source.inner_radius,
        source.outer_radius,
        distance,
        coverage,
    ]
    .map(f64::to_bits)
}

/// Channel parameters for `geom`, computing any diffracted field directly.
pub fn channel_params(geom: &Geometry, beam: &BeamParams, noise: f64) -> Result<ChannelParams> {
    channel_params_with(geom, beam, noise, &Uncached::default(), 0.0)
}

/// Like [`channel_params`] but with profiles from `provider`. Profiles are
/// requested out to at least `min_coverage`, which lets repeated calls with
/// different offsets share one profile.
pub fn channel_params_with(
    geom: &Geometry,
    beam: &BeamParams,
    noise: f64,
    provider: &dyn ProfileProvider,
    min_coverage: f64,
) -> Result<ChannelParams> {
    geom.validate()?;
    beam.validate()?;
    geom.check_beam(beam)?;
    if !(noise >= 0.0) || !noise.is_finite() {
        return Err(invalid("noise", format!("must be finite and >= 0, got {noise}")));
    }
    let total = beam.total_power();
    let source = geom.source(*beam)?;
    let disk = geom.diffracted_collector()?;
    let profile = provider.profile(&source, geom.l_be, disk.reach().max(min_coverage))?;
    let diffracted = profile.disk_power(&disk)?;
    let (p_bob, p_eve) = match geom.scenario {
        Scenario::BehindBob => (beam.encircled_power(geom.l_ab, geom.r_b)?, diffracted),
        Scenario::BeforeBob => (diffracted, beam.encircled_power(geom.l_ae(), geom.r_e)?),
    };
    let eta = (p_bob / total).clamp(0.0, 1.0);
    let missed = (1.0 - eta) * total;
    let mut kappa = if missed > 0.0 { p_eve.max(0.0) / missed } else { 0.0 };
    if kappa > 1.0 + KAPPA_TOLERANCE {
        return Err(Error::Consistency { kappa });
    }
    if kappa > 1.0 {
        log::warn!("kappa = {kappa} exceeds 1 within tolerance, clamped");
        kappa = 1.0;
    }
    Ok(ChannelParams {
        eta,
        kappa,
        n_e: noise,
        p_bob: p_bob / total,
        p_eve: p_eve / total,
    })
}
