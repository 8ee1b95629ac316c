//! Run configuration, stored as TOML.
//!
//! ```toml
//! version = 1
//! name = "lb-vs-lbe"
//!
//! [geometry]
//! scenario = "behind-bob"
//! l_ab = 40000.0
//! l_be = 40000.0
//! r_a = 0.1
//! r_b = 0.1
//! r_e = 0.1
//!
//! [link]
//! wavelength = 1.55e-6
//! temperature = 3.0
//!
//! [rates]
//! beta = 1.0
//! f_l = 1.1
//! pulse_rate = 1e9
//! mu = "optimized"            # or { fixed = "infinite" } / { fixed = { finite = 2.5 } }
//!
//! [sweep]
//! varied = "l-be"
//! grid = { min = 500.0, max = 400000.0, count = 120, spacing = "log" }
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channel::{optical_frequency, thermal_occupation, Geometry};
use crate::error::{invalid, Error, Result};
use crate::rates::{Objective, RateParams};
use crate::sweep::{Grid, Model, MuChoice, SweepSpec, Varied};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkConfig {
    pub wavelength: f64,
    /// Background temperature in kelvin.
    pub temperature: f64,
    /// Replaces the blackbody photon number when set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<f64>,
}

impl Default for LinkConfig {
    fn default() -> Self {
        Self {
            wavelength: 1550e-9,
            temperature: 3.0,
            noise: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatesConfig {
    #[serde(flatten)]
    pub params: RateParams,
    pub mu: MuChoice,
}

impl Default for RatesConfig {
    fn default() -> Self {
        Self {
            params: RateParams::default(),
            mu: MuChoice::Optimized,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub varied: Varied,
    pub grid: Grid,
    #[serde(default)]
    pub optimize_offset: bool,
    /// Use the Arago-spot approximation for Eve's power instead of the full
    /// diffraction integral.
    #[serde(default)]
    pub arago: bool,
    /// Eve-behind-Bob distances appended to an Eve-before-Bob sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub behind: Option<Grid>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub min: f64,
    pub max: f64,
    pub objective: Objective,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavefrontConfig {
    /// Raster side in pixels.
    pub pixels: usize,
    /// Half the raster side in meters.
    pub half_width: f64,
    pub radial_samples: usize,
}

impl Default for WavefrontConfig {
    fn default() -> Self {
        Self {
            pixels: 257,
            half_width: 0.5,
            radial_samples: 401,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    /// Base name of output files.
    pub name: String,
    pub geometry: Geometry,
    #[serde(default)]
    pub link: LinkConfig,
    #[serde(default)]
    pub rates: RatesConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavefront: Option<WavefrontConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache: Option<PathBuf>,
    /// Runs are always reproducible; the flag exists so a config states it.
    #[serde(default = "yes")]
    pub deterministic: bool,
}

fn yes() -> bool {
    true
}

impl RunConfig {
    pub fn new(name: impl Into<String>, geometry: Geometry) -> Self {
        Self {
            version: CONFIG_VERSION,
            name: name.into(),
            geometry,
            link: LinkConfig::default(),
            rates: RatesConfig::default(),
            sweep: None,
            search: None,
            wavefront: None,
            output: None,
            cache: None,
            deterministic: true,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let c: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            return Err(Error::Config(format!(
                "unsupported config version {} (expected {CONFIG_VERSION})",
                self.version
            )));
        }
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(invalid("name", format!("must be a plain file stem, got {:?}", self.name)));
        }
        if !self.deterministic {
            return Err(invalid("deterministic", "every run is deterministic; the flag cannot be false"));
        }
        self.geometry.validate()?;
        self.model()?.rates.validate()?;
        if let Some(s) = &self.sweep {
            self.sweep_spec(s)?.validate()?;
            if let Some(b) = &s.behind {
                b.validate()?;
            }
        }
        if let Some(s) = &self.search {
            if !(s.min > 0.0 && s.min < s.max && s.max.is_finite()) {
                return Err(invalid("search", format!("needs 0 < min < max, got [{}, {}]", s.min, s.max)));
            }
        }
        if let Some(w) = &self.wavefront {
            if w.pixels == 0 || w.radial_samples < 2 || !(w.half_width > 0.0) {
                return Err(invalid("wavefront", "needs pixels >= 1, radial_samples >= 2, half_width > 0"));
            }
        }
        Ok(())
    }

    pub fn noise(&self) -> Result<f64> {
        match self.link.noise {
            Some(n) if n >= 0.0 && n.is_finite() => Ok(n),
            Some(n) => Err(invalid("noise", format!("must be finite and >= 0, got {n}"))),
            None => thermal_occupation(optical_frequency(self.link.wavelength), self.link.temperature),
        }
    }

    pub fn model(&self) -> Result<Model> {
        if !(self.link.wavelength > 0.0) || !self.link.wavelength.is_finite() {
            return Err(invalid("wavelength", format!("must be finite and > 0, got {}", self.link.wavelength)));
        }
        Ok(Model {
            wavelength: self.link.wavelength,
            noise: self.noise()?,
            rates: self.rates.params,
            mu: self.rates.mu,
        })
    }

    pub fn sweep_spec(&self, sweep: &SweepConfig) -> Result<SweepSpec> {
        Ok(SweepSpec {
            varied: sweep.varied,
            grid: sweep.grid,
            geometry: self.geometry,
            model: self.model()?,
            optimize_offset: sweep.optimize_offset,
        })
    }

    pub fn require_sweep(&self) -> Result<SweepConfig> {
        self.sweep.ok_or_else(|| Error::Config("a [sweep] section is required".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::Mu;

    fn sample() -> RunConfig {
        let mut c = RunConfig::new("t", Geometry::behind_bob(40e3, 40e3, 0.1, 0.1, 0.1).unwrap());
        c.sweep = Some(SweepConfig {
            varied: Varied::LBe,
            grid: Grid::log(500.0, 4e5, 120),
            optimize_offset: false,
            arago: false,
            behind: None,
        });
        c
    }

    #[test]
    fn round_trips() {
        let mut c = sample();
        c.rates.mu = MuChoice::Fixed(Mu::Finite(0.1 + 0.2));
        c.link.noise = Some(1e-3);
        let text = c.to_toml().unwrap();
        assert_eq!(RunConfig::from_toml(&text).unwrap(), c);
        c.rates.mu = MuChoice::Fixed(Mu::Infinite);
        assert_eq!(RunConfig::from_toml(&c.to_toml().unwrap()).unwrap(), c);
    }

    #[test]
    fn documented_example_parses() {
        let text = r#"
            version = 1
            name = "lb-vs-lbe"
            [geometry]
            scenario = "behind-bob"
            l_ab = 40000.0
            l_be = 40000.0
            r_a = 0.1
            r_b = 0.1
            r_e = 0.1
            [rates]
            beta = 1.0
            f_l = 1.1
            pulse_rate = 1e9
            mu = "optimized"
            [sweep]
            varied = "l-be"
            grid = { min = 500.0, max = 400000.0, count = 120, spacing = "log" }
        "#;
        let c = RunConfig::from_toml(text).unwrap();
        assert_eq!(c.model().unwrap().noise, 0.0);
        assert_eq!(c.sweep.unwrap().grid.count, 120);
    }

    #[test]
    fn rejects_bad_configs() {
        let mut c = sample();
        c.sweep.as_mut().unwrap().grid.count = 0;
        assert!(c.validate().is_err());
        let mut c = sample();
        c.version = 7;
        assert!(c.validate().is_err());
        assert!(RunConfig::from_toml("version = 1\nname = \"x\"\nbogus = 3").is_err());
    }
}
