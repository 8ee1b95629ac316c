//! Parameter sweeps and searches over the link geometry.
//!
//! A [`Model`] fixes everything except the geometry: wavelength, background
//! noise, protocol settings and how `mu` is chosen. [`run_sweep`] evaluates
//! it along one varied parameter; [`optimal_eve_distance`] and
//! [`optimize_eve_offset`] search for Eve's best position; [`predict`] holds
//! the closed-form small-radius predictions.

mod cache;
mod eve;
pub mod predict;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::beam::BeamParams;
use crate::channel::{channel_params_with, ChannelParams, Geometry, ProfileProvider, Scenario};
use crate::error::{invalid, Result};
use crate::optimize::{linspace, logspace};
use crate::rates::{optimize_mu, optimized_report, rate_report, Mu, Objective, RateInputs, RateParams, RateReport};

pub use cache::MemoryCache;
pub use eve::{optimal_eve_distance, optimize_eve_offset, offset_search_limit, EveDistance, EveOffset, DISTANCE_GRID_POINTS};
pub use predict::{analytic_f1_f2, arago_prediction_curve, AnalyticPredictor, PredictorOutput};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MuChoice {
    Fixed(Mu),
    /// Each rate at its own optimal `mu`.
    Optimized,
}

/// Everything about a link except its geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub wavelength: f64,
    /// Background photons per mode.
    pub noise: f64,
    pub rates: RateParams,
    pub mu: MuChoice,
}

impl Default for Model {
    fn default() -> Self {
        Self {
            wavelength: 1550e-9,
            noise: 0.0,
            rates: RateParams::default(),
            mu: MuChoice::Optimized,
        }
    }
}

impl Model {
    /// Transmitted beam for `geom`: waist at Alice's aperture, unit power.
    pub fn beam(&self, geom: &Geometry) -> Result<BeamParams> {
        BeamParams::normalized(self.wavelength, geom.r_a)
    }

    pub fn channel(&self, geom: &Geometry, provider: &dyn ProfileProvider, min_coverage: f64) -> Result<ChannelParams> {
        channel_params_with(geom, &self.beam(geom)?, self.noise, provider, min_coverage)
    }

    pub fn report(&self, channel: &ChannelParams) -> Result<RateReport> {
        match self.mu {
            MuChoice::Fixed(mu) => rate_report(&RateInputs::new(*channel, mu, self.rates)?),
            MuChoice::Optimized => optimized_report(channel, &self.rates),
        }
    }

    /// A single rate, at fixed or optimized `mu`.
    pub fn objective(&self, channel: &ChannelParams, objective: Objective) -> Result<f64> {
        match self.mu {
            MuChoice::Fixed(mu) => objective.evaluate(&RateInputs::new(*channel, mu, self.rates)?),
            MuChoice::Optimized => Ok(optimize_mu(channel, &self.rates, objective)?.value),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Varied {
    LBe,
    LAe,
    Mu,
    Offset,
    LAb,
    /// Bob's distance with Eve kept at the same distance behind him.
    LAbRefocused,
    Waist,
    REve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    Linear,
    #[default]
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Grid {
    pub fn linear(min: f64, max: f64, count: usize) -> Self {
        Self {
            min,
            max,
            count,
            spacing: Spacing::Linear,
        }
    }

    pub fn log(min: f64, max: f64, count: usize) -> Self {
        Self {
            min,
            max,
            count,
            spacing: Spacing::Log,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(invalid("grid.count", format!("needs at least 2 points, got {}", self.count)));
        }
        if !(self.min < self.max) || !self.min.is_finite() || !self.max.is_finite() {
            return Err(invalid("grid", format!("needs finite min < max, got [{}, {}]", self.min, self.max)));
        }
        if self.spacing == Spacing::Log && !(self.min > 0.0) {
            return Err(invalid("grid.min", format!("log spacing needs min > 0, got {}", self.min)));
        }
        Ok(())
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        self.validate()?;
        Ok(match self.spacing {
            Spacing::Linear => linspace(self.min, self.max, self.count),
            Spacing::Log => logspace(self.min, self.max, self.count),
        })
    }
}

/// One parameter varied over a grid, everything else fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub varied: Varied,
    pub grid: Grid,
    pub geometry: Geometry,
    pub model: Model,
    /// Let Eve pick her best offset at every row.
    #[serde(default)]
    pub optimize_offset: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if self.varied == Varied::Mu && self.model.mu == MuChoice::Optimized {
            return Err(invalid("mu", "cannot sweep mu while also optimizing it"));
        }
        if self.varied == Varied::Offset && self.optimize_offset {
            return Err(invalid("offset", "cannot sweep the offset while also optimizing it"));
        }
        if self.varied == Varied::LAe && self.geometry.scenario == Scenario::BehindBob && self.grid.min <= self.geometry.l_ab
        {
            return Err(invalid("grid.min", "Eve behind Bob needs l_ae > l_ab"));
        }
        if self.varied == Varied::LAbRefocused && self.geometry.scenario == Scenario::BeforeBob {
            return Err(invalid("varied", "the refocused link places Eve behind Bob"));
        }
        if self.optimize_offset && self.geometry.scenario == Scenario::BeforeBob {
            return Err(invalid("optimize_offset", "Eve before Bob is modeled on axis only"));
        }
        Ok(())
    }

    /// Geometry and model at one grid value.
    pub fn point(&self, value: f64) -> Result<(Geometry, Model)> {
        let mut g = self.geometry;
        let mut m = self.model;
        match self.varied {
            Varied::LBe => g.l_be = value,
            Varied::LAe => {
                g.l_be = match g.scenario {
                    Scenario::BehindBob => value - g.l_ab,
                    Scenario::BeforeBob => g.l_ab - value,
                }
            }
            Varied::Mu => m.mu = MuChoice::Fixed(Mu::Finite(value)),
            Varied::Offset => g.offset = value,
            Varied::LAb => g.l_ab = value,
            Varied::LAbRefocused => {
                g.l_ab = value;
                g.l_be = value;
            }
            Varied::Waist => g.r_a = value,
            Varied::REve => g.r_e = value,
        }
        g.validate()?;
        Ok((g, m))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub parameter: f64,
    pub geometry: Geometry,
    pub channel: Option<ChannelParams>,
    pub report: Option<RateReport>,
    /// Eve's chosen offset when it was optimized.
    pub offset: Option<f64>,
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(parameter: f64, geometry: Geometry, error: impl ToString) -> Self {
        Self {
            parameter,
            geometry,
            channel: None,
            report: None,
            offset: None,
            error: Some(error.to_string()),
        }
    }
}

/// Evaluates `spec` at every grid point, in parallel. Rows come back in grid
/// order; a failing row carries its error instead of aborting the sweep.
pub fn run_sweep(spec: &SweepSpec, provider: &dyn ProfileProvider) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let points = spec.grid.points()?;
    // request every profile out to the widest reach on the grid, so rows that
    // share a source plane share a profile
    let coverage = points
        .iter()
        .filter_map(|&v| spec.point(v).ok())
        .filter_map(|(g, _)| {
            let reach = g.diffracted_collector().ok()?.reach();
            Some(if spec.optimize_offset {
                let beam = spec.model.beam(&g).ok()?;
                offset_search_limit(&g, &beam) + g.r_e
            } else {
                reach
            })
        })
        .fold(0.0, f64::max);
    Ok(points
        .par_iter()
        .map(|&value| {
            let (geom, model) = match spec.point(value) {
                Ok(p) => p,
                Err(e) => return SweepRow::failed(value, spec.geometry, e),
            };
            let row = || -> Result<SweepRow> {
                let (geom, offset) = if spec.optimize_offset {
                    let best = optimize_eve_offset(&geom, &model, provider, Objective::LbMax, coverage)?;
                    (geom.with_offset(best.offset)?, Some(best.offset))
                } else {
                    (geom, None)
                };
                let channel = model.channel(&geom, provider, coverage)?;
                let report = model.report(&channel)?;
                Ok(SweepRow {
                    parameter: value,
                    geometry: geom,
                    channel: Some(channel),
                    report: Some(report),
                    offset,
                    error: None,
                })
            };
            row().unwrap_or_else(|e| SweepRow::failed(value, geom, e))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Uncached;

    fn spec(varied: Varied, grid: Grid) -> SweepSpec {
        SweepSpec {
            varied,
            grid,
            geometry: Geometry::behind_bob(20e3, 20e3, 0.1, 0.1, 0.1).unwrap(),
            model: Model::default(),
            optimize_offset: false,
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(spec(Varied::LBe, Grid::log(1e3, 1e4, 1)).validate().is_err());
        assert!(spec(Varied::LBe, Grid::log(1e4, 1e3, 5)).validate().is_err());
        assert!(spec(Varied::LBe, Grid::log(0.0, 1e3, 5)).validate().is_err());
        assert!(spec(Varied::Mu, Grid::log(1.0, 10.0, 5)).validate().is_err());
        let mut s = spec(Varied::Offset, Grid::linear(0.0, 0.3, 4));
        s.optimize_offset = true;
        assert!(s.validate().is_err());
    }

    #[test]
    fn mu_sweep_shares_one_profile() {
        let mut s = spec(Varied::Mu, Grid::log(0.1, 100.0, 6));
        s.model.mu = MuChoice::Fixed(Mu::Infinite);
        let cache = MemoryCache::new(Uncached::default());
        let rows = run_sweep(&s, &cache).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(cache.misses(), 1);
        assert!(rows.iter().all(|r| r.error.is_none()));
        // the lower bound grows with input power
        let lb: Vec<f64> = rows.iter().map(|r| r.report.unwrap().lb).collect();
        assert!(lb.windows(2).all(|w| w[1] > w[0]), "{lb:?}");
    }

    #[test]
    fn bad_rows_do_not_abort() {
        let mut s = spec(Varied::LAe, Grid::linear(10e3, 30e3, 3));
        s.geometry = Geometry::before_bob(20e3, 10e3, 0.1, 0.1, 0.1).unwrap();
        let rows = run_sweep(&s, &Uncached::default()).unwrap();
        assert!(rows[0].error.is_none());
        assert!(rows[1].error.is_some() && rows[2].error.is_some());
    }
}
