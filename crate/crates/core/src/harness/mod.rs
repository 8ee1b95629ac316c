//! File-producing front end: run configurations, canned recipes, output
//! writers and the on-disk profile cache.
//!
//! [`run_task`] turns one [`RunConfig`] into one or more files under an
//! output directory and reports how many rows failed.

pub mod cache;
pub mod config;
pub mod output;
pub mod recipes;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channel::{Geometry, ProfileProvider, Scenario};
use crate::error::{invalid, Result};
use crate::rates::Objective;
use crate::sweep::{
    analytic_f1_f2, arago_prediction_curve, optimal_eve_distance, run_sweep, AnalyticPredictor, SweepRow, Varied,
};
use output::{csv_bytes, radial_samples, sweep_csv, write_atomic, CsvRow, Raster};

pub use cache::{CacheKey, DiskCache};
pub use config::RunConfig;
pub use recipes::{recipe, RecipeRun, RECIPES};

/// Environment variable naming the default cache directory.
pub const CACHE_ENV: &str = "FSO_KEYRATE_CACHE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Sweep,
    Wavefront,
    OptimalDistance,
    OptimizeD,
    BeforeBob,
}

/// A written file and the number of its rows that carry an error.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub path: PathBuf,
    pub error_rows: usize,
}

fn write_sweep(path: PathBuf, rows: &[SweepRow], config: &RunConfig) -> Result<Artifact> {
    let records: Vec<CsvRow> = rows.iter().map(|r| CsvRow::from_sweep(r, config.rates.mu)).collect();
    write_atomic(&path, &sweep_csv(&records)?)?;
    Ok(Artifact {
        path,
        error_rows: rows.iter().filter(|r| r.error.is_some()).count(),
    })
}

pub fn run_task(task: Task, config: &RunConfig, out_dir: &Path, provider: &dyn ProfileProvider) -> Result<Vec<Artifact>> {
    config.validate()?;
    let file = |suffix: &str, ext: &str| out_dir.join(format!("{}{suffix}.{ext}", config.name));
    match task {
        Task::Sweep => {
            let sweep = config.require_sweep()?;
            let spec = config.sweep_spec(&sweep)?;
            let rows = if sweep.arago {
                if sweep.varied != Varied::LBe {
                    return Err(invalid("sweep.varied", "the Arago model is swept over l-be only"));
                }
                arago_prediction_curve(&config.geometry, &spec.model, &sweep.grid.points()?)?
            } else {
                run_sweep(&spec, provider)?
            };
            Ok(vec![write_sweep(file("", "csv"), &rows, config)?])
        }
        Task::OptimizeD => {
            let sweep = config.require_sweep()?;
            let mut spec = config.sweep_spec(&sweep)?;
            spec.optimize_offset = true;
            let optimized = run_sweep(&spec, provider)?;
            spec.optimize_offset = false;
            let on_axis = run_sweep(&spec, provider)?;
            Ok(vec![
                write_sweep(file("", "csv"), &optimized, config)?,
                write_sweep(file("_on_axis", "csv"), &on_axis, config)?,
            ])
        }
        Task::BeforeBob => before_bob(config, provider, file("", "csv")),
        Task::OptimalDistance => optimal_distance(config, provider, &file),
        Task::Wavefront => wavefront(config, provider, &file),
    }
}

/// Before-Bob rows keyed by signed distance from Bob (negative in front of
/// him), followed by any behind-Bob rows, in increasing order.
fn before_bob(config: &RunConfig, provider: &dyn ProfileProvider, path: PathBuf) -> Result<Vec<Artifact>> {
    let sweep = config.require_sweep()?;
    if config.geometry.scenario != Scenario::BeforeBob || sweep.varied != Varied::LAe {
        return Err(invalid("sweep", "before-bob needs scenario = \"before-bob\" and varied = \"l-ae\""));
    }
    let mut rows = run_sweep(&config.sweep_spec(&sweep)?, provider)?;
    for r in &mut rows {
        r.parameter -= config.geometry.l_ab;
    }
    if let Some(behind) = sweep.behind {
        let g = config.geometry;
        let mut spec = config.sweep_spec(&sweep)?;
        spec.geometry = Geometry::behind_bob(g.l_ab, behind.min, g.r_a, g.r_b, g.r_e)?;
        spec.varied = Varied::LBe;
        spec.grid = behind;
        rows.extend(run_sweep(&spec, provider)?);
    }
    rows.sort_by(|a, b| a.parameter.total_cmp(&b.parameter));
    Ok(vec![write_sweep(path, &rows, config)?])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct DistanceSummary {
    l_ab: f64,
    l_be_opt: f64,
    value: f64,
    at_boundary: bool,
    predicted_l_be: f64,
    f2_peak_l_be: f64,
    /// Secondary minima as `l_be:value` pairs separated by spaces.
    secondary: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
struct CurvePoint {
    l_ab: f64,
    l_be: f64,
    value: f64,
}

fn optimal_distance(
    config: &RunConfig,
    provider: &dyn ProfileProvider,
    file: &dyn Fn(&str, &str) -> PathBuf,
) -> Result<Vec<Artifact>> {
    let model = config.model()?;
    let g = config.geometry;
    if g.scenario != Scenario::BehindBob {
        return Err(invalid("scenario", "optimal-distance needs Eve behind Bob"));
    }
    let links = match config.sweep {
        Some(s) if s.varied == Varied::LAb => s.grid.points()?,
        Some(_) => return Err(invalid("sweep.varied", "optimal-distance can only vary l-ab")),
        None => vec![g.l_ab],
    };
    let mut summary = Vec::new();
    let mut curve = Vec::new();
    for l_ab in links {
        let geom = Geometry { l_ab, ..g };
        let (range, objective) = match config.search {
            Some(s) => ((s.min, s.max), s.objective),
            None => ((l_ab / 50.0, l_ab * 10.0), Objective::LbMax),
        };
        let best = optimal_eve_distance(&geom, &model, provider, range, objective)?;
        let predictor = AnalyticPredictor::new(&model.beam(&geom)?, l_ab, g.r_b)?;
        let predicted = analytic_f1_f2(&predictor, 0)?;
        summary.push(DistanceSummary {
            l_ab,
            l_be_opt: best.l_be,
            value: best.value,
            at_boundary: best.at_boundary,
            predicted_l_be: predicted.predicted,
            f2_peak_l_be: predicted.argmax_f2,
            secondary: best
                .secondary
                .iter()
                .map(|(l, v)| format!("{l}:{v}"))
                .collect::<Vec<_>>()
                .join(" "),
        });
        curve.extend(best.curve.iter().map(|&(l_be, value)| CurvePoint { l_ab, l_be, value }));
    }
    let (main, curve_path) = (file("", "csv"), file("_curve", "csv"));
    write_atomic(&main, &csv_bytes(&summary)?)?;
    write_atomic(&curve_path, &csv_bytes(&curve)?)?;
    Ok(vec![
        Artifact {
            path: main,
            error_rows: 0,
        },
        Artifact {
            path: curve_path,
            error_rows: 0,
        },
    ])
}

fn wavefront(
    config: &RunConfig,
    provider: &dyn ProfileProvider,
    file: &dyn Fn(&str, &str) -> PathBuf,
) -> Result<Vec<Artifact>> {
    let g = config.geometry;
    if g.scenario != Scenario::BehindBob || g.offset != 0.0 {
        return Err(invalid("geometry", "wavefront maps need Eve behind Bob on the axis"));
    }
    let w = config.wavefront.unwrap_or_default();
    let model = config.model()?;
    let beam = model.beam(&g)?;
    let source = g.source(beam)?;
    // the corners of the raster sit at half_width * sqrt(2)
    let reach = w.half_width * std::f64::consts::SQRT_2;
    let profile = provider.profile(&source, g.l_be, reach)?;
    let raster = Raster::from_profile(&profile, w.pixels, w.half_width);
    let (pgm, scale, radial) = (file("", "pgm"), file("", "pgm.txt"), file("_radial", "csv"));
    write_atomic(&pgm, &raster.to_pgm())?;
    write_atomic(&scale, raster.scale_text(g.l_ab, g.l_be, beam.wavelength).as_bytes())?;
    write_atomic(&radial, &csv_bytes(&radial_samples(&profile, reach, w.radial_samples))?)?;
    Ok([pgm, scale, radial]
        .into_iter()
        .map(|path| Artifact { path, error_rows: 0 })
        .collect())
}
