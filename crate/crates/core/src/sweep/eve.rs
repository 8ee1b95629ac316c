//! Eve's best position behind Bob: distance along the axis, then offset.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Model;
use crate::beam::BeamParams;
use crate::channel::{Geometry, ProfileProvider, Scenario};
use crate::error::{invalid, Result};
use crate::optimize::{argmin, golden_min, linspace, local_minima, logspace};
use crate::rates::Objective;

/// Coarse grid size for the distance search.
pub const DISTANCE_GRID_POINTS: usize = 240;
const OFFSET_GRID_POINTS: usize = 41;
const OFFSET_TOLERANCE: f64 = 1e-3;
const SECONDARY_RATIO: f64 = 1.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EveDistance {
    pub l_be: f64,
    pub value: f64,
    /// Other local minima of the coarse curve within 5% of the best value.
    pub secondary: Vec<(f64, f64)>,
    /// The best grid point is an end of the search range.
    pub at_boundary: bool,
    /// The coarse curve `(l_be, value)`.
    pub curve: Vec<(f64, f64)>,
}

fn require_behind(geom: &Geometry) -> Result<()> {
    if geom.scenario != Scenario::BehindBob {
        return Err(invalid("scenario", "Eve's position search assumes Eve behind Bob"));
    }
    Ok(())
}

/// Distance behind Bob that minimizes `objective`, searched over
/// `[range.0, range.1]`.
///
/// The curve has interference ripples at short range, so the whole range is
/// scanned on a log grid before the best cell is refined by golden section.
pub fn optimal_eve_distance(
    geom: &Geometry,
    model: &Model,
    provider: &dyn ProfileProvider,
    range: (f64, f64),
    objective: Objective,
) -> Result<EveDistance> {
    require_behind(geom)?;
    let (lo, hi) = range;
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(invalid("range", format!("needs 0 < min < max, got [{lo}, {hi}]")));
    }
    let coverage = geom.diffracted_collector()?.reach();
    let eval = |l_be: f64| -> Result<f64> {
        let g = geom.with_l_be(l_be)?;
        model.objective(&model.channel(&g, provider, coverage)?, objective)
    };
    let grid = logspace(lo, hi, DISTANCE_GRID_POINTS);
    let values: Vec<f64> = grid.par_iter().map(|&l| eval(l)).collect::<Result<_>>()?;
    let best = argmin(&values).ok_or_else(|| invalid("objective", "no finite value on the search grid"))?;
    let cell_lo = grid[best.saturating_sub(1)].ln();
    let cell_hi = grid[(best + 1).min(grid.len() - 1)].ln();
    let (t, v) = golden_min(|t| eval(t.exp()).unwrap_or(f64::INFINITY), cell_lo, cell_hi, 1e-4);
    let (l_be, value) = if v < values[best] { (t.exp(), v) } else { (grid[best], values[best]) };
    let threshold = value + (SECONDARY_RATIO - 1.0) * value.abs();
    let secondary = local_minima(&values)
        .into_iter()
        .filter(|&i| i != best && values[i] <= threshold)
        .map(|i| (grid[i], values[i]))
        .collect();
    Ok(EveDistance {
        l_be,
        value,
        secondary,
        at_boundary: best == 0 || best == grid.len() - 1,
        curve: grid.into_iter().zip(values).collect(),
    })
}

/// Largest offset worth searching: the cropped beam is negligible beyond
/// three spot sizes past Bob's rim.
pub fn offset_search_limit(geom: &Geometry, beam: &BeamParams) -> f64 {
    geom.r_b + 3.0 * beam.spot_size(geom.l_ab)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EveOffset {
    pub offset: f64,
    pub value: f64,
    pub on_axis_value: f64,
}

/// Offset from the axis that minimizes `objective` at Eve's current
/// distance. All candidates share one profile covering the whole search
/// range (at least `min_coverage`).
pub fn optimize_eve_offset(
    geom: &Geometry,
    model: &Model,
    provider: &dyn ProfileProvider,
    objective: Objective,
    min_coverage: f64,
) -> Result<EveOffset> {
    require_behind(geom)?;
    let beam = model.beam(geom)?;
    let d_max = offset_search_limit(geom, &beam);
    let coverage = (d_max + geom.r_e).max(min_coverage);
    let eval = |d: f64| -> Result<f64> {
        let g = geom.with_offset(d)?;
        model.objective(&model.channel(&g, provider, coverage)?, objective)
    };
    let mut grid = linspace(0.0, d_max, OFFSET_GRID_POINTS);
    grid.push(geom.r_b);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let values: Vec<f64> = grid.par_iter().map(|&d| eval(d)).collect::<Result<_>>()?;
    let on_axis_value = values[0];

    // golden refinement from every coarse local minimum, endpoints included
    let mut padded = Vec::with_capacity(values.len() + 2);
    padded.push(f64::INFINITY);
    padded.extend_from_slice(&values);
    padded.push(f64::INFINITY);
    let mut starts: Vec<usize> = local_minima(&padded).into_iter().map(|i| i - 1).collect();
    starts.sort_unstable();
    let mut best = (0.0, on_axis_value);
    for i in starts {
        let a = grid[i.saturating_sub(1)];
        let b = grid[(i + 1).min(grid.len() - 1)];
        let (mut d, mut v) = (grid[i], values[i]);
        if b - a > OFFSET_TOLERANCE {
            let (gd, gv) = golden_min(|d| eval(d).unwrap_or(f64::INFINITY), a, b, OFFSET_TOLERANCE);
            if gv < v {
                (d, v) = (gd, gv);
            }
        }
        // ties go to the smaller offset
        if v < best.1 - 1e-12 * best.1.abs().max(1e-300) {
            best = (d, v);
        }
    }
    Ok(EveOffset {
        offset: best.0,
        value: best.1,
        on_axis_value,
    })
}
