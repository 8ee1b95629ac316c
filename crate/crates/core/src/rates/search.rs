//! Choice of the input photon number `mu` that maximizes a rate.

use serde::{Deserialize, Serialize};

use super::{lb_direct, lb_reverse, skr_cv_ccq, skr_ds_bb84, Mu, RateInputs, RateParams};
use crate::channel::ChannelParams;
use crate::error::Result;
use crate::optimize::{argmax, golden_max, logspace};

pub const MU_GRID_MIN: f64 = 1e-4;
pub const MU_GRID_MAX: f64 = 1e8;
const POINTS_PER_DECADE: usize = 20;
const MU_RELATIVE_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    LbDirect,
    LbReverse,
    LbMax,
    SkrCv,
    SkrBb84,
}

impl Objective {
    pub fn evaluate(self, inputs: &RateInputs) -> Result<f64> {
        match self {
            Objective::LbDirect => lb_direct(inputs),
            Objective::LbReverse => lb_reverse(inputs),
            Objective::LbMax => Ok(lb_direct(inputs)?.max(lb_reverse(inputs)?)),
            Objective::SkrCv => skr_cv_ccq(inputs),
            Objective::SkrBb84 => skr_ds_bb84(inputs),
        }
    }

    fn is_bound(self) -> bool {
        matches!(self, Objective::LbDirect | Objective::LbReverse | Objective::LbMax)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuOptimum {
    pub mu: Mu,
    pub value: f64,
    /// The objective was zero on the whole grid.
    pub degenerate: bool,
    /// The maximizer sits on an end of the search grid.
    pub at_boundary: bool,
}

/// Maximizes `objective` over `mu`.
///
/// With perfect reconciliation the bounds grow monotonically in `mu`, so the
/// answer is the infinite-power limit. Otherwise a log grid over
/// `[1e-4, 1e8]` brackets the maximizer and golden-section search in `ln mu`
/// refines it.
pub fn optimize_mu(channel: &ChannelParams, params: &RateParams, objective: Objective) -> Result<MuOptimum> {
    let base = RateInputs::new(*channel, Mu::Infinite, *params)?;
    if params.beta == 1.0 && objective.is_bound() {
        return Ok(MuOptimum {
            mu: Mu::Infinite,
            value: objective.evaluate(&base)?,
            degenerate: false,
            at_boundary: false,
        });
    }
    let decades = (MU_GRID_MAX / MU_GRID_MIN).log10().round() as usize;
    let grid = logspace(MU_GRID_MIN, MU_GRID_MAX, decades * POINTS_PER_DECADE + 1);
    let values: Vec<f64> = grid
        .iter()
        .map(|&mu| objective.evaluate(&base.with_mu(Mu::Finite(mu))))
        .collect::<Result<_>>()?;
    let best = argmax(&values).unwrap_or(0);
    if !(values[best] > 0.0) {
        return Ok(MuOptimum {
            mu: Mu::Finite(MU_GRID_MIN),
            value: 0.0,
            degenerate: true,
            at_boundary: true,
        });
    }
    let lo = grid[best.saturating_sub(1)].ln();
    let hi = grid[(best + 1).min(grid.len() - 1)].ln();
    let eval = |t: f64| {
        objective
            .evaluate(&base.with_mu(Mu::Finite(t.exp())))
            .unwrap_or(f64::NEG_INFINITY)
    };
    let (t, v) = golden_max(eval, lo, hi, MU_RELATIVE_TOLERANCE);
    let (mu, value) = if v > values[best] { (t.exp(), v) } else { (grid[best], values[best]) };
    Ok(MuOptimum {
        mu: Mu::Finite(mu),
        value,
        degenerate: false,
        at_boundary: best == 0 || best == grid.len() - 1,
    })
}
