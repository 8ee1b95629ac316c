//! Closed-form predictions for Eve's field near the axis.
//!
//! For small `l` the Bessel factor is close to 1 and the propagation integral
//! over the cropped beam has an elementary antiderivative. Writing
//! `A = -1/W^2`, `B = k/(2 L_BE)`, `C = k/(2 R)` (beam quantities at Bob's
//! plane) and `D = 9 W^2` for the squared truncation radius, the on-axis
//! magnitude is `E0 W0/W f1 f2` with
//!
//! ```text
//! f1 = 1 / sqrt((A/B)^2 + (1 - C/B)^2)
//! f2 = | e^{A D} e^{i(B-C) D} - e^{A r_b^2} e^{i(B-C) r_b^2} |
//! ```
//!
//! `f1` peaks at `L_BE = L_AB`; `f2` peaks wherever `(B - C)(D - r_b^2)` is
//! an odd multiple of pi.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Model, SweepRow};
use crate::beam::BeamParams;
use crate::channel::{ChannelParams, Geometry, Scenario};
use crate::diffraction::arago_relative_amplitude;
use crate::error::{invalid, Error, Result};
use crate::optimize::{argmax, golden_max, logspace};
use crate::quadrature::{integrate_edges, panel_edges};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticPredictor {
    pub a: f64,
    pub c: f64,
    /// Squared truncation radius, `9 W^2`.
    pub d: f64,
    pub wavenumber: f64,
    pub l_ab: f64,
    pub r_b: f64,
    /// `E0 W0 / W` at Bob's plane.
    pub scale: f64,
}

impl AnalyticPredictor {
    pub fn new(beam: &BeamParams, l_ab: f64, r_b: f64) -> Result<Self> {
        if !(l_ab > 0.0) || !l_ab.is_finite() {
            return Err(invalid("l_ab", format!("must be finite and > 0, got {l_ab}")));
        }
        if !(r_b > 0.0) || !r_b.is_finite() {
            return Err(invalid("r_b", format!("must be finite and > 0, got {r_b}")));
        }
        let plane = beam.plane_params(l_ab)?;
        let w2 = plane.spot_size * plane.spot_size;
        let k = beam.wavenumber();
        let p = Self {
            a: -1.0 / w2,
            c: 0.5 * k * plane.curvature.inverse(),
            d: 9.0 * w2,
            wavenumber: k,
            l_ab,
            r_b,
            scale: beam.field_peak * beam.waist_radius / plane.spot_size,
        };
        let rb2 = r_b * r_b;
        if p.d <= rb2 {
            return Err(Error::DegenerateGeometry { limit: p.d, rb2 });
        }
        Ok(p)
    }

    pub fn b(&self, l_be: f64) -> f64 {
        0.5 * self.wavenumber / l_be
    }

    pub fn f1(&self, l_be: f64) -> f64 {
        let b = self.b(l_be);
        ((self.a / b).powi(2) + (1.0 - self.c / b).powi(2)).sqrt().recip()
    }

    pub fn f2(&self, l_be: f64) -> f64 {
        let phase = self.b(l_be) - self.c;
        let rb2 = self.r_b * self.r_b;
        let term = |x: f64| Complex64::from_polar((self.a * x).exp(), phase * x);
        (term(self.d) - term(rb2)).norm()
    }

    /// Predicted on-axis field magnitude at Eve.
    pub fn magnitude(&self, l_be: f64) -> f64 {
        self.scale * self.f1(l_be) * self.f2(l_be)
    }

    /// Distance maximizing `f2` on branch `n`.
    pub fn f2_peak(&self, n: u32) -> f64 {
        let wavelength = 2.0 * PI / self.wavenumber;
        let inv = 2.0 * self.c / self.wavenumber + wavelength * (2 * n + 1) as f64 / (self.d - self.r_b * self.r_b);
        inv.recip()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictorOutput {
    pub argmax_f1: f64,
    pub argmax_f2: f64,
    /// Distance maximizing the product `f1 f2`, which is where Eve's on-axis
    /// field, and so her advantage, is largest.
    pub predicted: f64,
    pub magnitude: f64,
}

/// Maximizers of `f1`, of `f2` on branch `n`, and of their product.
pub fn analytic_f1_f2(pred: &AnalyticPredictor, n: u32) -> Result<PredictorOutput> {
    let argmax_f2 = pred.f2_peak(n);
    let product = |t: f64| {
        let l = t.exp();
        pred.f1(l) * pred.f2(l)
    };
    let grid = logspace(pred.l_ab / 100.0, pred.l_ab * 100.0, 4001);
    let values: Vec<f64> = grid.iter().map(|&l| product(l.ln())).collect();
    let best = argmax(&values).ok_or_else(|| invalid("l_ab", "predictor is undefined on the whole range"))?;
    let lo = grid[best.saturating_sub(1)].ln();
    let hi = grid[(best + 1).min(grid.len() - 1)].ln();
    let (t, _) = golden_max(product, lo, hi, 1e-9);
    let predicted = t.exp();
    Ok(PredictorOutput {
        argmax_f1: pred.l_ab,
        argmax_f2,
        predicted,
        magnitude: pred.magnitude(predicted),
    })
}

/// Eve's collected power when her field is taken to be the undisturbed beam
/// times the relative amplitude behind Bob's aperture seen as an obstacle.
fn arago_power(geom: &Geometry, beam: &BeamParams) -> Result<f64> {
    let plane = beam.plane_params(geom.l_ae())?;
    let lambda = beam.wavelength;
    let f = |l: f64| {
        let u = beam.field_at_plane(&plane, l).norm();
        let rel = arago_relative_amplitude(geom.r_b, geom.l_be, l, lambda).unwrap_or(f64::NAN);
        (u * rel).powi(2) * 2.0 * PI * l
    };
    // the Bessel factor oscillates with period about lambda l_be / r_b
    let width = (lambda * geom.l_be / (4.0 * geom.r_b)).min(geom.r_e / 8.0);
    let edges = panel_edges(0.0, geom.r_e, &[], |_| width);
    Ok(integrate_edges(&f, &edges).value)
}

/// Rates along `l_be_grid` with Eve's power from the Arago model instead of
/// the full diffraction integral.
///
/// The model is not energy-consistent: for short links the undisturbed beam
/// can put more power on Eve's disk than Bob's aperture lets past. `kappa` is
/// then capped at 1 while `p_eve` keeps the predicted value.
pub fn arago_prediction_curve(geom: &Geometry, model: &Model, l_be_grid: &[f64]) -> Result<Vec<SweepRow>> {
    if geom.scenario != Scenario::BehindBob || geom.offset != 0.0 {
        return Err(invalid("geometry", "the Arago model needs Eve behind Bob on the axis"));
    }
    let beam = model.beam(geom)?;
    let eta = beam.encircled_power(geom.l_ab, geom.r_b)? / beam.total_power();
    Ok(l_be_grid
        .par_iter()
        .map(|&l_be| {
            let g = match geom.with_l_be(l_be) {
                Ok(g) => g,
                Err(e) => return SweepRow::failed(l_be, *geom, e),
            };
            let row = || -> Result<SweepRow> {
                let p_eve = arago_power(&g, &beam)? / beam.total_power();
                let kappa = if eta < 1.0 { (p_eve / (1.0 - eta)).min(1.0) } else { 0.0 };
                let channel = ChannelParams {
                    p_eve,
                    ..ChannelParams::new(eta, kappa, model.noise)?
                };
                Ok(SweepRow {
                    parameter: l_be,
                    geometry: g,
                    channel: Some(channel),
                    report: Some(model.report(&channel)?),
                    offset: None,
                    error: None,
                })
            };
            row().unwrap_or_else(|e| SweepRow::failed(l_be, g, e))
        })
        .collect())
}
