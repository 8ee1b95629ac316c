//! Key-rate lower bounds, an upper bound, and protocol rates for the
//! restricted-eavesdropper wiretap channel `(eta, kappa, n_e)`.
//!
//! The lower bounds come from a purified Gaussian network on five modes:
//!
//! ```text
//! A ──TMSV(mu)── S ──┐            ┌── B (Bob)
//!                    BS(eta)──────┤
//! F ──TMSV(n_e)─ E1 ─┘            └── L ──┐         ┌── E (Eve)
//!                                         BS(kappa)─┤
//!                              vacuum V0 ─┘         └── residual
//! ```
//!
//! Eve holds only mode `E`. All rates are in bits per mode, except the
//! protocol rates which are multiplied by the pulse rate.

pub mod gaussian;
mod protocols;
mod search;

use std::f64::consts::LOG2_E;

use serde::{Deserialize, Serialize};

use crate::channel::ChannelParams;
use crate::error::{invalid, Error, Result};
use gaussian::{GaussianState, PHYSICALITY_TOLERANCE};

pub use protocols::{skr_cv_ccq, skr_ds_bb84, Bb84Options, EveCopyModel};
pub use search::{optimize_mu, MuOptimum, Objective, MU_GRID_MAX, MU_GRID_MIN};

/// Input photon number per mode, with `Infinite` for the unbounded-power
/// limit, which is evaluated analytically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mu {
    Finite(f64),
    Infinite,
}

impl Mu {
    pub fn value(self) -> f64 {
        match self {
            Mu::Finite(m) => m,
            Mu::Infinite => f64::INFINITY,
        }
    }
}

/// Protocol-level settings shared by every rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateParams {
    /// Reconciliation efficiency in (0, 1].
    pub beta: f64,
    /// BB84 error-correction inefficiency, >= 1.
    pub f_l: f64,
    /// States per second.
    pub pulse_rate: f64,
    #[serde(default)]
    pub bb84: Bb84Options,
}

impl Default for RateParams {
    fn default() -> Self {
        Self {
            beta: 1.0,
            f_l: 1.1,
            pulse_rate: 1e9,
            bb84: Bb84Options::default(),
        }
    }
}

impl RateParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(invalid("beta", format!("must lie in (0, 1], got {}", self.beta)));
        }
        if !(self.f_l >= 1.0) || !self.f_l.is_finite() {
            return Err(invalid("f_l", format!("must be finite and >= 1, got {}", self.f_l)));
        }
        if !(self.pulse_rate > 0.0) || !self.pulse_rate.is_finite() {
            return Err(invalid("pulse_rate", format!("must be finite and > 0, got {}", self.pulse_rate)));
        }
        self.bb84.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateInputs {
    pub channel: ChannelParams,
    pub mu: Mu,
    pub params: RateParams,
}

impl RateInputs {
    pub fn new(channel: ChannelParams, mu: Mu, params: RateParams) -> Result<Self> {
        let inputs = Self { channel, mu, params };
        inputs.validate()?;
        Ok(inputs)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        let c = &self.channel;
        ChannelParams::new(c.eta, c.kappa, c.n_e)?;
        if let Mu::Finite(m) = self.mu {
            if !(m > 0.0) || !m.is_finite() {
                return Err(invalid("mu", format!("must be finite and > 0, got {m}")));
            }
        }
        Ok(())
    }

    pub fn with_mu(self, mu: Mu) -> Self {
        Self { mu, ..self }
    }
}

/// `g(x) = (x + 1) log2(x + 1) - x log2(x)`, the entropy in bits of a thermal
/// state with mean photon number `x`.
pub fn g_entropy(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(invalid("x", format!("must be >= 0, got {x}")));
    }
    Ok(g(x))
}

pub(crate) fn g(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x.is_infinite() {
        f64::INFINITY
    } else if x > 1e12 {
        // log2(x) + log2(e) + O(1/x)
        x.log2() + LOG2_E + LOG2_E / (2.0 * x)
    } else {
        // (x + 1) log2(x + 1) - x log2(x) regrouped to avoid cancellation
        (x.ln_1p() + x * x.recip().ln_1p()) * LOG2_E
    }
}

/// Symplectic spectra of Eve's mode before and after Bob's heterodyne.
#[derive(Debug, Clone, PartialEq)]
pub struct EveSpectra {
    pub unconditional: Vec<f64>,
    pub conditional: Vec<f64>,
}

impl EveSpectra {
    pub fn entropy(&self) -> f64 {
        spectrum_entropy(&self.unconditional)
    }

    pub fn conditional_entropy(&self) -> f64 {
        spectrum_entropy(&self.conditional)
    }
}

fn spectrum_entropy(nus: &[f64]) -> f64 {
    nus.iter().map(|&nu| g(((nu - 1.0) / 2.0).max(0.0))).sum()
}

const MODE_B: usize = 1;
const MODE_E: usize = 3;

/// Builds the five-mode network and returns the full state, with Bob in mode
/// 1 and Eve in mode 3.
pub fn network_state(channel: &ChannelParams, mu: f64) -> Result<GaussianState> {
    let source = GaussianState::tmsv(mu)?;
    let environment = GaussianState::tmsv(channel.n_e)?;
    let state = source.tensor(&environment).tensor(&GaussianState::vacuum(1));
    // modes: 0 A, 1 S, 2 F, 3 E1, 4 V0
    let state = state.beamsplitter(1, 3, channel.eta)?;
    state.beamsplitter(3, 4, channel.kappa)
}

/// Eve's spectra at finite `mu`.
pub fn eve_spectra(channel: &ChannelParams, mu: f64) -> Result<EveSpectra> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(invalid("mu", format!("must be finite and > 0, got {mu}")));
    }
    let state = network_state(channel, mu)?;
    let eve = state.reduced(&[MODE_E])?;
    let conditioned = state.heterodyne(&[MODE_E], &[MODE_B])?;
    eve.check_physical(PHYSICALITY_TOLERANCE)?;
    conditioned.check_physical(PHYSICALITY_TOLERANCE)?;
    Ok(EveSpectra {
        unconditional: eve.symplectic_eigenvalues(),
        conditional: conditioned.symplectic_eigenvalues(),
    })
}

/// Eve's conditional mean photon number as `mu` grows without bound.
fn conditional_photons_limit(c: &ChannelParams) -> f64 {
    let (eta, kappa, n) = (c.eta, c.kappa, c.n_e);
    kappa * (1.0 - eta) * ((1.0 + eta) * n + 1.0) / eta + kappa * eta * n
}

fn leak(c: &ChannelParams) -> f64 {
    c.kappa * (1.0 - c.eta)
}

/// Direct-reconciliation lower bound.
pub fn lb_direct(inputs: &RateInputs) -> Result<f64> {
    inputs.validate()?;
    let c = &inputs.channel;
    let beta = inputs.params.beta;
    let (eta, n) = (c.eta, c.n_e);
    let tail = -beta * g(n * (1.0 - eta)) + g(n * (1.0 - eta * c.kappa));
    let value = match inputs.mu {
        Mu::Finite(mu) => {
            let s = eve_spectra(c, mu)?;
            beta * g(n * (1.0 - eta) + eta * mu) - s.entropy() + tail
        }
        Mu::Infinite if leak(c) == 0.0 => f64::INFINITY,
        Mu::Infinite if beta < 1.0 || eta == 0.0 => 0.0,
        Mu::Infinite => (eta / leak(c)).log2() - g(n * (1.0 - eta)) + g(n * (1.0 - eta * c.kappa)),
    };
    Ok(value.max(0.0))
}

/// Bob's conditional photon number given Alice's mode, written without the
/// cancellation in `mu - eta mu (1 + mu) / (1 + n - n eta + eta mu)`.
fn bob_conditional(eta: f64, n: f64, mu: f64) -> f64 {
    mu * (1.0 - eta) * (1.0 + n) / (1.0 + n * (1.0 - eta) + eta * mu)
}

/// Reverse-reconciliation lower bound.
pub fn lb_reverse(inputs: &RateInputs) -> Result<f64> {
    inputs.validate()?;
    let c = &inputs.channel;
    let beta = inputs.params.beta;
    let value = match inputs.mu {
        Mu::Finite(mu) => {
            let s = eve_spectra(c, mu)?;
            beta * g(mu) - s.entropy() - beta * g(bob_conditional(c.eta, c.n_e, mu)) + s.conditional_entropy()
        }
        Mu::Infinite if leak(c) == 0.0 => f64::INFINITY,
        Mu::Infinite if beta < 1.0 || c.eta == 0.0 => 0.0,
        Mu::Infinite => {
            -leak(c).log2() - g((1.0 - c.eta) * (1.0 + c.n_e) / c.eta) + g(conditional_photons_limit(c))
        }
    };
    Ok(value.max(0.0))
}

/// Loss-channel upper bound with the wiretap split into Eve's share
/// `kappa (1 - eta)` and everything else `tau = 1 - kappa (1 - eta)`:
/// `-log2(1 - tau)` without noise, `-log2((1 - tau) tau^n) - g(n)` with it.
/// Infinite when Eve collects nothing.
pub fn upper_bound(channel: &ChannelParams) -> f64 {
    let leak = leak(channel);
    if leak <= 0.0 {
        return f64::INFINITY;
    }
    let n = channel.n_e;
    if n == 0.0 {
        return -leak.log2();
    }
    let tau = 1.0 - leak;
    (-(leak.log2() + n * tau.log2()) - g(n)).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub lb_direct: f64,
    pub lb_reverse: f64,
    pub lb: f64,
    pub ub: f64,
    pub skr_cv: f64,
    pub skr_bb84: f64,
    /// Photon numbers used for each quantity, when they were optimized.
    pub optimal_mu: Option<OptimalMu>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalMu {
    pub lb: Mu,
    pub lb_direct: Mu,
    pub lb_reverse: Mu,
    pub skr_cv: Mu,
    pub skr_bb84: Mu,
}

/// Every rate at a fixed `mu`.
pub fn rate_report(inputs: &RateInputs) -> Result<RateReport> {
    let lb_direct = lb_direct(inputs)?;
    let lb_reverse = lb_reverse(inputs)?;
    Ok(RateReport {
        lb_direct,
        lb_reverse,
        lb: lb_direct.max(lb_reverse),
        ub: upper_bound(&inputs.channel),
        skr_cv: skr_cv_ccq(inputs)?,
        skr_bb84: skr_ds_bb84(inputs)?,
        optimal_mu: None,
    })
}

/// Every rate at its own optimal `mu`.
pub fn optimized_report(channel: &ChannelParams, params: &RateParams) -> Result<RateReport> {
    let run = |objective| optimize_mu(channel, params, objective);
    let (lb, lbd, lbr, cv, bb) = (
        run(Objective::LbMax)?,
        run(Objective::LbDirect)?,
        run(Objective::LbReverse)?,
        run(Objective::SkrCv)?,
        run(Objective::SkrBb84)?,
    );
    if lb.value.is_nan() {
        return Err(Error::NonConvergence {
            estimate: f64::NAN,
            tolerance: 0.0,
        });
    }
    Ok(RateReport {
        lb_direct: lbd.value,
        lb_reverse: lbr.value,
        lb: lb.value,
        ub: upper_bound(channel),
        skr_cv: cv.value,
        skr_bb84: bb.value,
        optimal_mu: Some(OptimalMu {
            lb: lb.mu,
            lb_direct: lbd.mu,
            lb_reverse: lbr.mu,
            skr_cv: cv.mu,
            skr_bb84: bb.mu,
        }),
    })
}
