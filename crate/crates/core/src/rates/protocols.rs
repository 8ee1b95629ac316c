//! Protocol key rates: Gaussian-modulated CV-QKD with heterodyne detection
//! (CCQ rate) and asymptotic decoy-state BB84 against a beam-splitting Eve.

use serde::{Deserialize, Serialize};

use super::{conditional_photons_limit, eve_spectra, leak, Mu, RateInputs};
use crate::error::{invalid, Result};

/// How Eve's information enters the BB84 rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EveCopyModel {
    /// Eve knows a sifted bit when Bob detected the pulse and her share of
    /// the same pulse held at least one photon:
    /// `(1 - e^{-eta mu}) (1 - e^{-kappa (1 - eta) mu})`.
    #[default]
    DetectedPulses,
    /// Eve's information is the probability her share of any sent pulse
    /// held a photon, `1 - e^{-kappa (1 - eta) mu}`, regardless of whether
    /// Bob detected it.
    AllPulses,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bb84Options {
    /// Background modes per detection window; dark yield is `n_e` times this.
    pub background_modes: f64,
    /// Optical misalignment error probability.
    pub misalignment: f64,
    /// Sifting efficiency.
    pub basis_efficiency: f64,
    pub eve_copy: EveCopyModel,
}

impl Default for Bb84Options {
    fn default() -> Self {
        Self {
            background_modes: 1.0,
            misalignment: 0.0,
            basis_efficiency: 1.0,
            eve_copy: EveCopyModel::default(),
        }
    }
}

impl Bb84Options {
    pub fn validate(&self) -> Result<()> {
        if !(self.background_modes >= 0.0) || !self.background_modes.is_finite() {
            return Err(invalid("background_modes", format!("must be finite and >= 0, got {}", self.background_modes)));
        }
        if !(0.0..=0.5).contains(&self.misalignment) {
            return Err(invalid("misalignment", format!("must lie in [0, 0.5], got {}", self.misalignment)));
        }
        if !(self.basis_efficiency > 0.0 && self.basis_efficiency <= 1.0) {
            return Err(invalid(
                "basis_efficiency",
                format!("must lie in (0, 1], got {}", self.basis_efficiency),
            ));
        }
        Ok(())
    }
}

fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (-p).ln_1p() * std::f64::consts::LOG2_E
    }
}

/// `1 - e^{-x}`, with `x = rate * mu` taken as 0 when `rate` is 0 even for
/// infinite `mu`.
fn click(rate: f64, mu: f64) -> f64 {
    if rate == 0.0 {
        0.0
    } else {
        -(-rate * mu).exp_m1()
    }
}

/// CCQ rate of Gaussian-modulated CV-QKD with heterodyne detection, in bits
/// per second: `R (beta I(A:B) - chi(E:B))`, clamped at 0.
pub fn skr_cv_ccq(inputs: &RateInputs) -> Result<f64> {
    inputs.validate()?;
    let c = &inputs.channel;
    let beta = inputs.params.beta;
    let noise = 1.0 + (1.0 - c.eta) * c.n_e;
    let per_mode = match inputs.mu {
        Mu::Finite(mu) => {
            let mutual = (c.eta * mu / noise).ln_1p() * std::f64::consts::LOG2_E;
            let s = eve_spectra(c, mu)?;
            beta * mutual - (s.entropy() - s.conditional_entropy())
        }
        Mu::Infinite if leak(c) == 0.0 => f64::INFINITY,
        Mu::Infinite if beta < 1.0 || c.eta == 0.0 => 0.0,
        Mu::Infinite => {
            // log2(eta mu / noise) - g(leak mu) + g(n_y) as mu grows
            (c.eta / (leak(c) * noise)).log2() - std::f64::consts::LOG2_E + super::g(conditional_photons_limit(c))
        }
    };
    Ok(inputs.params.pulse_rate * per_mode.max(0.0))
}

/// Asymptotic decoy-state BB84 rate in bits per second:
/// `R q max(0, Q (1 - f_L h2(E)) - I_E)`.
pub fn skr_ds_bb84(inputs: &RateInputs) -> Result<f64> {
    inputs.validate()?;
    let c = &inputs.channel;
    let p = &inputs.params;
    let o = &p.bb84;
    let mu = inputs.mu.value();
    let dark = (c.n_e * o.background_modes).min(1.0);
    let signal = click(c.eta, mu);
    let gain = (dark + signal).min(1.0);
    if gain <= 0.0 {
        return Ok(0.0);
    }
    let error = (0.5 * dark + o.misalignment * signal) / gain;
    let eve_copy = click(leak(c), mu);
    let eve_info = match o.eve_copy {
        EveCopyModel::DetectedPulses => signal * eve_copy,
        EveCopyModel::AllPulses => eve_copy,
    };
    let per_pulse = gain * (1.0 - p.f_l * binary_entropy(error)) - eve_info;
    Ok(p.pulse_rate * o.basis_efficiency * per_pulse.max(0.0))
}
