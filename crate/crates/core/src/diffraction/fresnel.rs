//! Fresnel propagation of a cylindrically symmetric source, reduced to a
//! radial integral with a `J0` kernel:
//!
//! `U(l) = 2π e^{ikΔ}/(iλΔ) e^{ikl²/2Δ} ∫ U_src(r) e^{ikr²/2Δ} J0(klr/Δ) r dr`.
//!
//! The source field is Gaussian, so `U_src(r) e^{ikr²/2Δ}` collapses to a
//! constant times `exp((A + i(B - C)) r²)` with `A = -1/W²`, `B = k/2Δ` and
//! `C = k/2R`. The kernel samples that factor once on Gauss–Kronrod panels
//! sized for the largest observation radius, so each additional observation
//! point costs one `J0` per node.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{fresnel_valid, SourceAnnulus, DEFAULT_TRUNCATION};
use crate::beam::carrier_phase;
use crate::bessel::j0;
use crate::error::{invalid, Error, Result};
use crate::quadrature::panel_edges;

/// Relative quadrature tolerance against the integrand's magnitude scale.
pub const FIELD_TOLERANCE: f64 = 1e-7;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Field value with its quadrature diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct FieldSample {
    pub amplitude: Complex64,
    pub abs_error: f64,
}

/// Precomputed radial quadrature for one (source, Δ) pair.
#[derive(Debug, Clone)]
pub struct FresnelKernel {
    source: SourceAnnulus,
    distance: f64,
    max_observation: f64,
    radii: Vec<f64>,
    // Kronrod-weighted and Gauss-weighted samples of exp((A + i(B-C)) r²) r dr.
    kronrod: Vec<Complex64>,
    gauss: Vec<Complex64>,
    // Constant part of the prefactor, without the e^{ikl²/2Δ} chirp.
    prefactor: Complex64,
    // Bound on |∫ integrand|, used to scale the error tolerance.
    magnitude_scale: f64,
    fresnel_margin: f64,
}

impl FresnelKernel {
    /// Kernel valid for observation radii in `[0, max_observation]`, with the
    /// source truncated at `truncation` spot sizes.
    pub fn new(source: &SourceAnnulus, distance: f64, max_observation: f64, truncation: f64) -> Result<Self> {
        source.validate()?;
        if !(distance > 0.0) || !distance.is_finite() {
            return Err(invalid("distance", format!("must be > 0, got {distance}")));
        }
        if !(max_observation >= 0.0) || !max_observation.is_finite() {
            return Err(invalid("max_observation", format!("must be >= 0, got {max_observation}")));
        }
        let beam = &source.beam;
        let plane = beam.plane_params(source.plane_distance)?;
        let k = beam.wavenumber();
        let w = plane.spot_size;
        let a = -1.0 / (w * w);
        let chirp = 0.5 * k * (1.0 / distance - plane.curvature.inverse());
        let bessel_rate = k * max_observation / distance;

        let inner = source.inner_radius;
        let outer = source.working_outer(truncation);
        if outer <= inner {
            return Err(invalid("truncation", "working outer radius does not exceed inner radius"));
        }
        let gaussian_scale = 0.25 * w;
        let edges = panel_edges(inner, outer, &[], |r| {
            let rate = 2.0 * chirp.abs() * r + bessel_rate;
            if rate > 0.0 {
                (PI / rate).min(gaussian_scale)
            } else {
                gaussian_scale
            }
        });

        let n = 15 * (edges.len() - 1);
        let mut radii = Vec::with_capacity(n);
        let mut kronrod = Vec::with_capacity(n);
        let mut gauss = Vec::with_capacity(n);
        let exponent = Complex64::new(a, chirp);
        let mut push = |r: f64, wk: f64, wg: f64| {
            let f = (exponent * (r * r)).exp() * r;
            radii.push(r);
            kronrod.push(f * wk);
            gauss.push(f * wg);
        };
        for pair in edges.windows(2) {
            let c = 0.5 * (pair[0] + pair[1]);
            let h = 0.5 * (pair[1] - pair[0]);
            for j in 0..7 {
                let wg = if j % 2 == 1 { WG[j / 2] * h } else { 0.0 };
                push(c - h * XGK[j], WGK[j] * h, wg);
                push(c + h * XGK[j], WGK[j] * h, wg);
            }
            push(c, WGK[7] * h, WG[3] * h);
        }

        let magnitude_scale = ((a * inner * inner).exp() - (a * outer * outer).exp()) / (-2.0 * a);
        // 2π e^{ikΔ} / (iλΔ) · E0 W0 / W · e^{-i(k L_src - ψ)}
        let phase = carrier_phase(distance, beam.wavelength) - PI / 2.0
            - carrier_phase(source.plane_distance, beam.wavelength)
            + plane.gouy_phase;
        let magnitude = 2.0 * PI / (beam.wavelength * distance) * beam.field_peak * beam.waist_radius / w;
        Ok(Self {
            source: *source,
            distance,
            max_observation,
            radii,
            kronrod,
            gauss,
            prefactor: Complex64::from_polar(magnitude, phase),
            magnitude_scale,
            fresnel_margin: fresnel_valid(source, distance).margin,
        })
    }

    pub fn source(&self) -> &SourceAnnulus {
        &self.source
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    pub fn max_observation(&self) -> f64 {
        self.max_observation
    }

    pub fn node_count(&self) -> usize {
        self.radii.len()
    }

    pub fn fresnel_margin(&self) -> f64 {
        self.fresnel_margin
    }

    /// Field without the observation-plane chirp `e^{ikl²/2Δ}`.
    pub fn envelope(&self, l: f64) -> Result<FieldSample> {
        if !(l >= 0.0) || l > self.max_observation * (1.0 + 1e-12) {
            return Err(invalid(
                "l",
                format!("must lie in [0, {}], got {l}", self.max_observation),
            ));
        }
        let k = self.source.beam.wavenumber();
        let rate = k * l / self.distance;
        let mut sum_k = Complex64::new(0.0, 0.0);
        let mut sum_g = Complex64::new(0.0, 0.0);
        if rate == 0.0 {
            for (wk, wg) in self.kronrod.iter().zip(&self.gauss) {
                sum_k += wk;
                sum_g += wg;
            }
        } else {
            for ((r, wk), wg) in self.radii.iter().zip(&self.kronrod).zip(&self.gauss) {
                let b = j0(rate * r);
                sum_k += wk * b;
                sum_g += wg * b;
            }
        }
        let abs_error = (sum_k - sum_g).norm();
        let tolerance = FIELD_TOLERANCE * self.magnitude_scale;
        if abs_error > tolerance {
            return Err(Error::NonConvergence {
                estimate: abs_error / self.magnitude_scale,
                tolerance: FIELD_TOLERANCE,
            });
        }
        Ok(FieldSample {
            amplitude: self.prefactor * sum_k,
            abs_error: self.prefactor.norm() * abs_error,
        })
    }

    /// Full complex field at observation radius `l`.
    pub fn field(&self, l: f64) -> Result<FieldSample> {
        let s = self.envelope(l)?;
        Ok(FieldSample {
            amplitude: s.amplitude * self.chirp(l),
            abs_error: s.abs_error,
        })
    }

    /// `e^{ikl²/2Δ}`.
    pub fn chirp(&self, l: f64) -> Complex64 {
        let k = self.source.beam.wavenumber();
        Complex64::from_polar(1.0, 0.5 * k * l * l / self.distance)
    }
}

/// Fresnel field at observation radius `l`, `distance` past the source plane.
/// Evaluation proceeds even where [`fresnel_valid`] fails; check it separately.
pub fn fresnel_field_bessel(source: &SourceAnnulus, distance: f64, l: f64) -> Result<Complex64> {
    let kernel = FresnelKernel::new(source, distance, l.max(0.0), DEFAULT_TRUNCATION)?;
    if !kernel.fresnel_margin.is_nan() && kernel.fresnel_margin < super::FRESNEL_MARGIN {
        log::warn!(
            "Fresnel condition margin {:.3e} below {} at distance {distance}",
            kernel.fresnel_margin,
            super::FRESNEL_MARGIN
        );
    }
    Ok(kernel.field(l)?.amplitude)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beam::BeamParams;
    use approx::assert_relative_eq;

    fn beam() -> BeamParams {
        BeamParams::normalized(1550e-9, 0.1).unwrap()
    }

    /// On axis the radial integral has a closed form in x = r².
    fn on_axis_closed_form(src: &SourceAnnulus, distance: f64) -> Complex64 {
        let b = &src.beam;
        let plane = b.plane_params(src.plane_distance).unwrap();
        let k = b.wavenumber();
        let w = plane.spot_size;
        let s = Complex64::new(-1.0 / (w * w), 0.5 * k * (1.0 / distance - plane.curvature.inverse()));
        let lo = src.inner_radius;
        let hi = src.working_outer(DEFAULT_TRUNCATION);
        let integral = ((s * hi * hi).exp() - (s * lo * lo).exp()) / (2.0 * s);
        let phase = carrier_phase(distance, b.wavelength) - PI / 2.0 - carrier_phase(src.plane_distance, b.wavelength)
            + plane.gouy_phase;
        Complex64::from_polar(2.0 * PI / (b.wavelength * distance) * b.field_peak * b.waist_radius / w, phase)
            * integral
    }

    #[test]
    fn on_axis_matches_closed_form() {
        for (l_ab, delta) in [(20e3, 20e3), (60e3, 1e3), (60e3, 60e3), (120e3, 3e3), (5e3, 500.0)] {
            let src = SourceAnnulus::cropped(beam(), l_ab, 0.1).unwrap();
            let got = fresnel_field_bessel(&src, delta, 0.0).unwrap();
            let want = on_axis_closed_form(&src, delta);
            assert!((got - want).norm() <= 1e-10 * want.norm(), "{l_ab} {delta}: {got} vs {want}");
        }
    }

    #[test]
    fn unobstructed_source_refocuses_to_mirror_waist() {
        // The source phase e^{-ik r²/2R} meets the e^{+ik r²/2Δ} kernel, so an
        // unobstructed beam taken at L_src converges back to a waist at
        // Δ = L_src and then spreads again: |U| matches the beam at |Δ - L_src|.
        let b = beam();
        let src = SourceAnnulus::full(b, 10e3).unwrap();
        for delta in [4e3, 10e3, 15e3, 30e3] {
            let kernel = FresnelKernel::new(&src, delta, 0.4, 6.0).unwrap();
            for l in [0.0, 0.05, 0.13, 0.3, 0.4] {
                let got = kernel.field(l).unwrap().amplitude.norm();
                let want = b.field_amplitude(l, (delta - 10e3).abs()).unwrap().norm();
                assert!((got - want).abs() < 1e-7 * b.field_peak, "{delta} {l}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn rejects_observation_outside_kernel() {
        let src = SourceAnnulus::cropped(beam(), 20e3, 0.1).unwrap();
        let kernel = FresnelKernel::new(&src, 1e3, 0.1, 3.0).unwrap();
        assert!(kernel.envelope(0.2).is_err());
        assert!(FresnelKernel::new(&src, 0.0, 0.1, 3.0).is_err());
    }

    #[test]
    fn refocused_amplitude_at_long_range() {
        // |U(0)| at Δ = L_AB approaches E0 (1 - e^-9) once r_b << W(L_AB)
        let b = beam();
        let l_ab = 1000e3;
        let src = SourceAnnulus::cropped(b, l_ab, 0.1).unwrap();
        let u = fresnel_field_bessel(&src, l_ab, 0.0).unwrap().norm();
        assert_relative_eq!(u, b.field_peak * (1.0 - (-9f64).exp()), max_relative = 1e-3);
    }
}
