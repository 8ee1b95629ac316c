//! Panel quadrature for smooth and oscillatory integrands.
//!
//! Oscillatory integrals are split into panels no wider than half a local
//! oscillation period; each panel is integrated with the 15-point
//! Gauss–Kronrod rule and the embedded 7-point Gauss result supplies the
//! error estimate.

use std::ops::{Add, Mul};
use std::sync::OnceLock;

use num_complex::Complex64;

/// Values that panel rules can accumulate.
pub trait Quadrable: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl Quadrable for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Quadrable for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Integral value with a (conservative) absolute error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Estimate<T> {
    pub value: T,
    pub abs_error: f64,
    pub panels: usize,
}

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

/// 15-point Gauss–Kronrod on `[a, b]`; returns (Kronrod value, |K15 - G7|).
pub fn gk15<T: Quadrable>(f: &impl Fn(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let kronrod = kronrod * half;
    let gauss = gauss * half;
    let err = (kronrod + gauss * -1.0).magnitude();
    (kronrod, err)
}

/// Integrates over consecutive panels delimited by `edges`.
pub fn integrate_edges<T: Quadrable>(f: &impl Fn(f64) -> T, edges: &[f64]) -> Estimate<T> {
    let mut value = T::zero();
    let mut abs_error = 0.0;
    for w in edges.windows(2) {
        let (v, e) = gk15(f, w[0], w[1]);
        value = value + v;
        abs_error += e;
    }
    Estimate {
        value,
        abs_error,
        panels: edges.len().saturating_sub(1),
    }
}

/// Panel edges on `[a, b]` with widths bounded by `max_width(x)` evaluated at
/// both ends of each panel. Fixed points in `breaks` become edges.
pub fn panel_edges(a: f64, b: f64, breaks: &[f64], max_width: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut stops: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    stops.sort_by(f64::total_cmp);
    stops.push(b);
    let mut edges = vec![a];
    let mut x = a;
    for stop in stops {
        while x < stop {
            let mut h = max_width(x);
            // shrink until the width also holds at the panel's far end
            for _ in 0..16 {
                let far = max_width((x + h).min(stop));
                if far >= h {
                    break;
                }
                h = far;
            }
            let h = h.max((stop - a).abs() * 1e-12);
            // avoid a sliver panel at the stop
            let next = if x + 1.05 * h >= stop { stop } else { x + h };
            edges.push(next);
            x = next;
        }
    }
    edges
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            dp = n as f64 * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Cached 4-point rule, exact for polynomials up to degree 7.
pub fn gauss4() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(4))
}

/// Cached 8-point rule.
pub fn gauss8() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(8))
}

/// Fixed-rule composite integration over `edges`.
pub fn fixed_rule<T: Quadrable>(f: &impl Fn(f64) -> T, edges: &[f64], rule: &(Vec<f64>, Vec<f64>)) -> T {
    let mut total = T::zero();
    for w in edges.windows(2) {
        let c = 0.5 * (w[0] + w[1]);
        let h = 0.5 * (w[1] - w[0]);
        let mut s = T::zero();
        for (x, wt) in rule.0.iter().zip(&rule.1) {
            s = s + f(c + h * x) * *wt;
        }
        total = total + s * h;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_weights_sum_to_two() {
        for n in [1usize, 2, 4, 7, 8, 16] {
            let (x, w) = gauss_legendre(n);
            assert_relative_eq!(w.iter().sum::<f64>(), 2.0, max_relative = 1e-14);
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn four_point_rule_exact_for_degree_seven() {
        let f = |x: f64| 3.0 * x.powi(7) - x.powi(6) + 2.0 * x.powi(3) + 1.0;
        let got = fixed_rule(&f, &[0.0, 2.0], gauss4());
        let exact = 3.0 * 256.0 / 8.0 - 128.0 / 7.0 + 2.0 * 16.0 / 4.0 + 2.0;
        assert_relative_eq!(got, exact, max_relative = 1e-13);
    }

    #[test]
    fn oscillatory_chirp_integral() {
        // int_0^a x exp(i c x^2) dx = (exp(i c a^2) - 1) / (2 i c)
        let c = 2.0e4;
        let a = 0.4;
        let f = |x: f64| Complex64::from_polar(x, c * x * x);
        let half_period = |x: f64| std::f64::consts::PI / (2.0 * c * x.max(1e-9)).min(1e12);
        let edges = panel_edges(0.0, a, &[], |x| half_period(x).min(a));
        let est = integrate_edges(&f, &edges);
        let exact = (Complex64::from_polar(1.0, c * a * a) - 1.0) / Complex64::new(0.0, 2.0 * c);
        assert!((est.value - exact).norm() < 1e-10 * exact.norm());
        assert!(est.abs_error < 1e-6 * exact.norm());
    }

    #[test]
    fn panel_edges_hit_breakpoints() {
        let edges = panel_edges(0.0, 1.0, &[0.25, 0.5], |_| 0.1);
        assert!(edges.contains(&0.25) && edges.contains(&0.5));
        assert_eq!(*edges.last().unwrap(), 1.0);
        assert!(edges.windows(2).all(|w| w[1] > w[0] && w[1] - w[0] <= 0.1 * 1.05 + 1e-15));
    }
}
