//! Randomized invariants over beams, channels and rates.

use proptest::prelude::*;

use fso_keyrate::beam::BeamParams;
use fso_keyrate::channel::{channel_params, ChannelParams, Geometry};
use fso_keyrate::rates::{rate_report, Mu, RateInputs, RateParams};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encircled_power_is_a_fraction(w0 in 0.02..0.5f64, l in 0.0..3e5f64, r in 0.0..2.0f64, dr in 0.0..1.0f64) {
        let beam = BeamParams::normalized(1550e-9, w0).unwrap();
        let inner = beam.encircled_power(l, r).unwrap();
        let outer = beam.encircled_power(l, r + dr).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&inner));
        prop_assert!(outer >= inner - 1e-15);
        let ring = beam.annulus_power(l, r, r + dr).unwrap();
        prop_assert!((ring - (outer - inner)).abs() < 1e-12);
    }

    /// The default upper bound credits Eve with the environment's thermal
    /// photons while the lower bounds do not, so the two are only comparable
    /// without background noise.
    #[test]
    fn bounds_are_ordered(eta in 0.0..1.0f64, kappa in 0.0..=1.0f64, mu in 1e-3..1e6f64, beta in 0.8..=1.0f64) {
        let channel = ChannelParams::new(eta, kappa, 0.0).unwrap();
        let params = RateParams { beta, ..RateParams::default() };
        for mu in [Mu::Finite(mu), Mu::Infinite] {
            let r = rate_report(&RateInputs::new(channel, mu, params).unwrap()).unwrap();
            prop_assert!(r.lb <= r.ub + 1e-9, "lb {} ub {}", r.lb, r.ub);
        }
    }

    #[test]
    fn rates_are_nonnegative(eta in 0.0..1.0f64, kappa in 0.0..=1.0f64, n_e in 0.0..0.1f64, mu in 1e-3..1e6f64, beta in 0.8..=1.0f64) {
        let channel = ChannelParams::new(eta, kappa, n_e).unwrap();
        let params = RateParams { beta, ..RateParams::default() };
        for mu in [Mu::Finite(mu), Mu::Infinite] {
            let r = rate_report(&RateInputs::new(channel, mu, params).unwrap()).unwrap();
            prop_assert!(r.lb >= 0.0 && r.ub >= 0.0 && r.skr_cv >= 0.0 && r.skr_bb84 >= 0.0);
        }
    }
}

proptest! {
    // each case propagates a diffracted field
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn kappa_never_exceeds_one(l_ab in 5e3..1e5f64, l_be in 1e3..2e5f64, r in 0.05..0.3f64, offset in 0.0..0.3f64) {
        let beam = BeamParams::normalized(1550e-9, 0.1).unwrap();
        let g = Geometry::behind_bob(l_ab, l_be, 0.1, r, r).unwrap().with_offset(offset).unwrap();
        let c = channel_params(&g, &beam, 0.0).unwrap();
        prop_assert!(c.kappa <= 1.0 && c.kappa >= 0.0, "kappa {}", c.kappa);
        prop_assert!(c.p_bob + c.p_eve <= 1.0 + 1e-3);
    }

    #[test]
    fn kappa_before_bob_never_exceeds_one(l_ab in 5e3..1e5f64, frac in 0.05..0.95f64, r in 0.05..0.3f64) {
        let beam = BeamParams::normalized(1550e-9, 0.1).unwrap();
        let g = Geometry::before_bob(l_ab, frac * l_ab, 0.1, r, r).unwrap();
        let c = channel_params(&g, &beam, 0.0).unwrap();
        prop_assert!(c.kappa <= 1.0 && c.kappa >= 0.0, "kappa {}", c.kappa);
    }
}
