//! Closed-form estimate of Eve's best distance against the numerical search,
//! and the Arago-spot shortcut for her power.

use fso_keyrate::channel::{Geometry, Uncached};
use fso_keyrate::rates::Objective;
use fso_keyrate::sweep::{analytic_f1_f2, arago_prediction_curve, optimal_eve_distance, AnalyticPredictor, MemoryCache, Model};

fn main() -> fso_keyrate::Result<()> {
    let model = Model::default();
    let provider = MemoryCache::new(Uncached::default());
    for km in [60.0, 120.0] {
        let l_ab = km * 1e3;
        let g = Geometry::behind_bob(l_ab, l_ab, 0.1, 0.1, 0.1)?;
        let predictor = AnalyticPredictor::new(&model.beam(&g)?, l_ab, g.r_b)?;
        let out = analytic_f1_f2(&predictor, 0)?;
        let found = optimal_eve_distance(&g, &model, &provider, (l_ab / 10.0, 5.0 * l_ab), Objective::LbMax)?;
        println!(
            "L_AB {km} km: predicted {:.1} km, found {:.1} km (f2 alone peaks at {:.1} km)",
            out.predicted / 1e3,
            found.l_be / 1e3,
            out.argmax_f2 / 1e3
        );
    }

    let g = Geometry::behind_bob(200e3, 200e3, 0.1, 0.1, 0.1)?;
    let rows = arago_prediction_curve(&g, &model, &[50e3, 200e3, 800e3])?;
    for r in rows {
        let c = r.channel.expect("arago rows carry a channel");
        println!("Arago shortcut, L_AB 200 km, L_BE {:>5.0} km: kappa {:.4}", r.parameter / 1e3, c.kappa);
    }
    Ok(())
}
