//! Key-rate bounds and protocol rates for a fixed channel, at fixed input
//! photon numbers and at the optimum.

use fso_keyrate::channel::ChannelParams;
use fso_keyrate::rates::{optimize_mu, optimized_report, rate_report, Mu, Objective, RateInputs, RateParams};

fn main() -> fso_keyrate::Result<()> {
    let channel = ChannelParams::new(0.3, 0.2, 1e-3)?;
    let perfect = RateParams::default();
    let imperfect = RateParams { beta: 0.95, ..perfect };

    println!("{:>10} {:>10} {:>10} {:>10}", "mu", "lb_direct", "lb_reverse", "lb(0.95)");
    for mu in [0.01, 0.1, 1.0, 10.0, 100.0] {
        let at = |params| rate_report(&RateInputs::new(channel, Mu::Finite(mu), params)?);
        let (p, i) = (at(perfect)?, at(imperfect)?);
        println!("{mu:>10} {:>10.4} {:>10.4} {:>10.4}", p.lb_direct, p.lb_reverse, i.lb);
    }

    let best = optimize_mu(&channel, &imperfect, Objective::LbMax)?;
    println!("\nbeta = 0.95: best mu {:?} gives lb = {:.4}", best.mu, best.value);
    let report = optimized_report(&channel, &imperfect)?;
    println!("upper bound {:.4} bits/use", report.ub);
    println!("CV-QKD  {:.3e} bits/s", report.skr_cv);
    println!("BB84    {:.3e} bits/s", report.skr_bb84);
    Ok(())
}
