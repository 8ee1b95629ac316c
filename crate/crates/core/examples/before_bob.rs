//! Eve between Alice and Bob: her disk shadows Bob, who then collects only
//! the light diffracted around it.

use fso_keyrate::channel::{Geometry, Uncached};
use fso_keyrate::sweep::{run_sweep, Grid, MemoryCache, Model, SweepSpec, Varied};

fn main() -> fso_keyrate::Result<()> {
    let l_ab = 40e3;
    let spec = SweepSpec {
        varied: Varied::LAe,
        grid: Grid::linear(2e3, l_ab - 2e3, 10),
        geometry: Geometry::before_bob(l_ab, l_ab / 2.0, 0.1, 0.1, 0.1)?,
        model: Model::default(),
        optimize_offset: false,
    };
    let rows = run_sweep(&spec, &MemoryCache::new(Uncached::default()))?;
    println!("{:>9} {:>8} {:>8} {:>8}", "L_AE (km)", "eta", "kappa", "lb");
    for r in rows {
        match (r.channel, r.report) {
            (Some(c), Some(rep)) => println!("{:>9.1} {:>8.4} {:>8.4} {:>8.4}", r.parameter / 1e3, c.eta, c.kappa, rep.lb),
            _ => println!("{:>9.1} failed: {}", r.parameter / 1e3, r.error.unwrap_or_default()),
        }
    }
    Ok(())
}
