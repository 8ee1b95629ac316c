//! Lower bound as Eve backs away from Bob, for several link lengths. The
//! minimum moves out with the link length.

use fso_keyrate::channel::{Geometry, Uncached};
use fso_keyrate::optimize::argmin;
use fso_keyrate::sweep::{run_sweep, Grid, MemoryCache, Model, SweepSpec, Varied};

fn main() -> fso_keyrate::Result<()> {
    let provider = MemoryCache::new(Uncached::default());
    for km in [20.0, 40.0, 80.0] {
        let spec = SweepSpec {
            varied: Varied::LBe,
            grid: Grid::log(1e3, 500e3, 60),
            geometry: Geometry::behind_bob(km * 1e3, km * 1e3, 0.1, 0.1, 0.1)?,
            model: Model::default(),
            optimize_offset: false,
        };
        let rows = run_sweep(&spec, &provider)?;
        let lb: Vec<f64> = rows.iter().map(|r| r.report.map_or(f64::NAN, |r| r.lb)).collect();
        let i = argmin(&lb).expect("non-empty sweep");
        println!(
            "L_AB {km:>4} km: lowest lb {:.3} bits/use at L_BE = {:.1} km (lb {:.3} at 1 km)",
            lb[i],
            rows[i].parameter / 1e3,
            lb[0]
        );
    }
    println!("{} profiles propagated", provider.misses());
    Ok(())
}
