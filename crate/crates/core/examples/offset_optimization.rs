//! Eve moving off the axis to catch more of the diffracted ring.

use fso_keyrate::channel::{Geometry, Uncached};
use fso_keyrate::rates::Objective;
use fso_keyrate::sweep::{optimize_eve_offset, MemoryCache, Model};

fn main() -> fso_keyrate::Result<()> {
    let provider = MemoryCache::new(Uncached::default());
    let model = Model::default();
    println!("{:>9} {:>8} {:>10} {:>10}", "L_BE (km)", "D* (m)", "lb at D*", "lb on axis");
    for km in [1.0, 3.0, 10.0, 40.0] {
        let g = Geometry::behind_bob(40e3, km * 1e3, 0.1, 0.1, 0.1)?;
        let best = optimize_eve_offset(&g, &model, &provider, Objective::LbMax, 0.0)?;
        println!(
            "{km:>9} {:>8.3} {:>10.4} {:>10.4}",
            best.offset, best.value, best.on_axis_value
        );
    }
    Ok(())
}
