//! Runs a configuration through the file-producing harness with an on-disk
//! profile cache, twice, to show the second run reusing every profile.
//!
//! ```text
//! cargo run --release --example run_recipe -- [OUT_DIR]
//! ```

use fso_keyrate::channel::Geometry;
use fso_keyrate::harness::config::SweepConfig;
use fso_keyrate::harness::{recipe, run_task, DiskCache, RunConfig, Task};
use fso_keyrate::sweep::{Grid, MemoryCache, Varied};

fn main() -> fso_keyrate::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "recipe-output".into());
    let out = std::path::Path::new(&out);

    let mut config = RunConfig::new("short-link", Geometry::behind_bob(20e3, 20e3, 0.1, 0.1, 0.1)?);
    config.sweep = Some(SweepConfig {
        varied: Varied::LBe,
        grid: Grid::log(1e3, 200e3, 25),
        optimize_offset: false,
        arago: false,
        behind: None,
    });
    println!("{}", config.to_toml()?);

    let dir = out.join("cache");
    for pass in ["cold", "warm"] {
        let disk = DiskCache::open(&dir)?;
        let artifacts = run_task(Task::Sweep, &config, out, &MemoryCache::new(&disk))?;
        println!("{pass}: {} computed, {} read back -> {}", disk.computed(), disk.hits(), artifacts[0].path.display());
    }

    let runs = recipe("wavefront").expect("built-in recipe");
    let disk = DiskCache::open(&dir)?;
    let artifacts = run_task(runs[2].task, &runs[2].config, out, &disk)?;
    for a in artifacts {
        println!("wrote {}", a.path.display());
    }
    Ok(())
}
