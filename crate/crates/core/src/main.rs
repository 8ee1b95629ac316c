//! Command-line front end: runs a configuration file or a named recipe and
//! writes CSV and raster files.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use fso_keyrate::channel::{ProfileProvider, Uncached};
use fso_keyrate::harness::{recipe, run_task, DiskCache, RecipeRun, RunConfig, Task, CACHE_ENV, RECIPES};
use fso_keyrate::sweep::MemoryCache;

#[derive(Parser)]
#[command(name = "fso-keyrate", version, about = "Key rates of a free-space link with a diffracting eavesdropper")]
struct Cli {
    /// Profile cache directory (default: $FSO_KEYRATE_CACHE, else the
    /// config's `cache`, else no disk cache).
    #[arg(long, global = true, value_name = "DIR")]
    cache: Option<PathBuf>,
    /// Worker threads (default: one per core).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one parameter and tabulate channel and rates.
    Sweep(RunArgs),
    /// Map |U| on Eve's plane.
    Wavefront(RunArgs),
    /// Find Eve's best distance behind Bob.
    OptimalDistance(RunArgs),
    /// Sweep with Eve's lateral offset optimized at every point.
    OptimizeD(RunArgs),
    /// Sweep Eve's position in front of Bob (signed distance axis).
    BeforeBob(RunArgs),
    /// Inspect or clear the profile cache.
    #[command(subcommand)]
    Cache(CacheCommand),
    /// List the built-in recipes.
    Recipes,
}

#[derive(Subcommand)]
enum CacheCommand {
    Inspect,
    Clear,
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration.
    #[arg(long, value_name = "PATH", conflicts_with = "recipe", required_unless_present = "recipe")]
    config: Option<PathBuf>,
    /// Built-in recipe (see `recipes`).
    #[arg(long, value_name = "NAME")]
    recipe: Option<String>,
    /// Output directory (default: the config's `output`, else `.`).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(anyhow::Error),
    Compute(anyhow::Error),
}

impl From<fso_keyrate::Error> for Failure {
    fn from(e: fso_keyrate::Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.into())
        } else {
            Failure::Compute(e.into())
        }
    }
}

fn usage(e: anyhow::Error) -> Failure {
    Failure::Usage(e)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(bad) => {
            eprintln!("{bad} row(s) failed; see the error column");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn cache_dir(flag: Option<PathBuf>, config: Option<&Path>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .or_else(|| config.map(Path::to_path_buf))
}

/// Returns the number of failed rows.
fn run(cli: Cli) -> Result<usize, Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(usage(anyhow::anyhow!("--threads must be at least 1")));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")
            .map_err(Failure::Compute)?;
    }
    let (task, args) = match cli.command {
        Command::Sweep(a) => (Task::Sweep, a),
        Command::Wavefront(a) => (Task::Wavefront, a),
        Command::OptimalDistance(a) => (Task::OptimalDistance, a),
        Command::OptimizeD(a) => (Task::OptimizeD, a),
        Command::BeforeBob(a) => (Task::BeforeBob, a),
        Command::Cache(c) => return cache_command(c, cache_dir(cli.cache, None)).map(|_| 0),
        Command::Recipes => {
            for (name, about) in RECIPES {
                println!("{name:<22}{about}");
            }
            return Ok(0);
        }
    };
    let runs = load_runs(task, &args).map_err(usage)?;
    let dir = cache_dir(cli.cache, runs[0].config.cache.as_deref());
    let disk = dir.map(DiskCache::open).transpose()?;
    let uncached = Uncached::default();
    let inner: &dyn ProfileProvider = match &disk {
        Some(d) => d,
        None => &uncached,
    };
    let provider = MemoryCache::new(inner);
    let mut failed = 0;
    for r in &runs {
        let out = args
            .out
            .clone()
            .or_else(|| r.config.output.clone())
            .unwrap_or_else(|| PathBuf::from("."));
        log::info!("running {}", r.config.name);
        for artifact in run_task(r.task, &r.config, &out, &provider)? {
            println!("{}", artifact.path.display());
            failed += artifact.error_rows;
        }
    }
    if let Some(d) = &disk {
        log::info!("profile cache: {} hit(s), {} computed", d.hits(), d.computed());
    }
    Ok(failed)
}

fn load_runs(task: Task, args: &RunArgs) -> anyhow::Result<Vec<RecipeRun>> {
    if let Some(path) = &args.config {
        let config = RunConfig::load(path)?;
        return Ok(vec![RecipeRun { task, config }]);
    }
    let name = args.recipe.as_deref().unwrap_or_default();
    let Some(runs) = recipe(name) else {
        bail!("unknown recipe {name:?}; run `fso-keyrate recipes` for the list");
    };
    if let Some(other) = runs.iter().find(|r| r.task != task) {
        bail!("recipe {name:?} is run with the `{}` subcommand", subcommand(other.task));
    }
    Ok(runs)
}

fn subcommand(task: Task) -> &'static str {
    match task {
        Task::Sweep => "sweep",
        Task::Wavefront => "wavefront",
        Task::OptimalDistance => "optimal-distance",
        Task::OptimizeD => "optimize-d",
        Task::BeforeBob => "before-bob",
    }
}

fn cache_command(command: CacheCommand, dir: Option<PathBuf>) -> Result<(), Failure> {
    let Some(dir) = dir else {
        return Err(usage(anyhow::anyhow!("no cache directory: pass --cache or set {CACHE_ENV}")));
    };
    let cache = DiskCache::open(&dir)?;
    match command {
        CacheCommand::Inspect => {
            let entries = cache.entries()?;
            let total: u64 = entries.iter().map(|e| e.bytes).sum();
            println!("{}: {} entries, {} bytes", dir.display(), entries.len(), total);
            for e in entries {
                let name = e.path.file_name().unwrap_or_default().to_string_lossy();
                match e.profile {
                    Some(p) => println!(
                        "{name}  {:>9} B  source plane {:.1} m  obstacle {} m  distance {:.1} m  reach {:.3} m  {} nodes",
                        e.bytes, p.plane_distance, p.inner_radius, p.distance, p.truncation_radius, p.nodes
                    ),
                    None => println!("{name}  {:>9} B  unreadable", e.bytes),
                }
            }
        }
        CacheCommand::Clear => println!("removed {} entries", cache.clear()?),
    }
    Ok(())
}
