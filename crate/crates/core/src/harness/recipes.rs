//! Canned runs reproducing the standard studies of the link. All use a
//! 1550 nm beam, 10 cm apertures and a 3 K background unless stated.

use super::config::{RunConfig, SearchConfig, SweepConfig, WavefrontConfig};
use super::Task;
use crate::channel::Geometry;
use crate::rates::{Mu, Objective, RateParams};
use crate::sweep::{Grid, MuChoice, Varied};

#[derive(Debug, Clone, PartialEq)]
pub struct RecipeRun {
    pub task: Task,
    pub config: RunConfig,
}

/// Recipe names with one-line descriptions.
pub const RECIPES: &[(&str, &str)] = &[
    ("lb-vs-mu", "lower bounds vs input photon number, perfect reconciliation, L_AB = 20 km"),
    ("lb-vs-mu-imperfect", "lower bounds vs input photon number, beta = 0.95, L_AB = 20 km"),
    ("lb-vs-lbe", "lower and upper bounds vs Eve's distance for several link lengths"),
    ("wavefront", "field maps on Eve's plane at 1, 20, 60 and 120 km behind Bob, L_AB = 60 km"),
    ("refocus-vs-lab", "powers and bounds vs link length with Eve at the refocus point L_BE = L_AB"),
    ("lb-vs-lbe-r-eve", "lower bounds vs Eve's distance for several Eve apertures, L_AB = 50 km"),
    ("lb-vs-lbe-waist", "lower bounds vs Eve's distance for several beam waists, L_AB = 50 km"),
    ("arago-vs-lab", "full diffraction vs Arago-spot prediction for several link lengths"),
    ("arago-vs-waist", "full diffraction vs Arago-spot prediction for several waists, L_AB = 15 km"),
    ("skr-vs-lbe", "CV-QKD and decoy BB84 rates vs Eve's distance, beta = 0.95, L_AB = 50 km"),
    ("offset-opt", "bounds with Eve's offset optimized, L_AB = 40 km"),
    ("offset-opt-lab", "lower bounds with optimized offset for several link lengths"),
    ("skr-offset", "protocol rates with Eve's offset optimized, beta = 0.95, L_AB = 50 km"),
    ("before-bob-lae", "bounds vs Alice-to-Eve distance with Eve in front of Bob"),
    ("before-bob-combined", "bounds vs signed Eve distance, before and behind Bob"),
    ("skr-before-bob", "protocol rates vs signed Eve distance, beta = 0.95, L_AB = 80 km"),
    ("optimal-distance", "Eve's optimal distance and the analytic prediction for long links"),
];

const KM: f64 = 1e3;
const R: f64 = 0.1;

fn behind(l_ab: f64) -> Geometry {
    Geometry::behind_bob(l_ab, l_ab, R, R, R).expect("valid recipe geometry")
}

fn before(l_ab: f64) -> Geometry {
    Geometry::before_bob(l_ab, l_ab / 2.0, R, R, R).expect("valid recipe geometry")
}

fn sweep(varied: Varied, grid: Grid) -> SweepConfig {
    SweepConfig {
        varied,
        grid,
        optimize_offset: false,
        arago: false,
        behind: None,
    }
}

fn lbe_grid(l_ab: f64) -> Grid {
    Grid::log(0.5 * KM, (10.0 * l_ab).max(200.0 * KM), 90)
}

fn imperfect() -> RateParams {
    RateParams {
        beta: 0.95,
        ..RateParams::default()
    }
}

fn run(task: Task, name: String, geometry: Geometry, build: impl FnOnce(&mut RunConfig)) -> RecipeRun {
    let mut config = RunConfig::new(name, geometry);
    build(&mut config);
    RecipeRun { task, config }
}

fn km(x: f64) -> String {
    format!("{}km", x / KM)
}

fn cm(x: f64) -> String {
    format!("{}cm", (x * 100.0).round())
}

pub fn recipe(name: &str) -> Option<Vec<RecipeRun>> {
    let runs = match name {
        "lb-vs-mu" | "lb-vs-mu-imperfect" => {
            let params = if name == "lb-vs-mu" { RateParams::default() } else { imperfect() };
            [2.0 * KM, 10.0 * KM, 20.0 * KM, 80.0 * KM]
                .into_iter()
                .map(|l_be| {
                    let g = Geometry { l_be, ..behind(20.0 * KM) };
                    run(Task::Sweep, format!("{name}_lbe{}", km(l_be)), g, |c| {
                        c.rates.params = params;
                        c.rates.mu = MuChoice::Fixed(Mu::Infinite);
                        c.sweep = Some(sweep(Varied::Mu, Grid::log(1e-3, 1e4, 71)));
                    })
                })
                .collect()
        }
        "lb-vs-lbe" => [20.0, 40.0, 60.0, 80.0, 120.0]
            .into_iter()
            .map(|l| {
                let l_ab = l * KM;
                run(Task::Sweep, format!("{name}_lab{}", km(l_ab)), behind(l_ab), |c| {
                    c.sweep = Some(sweep(Varied::LBe, lbe_grid(l_ab)));
                })
            })
            .collect(),
        "wavefront" => [1.0, 20.0, 60.0, 120.0]
            .into_iter()
            .map(|l| {
                let g = Geometry { l_be: l * KM, ..behind(60.0 * KM) };
                run(Task::Wavefront, format!("{name}_lbe{}", km(l * KM)), g, |c| {
                    c.wavefront = Some(WavefrontConfig {
                        pixels: 257,
                        half_width: 0.8,
                        radial_samples: 401,
                    });
                })
            })
            .collect(),
        "refocus-vs-lab" => [0.05, 0.1, 0.2]
            .into_iter()
            .map(|w0| {
                let g = Geometry { r_a: w0, ..behind(50.0 * KM) };
                run(Task::Sweep, format!("{name}_w{}", cm(w0)), g, |c| {
                    c.sweep = Some(sweep(Varied::LAbRefocused, Grid::log(KM, 1000.0 * KM, 61)));
                })
            })
            .collect(),
        "lb-vs-lbe-r-eve" => [0.05, 0.1, 0.2, 0.3]
            .into_iter()
            .map(|r_e| {
                let g = Geometry { r_e, ..behind(50.0 * KM) };
                run(Task::Sweep, format!("{name}_re{}", cm(r_e)), g, |c| {
                    c.sweep = Some(sweep(Varied::LBe, lbe_grid(50.0 * KM)));
                })
            })
            .collect(),
        "lb-vs-lbe-waist" => [0.05, 0.1, 0.2, 0.3]
            .into_iter()
            .map(|w0| {
                let g = Geometry { r_a: w0, ..behind(50.0 * KM) };
                run(Task::Sweep, format!("{name}_w{}", cm(w0)), g, |c| {
                    c.sweep = Some(sweep(Varied::LBe, lbe_grid(50.0 * KM)));
                })
            })
            .collect(),
        "arago-vs-lab" | "arago-vs-waist" => {
            let cases: Vec<(String, Geometry)> = if name == "arago-vs-lab" {
                [5.0, 15.0, 40.0, 80.0]
                    .into_iter()
                    .map(|l| (format!("lab{}", km(l * KM)), behind(l * KM)))
                    .collect()
            } else {
                [0.1, 0.2, 0.3]
                    .into_iter()
                    .map(|w0| (format!("w{}", cm(w0)), Geometry { r_a: w0, ..behind(15.0 * KM) }))
                    .collect()
            };
            cases
                .into_iter()
                .flat_map(|(label, g)| {
                    let grid = lbe_grid(g.l_ab);
                    [false, true].map(|arago| {
                        let suffix = if arago { "_arago" } else { "" };
                        run(Task::Sweep, format!("{name}_{label}{suffix}"), g, |c| {
                            c.sweep = Some(SweepConfig {
                                arago,
                                ..sweep(Varied::LBe, grid)
                            });
                        })
                    })
                })
                .collect()
        }
        "skr-vs-lbe" => vec![run(Task::Sweep, name.into(), behind(50.0 * KM), |c| {
            c.rates.params = imperfect();
            c.sweep = Some(sweep(Varied::LBe, Grid::log(0.5 * KM, 500.0 * KM, 60)));
        })],
        "offset-opt" => vec![run(Task::OptimizeD, name.into(), behind(40.0 * KM), |c| {
            c.sweep = Some(sweep(Varied::LBe, Grid::log(0.5 * KM, 200.0 * KM, 40)));
        })],
        "offset-opt-lab" => [20.0, 40.0, 80.0]
            .into_iter()
            .map(|l| {
                let l_ab = l * KM;
                run(Task::OptimizeD, format!("{name}_lab{}", km(l_ab)), behind(l_ab), |c| {
                    c.sweep = Some(sweep(Varied::LBe, Grid::log(0.5 * KM, 5.0 * l_ab, 30)));
                })
            })
            .collect(),
        "skr-offset" => vec![run(Task::OptimizeD, name.into(), behind(50.0 * KM), |c| {
            c.rates.params = imperfect();
            c.sweep = Some(sweep(Varied::LBe, Grid::log(0.5 * KM, 200.0 * KM, 30)));
        })],
        "before-bob-lae" => [20.0, 40.0, 60.0, 80.0]
            .into_iter()
            .map(|l| {
                let l_ab = l * KM;
                run(Task::BeforeBob, format!("{name}_lab{}", km(l_ab)), before(l_ab), |c| {
                    c.sweep = Some(sweep(Varied::LAe, Grid::linear(0.5 * KM, l_ab - 0.5 * KM, 100)));
                })
            })
            .collect(),
        "before-bob-combined" | "skr-before-bob" => {
            let (links, params) = if name == "before-bob-combined" {
                (vec![20.0, 40.0, 80.0], RateParams::default())
            } else {
                (vec![80.0], imperfect())
            };
            links
                .into_iter()
                .map(|l| {
                    let l_ab = l * KM;
                    run(Task::BeforeBob, format!("{name}_lab{}", km(l_ab)), before(l_ab), |c| {
                        c.rates.params = params;
                        c.sweep = Some(SweepConfig {
                            behind: Some(Grid::log(0.5 * KM, 2.0 * l_ab, 50)),
                            ..sweep(Varied::LAe, Grid::linear(0.5 * KM, l_ab - 0.5 * KM, 80))
                        });
                    })
                })
                .collect()
        }
        "optimal-distance" => [60.0, 80.0, 120.0]
            .into_iter()
            .map(|l| {
                let l_ab = l * KM;
                run(Task::OptimalDistance, format!("{name}_lab{}", km(l_ab)), behind(l_ab), |c| {
                    c.search = Some(SearchConfig {
                        min: l_ab / 50.0,
                        max: 10.0 * l_ab,
                        objective: Objective::LbMax,
                    });
                })
            })
            .collect(),
        _ => return None,
    };
    Some(runs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_recipe_builds_valid_configs() {
        for (name, _) in RECIPES {
            let runs = recipe(name).unwrap_or_else(|| panic!("{name} missing"));
            assert!(!runs.is_empty());
            for r in &runs {
                r.config.validate().unwrap_or_else(|e| panic!("{}: {e}", r.config.name));
            }
            let mut names: Vec<_> = runs.iter().map(|r| r.config.name.clone()).collect();
            names.sort();
            names.dedup();
            assert_eq!(names.len(), runs.len(), "{name}: duplicate output names");
        }
        assert!(recipe("nope").is_none());
    }
}
