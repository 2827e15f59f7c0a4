//! Figure presets: fixed sweeps at the reference device parameters.

use std::f64::consts::{PI, TAU};
use std::path::PathBuf;

use crate::config::{linspace, Axis, Mode, Model, Observable, Params, RunConfig};

pub struct Preset {
    pub name: &'static str,
    pub about: &'static str,
    build: fn() -> RunConfig,
}

impl Preset {
    pub fn config(&self) -> RunConfig {
        let mut config = (self.build)();
        config.name = self.name.to_string();
        config
    }
}

fn base(model: Model, mode: Mode, observable: Observable, params: Params, axis: Axis, grid: Vec<f64>) -> RunConfig {
    RunConfig {
        name: String::new(),
        model,
        mode,
        observable,
        params,
        axis,
        grid,
        output_dir: PathBuf::from("."),
    }
}

fn device(energy: f64, x_p: f64) -> Params {
    Params {
        energy,
        d0: 5.0,
        b_x: 5.0,
        x_p,
        phi: PI / 2.0,
        g_star: 0.44,
        q: 0.0,
        ..Params::default()
    }
}

/// Excludes the left end point, for axes that start at a degenerate value.
fn open_left(start: f64, stop: f64, points: usize) -> Vec<f64> {
    linspace(start, stop, points + 1).split_off(1)
}

const WEAK_AMPLITUDE: f64 = 0.1;

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig2a",
        about: "weak pumping, energy sweep (per I0)",
        build: || base(Model::Coherent, Mode::Weak, Observable::Current, device(30.0, WEAK_AMPLITUDE), Axis::Energy, linspace(23.5, 70.5, 400)),
    },
    Preset {
        name: "fig2b",
        about: "strong pumping x_p = 1, energy sweep",
        build: || base(Model::Coherent, Mode::Cycle, Observable::Current, device(30.0, 1.0), Axis::Energy, linspace(23.5, 70.5, 400)),
    },
    Preset {
        name: "fig3",
        about: "pumping amplitude sweep from weak to strong at E = 64.3",
        build: || base(Model::Coherent, Mode::Cycle, Observable::Current, device(64.3, 1.0), Axis::Amplitude, open_left(0.0, 1.0, 100)),
    },
    Preset {
        name: "fig4a",
        about: "phase sweep at x_p = 0.1, E = 23.12",
        build: || base(Model::Coherent, Mode::Cycle, Observable::Current, device(23.12, 0.1), Axis::Phase, linspace(0.0, TAU, 181)),
    },
    Preset {
        name: "fig4b",
        about: "phase sweep at x_p = 1, E = 23.12",
        build: || base(Model::Coherent, Mode::Cycle, Observable::Current, device(23.12, 1.0), Axis::Phase, linspace(0.0, TAU, 181)),
    },
    Preset {
        name: "fig5a",
        about: "weak pumping, barrier strength sweep at E = 44.6 (per I0)",
        build: || base(Model::Coherent, Mode::Weak, Observable::Current, device(44.6, WEAK_AMPLITUDE), Axis::Field, linspace(0.1, 9.0, 300)),
    },
    Preset {
        name: "fig5a-inset",
        about: "weak pumping, width sweep at E = 44.6 (per I0)",
        build: || base(Model::Coherent, Mode::Weak, Observable::Current, device(44.6, WEAK_AMPLITUDE), Axis::Width, linspace(1.5, 10.0, 300)),
    },
    Preset {
        name: "fig5b",
        about: "strong pumping x_p = 1, barrier strength sweep at E = 44.6",
        build: || base(Model::Coherent, Mode::Cycle, Observable::Current, device(44.6, 1.0), Axis::Field, linspace(0.1, 9.0, 300)),
    },
    Preset {
        name: "fig5b-inset",
        about: "strong pumping x_p = 1, width sweep at E = 44.6",
        build: || base(Model::Coherent, Mode::Cycle, Observable::Current, device(44.6, 1.0), Axis::Width, linspace(1.5, 10.0, 300)),
    },
    Preset {
        name: "fig6a",
        about: "weak pumping, Rashba strength sweep at E = 64.3 (per I0)",
        build: || base(Model::Soc, Mode::Weak, Observable::Current, device(64.3, WEAK_AMPLITUDE), Axis::AlphaR, linspace(0.0, 2.0, 201)),
    },
    Preset {
        name: "fig6a-inset",
        about: "weak pumping, Dresselhaus strength sweep at E = 64.3 (per I0)",
        build: || base(Model::Soc, Mode::Weak, Observable::Current, device(64.3, WEAK_AMPLITUDE), Axis::AlphaD, linspace(0.0, 2.0, 201)),
    },
    Preset {
        name: "fig6b",
        about: "strong pumping x_p = 1, Rashba strength sweep at E = 64.3",
        build: || base(Model::Soc, Mode::Cycle, Observable::Current, device(64.3, 1.0), Axis::AlphaR, linspace(0.0, 2.0, 201)),
    },
    Preset {
        name: "fig6b-inset",
        about: "strong pumping x_p = 1, Dresselhaus strength sweep at E = 64.3",
        build: || base(Model::Soc, Mode::Cycle, Observable::Current, device(64.3, 1.0), Axis::AlphaD, linspace(0.0, 2.0, 201)),
    },
    Preset {
        name: "fig8a",
        about: "weak pumping with dephasing, resonant E = 21.56 (per I0)",
        build: || base(Model::Dephased, Mode::Weak, Observable::Current, device(21.56, WEAK_AMPLITUDE), Axis::Epsilon, linspace(0.0, 1.0, 101)),
    },
    Preset {
        name: "fig8a-inset",
        about: "weak pumping with dephasing, E = 22.17 (per I0)",
        build: || base(Model::Dephased, Mode::Weak, Observable::Current, device(22.17, WEAK_AMPLITUDE), Axis::Epsilon, linspace(0.0, 1.0, 101)),
    },
    Preset {
        name: "fig8b",
        about: "strong pumping x_p = 1 with dephasing, E = 23.0",
        build: || base(Model::Dephased, Mode::Cycle, Observable::Current, device(23.0, 1.0), Axis::Epsilon, linspace(0.0, 1.0, 101)),
    },
    Preset {
        name: "fig8b-inset",
        about: "strong pumping x_p = 1 with dephasing, non-resonant E = 38.0",
        build: || base(Model::Dephased, Mode::Cycle, Observable::Current, device(38.0, 1.0), Axis::Epsilon, linspace(0.0, 1.0, 101)),
    },
    Preset {
        name: "fig9a",
        about: "weak pumping heat, joule and noise, energy sweep",
        build: || base(Model::Coherent, Mode::Weak, Observable::Heat, device(30.0, WEAK_AMPLITUDE), Axis::Energy, linspace(13.0, 200.0, 375)),
    },
    Preset {
        name: "fig9b",
        about: "strong pumping x_p = 6, phi = pi/10 heat, joule and noise, energy sweep",
        build: || {
            let params = Params {
                phi: PI / 10.0,
                width_continuation: true,
                ..device(30.0, 6.0)
            };
            base(Model::Coherent, Mode::Cycle, Observable::Heat, params, Axis::Energy, linspace(13.0, 200.0, 188))
        },
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

pub fn names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.name).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_validates() {
        for preset in PRESETS {
            let config = preset.config();
            config.validate().unwrap_or_else(|e| panic!("{}: {e}", preset.name));
            assert_eq!(config.name, preset.name);
        }
    }

    #[test]
    fn names_are_unique() {
        let mut names = names();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), PRESETS.len());
    }

    #[test]
    fn lookup() {
        assert!(find("fig4b").is_some());
        assert!(find("fig7").is_none());
    }
}
