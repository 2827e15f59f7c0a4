//! Point evaluation and the parallel sweep driver.

use rayon::prelude::*;
use spinpump_core::dephasing::{dephased_currents, DephasedBarrier};
use spinpump_core::pump::{spin_resolved_currents, Normalization};
use spinpump_core::soc::{soc_pumped_currents, SocBarrier};
use spinpump_core::thermo::{spin_resolved_heat, HeatResult, OPTIMAL_NOISE_RATIO};
use spinpump_core::{CoherentBarrier, CurrentResult, Spin, LEFT};

use crate::config::{Model, Mode, Observable, Params, RunConfig};

pub const CURRENT_COLUMNS: &[&str] = &["x", "i_up", "i_down", "i_spin", "i_charge"];
pub const HEAT_COLUMNS: &[&str] = &[
    "x", "h_up", "j_up", "n_up", "h_down", "j_down", "n_down", "h", "j", "n", "n_over_h", "j_over_h", "optimal",
];

/// One evaluated grid point. `error` is set when the point was flagged;
/// its values are then NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub x: f64,
    pub values: Vec<f64>,
    pub error: Option<String>,
}

impl Row {
    pub fn is_flagged(&self) -> bool {
        self.error.is_some()
    }
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub columns: &'static [&'static str],
    pub rows: Vec<Row>,
    pub normalization: Normalization,
}

impl SweepResult {
    pub fn flagged(&self) -> usize {
        self.rows.iter().filter(|r| r.is_flagged()).count()
    }
}

pub fn columns(observable: Observable) -> &'static [&'static str] {
    match observable {
        Observable::Current => CURRENT_COLUMNS,
        Observable::Heat => HEAT_COLUMNS,
    }
}

pub fn normalization(mode: Mode, observable: Observable) -> Normalization {
    match (mode, observable) {
        (Mode::Weak, Observable::Current) => Normalization::PerI0,
        _ => Normalization::Absolute,
    }
}

/// Spin-resolved pumped currents into the left lead.
pub fn evaluate_current(model: Model, mode: Mode, p: &Params) -> spinpump_core::Result<CurrentResult> {
    let cycle = p.cycle()?;
    let mode = mode.pumping();
    match model {
        Model::Coherent => spin_resolved_currents(|spin| CoherentBarrier::new(p.energy, spin, p.g_star, p.q), &cycle, mode, LEFT),
        Model::Soc => soc_pumped_currents(p.energy, &cycle, p.g_star, p.q, &p.soc()?, mode),
        Model::Dephased => dephased_currents(p.energy, &cycle, p.g_star, p.q, p.epsilon, mode),
    }
}

/// Heat, joule and noise into the left lead for both spins.
pub fn evaluate_heat(model: Model, mode: Mode, p: &Params) -> spinpump_core::Result<HeatResult> {
    let cycle = p.cycle()?;
    let weak = mode == Mode::Weak;
    match model {
        Model::Coherent => spin_resolved_heat(|spin| CoherentBarrier::new(p.energy, spin, p.g_star, p.q), &cycle, weak, LEFT),
        Model::Soc => {
            let soc = p.soc()?;
            spin_resolved_heat(|spin| SocBarrier::new(p.energy, spin, p.g_star, p.q, soc), &cycle, weak, LEFT)
        }
        Model::Dephased => {
            let providers = [
                DephasedBarrier::new(p.energy, Spin::Up, p.g_star, p.q, p.epsilon)?,
                DephasedBarrier::new(p.energy, Spin::Down, p.g_star, p.q, p.epsilon)?,
            ];
            spin_resolved_heat(|spin| providers[usize::from(spin == Spin::Down)], &cycle, weak, LEFT)
        }
    }
}

fn current_values(c: &CurrentResult) -> Vec<f64> {
    vec![c.up, c.down, c.spin, c.charge]
}

fn heat_values(h: &HeatResult) -> Vec<f64> {
    let ratio = |r: Option<f64>| r.unwrap_or(f64::NAN);
    let optimal = match h.total.noise_ratio() {
        Some(r) if r < OPTIMAL_NOISE_RATIO => 1.0,
        Some(_) => 0.0,
        None => f64::NAN,
    };
    vec![
        h.up.heat,
        h.up.joule,
        h.up.noise,
        h.down.heat,
        h.down.joule,
        h.down.noise,
        h.total.heat,
        h.total.joule,
        h.total.noise,
        ratio(h.total.noise_ratio()),
        ratio(h.total.joule_ratio()),
        optimal,
    ]
}

/// Evaluates one point, turning numerical failures into a flagged row.
pub fn evaluate_row(config: &RunConfig, x: f64) -> Row {
    let p = config.params.with_axis(config.axis, x);
    let result = match config.observable {
        Observable::Current => evaluate_current(config.model, config.mode, &p).map(|c| current_values(&c)),
        Observable::Heat => evaluate_heat(config.model, config.mode, &p).map(|h| heat_values(&h)),
    };
    let width = columns(config.observable).len() - 1;
    match result {
        Ok(values) if values.iter().all(|v| v.is_finite() || v.is_nan()) => Row { x, values, error: None },
        Ok(_) => Row {
            x,
            values: vec![f64::NAN; width],
            error: Some("non-finite result".into()),
        },
        Err(e) => Row {
            x,
            values: vec![f64::NAN; width],
            error: Some(e.to_string()),
        },
    }
}

/// Runs the whole grid on `threads` workers (`None`: rayon's default).
/// Rows come back in grid order regardless of scheduling.
pub fn run(config: &RunConfig, threads: Option<usize>) -> anyhow::Result<SweepResult> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        anyhow::ensure!(n > 0, "thread count must be positive");
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    let rows = pool.install(|| config.grid.par_iter().map(|&x| evaluate_row(config, x)).collect());
    Ok(SweepResult {
        columns: columns(config.observable),
        rows,
        normalization: normalization(config.mode, config.observable),
    })
}
