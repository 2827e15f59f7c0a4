//! Heat pumped into a lead and its split into joule heat and noise.
//!
//! With `A = dS/dt S^dagger` the heat flowing into lead `a` is
//! `H = (1/8pi) <[dS/dt dS/dt^dagger]_aa>`, the cycle average taken over one
//! period. Unitarity turns the bracket into `sum_b |A_ab|^2`; the `b = a`
//! term is the joule heat and the remainder is the noise.

use num_complex::Complex64;

use crate::error::Result;
use crate::matrix::CMatrix;
use crate::pump::{cycle_average, sensitivity, PumpCycle, ScatteringProvider, Sensitivity};
use crate::scattering::Spin;

use std::f64::consts::PI;

/// Ratio `N/H` below which a point is reported as optimal.
pub const OPTIMAL_NOISE_RATIO: f64 = 2e-3;
/// Heat below this is treated as zero when forming ratios.
pub const HEAT_FLOOR: f64 = 1e-16;

/// Heat, joule and noise parts for one spin (or summed over spins).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HeatParts {
    pub heat: f64,
    pub joule: f64,
    pub noise: f64,
}

impl HeatParts {
    /// `|H - J - N|`.
    pub fn split_residual(&self) -> f64 {
        (self.heat - self.joule - self.noise).abs()
    }

    pub fn noise_ratio(&self) -> Option<f64> {
        (self.heat >= HEAT_FLOOR).then(|| self.noise / self.heat)
    }

    pub fn joule_ratio(&self) -> Option<f64> {
        (self.heat >= HEAT_FLOOR).then(|| self.joule / self.heat)
    }
}

impl std::ops::Add for HeatParts {
    type Output = HeatParts;

    fn add(self, rhs: HeatParts) -> HeatParts {
        HeatParts {
            heat: self.heat + rhs.heat,
            joule: self.joule + rhs.joule,
            noise: self.noise + rhs.noise,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatResult {
    pub up: HeatParts,
    pub down: HeatParts,
    pub total: HeatParts,
}

impl HeatResult {
    pub fn new(up: HeatParts, down: HeatParts) -> Self {
        Self {
            up,
            down,
            total: up + down,
        }
    }
}

fn row_norm_sqr(m: &CMatrix, row: usize) -> f64 {
    m.row(row).iter().map(Complex64::norm_sqr).sum()
}

/// Instantaneous `([S' S'^dagger]_aa, |A_aa|^2, sum_{b != a} |A_ab|^2)`.
fn instantaneous(sens: &Sensitivity, velocity: (f64, f64), lead: usize) -> [f64; 3] {
    let ds = sens.time_derivative(velocity);
    let heat = row_norm_sqr(&ds, lead);
    let a = &ds * sens.s.entries().adjoint();
    let joule = a[(lead, lead)].norm_sqr();
    let noise = row_norm_sqr(&a, lead) - joule;
    [heat, joule, noise.max(0.0)]
}

/// Heat, joule and noise into `lead` over one full cycle.
pub fn heat_joule_noise<P: ScatteringProvider + ?Sized>(provider: &P, cycle: &PumpCycle, lead: usize) -> Result<HeatParts> {
    if cycle.width_amplitude == 0.0 && cycle.field_amplitude == 0.0 {
        return Ok(HeatParts::default());
    }
    let [h, j, n] = cycle_average(provider, cycle, |sens, v| instantaneous(sens, v, lead))?;
    let scale = 1.0 / (8.0 * PI);
    Ok(HeatParts {
        heat: scale * h,
        joule: scale * j,
        noise: scale * n,
    })
}

/// Heat current into `lead`.
pub fn heat_current<P: ScatteringProvider + ?Sized>(provider: &P, cycle: &PumpCycle, lead: usize) -> Result<f64> {
    Ok(heat_joule_noise(provider, cycle, lead)?.heat)
}

/// `(J, N)` into `lead`.
pub fn joule_noise_split<P: ScatteringProvider + ?Sized>(provider: &P, cycle: &PumpCycle, lead: usize) -> Result<(f64, f64)> {
    let parts = heat_joule_noise(provider, cycle, lead)?;
    Ok((parts.joule, parts.noise))
}

/// Cycle average of `|a cos(t) + b cos(t + phi)|^2` summed over the pairs,
/// given `sum |a|^2`, `sum |b|^2` and `sum Re(a conj(b))`.
fn bilinear_average(cycle: &PumpCycle, aa: f64, bb: f64, ab: f64) -> f64 {
    let (d1, d2) = (cycle.width_amplitude, cycle.field_amplitude);
    0.5 * (d1 * d1 * aa + d2 * d2 * bb + 2.0 * d1 * d2 * cycle.phase.cos() * ab)
}

fn sums(a: impl Iterator<Item = (Complex64, Complex64)>) -> (f64, f64, f64) {
    a.fold((0.0, 0.0, 0.0), |(aa, bb, ab), (x, y)| {
        (aa + x.norm_sqr(), bb + y.norm_sqr(), ab + (x * y.conj()).re)
    })
}

/// Small-amplitude heat, joule and noise from the parameter derivatives at
/// the cycle centre. These are the bilinear forms obtained by expanding the
/// cycle average to second order in the amplitudes.
pub fn weak_heat_joule_noise<P: ScatteringProvider + ?Sized>(provider: &P, cycle: &PumpCycle, lead: usize) -> Result<HeatParts> {
    Ok(weak_parts_from(&sensitivity(provider, cycle.center())?, cycle, lead))
}

fn weak_parts_from(sens: &Sensitivity, cycle: &PumpCycle, lead: usize) -> HeatParts {
    let n = sens.s.dim();
    let prefactor = cycle.omega * cycle.omega / (8.0 * PI);
    let (hh1, hh2, hh12) = sums((0..n).map(|b| (sens.d_width[(lead, b)], sens.d_field[(lead, b)])));
    let s_dag = sens.s.entries().adjoint();
    let a1 = &sens.d_width * &s_dag;
    let a2 = &sens.d_field * &s_dag;
    let (jj1, jj2, jj12) = sums(std::iter::once((a1[(lead, lead)], a2[(lead, lead)])));
    let (nn1, nn2, nn12) = sums((0..n).filter(|&b| b != lead).map(|b| (a1[(lead, b)], a2[(lead, b)])));
    HeatParts {
        heat: prefactor * bilinear_average(cycle, hh1, hh2, hh12),
        joule: prefactor * bilinear_average(cycle, jj1, jj2, jj12),
        noise: prefactor * bilinear_average(cycle, nn1, nn2, nn12),
    }
}

/// Heat for both spins from a provider family indexed by spin.
pub fn spin_resolved_heat<P, F>(make: F, cycle: &PumpCycle, weak: bool, lead: usize) -> Result<HeatResult>
where
    P: ScatteringProvider,
    F: Fn(Spin) -> P,
{
    let run = |spin| {
        let provider = make(spin);
        if weak {
            weak_heat_joule_noise(&provider, cycle, lead)
        } else {
            heat_joule_noise(&provider, cycle, lead)
        }
    };
    Ok(HeatResult::new(run(Spin::Up)?, run(Spin::Down)?))
}

/// One row of an optimality table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalityRow {
    pub x: f64,
    pub noise_ratio: Option<f64>,
    pub joule_ratio: Option<f64>,
    /// `N/H` below [`OPTIMAL_NOISE_RATIO`]; `None` when `H` vanishes.
    pub optimal: Option<bool>,
}

pub fn optimality_report(sweep: &[(f64, HeatParts)]) -> Vec<OptimalityRow> {
    sweep
        .iter()
        .map(|&(x, parts)| {
            let noise_ratio = parts.noise_ratio();
            OptimalityRow {
                x,
                noise_ratio,
                joule_ratio: parts.joule_ratio(),
                optimal: noise_ratio.map(|r| r < OPTIMAL_NOISE_RATIO),
            }
        })
        .collect()
}
