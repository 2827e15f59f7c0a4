//! Adiabatic pumping from parametric derivatives of the S-matrix.
//!
//! The two pumping parameters are the barrier width `X1 = d` and the field
//! strength `X2 = B`. Emissivities are
//! `dN_a/dX = (1/2pi) sum_b Im(ds_ab/dX conj(s_ab))` and the pumped current
//! into lead `a` is the cycle average of `sum_i dN_a/dX_i dX_i/dt`. With
//! `e = 1` and the default `omega = 1` the current equals the pumped charge
//! per cycle divided by `2 pi`.
//!
//! For small amplitudes the loop integral collapses to
//! `I = I0 sum_b Im(conj(ds_ab/dB) ds_ab/dd)` with
//! `I0 = omega dX1 dX2 sin(phi) / 2pi`; the sign follows from the clockwise
//! orientation of the loop for `0 < phi < pi`.

use std::f64::consts::{PI, TAU};

use crate::error::{invalid, Error, Result};
use crate::matrix::{CMatrix, ScatterMatrix};
use crate::numerics::{adaptive_mean, periodic_mean, ridders};
use crate::scattering::{closed_form_td, reduced_g, BarrierConfig, Spin};

/// Default time-quadrature node count.
pub const DEFAULT_NODES: usize = 256;
/// Upper bound for the node-doubling refinement of the uniform rule.
pub const MAX_NODES: usize = 1 << 12;
/// Evaluation budget of the adaptive rule used when the uniform rule fails.
pub const MAX_ADAPTIVE_EVALUATIONS: usize = 1 << 18;
/// Relative change allowed when the node count is doubled.
pub const QUADRATURE_TOLERANCE: f64 = 1e-6;
/// Largest `|S S^dagger - 1|` accepted from a provider.
pub const UNITARITY_TOLERANCE: f64 = 1e-8;
/// Default initial finite-difference step as a fraction of `max(1, |X|)`.
pub const STEP_FRACTION: f64 = 1e-2;

/// Initial finite-difference step for a barrier with lead wavevector `k1`
/// and in-barrier `k2^2`. Along the width the phases advance at
/// `max(k1, |k2|)`. Along the field the in-barrier phase `k2 d` advances at
/// `field_rate d / |k2|` where `field_rate = |d(k2^2)/dB| / 2`; near the band
/// edge the dependence is through `k2^2 d^2` only, which caps the rate at
/// `field_rate d^2`. The step is a tenth of the inverse rate.
pub fn barrier_step(point: ParamPoint, param: PumpParameter, k1: f64, k2_sq: f64, field_rate: f64) -> f64 {
    let default = STEP_FRACTION * point.get(param).abs().max(1.0);
    let k2 = k2_sq.abs().sqrt();
    let d = point.width.abs();
    let rate = match param {
        PumpParameter::Width => k1.max(k2),
        PumpParameter::Field => field_rate * d * d.min(1.0 / k2),
    };
    if rate > 0.0 {
        default.min(0.1 / rate)
    } else {
        default
    }
}

/// A point in the pumping parameter plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamPoint {
    pub width: f64,
    pub field: f64,
}

impl ParamPoint {
    pub const fn new(width: f64, field: f64) -> Self {
        Self { width, field }
    }

    pub fn get(self, param: PumpParameter) -> f64 {
        match param {
            PumpParameter::Width => self.width,
            PumpParameter::Field => self.field,
        }
    }

    pub fn with(self, param: PumpParameter, value: f64) -> Self {
        match param {
            PumpParameter::Width => Self { width: value, ..self },
            PumpParameter::Field => Self { field: value, ..self },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PumpParameter {
    /// `X1 = d`
    Width,
    /// `X2 = B_z`
    Field,
}

/// Anything that yields a unitary S-matrix as a function of width and field.
pub trait ScatteringProvider: Sync {
    fn ports(&self) -> usize;
    fn s_matrix_at(&self, point: ParamPoint) -> Result<ScatterMatrix>;

    /// Initial finite-difference step along `param`. Providers whose phases
    /// vary on a length scale shorter than one should shrink it.
    fn derivative_step(&self, point: ParamPoint, param: PumpParameter) -> f64 {
        STEP_FRACTION * point.get(param).abs().max(1.0)
    }
}

impl<P: ScatteringProvider + ?Sized> ScatteringProvider for &P {
    fn ports(&self) -> usize {
        (**self).ports()
    }

    fn s_matrix_at(&self, point: ParamPoint) -> Result<ScatterMatrix> {
        (**self).s_matrix_at(point)
    }

    fn derivative_step(&self, point: ParamPoint, param: PumpParameter) -> f64 {
        (**self).derivative_step(point, param)
    }
}

/// Sinusoidal modulation `X1 = d0 + dX1 sin(wt)`, `X2 = B + dX2 sin(wt + phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpCycle {
    pub mean_width: f64,
    pub mean_field: f64,
    pub width_amplitude: f64,
    pub field_amplitude: f64,
    pub phase: f64,
    pub omega: f64,
    /// Starting node count of the time quadrature (even, at least 16).
    pub nodes: usize,
    /// Permit the width to pass through zero during the cycle. The
    /// scattering formulas continue analytically to `d <= 0`.
    pub width_continuation: bool,
}

impl PumpCycle {
    /// Cycle with one shared amplitude for both parameters.
    pub fn new(mean_width: f64, mean_field: f64, amplitude: f64, phase: f64) -> Result<Self> {
        let cycle = Self {
            mean_width,
            mean_field,
            width_amplitude: amplitude,
            field_amplitude: amplitude,
            phase,
            omega: 1.0,
            nodes: DEFAULT_NODES,
            width_continuation: false,
        };
        cycle.validate()?;
        Ok(cycle)
    }

    pub fn with_amplitudes(mut self, width_amplitude: f64, field_amplitude: f64) -> Result<Self> {
        self.width_amplitude = width_amplitude;
        self.field_amplitude = field_amplitude;
        self.validate()?;
        Ok(self)
    }

    pub fn with_nodes(mut self, nodes: usize) -> Result<Self> {
        self.nodes = nodes;
        self.validate()?;
        Ok(self)
    }

    pub fn with_omega(mut self, omega: f64) -> Result<Self> {
        self.omega = omega;
        self.validate()?;
        Ok(self)
    }

    pub fn with_width_continuation(mut self, allow: bool) -> Result<Self> {
        self.width_continuation = allow;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let finite = [
            self.mean_width,
            self.mean_field,
            self.width_amplitude,
            self.field_amplitude,
            self.phase,
            self.omega,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(invalid("pump cycle", "non-finite parameter"));
        }
        if self.width_amplitude < 0.0 || self.field_amplitude < 0.0 {
            return Err(invalid("pump amplitude", "must be non-negative"));
        }
        if !(self.omega > 0.0) {
            return Err(invalid("pump frequency", "must be positive"));
        }
        if self.mean_width <= 0.0 {
            return Err(invalid("mean width", format!("must be positive, got {}", self.mean_width)));
        }
        if !self.width_continuation && self.width_amplitude >= self.mean_width {
            return Err(invalid(
                "width amplitude",
                format!(
                    "{} would drive the width through zero (mean {})",
                    self.width_amplitude, self.mean_width
                ),
            ));
        }
        if self.nodes < 16 || self.nodes % 2 != 0 {
            return Err(invalid("quadrature nodes", format!("need an even count >= 16, got {}", self.nodes)));
        }
        Ok(())
    }

    pub fn center(&self) -> ParamPoint {
        ParamPoint::new(self.mean_width, self.mean_field)
    }

    /// Parameters at cycle phase `theta = omega t`.
    pub fn point_at(&self, theta: f64) -> ParamPoint {
        ParamPoint::new(
            self.mean_width + self.width_amplitude * theta.sin(),
            self.mean_field + self.field_amplitude * (theta + self.phase).sin(),
        )
    }

    /// `(dX1/dt, dX2/dt)` at cycle phase `theta`.
    pub fn velocity_at(&self, theta: f64) -> (f64, f64) {
        (
            self.omega * self.width_amplitude * theta.cos(),
            self.omega * self.field_amplitude * (theta + self.phase).cos(),
        )
    }

    /// `I0 = omega dX1 dX2 sin(phi) / 2pi` (with `e = 1`).
    pub fn i0(&self) -> f64 {
        self.omega * self.width_amplitude * self.field_amplitude * self.phase.sin() / TAU
    }
}

/// The S-matrix and its two parametric derivatives at one point.
#[derive(Debug, Clone)]
pub struct Sensitivity {
    pub s: ScatterMatrix,
    pub d_width: CMatrix,
    pub d_field: CMatrix,
}

impl Sensitivity {
    pub fn derivative(&self, param: PumpParameter) -> &CMatrix {
        match param {
            PumpParameter::Width => &self.d_width,
            PumpParameter::Field => &self.d_field,
        }
    }

    /// `dN_lead/dX = (1/2pi) sum_b Im(ds_{lead,b}/dX conj(s_{lead,b}))`.
    pub fn emissivity(&self, lead: usize, param: PumpParameter) -> f64 {
        let ds = self.derivative(param);
        (0..self.s.dim())
            .map(|b| (ds[(lead, b)] * self.s.get(lead, b).conj()).im)
            .sum::<f64>()
            / TAU
    }

    /// `sum_b Im(conj(ds_{lead,b}/dB) ds_{lead,b}/dd)`, the weak-pumping
    /// current in units of `I0`.
    pub fn pumping_curl(&self, lead: usize) -> f64 {
        (0..self.s.dim())
            .map(|b| (self.d_field[(lead, b)].conj() * self.d_width[(lead, b)]).im)
            .sum()
    }

    /// `sum_i dN_lead/dX_i dX_i/dt`.
    pub fn emitted_rate(&self, lead: usize, velocity: (f64, f64)) -> f64 {
        self.emissivity(lead, PumpParameter::Width) * velocity.0
            + self.emissivity(lead, PumpParameter::Field) * velocity.1
    }

    /// `dS/dt` by the chain rule.
    pub fn time_derivative(&self, velocity: (f64, f64)) -> CMatrix {
        &self.d_width * num_complex::Complex64::new(velocity.0, 0.0)
            + &self.d_field * num_complex::Complex64::new(velocity.1, 0.0)
    }
}

/// Derivative of the provider's S-matrix along one parameter.
pub fn parametric_derivative<P: ScatteringProvider + ?Sized>(
    provider: &P,
    point: ParamPoint,
    param: PumpParameter,
) -> Result<CMatrix> {
    let x = point.get(param);
    let d = ridders(
        |v| provider.s_matrix_at(point.with(param, v)).map(ScatterMatrix::into_entries),
        x,
        provider.derivative_step(point, param),
    )?;
    Ok(d.value)
}

pub fn sensitivity<P: ScatteringProvider + ?Sized>(provider: &P, point: ParamPoint) -> Result<Sensitivity> {
    let s = provider.s_matrix_at(point)?;
    let deviation = s.unitarity_deviation();
    if deviation > UNITARITY_TOLERANCE {
        return Err(Error::NonUnitary { deviation });
    }
    Ok(Sensitivity {
        s,
        d_width: parametric_derivative(provider, point, PumpParameter::Width)?,
        d_field: parametric_derivative(provider, point, PumpParameter::Field)?,
    })
}

/// Emissivity `dN_lead/dX_param` at `point`.
pub fn emissivity<P: ScatteringProvider + ?Sized>(
    provider: &P,
    point: ParamPoint,
    lead: usize,
    param: PumpParameter,
) -> Result<f64> {
    let s = provider.s_matrix_at(point)?;
    let deviation = s.unitarity_deviation();
    if deviation > UNITARITY_TOLERANCE {
        return Err(Error::NonUnitary { deviation });
    }
    let ds = parametric_derivative(provider, point, param)?;
    Ok(Sensitivity {
        d_width: ds.clone(),
        d_field: ds,
        s,
    }
    .emissivity(lead, param))
}

/// Averages `integrand(sensitivity, velocity)` over one cycle.
///
/// The uniform trapezoid rule with node doubling is tried first. Large
/// cycles that sweep across the band edge or through narrow resonances give
/// integrands with sharp spikes; if the uniform rule has not converged by
/// [`MAX_NODES`] the average is recomputed with adaptive Gauss-Kronrod
/// quadrature.
pub fn cycle_average<const K: usize, P, F>(provider: &P, cycle: &PumpCycle, integrand: F) -> Result<[f64; K]>
where
    P: ScatteringProvider + ?Sized,
    F: Fn(&Sensitivity, (f64, f64)) -> [f64; K],
{
    let eval = |theta: f64| {
        let sens = sensitivity(provider, cycle.point_at(theta))?;
        Ok(integrand(&sens, cycle.velocity_at(theta)))
    };
    match periodic_mean(eval, cycle.nodes, MAX_NODES.max(2 * cycle.nodes), QUADRATURE_TOLERANCE) {
        Ok(mean) => Ok(mean.values),
        Err(Error::QuadratureNotConverged { .. }) => {
            let panels = cycle.nodes / 4;
            Ok(adaptive_mean(eval, panels, MAX_ADAPTIVE_EVALUATIONS, QUADRATURE_TOLERANCE)?.values)
        }
        Err(e) => Err(e),
    }
}

/// Pumped current into `lead` over one full cycle (any amplitude).
pub fn pumped_current_cycle<P: ScatteringProvider + ?Sized>(provider: &P, cycle: &PumpCycle, lead: usize) -> Result<f64> {
    if cycle.width_amplitude == 0.0 && cycle.field_amplitude == 0.0 {
        return Ok(0.0);
    }
    let [rate] = cycle_average(provider, cycle, |sens, v| [sens.emitted_rate(lead, v)])?;
    Ok(rate)
}

/// Weak-pumping current in units of `I0`, evaluated at `center`.
pub fn weak_pumping_kernel<P: ScatteringProvider + ?Sized>(provider: &P, center: ParamPoint, lead: usize) -> Result<f64> {
    Ok(sensitivity(provider, center)?.pumping_curl(lead))
}

/// Weak-pumping current `I0 sum_b Im(conj(ds/dB) ds/dd)` at the cycle centre.
pub fn pumped_current_weak<P: ScatteringProvider + ?Sized>(provider: &P, cycle: &PumpCycle, lead: usize) -> Result<f64> {
    Ok(cycle.i0() * weak_pumping_kernel(provider, cycle.center(), lead)?)
}

fn closed_form_wavevectors(energy: f64, field: f64) -> Result<(f64, f64)> {
    let k1_sq = 2.0 * energy;
    let k2_sq = k1_sq - field * field;
    if !(k1_sq > 0.0 && k2_sq > 0.0) {
        return Err(Error::BelowBarrierTop { energy, field });
    }
    Ok((k1_sq.sqrt(), k2_sq.sqrt()))
}

/// Analytic weak-pumping current into the left lead at `q = 0`, in units of
/// `I0`:
/// `-sigma 2 B^2 g* g' k1^3 k2^3 sin(2 k2 d) / T_d^2`.
pub fn pumped_current_closed_form(energy: f64, spin: Spin, width: f64, field: f64, g_star: f64) -> Result<f64> {
    let (k1, k2) = closed_form_wavevectors(energy, field)?;
    let td = closed_form_td(energy, &BarrierConfig::new(field, width, g_star, 0.0)?)?;
    Ok(-spin.sign() * 2.0 * field * field * g_star * reduced_g(g_star) * k1.powi(3) * k2.powi(3)
        * (2.0 * k2 * width).sin()
        / (td * td))
}

/// Large-energy limit of [`pumped_current_closed_form`] (`2E >> B^2`):
/// `-sigma g* g' B^2 sin(2 k2 d) / (8 k1 k2)`.
pub fn pumped_current_asymptotic(energy: f64, spin: Spin, width: f64, field: f64, g_star: f64) -> Result<f64> {
    let (k1, k2) = closed_form_wavevectors(energy, field)?;
    Ok(-spin.sign() * g_star * reduced_g(g_star) * field * field * (2.0 * k2 * width).sin() / (8.0 * k1 * k2))
}

/// How a [`CurrentResult`] is normalised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Normalization {
    /// Units of `e omega` (pumped charge per cycle over `2 pi`).
    Absolute,
    /// Weak-pumping values divided by `I0`.
    PerI0,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentResult {
    pub up: f64,
    pub down: f64,
    pub spin: f64,
    pub charge: f64,
    pub normalization: Normalization,
}

pub fn spin_charge(up: f64, down: f64, normalization: Normalization) -> CurrentResult {
    CurrentResult {
        up,
        down,
        spin: up - down,
        charge: up + down,
        normalization,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PumpingMode {
    /// Bilinear small-amplitude form at the cycle centre, per `I0`.
    Weak,
    /// Full time integral over the cycle.
    Cycle,
}

/// Both spin currents into `lead` for a provider family indexed by spin.
pub fn spin_resolved_currents<P, F>(make: F, cycle: &PumpCycle, mode: PumpingMode, lead: usize) -> Result<CurrentResult>
where
    P: ScatteringProvider,
    F: Fn(Spin) -> P,
{
    let mut values = [0.0; 2];
    for (slot, spin) in values.iter_mut().zip(Spin::ALL) {
        let provider = make(spin);
        *slot = match mode {
            PumpingMode::Weak => weak_pumping_kernel(&provider, cycle.center(), lead)?,
            PumpingMode::Cycle => pumped_current_cycle(&provider, cycle, lead)?,
        };
    }
    let normalization = match mode {
        PumpingMode::Weak => Normalization::PerI0,
        PumpingMode::Cycle => Normalization::Absolute,
    };
    Ok(spin_charge(values[0], values[1], normalization))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    pub n: usize,
    pub energy: f64,
    /// Whether `2 E_n > 4 B^2`, the regime in which the estimate is meant.
    pub asymptotic: bool,
}

/// Resonance estimate `E_n = (2n+1) pi / (8 d) + B^2 / 2` for `n = 0..=n_max`.
pub fn resonance_energies(n_max: usize, width: f64, field: f64) -> Result<Vec<Resonance>> {
    if !(width > 0.0) {
        return Err(invalid("width", format!("must be positive, got {width}")));
    }
    Ok((0..=n_max)
        .map(|n| {
            let energy = (2 * n + 1) as f64 * PI / (8.0 * width) + 0.5 * field * field;
            Resonance {
                n,
                energy,
                asymptotic: 2.0 * energy > 4.0 * field * field,
            }
        })
        .collect())
}

/// Energy at which `2 k2 d = (2n+1) pi / 2`, the extremum condition of the
/// large-energy current.
pub fn phase_resonance_energy(n: usize, width: f64, field: f64) -> f64 {
    let k2 = (2 * n + 1) as f64 * PI / (4.0 * width);
    0.5 * (k2 * k2 + field * field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::LEFT;
    use crate::scattering::CoherentBarrier;
    use approx::assert_relative_eq;

    #[test]
    fn cycle_validation() {
        assert!(PumpCycle::new(5.0, 5.0, 5.0, 0.3).is_err());
        assert!(PumpCycle::new(5.0, 5.0, 6.0, 0.3).unwrap_err().to_string().contains("width"));
        assert!(PumpCycle::new(5.0, 5.0, 1.0, 0.3).unwrap().with_nodes(15).is_err());
        assert!(PumpCycle::new(5.0, 5.0, 1.0, 0.3).unwrap().with_nodes(18).is_ok());
        assert!(PumpCycle::new(-1.0, 5.0, 0.0, 0.3).is_err());
        assert!(PumpCycle::new(5.0, 5.0, -0.1, 0.3).is_err());
        let c = PumpCycle {
            width_amplitude: 6.0,
            field_amplitude: 6.0,
            ..PumpCycle::new(5.0, 5.0, 1.0, 0.3).unwrap()
        };
        assert!(c.with_width_continuation(true).is_ok());
    }

    #[test]
    fn cycle_geometry() {
        let c = PumpCycle::new(5.0, 4.0, 0.5, PI / 2.0).unwrap();
        let p = c.point_at(0.0);
        assert_relative_eq!(p.width, 5.0);
        assert_relative_eq!(p.field, 4.5);
        let v = c.velocity_at(0.0);
        assert_relative_eq!(v.0, 0.5);
        assert!(v.1.abs() < 1e-15);
        assert_relative_eq!(c.i0(), 0.25 / TAU);
    }

    #[test]
    fn spin_charge_examples() {
        let r = spin_charge(1.0, -1.0, Normalization::Absolute);
        assert_eq!((r.spin, r.charge), (2.0, 0.0));
        let r = spin_charge(0.0, 0.0, Normalization::PerI0);
        assert_eq!((r.spin, r.charge), (0.0, 0.0));
        let up = pumped_current_closed_form(30.0, Spin::Up, 5.0, 5.0, 0.44).unwrap();
        let down = pumped_current_closed_form(30.0, Spin::Down, 5.0, 5.0, 0.44).unwrap();
        assert_eq!(spin_charge(up, down, Normalization::PerI0).charge, 0.0);
    }

    #[test]
    fn closed_form_node_and_spin_flip() {
        // sin(2 k2 d) = 0 at k2 = pi / d
        let k2 = PI / 5.0;
        let e = 0.5 * (k2 * k2 + 25.0);
        assert!(pumped_current_closed_form(e, Spin::Up, 5.0, 5.0, 0.44).unwrap().abs() < 1e-12);
        for &e in &[13.0, 23.12, 44.6] {
            let up = pumped_current_closed_form(e, Spin::Up, 5.0, 5.0, 0.44).unwrap();
            let down = pumped_current_closed_form(e, Spin::Down, 5.0, 5.0, 0.44).unwrap();
            assert_eq!(up, -down);
        }
        assert!(pumped_current_closed_form(12.0, Spin::Up, 5.0, 5.0, 0.44).is_err());
    }

    #[test]
    fn resonance_examples() {
        let r = resonance_energies(3, 5.0, 5.0).unwrap();
        assert_relative_eq!(r[0].energy, PI / 40.0 + 12.5, max_relative = 1e-15);
        assert_relative_eq!(r[0].energy, 12.5785, epsilon = 1e-4);
        for w in r.windows(2) {
            assert_relative_eq!(w[1].energy - w[0].energy, PI / 20.0, max_relative = 1e-12);
        }
        assert!(!r[0].asymptotic);
        assert!(resonance_energies(1, 0.0, 1.0).is_err());
        let k2 = (2.0 * (phase_resonance_energy(2, 5.0, 2.0) - 2.0)).sqrt();
        assert_relative_eq!(2.0 * k2 * 5.0, 2.5 * PI, max_relative = 1e-14);
    }

    #[test]
    fn weak_current_vanishes_at_phase_pi() {
        let p = CoherentBarrier::new(30.0, Spin::Up, 0.44, 0.0);
        let cycle = PumpCycle::new(5.0, 5.0, 0.1, PI).unwrap();
        assert!(pumped_current_weak(&p, &cycle, LEFT).unwrap().abs() < 1e-17);
    }

    #[test]
    fn zero_phase_cycle_pumps_nothing() {
        let p = CoherentBarrier::new(30.0, Spin::Up, 0.44, 0.0);
        let cycle = PumpCycle::new(5.0, 5.0, 0.5, 0.0).unwrap();
        let i = pumped_current_cycle(&p, &cycle, LEFT).unwrap();
        assert!(i.abs() < 1e-12, "{i}");
    }

    #[test]
    fn emissivity_without_zeeman_is_spin_independent() {
        let point = ParamPoint::new(5.0, 0.0);
        for param in [PumpParameter::Width, PumpParameter::Field] {
            let up = emissivity(&CoherentBarrier::new(20.0, Spin::Up, 0.0, 0.0), point, LEFT, param).unwrap();
            let down = emissivity(&CoherentBarrier::new(20.0, Spin::Down, 0.0, 0.0), point, LEFT, param).unwrap();
            assert!(up.is_finite());
            assert!((up - down).abs() < 1e-14);
        }
    }
}
