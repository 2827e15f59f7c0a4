//! Dephasing through a fictitious voltage probe.
//!
//! A four-port splitter sits at the barrier centre and couples the
//! in-barrier wave to two probe channels with strength `epsilon`. The probe
//! draws no net current, so whatever the pump pushes into it is re-injected
//! into the leads in proportion to the probe-to-lead transmissions.
//!
//! Port order of the composite: left lead, right lead, probe channel 3,
//! probe channel 4. Lead ports use the same centre reference as the
//! coherent barrier.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::matrix::{connect, Link, PortRef, ScatterMatrix, LEFT, PROBE_A, PROBE_B, RIGHT};
use crate::pump::{
    cycle_average, sensitivity, spin_charge, barrier_step, CurrentResult, Normalization, ParamPoint, PumpCycle, PumpParameter,
    PumpingMode, ScatteringProvider, Sensitivity,
};
use crate::scattering::{interface_s_matrix, lead_wavevector, zeeman_jump, Spin};

/// Probe coupling strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitterConfig {
    pub epsilon: f64,
}

impl SplitterConfig {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(invalid("epsilon", format!("must lie in [0, 1], got {epsilon}")));
        }
        Ok(Self { epsilon })
    }
}

/// `1 - exp(-d / d_phi)`.
pub fn epsilon_from_coherence(width: f64, coherence_length: f64) -> Result<f64> {
    if !(coherence_length > 0.0) {
        return Err(invalid("coherence length", format!("must be positive, got {coherence_length}")));
    }
    Ok(1.0 - (-width / coherence_length).exp())
}

/// The real orthogonal splitter. Ports 0 and 1 face the left and right
/// halves of the barrier; ports 2 and 3 are the probe channels.
pub fn splitter_matrix(epsilon: f64) -> Result<ScatterMatrix> {
    let SplitterConfig { epsilon } = SplitterConfig::new(epsilon)?;
    let a = (1.0 - epsilon).sqrt();
    let b = epsilon.sqrt();
    #[rustfmt::skip]
    let rows = [
        0.0, a,   b,   0.0,
        a,   0.0, 0.0, b,
        b,   0.0, 0.0, -a,
        0.0, b,   -a,  0.0,
    ];
    ScatterMatrix::new(crate::matrix::CMatrix::from_row_slice(
        4,
        4,
        &rows.map(|v| Complex64::new(v, 0.0)),
    ))
}

/// A composite S-matrix together with the phase accumulated on each
/// half-barrier segment.
#[derive(Debug, Clone)]
pub struct CompositeSystem {
    pub s: ScatterMatrix,
    pub segment_phase: Complex64,
}

/// Joins `left` (outer port 0, inner port 1), the splitter and `right`
/// (inner port 0, outer port 1) with segments of length `width/2` and
/// wavevector `k2` on either side of the splitter. Reference planes of the
/// outer ports stay at the outer faces of `left` and `right`.
pub fn compose(left: &ScatterMatrix, splitter: &ScatterMatrix, right: &ScatterMatrix, k2: f64, width: f64) -> Result<CompositeSystem> {
    if left.dim() != 2 || right.dim() != 2 || splitter.dim() != 4 {
        return Err(invalid("composite", "expects two 2-ports and one 4-port"));
    }
    let segment_phase = Complex64::from_polar(1.0, 0.5 * k2 * width);
    let links = [
        Link {
            a: PortRef::new(0, 1),
            b: PortRef::new(1, 0),
            phase: segment_phase,
        },
        Link {
            a: PortRef::new(1, 1),
            b: PortRef::new(2, 0),
            phase: segment_phase,
        },
    ];
    let external = [
        PortRef::new(0, 0),
        PortRef::new(2, 1),
        PortRef::new(1, 2),
        PortRef::new(1, 3),
    ];
    let s = connect(&[left, splitter, right], &links, &external)?;
    Ok(CompositeSystem { s, segment_phase })
}

/// Four-port S-matrix of the barrier with the probe at its centre.
pub fn composite_s_matrix(energy: f64, spin: Spin, point: ParamPoint, g_star: f64, q: f64, epsilon: f64) -> Result<ScatterMatrix> {
    let k1 = lead_wavevector(energy, q)?;
    let k2_sq = 2.0 * energy - (q + point.field).powi(2);
    if !(k2_sq > 0.0) {
        return Err(Error::EvanescentSegment { k2_sq });
    }
    let k2 = k2_sq.sqrt();
    let kappa = zeeman_jump(spin, point.field, g_star);
    let left = interface_s_matrix(k1, k2, kappa)?;
    let right = interface_s_matrix(k2, k1, -kappa)?;
    let mut s = compose(&left, &splitter_matrix(epsilon)?, &right, k2, point.width)?.s;
    let lead_shift = Complex64::from_polar(1.0, -0.5 * k1 * point.width);
    s.shift_reference(LEFT, lead_shift);
    s.shift_reference(RIGHT, lead_shift);
    Ok(s)
}

/// Re-injection fraction into the left lead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReinjectionFraction {
    pub value: f64,
    /// Set when the probe does not couple to the leads at all.
    pub probe_decoupled: bool,
}

impl ReinjectionFraction {
    /// Fraction for `lead`; the right lead gets the complement.
    pub fn for_lead(&self, lead: usize) -> f64 {
        if self.probe_decoupled {
            0.0
        } else if lead == LEFT {
            self.value
        } else {
            1.0 - self.value
        }
    }
}

/// `K_in = (T31 + T41) / (T31 + T41 + T32 + T42)`.
pub fn k_in(composite: &ScatterMatrix) -> ReinjectionFraction {
    let from_left = composite.probability(PROBE_A, LEFT) + composite.probability(PROBE_B, LEFT);
    let from_right = composite.probability(PROBE_A, RIGHT) + composite.probability(PROBE_B, RIGHT);
    let total = from_left + from_right;
    if total <= 1e-14 {
        ReinjectionFraction {
            value: 0.0,
            probe_decoupled: true,
        }
    } else {
        ReinjectionFraction {
            value: from_left / total,
            probe_decoupled: false,
        }
    }
}

/// The dephased barrier as a four-port pumping provider.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasedBarrier {
    pub energy: f64,
    pub spin: Spin,
    pub g_star: f64,
    pub q: f64,
    pub epsilon: f64,
}

impl DephasedBarrier {
    pub fn new(energy: f64, spin: Spin, g_star: f64, q: f64, epsilon: f64) -> Result<Self> {
        SplitterConfig::new(epsilon)?;
        Ok(Self {
            energy,
            spin,
            g_star,
            q,
            epsilon,
        })
    }
}

impl ScatteringProvider for DephasedBarrier {
    fn ports(&self) -> usize {
        4
    }

    fn s_matrix_at(&self, point: ParamPoint) -> Result<ScatterMatrix> {
        composite_s_matrix(self.energy, self.spin, point, self.g_star, self.q, self.epsilon)
    }

    fn derivative_step(&self, point: ParamPoint, param: PumpParameter) -> f64 {
        let k1 = (2.0 * self.energy - self.q * self.q).abs().sqrt();
        let k2_sq = 2.0 * self.energy - (self.q + point.field).powi(2);
        barrier_step(point, param, k1, k2_sq, (self.q + point.field).abs())
    }
}

fn dephased_rate(sens: &Sensitivity, velocity: (f64, f64), lead: usize) -> f64 {
    let k = k_in(&sens.s).for_lead(lead);
    sens.emitted_rate(lead, velocity) + k * (sens.emitted_rate(PROBE_A, velocity) + sens.emitted_rate(PROBE_B, velocity))
}

fn dephased_curl(sens: &Sensitivity, lead: usize) -> f64 {
    let k = k_in(&sens.s).for_lead(lead);
    sens.pumping_curl(lead) + k * (sens.pumping_curl(PROBE_A) + sens.pumping_curl(PROBE_B))
}

/// Dephased pumped current into `lead` (left or right) for one spin.
///
/// Cycle mode evaluates the re-injection fraction at every instant; weak
/// mode uses its value at the cycle centre and returns the current in units
/// of `I0`.
pub fn pumped_current_dephased(provider: &DephasedBarrier, cycle: &PumpCycle, mode: PumpingMode, lead: usize) -> Result<f64> {
    if lead != LEFT && lead != RIGHT {
        return Err(invalid("lead", format!("dephased currents are defined for the two leads, got port {lead}")));
    }
    match mode {
        PumpingMode::Weak => Ok(dephased_curl(&sensitivity(provider, cycle.center())?, lead)),
        PumpingMode::Cycle => {
            if cycle.width_amplitude == 0.0 && cycle.field_amplitude == 0.0 {
                return Ok(0.0);
            }
            let [rate] = cycle_average(provider, cycle, |sens, v| [dephased_rate(sens, v, lead)])?;
            Ok(rate)
        }
    }
}

/// Both spin currents into the left lead with dephasing strength `epsilon`.
pub fn dephased_currents(energy: f64, cycle: &PumpCycle, g_star: f64, q: f64, epsilon: f64, mode: PumpingMode) -> Result<CurrentResult> {
    let mut values = [0.0; 2];
    for (slot, spin) in values.iter_mut().zip(Spin::ALL) {
        let provider = DephasedBarrier::new(energy, spin, g_star, q, epsilon)?;
        *slot = pumped_current_dephased(&provider, cycle, mode, LEFT)?;
    }
    let normalization = match mode {
        PumpingMode::Weak => Normalization::PerI0,
        PumpingMode::Cycle => Normalization::Absolute,
    };
    Ok(spin_charge(values[0], values[1], normalization))
}
