//! Spin-orbit coupling inside the barrier region.
//!
//! Only the in-barrier energy is modified: each spin sees the split branch
//! `E_sigma = E - s sigma alpha sqrt(2E + (q + b)^2)` and the wavevector
//! `k2_sigma = sqrt(2 E_sigma - (q + b)^2)`. Leads and delta interfaces are
//! unchanged and spin-flip amplitudes are not modelled. Dresselhaus coupling
//! uses the same splitting with `alpha_D` in place of `alpha_R`.

use crate::error::{invalid, Error, Result};
use crate::matrix::ScatterMatrix;
use crate::pump::{
    pumped_current_cycle, spin_resolved_currents, barrier_step, weak_pumping_kernel, CurrentResult, ParamPoint,
    PumpCycle, PumpParameter, PumpingMode, ScatteringProvider,
};
use crate::scattering::{
    barrier_s_matrix, branch_sqrt, lead_wavevector, zeeman_jump, BarrierConfig, Spin, BAND_EDGE_TOLERANCE,
};

/// Which spin the positive coupling pushes down in energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BranchConvention {
    /// `E_up = E - alpha sqrt(...)`.
    #[default]
    UpLowered,
    /// `E_up = E + alpha sqrt(...)`.
    UpRaised,
}

impl BranchConvention {
    fn sign(self) -> f64 {
        match self {
            BranchConvention::UpLowered => 1.0,
            BranchConvention::UpRaised => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SocConfig {
    pub alpha_r: f64,
    pub alpha_d: f64,
    pub convention: BranchConvention,
}

impl SocConfig {
    pub fn rashba(alpha: f64) -> Result<Self> {
        Self::new(alpha, 0.0)
    }

    pub fn dresselhaus(alpha: f64) -> Result<Self> {
        Self::new(0.0, alpha)
    }

    pub fn new(alpha_r: f64, alpha_d: f64) -> Result<Self> {
        for (name, v) in [("alpha_R", alpha_r), ("alpha_D", alpha_d)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(name, format!("must be finite and non-negative, got {v}")));
            }
        }
        if alpha_r > 0.0 && alpha_d > 0.0 {
            return Err(invalid("spin-orbit coupling", "at most one of alpha_R, alpha_D may be nonzero"));
        }
        Ok(Self {
            alpha_r,
            alpha_d,
            convention: BranchConvention::default(),
        })
    }

    pub fn with_convention(mut self, convention: BranchConvention) -> Self {
        self.convention = convention;
        self
    }

    /// The active coupling strength.
    pub fn alpha(&self) -> f64 {
        self.alpha_r.max(self.alpha_d)
    }

    /// Spin-orbit length `1/alpha`; infinite without coupling.
    pub fn spin_orbit_length(&self) -> f64 {
        1.0 / self.alpha()
    }
}

/// `(E + alpha sqrt(2E + (q+b)^2), E - alpha sqrt(2E + (q+b)^2))`.
pub fn rashba_split_energies(energy: f64, q: f64, field: f64, alpha: f64) -> (f64, f64) {
    let root = (2.0 * energy + (q + field).powi(2)).max(0.0).sqrt();
    (energy + alpha * root, energy - alpha * root)
}

/// In-barrier energy seen by `spin`.
pub fn branch_energy(energy: f64, spin: Spin, q: f64, field: f64, soc: &SocConfig) -> f64 {
    let (raised, lowered) = rashba_split_energies(energy, q, field, soc.alpha());
    if soc.convention.sign() * spin.sign() > 0.0 {
        lowered
    } else {
        raised
    }
}

fn soc_matrix(energy: f64, spin: Spin, q: f64, g_star: f64, soc: &SocConfig, point: ParamPoint) -> Result<ScatterMatrix> {
    let k1 = lead_wavevector(energy, q)?;
    let e_branch = branch_energy(energy, spin, q, point.field, soc);
    let k2_sq = 2.0 * e_branch - (q + point.field).powi(2);
    let k2 = branch_sqrt(k2_sq);
    if k2.norm() < BAND_EDGE_TOLERANCE {
        return Err(Error::BandEdge { k2_abs: k2.norm() });
    }
    barrier_s_matrix(k1, k2_sq, zeeman_jump(spin, point.field, g_star), point.width)
}

/// Spin-resolved S-matrix with the split in-barrier wavevector.
pub fn s_matrix_soc(energy: f64, spin: Spin, cfg: &BarrierConfig, soc: &SocConfig) -> Result<ScatterMatrix> {
    soc_matrix(energy, spin, cfg.q, cfg.g_star, soc, ParamPoint::new(cfg.width, cfg.field))
}

/// The spin-orbit barrier as a pumping provider.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SocBarrier {
    pub energy: f64,
    pub spin: Spin,
    pub g_star: f64,
    pub q: f64,
    pub soc: SocConfig,
}

impl SocBarrier {
    pub fn new(energy: f64, spin: Spin, g_star: f64, q: f64, soc: SocConfig) -> Self {
        Self {
            energy,
            spin,
            g_star,
            q,
            soc,
        }
    }
}

impl ScatteringProvider for SocBarrier {
    fn ports(&self) -> usize {
        2
    }

    fn s_matrix_at(&self, point: ParamPoint) -> Result<ScatterMatrix> {
        soc_matrix(self.energy, self.spin, self.q, self.g_star, &self.soc, point)
    }

    fn derivative_step(&self, point: ParamPoint, param: PumpParameter) -> f64 {
        let k1 = (2.0 * self.energy - self.q * self.q).abs().sqrt();
        let e_branch = branch_energy(self.energy, self.spin, self.q, point.field, &self.soc);
        let k2_sq = 2.0 * e_branch - (self.q + point.field).powi(2);
        // dE_sigma/dB adds at most alpha |q + b| / sqrt(2E + (q + b)^2) <= alpha
        barrier_step(point, param, k1, k2_sq, (1.0 + self.soc.alpha()) * (self.q + point.field).abs())
    }
}

/// Spin-resolved pumped currents into the left lead with spin-orbit coupling.
pub fn soc_pumped_currents(
    energy: f64,
    cycle: &PumpCycle,
    g_star: f64,
    q: f64,
    soc: &SocConfig,
    mode: PumpingMode,
) -> Result<CurrentResult> {
    spin_resolved_currents(|spin| SocBarrier::new(energy, spin, g_star, q, *soc), cycle, mode, crate::matrix::LEFT)
}

/// Single-spin pumped current, for callers that only need one branch.
pub fn soc_pumped_current(energy: f64, spin: Spin, cycle: &PumpCycle, g_star: f64, q: f64, soc: &SocConfig, mode: PumpingMode) -> Result<f64> {
    let provider = SocBarrier::new(energy, spin, g_star, q, *soc);
    match mode {
        PumpingMode::Weak => weak_pumping_kernel(&provider, cycle.center(), crate::matrix::LEFT),
        PumpingMode::Cycle => pumped_current_cycle(&provider, cycle, crate::matrix::LEFT),
    }
}
