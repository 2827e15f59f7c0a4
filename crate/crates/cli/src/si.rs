//! Conversion of dimensionless results to SI units.
//!
//! Lengths are measured in the magnetic length `l_B = sqrt(hbar / e B0)`,
//! energies in `E0 = hbar e B0 / m*`, and currents in `e omega`.

use std::f64::consts::TAU;

pub const HBAR: f64 = 1.054_571_817e-34;
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiScales {
    /// Reference field in tesla.
    pub b0: f64,
    /// Effective mass in units of the free electron mass.
    pub m_eff: f64,
}

impl SiScales {
    pub fn new(b0: f64, m_eff: f64) -> anyhow::Result<Self> {
        anyhow::ensure!(b0.is_finite() && b0 > 0.0, "reference field must be positive, got {b0}");
        anyhow::ensure!(m_eff.is_finite() && m_eff > 0.0, "effective mass must be positive, got {m_eff}");
        Ok(Self { b0, m_eff })
    }

    /// Magnetic length in metres.
    pub fn length(&self) -> f64 {
        (HBAR / (ELEMENTARY_CHARGE * self.b0)).sqrt()
    }

    pub fn length_angstrom(&self) -> f64 {
        self.length() * 1e10
    }

    /// Cyclotron angular frequency `e B0 / m*` in rad/s.
    pub fn cyclotron_frequency(&self) -> f64 {
        ELEMENTARY_CHARGE * self.b0 / (self.m_eff * ELECTRON_MASS)
    }

    /// Energy unit in joules.
    pub fn energy(&self) -> f64 {
        HBAR * self.cyclotron_frequency()
    }

    pub fn energy_mev(&self) -> f64 {
        self.energy() / ELEMENTARY_CHARGE * 1e3
    }

    /// Converts a current in units of `e omega` at pump frequency `freq` (Hz)
    /// to amperes. The frequency is taken as cyclic, so one pumped electron
    /// per cycle gives `e f`.
    pub fn current(value: f64, freq: f64) -> f64 {
        ELEMENTARY_CHARGE * freq * value
    }

    /// Same conversion with the angular frequency `2 pi f` in place of `f`.
    pub fn current_angular(value: f64, freq: f64) -> f64 {
        ELEMENTARY_CHARGE * TAU * freq * value
    }
}
