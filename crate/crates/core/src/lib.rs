//! Adiabatic spin pumping through a double-delta magnetic barrier in a
//! two-dimensional electron gas.
//!
//! All quantities are dimensionless: lengths in units of the magnetic length
//! `l_B`, energies in units of the cyclotron energy `E0`, fields in units of
//! the reference field `B0`, with `hbar = e = 1` and pump frequency `omega = 1`
//! unless set otherwise.

pub mod error;
pub mod matrix;
pub mod numerics;
pub mod pump;
pub mod scattering;
pub mod soc;
pub mod dephasing;
pub mod thermo;

pub use error::{Error, Result};
pub use matrix::{ScatterMatrix, LEFT, PROBE_A, PROBE_B, RIGHT};
pub use pump::{CurrentResult, ParamPoint, PumpCycle, PumpParameter, PumpingMode, ScatteringProvider};
pub use scattering::{BarrierConfig, CoherentBarrier, Spin};
