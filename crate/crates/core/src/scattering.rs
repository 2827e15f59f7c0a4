//! Static scattering off the double-delta magnetic barrier.
//!
//! Lengths are in units of the magnetic length and energies in units of the
//! cyclotron energy. The barrier occupies `(-d/2, d/2)` with the vector
//! potential `A = b` inside and `0` outside. The Zeeman term is a pair of
//! delta functions of opposite sign at the two edges, so the logarithmic
//! derivative jumps by `+kappa` at `-d/2` and by `-kappa` at `+d/2`, with
//! `kappa = g* sigma b / 2`.
//!
//! Lead waves are written in global coordinates, `e^{+-i k1 x}`, so the
//! reference planes of both leads sit at the barrier centre and do not move
//! when the width is modulated.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::matrix::{ScatterMatrix, LEFT, RIGHT};
use crate::pump::{barrier_step, ParamPoint, PumpParameter, ScatteringProvider};

/// `|k2|` below this is treated as the band edge.
pub const BAND_EDGE_TOLERANCE: f64 = 1e-12;

/// Static device parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierConfig {
    /// Field strength `B_z` in units of `B_0`; the sign is the magnetization direction.
    pub field: f64,
    /// Separation `d` of the two delta functions.
    pub width: f64,
    pub g_star: f64,
    /// Transverse wavevector `q`.
    pub q: f64,
}

impl BarrierConfig {
    pub fn new(field: f64, width: f64, g_star: f64, q: f64) -> Result<Self> {
        for (name, v) in [("field", field), ("width", width), ("g*", g_star), ("q", q)] {
            if !v.is_finite() {
                return Err(invalid(name, format!("{v} is not finite")));
            }
        }
        if width <= 0.0 {
            return Err(invalid("width", format!("must be positive, got {width}")));
        }
        Ok(Self {
            field,
            width,
            g_star,
            q,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const ALL: [Spin; 2] = [Spin::Up, Spin::Down];

    /// `sigma = +1` for up, `-1` for down.
    pub fn sign(self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }

    pub fn flipped(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveVectors {
    /// Lead wavevector `sqrt(2E - q^2)`.
    pub k1: f64,
    /// In-barrier wavevector `sqrt(2E - (q + b)^2)` for left incidence.
    pub k2: Complex64,
    /// `sqrt(2E - (q - b)^2)`: the value obtained if the vector potential
    /// flipped sign for right incidence. The matrices here use the fixed
    /// gauge for both directions; the two coincide at `q = 0`.
    pub k2_right: Complex64,
}

/// Square root with the evanescent branch `+i sqrt(|x|)` for negative input.
pub fn branch_sqrt(x: f64) -> Complex64 {
    if x >= 0.0 {
        Complex64::new(x.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-x).sqrt())
    }
}

pub fn lead_wavevector(energy: f64, q: f64) -> Result<f64> {
    let k1_sq = 2.0 * energy - q * q;
    if !(k1_sq > 0.0) {
        return Err(Error::NoPropagatingMode {
            two_e: 2.0 * energy,
            q_sq: q * q,
        });
    }
    Ok(k1_sq.sqrt())
}

pub fn wavevectors(energy: f64, cfg: &BarrierConfig) -> Result<WaveVectors> {
    let k1 = lead_wavevector(energy, cfg.q)?;
    Ok(WaveVectors {
        k1,
        k2: branch_sqrt(2.0 * energy - (cfg.q + cfg.field).powi(2)),
        k2_right: branch_sqrt(2.0 * energy - (cfg.q - cfg.field).powi(2)),
    })
}

/// Jump of the logarithmic derivative at the left delta, `g* sigma b / 2`.
pub fn zeeman_jump(spin: Spin, field: f64, g_star: f64) -> f64 {
    0.5 * g_star * spin.sign() * field
}

/// Real 2x2 transfer matrix acting on `(psi, psi')`.
type Transfer = [[f64; 2]; 2];

fn mul(a: &Transfer, b: &Transfer) -> Transfer {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

/// Free propagation over `len` with `psi'' = -k2_sq psi`. Written in terms
/// of `cos(k len)` and `sin(k len)/k`, both entire in `k2_sq`, so the band
/// edge and the evanescent side need no special casing.
fn region_transfer(k2_sq: f64, len: f64) -> Transfer {
    let z = k2_sq * len * len;
    let (c, s_over_k) = if z.abs() < 1e-6 {
        (1.0 - z / 2.0 + z * z / 24.0, len * (1.0 - z / 6.0 + z * z / 120.0))
    } else if k2_sq > 0.0 {
        let k = k2_sq.sqrt();
        ((k * len).cos(), (k * len).sin() / k)
    } else {
        let kappa = (-k2_sq).sqrt();
        ((kappa * len).cosh(), (kappa * len).sinh() / kappa)
    };
    [[c, s_over_k], [-k2_sq * s_over_k, c]]
}

fn delta_jump(strength: f64) -> Transfer {
    [[1.0, 0.0], [strength, 1.0]]
}

/// S-matrix of the barrier given the lead wavevector, the squared in-barrier
/// wavevector, the Zeeman jump and the width. No band-edge or sign checks on
/// the width: negative widths are the analytic continuation of the same
/// formulas.
pub(crate) fn barrier_s_matrix(k1: f64, k2_sq: f64, kappa: f64, width: f64) -> Result<ScatterMatrix> {
    let m = mul(
        &delta_jump(-kappa),
        &mul(&region_transfer(k2_sq, width), &delta_jump(kappa)),
    );
    let i = Complex64::i();
    let d = Complex64::new(m[0][0] + m[1][1], m[1][0] / k1 - k1 * m[0][1]);
    let den = Complex64::from_polar(1.0, k1 * width) * d;
    let a = m[0][0] - m[1][1];
    let b = k1 * m[0][1] + m[1][0] / k1;
    let r = -(a + i * b) / den;
    let r_prime = (a - i * b) / den;
    let t = 2.0 / den;
    ScatterMatrix::two_port(r, t, t, r_prime)
}

fn check_band_edge(k2: Complex64) -> Result<()> {
    if k2.norm() < BAND_EDGE_TOLERANCE {
        return Err(Error::BandEdge { k2_abs: k2.norm() });
    }
    Ok(())
}

/// Spin-resolved 2x2 S-matrix `[[r, t'], [t, r']]`.
pub fn s_matrix(energy: f64, spin: Spin, cfg: &BarrierConfig) -> Result<ScatterMatrix> {
    let wv = wavevectors(energy, cfg)?;
    check_band_edge(wv.k2)?;
    barrier_s_matrix(
        wv.k1,
        2.0 * energy - (cfg.q + cfg.field).powi(2),
        zeeman_jump(spin, cfg.field, cfg.g_star),
        cfg.width,
    )
}

/// Transmission probability `|t|^2` from the left lead to the right lead.
pub fn transmission(energy: f64, spin: Spin, cfg: &BarrierConfig) -> Result<f64> {
    Ok(s_matrix(energy, spin, cfg)?.probability(RIGHT, LEFT))
}

/// `g' = 1 - g*^2 / 4`.
pub fn reduced_g(g_star: f64) -> f64 {
    1.0 - 0.25 * g_star * g_star
}

/// Denominator of the transmission at `q = 0`:
/// `T_d = 4 k1^2 k2^2 cos^2(k2 d) + (4E - g' B^2)^2 sin^2(k2 d)`, so that
/// `|t|^2 = 4 k1^2 k2^2 / T_d`.
pub fn closed_form_td(energy: f64, cfg: &BarrierConfig) -> Result<f64> {
    if cfg.q != 0.0 {
        return Err(Error::NonzeroTransverse { q: cfg.q });
    }
    let k1_sq = 2.0 * energy;
    let k2_sq = k1_sq - cfg.field * cfg.field;
    if !(k1_sq > 0.0 && k2_sq > 0.0) {
        return Err(Error::BelowBarrierTop {
            energy,
            field: cfg.field,
        });
    }
    let (s, c) = (k2_sq.sqrt() * cfg.width).sin_cos();
    let g = 4.0 * energy - reduced_g(cfg.g_star) * cfg.field * cfg.field;
    Ok(4.0 * k1_sq * k2_sq * c * c + g * g * s * s)
}

/// Flux-normalised S-matrix of a single delta interface between a region
/// with wavevector `k_left` and one with `k_right`, reference planes at the
/// interface. `jump` is `psi'(0+) - psi'(0-)` divided by `psi(0)`.
pub fn interface_s_matrix(k_left: f64, k_right: f64, jump: f64) -> Result<ScatterMatrix> {
    if !(k_left > 0.0 && k_right > 0.0) {
        return Err(invalid(
            "interface wavevectors",
            format!("need propagating modes on both sides, got {k_left}, {k_right}"),
        ));
    }
    let i = Complex64::i();
    let d = i * (k_left + k_right) - jump;
    let cross = 2.0 * i * (k_left * k_right).sqrt() / d;
    ScatterMatrix::two_port(
        (i * (k_left - k_right) + jump) / d,
        cross,
        cross,
        (i * (k_right - k_left) + jump) / d,
    )
}

/// The coherent barrier as a function of the two pumping parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentBarrier {
    pub energy: f64,
    pub spin: Spin,
    pub g_star: f64,
    pub q: f64,
}

impl CoherentBarrier {
    pub fn new(energy: f64, spin: Spin, g_star: f64, q: f64) -> Self {
        Self {
            energy,
            spin,
            g_star,
            q,
        }
    }
}

impl ScatteringProvider for CoherentBarrier {
    fn ports(&self) -> usize {
        2
    }

    fn s_matrix_at(&self, point: ParamPoint) -> Result<ScatterMatrix> {
        let k1 = lead_wavevector(self.energy, self.q)?;
        let k2_sq = 2.0 * self.energy - (self.q + point.field).powi(2);
        check_band_edge(branch_sqrt(k2_sq))?;
        barrier_s_matrix(
            k1,
            k2_sq,
            zeeman_jump(self.spin, point.field, self.g_star),
            point.width,
        )
    }

    fn derivative_step(&self, point: ParamPoint, param: PumpParameter) -> f64 {
        let k1 = (2.0 * self.energy - self.q * self.q).abs().sqrt();
        let k2_sq = 2.0 * self.energy - (self.q + point.field).powi(2);
        barrier_step(point, param, k1, k2_sq, (self.q + point.field).abs())
    }
}
