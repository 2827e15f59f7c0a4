//! Scattering matrices and their composition into networks.
//!
//! Ports are addressed with zero-based indices. The labels below follow the
//! device layout: the two physical leads come first and, for the dephasing
//! composite, the two probe channels follow.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Left lead (channel 1).
pub const LEFT: usize = 0;
/// Right lead (channel 2).
pub const RIGHT: usize = 1;
/// First probe channel (channel 3).
pub const PROBE_A: usize = 2;
/// Second probe channel (channel 4).
pub const PROBE_B: usize = 3;

pub type CMatrix = DMatrix<Complex64>;

/// A square complex scattering matrix. Element `(a, b)` is the amplitude for
/// a wave entering port `b` to leave through port `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterMatrix {
    entries: CMatrix,
}

impl ScatterMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(crate::error::invalid(
                "scattering matrix",
                format!("expected a square matrix, got {}x{}", entries.nrows(), entries.ncols()),
            ));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { entries })
    }

    /// Builds a 2x2 matrix from reflection and transmission amplitudes laid
    /// out as `[[r, t'], [t, r']]`.
    pub fn two_port(r: Complex64, t_prime: Complex64, t: Complex64, r_prime: Complex64) -> Result<Self> {
        Self::new(CMatrix::from_row_slice(2, 2, &[r, t_prime, t, r_prime]))
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: CMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, out_port: usize, in_port: usize) -> Complex64 {
        self.entries[(out_port, in_port)]
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    /// Probability `|s_{to,from}|^2`.
    pub fn probability(&self, to: usize, from: usize) -> f64 {
        self.entries[(to, from)].norm_sqr()
    }

    /// `max |S S^dagger - 1|` over all entries.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim();
        let product = &self.entries * self.entries.adjoint();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((product[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// Multiplies row `port` and column `port` by `phase`, i.e. moves the
    /// reference plane of that port.
    pub fn shift_reference(&mut self, port: usize, phase: Complex64) {
        let n = self.dim();
        for k in 0..n {
            self.entries[(port, k)] *= phase;
            self.entries[(k, port)] *= phase;
        }
    }

    /// Exchanges the labels of two ports.
    pub fn swap_ports(&mut self, a: usize, b: usize) {
        self.entries.swap_rows(a, b);
        self.entries.swap_columns(a, b);
    }
}

/// Reference to port `port` of component `component` in a network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PortRef {
    pub component: usize,
    pub port: usize,
}

impl PortRef {
    pub const fn new(component: usize, port: usize) -> Self {
        Self { component, port }
    }
}

/// An internal connection: whatever leaves `a` arrives at `b` (and vice
/// versa) multiplied by `phase`.
#[derive(Debug, Clone, Copy)]
pub struct Link {
    pub a: PortRef,
    pub b: PortRef,
    pub phase: Complex64,
}

/// Connects scattering matrices into one network and returns the matrix seen
/// from the `external` ports, in the order given.
///
/// Every component port must appear exactly once, either in `links` or in
/// `external`. Internal amplitudes are eliminated with one linear solve:
/// `S_ext = S_ee + S_ei C (1 - S_ii C)^-1 S_ie`, where `C` carries the link
/// phases.
pub fn connect(components: &[&ScatterMatrix], links: &[Link], external: &[PortRef]) -> Result<ScatterMatrix> {
    let offsets: Vec<usize> = components
        .iter()
        .scan(0, |acc, c| {
            let start = *acc;
            *acc += c.dim();
            Some(start)
        })
        .collect();
    let total: usize = components.iter().map(|c| c.dim()).sum();
    let global = |p: PortRef| -> Result<usize> {
        let comp = components
            .get(p.component)
            .ok_or_else(|| crate::error::invalid("network port", format!("no component {}", p.component)))?;
        if p.port >= comp.dim() {
            return Err(crate::error::invalid(
                "network port",
                format!("component {} has no port {}", p.component, p.port),
            ));
        }
        Ok(offsets[p.component] + p.port)
    };

    let mut role = vec![None::<usize>; total];
    let ext: Vec<usize> = external.iter().map(|&p| global(p)).collect::<Result<_>>()?;
    let mut internal = Vec::with_capacity(2 * links.len());
    for link in links {
        internal.push(global(link.a)?);
        internal.push(global(link.b)?);
    }
    for (slot, &g) in ext.iter().chain(internal.iter()).enumerate() {
        if role[g].replace(slot).is_some() {
            return Err(crate::error::invalid("network", format!("port {g} used twice")));
        }
    }
    if role.iter().any(Option::is_none) {
        return Err(crate::error::invalid("network", "dangling port"));
    }

    let mut block = CMatrix::zeros(total, total);
    for (c, &off) in components.iter().zip(&offsets) {
        block
            .view_mut((off, off), (c.dim(), c.dim()))
            .copy_from(c.entries());
    }

    let ne = ext.len();
    let ni = internal.len();
    let pick = |rows: &[usize], cols: &[usize]| {
        CMatrix::from_fn(rows.len(), cols.len(), |i, j| block[(rows[i], cols[j])])
    };
    let s_ee = pick(&ext, &ext);
    if ni == 0 {
        return ScatterMatrix::new(s_ee);
    }
    let s_ei = pick(&ext, &internal);
    let s_ie = pick(&internal, &ext);
    let s_ii = pick(&internal, &internal);

    let mut c = CMatrix::zeros(ni, ni);
    for (k, link) in links.iter().enumerate() {
        c[(2 * k, 2 * k + 1)] = link.phase;
        c[(2 * k + 1, 2 * k)] = link.phase;
    }

    let system = CMatrix::identity(ni, ni) - &s_ii * &c;
    let solved = system
        .lu()
        .solve(&s_ie)
        .ok_or(Error::SingularConnection)?;
    let out = s_ee + s_ei * c * solved;
    debug_assert_eq!(out.nrows(), ne);
    ScatterMatrix::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn beam_splitter(theta: f64) -> ScatterMatrix {
        let (s, co) = theta.sin_cos();
        ScatterMatrix::two_port(c(co, 0.0), c(0.0, s), c(0.0, s), c(co, 0.0)).unwrap()
    }

    #[test]
    fn identity_is_unitary() {
        assert_eq!(ScatterMatrix::identity(4).unitarity_deviation(), 0.0);
    }

    #[test]
    fn rejects_non_square_and_non_finite() {
        assert!(ScatterMatrix::new(CMatrix::zeros(2, 3)).is_err());
        let bad = CMatrix::from_element(2, 2, c(f64::NAN, 0.0));
        assert_eq!(ScatterMatrix::new(bad), Err(Error::NonFinite));
    }

    #[test]
    fn cascading_two_unitary_two_ports_stays_unitary() {
        let a = beam_splitter(0.3);
        let b = beam_splitter(1.1);
        let link = Link {
            a: PortRef::new(0, 1),
            b: PortRef::new(1, 0),
            phase: Complex64::from_polar(1.0, 0.7),
        };
        let s = connect(&[&a, &b], &[link], &[PortRef::new(0, 0), PortRef::new(1, 1)]).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.unitarity_deviation() < 1e-14);
    }

    #[test]
    fn cascading_with_transparent_element_is_a_phase_shift() {
        let a = beam_splitter(0.4);
        let clear = ScatterMatrix::two_port(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        let phase = Complex64::from_polar(1.0, 0.25);
        let link = Link {
            a: PortRef::new(0, 1),
            b: PortRef::new(1, 0),
            phase,
        };
        let s = connect(&[&a, &clear], &[link], &[PortRef::new(0, 0), PortRef::new(1, 1)]).unwrap();
        assert!((s.get(0, 0) - a.get(0, 0)).norm() < 1e-15);
        assert!((s.get(1, 0) - a.get(1, 0) * phase).norm() < 1e-15);
        assert!((s.get(1, 1) - a.get(1, 1) * phase * phase).norm() < 1e-15);
    }

    #[test]
    fn dangling_and_duplicate_ports_are_rejected() {
        let a = beam_splitter(0.4);
        assert!(connect(&[&a], &[], &[PortRef::new(0, 0)]).is_err());
        assert!(connect(&[&a], &[], &[PortRef::new(0, 0), PortRef::new(0, 0)]).is_err());
        assert!(connect(&[&a], &[], &[PortRef::new(0, 0), PortRef::new(0, 2)]).is_err());
    }

    #[test]
    fn reference_shift_and_port_swap() {
        let mut s = beam_splitter(0.2);
        let before = s.clone();
        let phase = Complex64::from_polar(1.0, 0.5);
        s.shift_reference(LEFT, phase);
        assert!((s.get(0, 0) - before.get(0, 0) * phase * phase).norm() < 1e-15);
        assert!((s.get(1, 0) - before.get(1, 0) * phase).norm() < 1e-15);
        s.swap_ports(LEFT, RIGHT);
        assert!((s.get(1, 1) - before.get(0, 0) * phase * phase).norm() < 1e-15);
    }
}
