//! Differentiation and quadrature used by the pump and heat calculations.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;

/// Step shrink factor between tableau columns.
const SHRINK: f64 = 1.4;
const TABLEAU: usize = 10;
/// Stop once the diagonal drifts by more than this multiple of the best error.
const SAFE: f64 = 2.0;

/// A derivative estimate with the extrapolation's own error estimate.
#[derive(Debug, Clone)]
pub struct Derivative {
    pub value: CMatrix,
    pub error: f64,
}

fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Derivative of a matrix-valued function by central differences refined
/// with a Richardson tableau (Ridders' scheme).
///
/// The first column holds central differences at steps `h0, h0/1.4, ...`;
/// each further column removes the next even power of the step. The entry
/// with the smallest estimated error is returned, and the tableau stops as
/// soon as round-off starts to dominate.
pub fn ridders<F>(mut f: F, x: f64, h0: f64) -> Result<Derivative>
where
    F: FnMut(f64) -> Result<CMatrix>,
{
    if !(h0.is_finite() && h0 > 0.0) {
        return Err(crate::error::invalid("derivative step", format!("{h0}")));
    }
    let mut central = |h: f64| -> Result<CMatrix> {
        if x + h == x || x - h == x {
            return Err(Error::StepUnderflow { x });
        }
        let plus = f(x + h)?;
        let minus = f(x - h)?;
        Ok((plus - minus) / num_complex::Complex64::new(2.0 * h, 0.0))
    };

    let shrink_sq = SHRINK * SHRINK;
    let mut h = h0;
    let mut prev: Vec<CMatrix> = vec![central(h)?];
    let mut best = prev[0].clone();
    let mut best_err = f64::INFINITY;

    for _ in 1..TABLEAU {
        h /= SHRINK;
        let mut row: Vec<CMatrix> = Vec::with_capacity(prev.len() + 1);
        row.push(central(h)?);
        let mut fac = shrink_sq;
        for j in 1..=prev.len() {
            let next = (&row[j - 1] * num_complex::Complex64::new(fac, 0.0) - &prev[j - 1])
                / num_complex::Complex64::new(fac - 1.0, 0.0);
            fac *= shrink_sq;
            let err = max_abs_diff(&next, &row[j - 1]).max(max_abs_diff(&next, &prev[j - 1]));
            if err <= best_err {
                best_err = err;
                best = next.clone();
            }
            row.push(next);
        }
        let drift = max_abs_diff(&row[row.len() - 1], &prev[prev.len() - 1]);
        prev = row;
        if drift >= SAFE * best_err {
            break;
        }
    }

    Ok(Derivative {
        value: best,
        error: best_err,
    })
}

/// Mean of a periodic integrand over one period, with the node count that
/// was needed and the last refinement change.
#[derive(Debug, Clone, Copy)]
pub struct PeriodicMean<const K: usize> {
    pub values: [f64; K],
    pub nodes: usize,
    pub change: [f64; K],
}

/// Averages `f(t)` over `t in [0, 2pi)` with the uniform trapezoid rule,
/// doubling the node count until every component changes by less than
/// `rel_tol` times its scale (the larger of the mean and the mean absolute
/// integrand). New nodes are interleaved so earlier evaluations are reused.
pub fn periodic_mean<const K: usize, F>(
    mut f: F,
    start_nodes: usize,
    max_nodes: usize,
    rel_tol: f64,
) -> Result<PeriodicMean<K>>
where
    F: FnMut(f64) -> Result<[f64; K]>,
{
    if start_nodes < 2 || start_nodes % 2 != 0 {
        return Err(crate::error::invalid(
            "quadrature nodes",
            format!("need an even count >= 2, got {start_nodes}"),
        ));
    }
    let mut sum = [0.0; K];
    let mut abs_sum = [0.0; K];
    let mut accumulate = |t: f64, sum: &mut [f64; K], abs_sum: &mut [f64; K]| -> Result<()> {
        let v = f(t)?;
        for k in 0..K {
            sum[k] += v[k];
            abs_sum[k] += v[k].abs();
        }
        Ok(())
    };

    let mut n = start_nodes;
    for i in 0..n {
        accumulate(TAU * i as f64 / n as f64, &mut sum, &mut abs_sum)?;
    }
    let mut mean: [f64; K] = std::array::from_fn(|k| sum[k] / n as f64);

    loop {
        for i in 0..n {
            accumulate(TAU * (2 * i + 1) as f64 / (2 * n) as f64, &mut sum, &mut abs_sum)?;
        }
        n *= 2;
        let refined: [f64; K] = std::array::from_fn(|k| sum[k] / n as f64);
        let change: [f64; K] = std::array::from_fn(|k| (refined[k] - mean[k]).abs());
        let converged = (0..K).all(|k| {
            let scale = refined[k].abs().max(abs_sum[k] / n as f64);
            change[k] <= rel_tol * scale
        });
        mean = refined;
        if converged {
            return Ok(PeriodicMean {
                values: mean,
                nodes: n,
                change,
            });
        }
        if 2 * n > max_nodes {
            let (worst, k) = (0..K)
                .map(|k| (change[k], k))
                .fold((0.0, 0), |a, b| if b.0 > a.0 { b } else { a });
            let scale = mean[k].abs().max(abs_sum[k] / n as f64);
            return Err(Error::QuadratureNotConverged {
                nodes: n,
                change: worst,
                tolerance: rel_tol * scale,
            });
        }
    }
}


/// Abscissae of the 15-point Kronrod rule on `[-1, 1]` (non-negative half;
/// odd indices are the 7-point Gauss nodes).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel<const K: usize> {
    a: f64,
    b: f64,
    value: [f64; K],
    abs: [f64; K],
    err: [f64; K],
}

fn kronrod_panel<const K: usize, F>(f: &mut F, a: f64, b: f64) -> Result<Panel<K>>
where
    F: FnMut(f64) -> Result<[f64; K]>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kron = [0.0; K];
    let mut gauss = [0.0; K];
    let mut abs = [0.0; K];
    for (i, (&x, &wk)) in XGK.iter().zip(&WGK).enumerate() {
        let points: &[f64] = if x == 0.0 { &[0.0] } else { &[x, -x] };
        for &sx in points {
            let v = f(center + half * sx)?;
            for k in 0..K {
                kron[k] += wk * v[k];
                abs[k] += wk * v[k].abs();
                if i % 2 == 1 {
                    gauss[k] += WG[i / 2] * v[k];
                }
            }
        }
    }
    Ok(Panel {
        a,
        b,
        value: kron.map(|v| v * half),
        abs: abs.map(|v| v * half),
        err: std::array::from_fn(|k| ((kron[k] - gauss[k]) * half).abs()),
    })
}

/// Mean of `f(t)` over `[0, 2pi)` by globally adaptive 7/15-point
/// Gauss-Kronrod quadrature, for integrands with narrow peaks that a
/// uniform grid would need far too many nodes to resolve. The panel with
/// the largest error (relative to each component's scale) is bisected until
/// the summed error estimate of every component drops below `rel_tol` times
/// its scale. `nodes` in the result counts integrand evaluations.
pub fn adaptive_mean<const K: usize, F>(
    mut f: F,
    start_panels: usize,
    max_evaluations: usize,
    rel_tol: f64,
) -> Result<PeriodicMean<K>>
where
    F: FnMut(f64) -> Result<[f64; K]>,
{
    if start_panels == 0 {
        return Err(crate::error::invalid("quadrature panels", "need at least one"));
    }
    let width = TAU / start_panels as f64;
    let mut panels: Vec<Panel<K>> = (0..start_panels)
        .map(|i| kronrod_panel(&mut f, width * i as f64, width * (i + 1) as f64))
        .collect::<Result<_>>()?;
    let mut evaluations = 15 * start_panels;

    loop {
        let total = |field: fn(&Panel<K>) -> [f64; K]| -> [f64; K] {
            panels.iter().fold([0.0; K], |mut acc, p| {
                let v = field(p);
                for k in 0..K {
                    acc[k] += v[k];
                }
                acc
            })
        };
        let value = total(|p| p.value);
        let abs = total(|p| p.abs);
        let err = total(|p| p.err);
        let scale: [f64; K] = std::array::from_fn(|k| value[k].abs().max(abs[k]).max(f64::MIN_POSITIVE));
        let converged = (0..K).all(|k| err[k] <= rel_tol * scale[k]);
        if converged {
            return Ok(PeriodicMean {
                values: value.map(|v| v / TAU),
                nodes: evaluations,
                change: err.map(|e| e / TAU),
            });
        }
        if evaluations + 30 > max_evaluations {
            let (worst, k) = (0..K)
                .map(|k| (err[k] / scale[k], k))
                .fold((0.0, 0), |a, b| if b.0 > a.0 { b } else { a });
            return Err(Error::QuadratureNotConverged {
                nodes: evaluations,
                change: worst * scale[k] / TAU,
                tolerance: rel_tol * scale[k] / TAU,
            });
        }
        let badness = |p: &Panel<K>| (0..K).map(|k| p.err[k] / scale[k]).fold(0.0, f64::max);
        let (idx, _) = panels
            .iter()
            .enumerate()
            .map(|(i, p)| (i, badness(p)))
            .fold((0, -1.0), |a, b| if b.1 > a.1 { b } else { a });
        let Panel { a, b, .. } = panels.swap_remove(idx);
        let mid = 0.5 * (a + b);
        panels.push(kronrod_panel(&mut f, a, mid)?);
        panels.push(kronrod_panel(&mut f, mid, b)?);
        evaluations += 30;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn scalar(z: Complex64) -> CMatrix {
        CMatrix::from_element(1, 1, z)
    }

    #[test]
    fn ridders_matches_analytic_derivative() {
        let f = |x: f64| Ok(scalar(Complex64::new(0.0, 3.0 * x).exp() * x.sin()));
        let d = ridders(f, 0.7, 0.05).unwrap();
        let x = 0.7_f64;
        let exact = Complex64::new(0.0, 3.0 * x).exp() * (Complex64::new(0.0, 3.0) * x.sin() + x.cos());
        assert!((d.value[(0, 0)] - exact).norm() < 1e-12, "{:?}", d.value);
        assert!(d.error < 1e-10);
    }

    #[test]
    fn ridders_handles_steep_functions() {
        // scale of variation ~ 1e-2
        let f = |x: f64| Ok(scalar(Complex64::new((x / 0.01).sin(), 0.0)));
        let d = ridders(f, 0.3, 0.01).unwrap();
        let exact = (0.3_f64 / 0.01).cos() / 0.01;
        assert!((d.value[(0, 0)].re - exact).abs() < 1e-6 * exact.abs().max(1.0));
    }

    #[test]
    fn ridders_rejects_bad_steps_and_propagates_errors() {
        let ok = |_: f64| Ok(scalar(Complex64::new(1.0, 0.0)));
        assert!(ridders(ok, 0.0, 0.0).is_err());
        assert!(matches!(ridders(ok, 1e20, 1e-10), Err(Error::StepUnderflow { .. })));
        let failing = |_: f64| -> Result<CMatrix> { Err(Error::NonFinite) };
        assert_eq!(ridders(failing, 0.0, 0.1).unwrap_err(), Error::NonFinite);
    }

    #[test]
    fn periodic_mean_is_exact_for_trigonometric_polynomials() {
        let r = periodic_mean(|t| Ok([1.0 + (3.0 * t).cos().powi(2), t.sin()]), 16, 1 << 12, 1e-12).unwrap();
        assert!((r.values[0] - 1.5).abs() < 1e-14);
        assert!(r.values[1].abs() < 1e-14);
        assert_eq!(r.nodes, 32);
    }

    #[test]
    fn periodic_mean_refines_sharp_integrands() {
        // mean of 1/(1.01 - cos t) is 1/sqrt(1.01^2 - 1)
        let a = 1.01_f64;
        let r = periodic_mean(|t| Ok([1.0 / (a - t.cos())]), 16, 1 << 16, 1e-10).unwrap();
        let exact = 1.0 / (a * a - 1.0).sqrt();
        assert!((r.values[0] - exact).abs() < 1e-9 * exact);
        assert!(r.nodes > 64);
    }

    #[test]
    fn periodic_mean_reports_non_convergence() {
        let a = 1.0001_f64;
        let err = periodic_mean(|t| Ok([1.0 / (a - t.cos())]), 16, 64, 1e-10).unwrap_err();
        assert!(matches!(err, Error::QuadratureNotConverged { nodes: 64, .. }), "{err:?}");
        assert!(periodic_mean(|_| Ok([0.0]), 3, 64, 1e-6).is_err());
    }

    #[test]
    fn kronrod_rule_is_exact_for_polynomials() {
        let p = kronrod_panel(&mut |t: f64| Ok([t.powi(10), 1.0]), 0.0, 2.0).unwrap();
        assert!((p.value[0] - 2.0_f64.powi(11) / 11.0).abs() < 1e-11);
        assert!((p.value[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_mean_resolves_narrow_peaks() {
        let a = 1.0001_f64;
        let r = adaptive_mean(|t| Ok([1.0 / (a - t.cos()), t.sin().powi(2)]), 16, 200_000, 1e-10).unwrap();
        let exact = 1.0 / (a * a - 1.0).sqrt();
        assert!((r.values[0] - exact).abs() < 1e-8 * exact, "{} vs {exact}", r.values[0]);
        assert!((r.values[1] - 0.5).abs() < 1e-12);
        assert!(r.nodes < 50_000, "{}", r.nodes);
        let err = adaptive_mean(|t| Ok([1.0 / (a - t.cos())]), 4, 200, 1e-12).unwrap_err();
        assert!(matches!(err, Error::QuadratureNotConverged { .. }));
    }
}
