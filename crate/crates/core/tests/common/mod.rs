//! Reference implementations used only by the tests.

#![allow(dead_code)]

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

/// Plane-wave coefficients solved directly from the four matching
/// conditions at `x = -d/2` and `x = +d/2`, written without transfer
/// matrices. Returns `[[r, t'], [t, r']]` in the global-coordinate
/// convention of the library.
pub fn direct_s_matrix(energy: f64, sigma: f64, field: f64, width: f64, g_star: f64, q: f64) -> [[Complex64; 2]; 2] {
    let i = Complex64::i();
    let k1 = Complex64::new((2.0 * energy - q * q).sqrt(), 0.0);
    let k2_sq = 2.0 * energy - (q + field).powi(2);
    let k2 = if k2_sq >= 0.0 {
        Complex64::new(k2_sq.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-k2_sq).sqrt())
    };
    let kappa = 0.5 * g_star * sigma * field;
    let (xl, xr) = (-0.5 * width, 0.5 * width);
    let e = |k: Complex64, x: f64| (i * k * x).exp();

    // unknowns: outgoing-left amplitude L, in-barrier A, B, outgoing-right R
    // psi_left = in_l e^{ik1x} + L e^{-ik1x}; psi_mid = A e^{ik2x} + B e^{-ik2x};
    // psi_right = in_r e^{-ik1x} + R e^{ik1x}
    let solve = |in_l: Complex64, in_r: Complex64| -> (Complex64, Complex64) {
        let mut m = Matrix4::<Complex64>::zeros();
        let mut rhs = Vector4::<Complex64>::zeros();
        // continuity at xl
        m[(0, 0)] = -e(-k1, xl);
        m[(0, 1)] = e(k2, xl);
        m[(0, 2)] = e(-k2, xl);
        rhs[0] = in_l * e(k1, xl);
        // derivative jump at xl: psi'_mid - psi'_left = kappa psi
        m[(1, 0)] = i * k1 * e(-k1, xl) - kappa * e(-k1, xl);
        m[(1, 1)] = i * k2 * e(k2, xl);
        m[(1, 2)] = -i * k2 * e(-k2, xl);
        rhs[1] = in_l * (i * k1 * e(k1, xl) + kappa * e(k1, xl));
        // continuity at xr
        m[(2, 1)] = e(k2, xr);
        m[(2, 2)] = e(-k2, xr);
        m[(2, 3)] = -e(k1, xr);
        rhs[2] = in_r * e(-k1, xr);
        // derivative jump at xr: psi'_right - psi'_mid = -kappa psi
        m[(3, 1)] = -i * k2 * e(k2, xr) + kappa * e(k2, xr);
        m[(3, 2)] = i * k2 * e(-k2, xr) + kappa * e(-k2, xr);
        m[(3, 3)] = i * k1 * e(k1, xr);
        rhs[3] = in_r * (i * k1 * e(-k1, xr));
        let x = m.lu().solve(&rhs).expect("matching system is singular");
        (x[0], x[3])
    };
    let (r, t) = solve(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    let (t_prime, r_prime) = solve(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    [[r, t_prime], [t, r_prime]]
}

/// Analytic weak-pumping kernel (per `I0`) assembled from the closed-form
/// amplitude, written independently of the library.
pub fn weak_kernel_closed_form(energy: f64, sigma: f64, width: f64, field: f64, g_star: f64) -> f64 {
    let k1 = (2.0 * energy).sqrt();
    let k2 = (2.0 * energy - field * field).sqrt();
    let gp = 1.0 - g_star * g_star / 4.0;
    let (s, c) = (k2 * width).sin_cos();
    let td = 4.0 * k1 * k1 * k2 * k2 * c * c + (4.0 * energy - gp * field * field).powi(2) * s * s;
    -sigma * 2.0 * field * field * g_star * gp * k1.powi(3) * k2.powi(3) * (2.0 * k2 * width).sin() / (td * td)
}
