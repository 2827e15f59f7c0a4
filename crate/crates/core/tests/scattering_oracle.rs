mod common;

use approx::assert_relative_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinpump_core::pump::{pumped_current_asymptotic, pumped_current_closed_form, weak_pumping_kernel};
use spinpump_core::scattering::{s_matrix, transmission};
use spinpump_core::{BarrierConfig, CoherentBarrier, ParamPoint, Spin, LEFT};

#[test]
fn transfer_matrices_agree_with_direct_matching_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 2000 {
        let energy = rng.gen_range(0.2..60.0);
        let field = rng.gen_range(-8.0..8.0);
        let width = rng.gen_range(0.05..8.0);
        let g_star = rng.gen_range(-2.0..2.0);
        let q = rng.gen_range(-2.0..2.0);
        let k2_sq: f64 = 2.0 * energy - (q + field) * (q + field);
        if 2.0 * energy <= q * q + 1e-3 || k2_sq.abs() < 1e-3 || (-k2_sq).max(0.0).sqrt() * width > 12.0 {
            continue;
        }
        let spin = if rng.gen_bool(0.5) { Spin::Up } else { Spin::Down };
        let cfg = BarrierConfig::new(field, width, g_star, q).unwrap();
        let s = s_matrix(energy, spin, &cfg).unwrap();
        let direct = common::direct_s_matrix(energy, spin.sign(), field, width, g_star, q);
        for a in 0..2 {
            for b in 0..2 {
                let diff = (s.get(a, b) - direct[a][b]).norm();
                assert!(diff < 1e-9, "E={energy} b={field} d={width} g={g_star} q={q}: ({a},{b}) off by {diff:e}");
            }
        }
        checked += 1;
    }
}

#[test]
fn direct_solve_agrees_on_the_evanescent_side() {
    let cfg = BarrierConfig::new(5.0, 3.0, 0.44, 0.0).unwrap();
    let s = s_matrix(10.0, Spin::Up, &cfg).unwrap();
    let direct = common::direct_s_matrix(10.0, 1.0, 5.0, 3.0, 0.44, 0.0);
    assert!((s.get(1, 0) - direct[1][0]).norm() < 1e-12);
    assert!((s.get(0, 0) - direct[0][0]).norm() < 1e-12);
}

#[test]
fn numeric_weak_kernel_matches_analytic_kernel() {
    let mut worst = 0.0_f64;
    for i in 0..60 {
        let energy = 12.6 + 187.4 * i as f64 / 59.0;
        for spin in Spin::ALL {
            let numeric = weak_pumping_kernel(&CoherentBarrier::new(energy, spin, 0.44, 0.0), ParamPoint::new(5.0, 5.0), LEFT).unwrap();
            let analytic = common::weak_kernel_closed_form(energy, spin.sign(), 5.0, 5.0, 0.44);
            let library = pumped_current_closed_form(energy, spin, 5.0, 5.0, 0.44).unwrap();
            assert_relative_eq!(library, analytic, max_relative = 1e-12);
            worst = worst.max((numeric - analytic).abs() / analytic.abs());
        }
    }
    assert!(worst < 1e-5, "worst relative deviation {worst:e}");
}

#[test]
fn weak_kernel_at_fig4_energy() {
    let numeric = weak_pumping_kernel(&CoherentBarrier::new(23.12, Spin::Up, 0.44, 0.0), ParamPoint::new(5.0, 5.0), LEFT).unwrap();
    let analytic = common::weak_kernel_closed_form(23.12, 1.0, 5.0, 5.0, 0.44);
    assert_relative_eq!(numeric, analytic, max_relative = 1e-6);
}

#[test]
fn large_energy_form_approaches_full_closed_form() {
    let ratio = |e: f64| {
        pumped_current_asymptotic(e, Spin::Up, 5.0, 2.0, 0.44).unwrap() / pumped_current_closed_form(e, Spin::Up, 5.0, 2.0, 0.44).unwrap()
    };
    // pick energies where sin(2 k2 d) is not near a node
    let at_peak = |n: usize| spinpump_core::pump::phase_resonance_energy(n, 5.0, 2.0);
    let low = (ratio(at_peak(12)) - 1.0).abs();
    let high = (ratio(at_peak(200)) - 1.0).abs();
    assert!(high < low);
    assert!(high < 1e-3, "{high}");
}

#[test]
fn transmission_is_spin_independent_at_zero_q() {
    let cfg = BarrierConfig::new(5.0, 5.0, 0.44, 0.0).unwrap();
    for i in 0..400 {
        let e = 23.5 + 47.0 * i as f64 / 399.0;
        let up = transmission(e, Spin::Up, &cfg).unwrap();
        let down = transmission(e, Spin::Down, &cfg).unwrap();
        assert!((up - down).abs() < 1e-12);
    }
}
