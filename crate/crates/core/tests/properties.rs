use std::f64::consts::PI;

use approx::assert_relative_eq;
use cespdc::comb::{f_closed, f_hypergeometric};
use cespdc::oracle::{steady_state_closed, RoundTrip};
use cespdc::single_mode::{g2_multi_finite_n, g2_single};
use cespdc::spectra::{gamma_assembled, spectral_sample, upsilon_assembled};
use cespdc::{
    coeffs, coeffs_extended, denominator, g2_comb, squeezing_spectrum, threshold, CavityParams, GainSetting,
    KMax, PoleParams, SingleModeParams,
};
use proptest::prelude::*;

fn cavity_and_gain() -> impl Strategy<Value = (CavityParams, GainSetting)> {
    (0.05f64..0.999, 0.05f64..=1.0, 0.0f64..0.99, 0.1f64..10.0).prop_map(|(r1, r2, frac, tau)| {
        let c = CavityParams::new(r1, r2, tau).unwrap();
        let g = GainSetting::fraction_of_threshold(&c, frac).unwrap();
        (c, g)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn energy_balance((c, _) in cavity_and_gain()) {
        prop_assert!((c.r1().powi(2) + c.t1().powi(2) - 1.0).abs() < 1e-15);
        prop_assert!((c.r2().powi(2) + c.t2().powi(2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn threshold_symmetric(r1 in 0.01f64..0.999, r2 in 0.01f64..0.999) {
        let a = threshold(&CavityParams::normalized(r1, r2).unwrap());
        let b = threshold(&CavityParams::normalized(r2, r1).unwrap());
        prop_assert!((a - b).abs() <= 1e-15 * a.abs());
    }

    #[test]
    fn poles_ordered((c, g) in cavity_and_gain()) {
        let p = PoleParams::new(&c, &g).unwrap();
        prop_assert!(p.x() > 1.0);
        prop_assert!(p.y() >= p.x());
    }

    #[test]
    fn symplectic_extended((c, g) in cavity_and_gain(), theta in -PI..PI) {
        let k = coeffs_extended(&c, &g, theta / c.tau()).unwrap();
        prop_assert!(k.unitarity_defect().hi().abs() < 1e-12);
    }

    #[test]
    fn hermitian_and_periodic((c, g) in cavity_and_gain(), theta in -PI..PI, n in -3i32..3) {
        let w = theta / c.tau();
        let plus = coeffs(&c, &g, w).unwrap();
        let minus = coeffs(&c, &g, -w).unwrap();
        let shifted = coeffs(&c, &g, w + n as f64 * c.fsr()).unwrap();
        let scale = plus.magnitude().sqrt();
        for (a, b) in [(plus.a, minus.a), (plus.b, minus.b), (plus.c, minus.c), (plus.d, minus.d)] {
            prop_assert!((a - b.conj()).norm() <= 1e-13 * scale);
        }
        for (a, b) in [(plus.a, shifted.a), (plus.d, shifted.d)] {
            // the shifted phase carries rounding of order n * fsr * tau * eps * |d|
            prop_assert!((a - b).norm() <= 1e-11 * scale * scale);
        }
    }

    #[test]
    fn denominator_finite((c, g) in cavity_and_gain(), theta in -PI..PI) {
        let d = denominator(&c, &g, theta / c.tau()).unwrap();
        prop_assert!(d.re.is_finite() && d.im.is_finite());
    }

    #[test]
    fn spectra_real_and_nonnegative((c, g) in cavity_and_gain(), theta in -PI..PI) {
        let w = theta / c.tau();
        let s = spectral_sample(&c, &g, w).unwrap();
        prop_assert!(s.upsilon_val >= 0.0);
        prop_assert!(s.gamma_val >= 0.0);
        let ga = gamma_assembled(&c, &g, w).unwrap();
        let ua = upsilon_assembled(&c, &g, w).unwrap();
        let scale = coeffs(&c, &g, w).unwrap().magnitude();
        prop_assert!(ga.im.abs() <= 1e-14 * scale);
        prop_assert!(ua.im.abs() <= 1e-14 * scale);
    }

    #[test]
    fn uncertainty_product((c, g) in cavity_and_gain(), theta in -PI..PI) {
        let w = theta / c.tau();
        let lo = squeezing_spectrum(&c, &g, w, 0.0).unwrap();
        let hi = squeezing_spectrum(&c, &g, w, PI).unwrap();
        prop_assert!(lo > 0.0);
        prop_assert!(lo * hi >= 1.0 - 1e-12);
    }

    #[test]
    fn comb_positive_and_decreasing((c, g) in cavity_and_gain()) {
        prop_assume!(g.r() > 0.0);
        let comb = g2_comb(&c, &g, KMax::Fixed(40)).unwrap();
        prop_assert!(comb.weights.windows(2).all(|w| w[1] < w[0] && w[1] > 0.0));
        prop_assert!(comb.background > 0.0);
    }

    #[test]
    fn fourier_decreasing((c, g) in cavity_and_gain()) {
        let p = PoleParams::new(&c, &g).unwrap();
        let f: Vec<f64> = (0..30).map(|k| f_closed(&p, k).unwrap()).collect();
        prop_assert!(f.windows(2).all(|w| w[1] < w[0] && w[1] > 0.0));
    }

    #[test]
    fn steady_state_physical((c, g) in cavity_and_gain()) {
        let st = steady_state_closed(&c, &g).unwrap();
        prop_assert!(st.is_physical());
        prop_assert!(RoundTrip::new(&c, &g).unwrap().spectral_radius() < 1.0);
    }

    #[test]
    fn single_mode_even(g1 in 0.01f64..2.0, g2 in 0.0f64..2.0, frac in 0.0f64..0.99, t in -50.0f64..50.0) {
        let p = SingleModeParams::new(g1, g2, frac * 0.5 * (g1 + g2)).unwrap();
        prop_assert_eq!(g2_single(&p, t), g2_single(&p, -t));
        prop_assert!(g2_single(&p, t) <= g2_single(&p, 0.0));
    }

    #[test]
    fn finite_comb_bounded(n in 0usize..50, t in -5.0f64..5.0) {
        let p = SingleModeParams::new(0.3, 0.1, 0.1).unwrap();
        let v = g2_multi_finite_n(&p, n, t, 1.0);
        let m = (2 * n + 1) as f64;
        prop_assert!(v >= 0.0);
        prop_assert!(v <= m * m * g2_single(&p, t) * (1.0 + 1e-12));
    }
}

#[test]
fn hypergeometric_route_agrees() {
    // the series converges like (2 / (1 + x))^n, so stay away from threshold
    for (r1, r2, frac) in [
        (0.6, 0.7, 0.3),
        (0.9, 0.9, 0.5),
        (0.3, 0.99, 0.8),
        (0.95, 0.95, 0.1),
    ] {
        let c = CavityParams::normalized(r1, r2).unwrap();
        let g = GainSetting::fraction_of_threshold(&c, frac).unwrap();
        let p = PoleParams::new(&c, &g).unwrap();
        let f0 = f_closed(&p, 0).unwrap();
        for k in 0..=20 {
            let h = f_hypergeometric(&p, &c, k).unwrap();
            assert!(
                (h - f_closed(&p, k).unwrap()).abs() < 1e-9 * f0,
                "{r1} {r2} {frac} k={k}"
            );
        }
    }
}

#[test]
fn pole_gap_is_linear_in_gain() {
    // y - x = cosh(L + r) - cosh(L - r) = 2 sinh L sinh r
    let c = CavityParams::normalized(0.9, 0.9).unwrap();
    for r in [1e-12, 1e-9, 1e-6, 1e-3] {
        let g = GainSetting::absolute(&c, r).unwrap();
        let p = PoleParams::new(&c, &g).unwrap();
        let gap = 2.0 * c.log_loss().sinh() * r.sinh();
        assert!((p.y() - p.x() - gap).abs() < 1e-15, "r = {r}");
    }
    let g0 = GainSetting::absolute(&c, 0.0).unwrap();
    let p0 = PoleParams::new(&c, &g0).unwrap();
    assert_relative_eq!(
        p0.x(),
        (1.0 + 0.81f64.powi(2)) / (2.0 * 0.81),
        max_relative = 1e-15
    );
}
