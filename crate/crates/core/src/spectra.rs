//! Scalar spectral functions of the output field.
//!
//! `Gamma(w) = A(w)B(-w) + C(w)D(-w)` is the anomalous (phase-sensitive) spectrum and
//! `Upsilon(w) = B(w)B(-w) + D(w)D(-w)` the normal (photon-number) spectrum. Both are
//! real, even and `2 pi / tau` periodic. The closed forms here go through the pole
//! factorization of `|d|^2`; the `*_assembled` variants multiply out the complex
//! coefficients instead and serve as an independent route.

use num_complex::Complex;
use serde::Serialize;

use crate::bogoliubov::{coeffs, coeffs_extended};
use crate::error::Result;
use crate::params::{CavityParams, GainSetting, PoleParams};
use crate::scalar::{unit_phase, Extended, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralSample {
    pub omega: f64,
    pub gamma_val: f64,
    pub upsilon_val: f64,
}

/// `d(w) d(-w)` written through the poles as
/// `1 / (16 q^2 [sinh^2(lx/2) + sin^2(t/2)] [sinh^2(ly/2) + sin^2(t/2)])`, `t = w tau`.
fn line_shape(cavity: &CavityParams, pole: &PoleParams, omega: f64) -> f64 {
    let q = cavity.round_trip_reflectance();
    let half = (0.5 * omega * cavity.tau()).sin();
    let s2 = half * half;
    let sx = (0.5 * pole.lambda_x()).sinh();
    let sy = (0.5 * pole.lambda_y()).sinh();
    1.0 / (16.0 * q * q * (sx * sx + s2) * (sy * sy + s2))
}

/// `Gamma(w) = |d|^2 t1^2 sinh r [(1 + q^2) cosh r - 2 q cos(w tau)]`.
pub fn gamma_fn(cavity: &CavityParams, gain: &GainSetting, omega: f64) -> Result<f64> {
    let pole = PoleParams::new(cavity, gain)?;
    let q = cavity.round_trip_reflectance();
    let r = gain.r();
    let one_minus_q = -(-cavity.log_loss()).exp_m1();
    let sh_half = (0.5 * r).sinh();
    let half = (0.5 * omega * cavity.tau()).sin();
    // (1+q^2) cosh r - 2q cos t, expanded into non-negative pieces
    let bracket = one_minus_q * one_minus_q * r.cosh() + 4.0 * q * (sh_half * sh_half + half * half);
    let t11 = cavity.t1() * cavity.t1();
    Ok(line_shape(cavity, &pole, omega) * t11 * r.sinh() * bracket)
}

/// `Upsilon(w) = |d|^2 t1^2 sinh^2 r (1 - q^2)`.
pub fn upsilon_fn(cavity: &CavityParams, gain: &GainSetting, omega: f64) -> Result<f64> {
    let pole = PoleParams::new(cavity, gain)?;
    let q = cavity.round_trip_reflectance();
    let sh = gain.r().sinh();
    let t11 = cavity.t1() * cavity.t1();
    Ok(line_shape(cavity, &pole, omega) * t11 * sh * sh * (1.0 - q * q))
}

/// `A(w)B(-w) + C(w)D(-w)` from the complex coefficients. The imaginary part is
/// returned too so callers can check it vanishes.
pub fn gamma_assembled(cavity: &CavityParams, gain: &GainSetting, omega: f64) -> Result<Complex<f64>> {
    let p = coeffs(cavity, gain, omega)?;
    let m = coeffs(cavity, gain, -omega)?;
    Ok(p.a * m.b + p.c * m.d)
}

/// `B(w)B(-w) + D(w)D(-w)` from the complex coefficients.
pub fn upsilon_assembled(cavity: &CavityParams, gain: &GainSetting, omega: f64) -> Result<Complex<f64>> {
    let p = coeffs(cavity, gain, omega)?;
    let m = coeffs(cavity, gain, -omega)?;
    Ok(p.b * m.b + p.d * m.d)
}

pub fn spectral_sample(cavity: &CavityParams, gain: &GainSetting, omega: f64) -> Result<SpectralSample> {
    Ok(SpectralSample {
        omega,
        gamma_val: gamma_fn(cavity, gain, omega)?,
        upsilon_val: upsilon_fn(cavity, gain, omega)?,
    })
}

/// Noise spectrum of the output quadrature `e^{-i theta/2} a_out(W) + e^{i theta/2} a_out^+(-W)`,
/// in units of the vacuum level:
///
/// `S(W, theta) = |A(W) + e^{i theta} B(W)|^2 + |C(W) + e^{i theta} D(W)|^2`.
///
/// Values below one are squeezed. The squeezed quadrature near threshold is the
/// difference of two large, nearly equal terms, so the sum is formed in double-double
/// precision and rounded once.
pub fn squeezing_spectrum(cavity: &CavityParams, gain: &GainSetting, omega: f64, theta: f64) -> Result<f64> {
    let k = coeffs_extended(cavity, gain, omega)?;
    let (c, s) = unit_phase(Extended::from_f64(theta));
    let phase = Complex::new(c, s);
    let signal = k.a + phase * k.b;
    let bath = k.c + phase * k.d;
    Ok((signal.norm_sqr() + bath.norm_sqr()).round_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn setup(r1: f64, r2: f64, frac: f64) -> (CavityParams, GainSetting) {
        let c = CavityParams::normalized(r1, r2).unwrap();
        let g = GainSetting::fraction_of_threshold(&c, frac).unwrap();
        (c, g)
    }

    #[test]
    fn zero_gain_spectra_vanish() {
        let (c, g) = setup(0.9, 0.95, 0.0);
        for w in [0.0, 0.3, PI] {
            assert_eq!(gamma_fn(&c, &g, w).unwrap(), 0.0);
            assert_eq!(upsilon_fn(&c, &g, w).unwrap(), 0.0);
            assert_relative_eq!(squeezing_spectrum(&c, &g, w, 0.0).unwrap(), 1.0, epsilon = 1e-15);
            assert_relative_eq!(squeezing_spectrum(&c, &g, w, 1.1).unwrap(), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn spectra_even_and_periodic() {
        let (c, g) = setup(0.8, 0.9, 0.6);
        for w in [0.1, 0.7, 2.2] {
            let s = spectral_sample(&c, &g, w).unwrap();
            let m = spectral_sample(&c, &g, -w).unwrap();
            let p = spectral_sample(&c, &g, w + c.fsr()).unwrap();
            assert_relative_eq!(s.gamma_val, m.gamma_val, max_relative = 1e-14);
            assert_relative_eq!(s.upsilon_val, m.upsilon_val, max_relative = 1e-14);
            assert_relative_eq!(s.gamma_val, p.gamma_val, max_relative = 1e-12);
            assert_relative_eq!(s.upsilon_val, p.upsilon_val, max_relative = 1e-12);
        }
    }

    #[test]
    fn closed_forms_match_assembly() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let (c, g) = setup(
                rng.gen_range(0.01..0.999),
                rng.gen_range(0.01..1.0),
                rng.gen_range(0.0..0.999),
            );
            let w = rng.gen_range(-2.0 * PI..2.0 * PI);
            let gam = gamma_fn(&c, &g, w).unwrap();
            let ups = upsilon_fn(&c, &g, w).unwrap();
            let ga = gamma_assembled(&c, &g, w).unwrap();
            let ua = upsilon_assembled(&c, &g, w).unwrap();
            assert!(
                (ga.re - gam).abs() <= 1e-12 * gam.abs().max(1e-300),
                "{} vs {}",
                ga.re,
                gam
            );
            assert!(
                (ua.re - ups).abs() <= 1e-12 * ups.abs().max(1e-300),
                "{} vs {}",
                ua.re,
                ups
            );
            assert!(ga.im.abs() <= 1e-14 * ga.norm().max(1.0));
            assert!(ua.im.abs() <= 1e-14 * ua.norm().max(1.0));
        }
    }

    #[test]
    fn lossless_cavity_still_emits() {
        let (c, g) = setup(0.9, 1.0, 0.3);
        assert!(upsilon_fn(&c, &g, 0.2).unwrap() > 0.0);
        assert!(gamma_fn(&c, &g, 0.2).unwrap() > 0.0);
    }

    #[test]
    fn lossless_minimum_uncertainty() {
        let (c, g) = setup(0.95, 1.0, 0.9);
        for i in 0..200 {
            let w = -PI + 2.0 * PI * i as f64 / 200.0;
            let x = squeezing_spectrum(&c, &g, w, 0.0).unwrap();
            let p = squeezing_spectrum(&c, &g, w, PI).unwrap();
            assert!((x * p - 1.0).abs() < 1e-10, "w={w} {x} {p}");
        }
    }

    #[test]
    fn squeezing_deepest_on_resonance() {
        let (c, g) = setup(0.9, 0.98, 0.5);
        let on = squeezing_spectrum(&c, &g, 0.0, PI).unwrap();
        assert!(on < 1.0);
        for w in [0.05, 0.5, 1.0, PI] {
            assert!(squeezing_spectrum(&c, &g, w, PI).unwrap() > on);
            assert!(squeezing_spectrum(&c, &g, w, 0.0).unwrap() > 0.0);
        }
    }
}
