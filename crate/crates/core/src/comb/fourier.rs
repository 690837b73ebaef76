//! Fourier-cosine coefficients of the line shape `d(w) d(-w)`:
//!
//! `F(k) = (2/pi) \int_0^pi d(t/tau) d(-t/tau) cos(k t) dt`.
//!
//! The line shape is `1 / (4 q^2 (x - cos t)(y - cos t))`. Splitting into partial
//! fractions and using `(1/pi) \int_0^pi cos(k t) / (z - cos t) dt = rho_z^k / sqrt(z^2 - 1)`
//! gives
//!
//! `F(k) = [rho_x^k / sqrt(x^2-1) - rho_y^k / sqrt(y^2-1)] / (2 q^2 (y - x))`.
//!
//! With `x = cosh(L - r)`, `y = cosh(L + r)`, `L = -ln q` this reorganizes into a sum of
//! non-negative terms,
//!
//! `F(k) = e^{(2-k)L} [sinh L cosh r S_k(r) + cosh L cosh(k r)] / (2 sinh L sinh(L-r) sinh(L+r))`
//!
//! with `S_k(r) = sinh(k r) / sinh r` (`= k` at `r = 0`), which is what [`f_closed`]
//! evaluates. It has no `1 / (y - x)` cancellation, so the double pole at `r = 0` needs
//! no special treatment.

use serde::Serialize;

use crate::bogoliubov::denominator;
use crate::error::{Error, Result};
use crate::params::{CavityParams, GainSetting, PoleParams};
use crate::quadrature::Integrator;

/// `F(k)` from the pole parameters.
pub fn f_closed(pole: &PoleParams, k: usize) -> Result<f64> {
    let l = pole.log_loss();
    let r = pole.r();
    if !(pole.lambda_x() > 0.0) || !(pole.x() > 1.0) {
        return Err(Error::domain("x", pole.x(), "pole parameter must exceed 1"));
    }
    if !(pole.y() > 1.0) {
        return Err(Error::domain("y", pole.y(), "pole parameter must exceed 1"));
    }
    let kf = k as f64;
    // e^{-kL} sinh(kr) / sinh r and e^{-kL} cosh(kr), from the pole decays
    let slow = (-kf * pole.lambda_x()).exp();
    let fast = (-kf * pole.lambda_y()).exp();
    let sine_part = if r == 0.0 {
        kf * (-kf * l).exp()
    } else {
        slow * -(-2.0 * kf * r).exp_m1() / (2.0 * r.sinh())
    };
    let cosine_part = 0.5 * (slow + fast);

    let (sl, cl) = (l.sinh(), l.cosh());
    let num = sl * r.cosh() * sine_part + cl * cosine_part;
    let den = 2.0 * sl * pole.lambda_x().sinh() * pole.lambda_y().sinh();
    Ok((2.0 * l).exp() * num / den)
}

/// `F(k)` by adaptive quadrature of the defining integral, using `d(w)` straight from
/// the Bogoliubov module. The tolerance is anchored to `F(0)` (which bounds every
/// `|F(k)|`) rather than to `F(k)` itself, since high-`k` coefficients can sit far
/// below the rounding floor of the integral.
pub fn f_quadrature(cavity: &CavityParams, gain: &GainSetting, k: usize) -> Result<f64> {
    let scale = line_shape_integral(cavity, gain, 0, &Integrator::new(0.0, 1e-13))?;
    line_shape_integral(cavity, gain, k, &Integrator::new(1e-13 * scale, 0.0))
}

/// `F(0..=k_max)` by quadrature, sharing one scale computation.
pub fn f_quadrature_series(cavity: &CavityParams, gain: &GainSetting, k_max: usize) -> Result<Vec<f64>> {
    let f0 = line_shape_integral(cavity, gain, 0, &Integrator::new(0.0, 1e-13))?;
    let tight = Integrator::new(1e-13 * f0, 0.0);
    std::iter::once(Ok(f0))
        .chain((1..=k_max).map(|k| line_shape_integral(cavity, gain, k, &tight)))
        .collect()
}

fn line_shape_integral(
    cavity: &CavityParams,
    gain: &GainSetting,
    k: usize,
    integrator: &Integrator,
) -> Result<f64> {
    gain.check(cavity)?;
    let tau = cavity.tau();
    let kf = k as f64;
    let integrand = |t: f64| {
        let w = t / tau;
        let dd = denominator(cavity, gain, w).expect("checked above")
            * denominator(cavity, gain, -w).expect("checked above");
        dd.re * (kf * t).cos()
    };
    // geometric mesh towards the resonance at t = 0
    let pi = std::f64::consts::PI;
    let breaks: Vec<f64> = std::iter::once(0.0)
        .chain((0..=8).rev().map(|j| pi * 10f64.powi(-j)))
        .collect();
    let integral = integrator.integrate_with_breaks(integrand, &breaks)?;
    Ok(2.0 / pi * integral.value)
}

/// `F(0..=k_max)` from the closed form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierCoeffs {
    pub values: Vec<f64>,
    pub k_max: usize,
}

impl FourierCoeffs {
    pub fn closed(pole: &PoleParams, k_max: usize) -> Result<Self> {
        let values = (0..=k_max)
            .map(|k| f_closed(pole, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { values, k_max })
    }

    /// `F(|k|)`.
    pub fn at(&self, k: i64) -> f64 {
        self.values[k.unsigned_abs() as usize]
    }

    /// `F(k_max) / F(k_max - 1)`.
    pub fn tail_ratio(&self) -> Option<f64> {
        let n = self.values.len();
        (n >= 2).then(|| self.values[n - 1] / self.values[n - 2])
    }
}
