//! Single-mode Lorentzian model at arbitrary sub-threshold gain.
//!
//! One cavity mode with output-coupler decay `gamma1`, loss decay `gamma2` and
//! parametric gain `epsilon`. With `f_pm(T) = e^{-|T|(g1 + g2 +- 2 eps)/2} / (g1 + g2 +- 2 eps)`
//!
//! `G2(T) = (pi/2) g1^2 eps^2 [(f_- + f_+)^2 + (f_- - f_+)^2 + (f_-(0) - f_+(0))^2]`.
//!
//! Multiplying by the Dirichlet kernel `sin^2((2N+1) pi T / tau) / sin^2(pi T / tau)`
//! gives a comb of `2N+1` equally spaced modes, which is how the model is compared
//! against [`crate::comb`].
//!
//! The rates are tied to the ring cavity through the amplitude decay per round trip:
//! the intracavity amplitude falls by `r1 r2` per pass and grows by `e^r`, so the
//! energy decay rates are `gamma_i = -2 ln(r_i) / tau` and the gain rate is
//! `epsilon = r / tau`. Threshold then sits exactly at `epsilon = (gamma1 + gamma2) / 2`.

use num_complex::Complex64;
use serde::Serialize;

use crate::comb::{g2_comb, KMax};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::params::{CavityParams, GainSetting};
use crate::quadrature::Integrator;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingleModeParams {
    pub gamma1: f64,
    pub gamma2: f64,
    pub epsilon: f64,
}

/// How ring-cavity parameters become mode rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RateMapping {
    /// `gamma_i = -2 ln r_i / tau`, `epsilon = r / tau` (energy rates).
    #[default]
    Energy,
    /// `gamma_i = -ln r_i / tau`, `epsilon = r / (2 tau)`; half the physical rates,
    /// kept for comparison.
    Amplitude,
}

impl SingleModeParams {
    pub fn new(gamma1: f64, gamma2: f64, epsilon: f64) -> Result<Self> {
        if !(gamma1 > 0.0 && gamma1.is_finite()) {
            return Err(Error::domain(
                "gamma1",
                gamma1,
                "output decay rate must be positive and finite",
            ));
        }
        if !(gamma2 >= 0.0 && gamma2.is_finite()) {
            return Err(Error::domain(
                "gamma2",
                gamma2,
                "loss rate must be non-negative and finite",
            ));
        }
        if !(epsilon >= 0.0) {
            return Err(Error::domain(
                "epsilon",
                epsilon,
                "gain rate must be non-negative",
            ));
        }
        let p = Self {
            gamma1,
            gamma2,
            epsilon,
        };
        if epsilon >= p.kappa() {
            return Err(Error::AboveThreshold {
                r: epsilon,
                r_th: p.kappa(),
            });
        }
        Ok(p)
    }

    pub fn from_cavity(cavity: &CavityParams, gain: &GainSetting) -> Result<Self> {
        Self::from_cavity_with(cavity, gain, RateMapping::default())
    }

    pub fn from_cavity_with(cavity: &CavityParams, gain: &GainSetting, mapping: RateMapping) -> Result<Self> {
        gain.check(cavity)?;
        let scale = match mapping {
            RateMapping::Energy => 1.0,
            RateMapping::Amplitude => 0.5,
        };
        let tau = cavity.tau();
        Self::new(
            -2.0 * scale * cavity.r1().ln() / tau,
            -2.0 * scale * cavity.r2().ln() / tau,
            scale * gain.r() / tau,
        )
    }

    /// Mean field decay rate `(gamma1 + gamma2) / 2`; the gain rate at threshold.
    pub fn kappa(&self) -> f64 {
        0.5 * (self.gamma1 + self.gamma2)
    }

    /// Time constant of the slow part of `G2(T)` above its constant floor,
    /// `1 / (gamma1 + gamma2 - 2 epsilon)`.
    pub fn coherence_time(&self) -> f64 {
        1.0 / (self.gamma1 + self.gamma2 - 2.0 * self.epsilon)
    }

    fn f_pm(&self, t: f64) -> (f64, f64) {
        let slow = self.gamma1 + self.gamma2 - 2.0 * self.epsilon;
        let fast = self.gamma1 + self.gamma2 + 2.0 * self.epsilon;
        let a = t.abs();
        ((-0.5 * a * slow).exp() / slow, (-0.5 * a * fast).exp() / fast)
    }

    fn prefactor(&self) -> f64 {
        std::f64::consts::FRAC_PI_2 * (self.gamma1 * self.epsilon).powi(2)
    }

    /// `(Gamma, Upsilon)` transform terms at lag `T`, squared.
    pub fn terms(&self, t: f64) -> (f64, f64) {
        let (m, p) = self.f_pm(t);
        let pre = self.prefactor();
        (pre * (m + p).powi(2), pre * (m - p).powi(2))
    }

    /// Constant accidental floor `(pi/2) g1^2 eps^2 (f_-(0) - f_+(0))^2`.
    pub fn background(&self) -> f64 {
        self.terms(0.0).1
    }
}

/// Single-mode `G2(T)`.
pub fn g2_single(params: &SingleModeParams, t: f64) -> f64 {
    let (g, u) = params.terms(t);
    g + u + params.background()
}

/// `G2` of `2N+1` equally spaced modes: `g2_single(T)` times the Dirichlet kernel.
pub fn g2_multi_finite_n(params: &SingleModeParams, n: usize, t: f64, tau: f64) -> f64 {
    g2_single(params, t) * dirichlet_squared(n, t / tau)
}

/// `sin^2((2N+1) pi u) / sin^2(pi u)`, equal to `(2N+1)^2` at integer `u`.
fn dirichlet_squared(n: usize, u: f64) -> f64 {
    let m = (2 * n + 1) as f64;
    let x = std::f64::consts::PI * (u - u.round());
    if x.abs() < 1e-9 {
        // even expansion; next term is O(x^2 m^4)
        return m * m * (1.0 - (m * m - 1.0) * x * x / 3.0);
    }
    ((m * x).sin() / x.sin()).powi(2)
}

/// Integral of [`g2_multi_finite_n`] over the period centred on `T = k tau`.
pub fn period_integral(params: &SingleModeParams, n: usize, k: i64, tau: f64) -> Result<f64> {
    let m = 2 * n + 1;
    let lobe = tau / m as f64;
    let start = (k as f64 - 0.5) * tau;
    let breaks: Vec<f64> = (0..=m).map(|j| start + j as f64 * lobe).collect();
    let integrator = Integrator {
        abs_tol: 0.0,
        rel_tol: 1e-10,
        max_intervals: 16 * (m + 1),
    };
    Ok(integrator
        .integrate_with_breaks(|t| g2_multi_finite_n(params, n, t, tau), &breaks)?
        .value)
}

struct ModeCoeffs {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

/// Single-mode Bogoliubov coefficients at complex frequency `w`.
fn mode_coeffs(p: &SingleModeParams, w: Complex64) -> ModeCoeffs {
    let i = Complex64::i();
    let (g1, g2, e) = (p.gamma1, p.gamma2, p.epsilon);
    let s = Complex64::from(0.5 * (g1 + g2)) - i * w;
    let den = (s * s - e * e).inv();
    let lossy = Complex64::from(0.5 * g2) - i * w;
    let root = (g1 * g2).sqrt();
    ModeCoeffs {
        a: (Complex64::from(0.25 * g1 * g1 + e * e) - lossy * lossy) * den,
        b: den * (g1 * e),
        c: s * den * root,
        d: den * (root * e),
    }
}

/// `Gamma(w) = A(w) B(-w) + C(w) D(-w)` and `Upsilon(w) = B(w) B(-w) + D(w) D(-w)`
/// as analytic functions of complex `w`.
fn mode_spectra(p: &SingleModeParams, w: Complex64) -> (Complex64, Complex64) {
    let plus = mode_coeffs(p, w);
    let minus = mode_coeffs(p, -w);
    (
        plus.a * minus.b + plus.c * minus.d,
        plus.b * minus.b + plus.d * minus.d,
    )
}

const MAX_NODES: usize = 1 << 14;

/// `(1/sqrt(2 pi)) \int (Gamma, Upsilon)(w) e^{-i w T} dw` by residues. The integrand's
/// lower-half-plane poles sit at `-i(kappa -+ epsilon)`; each is circled at half the
/// distance to its nearest neighbouring pole and the loop integral taken with the
/// trapezoidal rule, which converges geometrically for analytic periodic integrands.
pub fn mode_transforms(p: &SingleModeParams, t: f64) -> Result<(f64, f64)> {
    let kappa = p.kappa();
    let eps = p.epsilon;
    if eps == 0.0 {
        return Ok((0.0, 0.0));
    }
    let t = t.abs();
    let slow = (Complex64::new(0.0, -(kappa - eps)), eps.min(kappa - eps));
    let fast = (Complex64::new(0.0, -(kappa + eps)), eps.min(kappa));

    let mut total = (0.0, 0.0);
    for (pole, radius) in [slow, fast] {
        let (g, u) = loop_integral(p, t, pole, radius)?;
        total.0 += g;
        total.1 += u;
    }
    Ok(total)
}

/// `-i sqrt(2 pi)` times the residue sum inside the circle `|w - center| = radius`.
fn loop_integral(p: &SingleModeParams, t: f64, center: Complex64, radius: f64) -> Result<(f64, f64)> {
    let i = Complex64::i();
    let sweep = |nodes: usize| {
        let mut acc = (Complex64::from(0.0), Complex64::from(0.0));
        let mut mass = 0.0;
        for j in 0..nodes {
            let step = Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * j as f64 / nodes as f64);
            let w = center + step;
            let (g, u) = mode_spectra(p, w);
            let weight = (-i * w * t).exp() * step;
            acc.0 += g * weight;
            acc.1 += u * weight;
            mass += (g.norm() + u.norm()) * weight.norm();
        }
        let scale = -i * (2.0 * std::f64::consts::PI).sqrt() / nodes as f64;
        ((acc.0 * scale).re, (acc.1 * scale).re, mass * scale.norm())
    };

    let mut nodes = 16;
    let mut last = sweep(nodes);
    while nodes < MAX_NODES {
        nodes *= 2;
        let next = sweep(nodes);
        let change = (next.0 - last.0).abs() + (next.1 - last.1).abs();
        let size = next.0.abs() + next.1.abs();
        last = next;
        // rounding floor of the sum itself
        if change <= 1e-14 * size + 1e-14 * last.2 {
            return Ok((last.0, last.1));
        }
    }
    Err(Error::Convergence {
        routine: "single-mode contour transform",
        iterations: nodes,
        achieved: f64::NAN,
    })
}

/// [`g2_single`] assembled from the single-mode Bogoliubov coefficients.
pub fn g2_single_assembled(params: &SingleModeParams, t: f64) -> Result<f64> {
    let (g, u) = mode_transforms(params, t)?;
    let (_, u0) = mode_transforms(params, 0.0)?;
    Ok(g * g + u * u + u0 * u0)
}

/// Outcome of [`compare_models`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelComparison {
    /// `max_k |G_multi(k tau) / G_multi(0) - G_single(k tau) / G_single(0)|`
    pub max_deviation: f64,
    pub worst_lag: usize,
    pub k_max: usize,
}

/// Deviation between the multimode comb and the single-mode model, both normalized to
/// one at `T = 0` (background included) and sampled at the comb peaks. The deviation
/// is absolute in normalized units, i.e. relative to the zero-lag value.
pub fn compare_models(cavity: &CavityParams, gain: &GainSetting) -> Result<ModelComparison> {
    compare_models_with(cavity, gain, KMax::default(), RateMapping::default())
}

pub fn compare_models_with(
    cavity: &CavityParams,
    gain: &GainSetting,
    k_max: KMax,
    mapping: RateMapping,
) -> Result<ModelComparison> {
    let comb = g2_comb(cavity, gain, k_max)?;
    let env = comb.envelope()?;
    let sm = SingleModeParams::from_cavity_with(cavity, gain, mapping)?;
    let g0 = g2_single(&sm, 0.0);
    let mut out = ModelComparison {
        max_deviation: 0.0,
        worst_lag: 0,
        k_max: comb.k_max(),
    };
    for p in &env {
        let dev = (p.value - g2_single(&sm, p.t) / g0).abs();
        if dev > out.max_deviation {
            out.max_deviation = dev;
            out.worst_lag = p.lag;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub r1: f64,
    pub r2: f64,
    pub gain_fraction: f64,
    pub max_deviation: f64,
    pub worst_lag: usize,
}

/// [`compare_models`] over the outer product of the three axes, in `r1`-major order.
/// Every point has `tau = 1`.
pub fn scan(r1s: &[f64], r2s: &[f64], fracs: &[f64], exec: Execution) -> Result<Vec<ScanRow>> {
    let (n2, nf) = (r2s.len(), fracs.len());
    let total = r1s.len() * n2 * nf;
    exec.map_range(0..total, |idx| {
        let (r1, r2, frac) = (r1s[idx / (n2 * nf)], r2s[(idx / nf) % n2], fracs[idx % nf]);
        let cavity = CavityParams::normalized(r1, r2)?;
        let gain = GainSetting::fraction_of_threshold(&cavity, frac)?;
        let cmp = compare_models(&cavity, &gain)?;
        Ok(ScanRow {
            r1,
            r2,
            gain_fraction: frac,
            max_deviation: cmp.max_deviation,
            worst_lag: cmp.worst_lag,
        })
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fixture_at_zero_lag() {
        // f_- = 1/1.5, f_+ = 1/2.5: (pi/2)(1/16)(288/225) = pi/25
        let p = SingleModeParams::new(1.0, 1.0, 0.25).unwrap();
        assert_relative_eq!(
            g2_single(&p, 0.0),
            std::f64::consts::PI / 25.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn rate_mapping() {
        let c = CavityParams::new((-0.05f64).exp(), 0.9, 1.0).unwrap();
        let g = GainSetting::fraction_of_threshold(&c, 0.0).unwrap();
        let p = SingleModeParams::from_cavity(&c, &g).unwrap();
        assert_relative_eq!(p.gamma1, 0.1, max_relative = 1e-14);
        assert_eq!(p.epsilon, 0.0);
        let half = SingleModeParams::from_cavity_with(&c, &g, RateMapping::Amplitude).unwrap();
        assert_relative_eq!(half.gamma1, 0.05, max_relative = 1e-14);

        // threshold lands on epsilon = kappa
        let c = CavityParams::new(0.9, 0.95, 2.0).unwrap();
        let g = GainSetting::fraction_of_threshold(&c, 0.5).unwrap();
        let p = SingleModeParams::from_cavity(&c, &g).unwrap();
        assert_relative_eq!(2.0 * p.epsilon, p.kappa(), max_relative = 1e-14);
        assert!(SingleModeParams::new(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn even_and_decreasing() {
        let p = SingleModeParams::new(0.3, 0.1, 0.15).unwrap();
        let mut last = f64::INFINITY;
        for i in 0..200 {
            let t = i as f64 * 0.25;
            assert_eq!(g2_single(&p, t), g2_single(&p, -t));
            let v = g2_single(&p, t);
            assert!(v < last && v > p.background());
            last = v;
        }
        assert_eq!(
            g2_single(&SingleModeParams::new(1.0, 0.5, 0.0).unwrap(), 3.0),
            0.0
        );
    }

    #[test]
    fn slow_decay_constant() {
        let p = SingleModeParams::new(0.4, 0.2, 0.25).unwrap();
        let excess = |t: f64| g2_single(&p, t) - p.background();
        // deep in the tail only f_-^2 survives
        let (t0, t1) = (200.0, 201.0);
        let rate = (excess(t0) / excess(t1)).ln() / (t1 - t0);
        assert_relative_eq!(1.0 / rate, p.coherence_time(), max_relative = 1e-6);
    }

    #[test]
    fn background_share_grows_with_gain() {
        let mut last = 0.0;
        for i in 1..50 {
            let p = SingleModeParams::new(0.5, 0.5, 0.5 * i as f64 / 50.0).unwrap();
            let share = p.background() / g2_single(&p, 0.0);
            assert!(share > last);
            last = share;
        }
    }

    #[test]
    fn dirichlet_kernel() {
        let p = SingleModeParams::new(0.2, 0.1, 0.05).unwrap();
        for t in [0.0, 0.37, 2.0, -3.5] {
            assert_eq!(g2_multi_finite_n(&p, 0, t, 1.0), g2_single(&p, t));
        }
        assert_relative_eq!(
            g2_multi_finite_n(&p, 4, 3.0, 1.0),
            81.0 * g2_single(&p, 3.0),
            max_relative = 1e-12
        );
        assert!(g2_multi_finite_n(&p, 4, 1.0 / 9.0, 1.0).abs() < 1e-20);
        assert!(g2_multi_finite_n(&p, 4, 2.0 + 4.0 / 9.0, 1.0).abs() < 1e-20);
        // continuity across the removable point
        let near = g2_multi_finite_n(&p, 4, 3.0 + 1e-7, 1.0);
        assert_relative_eq!(near, g2_multi_finite_n(&p, 4, 3.0, 1.0), max_relative = 1e-6);
    }

    #[test]
    fn contour_matches_closed_form() {
        for (g1, g2, e) in [(1.0, 1.0, 0.25), (0.05, 0.01, 0.02), (0.3, 0.0, 0.149)] {
            let p = SingleModeParams::new(g1, g2, e).unwrap();
            for j in 0..20 {
                let t = j as f64 / (g1 + g2);
                let (g, u) = mode_transforms(&p, t).unwrap();
                let (gg, uu) = p.terms(t);
                assert_relative_eq!(g * g, gg, max_relative = 1e-11);
                assert_relative_eq!(u * u, uu, max_relative = 1e-11);
            }
        }
    }

    #[test]
    fn high_finesse_models_agree() {
        let c = CavityParams::normalized(0.99, 0.99).unwrap();
        let g = GainSetting::fraction_of_threshold(&c, 0.01).unwrap();
        let cmp = compare_models(&c, &g).unwrap();
        assert!(cmp.max_deviation < 1e-3, "{cmp:?}");
        let literal = compare_models_with(&c, &g, KMax::default(), RateMapping::Amplitude).unwrap();
        assert!(literal.max_deviation > 0.1, "{literal:?}");
    }

    #[test]
    fn scan_is_ordered() {
        let r1s = [0.6, 0.9];
        let r2s = [0.7, 0.95, 0.99];
        let fr = [0.1, 0.5];
        let seq = scan(&r1s, &r2s, &fr, Execution::Sequential).unwrap();
        let par = scan(&r1s, &r2s, &fr, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq.len(), 12);
        assert_eq!((seq[7].r1, seq[7].r2, seq[7].gain_fraction), (0.9, 0.7, 0.5));
    }
}
