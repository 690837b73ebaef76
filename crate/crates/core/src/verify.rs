//! Cross-validation suite: independent routes to the same quantity, compared at one
//! operating point.

use serde::Serialize;

use crate::bogoliubov::coeffs_extended;
use crate::comb::{f_closed, f_quadrature_series, g2_comb, KMax};
use crate::error::Result;
use crate::exec::Execution;
use crate::oracle::{g2_from_moments, steady_state, steady_state_closed, two_time_output_correlators};
use crate::params::{CavityParams, GainSetting, PoleParams};
use crate::single_mode::{g2_single, g2_single_assembled, SingleModeParams};
use crate::spectra::{gamma_assembled, gamma_fn, squeezing_spectrum, upsilon_assembled, upsilon_fn};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &'static str, worst: f64, tolerance: f64) -> Self {
        Self {
            name,
            worst,
            tolerance,
            // NaN fails
            passed: worst <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

const FREQ_POINTS: usize = 1000;

fn omega_grid(cavity: &CavityParams, fsr_span: f64, n: usize) -> Vec<f64> {
    let top = fsr_span * cavity.fsr();
    (0..n)
        .map(|i| -0.5 * top + top * i as f64 / (n - 1) as f64)
        .collect()
}

fn max_of(xs: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    xs.into_iter().try_fold(0.0f64, |acc, x| Ok(acc.max(x?)))
}

fn max_of_vec(xs: Vec<Result<f64>>) -> Result<f64> {
    max_of(xs)
}

/// Runs every check at `(cavity, gain)`. Errors from the underlying routines abort the
/// suite; numerical disagreement only marks the check failed.
pub fn run(cavity: &CavityParams, gain: &GainSetting, exec: Execution) -> Result<Report> {
    gain.check(cavity)?;
    let mut checks = Vec::new();
    let omegas = omega_grid(cavity, 1.0, FREQ_POINTS);

    let defect = max_of_vec(exec.map(&omegas, |&w| {
        Ok(coeffs_extended(cavity, gain, w)?.unitarity_defect().hi().abs())
    }))?;
    checks.push(Check::new(
        "symplectic defect |A|^2+|C|^2-|B|^2-|D|^2-1",
        defect,
        1e-12,
    ));

    let spectra = max_of_vec(exec.map(&omegas, |&w| {
        let g = gamma_fn(cavity, gain, w)?;
        let u = upsilon_fn(cavity, gain, w)?;
        let ga = gamma_assembled(cavity, gain, w)?;
        let ua = upsilon_assembled(cavity, gain, w)?;
        let rel = |closed: f64, z: num_complex::Complex64| {
            if closed == 0.0 {
                z.norm()
            } else {
                (z - closed).norm() / closed.abs()
            }
        };
        Ok(rel(g, ga).max(rel(u, ua)))
    }))?;
    checks.push(Check::new(
        "Gamma/Upsilon closed form vs assembly (relative)",
        spectra,
        1e-12,
    ));

    let three_fsr = omega_grid(cavity, 3.0, FREQ_POINTS);
    let uncertainty = max_of_vec(exec.map(&three_fsr, |&w| {
        let lo = squeezing_spectrum(cavity, gain, w, 0.0)?;
        let hi = squeezing_spectrum(cavity, gain, w, std::f64::consts::PI)?;
        Ok((1.0 - lo * hi).max(0.0))
    }))?;
    checks.push(Check::new(
        "uncertainty product deficit 1 - S(0) S(pi)",
        uncertainty,
        1e-12,
    ));

    if cavity.r1() > 0.0 {
        let pole = PoleParams::new(cavity, gain)?;
        let quad = f_quadrature_series(cavity, gain, 50)?;
        let f0 = quad[0];
        let fk = max_of(
            quad.iter()
                .enumerate()
                .map(|(k, v)| Ok((v - f_closed(&pole, k)?).abs() / f0)),
        );
        checks.push(Check::new(
            "F(k) closed form vs quadrature, k <= 50 (relative to F(0))",
            fk?,
            1e-9,
        ));
    }

    let iter = steady_state(cavity, gain, 1e-13)?;
    let closed = steady_state_closed(cavity, gain)?;
    let scale = closed.n.max(1e-300);
    let ss = ((iter.n - closed.n).abs().max((iter.m - closed.m).abs())) / scale;
    checks.push(Check::new(
        "moment fixed point: iteration vs closed form (relative)",
        ss,
        1e-9,
    ));

    if gain.r() > 0.0 {
        let comb = g2_comb(cavity, gain, KMax::Fixed(30))?;
        let env = comb.envelope()?;
        let moments = g2_from_moments(&two_time_output_correlators(cavity, gain, 30)?)?;
        let dev = env
            .iter()
            .zip(&moments.envelope)
            .map(|(a, b)| (a.value - b).abs())
            .fold(0.0, f64::max);
        checks.push(Check::new(
            "comb vs moment oracle, normalized, k <= 30",
            dev,
            1e-8,
        ));

        let sm = SingleModeParams::from_cavity(cavity, gain)?;
        let span = 20.0 / (sm.gamma1 + sm.gamma2);
        let ts: Vec<f64> = (0..=50).map(|i| span * i as f64 / 50.0).collect();
        let dual = max_of_vec(exec.map(&ts, |&t| {
            let closed = g2_single(&sm, t);
            Ok((g2_single_assembled(&sm, t)? - closed).abs() / closed)
        }))?;
        checks.push(Check::new(
            "single-mode G2: Bogoliubov assembly vs closed form (relative)",
            dual,
            1e-9,
        ));
    }

    Ok(Report { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_point_passes() {
        let c = CavityParams::normalized(0.9, 0.9).unwrap();
        let g = GainSetting::fraction_of_threshold(&c, 0.5).unwrap();
        let report = run(&c, &g, Execution::default()).unwrap();
        assert_eq!(report.checks.len(), 7);
        for c in &report.checks {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn zero_gain_skips_comb_checks() {
        let c = CavityParams::normalized(0.9, 0.9).unwrap();
        let g = GainSetting::absolute(&c, 0.0).unwrap();
        let report = run(&c, &g, Execution::Sequential).unwrap();
        assert!(report.passed());
        assert_eq!(report.checks.len(), 5);
    }
}
