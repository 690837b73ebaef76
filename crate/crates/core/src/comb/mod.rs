//! Multimode `G2(T)` as a delta comb plus a constant background.
//!
//! Below threshold the normally ordered two-time intensity correlation of the output
//! is
//!
//! `G2(T) = sum_k w_k delta(T - k tau) + b`,
//!
//! with, per lag `k`,
//!
//! ```text
//! w_k = t1^4 sinh^2 r [(1+q^2) cosh r F(|k|) - q F(|k|+1) - q F(|k-1|)]^2
//!     + t1^4 sinh^4 r (1-q^2)^2 F(|k|)^2
//! b   = t1^4 sinh^4 r (1-q^2)^2 F(0)^2
//! ```
//!
//! The first line is the anomalous (pair) correlation, the second the normal
//! correlation; `b` is the product of the two mean fluxes. Weights and background
//! carry different units (a delta weight against a level), so they are kept apart
//! and only combined by [`CorrelationComb::envelope`] (ratios at the comb peaks) or
//! by [`CorrelationComb::render_lorentzian`].

pub mod fourier;
pub mod hypergeometric;

use serde::Serialize;

pub use fourier::{f_closed, f_quadrature, f_quadrature_series, FourierCoeffs};
pub use hypergeometric::f_hypergeometric;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::params::{CavityParams, GainSetting, PoleParams};

/// Lag truncation policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KMax {
    Fixed(usize),
    /// Smallest `k` with `w_k / w_0 < 1e-12`, capped at `cap`.
    Auto {
        cap: usize,
    },
}

impl Default for KMax {
    fn default() -> Self {
        KMax::Auto { cap: 10_000 }
    }
}

pub const AUTO_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationComb {
    /// `w_0..=w_kmax`; `w_{-k} = w_k`.
    pub weights: Vec<f64>,
    pub background: f64,
    pub tau: f64,
    pub gain_fraction: f64,
    pub cavity: CavityParams,
    pub gain: GainSetting,
}

/// Per-lag pair and flux amplitudes whose squares make up the comb.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagAmplitudes {
    /// `t1^2 sinh r [(1+q^2) cosh r F(k) - q F(k+1) - q F(|k-1|)]`
    pub pair: f64,
    /// `t1^2 sinh^2 r (1-q^2) F(k)`
    pub flux: f64,
}

struct Assembler {
    t11: f64,
    q: f64,
    sh: f64,
    ch: f64,
}

impl Assembler {
    fn new(cavity: &CavityParams, gain: &GainSetting) -> Self {
        Self {
            t11: cavity.t1() * cavity.t1(),
            q: cavity.round_trip_reflectance(),
            sh: gain.r().sinh(),
            ch: gain.r().cosh(),
        }
    }

    fn amplitudes(&self, f: &[f64], k: usize) -> LagAmplitudes {
        let prev = if k == 0 { f[1] } else { f[k - 1] };
        let q = self.q;
        LagAmplitudes {
            pair: self.t11 * self.sh * ((1.0 + q * q) * self.ch * f[k] - q * f[k + 1] - q * prev),
            flux: self.t11 * self.sh * self.sh * (1.0 - q * q) * f[k],
        }
    }
}

/// Per-lag amplitudes for `k = 0..=k_max`.
pub fn lag_amplitudes(cavity: &CavityParams, gain: &GainSetting, k_max: usize) -> Result<Vec<LagAmplitudes>> {
    let pole = PoleParams::new(cavity, gain)?;
    let f = FourierCoeffs::closed(&pole, k_max + 1)?;
    let asm = Assembler::new(cavity, gain);
    Ok((0..=k_max).map(|k| asm.amplitudes(&f.values, k)).collect())
}

/// Builds the comb weights and background.
pub fn g2_comb(cavity: &CavityParams, gain: &GainSetting, k_max: KMax) -> Result<CorrelationComb> {
    let pole = PoleParams::new(cavity, gain)?;
    let asm = Assembler::new(cavity, gain);
    let weight = |a: LagAmplitudes| a.pair * a.pair + a.flux * a.flux;

    let (weights, f0) = match k_max {
        KMax::Fixed(n) => {
            let f = FourierCoeffs::closed(&pole, n + 1)?;
            let w = (0..=n).map(|k| weight(asm.amplitudes(&f.values, k))).collect();
            (w, f.values[0])
        }
        KMax::Auto { cap } => {
            let mut f = vec![f_closed(&pole, 0)?, f_closed(&pole, 1)?];
            let mut w = Vec::new();
            for k in 0..=cap {
                f.push(f_closed(&pole, k + 2)?);
                let wk = weight(asm.amplitudes(&f, k));
                w.push(wk);
                if wk <= AUTO_CUTOFF * w[0] {
                    break;
                }
            }
            if w.len() > cap && w[cap] > AUTO_CUTOFF * w[0] {
                log::warn!("comb truncated at k = {cap} with w_k / w_0 = {:e}", w[cap] / w[0]);
            }
            (w, f[0])
        }
    };

    let flux0 = asm.t11 * asm.sh * asm.sh * (1.0 - asm.q * asm.q) * f0;
    Ok(CorrelationComb {
        weights,
        background: flux0 * flux0,
        tau: cavity.tau(),
        gain_fraction: gain.fraction(),
        cavity: *cavity,
        gain: *gain,
    })
}

/// One row of a lag table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopePoint {
    pub lag: usize,
    pub t: f64,
    pub value: f64,
}

impl CorrelationComb {
    pub fn k_max(&self) -> usize {
        self.weights.len() - 1
    }

    /// `w_{|k|}`.
    pub fn weight(&self, k: i64) -> f64 {
        self.weights
            .get(k.unsigned_abs() as usize)
            .copied()
            .unwrap_or(0.0)
    }

    fn peak0(&self) -> Result<f64> {
        let p = self.weights[0] + self.background;
        if p > 0.0 {
            Ok(p)
        } else {
            Err(Error::DegenerateComb)
        }
    }

    /// `(w_k + b) / (w_0 + b)` at `T = k tau`: the peak envelope normalized to one at `T = 0`.
    pub fn envelope(&self) -> Result<Vec<EnvelopePoint>> {
        let p0 = self.peak0()?;
        Ok(self
            .weights
            .iter()
            .enumerate()
            .map(|(k, w)| EnvelopePoint {
                lag: k,
                t: k as f64 * self.tau,
                value: (w + self.background) / p0,
            })
            .collect())
    }

    /// `w_k / w_0`.
    pub fn normalized_weights(&self) -> Result<Vec<f64>> {
        let w0 = self.weights[0];
        if !(w0 > 0.0) {
            return Err(Error::DegenerateComb);
        }
        Ok(self.weights.iter().map(|w| w / w0).collect())
    }

    /// `b / (w_0 + b)`, the level the normalized envelope settles to.
    pub fn background_fraction(&self) -> Result<f64> {
        Ok(self.background / self.peak0()?)
    }

    /// Plot trace with each delta replaced by a unit-area Lorentzian of full width
    /// `fwhm`, scaled by its weight, on top of the background.
    pub fn render_lorentzian(&self, fwhm: f64, t_grid: &[f64], exec: Execution) -> Result<Vec<f64>> {
        if !(fwhm > 0.0 && fwhm.is_finite()) {
            return Err(Error::domain("fwhm", fwhm, "peak width must be positive"));
        }
        if fwhm > 0.5 * self.tau {
            log::warn!(
                "fwhm {fwhm} exceeds half the round-trip time {}; peaks will merge",
                self.tau
            );
        }
        let hw = 0.5 * fwhm;
        let n = self.k_max() as i64;
        let tau = self.tau;
        Ok(exec.map(t_grid, |&t| {
            let peaks: f64 = (-n..=n)
                .map(|k| {
                    let dt = t - k as f64 * tau;
                    self.weight(k) * hw / (std::f64::consts::PI * (dt * dt + hw * hw))
                })
                .sum();
            peaks + self.background
        }))
    }
}

/// Normalized envelope, for the common case of a single call.
pub fn g2_envelope_normalized(comb: &CorrelationComb) -> Result<Vec<EnvelopePoint>> {
    comb.envelope()
}
