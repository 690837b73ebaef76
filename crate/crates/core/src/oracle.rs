//! Round-trip moment recursion for the intracavity field.
//!
//! Per round trip the field passes the output coupler, the loss mirror and the
//! squeezer:
//!
//! `a(t + tau) = g a(t) + h a^+(t) + p a_in(t) + s a_in^+(t) + u b_in(t) + v b_in^+(t)`
//!
//! with `g = r1 r2 cosh r`, `h = r1 r2 sinh r`, `p = r2 t1 cosh r`, `s = r2 t1 sinh r`,
//! `u = t2 cosh r`, `v = t2 sinh r`, every input slot fresh vacuum. The state is
//! Gaussian with zero mean, so `n = <a^+ a>` and `m = <a a>` (real in this phase
//! convention) describe it completely. The output is `a_out(t) = -r1 a_in(t) + t1 a(t)`;
//! since `a_in(t)` also feeds `a(t + tau)`, output correlations at lag `k >= 1` pick
//! up a cross term from that shared input slot.
//!
//! Nothing here touches the frequency-domain code.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{CavityParams, GainSetting};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct MomentState {
    /// `<a^+ a>`
    pub n: f64,
    /// `<a a>`
    pub m: f64,
}

impl MomentState {
    /// `m^2 <= n (n + 1)`, with a little room for rounding.
    pub fn is_physical(&self) -> bool {
        self.n >= 0.0 && self.m * self.m <= self.n * (self.n + 1.0) * (1.0 + 1e-12) + 1e-300
    }
}

/// Coefficients of one round trip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundTrip {
    pub g: f64,
    pub h: f64,
    pub p: f64,
    pub s: f64,
    pub u: f64,
    pub v: f64,
    t1: f64,
    r1: f64,
}

impl RoundTrip {
    pub fn new(cavity: &CavityParams, gain: &GainSetting) -> Result<Self> {
        gain.check(cavity)?;
        let (ch, sh) = (gain.r().cosh(), gain.r().sinh());
        let q = cavity.round_trip_reflectance();
        let rt = Self {
            g: q * ch,
            h: q * sh,
            p: cavity.r2() * cavity.t1() * ch,
            s: cavity.r2() * cavity.t1() * sh,
            u: cavity.t2() * ch,
            v: cavity.t2() * sh,
            t1: cavity.t1(),
            r1: cavity.r1(),
        };
        if rt.spectral_radius() >= 1.0 {
            return Err(Error::AboveThreshold {
                r: gain.r(),
                r_th: gain.r_th(),
            });
        }
        Ok(rt)
    }

    /// Largest eigenvalue of the linear part acting on `(n, m)`: `(g + h)^2`.
    pub fn spectral_radius(&self) -> f64 {
        (self.g + self.h).powi(2)
    }

    pub fn step(&self, st: MomentState) -> MomentState {
        let (g, h) = (self.g, self.h);
        let diag = g * g + h * h;
        MomentState {
            n: diag * st.n + 2.0 * g * h * st.m + h * h + self.s * self.s + self.v * self.v,
            m: diag * st.m + g * h * (2.0 * st.n + 1.0) + self.p * self.s + self.u * self.v,
        }
    }

    /// Fixed point of [`Self::step`] from the 2x2 linear system.
    pub fn fixed_point(&self) -> MomentState {
        let (g, h) = (self.g, self.h);
        let a = 1.0 - (g * g + h * h);
        let b = 2.0 * g * h;
        let cn = h * h + self.s * self.s + self.v * self.v;
        let cm = g * h + self.p * self.s + self.u * self.v;
        // (1 - s)^2 - 4 g^2 h^2 factored as (1 - (g+h)^2)(1 - (g-h)^2)
        let det = (1.0 - (g + h).powi(2)) * (1.0 - (g - h).powi(2));
        MomentState {
            n: (a * cn + b * cm) / det,
            m: (b * cn + a * cm) / det,
        }
    }
}

/// One application of the round-trip map.
pub fn roundtrip_moment_map(
    state: MomentState,
    cavity: &CavityParams,
    gain: &GainSetting,
) -> Result<MomentState> {
    Ok(RoundTrip::new(cavity, gain)?.step(state))
}

pub const MAX_ITERATIONS: usize = 10_000_000;

/// Steady state by iterating from vacuum until successive states differ by at most
/// `tol` relative to the state.
pub fn steady_state(cavity: &CavityParams, gain: &GainSetting, tol: f64) -> Result<MomentState> {
    if !(tol > 0.0) {
        return Err(Error::domain("tol", tol, "tolerance must be positive"));
    }
    let rt = RoundTrip::new(cavity, gain)?;
    let mut st = MomentState::default();
    for i in 0..MAX_ITERATIONS {
        let next = rt.step(st);
        let change = (next.n - st.n).abs().max((next.m - st.m).abs());
        st = next;
        if change <= tol * st.n.abs().max(st.m.abs()) {
            log::debug!("moment iteration converged after {} round trips", i + 1);
            return Ok(st);
        }
    }
    Err(Error::Convergence {
        routine: "round-trip moment iteration",
        iterations: MAX_ITERATIONS,
        achieved: (rt.step(st).n - st.n).abs(),
    })
}

/// Steady state from the closed-form fixed point.
pub fn steady_state_closed(cavity: &CavityParams, gain: &GainSetting) -> Result<MomentState> {
    Ok(RoundTrip::new(cavity, gain)?.fixed_point())
}

/// Output two-time correlators for lags `0..=k_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputCorrelators {
    /// `<a_out^+(t) a_out(t + k tau)>`
    pub normal: Vec<f64>,
    /// `<a_out(t) a_out(t + k tau)>`
    pub anomalous: Vec<f64>,
}

pub fn two_time_output_correlators(
    cavity: &CavityParams,
    gain: &GainSetting,
    k_max: usize,
) -> Result<OutputCorrelators> {
    let rt = RoundTrip::new(cavity, gain)?;
    let st = rt.fixed_point();
    let (t1, r1) = (rt.t1, rt.r1);
    let (up, down) = (rt.g + rt.h, rt.g - rt.h);

    let mut normal = Vec::with_capacity(k_max + 1);
    let mut anomalous = Vec::with_capacity(k_max + 1);
    normal.push(t1 * t1 * st.n);
    anomalous.push(t1 * t1 * st.m);

    // a(t + k tau) = alpha_k a(t) + beta_k a^+(t) + ...
    let (mut pu, mut pd) = (1.0, 1.0);
    for _ in 1..=k_max {
        let (alpha_prev, beta_prev) = (0.5 * (pu + pd), 0.5 * (pu - pd));
        pu *= up;
        pd *= down;
        let (alpha, beta) = (0.5 * (pu + pd), 0.5 * (pu - pd));
        // weight of a_in^+(t) in a(t + k tau)
        let cross = alpha_prev * rt.s + beta_prev * rt.p;
        normal.push(t1 * t1 * (alpha * st.n + beta * st.m));
        anomalous.push(t1 * t1 * (alpha * st.m + beta * (st.n + 1.0)) - r1 * t1 * cross);
    }
    Ok(OutputCorrelators { normal, anomalous })
}

/// `G2` peaks built from the correlators by Gaussian factorization, normalized to one
/// at zero lag.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentComb {
    /// `(|M_k|^2 + |N_k|^2 + N_0^2) / (|M_0|^2 + 2 N_0^2)`
    pub envelope: Vec<f64>,
    /// `N_0^2 / (|M_0|^2 + 2 N_0^2)`
    pub background_fraction: f64,
}

pub fn g2_from_moments(c: &OutputCorrelators) -> Result<MomentComb> {
    let flux = c.normal[0];
    let bg = flux * flux;
    let peak = |k: usize| c.anomalous[k].powi(2) + c.normal[k].powi(2);
    let p0 = peak(0) + bg;
    if !(p0 > 0.0) {
        return Err(Error::DegenerateComb);
    }
    Ok(MomentComb {
        envelope: (0..c.normal.len()).map(|k| (peak(k) + bg) / p0).collect(),
        background_fraction: bg / p0,
    })
}
