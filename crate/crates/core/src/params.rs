//! Cavity and gain parameters.
//!
//! All mirror coefficients are real. Each mirror is described by its amplitude
//! reflection `r_i`; the transmission is always derived as `sqrt(1 - r_i^2)` so
//! the pair cannot drift out of energy balance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Output coupler (mirror 1) and lumped-loss mirror (mirror 2) of a ring cavity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CavityParams {
    r1: f64,
    r2: f64,
    t1: f64,
    t2: f64,
    tau: f64,
}

impl CavityParams {
    /// Builds a cavity from amplitude reflections and the round-trip time.
    ///
    /// Requires `0 <= r1 < 1`, `0 < r2 <= 1` and `tau > 0`. `r1 = 0` is a valid
    /// single-pass configuration but has no finite threshold.
    pub fn new(r1: f64, r2: f64, tau: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&r1) {
            return Err(Error::domain(
                "r1",
                r1,
                "output coupler reflection must satisfy 0 <= r1 < 1",
            ));
        }
        if !(r2 > 0.0 && r2 <= 1.0) {
            return Err(Error::domain(
                "r2",
                r2,
                "loss mirror reflection must satisfy 0 < r2 <= 1",
            ));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::domain(
                "tau",
                tau,
                "round-trip time must be positive and finite",
            ));
        }
        Ok(Self {
            r1,
            r2,
            t1: (1.0 - r1 * r1).sqrt(),
            t2: (1.0 - r2 * r2).sqrt(),
            tau,
        })
    }

    /// Cavity with unit round-trip time.
    pub fn normalized(r1: f64, r2: f64) -> Result<Self> {
        Self::new(r1, r2, 1.0)
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn r2(&self) -> f64 {
        self.r2
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Round-trip amplitude survival `r1 * r2`.
    pub fn round_trip_reflectance(&self) -> f64 {
        self.r1 * self.r2
    }

    /// `-ln(r1 r2)`, the log round-trip amplitude loss. Equal to the threshold gain.
    pub fn log_loss(&self) -> f64 {
        -(self.r1.ln() + self.r2.ln())
    }

    /// Free spectral range in angular frequency, `2 pi / tau`.
    pub fn fsr(&self) -> f64 {
        std::f64::consts::TAU / self.tau
    }
}

/// Threshold single-pass squeezing amplitude `r_th = -ln(r1 r2)`.
///
/// Infinite when `r1 = 0` (no feedback, no threshold).
pub fn threshold(cavity: &CavityParams) -> f64 {
    cavity.log_loss()
}

/// Single-pass squeezing amplitude, validated against a cavity threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainSetting {
    r: f64,
    r_th: f64,
}

impl GainSetting {
    /// Gain from an absolute squeezing amplitude `r`; requires `0 <= r < r_th`.
    pub fn absolute(cavity: &CavityParams, r: f64) -> Result<Self> {
        let r_th = threshold(cavity);
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::domain(
                "r",
                r,
                "squeezing amplitude must be finite and non-negative",
            ));
        }
        if r >= r_th {
            return Err(Error::AboveThreshold { r, r_th });
        }
        Ok(Self { r, r_th })
    }

    /// Gain given as a fraction of the threshold amplitude; requires `0 <= frac < 1`.
    pub fn fraction_of_threshold(cavity: &CavityParams, frac: f64) -> Result<Self> {
        let r_th = threshold(cavity);
        if !(frac >= 0.0 && frac.is_finite()) {
            return Err(Error::domain(
                "gain_frac",
                frac,
                "threshold fraction must be finite and non-negative",
            ));
        }
        if !r_th.is_finite() {
            return Err(Error::domain(
                "r1",
                cavity.r1(),
                "threshold fraction needs r1 * r2 > 0",
            ));
        }
        if frac >= 1.0 {
            return Err(Error::AboveThreshold { r: frac * r_th, r_th });
        }
        Ok(Self { r: frac * r_th, r_th })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn r_th(&self) -> f64 {
        self.r_th
    }

    pub fn fraction(&self) -> f64 {
        self.r / self.r_th
    }

    /// Re-validates this gain against `cavity`, which may differ from the one it was built with.
    pub fn check(&self, cavity: &CavityParams) -> Result<()> {
        let r_th = threshold(cavity);
        if self.r >= r_th {
            return Err(Error::AboveThreshold { r: self.r, r_th });
        }
        Ok(())
    }
}

/// The two real pole parameters of `d(w) d(-w)`:
///
/// `x = (1 + q^2 e^{2r}) / (2 q e^r)`, `y = (1 + q^2 e^{-2r}) / (2 q e^{-r})`, `q = r1 r2`.
///
/// Writing `L = -ln q`, these are `x = cosh(L - r)` and `y = cosh(L + r)`, so
/// `1 < x <= y` below threshold and `x -> 1` as `r -> r_th`. The log forms are kept
/// alongside `x`, `y` because `x - 1` is badly conditioned near threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoleParams {
    x: f64,
    y: f64,
    log_loss: f64,
    r: f64,
}

impl PoleParams {
    pub fn new(cavity: &CavityParams, gain: &GainSetting) -> Result<Self> {
        gain.check(cavity)?;
        let q = cavity.round_trip_reflectance();
        if q <= 0.0 {
            return Err(Error::domain(
                "r1",
                cavity.r1(),
                "pole parameters need r1 * r2 > 0",
            ));
        }
        let r = gain.r();
        let x = (1.0 + q * q * (2.0 * r).exp()) / (2.0 * q * r.exp());
        let y = (1.0 + q * q * (-2.0 * r).exp()) / (2.0 * q * (-r).exp());
        Ok(Self {
            x,
            y,
            log_loss: cavity.log_loss(),
            r,
        })
    }

    /// Pole parameter that reaches 1 at threshold.
    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// `acosh(x) = L - r`, the gain-reduced log loss.
    pub fn lambda_x(&self) -> f64 {
        self.log_loss - self.r
    }

    /// `acosh(y) = L + r`.
    pub fn lambda_y(&self) -> f64 {
        self.log_loss + self.r
    }

    /// Per-round-trip decay ratio of the slow pole, `x - sqrt(x^2 - 1) = q e^r`.
    pub fn rho_x(&self) -> f64 {
        (-self.lambda_x()).exp()
    }

    /// Per-round-trip decay ratio of the fast pole, `q e^{-r}`.
    pub fn rho_y(&self) -> f64 {
        (-self.lambda_y()).exp()
    }

    pub fn log_loss(&self) -> f64 {
        self.log_loss
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn open_single_pass_cavity() {
        let c = CavityParams::new(0.0, 1.0, 1.0).unwrap();
        assert_eq!(c.t1(), 1.0);
        assert_eq!(c.t2(), 0.0);
        assert!(threshold(&c).is_infinite());
    }

    #[test]
    fn transmissions_from_reflections() {
        let c = CavityParams::new(0.9, 0.9, 1.0).unwrap();
        // sqrt(0.19)
        assert_relative_eq!(c.t1(), 0.435_889_894_354_067_36, max_relative = 1e-15);
        assert_eq!(c.t1(), c.t2());
        assert!((c.r1() * c.r1() + c.t1() * c.t1() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range_mirrors() {
        let err = CavityParams::new(1.0, 0.9, 1.0).unwrap_err();
        assert!(matches!(err, Error::Domain { param: "r1", .. }));
        assert!(matches!(
            CavityParams::new(0.5, 0.0, 1.0),
            Err(Error::Domain { param: "r2", .. })
        ));
        assert!(matches!(
            CavityParams::new(0.5, 0.5, 0.0),
            Err(Error::Domain { param: "tau", .. })
        ));
        assert!(CavityParams::new(-0.1, 0.5, 1.0).is_err());
        assert!(CavityParams::new(f64::NAN, 0.5, 1.0).is_err());
    }

    #[test]
    fn threshold_values() {
        let h = (-0.05f64).exp();
        let c = CavityParams::normalized(h, h).unwrap();
        assert_relative_eq!(threshold(&c), 0.1, max_relative = 1e-14);

        let c = CavityParams::normalized(0.9, 0.9).unwrap();
        assert_relative_eq!(threshold(&c), -(0.81f64.ln()), max_relative = 1e-15);
        assert_relative_eq!(threshold(&c), 2.0 * -(0.9f64.ln()), max_relative = 1e-15);

        let c = CavityParams::normalized(0.5, 1.0).unwrap();
        assert_relative_eq!(threshold(&c), std::f64::consts::LN_2, max_relative = 1e-15);
    }

    #[test]
    fn gain_conventions_agree() {
        let c = CavityParams::normalized(0.9, 0.9).unwrap();
        let a = GainSetting::fraction_of_threshold(&c, 0.01).unwrap();
        let b = GainSetting::absolute(&c, 0.01 * -(0.81f64.ln())).unwrap();
        assert_relative_eq!(a.r(), b.r(), max_relative = 1e-15);
        assert!(matches!(
            GainSetting::fraction_of_threshold(&c, 1.0),
            Err(Error::AboveThreshold { .. })
        ));
        assert!(matches!(
            GainSetting::absolute(&c, threshold(&c)),
            Err(Error::AboveThreshold { .. })
        ));
    }

    #[test]
    fn gain_recheck_against_other_cavity() {
        let lossy = CavityParams::normalized(0.5, 0.5).unwrap();
        let fine = CavityParams::normalized(0.99, 0.99).unwrap();
        let g = GainSetting::fraction_of_threshold(&lossy, 0.5).unwrap();
        assert!(g.check(&lossy).is_ok());
        assert!(g.check(&fine).is_err());
    }

    #[test]
    fn poles_at_zero_gain_coincide() {
        let c = CavityParams::normalized(0.7, 0.95).unwrap();
        let g = GainSetting::absolute(&c, 0.0).unwrap();
        let p = PoleParams::new(&c, &g).unwrap();
        let q = 0.7 * 0.95;
        assert_relative_eq!(p.x(), (1.0 + q * q) / (2.0 * q), max_relative = 1e-15);
        assert_eq!(p.x(), p.y());
    }

    #[test]
    fn poles_mid_gain() {
        let c = CavityParams::normalized(0.9, 0.9).unwrap();
        let g = GainSetting::fraction_of_threshold(&c, 0.5).unwrap();
        let p = PoleParams::new(&c, &g).unwrap();
        // 30-digit evaluation of the defining ratios at r = -ln(0.81)/2
        assert_relative_eq!(p.x(), 1.005_555_555_555_555_6, max_relative = 1e-14);
        assert_relative_eq!(p.y(), 1.050_371_056_241_426_6, max_relative = 1e-14);
        assert!(p.y() > p.x() && p.x() > 1.0);
        assert_relative_eq!(p.x(), p.lambda_x().cosh(), max_relative = 1e-14);
        assert_relative_eq!(p.y(), p.lambda_y().cosh(), max_relative = 1e-14);
    }

    #[test]
    fn poles_reject_threshold() {
        let c = CavityParams::normalized(0.9, 0.9).unwrap();
        let at = GainSetting {
            r: threshold(&c),
            r_th: threshold(&c),
        };
        assert!(matches!(
            PoleParams::new(&c, &at),
            Err(Error::AboveThreshold { .. })
        ));
        let open = CavityParams::normalized(0.0, 0.9).unwrap();
        let g = GainSetting::absolute(&open, 0.3).unwrap();
        assert!(matches!(PoleParams::new(&open, &g), Err(Error::Domain { .. })));
    }
}
