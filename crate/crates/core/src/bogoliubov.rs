//! Frequency-domain Bogoliubov map of the cavity output:
//!
//! `a_out(w) = A(w) a_in(w) + B(w) a_in^+(-w) + C(w) b_in(w) + D(w) b_in^+(-w)`
//!
//! with `z = e^{-i w tau}`, `q = r1 r2` and
//!
//! ```text
//! d(w) = 1 / ([z - q cosh r]^2 - [q sinh r]^2)
//! A = d t1^2 r2 (z cosh r - q) - r1     B = d sinh r t1^2 r2 z
//! C = d t2 t1   (z cosh r - q)          D = d sinh r t2 t1 z
//! ```
//!
//! Near threshold `|d|` grows like `1 / (r_th - r)` and the four coefficients become
//! large while `|A|^2 + |C|^2 - |B|^2 - |D|^2` stays exactly one. In `f64` that
//! identity then only holds to `eps * |A|^2`; [`coeffs_extended`] evaluates the same
//! algebra in double-double precision for callers that need it tighter.

use num_complex::{Complex, Complex64};
use serde::Serialize;

use crate::error::Result;
use crate::params::{CavityParams, GainSetting};
use crate::scalar::{cosh_sinh, unit_phase, Extended, Real};

/// `A, B, C, D` at one angular frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BogoliubovCoeffs<T = f64> {
    pub omega: f64,
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
    pub d: Complex<T>,
}

impl<T: Real> BogoliubovCoeffs<T> {
    /// `|A|^2 + |C|^2 - |B|^2 - |D|^2 - 1`; zero for a commutator-preserving map.
    pub fn unitarity_defect(&self) -> T {
        (self.a.norm_sqr() - self.b.norm_sqr()) + (self.c.norm_sqr() - self.d.norm_sqr()) - T::one()
    }

    /// Largest squared coefficient magnitude; the scale of the defect's rounding error.
    pub fn magnitude(&self) -> T {
        self.a
            .norm_sqr()
            .max(self.b.norm_sqr())
            .max(self.c.norm_sqr())
            .max(self.d.norm_sqr())
    }

    pub fn to_f64(&self) -> BogoliubovCoeffs<f64> {
        let cvt = |z: Complex<T>| Complex64::new(z.re.round_f64(), z.im.round_f64());
        BogoliubovCoeffs {
            omega: self.omega,
            a: cvt(self.a),
            b: cvt(self.b),
            c: cvt(self.c),
            d: cvt(self.d),
        }
    }
}

struct Terms<T> {
    den: Complex<T>,
    coeffs: BogoliubovCoeffs<T>,
}

fn evaluate<T: Real>(cavity: &CavityParams, gain: &GainSetting, omega: f64) -> Result<Terms<T>> {
    gain.check(cavity)?;
    let one = T::one();
    let r1 = T::from_f64(cavity.r1());
    let r2 = T::from_f64(cavity.r2());
    let t1 = (one - r1 * r1).sqrt();
    let t2 = (one - r2 * r2).sqrt();
    let (ch, sh) = cosh_sinh(T::from_f64(gain.r()));
    let q = r1 * r2;

    let (cos, sin) = unit_phase(T::from_f64(omega * cavity.tau()));
    let z = Complex::new(cos, -sin);

    let shifted = z - Complex::from(q * ch);
    let qs = q * sh;
    let den = (shifted * shifted - Complex::from(qs * qs)).inv();

    let resonant = z * ch - Complex::from(q);
    let t11 = t1 * t1;
    let a = den * resonant * (t11 * r2) - Complex::from(r1);
    let b = den * z * (sh * t11 * r2);
    let c = den * resonant * (t2 * t1);
    let d = den * z * (sh * t2 * t1);

    Ok(Terms {
        den,
        coeffs: BogoliubovCoeffs { omega, a, b, c, d },
    })
}

/// Resonant denominator `d(w)`.
pub fn denominator(cavity: &CavityParams, gain: &GainSetting, omega: f64) -> Result<Complex64> {
    Ok(evaluate::<f64>(cavity, gain, omega)?.den)
}

/// `A(w)..D(w)` in `f64`.
pub fn coeffs(cavity: &CavityParams, gain: &GainSetting, omega: f64) -> Result<BogoliubovCoeffs> {
    Ok(evaluate::<f64>(cavity, gain, omega)?.coeffs)
}

/// `A(w)..D(w)` evaluated in double-double precision.
pub fn coeffs_extended(
    cavity: &CavityParams,
    gain: &GainSetting,
    omega: f64,
) -> Result<BogoliubovCoeffs<Extended>> {
    coeffs_in::<Extended>(cavity, gain, omega)
}

/// `A(w)..D(w)` in any [`Real`] scalar.
pub fn coeffs_in<T: Real>(
    cavity: &CavityParams,
    gain: &GainSetting,
    omega: f64,
) -> Result<BogoliubovCoeffs<T>> {
    Ok(evaluate::<T>(cavity, gain, omega)?.coeffs)
}

/// `|d(0)|`, the resonant enhancement. Relative precision of `f64` results built from
/// the coefficients degrades roughly in proportion to its square.
pub fn condition_hint(cavity: &CavityParams, gain: &GainSetting) -> Result<f64> {
    Ok(denominator(cavity, gain, 0.0)?.norm())
}
